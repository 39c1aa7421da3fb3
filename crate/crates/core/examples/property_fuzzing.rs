//! Deterministic seeded property suite: generates random complexes
//! and maps, then cross-checks every decision procedure against the
//! others. Identical seeds give byte-identical reports.

use kbweights::suite::{run_property_suite, FuzzConfig};

fn main() {
    let cfg = FuzzConfig { seed: 7, trials: 12, ..FuzzConfig::default() };
    let report = run_property_suite(&cfg);
    print!("{}", report);
    assert!(report.passed());
}
