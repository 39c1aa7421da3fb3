//! Seeded property suite: cross-checks every decision procedure
//! against the others on randomly generated instances. Reports are
//! deterministic for a fixed (seed, config) pair; trials are keyed by
//! index so they may run concurrently without changing the report.

use crate::complex::{cone, find_ranged_witness, ChainMap, Complex};
use crate::counterexamples::total_homology_dimension;
use crate::detectors::weight_filtration;
use crate::doc::MapDocument;
use crate::gen::{
    random_chain_map, random_complex, random_window, random_without_weights_instance, rng_for,
    GenBounds,
};
use crate::linalg::Coefficients;
use crate::spherical::{
    homology_skeleton_test, homology_without_weights, kills_weight_homology, qz_dual_test,
};
use crate::weights::{
    avoiding_decomposition, kills_weights, normal_form, sharp_weight_interval, sub_above,
    without_weights, Method, Window,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Configuration of a fuzz run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_rank: usize,
    pub degree_span: i64,
    pub max_entry: i64,
    pub coefficients: Vec<Coefficients>,
}

impl Default for FuzzConfig {
    fn default() -> FuzzConfig {
        FuzzConfig {
            seed: 1,
            trials: 100,
            max_rank: 4,
            degree_span: 7,
            max_entry: 3,
            coefficients: vec![
                Coefficients::Integers,
                Coefficients::PrimeField(2),
                Coefficients::PrimeField(3),
                Coefficients::Rationals,
            ],
        }
    }
}

impl FuzzConfig {
    pub fn bounds(&self) -> GenBounds {
        GenBounds {
            max_rank: self.max_rank,
            degree_span: self.degree_span,
            max_entry: self.max_entry,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_rank == 0 || self.degree_span <= 0 || self.max_entry <= 0 {
            return Err("fuzz bounds must be positive".into());
        }
        if self.coefficients.is_empty() {
            return Err("at least one coefficient ring required".into());
        }
        for c in &self.coefficients {
            c.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub trials: u64,
    pub failures: Vec<Failure>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property suite: seed {} trials {}", self.seed, self.trials)?;
        for p in &self.properties {
            writeln!(
                f,
                "  {:<24} {:>6} trials  {:>4} failures  [{}]",
                p.name,
                p.trials,
                p.failures.len(),
                if p.passed() { "pass" } else { "FAIL" }
            )?;
            for fail in &p.failures {
                writeln!(f, "    trial {}: {}", fail.trial, fail.detail)?;
            }
        }
        writeln!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Names of the checked properties, in report order.
pub const PROPERTIES: &[&str] = &[
    "method-agreement",
    "avoiding-soundness",
    "normal-form-roundtrip",
    "criteria-agreement",
    "structural-laws",
    "detector-filtration",
    "qz-duality",
    "parity-additivity",
];

/// One trial of a named property. `Err` carries a human-readable
/// failure with a minimized instance dump where applicable.
pub fn run_trial(name: &str, cfg: &FuzzConfig, trial: u64) -> Result<(), String> {
    let salt = PROPERTIES
        .iter()
        .position(|p| *p == name)
        .ok_or_else(|| format!("unknown property {:?}", name))? as u64;
    let mut rng = rng_for(cfg.seed.wrapping_add(salt.wrapping_mul(0x5851_F42D_4C95_7F2D)), trial);
    let bounds = cfg.bounds();
    match name {
        "method-agreement" => check_method_agreement(&mut rng, cfg, &bounds, trial),
        "avoiding-soundness" => check_avoiding_soundness(&mut rng, cfg, &bounds),
        "normal-form-roundtrip" => check_normal_form_roundtrip(&mut rng, &bounds),
        "criteria-agreement" => check_criteria_agreement(&mut rng, &bounds),
        "structural-laws" => check_structural_laws(&mut rng, cfg, &bounds),
        "detector-filtration" => check_detector_filtration(&mut rng, &bounds),
        "qz-duality" => check_qz_duality(&mut rng, &bounds),
        "parity-additivity" => check_parity_additivity(&mut rng, &bounds),
        _ => unreachable!(),
    }
}

/// Run the full suite. The `KBWEIGHTS_JOBS` environment variable sets
/// the number of worker threads (default 1, sequential).
pub fn run_property_suite(cfg: &FuzzConfig) -> SuiteReport {
    cfg.validate().expect("invalid fuzz config");
    let jobs: usize = std::env::var("KBWEIGHTS_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&j| j > 0)
        .unwrap_or(1);
    let mut properties = vec![];
    for &name in PROPERTIES {
        let mut failures: Vec<Failure> = if jobs <= 1 {
            (0..cfg.trials)
                .filter_map(|t| run_trial(name, cfg, t).err().map(|detail| Failure { trial: t, detail }))
                .collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs)
                    .map(|w| {
                        let cfg = cfg.clone();
                        scope.spawn(move || {
                            (w as u64..cfg.trials)
                                .step_by(jobs)
                                .filter_map(|t| {
                                    run_trial(name, &cfg, t)
                                        .err()
                                        .map(|detail| Failure { trial: t, detail })
                                })
                                .collect::<Vec<Failure>>()
                        })
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
            })
        };
        failures.sort_by_key(|f| f.trial);
        properties.push(PropertyResult { name: name.to_string(), trials: cfg.trials, failures });
    }
    SuiteReport { seed: cfg.seed, trials: cfg.trials, properties }
}

fn coeff_for_trial(cfg: &FuzzConfig, trial: u64) -> Coefficients {
    cfg.coefficients[(trial as usize) % cfg.coefficients.len()]
}

fn dump_instance(g: &ChainMap, win: Window) -> String {
    let doc = MapDocument::from_map(g);
    format!(
        "window {} instance {}",
        win,
        serde_json::to_string(&doc).unwrap_or_else(|e| format!("<serialize error: {}>", e))
    )
}

fn all_method_verdicts(g: &ChainMap, win: Window) -> Vec<(Method, bool)> {
    [Method::Direct, Method::WeakHomotopy, Method::Homology, Method::Detector]
        .iter()
        .map(|&m| (m, kills_weights(g, win, m).verdict))
        .collect()
}

fn methods_disagree(g: &ChainMap, win: Window) -> bool {
    let v = all_method_verdicts(g, win);
    v.iter().any(|(_, b)| *b != v[0].1)
}

/// Greedy shrink of a disagreement witness: try the zero map, then
/// zero single entries of g as long as the chain-map law and the
/// disagreement survive.
fn shrink_disagreement(g: &ChainMap, win: Window) -> ChainMap {
    let zero = ChainMap::zero(&g.source, &g.target);
    if methods_disagree(&zero, win) {
        return zero;
    }
    let mut best = g.clone();
    let mut changed = true;
    while changed {
        changed = false;
        let comps = best.components().clone();
        'outer: for (&i, m) in &comps {
            for r in 0..m.rows {
                for c in 0..m.cols {
                    if m.get(r, c).numer() == &num_bigint::BigInt::from(0) {
                        continue;
                    }
                    let mut cand_comps = comps.clone();
                    let mut cm = m.clone();
                    cm.set(r, c, num_rational::BigRational::from(num_bigint::BigInt::from(0)));
                    cand_comps.insert(i, cm);
                    if let Ok(cand) = ChainMap::new(best.source.clone(), best.target.clone(), cand_comps)
                    {
                        if methods_disagree(&cand, win) {
                            best = cand;
                            changed = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    best
}

fn check_method_agreement(
    rng: &mut ChaCha8Rng,
    cfg: &FuzzConfig,
    bounds: &GenBounds,
    trial: u64,
) -> Result<(), String> {
    let coeff = coeff_for_trial(cfg, trial);
    let m = random_complex(rng, coeff, bounds);
    let n = random_complex(rng, coeff, bounds);
    let g = random_chain_map(rng, &m, &n, bounds);
    let win = random_window(rng, 3);
    let verdicts = all_method_verdicts(&g, win);
    if verdicts.iter().any(|(_, b)| *b != verdicts[0].1) {
        let small = shrink_disagreement(&g, win);
        let detail: Vec<String> = all_method_verdicts(&small, win)
            .iter()
            .map(|(m, b)| format!("{}={}", m, b))
            .collect();
        return Err(format!(
            "methods disagree ({}); minimized {}",
            detail.join(" "),
            dump_instance(&small, win)
        ));
    }
    Ok(())
}

fn check_avoiding_soundness(
    rng: &mut ChaCha8Rng,
    cfg: &FuzzConfig,
    bounds: &GenBounds,
) -> Result<(), String> {
    let coeff = cfg.coefficients[rng.gen_range(0..cfg.coefficients.len())];
    let win = random_window(rng, 3);
    let m = random_without_weights_instance(rng, coeff, win, bounds);
    if !without_weights(&m, win).verdict {
        return Err(format!(
            "constructed instance fails without_weights for window {}",
            win
        ));
    }
    // the constructor re-verifies supports and the cone equivalence,
    // and panics on any certificate failure
    let dec = avoiding_decomposition(&m, win)
        .map_err(|e| format!("avoiding decomposition refused a valid instance: {}", e))?;
    // component homology must match the normal-form prediction
    let nf = normal_form(&m);
    for i in m.ranks().keys() {
        let hx = dec.low_avoiding.homology(*i);
        let hy = dec.high_avoiding.homology(*i);
        let hm = nf.canonical.homology(*i);
        let sum = hx.direct_sum(&hy);
        if sum != hm {
            return Err(format!(
                "component homology at degree {} is {} ⊕ {} but the object has {}",
                i, hx, hy, hm
            ));
        }
    }
    Ok(())
}

fn check_normal_form_roundtrip(rng: &mut ChaCha8Rng, bounds: &GenBounds) -> Result<(), String> {
    let b = GenBounds { max_rank: bounds.max_rank.max(5), ..*bounds };
    let m = random_complex(rng, Coefficients::Integers, &b);
    // verify() inside the constructor checks the mutual-inverse
    // witnesses and degreewise homology, panicking on failure
    let nf = normal_form(&m);
    for i in m.ranks().keys() {
        if nf.canonical.homology(*i) != m.homology(*i) {
            return Err(format!("homology mismatch at degree {}", i));
        }
    }
    Ok(())
}

fn check_criteria_agreement(rng: &mut ChaCha8Rng, bounds: &GenBounds) -> Result<(), String> {
    let m = random_complex(rng, Coefficients::Integers, bounds);
    let win = random_window(rng, 3);
    let hw = homology_without_weights(&m, win);
    let ww = without_weights(&m, win).verdict;
    if hw != ww {
        return Err(format!(
            "homology_without_weights={} but without_weights={} on window {}",
            hw, ww, win
        ));
    }
    // all three express "weights ≤ n": homology shape, nullhomotopy of
    // the identity below degree −n, and the sharp normal-form interval
    let n = win.n();
    let skel = homology_skeleton_test(&m, n);
    let id = ChainMap::identity(&m);
    let ranged = find_ranged_witness(&id, None, Some(-n - 1)).is_some();
    let support = sharp_weight_interval(&m).map_or(true, |(_, hi)| hi <= n);
    if skel != ranged || skel != support {
        return Err(format!(
            "skeleton={} ranged={} support={} at bound {}",
            skel, ranged, support, n
        ));
    }
    let target = random_complex(rng, Coefficients::Integers, bounds);
    let g = random_chain_map(rng, &m, &target, bounds);
    let kh = kills_weight_homology(&g, n);
    let kd = kills_weights(&g, Window::single(n), Method::Direct).verdict;
    if kh != kd {
        return Err(format!(
            "kills_weight_homology={} but direct single-weight verdict={}; {}",
            kh,
            kd,
            dump_instance(&g, Window::single(n))
        ));
    }
    Ok(())
}

/// A map guaranteed to kill all weights ≥ m: factor a random map
/// through the subcomplex w≤m−1 of the target.
fn guaranteed_killer(
    rng: &mut ChaCha8Rng,
    source: &Complex,
    target: &Complex,
    m: i64,
    bounds: &GenBounds,
) -> ChainMap {
    let (low, incl) = sub_above(target, 1 - m);
    let c = random_chain_map(rng, source, &low, bounds);
    incl.compose(&c)
}

fn check_structural_laws(
    rng: &mut ChaCha8Rng,
    cfg: &FuzzConfig,
    bounds: &GenBounds,
) -> Result<(), String> {
    let coeff = cfg.coefficients[rng.gen_range(0..cfg.coefficients.len())];
    let m = random_complex(rng, coeff, bounds);
    let n = random_complex(rng, coeff, bounds);
    let win = random_window(rng, 3);
    let g = guaranteed_killer(rng, &m, &n, win.m(), bounds);
    let weak = |g: &ChainMap, w: Window| kills_weights(g, w, Method::WeakHomotopy).verdict;
    if !weak(&g, win) {
        return Err(format!("truncation-factored map fails to kill {}", win));
    }
    // monotonicity: killing a window kills every subwindow
    for mm in win.m()..=win.n() {
        for nn in mm..=win.n() {
            let sub = Window::new(mm, nn).unwrap();
            if !weak(&g, sub) {
                return Err(format!("kills {} but not subwindow {}", win, sub));
            }
        }
    }
    // two-sided ideal: pre/post composition preserves killing
    let pre_src = random_complex(rng, coeff, bounds);
    let post_tgt = random_complex(rng, coeff, bounds);
    let pre = random_chain_map(rng, &pre_src, &m, bounds);
    let post = random_chain_map(rng, &n, &post_tgt, bounds);
    let sandwich = post.compose(&g.compose(&pre));
    if !weak(&sandwich, win) {
        return Err(format!("ideal closure fails: composite does not kill {}", win));
    }
    // composition law: kills[m',m−1] ∘ kills[m,n] ⊆ kills[m',n]
    let mprime = win.m() - rng.gen_range(1..=2);
    let p = random_complex(rng, coeff, bounds);
    let h = guaranteed_killer(rng, &n, &p, mprime, bounds);
    let head = Window::new(mprime, win.m() - 1).unwrap();
    if !weak(&h, head) {
        return Err(format!("second factor fails to kill {}", head));
    }
    let merged = Window::new(mprime, win.n()).unwrap();
    if !weak(&h.compose(&g), merged) {
        return Err(format!("composition law fails on window {}", merged));
    }
    // merging: killing [m,k] and [k+1,n] forces killing [m,n]
    if win.n() > win.m() {
        let k = rng.gen_range(win.m()..win.n());
        let a = Window::new(win.m(), k).unwrap();
        let b = Window::new(k + 1, win.n()).unwrap();
        let f = random_chain_map(rng, &m, &n, bounds);
        if weak(&f, a) && weak(&f, b) && !weak(&f, win) {
            return Err(format!(
                "merging fails: kills {} and {} but not {}; {}",
                a,
                b,
                win,
                dump_instance(&f, win)
            ));
        }
    }
    // self-duality: g kills [m,n] iff g^∨ kills [−n,−m]
    let f = random_chain_map(rng, &m, &n, bounds);
    let dual_win = Window::new(-win.n(), -win.m()).unwrap();
    if weak(&f, win) != weak(&f.dualize(), dual_win) {
        return Err(format!(
            "self-duality fails between {} and {}; {}",
            win,
            dual_win,
            dump_instance(&f, win)
        ));
    }
    Ok(())
}

fn check_detector_filtration(rng: &mut ChaCha8Rng, bounds: &GenBounds) -> Result<(), String> {
    let small = GenBounds { max_rank: bounds.max_rank.min(3), degree_span: bounds.degree_span.min(4), ..*bounds };
    let m = random_complex(rng, Coefficients::Integers, &small);
    let n = random_complex(rng, Coefficients::Integers, &small);
    let win = random_window(rng, 2);
    let g = guaranteed_killer(rng, &m, &n, win.m(), &small);
    if !kills_weights(&g, win, Method::WeakHomotopy).verdict {
        return Err(format!("killer construction failed for {}", win));
    }
    let i_obj = random_complex(rng, Coefficients::Integers, &small);
    // functoriality of the weight filtration: precomposition with a
    // map killing m..n carries W^m of the target into W^{n+1} of the source
    let wn = weight_filtration(&i_obj, win.m(), &n);
    let wm = weight_filtration(&i_obj, win.n() + 1, &m);
    for f in &wn.maps {
        let pulled = f.compose(&g);
        if !wm.contains(&pulled) {
            return Err(format!(
                "filtration violation: W^{} generator does not land in W^{} after pullback",
                win.m(),
                win.n() + 1
            ));
        }
    }
    Ok(())
}

fn check_qz_duality(rng: &mut ChaCha8Rng, bounds: &GenBounds) -> Result<(), String> {
    let m = random_complex(rng, Coefficients::Integers, bounds);
    let n = rng.gen_range(-4..=4);
    let direct = m
        .ranks()
        .keys()
        .filter(|&&j| j > -n)
        .all(|&j| m.homology(j).is_trivial());
    let dual = qz_dual_test(&m, n);
    if direct != dual {
        return Err(format!(
            "divisible-dual test {} disagrees with homology vanishing {} at bound {}",
            dual, direct, n
        ));
    }
    Ok(())
}

fn check_parity_additivity(rng: &mut ChaCha8Rng, bounds: &GenBounds) -> Result<(), String> {
    let coeff = if rng.gen_bool(0.5) { Coefficients::Rationals } else { Coefficients::PrimeField(2) };
    let m = random_complex(rng, coeff, bounds);
    let n = random_complex(rng, coeff, bounds);
    let f = random_chain_map(rng, &m, &n, bounds);
    let (c, _, _) = cone(&f);
    let lhs = total_homology_dimension(&c) % 2;
    let rhs = (total_homology_dimension(&m) + total_homology_dimension(&n)) % 2;
    if lhs != rhs {
        return Err(format!(
            "parity not additive over the cone: {} vs {}",
            lhs, rhs
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg(trials: u64) -> FuzzConfig {
        FuzzConfig { trials, ..FuzzConfig::default() }
    }

    #[test]
    fn suite_passes_smoke() {
        let report = run_property_suite(&quick_cfg(8));
        assert!(report.passed(), "{}", report);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = quick_cfg(5);
        let a = format!("{}", run_property_suite(&cfg));
        let b = format!("{}", run_property_suite(&cfg));
        assert_eq!(a, b);
    }

    #[test]
    fn mutation_is_detected() {
        // flipping one matrix entry after generation must break either
        // the complex law or the cross-method agreement
        let bounds = GenBounds::default();
        let m = (0..).find_map(|t| {
            let mut rng = rng_for(99, t);
            let c = crate::gen::random_complex(&mut rng, Coefficients::Integers, &bounds);
            // need two composable nonzero differentials for the square law to bite
            let composable = c
                .ranks()
                .keys()
                .any(|&i| !c.differential(i).is_zero() && !c.differential(i + 1).is_zero());
            composable.then_some(c)
        })
        .unwrap();
        let mut found = false;
        'outer: for &i in m.ranks().keys().collect::<Vec<_>>() {
            let d = m.differential(i);
            for r in 0..d.rows {
                for c in 0..d.cols {
                    let mut bad = d.clone();
                    let one = num_rational::BigRational::from(num_bigint::BigInt::from(1));
                    bad.set(r, c, bad.get(r, c) + one);
                    let mut diffs: std::collections::BTreeMap<i64, crate::linalg::Matrix> = m
                        .ranks()
                        .keys()
                        .map(|&j| (j, m.differential(j)))
                        .collect();
                    diffs.insert(i, bad);
                    if Complex::new(Coefficients::Integers, m.ranks().clone(), diffs).is_err() {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(found, "no single-entry mutation detected on {:?}", m.ranks());
    }
}
