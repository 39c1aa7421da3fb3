//! Command-line interface: exact weight-window computations on bounded
//! complexes given as JSON documents.
//!
//! Exit codes: 0 = true / success, 1 = negative mathematical verdict,
//! 2 = input error, 3 = internal invariant violation (a certificate
//! failed re-verification).

use clap::{Parser, Subcommand};
use kbweights::complex::{ChainMap, Complex};
use kbweights::counterexamples::{build_even_dim_example, build_triple_example};
use kbweights::detectors::detect_weight_range;
use kbweights::doc::{ComplexDocument, MapDocument};
use kbweights::linalg::{Coefficients, GroupStructure};
use kbweights::spherical::em_cohomology;
use kbweights::suite::{run_property_suite, FuzzConfig};
use kbweights::weights::{
    avoiding_decomposition, kills_weights, normal_form, truncate, without_weights, Method, Window,
};
use num_bigint::BigInt;
use serde_json::json;
use std::io::Read;
use std::process::exit;

#[derive(Parser)]
#[command(name = "kbweights", version, about = "Weight windows on bounded complexes, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology groups of a complex, degree by degree
    Homology { file: String },
    /// Decompose a complex into elementary pieces up to homotopy
    NormalForm { file: String },
    /// Weight decomposition w≤l → M → w≥l+1 with a verified triangle
    Truncate {
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        file: String,
    },
    /// Does the chain map kill weights m..n?
    Kills {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "all")]
        method: String,
        file: String,
    },
    /// Is the complex without weights m..n?
    Without {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        file: String,
    },
    /// Split M ≅ X ⊕ Y with X of weights ≤ m−1 and Y of weights ≥ n+1
    Avoid {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        file: String,
    },
    /// Sharp weight interval via pure-homology detectors
    DetectWeights { file: String },
    /// Cohomology of the dual complex with coefficients in a group
    EmCohomology {
        /// coefficient group, e.g. "Z", "Z/4", "Z^2+Z/2", "0"
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        index: i64,
        file: String,
    },
    /// Re-verify the two built-in worked examples
    PaperExamples,
    /// Seeded property suite cross-checking all decision procedures
    Fuzz {
        #[arg(long, default_value = "1")]
        seed: u64,
        #[arg(long, default_value = "100")]
        trials: u64,
        #[arg(long, default_value = "4")]
        max_rank: usize,
        #[arg(long, default_value = "7")]
        degree_span: i64,
        #[arg(long, default_value = "3")]
        max_entry: i64,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("cannot read stdin: {}", e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))
    }
}

fn load_complex(path: &str) -> Result<Complex, String> {
    let text = read_input(path)?;
    let doc: ComplexDocument =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse complex document: {}", e))?;
    doc.to_complex()
}

fn load_map(path: &str) -> Result<ChainMap, String> {
    let text = read_input(path)?;
    let doc: MapDocument =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse map document: {}", e))?;
    doc.to_map()
}

/// "Z^2+Z/4+Z/2" style group descriptions; "0" and "1" are trivial.
fn parse_group(s: &str) -> Result<GroupStructure, String> {
    let s = s.trim();
    if s == "0" || s == "1" {
        return Ok(GroupStructure::trivial());
    }
    let mut rank = 0usize;
    let mut torsion: Vec<BigInt> = vec![];
    for part in s.split('+') {
        let part = part.trim();
        if part == "Z" {
            rank += 1;
        } else if let Some(r) = part.strip_prefix("Z^") {
            rank += r
                .parse::<usize>()
                .map_err(|_| format!("bad rank in {:?}", part))?;
        } else if let Some(t) = part.strip_prefix("Z/") {
            let t: BigInt = t.parse().map_err(|_| format!("bad torsion order in {:?}", part))?;
            if t < BigInt::from(2) {
                return Err(format!("torsion order must be ≥ 2 in {:?}", part));
            }
            torsion.push(t);
        } else {
            return Err(format!("cannot parse group summand {:?} (expected Z, Z^r or Z/t)", part));
        }
    }
    // normalize the torsion chain through a presentation
    let g = GroupStructure { rank, torsion };
    Ok(g.normalized())
}

fn result_block(value: serde_json::Value) {
    println!("RESULT {}", value);
}

fn parse_method(s: &str) -> Result<Option<Method>, String> {
    match s {
        "direct" => Ok(Some(Method::Direct)),
        "weakhtpy" => Ok(Some(Method::WeakHomotopy)),
        "homology" => Ok(Some(Method::Homology)),
        "detector" => Ok(Some(Method::Detector)),
        "all" => Ok(None),
        _ => Err(format!(
            "unknown method {:?} (expected direct|weakhtpy|homology|detector|all)",
            s
        )),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Homology { file } => {
            let c = load_complex(&file)?;
            let table = c.homology_table();
            println!("homology of a complex over {}", c.coeff);
            for (i, g) in &table {
                println!("  H^{} = {}", i, g);
            }
            let json_table: serde_json::Map<String, serde_json::Value> = table
                .iter()
                .map(|(i, g)| (i.to_string(), serde_json::to_value(g).unwrap()))
                .collect();
            result_block(json!({ "homology": json_table }));
            Ok(0)
        }
        Command::NormalForm { file } => {
            let c = load_complex(&file)?;
            let nf = normal_form(&c);
            println!("normal form: {} pieces", nf.pieces.len());
            for p in &nf.pieces {
                println!("  {}", p);
            }
            let doc = ComplexDocument::from_complex(&nf.canonical);
            result_block(json!({
                "pieces": serde_json::to_value(&nf.pieces).unwrap(),
                "canonical": serde_json::to_value(&doc).unwrap(),
            }));
            Ok(0)
        }
        Command::Truncate { l, file } => {
            let c = load_complex(&file)?;
            let dec = truncate(&c, l);
            let span = |c: &Complex| match c.support() {
                Some((a, b)) => format!("degrees {}..{}", a, b),
                None => "zero".to_string(),
            };
            println!("weight decomposition at l = {}", l);
            println!("  w<={} part: {}", l, span(&dec.low));
            println!("  w>={} part: {}", l + 1, span(&dec.high));
            result_block(json!({
                "low": serde_json::to_value(ComplexDocument::from_complex(&dec.low)).unwrap(),
                "high": serde_json::to_value(ComplexDocument::from_complex(&dec.high)).unwrap(),
            }));
            Ok(0)
        }
        Command::Kills { m, n, method, file } => {
            let g = load_map(&file)?;
            let win = Window::new(m, n)?;
            let chosen = parse_method(&method)?;
            let methods: Vec<Method> = match chosen {
                Some(me) => vec![me],
                None => vec![Method::Direct, Method::WeakHomotopy, Method::Homology, Method::Detector],
            };
            let mut verdict = None;
            let mut details = serde_json::Map::new();
            for me in methods {
                let v = kills_weights(&g, win, me);
                println!(
                    "kills weights {} by {}: {}{}",
                    win,
                    me,
                    v.verdict,
                    v.obstruction.as_deref().map(|o| format!(" ({})", o)).unwrap_or_default()
                );
                if let Some(prev) = verdict {
                    assert_eq!(
                        prev, v.verdict,
                        "internal invariant violation: kills-weights methods disagree"
                    );
                }
                verdict = Some(v.verdict);
                details.insert(me.to_string(), json!(v.verdict));
            }
            let verdict = verdict.unwrap();
            result_block(json!({ "verdict": verdict, "window": win.to_string(), "methods": details }));
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Without { m, n, file } => {
            let c = load_complex(&file)?;
            let win = Window::new(m, n)?;
            let report = without_weights(&c, win);
            println!("without weights {}: {}", win, report.verdict);
            result_block(json!({ "verdict": report.verdict, "window": win.to_string() }));
            Ok(if report.verdict { 0 } else { 1 })
        }
        Command::Avoid { m, n, file } => {
            let c = load_complex(&file)?;
            let win = Window::new(m, n)?;
            match avoiding_decomposition(&c, win) {
                Ok(dec) => {
                    let span = |c: &Complex| match c.support() {
                        Some((a, b)) => format!("degrees {}..{}", a, b),
                        None => "zero".to_string(),
                    };
                    println!("avoiding decomposition for window {}", win);
                    println!("  X (weights <= {}): {}", m - 1, span(&dec.low_avoiding));
                    println!("  Y (weights >= {}): {}", n + 1, span(&dec.high_avoiding));
                    result_block(json!({
                        "verdict": true,
                        "x": serde_json::to_value(ComplexDocument::from_complex(&dec.low_avoiding)).unwrap(),
                        "y": serde_json::to_value(ComplexDocument::from_complex(&dec.high_avoiding)).unwrap(),
                    }));
                    Ok(0)
                }
                Err(e) => {
                    println!("no avoiding decomposition: {}", e);
                    result_block(json!({ "verdict": false, "obstruction": e }));
                    Ok(1)
                }
            }
        }
        Command::DetectWeights { file } => {
            let c = load_complex(&file)?;
            match detect_weight_range(&c) {
                Some((lo, hi)) => {
                    println!("sharp weight interval [{},{}]", lo, hi);
                    result_block(json!({ "interval": [lo, hi] }));
                }
                None => {
                    println!("contractible: no weights");
                    result_block(json!({ "interval": null }));
                }
            }
            Ok(0)
        }
        Command::EmCohomology { group, index, file } => {
            let c = load_complex(&file)?;
            if c.coeff != Coefficients::Integers {
                return Err("coefficient duals are computed over the integers".into());
            }
            let g0 = parse_group(&group)?;
            let h = em_cohomology(&c, &g0, index);
            println!("dual cohomology with coefficients {} at index {}: {}", g0, index, h);
            result_block(json!({ "index": index, "group": serde_json::to_value(&h).unwrap() }));
            Ok(0)
        }
        Command::PaperExamples => {
            let (_, even) = build_even_dim_example();
            print!("{}", even);
            let (_, triple) = build_triple_example();
            print!("{}", triple);
            let ok = even.without_weight_zero
                && even.explicit_homotopy_identity_blocks
                && triple.weight_complex_vanishes
                && triple.splitting_excluded
                && triple.no_triangle_at_one;
            result_block(json!({ "verdict": ok }));
            Ok(if ok { 0 } else { 1 })
        }
        Command::Fuzz { seed, trials, max_rank, degree_span, max_entry } => {
            let cfg = FuzzConfig {
                seed,
                trials,
                max_rank,
                degree_span,
                max_entry,
                ..FuzzConfig::default()
            };
            cfg.validate()?;
            let report = run_property_suite(&cfg);
            print!("{}", report);
            let ok = report.passed();
            result_block(json!({
                "verdict": ok,
                "failures": report.properties.iter().map(|p| p.failures.len()).sum::<usize>(),
            }));
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => exit(code),
        Ok(Err(msg)) => {
            eprintln!("error: {}", msg);
            exit(2);
        }
        Err(_) => {
            // panics are reserved for certificate re-verification failures
            eprintln!("internal invariant violation: a certificate failed re-verification");
            exit(3);
        }
    }
}
