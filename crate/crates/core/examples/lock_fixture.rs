//! Writes the perturbation regression fixture.
//!
//! Usage: `cargo run --release -p qc-core --example lock_fixture -- <path>`

use qc_core::cli::{run_suite, PerturbationSpec, RunConfig, Suite};

const SEED: u64 = 11;

fn main() {
    let path = std::env::args().nth(1).expect("output path");
    let mut cfg = RunConfig::new(Suite::Perturb);
    cfg.seed = SEED;
    cfg.points = 64;
    cfg.perturbation = Some(PerturbationSpec::random(SEED, 2, 1e-2));
    let report = run_suite(&cfg).expect("perturb suite runs");
    let hits = report.points.iter().filter(|r| r.pass).count();
    let fixture = serde_json::json!({
        "description": "Seeded quadratic perturbation of the canonical triple. \
                        The locked block holds the residual statistics of the first run.",
        "config": "@CONFIG@",
        "locked": {
            "max": report.aggregate.max,
            "mean": report.aggregate.mean,
            "detected": hits,
        },
        "relative_tolerance": 1e-9,
    });
    // Config on one line; the perturbation basis is long.
    let text = serde_json::to_string_pretty(&fixture)
        .unwrap()
        .replace("\"@CONFIG@\"", &serde_json::to_string(&cfg).unwrap());
    std::fs::write(&path, text + "\n").expect("write fixture");
    println!("{hits}/64 detected, max {:?}, mean {:?}", report.aggregate.max, report.aggregate.mean);
}
