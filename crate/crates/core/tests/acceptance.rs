//! Runs every acceptance criterion and prints one verdict line per criterion.
//!
//! `ACCEPTANCE_SEED` overrides the default seed of 0; `ACCEPTANCE_ONLY=3,5`
//! restricts the run to the listed criteria.

use std::process::ExitCode;
use std::time::Instant;

use zpcp::acceptance::{run_criterion, AcceptanceConfig, CriterionReport, CRITERIA};

fn main() -> ExitCode {
    let mut cfg = AcceptanceConfig::default();
    if let Ok(seed) = std::env::var("ACCEPTANCE_SEED") {
        cfg.seed = seed.parse().expect("ACCEPTANCE_SEED must be an integer");
    }
    let selected: Vec<u8> = match std::env::var("ACCEPTANCE_ONLY") {
        Ok(list) => list.split(',').map(|s| s.trim().parse().expect("ACCEPTANCE_ONLY lists criterion numbers")).collect(),
        Err(_) => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let start = Instant::now();
    let reports: Vec<(CriterionReport, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&id| {
                let cfg = &cfg;
                scope.spawn(move || {
                    let t0 = Instant::now();
                    let r = run_criterion(id, cfg).unwrap_or_else(|e| panic!("criterion {id}: {e}"));
                    (r, t0.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });

    println!("acceptance suite, seed {}", cfg.seed);
    for (r, secs) in &reports {
        println!("{r} ({secs:.1}s)");
        if !r.passed {
            for d in &r.details {
                println!("    {d}");
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.0.passed).count();
    println!(
        "{} passed, {failed} failed in {:.1}s",
        reports.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
