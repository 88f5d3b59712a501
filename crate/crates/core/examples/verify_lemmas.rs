// The structural checks on small grids, then with a corrupted coefficient.

use std::sync::Arc;

use subpade::cli::quick_verify_config;
use subpade::pade::pade_coefficients;
use subpade::verify::{run_verify, run_verify_with};

pub fn run_example() -> subpade::Result<(bool, bool)> {
    let cfg = quick_verify_config();
    let report = run_verify(&cfg)?;
    for c in &report.checks {
        println!("{} {:<50} {:.3e} (limit {:.3e})", if c.passed { "ok  " } else { "FAIL" }, c.name, c.observed, c.limit);
    }

    let broken = run_verify_with(&cfg, &|n| {
        let pair = pade_coefficients(n);
        Arc::new(pair.with_perturbed_q(1, -0.1).expect("q_1 exists"))
    })?;
    let a = &broken.checks[0];
    println!("with q_1 scaled by 0.9: {} observed {:.4}", a.name, a.observed);
    Ok((report.passed(), broken.passed()))
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
