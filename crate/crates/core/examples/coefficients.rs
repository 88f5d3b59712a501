// Exact coefficients of the subdiagonal Padé pair and values of `r_n`.

use subpade::pade::{eval_rn, pade_coefficients};
use subpade::C64;

pub fn run_example() -> subpade::Result<f64> {
    for n in 0..=3 {
        let pair = pade_coefficients(n);
        let p: Vec<String> = pair.p().coeffs().iter().map(|c| c.to_string()).collect();
        let q: Vec<String> = pair.q().coeffs().iter().map(|c| c.to_string()).collect();
        println!("n = {n}");
        println!("  P: {}", p.join(", "));
        println!("  Q: {}", q.join(", "));
    }

    // r_1(-1) = (2/3)/(11/6) = 4/11
    let r = eval_rn(1, C64::new(-1.0, 0.0))?;
    println!("r_1(-1) = {} (4/11 = {})", r.re, 4.0 / 11.0);

    let mut worst: f64 = 0.0;
    for n in [2, 5, 10] {
        let z = C64::new(0.3, -0.2);
        let err = (eval_rn(n, z)? - z.exp()).norm();
        println!("|r_{n}(z) - e^z| at z = {z}: {err:.3e}");
        worst = worst.max(err);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
