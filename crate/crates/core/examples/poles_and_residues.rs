// Partial-fraction form `r_n(z) = Σ b_j / (λ_j - z)` with its structural checks.

use subpade::partial_fractions::{eval_partial_fraction, partial_fraction_form};
use subpade::pade::eval_rn;
use subpade::C64;

pub fn run_example() -> subpade::Result<bool> {
    let pf = partial_fraction_form(1)?;
    println!("n = 1 poles: {:?}", pf.poles);
    println!("expected 2 ± i√2 = 2 ± {}i", 2f64.sqrt());

    let mut all_ok = true;
    for n in [4, 16, 40] {
        let pf = partial_fraction_form(n)?;
        let expected = if n % 2 == 0 { n as f64 + 1.0 } else { -(n as f64 + 1.0) };
        let z = C64::new(-2.0, 5.0);
        let gap = (eval_partial_fraction(&pf, z)? - eval_rn(n, z)?).norm();
        let biggest = pf.residues.iter().map(|b| b.norm()).fold(0.0, f64::max);
        println!(
            "n = {n:2}: flags {:?}, sum b_j = {:.12} (expected {expected}), max |b_j| = {biggest:.2e}, |pf - r_n| = {gap:.1e}",
            pf.validated, pf.residue_sum.re
        );
        all_ok &= pf.validated.all();
    }
    Ok(all_ok)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
