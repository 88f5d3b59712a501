// `r_n(-tA)x` for a diagonal contraction generator, compared with `e^{-tA}x`.

use subpade::approximator::{apply_rn, approximation_error, bound_uniform, norm_a_alpha};
use subpade::instances::random_contraction;
use subpade::operators::Generator;
use subpade::partial_fractions::partial_fraction_form;

pub fn run_example() -> subpade::Result<f64> {
    let (gen, x) = random_contraction(3, 8)?;
    println!("spectrum of A: {:?}", gen.eigenvalues());

    let t = 1.0;
    let alpha = 1.0;
    let nax = norm_a_alpha(&gen, alpha, &x)?;
    let mut last = f64::INFINITY;
    for n in [2, 4, 8, 16, 32] {
        let pf = partial_fraction_form(n)?;
        let err = approximation_error(&pf, t, &gen, &x)?;
        let bound = bound_uniform(alpha, 1.0, t, n, nax)?;
        println!("n = {n:2}: error {err:.3e}, bound {bound:.3e}");
        last = err;
    }

    let pf = partial_fraction_form(8)?;
    let y = apply_rn(&pf, 0.0, &gen, &x)?;
    assert_eq!(y, x);
    let exact = gen.exp_oracle(t, &x)?;
    println!("first component: approx {:?}, exact {:?}", apply_rn(&pf, t, &gen, &x)?[0], exact[0]);
    Ok(last)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
