// The constant `C(α)` and the convergence bounds for each regime.

use subpade::approximator::{bound_analytic, bound_exp_stable, bound_hinfty, bound_uniform};
use subpade::bounds::{c_alpha, l2_bounds};

pub fn run_example() -> subpade::Result<Vec<f64>> {
    let mut cs = vec![];
    for a in [1.0, 2.0, 3.0, 4.0] {
        let c = c_alpha(a)?;
        println!("C({a}) = {c:.6}");
        cs.push(c);
    }
    let b = l2_bounds(10, 1.0)?;
    println!("n = 10, alpha = 1: L2 bound {:.4e}, derivative bound {:.4e}", b.l2_bound, b.l2_deriv_bound);

    for n in [4, 16, 64] {
        println!(
            "n = {n:2}: uniform {:.3e}  analytic {:.3e}  exp-stable {:.3e}  H-inf {:.3e}",
            bound_uniform(1.0, 1.0, 1.0, n, 1.0)?,
            bound_analytic(1.0, 1.0, 1.0, n, 1.0)?,
            bound_exp_stable(1.0, 1.0, 1.0, 1.0, n, 1.0)?,
            bound_hinfty(1.0, 1.0, 1.0, n, 1.0)?,
        );
    }
    Ok(cs)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
