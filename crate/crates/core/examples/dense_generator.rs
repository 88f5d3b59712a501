// A dense matrix generator read from text, checked against a diagonal one.

use nalgebra::DMatrix;
use subpade::approximator::apply_rn;
use subpade::operators::{parse_matrix, write_matrix, DenseMatrixGenerator, DiagonalGenerator, Generator, Regime};
use subpade::partial_fractions::partial_fraction_form;
use subpade::C64;

pub fn run_example() -> subpade::Result<f64> {
    // A = U diag(1, 2+3i, 0.5i) U^*, U a Householder reflection
    let v = [C64::new(1.0, 0.0), C64::new(0.5, -0.5), C64::new(0.0, 1.0)];
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let u = DMatrix::from_fn(3, 3, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        C64::new(delta, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
    });
    let eig = vec![C64::new(1.0, 0.0), C64::new(2.0, 3.0), C64::new(0.0, 0.5)];
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.clone()));
    let a = &u * d * u.adjoint();

    let text = write_matrix(&a);
    println!("{text}");
    let dense = DenseMatrixGenerator::new(parse_matrix(&text)?)?.with_regime(Regime::UniformlyBounded { m: 1.0 })?;
    let diag = DiagonalGenerator::new(eig)?;
    println!("computed spectrum: {:?}", dense.spectrum());

    let x = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let ux: Vec<C64> = (u.adjoint() * nalgebra::DVector::from_vec(x.clone())).iter().copied().collect();

    let pf = partial_fraction_form(10)?;
    let dense_y = apply_rn(&pf, 2.0, &dense, &x)?;
    let diag_y = apply_rn(&pf, 2.0, &diag, &ux)?;
    let back: Vec<C64> = (&u * nalgebra::DVector::from_vec(diag_y)).iter().copied().collect();
    let gap = dense_y.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("dense vs diagonal r_10(-2A)x: max difference {gap:.2e}");

    let oracle = dense.exp_oracle(2.0, &x)?;
    let err = dense_y.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("error against the Taylor oracle: {err:.2e}");
    println!("cached factorizations: {:?}", dense.cached_factorizations());
    Ok(gap)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
