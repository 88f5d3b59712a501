#[allow(dead_code)]
mod coefficients {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coefficients.rs"));
}

#[allow(dead_code)]
mod poles_and_residues {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/poles_and_residues.rs"));
}

#[allow(dead_code)]
mod approximate_orbit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/approximate_orbit.rs"));
}

#[allow(dead_code)]
mod dense_generator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dense_generator.rs"));
}

#[allow(dead_code)]
mod convergence_study {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/convergence_study.rs"));
}

#[allow(dead_code)]
mod bound_constants {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bound_constants.rs"));
}

#[allow(dead_code)]
mod verify_lemmas {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_lemmas.rs"));
}

#[allow(dead_code)]
mod laplace_inversion {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/laplace_inversion.rs"));
}

#[test]
fn coefficients_example_runs() {
    let worst = coefficients::run_example().expect("coefficients example should run");
    assert!(worst < 1e-6);
}

#[test]
fn poles_example_validates() {
    assert!(poles_and_residues::run_example().expect("poles example should run"));
}

#[test]
fn orbit_example_converges() {
    let last = approximate_orbit::run_example().expect("orbit example should run");
    assert!(last < 1e-3);
}

#[test]
fn dense_example_matches_diagonal() {
    let gap = dense_generator::run_example().expect("dense example should run");
    assert!(gap < 1e-12);
}

#[test]
fn study_example_fits_a_slope() {
    let slope = convergence_study::run_example().expect("study example should run");
    assert!(slope.is_finite() && slope < 0.0);
}

#[test]
fn bound_constants_example_runs() {
    let cs = bound_constants::run_example().expect("bound example should run");
    assert!(cs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn verify_example_detects_fault() {
    let (clean, broken) = verify_lemmas::run_example().expect("verify example should run");
    assert!(clean && !broken);
}

#[test]
fn laplace_example_runs() {
    let err = laplace_inversion::run_example().expect("laplace example should run");
    assert!(err < 1e-8);
}
