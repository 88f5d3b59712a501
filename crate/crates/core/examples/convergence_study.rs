// Convergence study on the bundled analytic instance, written as CSV.

use subpade::approximator::{convergence_study, study_csv, StudyRegime};
use subpade::instances::{analytic_instance, ANALYTIC_NU};

pub fn run_example() -> subpade::Result<f64> {
    let alpha = 1.0;
    let (gen, x) = analytic_instance(alpha)?;
    let m_nu = gen.sectoriality_constant(ANALYTIC_NU)?;
    let ns: Vec<usize> = (2..=20).collect();
    let study = convergence_study(&gen, &x, 1.0, &ns, &StudyRegime::Analytic { alpha, m_nu })?;
    print!("{}", study_csv(&study));
    println!(
        "fitted slope {:.3} over n = {}..{}",
        study.fitted_slope, study.slope_window.0, study.slope_window.1
    );
    Ok(study.fitted_slope)
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
