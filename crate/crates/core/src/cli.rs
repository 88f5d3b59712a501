//! Command-line front end: argument parsing, [`RunConfig`] and the six commands.
//!
//! Exit codes: `0` success, `1` validation failure, `2` usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::approximator::{apply_rn, convergence_study, study_csv, StudyRegime};
use crate::error::{Error, Result};
use crate::instances::{analytic_instance, contraction_instance, random_contraction, ANALYTIC_NU};
use crate::laplace::{inversion_error, Registry};
use crate::operators::{read_matrix, read_vector, write_vector, DenseMatrixGenerator, DiagonalGenerator, Generator, Regime};
use crate::pade::{pade_coefficients, PadePair};
use crate::partial_fractions::partial_fraction_form;
use crate::precision::C64;
use crate::verify::{run_verify_with, VerifyConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Where the generator of `approx` and `study` comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GeneratorSource {
    /// Dense matrix in the `complex-matrix` text format.
    Matrix { path: PathBuf },
    /// Diagonal generator with the given eigenvalues.
    Eigenvalues { values: Vec<[f64; 2]> },
    /// `analytic`, `contraction` or `random` (seeded).
    Instance { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Uniform,
    Analytic,
    ExpStable,
    HInfinity,
    GammaStableHilbert,
}

/// Regime and constants as given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub kind: RegimeKind,
    pub alpha: f64,
    pub m: f64,
    /// Computed from the spectrum when omitted and the generator is diagonal.
    pub m_nu: Option<f64>,
    pub nu: f64,
    pub omega: Option<f64>,
    pub c: f64,
    pub a: Option<f64>,
    pub c_user: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum CommandConfig {
    Coeffs {
        n: usize,
    },
    Poles {
        n: usize,
    },
    Approx {
        n: usize,
        t: Vec<f64>,
        generator: GeneratorSource,
        vector: Option<PathBuf>,
    },
    Study {
        n_min: usize,
        n_max: usize,
        t: f64,
        regime: RegimeSpec,
        generator: GeneratorSource,
        vector: Option<PathBuf>,
    },
    Verify {
        config: VerifyConfig,
        /// `(j, rel)`: multiply `q_j` by `1 + rel` in every pair that has it.
        perturb: Option<(usize, f64)>,
    },
    Laplace {
        pair: String,
        n_min: usize,
        n_max: usize,
        t: Vec<f64>,
    },
}

/// A fully parsed invocation. Serializes to JSON and back unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: CommandConfig,
    pub format: Option<OutputFormat>,
    pub seed: u64,
}

#[derive(Parser, Debug)]
#[command(name = "subpade", version, about = "Subdiagonal Padé approximation of C0-semigroups")]
pub struct Cli {
    #[command(subcommand)]
    command: Option<CliCommand>,

    /// Run the configuration stored in this JSON file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Print the parsed configuration as JSON instead of running it.
    #[arg(long, global = true)]
    emit_config: bool,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Seed for randomized instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct GeneratorArgs {
    /// Dense matrix file (`complex-matrix rows cols`).
    #[arg(long, conflicts_with_all = ["eigenvalues", "instance"])]
    matrix: Option<PathBuf>,
    /// Diagonal spectrum as whitespace-separated `re,im` pairs.
    #[arg(long, conflicts_with = "instance", allow_hyphen_values = true)]
    eigenvalues: Option<String>,
    /// Bundled instance: analytic, contraction or random.
    #[arg(long)]
    instance: Option<String>,
    /// Starting vector file (`complex-vector n`).
    #[arg(long)]
    vector: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Exact coefficients of P_n and Q_n.
    Coeffs {
        #[arg(long, short)]
        n: usize,
    },
    /// Poles, residues and validation flags of r_n as JSON.
    Poles {
        #[arg(long, short)]
        n: usize,
    },
    /// r_n(-tA)x for one or more times.
    Approx {
        #[arg(long, short)]
        n: usize,
        /// Comma-separated times.
        #[arg(long, short, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        generator: GeneratorArgs,
    },
    /// Errors and bounds over a range of n, with the fitted rate.
    Study {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, short, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value = "uniform")]
        regime: RegimeKind,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long)]
        m_nu: Option<f64>,
        #[arg(long, default_value_t = ANALYTIC_NU)]
        nu: f64,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        c_user: Option<f64>,
        #[command(flatten)]
        generator: GeneratorArgs,
    },
    /// Checks of the structural estimates for r_n.
    Verify {
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        axis_points: Option<usize>,
        #[arg(long)]
        l2_n_max: Option<usize>,
        /// Smaller grids throughout.
        #[arg(long)]
        quick: bool,
        /// `J:REL` multiplies q_J by 1 + REL.
        #[arg(long, allow_hyphen_values = true)]
        perturb_coefficient: Option<String>,
    },
    /// Inverts a built-in Laplace transform pair.
    Laplace {
        #[arg(long, default_value = "exp1")]
        pair: String,
        #[arg(long, short)]
        n: Option<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, short, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn parse_pairs(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split_whitespace()
        .map(|tok| {
            let (a, b) = tok.split_once(',').unwrap_or((tok, "0"));
            let re = a.parse().map_err(|_| usage(format!("bad eigenvalue '{tok}'")))?;
            let im = b.parse().map_err(|_| usage(format!("bad eigenvalue '{tok}'")))?;
            Ok([re, im])
        })
        .collect()
}

fn generator_source(g: &GeneratorArgs) -> Result<GeneratorSource> {
    match (&g.matrix, &g.eigenvalues, &g.instance) {
        (Some(path), _, _) => Ok(GeneratorSource::Matrix { path: path.clone() }),
        (_, Some(e), _) => Ok(GeneratorSource::Eigenvalues { values: parse_pairs(e)? }),
        (_, _, Some(name)) => Ok(GeneratorSource::Instance { name: name.clone() }),
        _ => Err(usage("one of --matrix, --eigenvalues or --instance is required")),
    }
}

fn parse_perturbation(s: &str) -> Result<(usize, f64)> {
    let (j, rel) = s
        .split_once(':')
        .ok_or_else(|| usage("--perturb-coefficient expects J:REL"))?;
    let j = j.parse().map_err(|_| usage(format!("bad coefficient index '{j}'")))?;
    let rel = rel.parse().map_err(|_| usage(format!("bad relative perturbation '{rel}'")))?;
    Ok((j, rel))
}

impl Cli {
    /// Resolves the arguments into a [`RunConfig`].
    pub fn into_config(self) -> Result<RunConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            return Ok(serde_json::from_str(&text)?);
        }
        let cmd = self.command.ok_or_else(|| usage("a subcommand or --config is required"))?;
        let command = match cmd {
            CliCommand::Coeffs { n } => CommandConfig::Coeffs { n },
            CliCommand::Poles { n } => CommandConfig::Poles { n },
            CliCommand::Approx { n, t, generator } => CommandConfig::Approx {
                n,
                t,
                vector: generator.vector.clone(),
                generator: generator_source(&generator)?,
            },
            CliCommand::Study {
                n_min,
                n_max,
                t,
                regime,
                alpha,
                m,
                m_nu,
                nu,
                omega,
                c,
                a,
                c_user,
                generator,
            } => CommandConfig::Study {
                n_min,
                n_max,
                t,
                regime: RegimeSpec {
                    kind: regime,
                    alpha,
                    m,
                    m_nu,
                    nu,
                    omega,
                    c,
                    a,
                    c_user,
                },
                vector: generator.vector.clone(),
                generator: generator_source(&generator)?,
            },
            CliCommand::Verify {
                n_max,
                axis_points,
                l2_n_max,
                quick,
                perturb_coefficient,
            } => {
                let mut config = if quick { quick_verify_config() } else { VerifyConfig::default() };
                config.seed = self.seed;
                if let Some(v) = n_max {
                    config.n_max = v;
                }
                if let Some(v) = axis_points {
                    config.axis_points = v;
                }
                if let Some(v) = l2_n_max {
                    config.l2_n_max = v;
                }
                let perturb = perturb_coefficient.as_deref().map(parse_perturbation).transpose()?;
                CommandConfig::Verify { config, perturb }
            }
            CliCommand::Laplace {
                pair,
                n,
                n_min,
                n_max,
                t,
            } => {
                let (lo, hi) = match (n, n_min, n_max) {
                    (Some(n), None, None) => (n, n),
                    (None, lo, Some(hi)) => (lo.unwrap_or(1), hi),
                    (None, None, None) => (1, 40),
                    _ => return Err(usage("give either --n or --n-min/--n-max")),
                };
                CommandConfig::Laplace {
                    pair,
                    n_min: lo,
                    n_max: hi,
                    t,
                }
            }
        };
        Ok(RunConfig {
            command,
            format: self.format,
            seed: self.seed,
        })
    }
}

/// Grids small enough for interactive use.
pub fn quick_verify_config() -> VerifyConfig {
    VerifyConfig {
        n_max: 12,
        axis_points: 200,
        perron_n_max: 4,
        perron_points: 50,
        error_n_max: 6,
        l2_n_max: 5,
        integrand_samples: 5,
        ..VerifyConfig::default()
    }
}

fn build_generator(src: &GeneratorSource, seed: u64, alpha: f64) -> Result<(Arc<dyn Generator>, Option<Vec<C64>>)> {
    Ok(match src {
        GeneratorSource::Matrix { path } => {
            let m = read_matrix(path)?;
            let g = DenseMatrixGenerator::new(m)?.with_regime(Regime::UniformlyBounded { m: 1.0 })?;
            (Arc::new(g), None)
        }
        GeneratorSource::Eigenvalues { values } => {
            let g = DiagonalGenerator::new(values.iter().map(|p| C64::new(p[0], p[1])).collect())?;
            (Arc::new(g), None)
        }
        GeneratorSource::Instance { name } => {
            let (g, x) = match name.as_str() {
                "analytic" => analytic_instance(alpha)?,
                "contraction" => contraction_instance()?,
                "random" => random_contraction(seed, 12)?,
                other => return Err(usage(format!("unknown instance '{other}' (analytic, contraction, random)"))),
            };
            (Arc::new(g), Some(x))
        }
    })
}

fn starting_vector(path: &Option<PathBuf>, bundled: Option<Vec<C64>>, dim: usize) -> Result<Vec<C64>> {
    if let Some(p) = path {
        let v = read_vector(p)?;
        if v.len() != dim {
            return Err(usage(format!("vector has length {}, generator dimension is {dim}", v.len())));
        }
        return Ok(v);
    }
    Ok(bundled.unwrap_or_else(|| vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim]))
}

/// `M_ν` for diagonal sources, computed exactly from the spectrum.
fn sectoriality(src: &GeneratorSource, seed: u64, alpha: f64, nu: f64) -> Result<f64> {
    let diag = match src {
        GeneratorSource::Eigenvalues { values } => {
            DiagonalGenerator::new(values.iter().map(|p| C64::new(p[0], p[1])).collect())?
        }
        GeneratorSource::Instance { name } => match name.as_str() {
            "analytic" => analytic_instance(alpha)?.0,
            "contraction" => contraction_instance()?.0,
            "random" => random_contraction(seed, 12)?.0,
            other => return Err(usage(format!("unknown instance '{other}'"))),
        },
        GeneratorSource::Matrix { .. } => return Err(usage("--m-nu is required for matrix generators")),
    };
    diag.sectoriality_constant(nu)
}

fn resolve_regime(spec: &RegimeSpec, src: &GeneratorSource, seed: u64) -> Result<StudyRegime> {
    let alpha = spec.alpha;
    Ok(match spec.kind {
        RegimeKind::Uniform => StudyRegime::Uniform { alpha, m: spec.m },
        RegimeKind::Analytic => StudyRegime::Analytic {
            alpha,
            m_nu: match spec.m_nu {
                Some(v) => v,
                None => sectoriality(src, seed, alpha, spec.nu)?,
            },
        },
        RegimeKind::ExpStable => StudyRegime::ExpStable {
            alpha,
            m: spec.m,
            omega: spec.omega.ok_or_else(|| usage("--omega is required for exp-stable"))?,
        },
        RegimeKind::HInfinity => StudyRegime::HInfinity { alpha, c: spec.c },
        RegimeKind::GammaStableHilbert => StudyRegime::GammaStableHilbert {
            alpha,
            a: spec.a.ok_or_else(|| usage("--a is required for gamma-stable-hilbert"))?,
            c_user: spec.c_user.ok_or_else(|| usage("--c-user is required for gamma-stable-hilbert"))?,
        },
    })
}

/// Output of a command and whether every validation passed.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub ok: bool,
}

fn ok(text: String) -> Result<CommandOutput> {
    Ok(CommandOutput { text, ok: true })
}

fn json_text(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn cmd_coeffs(n: usize, format: OutputFormat) -> Result<CommandOutput> {
    let pair = pade_coefficients(n);
    let strs = |c: &[num_rational::BigRational]| c.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let (p, q) = (strs(pair.p().coeffs()), strs(pair.q().coeffs()));
    match format {
        OutputFormat::Json => ok(json_text(&json!({ "n": n, "p": p, "q": q }))?),
        OutputFormat::Csv => {
            let mut s = String::from("poly,j,coefficient\n");
            for (name, cs) in [("P", &p), ("Q", &q)] {
                for (j, c) in cs.iter().enumerate() {
                    let _ = writeln!(s, "{name},{j},{c}");
                }
            }
            ok(s)
        }
        OutputFormat::Text => ok(format!("P: {}\nQ: {}\n", p.join(", "), q.join(", "))),
    }
}

pub fn cmd_poles(n: usize) -> Result<CommandOutput> {
    let pf = partial_fraction_form(n)?;
    let ok = pf.validated.all();
    Ok(CommandOutput {
        text: json_text(&pf.to_document())?,
        ok,
    })
}

pub fn cmd_approx(
    n: usize,
    times: &[f64],
    src: &GeneratorSource,
    vector: &Option<PathBuf>,
    seed: u64,
    format: OutputFormat,
) -> Result<CommandOutput> {
    let (gen, bundled) = build_generator(src, seed, 1.0)?;
    let x = starting_vector(vector, bundled, gen.dimension())?;
    let pf = partial_fraction_form(n)?;
    let results = times
        .iter()
        .map(|&t| Ok((t, apply_rn(&pf, t, gen.as_ref(), &x)?)))
        .collect::<Result<Vec<_>>>()?;
    match format {
        OutputFormat::Json => {
            let rows: Vec<_> = results
                .iter()
                .map(|(t, v)| json!({ "t": t, "result": v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() }))
                .collect();
            ok(json_text(&json!({ "n": n, "results": rows }))?)
        }
        OutputFormat::Csv => {
            let mut s = String::from("t,index,re,im\n");
            for (t, v) in &results {
                for (k, z) in v.iter().enumerate() {
                    let _ = writeln!(s, "{t},{k},{:e},{:e}", z.re, z.im);
                }
            }
            ok(s)
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for (t, v) in &results {
                let _ = writeln!(s, "# t = {t}");
                s.push_str(&write_vector(v));
            }
            ok(s)
        }
    }
}

pub fn cmd_study(
    n_min: usize,
    n_max: usize,
    t: f64,
    spec: &RegimeSpec,
    src: &GeneratorSource,
    vector: &Option<PathBuf>,
    seed: u64,
    format: OutputFormat,
) -> Result<CommandOutput> {
    if n_min > n_max {
        return Err(usage("--n-min must not exceed --n-max"));
    }
    let regime = resolve_regime(spec, src, seed)?;
    let (gen, bundled) = build_generator(src, seed, spec.alpha)?;
    let x = starting_vector(vector, bundled, gen.dimension())?;
    let ns: Vec<usize> = (n_min..=n_max).collect();
    let study = convergence_study(gen.as_ref(), &x, t, &ns, &regime)?;
    let all_dominated = study.records.iter().all(|r| !r.valid || r.empirical_error <= r.bound * (1.0 + 1e-9));
    let text = match format {
        OutputFormat::Json => json_text(&study)?,
        _ => study_csv(&study),
    };
    Ok(CommandOutput {
        text,
        ok: all_dominated,
    })
}

pub fn cmd_verify(config: &VerifyConfig, perturb: Option<(usize, f64)>, format: OutputFormat) -> Result<CommandOutput> {
    let provider = move |n: usize| -> Arc<PadePair> {
        let base = pade_coefficients(n);
        match perturb {
            Some((j, rel)) if j >= 1 && j <= n + 1 => Arc::new(base.with_perturbed_q(j, rel).expect("valid perturbation")),
            _ => base,
        }
    };
    if let Some((j, _)) = perturb {
        if j == 0 {
            return Err(usage("perturbed coefficient index must be at least 1"));
        }
    }
    let report = run_verify_with(config, &provider)?;
    let passed = report.passed();
    let text = match format {
        OutputFormat::Json => json_text(&report)?,
        OutputFormat::Csv => {
            let mut s = String::from("check,passed,observed,limit,detail\n");
            for c in &report.checks {
                let _ = writeln!(s, "\"{}\",{},{:e},{:e},\"{}\"", c.name, c.passed, c.observed, c.limit, c.detail);
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{tag} {}: observed {:.15e}, limit {:.15e}{}",
                    c.name,
                    c.observed,
                    c.limit,
                    if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
                );
            }
            let _ = writeln!(s, "{}", if passed { "all checks passed" } else { "verification FAILED" });
            s
        }
    };
    Ok(CommandOutput { text, ok: passed })
}

pub fn cmd_laplace(pair: &str, n_min: usize, n_max: usize, times: &[f64], format: OutputFormat) -> Result<CommandOutput> {
    if let Some(t) = times.iter().find(|t| !(**t > 0.0)) {
        return Err(usage(format!("Laplace inversion needs t > 0, got t = {t}")));
    }
    if n_min > n_max {
        return Err(usage("--n-min must not exceed --n-max"));
    }
    let registry = Registry::default();
    let p = registry
        .get(pair)
        .ok_or_else(|| usage(format!("unknown pair '{pair}' (available: {})", registry.names().join(", "))))?;
    let mut reports = vec![];
    for &t in times {
        for n in n_min..=n_max {
            reports.push(inversion_error(p, n, t)?);
        }
    }
    let dominated = reports
        .iter()
        .all(|r| r.bounds.iter().all(|(_, b)| r.error <= b * (1.0 + 1e-9) + 1e-13));
    let text = match format {
        OutputFormat::Json => json_text(&reports)?,
        _ => {
            let sep = if format == OutputFormat::Csv { "," } else { " " };
            let mut s = ["pair", "n", "t", "value", "exact", "error", "bound_k1", "bound_k2", "bound_k3"].join(sep) + "\n";
            for r in &reports {
                let bound = |k: u32| {
                    r.bounds
                        .iter()
                        .find(|b| b.0 == k)
                        .map(|b| format!("{:e}", b.1))
                        .unwrap_or_else(|| "-".into())
                };
                let cols = [
                    r.pair.clone(),
                    r.n.to_string(),
                    r.t.to_string(),
                    r.value[0].re.to_string(),
                    r.exact[0].re.to_string(),
                    format!("{:e}", r.error),
                    bound(1),
                    bound(2),
                    bound(3),
                ];
                s.push_str(&cols.join(sep));
                s.push('\n');
            }
            s
        }
    };
    Ok(CommandOutput { text, ok: dominated })
}

/// Runs a configuration.
pub fn execute(cfg: &RunConfig) -> Result<CommandOutput> {
    let fmt = |default| cfg.format.unwrap_or(default);
    match &cfg.command {
        CommandConfig::Coeffs { n } => cmd_coeffs(*n, fmt(OutputFormat::Text)),
        CommandConfig::Poles { n } => cmd_poles(*n),
        CommandConfig::Approx { n, t, generator, vector } => {
            cmd_approx(*n, t, generator, vector, cfg.seed, fmt(OutputFormat::Text))
        }
        CommandConfig::Study {
            n_min,
            n_max,
            t,
            regime,
            generator,
            vector,
        } => cmd_study(*n_min, *n_max, *t, regime, generator, vector, cfg.seed, fmt(OutputFormat::Csv)),
        CommandConfig::Verify { config, perturb } => cmd_verify(config, *perturb, fmt(OutputFormat::Text)),
        CommandConfig::Laplace { pair, n_min, n_max, t } => cmd_laplace(pair, *n_min, *n_max, t, fmt(OutputFormat::Text)),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let emit = cli.emit_config;
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if emit {
        return match serde_json::to_string_pretty(&cfg) {
            Ok(s) => {
                let _ = writeln!(out, "{s}");
                0
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        };
    }
    match execute(&cfg) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.ok {
                0
            } else {
                let _ = writeln!(err, "validation failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
