//! `jetfield`: checks, integration runs and jet-group arithmetic from the command line.

mod system;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use jetfield::geod::{arclength_resample, hausdorff, integrate, trace_path, Halt, Trajectory};
use jetfield::homog::{lambda_extract, QuadratureConfig, SprayNormalizer};
use jetfield::jetgroup::{exp_k, log_k, AlgebraElement, JetGroupElement};
use jetfield::symexpr::{SampleConfig, Sampler};
use jetfield::varcalc::{el_report, extract_el_field_at, regularity_rank, zermelo_check, Variational};
use jetfield::Error;

use system::{parse_numbers, parse_point, SystemFile};

#[derive(Parser)]
#[command(name = "jetfield", version, about = "Homogeneous higher-order ODE systems and parametric Lagrangians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Sampling {
    /// Number of random sample points.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Sampling {
    fn config(&self, tol: f64) -> SampleConfig {
        SampleConfig::default().with_count(self.samples.max(1)).with_seed(self.seed).with_tolerance(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract the lambda^r of an equation field and check the consistency relations.
    CheckHomogeneity {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check Delta^1 L = L and Delta^r L = 0.
    CheckZermelo {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Euler-Lagrange identities, field verification or pointwise extraction.
    EulerLagrange {
        file: PathBuf,
        /// Equation field to substitute into the Euler-Lagrange expressions.
        #[arg(long, conflicts_with = "extract_at")]
        verify: Option<PathBuf>,
        /// Point of T^(2n-1), comma-separated row-major, at which to solve for y_(2n).
        #[arg(long)]
        extract_at: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Rank of d(theta) and kernel membership of Delta^r at random points.
    Regularity {
        file: PathBuf,
        /// Equation field whose kernel membership is also checked.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Integrate an equation field with fixed-step RK4.
    Integrate {
        file: PathBuf,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 2.0 * PI)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// CSV output; without it the CSV goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the paths traced by two fields from the same initial jet.
    ComparePaths {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Arc length to trace.
        #[arg(long, default_value_t = 2.0 * PI)]
        length: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 2e-3)]
        ds: f64,
    },
    /// The normalising multiplier mu and the normalised field at a point.
    SprayNormalize {
        file: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Jet-group arithmetic on comma-separated coordinates.
    Jetgroup {
        op: GroupOp,
        #[arg(long)]
        order: usize,
        operands: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupOp {
    Mul,
    Inv,
    Exp,
    Log,
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check_homogeneity(file: &PathBuf, sampling: &Sampling, tol: f64) -> Result<ExitCode> {
    let field = SystemFile::load(file)?.field()?;
    let rep = lambda_extract(&field, &sampling.config(tol))?;
    let consistency: Vec<_> = rep
        .consistency
        .iter()
        .map(|c| json!({"family": c.family, "r": c.r, "s": c.s, "residual": c.residual}))
        .collect();
    emit(&json!({
        "homogeneous": rep.homogeneous,
        "m": field.m(),
        "n": field.n(),
        "lambda": rep.lambda.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "component_residual": rep.component_residual,
        "max_consistency_residual": rep.max_consistency_residual(),
        "consistency": consistency,
        "tolerance": tol,
    }))?;
    Ok(status(rep.homogeneous))
}

fn check_zermelo(file: &PathBuf, sampling: &Sampling, tol: f64) -> Result<ExitCode> {
    let lag = SystemFile::load(file)?.lagrangian()?;
    let rep = zermelo_check(&lag, &sampling.config(tol));
    let residuals: Vec<_> =
        rep.residuals.iter().enumerate().map(|(k, r)| json!({"r": k + 1, "residual": r})).collect();
    emit(&json!({"parametric": rep.parametric, "residuals": residuals, "tolerance": tol}))?;
    Ok(status(rep.parametric))
}

fn euler_lagrange(
    file: &PathBuf,
    verify: Option<&PathBuf>,
    extract_at: Option<&str>,
    sampling: &Sampling,
    tol: f64,
) -> Result<ExitCode> {
    let lag = SystemFile::load(file)?.lagrangian()?;
    if let Some(gamma_file) = verify {
        let field = SystemFile::load(gamma_file)?.field()?;
        let residual = Variational::new(&lag).verify_field(&field, &sampling.config(tol))?;
        let pass = residual < tol;
        emit(&json!({"residual": residual, "tolerance": tol, "pass": pass}))?;
        return Ok(status(pass));
    }
    if let Some(at) = extract_at {
        let p = parse_point(at, lag.m(), 2 * lag.n() - 1)?;
        return match extract_el_field_at(&Variational::new(&lag), &p) {
            Ok(ex) => {
                emit(&json!({
                    "particular": ex.particular,
                    "kernel": ex.kernel,
                    "residual": ex.residual,
                }))?;
                Ok(ExitCode::SUCCESS)
            }
            Err(Error::Inconsistent { residual }) => {
                emit(&json!({"inconsistent": true, "residual": residual}))?;
                Ok(ExitCode::FAILURE)
            }
            Err(e) => Err(e.into()),
        };
    }
    let rep = el_report(&lag, &sampling.config(tol));
    let pass = [
        rep.horizontality_residual,
        rep.s_eps_residual,
        rep.theta_residual,
        rep.dtheta_residual,
        rep.classical_residual,
    ]
    .iter()
    .all(|r| *r < tol);
    emit(&json!({
        "eps": rep.eps.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "parametric": rep.zermelo.parametric,
        "zermelo_residuals": rep.zermelo.residuals,
        "horizontality_residual": rep.horizontality_residual,
        "s_eps_residual": rep.s_eps_residual,
        "theta_residual": rep.theta_residual,
        "dtheta_residual": rep.dtheta_residual,
        "classical_residual": rep.classical_residual,
        "tolerance": tol,
        "pass": pass,
    }))?;
    Ok(status(pass))
}

fn regularity(file: &PathBuf, gamma: Option<&PathBuf>, sampling: &Sampling, tol: f64) -> Result<ExitCode> {
    let lag = SystemFile::load(file)?.lagrangian()?;
    let field = gamma.map(|g| SystemFile::load(g)?.field()).transpose()?;
    let var = Variational::new(&lag);
    let mut sampler = Sampler::new(&sampling.config(tol));
    let mut kernel_dims = std::collections::BTreeMap::new();
    let (mut delta, mut field_res, mut dim) = (0.0f64, 0.0f64, 0);
    for _ in 0..sampling.samples {
        let p = sampler.point(lag.m(), 2 * lag.n() - 1);
        let rep = regularity_rank(&var, &p, field.as_ref())?;
        dim = rep.dim;
        *kernel_dims.entry(rep.kernel_dim.to_string()).or_insert(0usize) += 1;
        delta = rep.delta_residuals.iter().copied().fold(delta, f64::max);
        field_res = field_res.max(rep.field_residual.unwrap_or(0.0));
    }
    let pass = delta < tol && field_res < tol;
    emit(&json!({
        "dim": dim,
        "kernel_dimension_counts": kernel_dims,
        "expected_kernel_dimension": 2 * lag.n(),
        "delta_residual": delta,
        "field_residual": field.as_ref().map(|_| field_res),
        "tolerance": tol,
        "pass": pass,
    }))?;
    Ok(status(pass))
}

fn halt_json(tr: &Trajectory) -> serde_json::Value {
    match &tr.halt {
        None => serde_json::Value::Null,
        Some(Halt::Slit { t, norm }) => json!({"reason": "slit", "t": t, "norm": norm}),
        Some(Halt::NonFinite { t }) => json!({"reason": "non-finite", "t": t}),
    }
}

fn run_integrate(file: &PathBuf, init: &str, t1: f64, h: f64, out: Option<&PathBuf>) -> Result<ExitCode> {
    let field = SystemFile::load(file)?.field()?;
    let p = parse_point(init, field.m(), field.n())?;
    let tr = integrate(&field, &p, t1, h)?;
    match out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            tr.write_csv(BufWriter::new(f))?;
            emit(&json!({
                "samples": tr.len(),
                "t_end": tr.t.last(),
                "h": h,
                "max_step_error": tr.max_step_error,
                "error_bound": tr.error_bound,
                "halt": halt_json(&tr),
                "out": path.display().to_string(),
            }))?;
        }
        None => tr.write_csv(io::stdout().lock())?,
    }
    Ok(status(tr.completed()))
}

#[allow(clippy::too_many_arguments)]
fn compare_paths(
    a: &PathBuf,
    b: &PathBuf,
    init: &str,
    tol: f64,
    length: f64,
    h: f64,
    ds: f64,
) -> Result<ExitCode> {
    let (fa, fb) = (SystemFile::load(a)?.field()?, SystemFile::load(b)?.field()?);
    if fa.m() != fb.m() || fa.n() != fb.n() {
        bail!("systems differ in dimension or order");
    }
    let p = parse_point(init, fa.m(), fa.n())?;
    let (ta, tb) = (trace_path(&fa, &p, length, h)?, trace_path(&fb, &p, length, h)?);
    let complete = ta.completed() && tb.completed();
    let distance = hausdorff(&arclength_resample(&ta, ds)?, &arclength_resample(&tb, ds)?)?;
    let pass = complete && distance < tol;
    emit(&json!({
        "result": if pass { "PASS" } else { "FAIL" },
        "distance": distance,
        "tolerance": tol,
        "length": length,
        "halt": [halt_json(&ta), halt_json(&tb)],
    }))?;
    Ok(status(pass))
}

fn spray_normalize(file: &PathBuf, at: &str) -> Result<ExitCode> {
    let field = SystemFile::load(file)?.field()?;
    let p = parse_point(at, field.m(), field.n())?;
    let norm = SprayNormalizer::new(&field, &SampleConfig::default(), &QuadratureConfig::default())?;
    emit(&json!({"mu": norm.mu(&p)?, "normalized": norm.normalized_at(&p)?}))?;
    Ok(ExitCode::SUCCESS)
}

fn jetgroup(op: GroupOp, order: usize, operands: &[String]) -> Result<ExitCode> {
    let want = match op {
        GroupOp::Mul => 2,
        _ => 1,
    };
    if operands.len() != want {
        bail!("expected {want} operand(s), got {}", operands.len());
    }
    let coords = operands
        .iter()
        .map(|s| {
            let v = parse_numbers(s)?;
            if v.len() != order {
                bail!("operand {s:?} has {} coordinates, order is {order}", v.len());
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let result = match op {
        GroupOp::Mul => JetGroupElement::new(coords[0].clone())?
            .mul(&JetGroupElement::new(coords[1].clone())?)?
            .coords()
            .to_vec(),
        GroupOp::Inv => JetGroupElement::new(coords[0].clone())?.inv().coords().to_vec(),
        GroupOp::Exp => exp_k(&AlgebraElement::new(coords[0].clone()))?.coords().to_vec(),
        GroupOp::Log => log_k(&JetGroupElement::new(coords[0].clone())?)?.coeffs().to_vec(),
    };
    let text: Vec<String> = result.iter().map(ToString::to_string).collect();
    println!("{}", text.join(","));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::CheckHomogeneity { file, sampling, tol } => check_homogeneity(file, sampling, *tol),
        Command::CheckZermelo { file, sampling, tol } => check_zermelo(file, sampling, *tol),
        Command::EulerLagrange { file, verify, extract_at, sampling, tol } => {
            euler_lagrange(file, verify.as_ref(), extract_at.as_deref(), sampling, *tol)
        }
        Command::Regularity { file, gamma, sampling, tol } => regularity(file, gamma.as_ref(), sampling, *tol),
        Command::Integrate { file, init, t1, h, out } => run_integrate(file, init, *t1, *h, out.as_ref()),
        Command::ComparePaths { file_a, file_b, init, tol, length, h, ds } => {
            compare_paths(file_a, file_b, init, *tol, *length, *h, *ds)
        }
        Command::SprayNormalize { file, at } => spray_normalize(file, at),
        Command::Jetgroup { op, order, operands } => jetgroup(*op, *order, operands),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
