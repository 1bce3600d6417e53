//! Command-line driver: JSON problem specs in, prox values, traces, and
//! figure data out.
//!
//! Exit codes: 0 success, 1 parse/config error or failed assertion, 2
//! additivity unverified (rerun with `--force` to override), 3 iteration
//! budget exhausted.

mod problem;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use problem::{parse_candidate, parse_problem, parse_vi, AlgorithmName, LoadedProblem};
use proxcalc::falsifier::contradiction_certificate;
use proxcalc::fprox::{a1_solve, FproxProblem};
use proxcalc::oracle::{figure_data, fprox_set_oracle, oracle_prox, write_figure_csv, ValueMap};
use proxcalc::sensitivity::{sensitivity_report, ConeAxis};
use proxcalc::splitting::{a2_solve, dr_minimize, fb_classical, SmoothPairProblem};
use proxcalc::{IterationResult, Point, ProxError};

#[derive(Parser)]
#[command(
    name = "proxcalc",
    version,
    about = "Proximal calculus for sums of convex functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate prox of f+g at x by the generalized Douglas-Rachford
    /// fixed-point iteration.
    ProxSum {
        problem: PathBuf,
        /// Trace CSV destination (default: `<problem>.trace.csv`).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Run even when the additivity check fails.
        #[arg(long)]
        force: bool,
        /// Fail unless the residual trace is nonincreasing.
        #[arg(long)]
        assert_monotone: bool,
    },
    /// Minimize f+g with the classical Douglas-Rachford iteration.
    Dr {
        problem: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        assert_monotone: bool,
    },
    /// Fixed-point prox evaluation via the generalized Forward-Backward map
    /// (algorithm name `A2`, default), or classical Forward-Backward
    /// minimization (`FB`).
    Fb {
        problem: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        assert_monotone: bool,
    },
    /// Brute-force prox of f+g, plus the set-valued oracle in 1D.
    Oracle { problem: PathBuf },
    /// Emit band data (x, set_lo, set_hi, prox_g) over a grid of x.
    Figure {
        problem: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Trajectory, critical cone, and directional derivative of a
    /// box-constrained parameterized problem.
    Sensitivity { problem: PathBuf },
    /// Print the impossibility certificate for a closed-formula candidate.
    Falsify { candidate: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ProxError> for Failure {
    fn from(e: ProxError) -> Self {
        let code = match e {
            ProxError::AdditivityUnverified(_) => 2,
            ProxError::MaxIterExceeded => 3,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn fmt_scalar(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_point(p: &Point) -> String {
    if p.dim() == 1 {
        fmt_scalar(p.coords()[0])
    } else {
        let inner: Vec<String> = p.coords().iter().map(|&c| fmt_scalar(c)).collect();
        format!("[{}]", inner.join(","))
    }
}

fn write_trace(path: &Path, trace: &[(usize, f64)]) -> Result<(), Failure> {
    let mut out =
        fs::File::create(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    writeln!(out, "iter,residual").map_err(|e| Failure::new(1, e.to_string()))?;
    for (k, r) in trace {
        writeln!(out, "{k},{r:.16e}").map_err(|e| Failure::new(1, e.to_string()))?;
    }
    Ok(())
}

fn default_trace_path(problem: &Path) -> PathBuf {
    problem.with_extension("trace.csv")
}

/// Print a solver result, write its trace, run the optional monotonicity
/// assertion, and translate nonconvergence into exit code 3.
fn report_run(
    result: &IterationResult,
    problem_path: &Path,
    trace: Option<PathBuf>,
    assert_monotone: bool,
) -> Result<(), Failure> {
    println!("prox={}", fmt_point(&result.prox_value));
    println!("y_star={}", fmt_point(&result.y_star));
    println!("residual={}", fmt_scalar(result.residual));
    println!("iterations={}", result.iterations);
    println!("converged={}", result.converged);
    if result.unverified_additivity {
        eprintln!("warning: additivity unverified; result may be meaningless");
    }
    if result.heuristic {
        eprintln!("warning: no convergence guarantee for this iteration");
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    let trace_path = trace.unwrap_or_else(|| default_trace_path(problem_path));
    write_trace(&trace_path, &result.trace)?;
    println!("trace={}", trace_path.display());

    if assert_monotone {
        for pair in result.trace.windows(2) {
            let (_, a) = pair[0];
            let (k, b) = pair[1];
            if b > a * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                return Err(Failure::new(
                    1,
                    format!("residual increased at iteration {k}: {a:e} -> {b:e}"),
                ));
            }
        }
        println!("monotone=true");
    }
    if !result.converged {
        return Err(Failure::from(ProxError::MaxIterExceeded));
    }
    Ok(())
}

fn load(path: &Path) -> Result<LoadedProblem, Failure> {
    let spec = parse_problem(&read_file(path)?).map_err(|m| Failure::new(1, m))?;
    spec.load().map_err(Failure::from)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ProxSum {
            problem,
            trace,
            force,
            assert_monotone,
        } => {
            let loaded = load(&problem)?;
            let cfg = loaded.spec.algorithm.to_config(force)?;
            let p = FproxProblem::new(loaded.f, loaded.g)?;
            let result = a1_solve(&p, &loaded.x, &cfg)?;
            report_run(&result, &problem, trace, assert_monotone)
        }
        Command::Dr {
            problem,
            trace,
            assert_monotone,
        } => {
            let loaded = load(&problem)?;
            let cfg = loaded.spec.algorithm.to_config(false)?;
            let p = FproxProblem::new(loaded.f, loaded.g)?;
            let result = dr_minimize(&p, &cfg)?;
            report_run(&result, &problem, trace, assert_monotone)
        }
        Command::Fb {
            problem,
            trace,
            assert_monotone,
        } => {
            let loaded = load(&problem)?;
            let cfg = loaded.spec.algorithm.to_config(false)?;
            let p = SmoothPairProblem::new(loaded.f, loaded.g)?;
            let result = match loaded.spec.algorithm.name {
                Some(AlgorithmName::FB) => fb_classical(&p, &cfg)?,
                _ => a2_solve(&p, &loaded.x, &cfg)?,
            };
            report_run(&result, &problem, trace, assert_monotone)
        }
        Command::Oracle { problem } => {
            let loaded = load(&problem)?;
            let h = ValueMap::sum(&loaded.f, &loaded.g)?;
            let z = oracle_prox(&h, &loaded.x)?;
            println!("prox_sum={}", fmt_point(&z));
            if loaded.f.dim() == 1 && loaded.g.has_subdiff1d() {
                let grid = loaded.spec.set_grid()?;
                let p = FproxProblem::new(loaded.f, loaded.g)?;
                let set = fprox_set_oracle(&p, loaded.x.as_scalar(), &grid, loaded.spec.set_tol)?;
                if set.is_empty() {
                    println!("set=empty");
                } else {
                    println!("set=[{},{}]", fmt_scalar(set.lo()), fmt_scalar(set.hi()));
                }
                println!("grid_step={}", fmt_scalar(grid.step));
                println!("inflation={}", fmt_scalar(loaded.spec.set_tol));
            }
            Ok(())
        }
        Command::Figure { problem, out } => {
            let loaded = load(&problem)?;
            let xs = loaded.spec.figure_grid()?;
            let ygrid = loaded.spec.set_grid()?;
            let p = FproxProblem::new(loaded.f, loaded.g)?;
            let rows = figure_data(&p, &xs, &ygrid, loaded.spec.set_tol)?;
            let file = fs::File::create(&out)
                .map_err(|e| Failure::new(1, format!("{}: {e}", out.display())))?;
            write_figure_csv(&rows, file).map_err(|e| Failure::new(1, e.to_string()))?;
            println!("rows={}", rows.len());
            println!("out={}", out.display());
            Ok(())
        }
        Command::Sensitivity { problem } => {
            let vi = parse_vi(&read_file(&problem)?).map_err(|m| Failure::new(1, m))?;
            let p = vi.load()?;
            let cfg = vi.algorithm.to_config(false)?;
            let rep = sensitivity_report(&p, &cfg, vi.fd_step)?;
            println!("u0={}", fmt_point(&rep.u0));
            println!("v0={}", fmt_point(&rep.v0));
            let cone: Vec<&str> = rep
                .cone
                .axes()
                .iter()
                .map(|a| match a {
                    ConeAxis::Free => "free",
                    ConeAxis::NonNeg => "nonneg",
                    ConeAxis::NonPos => "nonpos",
                    ConeAxis::Zero => "zero",
                })
                .collect();
            println!("cone={}", cone.join(","));
            println!("u_prime={}", fmt_point(&rep.u_prime));
            println!("fd_estimate={}", fmt_point(&rep.fd_estimate));
            println!("fd_gap={}", fmt_scalar(rep.fd_gap));
            if let Some(w) = &rep.warning {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Falsify { candidate } => {
            let c = parse_candidate(&read_file(&candidate)?).map_err(|m| Failure::new(1, m))?;
            println!("{}", contradiction_certificate(&c));
            Ok(())
        }
    }
}
