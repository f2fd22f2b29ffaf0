//! Command surface of the `hourglass` binary.
//!
//! Exit codes: 0 success or PASS, 2 a check failed (FAIL / VIOLATION /
//! uncertified), 1 usage, I/O, malformed JSON or invalid input,
//! 3 descriptor schema violation, 4 dimension mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::alternative::{
    certify_extremal, default_cert_tol, hourglass_probe_explicit, CertTarget, ProbeStatus,
};
use crate::descriptor::{self, DescriptorError};
use crate::error::Error;
use crate::generate::{gen_instance, GenKind, GenParams};
use crate::linalg::{
    spectral_radius_gelfand, spectral_radius_power, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::report::{digest, Format, RunReport};
use crate::sets::{hausdorff_distance, ExplicitSet, SetExpr, SetLeaf, SetNorm};
use crate::spectral::{
    conv_lsr_check, finiteness_verify, jsr_lsr_bounds, rho_extremal_exhaustive, spectral_simplex,
    CheckStatus, FinitenessOptions,
};
use crate::Direction;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "hourglass",
    version,
    about = "Extremal spectral radii of structured matrix sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Set descriptor (JSON).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output format.
    #[arg(long, default_value = "json")]
    pub format: Format,
    /// Lift IRU and chain leaves by this ε before anything else.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Expansion and enumeration budget.
    #[arg(long, default_value_t = crate::sets::DEFAULT_SIZE_GUARD)]
    pub guard: u128,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectral radius of every member, by power iteration and by Gelfand squaring.
    Radius {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Extremal member by exhaustive enumeration, with a certificate when possible.
    Extremal {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "max")]
        direction: Direction,
    },
    /// Greedy row-swap iteration on an IRU set.
    Simplex {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "max")]
        direction: Direction,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Joint spectral radius bracket and the finite-length sequences.
    Jsr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Lower spectral radius bracket and the finite-length sequences.
    Lsr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Checks that short products already attain the extremal radii.
    Finiteness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Convex combinations adjoined for the sandwich check.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Random search for a pair violating the hourglass alternative.
    HsetProbe {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Strict-comparison tolerance; defaults to 1e-9 (1 + ‖Ãu‖∞).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Hausdorff distance between two expanded sets.
    Hausdorff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        other: PathBuf,
        /// `max` (entrywise) or `l1` (operator norm).
        #[arg(long, default_value = "max")]
        norm: String,
    },
    /// Norm inequality for products drawn from the convex hull.
    ConvCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Writes a random set descriptor.
    Gen {
        #[arg(long, default_value = "iru")]
        kind: GenKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Largest row-set size, or chain length.
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0.1)]
        lo: f64,
        #[arg(long, default_value_t = 2.0)]
        hi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_boundary: bool,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        max_size: u128,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        /// Destination file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Failure of a command before a report could be produced.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_) | Error::NotSquare { .. } => EXIT_DIMENSION,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DescriptorError> for CliError {
    fn from(e: DescriptorError) -> Self {
        CliError {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Input {
    expr: SetExpr,
    digest: String,
}

fn load(path: &Path, epsilon: Option<f64>) -> CliResult<Input> {
    let bytes = std::fs::read(path).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError {
        code: EXIT_USAGE,
        message: format!("{} is not UTF-8", path.display()),
    })?;
    let mut expr = descriptor::parse_descriptor_str(&text)?;
    if let Some(eps) = epsilon {
        expr = expr.epsilon_lift_leaves(eps)?;
    }
    Ok(Input {
        expr,
        digest: digest(&bytes),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

struct Outcome {
    status: &'static str,
    code: i32,
    results: Value,
    table: Option<String>,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Self {
            status: "OK",
            code: EXIT_OK,
            results,
            table: None,
        }
    }

    fn check(passed: bool, fail_status: &'static str, results: Value) -> Self {
        Self {
            status: if passed { "PASS" } else { fail_status },
            code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            results,
            table: None,
        }
    }
}

fn common_params(c: &Common) -> Map<String, Value> {
    let mut p = Map::new();
    p.insert("input".into(), json!(c.input.display().to_string()));
    p.insert("guard".into(), json!(c.guard.to_string()));
    p.insert("epsilon".into(), json!(c.epsilon));
    p
}

/// Executes one command and returns its report and exit code.
pub fn execute(command: &Command) -> CliResult<(RunReport, i32)> {
    let start = Instant::now();
    let (name, common) = match command {
        Command::Radius { common, .. } => ("radius", common),
        Command::Extremal { common, .. } => ("extremal", common),
        Command::Simplex { common, .. } => ("simplex", common),
        Command::Jsr { common, .. } => ("jsr", common),
        Command::Lsr { common, .. } => ("lsr", common),
        Command::Finiteness { common, .. } => ("finiteness", common),
        Command::HsetProbe { common, .. } => ("hset-probe", common),
        Command::Hausdorff { common, .. } => ("hausdorff", common),
        Command::ConvCheck { common, .. } => ("conv-check", common),
        Command::Gen { .. } => {
            return Err(CliError {
                code: EXIT_USAGE,
                message: "gen does not produce a run report".into(),
            })
        }
    };
    let input = load(&common.input, common.epsilon)?;
    let mut digests = vec![input.digest.clone()];
    let mut params = common_params(common);
    let guard = common.guard;
    let expand = |e: &SetExpr| -> CliResult<ExplicitSet> { Ok(e.expand(guard, None)?) };

    let outcome = match command {
        Command::Radius { tol, .. } => {
            params.insert("tol".into(), json!(tol));
            let s = expand(&input.expr)?;
            let members = s
                .iter()
                .map(|m| {
                    let power = if m.is_nonnegative() {
                        Some(spectral_radius_power(m, *tol, DEFAULT_MAX_ITER)?)
                    } else {
                        None
                    };
                    let gelfand = spectral_radius_gelfand(m, *tol)?;
                    Ok(json!({"rho_power": power, "rho_gelfand": gelfand}))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Outcome::ok(json!({"set_size": s.len(), "members": members}))
        }
        Command::Extremal { direction, .. } => {
            params.insert("direction".into(), json!(direction));
            let s = expand(&input.expr)?;
            let ext = rho_extremal_exhaustive(&s, *direction)?;
            let m = &s.matrices()[ext.index];
            let certification = if m.is_positive() {
                let target = match &input.expr {
                    SetExpr::Leaf(SetLeaf::Iru(iru)) => CertTarget::Iru(iru),
                    _ => CertTarget::Explicit(&s),
                };
                let tol = default_cert_tol(ext.value);
                params.insert("cert_tol".into(), json!(tol));
                Some(certify_extremal(target, m, *direction, tol)?)
            } else {
                None
            };
            Outcome::ok(json!({
                "value": ext.value,
                "index": ext.index,
                "matrix": m,
                "set_size": s.len(),
                "certification": certification,
            }))
        }
        Command::Simplex {
            direction,
            tol,
            max_iter,
            ..
        } => {
            params.insert("direction".into(), json!(direction));
            params.insert("tol".into(), json!(tol));
            params.insert("max_iter".into(), json!(max_iter));
            let SetExpr::Leaf(SetLeaf::Iru(iru)) = &input.expr else {
                return Err(CliError {
                    code: EXIT_USAGE,
                    message: "simplex needs an iru descriptor".into(),
                });
            };
            let trace = spectral_simplex(iru, *direction, *tol, *max_iter)?;
            let certified = trace
                .certification
                .as_ref()
                .is_some_and(|c| c.is_certified());
            let mut o = Outcome::check(certified, "FAIL", to_value(&trace));
            if certified {
                o.status = "OK";
            }
            o
        }
        Command::Jsr { n_max, .. } | Command::Lsr { n_max, .. } => {
            params.insert("n_max".into(), json!(n_max));
            params.insert("norm".into(), json!("l1"));
            let s = expand(&input.expr)?;
            let summary = jsr_lsr_bounds(&s, *n_max, guard)?;
            let bracket = if name == "jsr" {
                json!([summary.jsr_lower, summary.jsr_upper])
            } else {
                json!([summary.lsr_lower, summary.lsr_upper])
            };
            let mut o = Outcome::ok(json!({"bracket": bracket, "summary": summary}));
            o.table = Some(summary.to_csv());
            o
        }
        Command::Finiteness {
            n_max,
            tol,
            seed,
            samples,
            ..
        } => {
            let opts = FinitenessOptions {
                n_max: *n_max,
                sandwich_samples: *samples,
                tol: *tol,
                seed: *seed,
                size_guard: guard,
            };
            params.insert("n_max".into(), json!(n_max));
            params.insert("tol".into(), json!(tol));
            params.insert("seed".into(), json!(seed));
            params.insert("sandwich_samples".into(), json!(samples));
            let r = finiteness_verify(&input.expr, &opts)?;
            Outcome::check(r.status == CheckStatus::Pass, "FAIL", to_value(&r))
        }
        Command::HsetProbe {
            trials, seed, tol, ..
        } => {
            params.insert("trials".into(), json!(trials));
            params.insert("seed".into(), json!(seed));
            params.insert("strict_tol".into(), json!(tol));
            let s = expand(&input.expr)?;
            let r = hourglass_probe_explicit(&s, *trials, *seed, *tol)?;
            Outcome::check(r.status == ProbeStatus::Pass, "VIOLATION", to_value(&r))
        }
        Command::Hausdorff { other, norm, .. } => {
            let set_norm = match norm.as_str() {
                "max" => SetNorm::EntrywiseMax,
                "l1" => SetNorm::L1Operator,
                n => {
                    return Err(CliError {
                        code: EXIT_USAGE,
                        message: format!("norm must be max or l1, got {n}"),
                    })
                }
            };
            params.insert("other".into(), json!(other.display().to_string()));
            params.insert("norm".into(), json!(norm));
            let second = load(other, common.epsilon)?;
            digests.push(second.digest.clone());
            let a = expand(&input.expr)?;
            let b = expand(&second.expr)?;
            Outcome::ok(to_value(&hausdorff_distance(&a, &b, set_norm)?))
        }
        Command::ConvCheck {
            n_max,
            samples,
            seed,
            tol,
            ..
        } => {
            params.insert("n".into(), json!(n_max));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(seed));
            params.insert("tol".into(), json!(tol));
            let s = expand(&input.expr)?;
            let r = conv_lsr_check(&s, *n_max, *samples, *seed, *tol)?;
            Outcome::check(r.status == CheckStatus::Pass, "FAIL", to_value(&r))
        }
        Command::Gen { .. } => unreachable!(),
    };
    let report = RunReport {
        command: name.to_string(),
        input_digests: digests,
        parameters: params,
        status: outcome.status.to_string(),
        results: outcome.results,
        wall_time_s: start.elapsed().as_secs_f64(),
        table: outcome.table,
    };
    Ok((report, outcome.code))
}

fn run_gen(command: &Command, out: &mut dyn Write) -> CliResult<()> {
    let Command::Gen {
        kind,
        n,
        width,
        lo,
        hi,
        seed,
        allow_boundary,
        depth,
        max_size,
        epsilon,
        output,
    } = command
    else {
        unreachable!()
    };
    let params = GenParams {
        kind: *kind,
        n: *n,
        width: *width,
        lo: *lo,
        hi: *hi,
        seed: *seed,
        allow_boundary: *allow_boundary,
        depth: *depth,
        max_size: *max_size,
        epsilon: *epsilon,
    };
    let text = descriptor::to_string(&gen_instance(&params)?);
    let io_err = |e: std::io::Error| CliError {
        code: EXIT_USAGE,
        message: e.to_string(),
    };
    match output {
        Some(path) => std::fs::write(path, text).map_err(io_err),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// Parses `args` (including the program name), runs the command and
/// writes the report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    if matches!(cli.command, Command::Gen { .. }) {
        return match run_gen(&cli.command, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {}", e.message);
                e.code
            }
        };
    }
    let format = match &cli.command {
        Command::Radius { common, .. }
        | Command::Extremal { common, .. }
        | Command::Simplex { common, .. }
        | Command::Jsr { common, .. }
        | Command::Lsr { common, .. }
        | Command::Finiteness { common, .. }
        | Command::HsetProbe { common, .. }
        | Command::Hausdorff { common, .. }
        | Command::ConvCheck { common, .. } => common.format,
        Command::Gen { .. } => unreachable!(),
    };
    match execute(&cli.command) {
        Ok((report, code)) => {
            // one write so a reader never sees half a report
            let _ = out.write_all(report.render(format).as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
