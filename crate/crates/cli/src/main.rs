//! `lyzero`: exact partition functions, Lee-Yang zeros, and the
//! interaction-induced bounds, from model files on disk.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use lyzero_core::{
    bottleneck_matching, bound_condition_i, bound_condition_ii, brute_force_partition,
    chain_transfer_partition, classify, corollary_bounds, find_zeros_with,
    hierarchical_partition_permuted, operator_partition, verify_with_polynomial, zero_trajectory,
    CouplingSpec, FugacityPolynomial, MeasureSpec, ModelSpec, Precision, RootFindOptions,
    DEFAULT_CIRCLE_TOL,
};
use report::{
    gnuplot_script, scan_csv, to_json_pretty, BoundsRecord, GnuplotKind, PartitionRecord,
    ScanPoint, ZerosRecord,
};

#[derive(Parser)]
#[command(
    name = "lyzero",
    version,
    about = "Lee-Yang zero laboratory for ferromagnetic lattice models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads; the LYZERO_THREADS environment variable overrides.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Evaluation precision for root polishing.
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the fugacity polynomial of a model.
    Partition {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Also write a companion gnuplot script next to the CSV.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Locate all zeros in the fugacity plane and classify them.
    Zeros {
        #[arg(long)]
        model: PathBuf,
        /// Unit-circle tolerance on ||z| - 1|.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        gnuplot: bool,
    },
    /// Report the structural conditions of the coupling matrix.
    Structure {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Print the θ bounds and model-level corollary bounds for β and ϰ.
    Bounds {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        kappa: f64,
        /// Emit the full-precision JSON record instead of the 4-decimal text.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Compare the theorem's prediction with the exact zeros; exits with
    /// status 2 when a promised unit-circle verdict fails.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Classify a parameterized family over a grid.
    Scan {
        /// Base model file; the scanned parameter overrides its value.
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of grid points (endpoints included).
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        gnuplot: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Auto,
    Brute,
    Operator,
    Transfer,
    Hierarchical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    Theta,
    Beta,
    CouplingScale,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("LYZERO_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(cli.threads)
        .max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_spec(path: &PathBuf) -> anyhow::Result<ModelSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    Ok(ModelSpec::from_json(&text)?)
}

/// Builds the polynomial with the requested engine; `auto` picks the
/// cheapest exact engine the coupling admits.
fn polynomial_for(
    spec: &ModelSpec,
    engine: EngineArg,
) -> lyzero_core::Result<(FugacityPolynomial, &'static str)> {
    let m = spec.build()?;
    let chosen = if engine == EngineArg::Auto {
        match spec.coupling {
            CouplingSpec::Chain { .. } => EngineArg::Transfer,
            CouplingSpec::Hierarchical { .. } => EngineArg::Hierarchical,
            CouplingSpec::Dense { .. } => EngineArg::Brute,
        }
    } else {
        engine
    };
    match chosen {
        EngineArg::Brute => Ok((brute_force_partition(&m)?, "brute")),
        EngineArg::Operator => Ok((operator_partition(&m)?, "operator")),
        EngineArg::Transfer => {
            let periodic = matches!(spec.coupling, CouplingSpec::Chain { periodic: true, .. });
            Ok((chain_transfer_partition(&m, periodic)?, "transfer"))
        }
        EngineArg::Hierarchical => {
            let hspec = spec.coupling.hierarchy()?;
            let perm = match &spec.coupling {
                CouplingSpec::Hierarchical { perm, .. } => perm.clone(),
                _ => None,
            };
            Ok((
                hierarchical_partition_permuted(&m, &hspec, perm.as_deref())?,
                "hierarchical",
            ))
        }
        EngineArg::Auto => unreachable!("auto resolved above"),
    }
}

fn emit(path: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_gnuplot(
    gnuplot: bool,
    out: Format,
    path: &Option<PathBuf>,
    kind: GnuplotKind,
) -> anyhow::Result<()> {
    if !gnuplot {
        return Ok(());
    }
    let Some(csv_path) = path else {
        bail!("--gnuplot requires --out csv together with --path");
    };
    if out != Format::Csv {
        bail!("--gnuplot requires --out csv together with --path");
    }
    let script_path = csv_path.with_extension("gp");
    let script = gnuplot_script(kind, &csv_path.display().to_string());
    std::fs::write(&script_path, script)
        .with_context(|| format!("cannot write {}", script_path.display()))?;
    Ok(())
}

fn spec_with_param(base: &ModelSpec, param: ParamArg, x: f64) -> ModelSpec {
    let mut spec = base.clone();
    match param {
        ParamArg::Theta => spec.measure = MeasureSpec::BlumeCapel { theta: x },
        ParamArg::Beta => spec.beta = x,
        ParamArg::CouplingScale => {
            spec.coupling = match &base.coupling {
                CouplingSpec::Chain { n, j, periodic } => CouplingSpec::Chain {
                    n: *n,
                    j: j * x,
                    periodic: *periodic,
                },
                CouplingSpec::Dense { n, entries } => CouplingSpec::Dense {
                    n: *n,
                    entries: entries.iter().map(|e| e * x).collect(),
                },
                CouplingSpec::Hierarchical { n, levels, perm } => CouplingSpec::Hierarchical {
                    n: *n,
                    levels: levels.iter().map(|l| l * x).collect(),
                    perm: perm.clone(),
                },
            }
        }
    }
    spec
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let opts = RootFindOptions {
        precision: cli.precision.into(),
        ..Default::default()
    };
    match cli.command {
        Command::Partition {
            model,
            engine,
            out,
            path,
            gnuplot,
        } => {
            let spec = load_spec(&model)?;
            let (p, engine_name) = polynomial_for(&spec, engine)?;
            let m = spec.build()?;
            let record = PartitionRecord::new(
                engine_name,
                m.sites(),
                m.sites() as f64 * m.measure.log_prefactor_per_site(),
                &p,
            );
            let content = match out {
                Format::Json => to_json_pretty(&record),
                Format::Csv => record.to_csv(),
            };
            emit(&path, &content)?;
            emit_gnuplot(gnuplot, out, &path, GnuplotKind::Partition)?;
            Ok(0)
        }
        Command::Zeros {
            model,
            tol,
            engine,
            out,
            path,
            gnuplot,
        } => {
            let spec = load_spec(&model)?;
            let tol = tol.unwrap_or(DEFAULT_CIRCLE_TOL);
            if tol <= 0.0 || tol.is_nan() {
                bail!("--tol must be > 0");
            }
            let (p, _) = polynomial_for(&spec, engine)?;
            let zs = find_zeros_with(&p, &opts)?;
            let verdict = classify(&zs, &p, tol);
            let record = ZerosRecord::new(&zs, verdict, tol);
            let content = match out {
                Format::Json => to_json_pretty(&record),
                Format::Csv => record.to_csv(),
            };
            emit(&path, &content)?;
            emit_gnuplot(gnuplot, out, &path, GnuplotKind::Zeros)?;
            Ok(0)
        }
        Command::Structure { model, path } => {
            let spec = load_spec(&model)?;
            let m = spec.build()?;
            let report = bottleneck_matching(&m.coupling)?;
            emit(&path, &to_json_pretty(&report))?;
            Ok(0)
        }
        Command::Bounds {
            beta,
            kappa,
            json,
            path,
        } => {
            if beta <= 0.0 || kappa <= 0.0 || beta.is_nan() || kappa.is_nan() {
                bail!("bounds requires --beta > 0 and --kappa > 0");
            }
            let x = beta * kappa;
            let (bi, bii) = (bound_condition_i(x), bound_condition_ii(x));
            let content = if json {
                let c = corollary_bounds(beta, kappa);
                to_json_pretty(&BoundsRecord {
                    beta,
                    kappa,
                    beta_kappa: x,
                    theta_bound_i: bi,
                    theta_bound_ii: bii,
                    delta_max: c.delta_max,
                    q_max: c.q_max,
                    delta_max_below_half_kappa: c.delta_max_below_half_kappa,
                })
            } else {
                format!("theta_bound_i  = {bi:.4}\ntheta_bound_ii = {bii:.4}\n")
            };
            emit(&path, &content)?;
            Ok(0)
        }
        Command::Verify {
            model,
            engine,
            path,
        } => {
            let spec = load_spec(&model)?;
            let m = spec.build()?;
            let (p, _) = polynomial_for(&spec, engine)?;
            let v = verify_with_polynomial(&m, &p, &opts)?;
            let mismatch = v.mismatch();
            emit(&path, &to_json_pretty(&v))?;
            if mismatch {
                eprintln!("verify: prediction and observation disagree");
                Ok(2)
            } else {
                Ok(0)
            }
        }
        Command::Scan {
            family,
            param,
            from,
            to,
            steps,
            tol,
            out,
            path,
            gnuplot,
        } => {
            let spec = load_spec(&family)?;
            let tol = tol.unwrap_or(DEFAULT_CIRCLE_TOL);
            if steps == 0 {
                bail!("--steps must be >= 1");
            }
            if steps > 1 && from == to {
                bail!("--from and --to must differ for steps > 1");
            }
            let grid: Vec<f64> = if steps == 1 {
                vec![from]
            } else {
                (0..steps)
                    .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
                    .collect()
            };
            let family_fn = |x: f64| -> lyzero_core::Result<FugacityPolynomial> {
                polynomial_for(&spec_with_param(&spec, param, x), EngineArg::Auto).map(|(p, _)| p)
            };
            let points = zero_trajectory(family_fn, &grid, tol, &opts)?;
            let records: Vec<ScanPoint> = points
                .iter()
                .map(|pt| ScanPoint {
                    param: pt.param,
                    holds: pt.verdict.holds,
                    max_radial_deviation: pt.verdict.max_radial_deviation,
                    first_zero_phase: pt.verdict.first_zero_phase,
                    first_gamma: pt.verdict.gammas.first().copied(),
                })
                .collect();
            let content = match out {
                Format::Json => to_json_pretty(&records),
                Format::Csv => scan_csv(&records),
            };
            emit(&path, &content)?;
            emit_gnuplot(gnuplot, out, &path, GnuplotKind::Scan)?;
            Ok(0)
        }
    }
}
