use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exterior_blowup::exponents::{
    classify_regime, compute_gamma, BoundaryCondition, ExponentVector, DEFAULT_TOL_CRIT,
};
use exterior_blowup::harness::{
    self, fit_scaling, geometric_eps, load_config, report, sweep, verify_lemma_batch,
    write_sweep_artifacts, FitModel, HorizonRule, LemmaBatchSpec, Overrides, SweepSpec,
};
use exterior_blowup::solver::{run, write_record, Verdict};
use exterior_blowup::Result;

#[derive(Parser)]
#[command(
    name = "blowup-lab",
    version,
    about = "Lifespan laboratory for coupled damped wave systems outside the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct BcArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

impl BcArgs {
    fn boundary(&self) -> Result<BoundaryCondition> {
        BoundaryCondition::new(self.alpha.unwrap_or(0.0), self.beta.unwrap_or(1.0))
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// TOML run configuration.
    config: PathBuf,
    #[arg(long)]
    dim: Option<u32>,
    #[command(flatten)]
    bc: BcArgs,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            dim: self.dim,
            alpha: self.bc.alpha,
            beta: self.bc.beta,
            epsilon: self.eps,
            cells: self.cells,
            t_end: self.t_end,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Power,
    PowerLog,
}

#[derive(Subcommand)]
enum Command {
    /// Solve (P - I)γ = 1 for a comma-separated exponent list.
    Gamma {
        p: String,
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long)]
        json: bool,
    },
    /// Lifespan regime and bound shape.
    Classify {
        p: String,
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = DEFAULT_TOL_CRIT)]
        tol_crit: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sup-ratio batch for the cutoff derivative estimates.
    VerifyLemma {
        /// Restrict to one dimension.
        #[arg(long)]
        dim: Option<u32>,
        /// Restrict to one boundary condition.
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// One run from a config file.
    Simulate(RunArgs),
    /// ε-sweep of a config; writes sweep.csv, manifest.json and plot.dat.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Strictly decreasing ε values.
        #[arg(long, value_delimiter = ',', conflicts_with = "eps_range")]
        eps_list: Option<Vec<f64>>,
        /// `hi,lo,n` geometric points.
        #[arg(long, value_delimiter = ',')]
        eps_range: Option<Vec<f64>>,
        /// Scale horizons by the predicted law times this factor.
        #[arg(long)]
        bound_aware: Option<f64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Log-log fit of a sweep CSV.
    Fit {
        csv: PathBuf,
        #[arg(long, value_enum, default_value = "power")]
        model: ModelArg,
        #[arg(long)]
        b_theory: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute fit and plot data for a sweep directory.
    Report {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct GammaRecord {
    p: Vec<f64>,
    gamma: Vec<f64>,
    gamma_max: f64,
    #[serde(rename = "Gamma_excess")]
    gamma_excess: f64,
    regime: &'static str,
    bound: Option<String>,
}

fn regime_label(excess: f64, tol: f64) -> &'static str {
    if excess > tol {
        "subcritical"
    } else if excess >= -tol {
        "critical"
    } else {
        "supercritical"
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.10}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn gamma_record(
    p: &str,
    dim: u32,
    bc: Option<&BoundaryCondition>,
    tol: f64,
) -> Result<GammaRecord> {
    let p = ExponentVector::parse_list(p)?;
    let g = compute_gamma(&p, dim)?;
    let bound = bc
        .map(|bc| classify_regime(&p, dim, bc, tol).map(|b| b.describe()))
        .transpose()?;
    Ok(GammaRecord {
        p: g.p.clone(),
        gamma: g.gamma.clone(),
        gamma_max: g.gamma_max,
        gamma_excess: g.gamma_excess,
        regime: regime_label(g.gamma_excess, tol),
        bound,
    })
}

fn print_gamma_table(rec: &GammaRecord) {
    println!("p            {}", fmt_list(&rec.p));
    println!("gamma        {}", fmt_list(&rec.gamma));
    println!("gamma_max    {:.10}", rec.gamma_max);
    println!("Gamma        {:.10}", rec.gamma_excess);
    println!("regime       {}", rec.regime);
    if let Some(b) = &rec.bound {
        println!("bound        {b}");
    }
}

fn pool(threads: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    threads
        .map(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| exterior_blowup::Error::Config(format!("thread pool: {e}")))
        })
        .transpose()
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| exterior_blowup::Error::io(dir, e))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gamma { p, dim, json } => {
            let rec = gamma_record(&p, dim, None, DEFAULT_TOL_CRIT)?;
            if json {
                print_json(&rec)?;
            } else {
                print_gamma_table(&rec);
            }
        }
        Command::Classify {
            p,
            dim,
            bc,
            tol_crit,
            json,
        } => {
            let bc = bc.boundary()?;
            let rec = gamma_record(&p, dim, Some(&bc), tol_crit)?;
            if json {
                print_json(&rec)?;
            } else {
                println!(
                    "boundary     {} (alpha = {}, beta = {})",
                    bc.kind(),
                    bc.alpha,
                    bc.beta
                );
                print_gamma_table(&rec);
            }
        }
        Command::VerifyLemma {
            dim,
            bc,
            radii,
            samples,
            threads,
            json,
        } => {
            let mut spec = LemmaBatchSpec::default();
            if let Some(d) = dim {
                spec.dims = vec![d];
            }
            if bc.alpha.is_some() || bc.beta.is_some() {
                spec.bcs = vec![bc.boundary()?];
            }
            if let Some(r) = radii {
                spec.radii = r;
            }
            if let Some(n) = samples {
                spec.sampling.nt = n;
                spec.sampling.nr = n;
            }
            let rep = match pool(threads)? {
                Some(pool) => pool.install(|| verify_lemma_batch(&spec))?,
                None => verify_lemma_batch(&spec)?,
            };
            if json {
                print_json(&rep)?;
            } else {
                for w in &rep.warnings {
                    println!("warning: {w}");
                }
                println!("{:>3} {:>10} {:>8}  band(i..iv)", "d", "bc", "lambda");
                for row in &rep.rows {
                    println!(
                        "{:>3} {:>10} {:>8.4}  {:.3} {:.3} {:.3} {:.3}  {}",
                        row.dim,
                        row.bc.kind().to_string(),
                        row.lambda.lambda,
                        row.band[0],
                        row.band[1],
                        row.band[2],
                        row.band[3],
                        if row.pass { "ok" } else { "FAIL" }
                    );
                }
                if let Some((row, v)) = rep.first_violation() {
                    println!(
                        "first violation: d={} estimate {} at t={}, r={} ({} > {})",
                        row.dim, v.estimate, v.t, v.r, v.left, v.right
                    );
                }
                println!("overall: {}", if rep.pass { "pass" } else { "FAIL" });
            }
            if !rep.pass {
                return Err(exterior_blowup::Error::Violation(
                    "lemma batch failed".into(),
                ));
            }
        }
        Command::Simulate(args) => {
            let config = args.overrides().apply(&load_config(&args.config)?)?;
            let record = run(&config)?;
            if let Some(dir) = &args.out {
                ensure_dir(dir)?;
                write_record(&record, &dir.join("run.json"))?;
                if let Some(h) = &record.history {
                    h.write_csv(&dir.join("history.csv"))?;
                }
            }
            if args.json {
                print_json(&record)?;
            } else {
                match record.verdict {
                    Verdict::BlewUp { t_blow } => println!("blew up at t = {t_blow:.6}"),
                    Verdict::SurvivedHorizon { t_end } => println!("survived to t = {t_end}"),
                }
                println!(
                    "dr = {:.6e}, dt = {:.6e}, steps = {}",
                    record.dr, record.dt, record.steps
                );
                if let Some(t) = record.t_cross {
                    println!("threshold crossing at t = {t:.6}");
                }
                if record.nan_flag {
                    println!("warning: non-finite values before the threshold");
                }
            }
        }
        Command::Sweep {
            run,
            eps_list,
            eps_range,
            bound_aware,
            threads,
        } => {
            let base = run.overrides().apply(&load_config(&run.config)?)?;
            let epsilons = match (eps_list, eps_range) {
                (Some(list), _) => list,
                (None, Some(r)) if r.len() == 3 => geometric_eps(r[0], r[1], r[2] as usize)?,
                (None, Some(_)) => {
                    return Err(exterior_blowup::Error::Config(
                        "--eps-range takes hi,lo,n".into(),
                    ))
                }
                (None, None) => vec![base.data.epsilon],
            };
            let mut spec = SweepSpec::new(base, epsilons);
            spec.threads = threads;
            if let Some(factor) = bound_aware {
                spec.horizon = HorizonRule::BoundAware { factor };
            }
            let result = sweep(&spec)?;
            let out = run.out.unwrap_or_else(|| PathBuf::from("sweep-out"));
            let paths = write_sweep_artifacts(&out, &result)?;
            if run.json {
                print_json(&result)?;
            } else {
                println!("{:>10} {:>14} {:>10}", "epsilon", "t_blow", "verdict");
                for p in &result.points {
                    let t = p.t_blow().map_or("-".to_string(), |t| format!("{t:.6}"));
                    println!("{:>10.6} {:>14} {:>10}", p.epsilon, t, p.verdict_label());
                }
                println!("wrote {}", paths.csv.display());
            }
        }
        Command::Fit {
            csv,
            model,
            b_theory,
            json,
        } => {
            let rows = harness::report::read_sweep_csv(&csv)?;
            let points = harness::report::rows_to_points(&rows);
            let model = match model {
                ModelArg::Power => FitModel::PowerLaw,
                ModelArg::PowerLog => FitModel::PowerLogLaw,
            };
            let fit = fit_scaling(&points, model, b_theory)?;
            if json {
                print_json(&fit)?;
            } else {
                println!("points   {}", fit.points);
                println!("b        {:.6}", fit.b);
                println!("A        {:.6}", fit.a);
                println!("residual {:.3e}", fit.residual);
                if let (Some(bt), Some(dev)) = (fit.b_theory, fit.deviation) {
                    println!("b_theory {bt:.6} (relative deviation {dev:.3})");
                }
            }
        }
        Command::Report { dir, json } => {
            let summary = report(&dir)?;
            if json {
                print_json(&summary)?;
            } else {
                println!("bound        {}", summary.bound.describe());
                println!(
                    "runs         {} ({} usable)",
                    summary.runs,
                    summary.points.len()
                );
                if let Some(fit) = &summary.fit {
                    println!("fitted b     {:.6}", fit.b);
                }
                if let Some(c) = &summary.one_sided {
                    println!("C = max T/x^b {:.6} (spread {:.3})", c.c, c.spread);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
