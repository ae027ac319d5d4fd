use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rr_core::bench::{
    generate_instance, run_algorithm, run_experiment, thread_pool, AlgoParams, Algorithm,
    ExperimentSpec, GenParams, Prepared, Reference, UflMetric,
};
use rr_core::instance::{ProblemKind, StochasticInstance};
use rr_core::lp::solve_lp;
use rr_core::model::BlackBox;
use rr_core::oracle::verify_ratio;
use rr_core::saa::{repeating_saa, SaaConfig};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rr",
    version,
    about = "Two-stage stochastic optimization with reservations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exit with status 3 when a worst-case guarantee is violated.
    #[arg(long, global = true)]
    assert_bounds: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve the LP relaxation.
    SolveLp {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run one rounding algorithm.
    Round {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        algorithm: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Exact optimum by enumeration.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Repeated sample average approximation over the instance's distribution.
    Saa(SaaArgs),
    /// Run an experiment table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    /// Elements, vertices or clients.
    #[arg(long)]
    n: usize,
    /// Sets or facilities.
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    #[arg(long, default_value_t = 3)]
    scenarios: usize,
    #[arg(long, default_value_t = 0.5)]
    inclusion: f64,
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Facility location distances: euclidean or incidence.
    #[arg(long, default_value = "euclidean")]
    metric: String,
}

impl GenArgs {
    fn params(&self) -> Result<GenParams> {
        Ok(GenParams {
            kind: self.kind.parse()?,
            n: self.n,
            m: self.m,
            density: self.density,
            scenarios: self.scenarios,
            inclusion: self.inclusion,
            sigma: self.sigma,
            lambda: self.lambda,
            metric: match self.metric.as_str() {
                "euclidean" => UflMetric::Euclidean,
                "incidence" => UflMetric::Incidence,
                other => bail!("unknown metric {other:?} (expected euclidean or incidence)"),
            },
        })
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.4)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> AlgoParams {
        let d = AlgoParams::default();
        AlgoParams {
            alpha: self.alpha,
            beta: self.beta,
            theta: self.theta.unwrap_or(d.theta),
            gamma: self.gamma.unwrap_or(d.gamma),
            psi: self.psi,
        }
    }
}

#[derive(Args)]
struct SaaArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Inner solver: a registered algorithm or `oracle`.
    #[arg(long, default_value = "oracle")]
    algorithm: String,
    #[arg(long, default_value_t = 1.0)]
    c_k: f64,
    #[arg(long, default_value_t = 1.0)]
    c_n: f64,
    #[arg(long)]
    k_reps: Option<usize>,
    #[arg(long)]
    n_samples: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files; when absent instances are generated.
    #[arg(long)]
    instance: Vec<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    /// Number of generated instances.
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    scenarios: usize,
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Comma-separated algorithm names; all applicable when absent.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Skip the exact oracle column.
    #[arg(long)]
    no_oracle: bool,
    /// Record wall-clock runtimes (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    params: ParamArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let pool = thread_pool()?;
    pool.install(|| match &cli.command {
        Command::Gen(args) => {
            let inst = generate_instance(&args.params()?, cli.seed)?;
            emit(cli.out.as_deref(), &inst.to_json())?;
            Ok(0)
        }
        Command::SolveLp { instance } => solve_lp_cmd(cli, &load(instance)?),
        Command::Round {
            instance,
            algorithm,
            params,
        } => round_cmd(cli, &load(instance)?, algorithm, &params.params()),
        Command::Oracle { instance } => {
            let r = load(instance)?.oracle()?;
            emit_json(cli.out.as_deref(), &serde_json::to_value(&r)?)?;
            Ok(0)
        }
        Command::Saa(args) => saa_cmd(cli, args),
        Command::Bench(args) => bench_cmd(cli, args),
    })
}

fn load(path: &Path) -> Result<StochasticInstance> {
    StochasticInstance::read(path).with_context(|| format!("reading instance {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(out, &s)
}

fn solve_lp_cmd(cli: &Cli, inst: &StochasticInstance) -> Result<u8> {
    let lp = inst.build_lp()?;
    let (primal, dual) = solve_lp(&lp);
    let values: serde_json::Map<String, Value> = lp
        .tags()
        .iter()
        .zip(&primal.values)
        .map(|(t, v)| (t.to_string(), json!(v + 0.0)))
        .collect();
    emit_json(
        cli.out.as_deref(),
        &json!({
            "status": primal.status,
            "objective": primal.objective_value,
            "values": values,
            // adding 0.0 turns -0.0 into 0.0
            "duals": dual.duals.iter().map(|d| d + 0.0).collect::<Vec<f64>>(),
        }),
    )?;
    Ok(0)
}

fn round_cmd(
    cli: &Cli,
    inst: &StochasticInstance,
    algorithm: &str,
    params: &AlgoParams,
) -> Result<u8> {
    let algo: Algorithm = algorithm.parse()?;
    let prep = Prepared::new(inst)?;
    let run = run_algorithm(&prep, algo, params, cli.seed)?;
    let report = inst.check(&run.solution);
    let mut check = Value::Null;
    if let Some(g) = run.guarantee.filter(|_| cli.assert_bounds) {
        let reference = match g.reference {
            Reference::Lp => prep.lp_opt,
            Reference::Oracle => Some(inst.oracle()?.optimal_cost),
        };
        if let Some(r) = reference {
            let v = verify_ratio(run.cost, r, g.factor);
            check = json!({"reference": g.reference, "factor": g.factor, "pass": v.pass, "slack": v.slack});
        }
    }
    emit_json(
        cli.out.as_deref(),
        &json!({
            "algorithm": algo.name(),
            "seed": cli.seed,
            "lp_opt": prep.lp_opt,
            "cost": run.cost,
            "feasible": report.is_feasible(),
            "violations": report.violations,
            "bound_check": check,
            "solution": run.solution,
        }),
    )?;
    if !report.is_feasible() {
        return Ok(EXIT_INFEASIBLE);
    }
    if check.get("pass") == Some(&Value::Bool(false)) {
        return Ok(EXIT_BOUND);
    }
    Ok(0)
}

fn saa_cmd(cli: &Cli, args: &SaaArgs) -> Result<u8> {
    let inst = load(&args.instance)?;
    if inst.kind() == ProblemKind::Ufl {
        bail!("saa needs per-item prices independent of the scenario; facility location is not supported");
    }
    let mut cfg = SaaConfig::derive(
        args.epsilon,
        args.delta,
        inst.lambda(),
        inst.num_items(),
        args.c_k,
        args.c_n,
    )?;
    cfg.k_reps = args.k_reps.unwrap_or(cfg.k_reps);
    cfg.n_samples = args.n_samples.unwrap_or(cfg.n_samples);
    let inner: Option<Algorithm> = match args.algorithm.as_str() {
        "oracle" => None,
        name => Some(name.parse()?),
    };
    let params = args.params.params();
    let black_box = BlackBox::new(inst.scenarios.clone())?;
    let outcome = repeating_saa(&black_box, &cfg, cli.seed, |sample, seed| {
        let sampled = inst.with_scenarios(sample.scenarios.clone())?;
        let (solution, estimate) = match inner {
            None => {
                let r = sampled.oracle()?;
                (r.optimal_solution, r.optimal_cost)
            }
            Some(algo) => {
                let prep = Prepared::new(&sampled)?;
                let run = run_algorithm(&prep, algo, &params, seed)?;
                (run.solution, run.cost)
            }
        };
        Ok((solution.reserved, estimate))
    })?;
    let chosen = outcome.chosen();
    let true_value = inst.first_stage_value(&chosen.solution).ok();
    emit_json(
        cli.out.as_deref(),
        &json!({
            "k_reps": cfg.k_reps,
            "n_samples": cfg.n_samples,
            "chosen_rep": chosen.rep,
            "reserved": chosen.solution,
            "estimate": chosen.estimate,
            "true_value": true_value,
            "candidates": outcome.candidates.iter().map(|c| json!({
                "rep": c.rep, "estimate": c.estimate, "reserved": c.solution,
            })).collect::<Vec<_>>(),
        }),
    )?;
    Ok(0)
}

fn bench_cmd(cli: &Cli, args: &BenchArgs) -> Result<u8> {
    let mut instances = Vec::new();
    for path in &args.instance {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        instances.push((id, load(path)?));
    }
    if instances.is_empty() {
        let Some(kind) = &args.kind else {
            bail!("bench needs --instance files or --kind")
        };
        let mut p = GenParams::new(kind.parse()?, args.n, args.m, args.scenarios);
        p.sigma = args.sigma;
        p.lambda = args.lambda;
        for i in 0..args.count {
            let seed = cli.seed.wrapping_add(i as u64);
            instances.push((format!("{kind}-{i:03}"), generate_instance(&p, seed)?));
        }
    }
    let algorithms = args
        .algorithms
        .iter()
        .map(|a| a.parse())
        .collect::<rr_core::Result<Vec<Algorithm>>>()?;
    let spec = ExperimentSpec {
        instances,
        algorithms,
        params: args.params.params(),
        trials: args.trials,
        base_seed: cli.seed,
        with_oracle: !args.no_oracle,
        timing: args.timing,
    };
    let report = run_experiment(&spec)?;
    let text = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(cli.out.as_deref(), &text)?;
    if report.infeasible_rows() > 0 {
        eprintln!("{} infeasible rows", report.infeasible_rows());
        return Ok(EXIT_INFEASIBLE);
    }
    if cli.assert_bounds && report.bound_violations() > 0 {
        eprintln!("{} rows violate their guarantee", report.bound_violations());
        return Ok(EXIT_BOUND);
    }
    Ok(0)
}
