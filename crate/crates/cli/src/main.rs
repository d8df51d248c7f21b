//! `qnetcap`: generate spatial fiber networks, query min-cut capacities and
//! run seeded ensemble sweeps. Results go to stdout as JSON, logs to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use qnetcap_core::asymptotics::{
    critical_density_waxman_exact, node_bound_scale_free, node_bound_waxman_exact,
    solve_critical_density, zeta_er, zeta_waxman, BoundResult, Method, QuadratureSpec,
    DEFAULT_EPSILON_KM,
};
use qnetcap_core::ensemble::{
    find_crossing, fit_linear_above, read_summary_csv, write_records_csv, write_summary_csv,
    SummaryRow,
};
use qnetcap_core::graphstats::{
    clustering, components, degree_histogram, fit_poisson, fit_power_law,
};
use qnetcap_core::netgen::{
    from_json, half_width_for_alpha, to_json, DEFAULT_ALPHA_L_KM,
};
use qnetcap_core::{
    generate, run_sweep, run_sweep_with_workers, Error, ExperimentConfig, Family, LossParams,
    ModelParams, WeightedGraph, DEFAULT_GAMMA,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qnetcap", version, about = "End-to-end quantum capacity of random fiber networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as a JSON graph document.
    Generate(GenerateArgs),
    /// Min-cut capacity between two nodes of a graph document.
    Capacity(CapacityArgs),
    /// Degree, component and clustering statistics of a graph document.
    Stats(StatsArgs),
    /// Run an ensemble sweep and write records and summary CSVs.
    Sweep(SweepArgs),
    /// Evaluate the capacity constants and node-capacity bounds.
    Asymptotics(AsymptoticsArgs),
    /// Critical density and high-density slope of a summary CSV.
    Fit(FitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModelArg {
    Waxman,
    ErdosRenyi,
    ScaleFree,
}

impl From<ModelArg> for Family {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Waxman => Family::Waxman,
            ModelArg::ErdosRenyi => Family::ErdosRenyi,
            ModelArg::ScaleFree => Family::ScaleFree,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Region {
    /// Half-width R of the square region, km.
    #[arg(long = "r-km")]
    r_km: Option<f64>,
    /// Waxman scale; sets R = alpha_L / (2 sqrt(2) alpha).
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    region: Region,
    /// Waxman decay length alpha_L, km.
    #[arg(long = "alpha-l", default_value_t = DEFAULT_ALPHA_L_KM)]
    alpha_l: f64,
    /// Links per new node (scale-free).
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Erdős–Rényi link probability; matched to Waxman if omitted.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CapacityArgs {
    /// Graph document written by `generate`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    /// Fiber attenuation, decades per km (0.02 = 0.2 dB/km).
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Smallest degree in the power-law fit.
    #[arg(long = "k-min", default_value_t = 2)]
    k_min: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output prefix; writes PREFIX_records.csv and PREFIX_summary.csv.
    #[arg(long)]
    out: String,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = "QNETCAP_THREADS")]
    threads: Option<usize>,
    /// Use 100 graphs x 50 pairs per point.
    #[arg(long)]
    full: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Which {
    Zeta,
    ZetaEr,
    NodeBoundWaxman,
    NodeBoundScaleFree,
    CriticalDensity,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BoundKind {
    Asymptotic,
    Exact,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    /// Waxman decay length alpha_L, km.
    #[arg(long = "alpha-l", default_value_t = DEFAULT_ALPHA_L_KM)]
    alpha_l: f64,
    #[arg(long)]
    n: Option<usize>,
    /// Half-width R of the square region, km.
    #[arg(long = "r-km", conflicts_with = "alpha")]
    r_km: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Monte Carlo pair samples.
    #[arg(long, default_value_t = 400_000)]
    samples: usize,
    /// Distance floor of the scale-free estimator, km.
    #[arg(long = "epsilon-km", default_value_t = DEFAULT_EPSILON_KM)]
    epsilon_km: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Node-capacity level for `critical_density`.
    #[arg(long, default_value_t = 1.0)]
    target: f64,
    #[arg(long, value_enum, default_value_t = BoundKind::Asymptotic)]
    bound: BoundKind,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FitArgs {
    /// Summary CSV written by `sweep`.
    #[arg(long)]
    summary: PathBuf,
    /// Capacity level that defines the critical density.
    #[arg(long, default_value_t = 1.0)]
    level: f64,
    /// Only points with mean capacity above this enter the linear fit.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
}

type CliResult = Result<Value, Error>;

fn resolve_seed(seed: Option<u64>) -> u64 {
    let seed = seed.unwrap_or_else(rand::random);
    info!("master seed {seed}");
    seed
}

fn half_width(region: &Region, alpha_l: f64) -> f64 {
    match (region.r_km, region.alpha) {
        (Some(r), _) => r,
        (None, Some(a)) => half_width_for_alpha(a, alpha_l),
        (None, None) => unreachable!("clap enforces one region flag"),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn cmd_generate(a: GenerateArgs) -> CliResult {
    let seed = resolve_seed(a.seed);
    let params = ModelParams {
        family: a.model.into(),
        n: a.n,
        r_km: half_width(&a.region, a.alpha_l),
        alpha: a.region.alpha,
        alpha_l_km: a.alpha_l,
        m: a.m,
        p: a.p,
        seed,
    };
    let graph = generate(&params)?;
    fs::write(&a.out, to_json(&graph))?;
    info!("wrote {}", a.out.display());
    Ok(json!({
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "R_km": graph.half_width(),
        "seed": seed,
        "out": a.out,
    }))
}

fn cmd_capacity(a: CapacityArgs) -> CliResult {
    let graph = from_json(&read(&a.graph)?)?;
    let weighted = WeightedGraph::new(graph, LossParams::new(a.gamma)?);
    let cut = weighted.end_to_end_capacity(a.s, a.t)?;
    let d_g = weighted.graph_distance(a.s, a.t)?;
    Ok(json!({
        "s": a.s,
        "t": a.t,
        "capacity": cut.value,
        "flow_value": cut.flow_value,
        "cut_size": cut.cut_edges.len(),
        "cut_edges": cut.cut_edges,
        "end_ratio": cut.end_incident_ratio,
        "connected": cut.connected(),
        "d_G_km": d_g,
    }))
}

fn cmd_stats(a: StatsArgs) -> CliResult {
    let graph = from_json(&read(&a.graph)?)?;
    let hist = degree_histogram(&graph);
    let comps = components(&graph);
    let poisson = fit_poisson(&hist).ok();
    let power_law = fit_power_law(&hist, a.k_min).ok();
    Ok(json!({
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "rho": graph.density(),
        "degree": {
            "mean": hist.mean,
            "variance": hist.variance,
            "dispersion": hist.dispersion(),
            "max": hist.max_degree(),
            "counts": hist.counts,
        },
        "poisson_fit": poisson,
        "power_law_fit": power_law,
        "components": comps.sizes.len(),
        "giant_fraction": comps.giant_fraction,
        "mean_clustering": clustering(&graph).mean,
    }))
}

fn cmd_sweep(a: SweepArgs) -> CliResult {
    let mut cfg = ExperimentConfig::from_json(&read(&a.config)?)?;
    cfg.master_seed = Some(resolve_seed(a.seed.or(cfg.master_seed)));
    cfg.full_protocol |= a.full;
    let out = match a.threads {
        Some(t) => run_sweep_with_workers(&cfg, t)?,
        None => run_sweep(&cfg)?,
    };
    let records_path = format!("{}_records.csv", a.out);
    let summary_path = format!("{}_summary.csv", a.out);
    write_records_csv(fs::File::create(&records_path)?, &out.records)?;
    write_summary_csv(fs::File::create(&summary_path)?, &out.summary)?;
    info!("wrote {records_path} and {summary_path}");
    let violations: usize = out.summary.iter().map(|s| s.bound_violations).sum();
    Ok(json!({
        "master_seed": out.master_seed,
        "points": out.summary.len(),
        "records": out.records.len(),
        "bound_violations": violations,
        "records_csv": records_path,
        "summary_csv": summary_path,
    }))
}

fn bound_json(name: &str, r: BoundResult, params: Value) -> Value {
    json!({
        "name": name,
        "value": r.value,
        "error": r.error,
        "method": r.method,
        "params": params,
    })
}

fn need<T>(value: Option<T>, flag: &'static str, which: &str) -> Result<T, Error> {
    value.ok_or_else(|| Error::InvalidParam {
        name: flag,
        reason: format!("required by --which {which}"),
    })
}

fn cmd_asymptotics(a: AsymptoticsArgs) -> CliResult {
    let loss = LossParams::new(a.gamma)?;
    let name = a.which.to_possible_value().expect("no skipped variants").get_name().to_string();
    let region = a.r_km.or(a.alpha.map(|al| half_width_for_alpha(al, a.alpha_l)));
    let zeta = || zeta_waxman(a.alpha_l, &loss, &QuadratureSpec::waxman_default().with_tolerance(a.tol));
    let base = json!({"gamma": a.gamma, "alpha_l_km": a.alpha_l});
    let with = |extra: Value| {
        let mut p = base.clone();
        p.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        p
    };
    match a.which {
        Which::Zeta => Ok(bound_json(&name, zeta()?, with(json!({"tol": a.tol})))),
        Which::ZetaEr => {
            let r = zeta_er(&loss, &QuadratureSpec::er_default().with_tolerance(a.tol))?;
            Ok(bound_json(&name, r, json!({"gamma": a.gamma, "tol": a.tol})))
        }
        Which::NodeBoundWaxman => {
            let n = need(a.n, "n", &name)?;
            let r_km = need(region, "r-km", &name)?;
            let rho = n as f64 / (4.0 * r_km * r_km);
            let (result, seed) = match a.bound {
                BoundKind::Asymptotic => {
                    let z = zeta()?;
                    let r = BoundResult {
                        value: z.value * rho,
                        error: z.error * rho,
                        ..z
                    };
                    (r, None)
                }
                BoundKind::Exact => {
                    let seed = resolve_seed(a.seed);
                    let r = node_bound_waxman_exact(n, r_km, a.alpha_l, &loss, a.samples, seed)?;
                    (r, Some(seed))
                }
            };
            Ok(bound_json(
                &name,
                result,
                with(json!({"n": n, "R_km": r_km, "rho": rho, "seed": seed})),
            ))
        }
        Which::NodeBoundScaleFree => {
            let r_km = need(region, "r-km", &name)?;
            let seed = resolve_seed(a.seed);
            let r = node_bound_scale_free(a.m, r_km, &loss, a.samples, a.epsilon_km, seed)?;
            Ok(bound_json(
                &name,
                r,
                json!({"gamma": a.gamma, "m": a.m, "R_km": r_km, "epsilon_km": a.epsilon_km, "seed": seed}),
            ))
        }
        Which::CriticalDensity => {
            let (value, method, seed) = match a.bound {
                BoundKind::Asymptotic => {
                    let z = zeta()?.value;
                    let rho = solve_critical_density(|rho| Ok(z * rho), a.target, 1e-12, 1.0)?;
                    (rho, Method::Quadrature, None)
                }
                BoundKind::Exact => {
                    let r_km = need(region, "r-km", &name)?;
                    let seed = resolve_seed(a.seed);
                    let rho = critical_density_waxman_exact(r_km, a.alpha_l, &loss, a.samples, seed, a.target)?;
                    (rho, Method::MonteCarlo, Some(seed))
                }
            };
            let result = BoundResult {
                value,
                error: value * 1e-7,
                method,
                samples: seed.map(|_| a.samples),
            };
            Ok(bound_json(
                &name,
                result,
                with(json!({"target": a.target, "R_km": region, "seed": seed})),
            ))
        }
    }
}

fn cmd_fit(a: FitArgs) -> CliResult {
    let rows = read_summary_csv(fs::File::open(&a.summary)?)?;
    if rows.is_empty() {
        return Err(Error::InsufficientData(format!("{} has no rows", a.summary.display())));
    }
    // one curve per (model, R) in order of first appearance
    let mut groups: Vec<(Family, f64, Vec<&SummaryRow>)> = Vec::new();
    for row in &rows {
        match groups.iter_mut().find(|g| g.0 == row.model && g.1 == row.r_km) {
            Some(g) => g.2.push(row),
            None => groups.push((row.model, row.r_km, vec![row])),
        }
    }
    let curves: Vec<Value> = groups
        .into_iter()
        .map(|(model, r_km, mut rows)| {
            rows.sort_by(|a, b| a.rho.total_cmp(&b.rho));
            let curve: Vec<(f64, f64)> = rows.iter().map(|r| (r.rho, r.mean_c)).collect();
            let crossing = find_crossing(&curve, a.level).ok();
            let fit = fit_linear_above(&curve, a.threshold).ok();
            json!({
                "model": model,
                "R_km": r_km,
                "points": curve.len(),
                "rho_c": crossing,
                "slope": fit.map(|f| f.slope),
                "intercept": fit.map(|f| f.intercept),
                "fit_points": fit.map(|f| f.points),
            })
        })
        .collect();
    Ok(json!({"level": a.level, "threshold": a.threshold, "curves": curves}))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Asymptotics(a) => cmd_asymptotics(a),
        Command::Fit(a) => cmd_fit(a),
    };
    match result {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
