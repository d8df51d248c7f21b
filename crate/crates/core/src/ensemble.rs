//! Seeded ensemble sweeps over network size or density.
//!
//! A sweep point is one `(R, N)` combination. For each point the runner
//! generates `graphs_per_point` graphs, samples `pairs_per_graph` node pairs
//! per graph and records the min-cut capacity, the graph distance and the
//! end-incident ratio of the canonical cut. Graph `g` of point `i` is built
//! from `derive_seed(master, [i, g])`, and the results are reduced in
//! `(point, graph, pair)` order, so output does not depend on the number of
//! worker threads.

use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    node_bound_er_exact, node_bound_scale_free, node_bound_waxman_exact, zeta_er, zeta_waxman,
    QuadratureSpec, DEFAULT_EPSILON_KM,
};
use crate::capacity::{LossParams, WeightedGraph, DEFAULT_GAMMA};
use crate::error::{invalid, Error, Result};
use crate::graphstats::least_squares;
use crate::netgen::{
    density, generate, half_width_for_alpha, match_er_probability, Family, ModelParams, NodeId,
    DEFAULT_ALPHA_L_KM, DEFAULT_MATCH_TRIALS,
};
use crate::seed::{derive_seed, rng_from_seed};

const PAIR_STREAM: u64 = 0x5041_4952;
const BOUND_STREAM: u64 = 0x424f_554e_44;

/// Absolute slack allowed when checking `C(s, t) <= min(C_N(s), C_N(t))`.
pub const NODE_BOUND_SLACK: f64 = 1e-9;

pub const DESK_GRAPHS_PER_POINT: usize = 20;
pub const DESK_PAIRS_PER_GRAPH: usize = 20;
pub const FULL_GRAPHS_PER_POINT: usize = 100;
pub const FULL_PAIRS_PER_GRAPH: usize = 50;

fn default_alpha_l() -> f64 {
    DEFAULT_ALPHA_L_KM
}
fn default_m() -> usize {
    2
}
fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_graphs() -> usize {
    DESK_GRAPHS_PER_POINT
}
fn default_pairs() -> usize {
    DESK_PAIRS_PER_GRAPH
}
fn default_bins() -> usize {
    20
}
fn default_bound_samples() -> usize {
    200_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelTemplate {
    pub family: Family,
    #[serde(default = "default_alpha_l")]
    pub alpha_l_km: f64,
    #[serde(default = "default_m")]
    pub m: usize,
    /// Fixed Erdős–Rényi probability; matched to Waxman per region if absent.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl ModelTemplate {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            alpha_l_km: DEFAULT_ALPHA_L_KM,
            m: 2,
            p: None,
            gamma: DEFAULT_GAMMA,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    N,
    Rho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// Experiment description, read from JSON.
///
/// Regions are given either as half-widths (`R_km`) or as Waxman scales
/// (`alpha`, with `R = alpha_L / (2 sqrt(2) alpha)`). Points are the product
/// of the region list with the sweep values, regions outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelTemplate,
    pub sweep: Sweep,
    #[serde(rename = "R_km", default)]
    pub r_km: Vec<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default = "default_graphs")]
    pub graphs_per_point: usize,
    #[serde(default = "default_pairs")]
    pub pairs_per_graph: usize,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default = "default_bins")]
    pub bin_count: usize,
    #[serde(default = "default_bound_samples")]
    pub bound_samples: usize,
    /// Use the 100 graphs x 50 pairs protocol instead of the desk-scale
    /// counts above.
    #[serde(default)]
    pub full_protocol: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub n: usize,
    pub r_km: f64,
    pub alpha: Option<f64>,
    pub rho: f64,
}

impl ExperimentConfig {
    pub fn new(model: ModelTemplate, sweep: Sweep) -> Self {
        Self {
            model,
            sweep,
            r_km: Vec::new(),
            alpha: Vec::new(),
            graphs_per_point: DESK_GRAPHS_PER_POINT,
            pairs_per_graph: DESK_PAIRS_PER_GRAPH,
            master_seed: None,
            bin_count: default_bins(),
            bound_samples: default_bound_samples(),
            full_protocol: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn graphs(&self) -> usize {
        if self.full_protocol {
            FULL_GRAPHS_PER_POINT
        } else {
            self.graphs_per_point
        }
    }

    pub fn pairs(&self) -> usize {
        if self.full_protocol {
            FULL_PAIRS_PER_GRAPH
        } else {
            self.pairs_per_graph
        }
    }

    fn regions(&self) -> Vec<(f64, Option<f64>)> {
        if self.alpha.is_empty() {
            self.r_km.iter().map(|&r| (r, None)).collect()
        } else {
            self.alpha
                .iter()
                .map(|&a| (half_width_for_alpha(a, self.model.alpha_l_km), Some(a)))
                .collect()
        }
    }

    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for (r_km, alpha) in self.regions() {
            for &v in &self.sweep.values {
                let n = match self.sweep.variable {
                    SweepVariable::N => v.round() as usize,
                    SweepVariable::Rho => (v * 4.0 * r_km * r_km).round() as usize,
                };
                out.push(SweepPoint {
                    index: out.len(),
                    n,
                    r_km,
                    alpha,
                    rho: density(n, r_km),
                });
            }
        }
        out
    }

    /// Checks every field and reports all offending ones at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let m = &self.model;
        if !(m.alpha_l_km > 0.0) {
            problems.push(format!("model.alpha_l_km: must be positive, got {}", m.alpha_l_km));
        }
        if !(m.gamma > 0.0 && m.gamma.is_finite()) {
            problems.push(format!("model.gamma: must be positive, got {}", m.gamma));
        }
        if let Some(p) = m.p {
            if !(0.0..=1.0).contains(&p) {
                problems.push(format!("model.p: must lie in [0, 1], got {p}"));
            }
        }
        if m.family == Family::ScaleFree && m.m < 1 {
            problems.push("model.m: must be at least 1".to_string());
        }
        let values = &self.sweep.values;
        if values.is_empty() {
            problems.push("sweep.values: must not be empty".to_string());
        }
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            problems.push("sweep.values: all values must be positive".to_string());
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            problems.push("sweep.values: must be strictly increasing".to_string());
        }
        if self.sweep.variable == SweepVariable::N && values.iter().any(|v| v.fract() != 0.0) {
            problems.push("sweep.values: node counts must be integers".to_string());
        }
        match (self.r_km.is_empty(), self.alpha.is_empty()) {
            (true, true) => problems.push("R_km / alpha: one region list is required".to_string()),
            (false, false) => {
                problems.push("R_km / alpha: give only one of the two region lists".to_string())
            }
            _ => {}
        }
        if self.r_km.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            problems.push("R_km: all half-widths must be positive".to_string());
        }
        if self.alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            problems.push("alpha: all values must be positive".to_string());
        }
        if self.graphs_per_point < 1 {
            problems.push("graphs_per_point: must be at least 1".to_string());
        }
        if self.pairs_per_graph < 1 {
            problems.push("pairs_per_graph: must be at least 1".to_string());
        }
        if self.bin_count < 1 {
            problems.push("bin_count: must be at least 1".to_string());
        }
        if self.bound_samples < crate::asymptotics::MIN_MONTE_CARLO_SAMPLES {
            problems.push(format!(
                "bound_samples: need at least {}, got {}",
                crate::asymptotics::MIN_MONTE_CARLO_SAMPLES,
                self.bound_samples
            ));
        }
        if problems.is_empty() {
            for pt in self.points() {
                if pt.n < 2 {
                    problems.push(format!(
                        "sweep.values: point {} resolves to N = {} (< 2) at R = {} km",
                        pt.index, pt.n, pt.r_km
                    ));
                } else if m.family == Family::ScaleFree && m.m >= pt.n {
                    problems.push(format!(
                        "model.m: m = {} needs N > m, point {} has N = {}",
                        m.m, pt.index, pt.n
                    ));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

/// One sampled node pair.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleRecord {
    pub point_index: usize,
    pub family: Family,
    pub n: usize,
    pub r_km: f64,
    pub rho: f64,
    pub graph_index: usize,
    pub s: NodeId,
    pub t: NodeId,
    /// Shortest fiber path, `None` when the pair is disconnected.
    pub d_g_km: Option<f64>,
    pub capacity: f64,
    pub end_ratio: f64,
}

impl EnsembleRecord {
    pub fn connected(&self) -> bool {
        self.d_g_km.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceBin {
    pub mean_distance_km: f64,
    pub mean_capacity: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub point_index: usize,
    pub family: Family,
    pub n: usize,
    pub r_km: f64,
    pub alpha: Option<f64>,
    pub rho: f64,
    /// Link probability used for Erdős–Rényi points.
    pub p: Option<f64>,
    pub records: usize,
    pub mean_capacity: f64,
    pub median_capacity: f64,
    pub mean_ratio: f64,
    pub connected_fraction: f64,
    /// Finite-region mean node capacity.
    pub bound_exact: f64,
    /// Large-region asymptote `zeta rho` or `zeta_ER p rho`; none for
    /// scale-free networks.
    pub bound_asymptotic: Option<f64>,
    /// Records that violated `C <= min(C_N(s), C_N(t)) + 1e-9`.
    pub bound_violations: usize,
    /// Equal-count distance bins; empty when there are fewer connected
    /// records than bins.
    pub bins: Vec<DistanceBin>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub master_seed: u64,
    pub records: Vec<EnsembleRecord>,
    pub summary: Vec<PointSummary>,
}

struct GraphTask {
    point: SweepPoint,
    graph_index: usize,
    p: Option<f64>,
}

struct GraphResult {
    records: Vec<EnsembleRecord>,
    violations: usize,
}

fn run_graph(cfg: &ExperimentConfig, master_seed: u64, task: &GraphTask) -> Result<GraphResult> {
    let pt = task.point;
    let seed = derive_seed(master_seed, &[pt.index as u64, task.graph_index as u64]);
    let params = ModelParams {
        family: cfg.model.family,
        n: pt.n,
        r_km: pt.r_km,
        alpha: pt.alpha,
        alpha_l_km: cfg.model.alpha_l_km,
        m: cfg.model.m,
        p: task.p,
        seed,
    };
    let graph = generate(&params)?;
    let weighted = WeightedGraph::new(graph, LossParams::new(cfg.model.gamma)?);
    let node_caps = weighted.node_capacities();
    let mut rng = rng_from_seed(derive_seed(seed, &[PAIR_STREAM]));
    let mut records = Vec::with_capacity(cfg.pairs());
    let mut violations = 0;
    for _ in 0..cfg.pairs() {
        let a = rng.random_range(0..pt.n);
        let mut b = rng.random_range(0..pt.n - 1);
        if b >= a {
            b += 1;
        }
        let (s, t) = (a.min(b), a.max(b));
        let cut = weighted.end_to_end_capacity(s, t)?;
        let d_g_km = weighted.graph_distance(s, t)?;
        if cut.value > node_caps[s].min(node_caps[t]) + NODE_BOUND_SLACK {
            violations += 1;
        }
        records.push(EnsembleRecord {
            point_index: pt.index,
            family: cfg.model.family,
            n: pt.n,
            r_km: pt.r_km,
            rho: pt.rho,
            graph_index: task.graph_index,
            s,
            t,
            d_g_km,
            capacity: cut.value,
            end_ratio: cut.end_incident_ratio,
        });
    }
    Ok(GraphResult {
        records,
        violations,
    })
}

/// Runs a sweep on the global rayon pool.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    run_sweep_inner(cfg)
}

/// Runs a sweep on a dedicated pool of `workers` threads.
pub fn run_sweep_with_workers(cfg: &ExperimentConfig, workers: usize) -> Result<SweepOutput> {
    if workers < 1 {
        return Err(invalid("workers", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid("workers", e.to_string()))?;
    pool.install(|| run_sweep_inner(cfg))
}

fn run_sweep_inner(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let master_seed = cfg
        .master_seed
        .ok_or_else(|| Error::Config(vec!["master_seed: missing".to_string()]))?;
    let points = cfg.points();
    let loss = LossParams::new(cfg.model.gamma)?;

    let probabilities: Vec<Option<f64>> = points
        .iter()
        .map(|pt| match cfg.model.family {
            Family::ErdosRenyi => match cfg.model.p {
                Some(p) => Ok(Some(p)),
                None => {
                    let mut params = ModelParams::new(Family::ErdosRenyi, pt.n, pt.r_km, 0);
                    params.alpha_l_km = cfg.model.alpha_l_km;
                    Ok(Some(match_er_probability(&params, DEFAULT_MATCH_TRIALS)?.p))
                }
            },
            _ => Ok(None),
        })
        .collect::<Result<_>>()?;

    let tasks: Vec<GraphTask> = points
        .iter()
        .zip(&probabilities)
        .flat_map(|(pt, &p)| {
            (0..cfg.graphs()).map(move |g| GraphTask {
                point: *pt,
                graph_index: g,
                p,
            })
        })
        .collect();
    let results: Vec<GraphResult> = tasks
        .par_iter()
        .map(|task| run_graph(cfg, master_seed, task))
        .collect::<Result<_>>()?;

    let zeta = match cfg.model.family {
        Family::Waxman => {
            Some(zeta_waxman(cfg.model.alpha_l_km, &loss, &QuadratureSpec::waxman_default())?.value)
        }
        Family::ErdosRenyi => Some(zeta_er(&loss, &QuadratureSpec::er_default())?.value),
        Family::ScaleFree => None,
    };
    let bounds: Vec<f64> = points
        .par_iter()
        .zip(&probabilities)
        .map(|(pt, p)| {
            let seed = derive_seed(master_seed, &[pt.index as u64, BOUND_STREAM]);
            let samples = cfg.bound_samples;
            let bound = match cfg.model.family {
                Family::Waxman => node_bound_waxman_exact(
                    pt.n,
                    pt.r_km,
                    cfg.model.alpha_l_km,
                    &loss,
                    samples,
                    seed,
                )?,
                Family::ErdosRenyi => {
                    node_bound_er_exact(pt.n, pt.r_km, p.unwrap_or(0.0), &loss, samples, seed)?
                }
                Family::ScaleFree => node_bound_scale_free(
                    cfg.model.m,
                    pt.r_km,
                    &loss,
                    samples,
                    DEFAULT_EPSILON_KM,
                    seed,
                )?,
            };
            Ok(bound.value)
        })
        .collect::<Result<_>>()?;

    let per_point = cfg.graphs();
    let mut records = Vec::with_capacity(tasks.len() * cfg.pairs());
    let mut summary = Vec::with_capacity(points.len());
    for (i, pt) in points.iter().enumerate() {
        let chunk = &results[i * per_point..(i + 1) * per_point];
        let start = records.len();
        let mut violations = 0;
        for r in chunk {
            records.extend(r.records.iter().cloned());
            violations += r.violations;
        }
        let recs = &records[start..];
        let count = recs.len() as f64;
        let p = probabilities[i];
        summary.push(PointSummary {
            point_index: pt.index,
            family: cfg.model.family,
            n: pt.n,
            r_km: pt.r_km,
            alpha: pt.alpha,
            rho: pt.rho,
            p,
            records: recs.len(),
            mean_capacity: recs.iter().map(|r| r.capacity).sum::<f64>() / count,
            median_capacity: summarize_median(recs)?,
            mean_ratio: recs.iter().map(|r| r.end_ratio).sum::<f64>() / count,
            connected_fraction: recs.iter().filter(|r| r.connected()).count() as f64 / count,
            bound_exact: bounds[i],
            bound_asymptotic: zeta.map(|z| z * p.unwrap_or(1.0) * pt.rho),
            bound_violations: violations,
            bins: bin_by_distance(recs, cfg.bin_count).unwrap_or_default(),
        });
    }
    Ok(SweepOutput {
        master_seed,
        records,
        summary,
    })
}

/// Sorts connected records by graph distance and splits them into
/// `bin_count` equal-count groups; the first `len % bin_count` groups get
/// one extra record. Disconnected records are skipped.
pub fn bin_by_distance(records: &[EnsembleRecord], bin_count: usize) -> Result<Vec<DistanceBin>> {
    let mut connected: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.d_g_km.map(|d| (d, r.capacity)))
        .collect();
    if bin_count == 0 || connected.len() < bin_count {
        return Err(Error::InsufficientData(format!(
            "{} connected records cannot fill {bin_count} bins",
            connected.len()
        )));
    }
    connected.sort_by(|a, b| a.0.total_cmp(&b.0));
    let base = connected.len() / bin_count;
    let extra = connected.len() % bin_count;
    let mut bins = Vec::with_capacity(bin_count);
    let mut start = 0;
    for b in 0..bin_count {
        let len = base + usize::from(b < extra);
        let group = &connected[start..start + len];
        start += len;
        bins.push(DistanceBin {
            mean_distance_km: group.iter().map(|g| g.0).sum::<f64>() / len as f64,
            mean_capacity: group.iter().map(|g| g.1).sum::<f64>() / len as f64,
            count: len,
        });
    }
    Ok(bins)
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData("median of an empty sample".to_string()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Ok(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

pub fn summarize_median(records: &[EnsembleRecord]) -> Result<f64> {
    median(&records.iter().map(|r| r.capacity).collect::<Vec<_>>())
}

/// Density at which the curve crosses `level`, interpolating linearly in
/// `(ln rho, ln C)` between the first bracketing pair of points (or in
/// `(ln rho, C)` when one of them is zero).
pub fn find_crossing(curve: &[(f64, f64)], level: f64) -> Result<f64> {
    for (i, &(x, y)) in curve.iter().enumerate() {
        if y == level {
            return Ok(x);
        }
        let Some(&(x2, y2)) = curve.get(i + 1) else {
            break;
        };
        if (y - level) * (y2 - level) < 0.0 {
            let t = if y > 0.0 && y2 > 0.0 && level > 0.0 {
                (level.ln() - y.ln()) / (y2.ln() - y.ln())
            } else {
                (level - y) / (y2 - y)
            };
            return Ok((x.ln() + t * (x2.ln() - x.ln())).exp());
        }
    }
    Err(Error::InsufficientData(format!(
        "no pair of points brackets the level {level}"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares line through the points whose value exceeds `threshold`.
pub fn fit_linear_above(curve: &[(f64, f64)], threshold: f64) -> Result<LinearFit> {
    let pts: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.1 > threshold).collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} points above {threshold}; a line needs 2",
            pts.len()
        )));
    }
    let (slope, intercept) = least_squares(&pts);
    Ok(LinearFit {
        slope,
        intercept,
        points: pts.len(),
    })
}

pub const RECORDS_HEADER: [&str; 12] = [
    "point_index",
    "model",
    "N",
    "R_km",
    "rho",
    "graph_index",
    "s",
    "t",
    "d_G_km",
    "capacity",
    "end_ratio",
    "connected",
];

pub const SUMMARY_HEADER: [&str; 10] = [
    "point_index",
    "model",
    "N",
    "R_km",
    "rho",
    "mean_C",
    "median_C",
    "mean_ratio",
    "bound_exact",
    "bound_asymptotic",
];

#[derive(Serialize, Deserialize)]
struct RecordRow {
    point_index: usize,
    model: Family,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "R_km")]
    r_km: f64,
    rho: f64,
    graph_index: usize,
    s: usize,
    t: usize,
    #[serde(rename = "d_G_km")]
    d_g_km: Option<f64>,
    capacity: f64,
    end_ratio: f64,
    connected: bool,
}

/// One row of the summary CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub point_index: usize,
    pub model: Family,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R_km")]
    pub r_km: f64,
    pub rho: f64,
    #[serde(rename = "mean_C")]
    pub mean_c: f64,
    #[serde(rename = "median_C")]
    pub median_c: f64,
    pub mean_ratio: f64,
    pub bound_exact: f64,
    pub bound_asymptotic: Option<f64>,
}

impl From<&PointSummary> for SummaryRow {
    fn from(s: &PointSummary) -> Self {
        Self {
            point_index: s.point_index,
            model: s.family,
            n: s.n,
            r_km: s.r_km,
            rho: s.rho,
            mean_c: s.mean_capacity,
            median_c: s.median_capacity,
            mean_ratio: s.mean_ratio,
            bound_exact: s.bound_exact,
            bound_asymptotic: s.bound_asymptotic,
        }
    }
}

pub fn write_records_csv<W: Write>(out: W, records: &[EnsembleRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(RecordRow {
            point_index: r.point_index,
            model: r.family,
            n: r.n,
            r_km: r.r_km,
            rho: r.rho,
            graph_index: r.graph_index,
            s: r.s,
            t: r.t,
            d_g_km: r.d_g_km,
            capacity: r.capacity,
            end_ratio: r.end_ratio,
            connected: r.connected(),
        })?;
    }
    if records.is_empty() {
        w.write_record(RECORDS_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<EnsembleRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| {
            let row: RecordRow = row?;
            Ok(EnsembleRecord {
                point_index: row.point_index,
                family: row.model,
                n: row.n,
                r_km: row.r_km,
                rho: row.rho,
                graph_index: row.graph_index,
                s: row.s,
                t: row.t,
                d_g_km: row.d_g_km,
                capacity: row.capacity,
                end_ratio: row.end_ratio,
            })
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(out: W, summary: &[PointSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in summary {
        w.serialize(SummaryRow::from(s))?;
    }
    if summary.is_empty() {
        w.write_record(SUMMARY_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: Read>(input: R) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| Ok(row?)).collect()
}
