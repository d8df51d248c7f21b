//! Random spatial network skeletons.
//!
//! Nodes are placed uniformly in the square `[-R, R] x [-R, R]` and joined
//! according to one of three models:
//!
//! * **Waxman**: every pair is linked independently with probability
//!   `exp(-D / alpha_L)`.
//! * **Erdős–Rényi**: every pair is linked independently with a fixed
//!   probability `p`, optionally matched to the Waxman edge density.
//! * **Scale-free**: nodes arrive one at a time and attach to `m` earlier
//!   nodes with weight `degree / distance`.
//!
//! Generation is a pure function of [`ModelParams`], including its seed.

use std::collections::{HashMap, HashSet};
use std::f64::consts::SQRT_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seed::{derive_seed, rng_from_seed};

/// Typical Waxman link length `alpha * L`, in km.
pub const DEFAULT_ALPHA_L_KM: f64 = 226.0;

/// Default number of pair samples used to match an Erdős–Rényi `p`.
pub const DEFAULT_MATCH_TRIALS: usize = 100_000;

const ER_MATCH_STREAM: u64 = 0x4552_5f4d_4154_4348;

/// Dense node index in `[0, N)`.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Coord) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Undirected simple graph with node coordinates in km.
///
/// Construction validates the invariants: every node lies in the square of
/// half-width `R`, there are no self-loops or duplicate edges, and every
/// edge has a strictly positive length. Edges are stored with `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGraph {
    half_width: f64,
    coords: Vec<Coord>,
    edges: Vec<(NodeId, NodeId)>,
}

impl SpatialGraph {
    pub fn new(
        half_width: f64,
        coords: Vec<Coord>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGraph(format!(
                "region half-width must be positive, got {half_width}"
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if !(c.x.is_finite() && c.y.is_finite())
                || c.x.abs() > half_width
                || c.y.abs() > half_width
            {
                return Err(Error::InvalidGraph(format!(
                    "node {i} at ({}, {}) lies outside the region of half-width {half_width}",
                    c.x, c.y
                )));
            }
        }
        let n = coords.len();
        let mut seen = HashSet::new();
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a node outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            if coords[u].distance(&coords[v]) <= 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) joins coincident nodes"
                )));
            }
            normalized.push(e);
        }
        Ok(Self {
            half_width,
            coords,
            edges: normalized,
        })
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Half-width `R` of the square region, in km.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Largest distance inside the region, `L = 2 sqrt(2) R`.
    pub fn diameter(&self) -> f64 {
        2.0 * SQRT_2 * self.half_width
    }

    /// Node density `N / (4 R^2)` in nodes per km².
    pub fn density(&self) -> f64 {
        density(self.node_count(), self.half_width)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        let (u, v) = self.edges[edge];
        self.coords[u].distance(&self.coords[v])
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

pub fn density(n: usize, half_width: f64) -> f64 {
    n as f64 / (4.0 * half_width * half_width)
}

/// Region half-width for which `alpha * L` equals `alpha_l_km`.
pub fn half_width_for_alpha(alpha: f64, alpha_l_km: f64) -> f64 {
    alpha_l_km / (2.0 * SQRT_2 * alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Waxman,
    ErdosRenyi,
    ScaleFree,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Waxman => "waxman",
            Family::ErdosRenyi => "erdos_renyi",
            Family::ScaleFree => "scale_free",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "waxman" => Ok(Family::Waxman),
            "erdos_renyi" => Ok(Family::ErdosRenyi),
            "scale_free" => Ok(Family::ScaleFree),
            other => Err(invalid("family", format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub family: Family,
    pub n: usize,
    /// Region half-width `R` in km.
    pub r_km: f64,
    /// Waxman scale `alpha`; when set, `r_km` is derived from it.
    pub alpha: Option<f64>,
    pub alpha_l_km: f64,
    /// Edges brought by each new scale-free node.
    pub m: usize,
    /// Erdős–Rényi link probability; matched to Waxman when absent.
    pub p: Option<f64>,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(family: Family, n: usize, r_km: f64, seed: u64) -> Self {
        Self {
            family,
            n,
            r_km,
            alpha: None,
            alpha_l_km: DEFAULT_ALPHA_L_KM,
            m: 2,
            p: None,
            seed,
        }
    }

    pub fn waxman(n: usize, r_km: f64, seed: u64) -> Self {
        Self::new(Family::Waxman, n, r_km, seed)
    }

    pub fn erdos_renyi(n: usize, r_km: f64, p: f64, seed: u64) -> Self {
        Self {
            p: Some(p),
            ..Self::new(Family::ErdosRenyi, n, r_km, seed)
        }
    }

    pub fn scale_free(n: usize, r_km: f64, m: usize, seed: u64) -> Self {
        Self {
            m,
            ..Self::new(Family::ScaleFree, n, r_km, seed)
        }
    }

    /// Sets `alpha` and derives `R = alpha_L / (2 sqrt(2) alpha)`.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self.r_km = half_width_for_alpha(alpha, self.alpha_l_km);
        self
    }

    pub fn with_alpha_l(mut self, alpha_l_km: f64) -> Self {
        self.alpha_l_km = alpha_l_km;
        if let Some(alpha) = self.alpha {
            self.r_km = half_width_for_alpha(alpha, alpha_l_km);
        }
        self
    }

    pub fn density(&self) -> f64 {
        density(self.n, self.r_km)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid("n", format!("need at least 2 nodes, got {}", self.n)));
        }
        if !(self.r_km.is_finite() && self.r_km > 0.0) {
            return Err(invalid("r_km", format!("must be positive, got {}", self.r_km)));
        }
        if let Some(alpha) = self.alpha {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(invalid("alpha", format!("must be positive, got {alpha}")));
            }
        }
        if !(self.alpha_l_km > 0.0) || self.alpha_l_km.is_nan() {
            return Err(invalid(
                "alpha_l_km",
                format!("must be positive, got {}", self.alpha_l_km),
            ));
        }
        if self.family == Family::ScaleFree && (self.m < 1 || self.m >= self.n) {
            return Err(invalid(
                "m",
                format!("need 1 <= m < N, got m = {} with N = {}", self.m, self.n),
            ));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Draws `n` i.i.d. uniform points in the square of half-width `half_width`.
///
/// A point that coincides exactly with an earlier one is redrawn, so every
/// pair of generated nodes is at positive distance.
pub fn sample_nodes<R: Rng + ?Sized>(n: usize, half_width: f64, rng: &mut R) -> Vec<Coord> {
    let mut seen = HashSet::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    while coords.len() < n {
        let c = Coord::new(
            half_width * (2.0 * rng.random::<f64>() - 1.0),
            half_width * (2.0 * rng.random::<f64>() - 1.0),
        );
        if seen.insert((c.x.to_bits(), c.y.to_bits())) {
            coords.push(c);
        }
    }
    coords
}

pub fn generate(params: &ModelParams) -> Result<SpatialGraph> {
    match params.family {
        Family::Waxman => generate_waxman(params),
        Family::ErdosRenyi => generate_erdos_renyi(params),
        Family::ScaleFree => generate_scale_free(params),
    }
}

pub fn generate_waxman(params: &ModelParams) -> Result<SpatialGraph> {
    params.validate()?;
    let mut rng = rng_from_seed(params.seed);
    let coords = sample_nodes(params.n, params.r_km, &mut rng);
    let inv_scale = 1.0 / params.alpha_l_km;
    let mut edges = Vec::new();
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            let d = coords[i].distance(&coords[j]);
            let u: f64 = rng.random();
            if u < (-d * inv_scale).exp() {
                edges.push((i, j));
            }
        }
    }
    Ok(SpatialGraph {
        half_width: params.r_km,
        coords,
        edges,
    })
}

pub fn generate_erdos_renyi(params: &ModelParams) -> Result<SpatialGraph> {
    params.validate()?;
    let p = match params.p {
        Some(p) => p,
        None => match_er_probability(params, DEFAULT_MATCH_TRIALS)?.p,
    };
    let mut rng = rng_from_seed(params.seed);
    let coords = sample_nodes(params.n, params.r_km, &mut rng);
    let mut edges = Vec::new();
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(SpatialGraph {
        half_width: params.r_km,
        coords,
        edges,
    })
}

/// Distance-weighted preferential attachment.
///
/// The first `m + 1` nodes form a clique. Every later node picks `m`
/// distinct earlier nodes by sequential weighted draws without replacement,
/// each candidate weighted by its current degree over its distance to the
/// newcomer. The result has exactly `m N - m (m + 1) / 2` edges.
pub fn generate_scale_free(params: &ModelParams) -> Result<SpatialGraph> {
    params.validate()?;
    let m = params.m;
    let n = params.n;
    let mut rng = rng_from_seed(params.seed);
    let coords = sample_nodes(n, params.r_km, &mut rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(m * n);
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
            degree[i] += 1;
            degree[j] += 1;
        }
    }
    let mut weights = Vec::with_capacity(n);
    let mut picked = Vec::with_capacity(m);
    for new in (m + 1)..n {
        weights.clear();
        weights.extend(
            (0..new).map(|old| degree[old] as f64 / coords[new].distance(&coords[old])),
        );
        picked.clear();
        for _ in 0..m {
            let total: f64 = weights.iter().sum();
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut choice = None;
            for (j, &w) in weights.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                choice = Some(j);
                acc += w;
                if target < acc {
                    break;
                }
            }
            let j = choice.expect("fewer than m candidates with positive weight");
            weights[j] = 0.0;
            picked.push(j);
        }
        for &old in &picked {
            edges.push((old, new));
            degree[old] += 1;
            degree[new] += 1;
        }
    }
    Ok(SpatialGraph {
        half_width: params.r_km,
        coords,
        edges,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbabilityEstimate {
    pub p: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Erdős–Rényi probability with the same expected edge count as the Waxman
/// model on the same region: the mean of `exp(-D / alpha_L)` over uniform
/// node pairs, estimated by Monte Carlo.
///
/// The stream seed is derived from `(R, alpha_L)` only, so every graph of a
/// sweep point shares the same `p` regardless of its own seed.
pub fn match_er_probability(params: &ModelParams, trials: usize) -> Result<ProbabilityEstimate> {
    if trials < 10_000 {
        return Err(invalid("trials", format!("need at least 10^4, got {trials}")));
    }
    if !(params.r_km.is_finite() && params.r_km > 0.0) {
        return Err(invalid("r_km", format!("must be positive, got {}", params.r_km)));
    }
    let seed = derive_seed(
        ER_MATCH_STREAM,
        &[params.r_km.to_bits(), params.alpha_l_km.to_bits()],
    );
    let mut rng = rng_from_seed(seed);
    let r = params.r_km;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let a = Coord::new(r * (2.0 * rng.random::<f64>() - 1.0), r * (2.0 * rng.random::<f64>() - 1.0));
        let b = Coord::new(r * (2.0 * rng.random::<f64>() - 1.0), r * (2.0 * rng.random::<f64>() - 1.0));
        let w = (-a.distance(&b) / params.alpha_l_km).exp();
        sum += w;
        sum_sq += w * w;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = (sum_sq / t - mean * mean).max(0.0) * t / (t - 1.0);
    Ok(ProbabilityEstimate {
        p: mean,
        std_error: (var / t).sqrt(),
        trials,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    #[serde(rename = "R_km")]
    r_km: f64,
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    id: usize,
    x_km: f64,
    y_km: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
}

/// JSON graph document. Edge lengths are not stored; they are recomputed
/// from the coordinates on load.
pub fn to_json(graph: &SpatialGraph) -> String {
    let doc = GraphDocument {
        r_km: graph.half_width,
        nodes: graph
            .coords
            .iter()
            .enumerate()
            .map(|(id, c)| NodeRecord {
                id,
                x_km: c.x,
                y_km: c.y,
            })
            .collect(),
        edges: graph
            .edges
            .iter()
            .map(|&(u, v)| EdgeRecord { u, v })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph document serializes")
}

pub fn from_json(text: &str) -> Result<SpatialGraph> {
    let doc: GraphDocument =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    if !(doc.r_km.is_finite() && doc.r_km > 0.0) {
        return Err(Error::Document(format!("R_km: must be positive, got {}", doc.r_km)));
    }
    let mut coords = Vec::with_capacity(doc.nodes.len());
    for (i, node) in doc.nodes.iter().enumerate() {
        if node.id != i {
            return Err(Error::Document(format!(
                "nodes[{i}].id: expected dense id {i}, got {}",
                node.id
            )));
        }
        if node.x_km.abs() > doc.r_km || node.y_km.abs() > doc.r_km {
            return Err(Error::Document(format!(
                "nodes[{i}]: ({}, {}) lies outside [-R_km, R_km]^2",
                node.x_km, node.y_km
            )));
        }
        coords.push(Coord::new(node.x_km, node.y_km));
    }
    let n = coords.len();
    let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if e.u >= n || e.v >= n {
            return Err(Error::Document(format!(
                "edges[{i}]: endpoint out of range ({}, {}) for {n} nodes",
                e.u, e.v
            )));
        }
        if e.u == e.v {
            return Err(Error::Document(format!("edges[{i}]: self-loop at node {}", e.u)));
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        if let Some(first) = first_seen.insert(key, i) {
            return Err(Error::Document(format!(
                "edges[{i}]: duplicate edge ({}, {}) first listed at edges[{first}]",
                key.0, key.1
            )));
        }
        if coords[e.u].distance(&coords[e.v]) <= 0.0 {
            return Err(Error::Document(format!(
                "edges[{i}]: nodes {} and {} are coincident",
                e.u, e.v
            )));
        }
    }
    SpatialGraph::new(doc.r_km, coords, doc.edges.iter().map(|e| (e.u, e.v)))
}
