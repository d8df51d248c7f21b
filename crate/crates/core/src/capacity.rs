//! Pure-loss edge capacities and exact end-to-end (min-cut) capacity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::maxflow::FlowNetwork;
use crate::netgen::{NodeId, SpatialGraph};

/// State-of-the-art fiber attenuation, per km (base-10 exponent).
pub const DEFAULT_GAMMA: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    pub gamma: f64,
}

impl LossParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    /// Transmissivity `eta = 10^(-gamma D)`.
    pub fn transmissivity(&self, distance_km: f64) -> f64 {
        10f64.powf(-self.gamma * distance_km)
    }
}

impl Default for LossParams {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
        }
    }
}

/// `-log2(1 - eta)` at full relative precision: short links form `1 - eta`
/// with `expm1`, long links (small `eta`) take `ln_1p(-eta)`.
pub(crate) fn pure_loss_capacity(distance_km: f64, gamma: f64) -> f64 {
    let x = gamma * distance_km * LN_10;
    let eta = (-x).exp();
    if eta < 0.5 {
        -(-eta).ln_1p() / std::f64::consts::LN_2
    } else {
        -(-(-x).exp_m1()).log2()
    }
}

/// Capacity in ebits per channel use of a fiber of length `distance_km`.
pub fn edge_capacity(distance_km: f64, loss: &LossParams) -> Result<f64> {
    if !(distance_km > 0.0) {
        return Err(Error::NonPositiveDistance(distance_km));
    }
    Ok(pure_loss_capacity(distance_km, loss.gamma))
}

/// A minimizing cut between two nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutResult {
    pub source: NodeId,
    pub target: NodeId,
    /// Sum of capacities over `cut_edges`.
    pub value: f64,
    /// Value of the maximum flow; equals `value` up to rounding.
    pub flow_value: f64,
    pub cut_edges: Vec<(NodeId, NodeId)>,
    /// Fraction of cut edges touching the source or the target; 0 for an
    /// empty cut.
    pub end_incident_ratio: f64,
}

impl CutResult {
    pub fn connected(&self) -> bool {
        !self.cut_edges.is_empty()
    }
}

/// Minimum `s`-`t` cut of an undirected graph with arbitrary non-negative
/// edge weights.
///
/// The returned cut is the canonical one: edges leaving the set of nodes
/// reachable from `s` in the final residual graph.
pub fn min_cut(
    node_count: usize,
    edges: &[(NodeId, NodeId)],
    capacities: &[f64],
    source: NodeId,
    target: NodeId,
) -> Result<CutResult> {
    let net = FlowNetwork::new(node_count, edges, capacities);
    min_cut_on(&net, edges, capacities, source, target)
}

fn min_cut_on(
    net: &FlowNetwork,
    edges: &[(NodeId, NodeId)],
    capacities: &[f64],
    source: NodeId,
    target: NodeId,
) -> Result<CutResult> {
    let n = net.node_count();
    for node in [source, target] {
        if node >= n {
            return Err(Error::UnknownNode {
                node,
                node_count: n,
            });
        }
    }
    if source == target {
        return Err(Error::SameEndpoints(source));
    }
    let outcome = net.max_flow(source, target);
    let mut cut_edges = Vec::new();
    let mut value = 0.0;
    let mut incident = 0usize;
    for (&(u, v), &c) in edges.iter().zip(capacities) {
        if outcome.source_side[u] != outcome.source_side[v] {
            cut_edges.push((u, v));
            value += c;
            if u == source || v == source || u == target || v == target {
                incident += 1;
            }
        }
    }
    let end_incident_ratio = if cut_edges.is_empty() {
        0.0
    } else {
        incident as f64 / cut_edges.len() as f64
    };
    Ok(CutResult {
        source,
        target,
        value,
        flow_value: outcome.flow_value,
        cut_edges,
        end_incident_ratio,
    })
}

/// A spatial graph with per-edge lengths and pure-loss capacities.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    graph: SpatialGraph,
    loss: LossParams,
    lengths: Vec<f64>,
    capacities: Vec<f64>,
    incidence_offsets: Vec<usize>,
    /// `(neighbor, edge index)` grouped by node.
    incidence: Vec<(NodeId, usize)>,
    network: FlowNetwork,
}

impl WeightedGraph {
    /// Edges longer than roughly `15 000 / (gamma / 0.02)` km have a
    /// capacity below the smallest positive `f64` and are stored as 0.
    pub fn new(graph: SpatialGraph, loss: LossParams) -> Self {
        let lengths: Vec<f64> = (0..graph.edge_count()).map(|e| graph.edge_length(e)).collect();
        let capacities: Vec<f64> = lengths
            .iter()
            .map(|&d| pure_loss_capacity(d, loss.gamma))
            .collect();
        let n = graph.node_count();
        let degrees = graph.degrees();
        let mut incidence_offsets = vec![0; n + 1];
        for i in 0..n {
            incidence_offsets[i + 1] = incidence_offsets[i] + degrees[i];
        }
        let mut fill = incidence_offsets.clone();
        let mut incidence = vec![(0, 0); 2 * graph.edge_count()];
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            incidence[fill[u]] = (v, e);
            fill[u] += 1;
            incidence[fill[v]] = (u, e);
            fill[v] += 1;
        }
        let network = FlowNetwork::new(n, graph.edges(), &capacities);
        Self {
            graph,
            loss,
            lengths,
            capacities,
            incidence_offsets,
            incidence,
            network,
        }
    }

    pub fn graph(&self) -> &SpatialGraph {
        &self.graph
    }

    pub fn loss(&self) -> LossParams {
        self.loss
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.incidence[self.incidence_offsets[v]..self.incidence_offsets[v + 1]]
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v >= self.node_count() {
            return Err(Error::UnknownNode {
                node: v,
                node_count: self.node_count(),
            });
        }
        Ok(())
    }

    /// Sum of capacities of the edges incident to `v`.
    pub fn node_capacity(&self, v: NodeId) -> Result<f64> {
        self.check_node(v)?;
        Ok(self.neighbors(v).iter().map(|&(_, e)| self.capacities[e]).sum())
    }

    pub fn node_capacities(&self) -> Vec<f64> {
        let mut caps = vec![0.0; self.node_count()];
        for (&(u, v), &c) in self.graph.edges().iter().zip(&self.capacities) {
            caps[u] += c;
            caps[v] += c;
        }
        caps
    }

    pub fn end_to_end_capacity(&self, source: NodeId, target: NodeId) -> Result<CutResult> {
        min_cut_on(
            &self.network,
            self.graph.edges(),
            &self.capacities,
            source,
            target,
        )
    }

    /// Shortest fiber-path length between two nodes, `None` when they are
    /// disconnected.
    pub fn graph_distance(&self, source: NodeId, target: NodeId) -> Result<Option<f64>> {
        self.check_node(source)?;
        self.check_node(target)?;
        if source == target {
            return Err(Error::SameEndpoints(source));
        }
        let mut dist = vec![f64::INFINITY; self.node_count()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Frontier {
            dist: 0.0,
            node: source,
        });
        while let Some(Frontier { dist: d, node: u }) = heap.pop() {
            if u == target {
                return Ok(Some(d));
            }
            if d > dist[u] {
                continue;
            }
            for &(v, e) in self.neighbors(u) {
                let nd = d + self.lengths[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Frontier { dist: nd, node: v });
                }
            }
        }
        Ok(None)
    }
}

/// Equivalent flow tree (Gusfield): for every pair, the minimum weight on
/// the tree path between them equals their min-cut value. Built from
/// `N - 1` max flows instead of one per pair.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowTree {
    /// `parent[0] == 0` is the root; node `i > 0` hangs below `parent[i]`.
    pub parent: Vec<NodeId>,
    /// Weight of the tree edge `{i, parent[i]}`; `weight[0]` is unused.
    pub weight: Vec<f64>,
}

impl FlowTree {
    /// Mean min-cut value over all unordered node pairs, i.e. the exact
    /// pair-averaged end-to-end capacity of the graph. Requires two nodes.
    pub fn mean_pair_capacity(&self) -> f64 {
        let n = self.parent.len();
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by(|&a, &b| self.weight[b].total_cmp(&self.weight[a]).then(a.cmp(&b)));
        // Kruskal on descending weights: the edge joining two components is
        // the path minimum for every pair across them
        let mut root: Vec<usize> = (0..n).collect();
        let mut size = vec![1usize; n];
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        let mut total = 0.0;
        for i in order {
            let (a, b) = (find(&mut root, i), find(&mut root, self.parent[i]));
            total += self.weight[i] * (size[a] * size[b]) as f64;
            let (big, small) = if size[a] >= size[b] { (a, b) } else { (b, a) };
            root[small] = big;
            size[big] += size[small];
        }
        total / (n * (n - 1) / 2) as f64
    }
}

impl WeightedGraph {
    pub fn flow_tree(&self) -> Result<FlowTree> {
        let n = self.node_count();
        if n < 2 {
            return Err(invalid("node_count", format!("a flow tree needs two nodes, got {n}")));
        }
        let mut parent = vec![0; n];
        let mut weight = vec![0.0; n];
        for s in 1..n {
            let t = parent[s];
            let side = self.network.max_flow(s, t).source_side;
            weight[s] = self
                .graph
                .edges()
                .iter()
                .zip(&self.capacities)
                .filter(|(&(u, v), _)| side[u] != side[v])
                .map(|(_, &c)| c)
                .sum();
            for i in s + 1..n {
                if side[i] && parent[i] == t {
                    parent[i] = s;
                }
            }
        }
        Ok(FlowTree { parent, weight })
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: NodeId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
