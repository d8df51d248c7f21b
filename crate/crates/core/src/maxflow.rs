//! Dinic max-flow on undirected real-weighted graphs.
//!
//! Each undirected edge `e = {u, v}` with capacity `c` becomes the arc pair
//! `2e: u -> v` and `2e + 1: v -> u`, both of capacity `c`, each serving as
//! the other's residual twin. Augmenting by the path bottleneck leaves the
//! bottleneck arc at exactly zero residual, so an arc is admissible iff its
//! residual is strictly positive and no tolerance is needed. Tiny
//! capacities (long fibers carry ~1e-40 ebits) are therefore never dropped.

use std::collections::VecDeque;

use crate::netgen::NodeId;

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    node_count: usize,
    /// Arc heads; the tail of arc `a` is the head of `a ^ 1`.
    head: Vec<u32>,
    capacity: Vec<f64>,
    offsets: Vec<usize>,
    arcs_by_node: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct FlowOutcome {
    pub flow_value: f64,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId)], capacities: &[f64]) -> Self {
        assert_eq!(edges.len(), capacities.len());
        let mut head = Vec::with_capacity(2 * edges.len());
        let mut capacity = Vec::with_capacity(2 * edges.len());
        let mut out_degree = vec![0usize; node_count];
        for (&(u, v), &c) in edges.iter().zip(capacities) {
            head.push(v as u32);
            head.push(u as u32);
            capacity.push(c);
            capacity.push(c);
            out_degree[u] += 1;
            out_degree[v] += 1;
        }
        let mut offsets = vec![0usize; node_count + 1];
        for i in 0..node_count {
            offsets[i + 1] = offsets[i] + out_degree[i];
        }
        let mut fill = offsets.clone();
        let mut arcs_by_node = vec![0u32; 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            arcs_by_node[fill[u]] = (2 * e) as u32;
            fill[u] += 1;
            arcs_by_node[fill[v]] = (2 * e + 1) as u32;
            fill[v] += 1;
        }
        Self {
            node_count,
            head,
            capacity,
            offsets,
            arcs_by_node,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    fn tail(&self, arc: usize) -> usize {
        self.head[arc ^ 1] as usize
    }

    fn arcs(&self, node: usize) -> &[u32] {
        &self.arcs_by_node[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Maximum `source -> sink` flow. Caller guarantees distinct, in-range
    /// endpoints.
    pub fn max_flow(&self, source: usize, sink: usize) -> FlowOutcome {
        debug_assert!(source != sink && source < self.node_count && sink < self.node_count);
        let mut solver = Solver {
            net: self,
            residual: self.capacity.clone(),
            level: vec![-1; self.node_count],
            next_arc: vec![0; self.node_count],
            queue: VecDeque::new(),
            path: Vec::new(),
        };
        let mut total = 0.0;
        while solver.build_levels(source, sink) {
            total += solver.blocking_flow(source, sink);
        }
        let source_side = solver.reachable(source);
        FlowOutcome {
            flow_value: total,
            source_side,
        }
    }
}

struct Solver<'a> {
    net: &'a FlowNetwork,
    residual: Vec<f64>,
    level: Vec<i32>,
    next_arc: Vec<usize>,
    queue: VecDeque<usize>,
    path: Vec<usize>,
}

impl Solver<'_> {
    fn build_levels(&mut self, source: usize, sink: usize) -> bool {
        self.level.fill(-1);
        self.level[source] = 0;
        self.queue.clear();
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            if self.level[sink] >= 0 && self.level[u] >= self.level[sink] {
                break;
            }
            for &a in self.net.arcs(u) {
                let a = a as usize;
                let v = self.net.head[a] as usize;
                if self.level[v] < 0 && self.residual[a] > 0.0 {
                    self.level[v] = self.level[u] + 1;
                    self.queue.push_back(v);
                }
            }
        }
        if self.level[sink] < 0 {
            return false;
        }
        for (u, slot) in self.next_arc.iter_mut().enumerate() {
            *slot = self.net.offsets[u];
        }
        true
    }

    fn blocking_flow(&mut self, source: usize, sink: usize) -> f64 {
        let mut pushed = 0.0;
        self.path.clear();
        let mut u = source;
        loop {
            if u == sink {
                let bottleneck = self
                    .path
                    .iter()
                    .map(|&a| self.residual[a])
                    .fold(f64::INFINITY, f64::min);
                for &a in &self.path {
                    self.residual[a] -= bottleneck;
                    self.residual[a ^ 1] += bottleneck;
                }
                pushed += bottleneck;
                let first_saturated = self
                    .path
                    .iter()
                    .position(|&a| self.residual[a] <= 0.0)
                    .expect("bottleneck arc saturates exactly");
                u = self.net.tail(self.path[first_saturated]);
                self.path.truncate(first_saturated);
                continue;
            }
            let end = self.net.offsets[u + 1];
            let mut advanced = false;
            while self.next_arc[u] < end {
                let a = self.net.arcs_by_node[self.next_arc[u]] as usize;
                let v = self.net.head[a] as usize;
                if self.residual[a] > 0.0 && self.level[v] == self.level[u] + 1 {
                    self.path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.next_arc[u] += 1;
            }
            if !advanced {
                // dead end: prune u from this phase
                self.level[u] = -1;
                match self.path.pop() {
                    None => break,
                    Some(a) => {
                        u = self.net.tail(a);
                        self.next_arc[u] += 1;
                    }
                }
            }
        }
        pushed
    }

    fn reachable(&mut self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.net.node_count];
        seen[source] = true;
        self.queue.clear();
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            for &a in self.net.arcs(u) {
                let a = a as usize;
                let v = self.net.head[a] as usize;
                if !seen[v] && self.residual[a] > 0.0 {
                    seen[v] = true;
                    self.queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_paths_add_up() {
        // 0-1-3 and 0-2-3
        let edges = [(0, 1), (1, 3), (0, 2), (2, 3)];
        let net = FlowNetwork::new(4, &edges, &[1.0, 2.0, 3.0, 0.5]);
        let out = net.max_flow(0, 3);
        assert!((out.flow_value - 1.5).abs() < 1e-15);
        assert!(out.source_side[0] && !out.source_side[3]);
    }

    #[test]
    fn flow_is_symmetric_on_undirected_arcs() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        let caps = [0.3, 0.7, 0.2];
        let net = FlowNetwork::new(3, &edges, &caps);
        let a = net.max_flow(0, 2).flow_value;
        let b = net.max_flow(2, 0).flow_value;
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tiny_capacities_are_not_dropped() {
        let net = FlowNetwork::new(3, &[(0, 1), (1, 2)], &[1e-40, 5.0]);
        let out = net.max_flow(0, 2);
        assert_eq!(out.flow_value, 1e-40);
        assert!(!out.source_side[1]);
    }
}
