//! Structural statistics: degree distributions, components, clustering.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::netgen::SpatialGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeHistogram {
    /// `counts[k]` is the number of nodes of degree `k`.
    pub counts: Vec<usize>,
    pub node_count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl DegreeHistogram {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let max = degrees.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0; max + 1];
        for &k in degrees {
            counts[k] += 1;
        }
        let n = degrees.len() as f64;
        let mean = degrees.iter().sum::<usize>() as f64 / n;
        let variance = degrees
            .iter()
            .map(|&k| (k as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        Self {
            counts,
            node_count: degrees.len(),
            mean,
            variance,
        }
    }

    /// Variance over mean; 1 for a Poisson distribution.
    pub fn dispersion(&self) -> f64 {
        self.variance / self.mean
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn distinct_degrees(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

pub fn degree_histogram(graph: &SpatialGraph) -> DegreeHistogram {
    DegreeHistogram::from_degrees(&graph.degrees())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonFit {
    pub lambda: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Set when the chi-square test rejects at the 1% level.
    pub poor_fit: bool,
}

const MIN_FIT_NODES: usize = 100;

/// Maximum-likelihood Poisson fit with a pooled chi-square goodness test.
///
/// Bins are merged left to right until each holds an expected count of at
/// least 5; the final bin absorbs the upper tail.
pub fn fit_poisson(hist: &DegreeHistogram) -> Result<PoissonFit> {
    if hist.node_count < MIN_FIT_NODES {
        return Err(Error::InsufficientData(format!(
            "Poisson fit needs at least {MIN_FIT_NODES} nodes, got {}",
            hist.node_count
        )));
    }
    let lambda = hist.mean;
    let n = hist.node_count as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    let ln_pmf = |k: usize| -> f64 {
        if lambda == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        -lambda + k as f64 * lambda.ln() - ln_gamma(k as f64 + 1.0)
    };
    let mut cdf = 0.0;
    let mut k = 0usize;
    loop {
        let pmf = ln_pmf(k).exp();
        obs += hist.counts.get(k).copied().unwrap_or(0) as f64;
        exp += n * pmf;
        cdf += pmf;
        let tail = (1.0 - cdf).max(0.0);
        if exp >= 5.0 && n * tail >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        } else if n * tail < 5.0 {
            let tail_obs: usize = hist.counts.iter().skip(k + 1).sum();
            let (obs, exp) = (obs + tail_obs as f64, exp + n * tail);
            match bins.last_mut() {
                Some(last) if exp < 5.0 => {
                    last.0 += obs;
                    last.1 += exp;
                }
                _ => bins.push((obs, exp)),
            }
            break;
        }
        k += 1;
    }
    let chi_square: f64 = bins.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len().saturating_sub(2);
    let p_value = if dof == 0 {
        if chi_square <= 1e-9 {
            1.0
        } else {
            0.0
        }
    } else {
        ChiSquared::new(dof as f64)
            .map(|d| d.sf(chi_square))
            .unwrap_or(0.0)
    };
    Ok(PoissonFit {
        lambda,
        chi_square,
        degrees_of_freedom: dof,
        p_value,
        poor_fit: p_value < 0.01,
    })
}

/// Empirical survival function `P(K >= k)` at every observed degree.
pub fn cumulative_degree(hist: &DegreeHistogram) -> Vec<(usize, f64)> {
    let n = hist.node_count as f64;
    let mut remaining = hist.node_count;
    let mut out = Vec::new();
    for (k, &c) in hist.counts.iter().enumerate() {
        if c > 0 {
            out.push((k, remaining as f64 / n));
        }
        remaining -= c;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// Tail exponent `a` in `P(K >= k) ~ k^-a`.
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log regression.
    pub rms_residual: f64,
    pub points: usize,
}

/// Least-squares line through `(ln k, ln P(K >= k))` for observed degrees
/// in `[k_min, k_max / 2]`.
pub fn fit_power_law(hist: &DegreeHistogram, k_min: usize) -> Result<PowerLawFit> {
    if hist.node_count < MIN_FIT_NODES {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least {MIN_FIT_NODES} nodes, got {}",
            hist.node_count
        )));
    }
    if hist.distinct_degrees() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 distinct degrees, got {}",
            hist.distinct_degrees()
        )));
    }
    let k_hi = hist.max_degree() / 2;
    let pts: Vec<(f64, f64)> = cumulative_degree(hist)
        .into_iter()
        .filter(|&(k, _)| k >= k_min.max(1) && k <= k_hi)
        .map(|(k, s)| ((k as f64).ln(), s.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} observed degrees in [{}, {k_hi}]",
            pts.len(),
            k_min.max(1)
        )));
    }
    let (slope, intercept) = least_squares(&pts);
    let rms = (pts
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / pts.len() as f64)
        .sqrt();
    Ok(PowerLawFit {
        exponent: -slope,
        intercept,
        rms_residual: rms,
        points: pts.len(),
    })
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentStats {
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub giant_fraction: f64,
}

pub fn components(graph: &SpatialGraph) -> ComponentStats {
    let n = graph.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in graph.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut size = vec![0usize; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        size[r] += 1;
    }
    let mut sizes: Vec<usize> = size.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let giant_fraction = sizes.first().copied().unwrap_or(0) as f64 / n as f64;
    ComponentStats {
        sizes,
        giant_fraction,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusteringStats {
    pub per_node: Vec<f64>,
    pub mean: f64,
}

/// Local clustering `2 t / (k (k - 1))`, with nodes of degree below 2
/// contributing 0 to the mean.
pub fn clustering(graph: &SpatialGraph) -> ClusteringStats {
    let n = graph.node_count();
    let mut adj = graph.adjacency();
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut triangles = vec![0usize; n];
    let mut mark = vec![false; n];
    for u in 0..n {
        for &v in &adj[u] {
            mark[v] = true;
        }
        // count each triangle once at its smallest vertex
        for &v in adj[u].iter().filter(|&&v| v > u) {
            for &w in adj[v].iter().filter(|&&w| w > v) {
                if mark[w] {
                    triangles[u] += 1;
                    triangles[v] += 1;
                    triangles[w] += 1;
                }
            }
        }
        for &v in &adj[u] {
            mark[v] = false;
        }
    }
    let per_node: Vec<f64> = (0..n)
        .map(|v| {
            let k = adj[v].len();
            if k < 2 {
                0.0
            } else {
                2.0 * triangles[v] as f64 / (k * (k - 1)) as f64
            }
        })
        .collect();
    let mean = per_node.iter().sum::<f64>() / n as f64;
    ClusteringStats { per_node, mean }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::Coord;

    fn ring_coords(n: usize) -> Vec<Coord> {
        (0..n)
            .map(|i| {
                let th = i as f64 * 2.0 * std::f64::consts::PI / n as f64;
                Coord::new(th.cos(), th.sin())
            })
            .collect()
    }

    fn complete(n: usize) -> SpatialGraph {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        SpatialGraph::new(1.5, ring_coords(n), edges).unwrap()
    }

    fn star(leaves: usize) -> SpatialGraph {
        let mut coords = vec![Coord::new(0.0, 0.0)];
        coords.extend(ring_coords(leaves));
        SpatialGraph::new(1.5, coords, (1..=leaves).map(|k| (0, k))).unwrap()
    }

    #[test]
    fn complete_graph_degrees() {
        let h = degree_histogram(&complete(5));
        assert_eq!(h.counts, vec![0, 0, 0, 0, 5]);
        assert_eq!(h.mean, 4.0);
        assert_eq!(h.variance, 0.0);
        let surv = cumulative_degree(&h);
        assert_eq!(surv, vec![(4, 1.0)]);
    }

    #[test]
    fn survival_is_a_step_function() {
        let h = DegreeHistogram::from_degrees(&[1, 1, 2, 4]);
        assert_eq!(cumulative_degree(&h), vec![(1, 1.0), (2, 0.5), (4, 0.25)]);
    }

    #[test]
    fn degenerate_degrees_fit_poorly() {
        let h = DegreeHistogram::from_degrees(&vec![4; 200]);
        let fit = fit_poisson(&h).unwrap();
        assert_eq!(fit.lambda, 4.0);
        assert!(fit.poor_fit, "{fit:?}");
        assert!(fit_poisson(&DegreeHistogram::from_degrees(&[1, 2, 3])).is_err());
    }

    #[test]
    fn power_law_needs_three_distinct_degrees() {
        let mut d = vec![2; 150];
        d.extend(vec![3; 50]);
        assert!(fit_power_law(&DegreeHistogram::from_degrees(&d), 1).is_err());
    }

    #[test]
    fn component_extremes() {
        let empty = SpatialGraph::new(1.5, ring_coords(8), []).unwrap();
        let c = components(&empty);
        assert_eq!(c.giant_fraction, 1.0 / 8.0);
        assert_eq!(c.sizes.iter().sum::<usize>(), 8);
        assert_eq!(components(&complete(6)).giant_fraction, 1.0);
    }

    #[test]
    fn clustering_extremes() {
        let tri = clustering(&complete(3));
        assert!(tri.per_node.iter().all(|&r| r == 1.0));
        assert_eq!(tri.mean, 1.0);
        assert_eq!(clustering(&star(5)).mean, 0.0);
        // square with one diagonal: nodes on the diagonal see 2 of 3 pairs linked
        let sq = SpatialGraph::new(1.5, ring_coords(4), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
            .unwrap();
        let c = clustering(&sq);
        assert!((c.per_node[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.per_node[1], 1.0);
    }
}
