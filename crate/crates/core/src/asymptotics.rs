//! Analytic node-capacity bounds and their asymptotic constants.
//!
//! * `zeta_waxman`: `2 pi ∫ r e^(-r/alpha_L) C_E(r) dr`, so that the mean
//!   Waxman node capacity approaches `zeta * rho` for large regions.
//! * `zeta_er`: the same integral without the distance decay, giving the
//!   Erdős–Rényi asymptote `zeta_ER * p * rho`.
//! * `node_bound_waxman_exact`: the finite-region mean node capacity
//!   `(N - 1) E[e^(-D/alpha_L) C_E(D)]` over uniform node pairs.
//! * `node_bound_scale_free`: `2m` times the `1/D`-weighted mean edge
//!   capacity over uniform node pairs.
//!
//! Radial integrals use adaptive Gauss–Kronrod quadrature; pair averages
//! use seeded Monte Carlo and report a standard error.

use std::f64::consts::{LN_10, PI};

use rand::Rng;
use serde::Serialize;

use crate::capacity::{pure_loss_capacity, LossParams};
use crate::error::{invalid, Error, Result};
use crate::quadrature;
use crate::seed::{rng_from_seed, SimRng};

pub const MIN_MONTE_CARLO_SAMPLES: usize = 100_000;

/// Distance floor for the `1/D` weight of the scale-free bound, in km.
pub const DEFAULT_EPSILON_KM: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Radial cutoff in km; the integrands decay like `10^(-gamma r)`.
    pub r_max_km: f64,
    pub max_intervals: usize,
}

impl QuadratureSpec {
    pub fn waxman_default() -> Self {
        Self {
            rel_tol: 1e-8,
            r_max_km: 6000.0,
            max_intervals: 2000,
        }
    }

    pub fn er_default() -> Self {
        Self {
            r_max_km: 2500.0,
            ..Self::waxman_default()
        }
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", format!("must be positive, got {}", self.rel_tol)));
        }
        if !(self.r_max_km > 0.0 && self.r_max_km.is_finite()) {
            return Err(invalid(
                "r_max_km",
                format!("must be positive, got {}", self.r_max_km),
            ));
        }
        if self.max_intervals < 2 {
            return Err(invalid("max_intervals", "must be at least 2"));
        }
        Ok(())
    }

    /// Geometrically graded breakpoints toward `r = 0`, where the capacity
    /// has its logarithmic singularity.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = (1..=40).rev().map(|k| self.r_max_km * 0.5f64.powi(k)).collect();
        pts.insert(0, 0.0);
        pts.push(self.r_max_km);
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub value: f64,
    /// Quadrature error estimate, or one Monte Carlo standard error.
    pub error: f64,
    pub method: Method,
    pub samples: Option<usize>,
}

fn radial_integral(decay_km: f64, loss: &LossParams, spec: &QuadratureSpec) -> Result<BoundResult> {
    spec.validate()?;
    let gamma = loss.gamma;
    let inv_decay = 1.0 / decay_km;
    let estimate = quadrature::integrate(
        |r| 2.0 * PI * r * (-r * inv_decay).exp() * pure_loss_capacity(r, gamma),
        &spec.breakpoints(),
        spec.rel_tol,
        0.0,
        spec.max_intervals,
    )?;
    Ok(BoundResult {
        value: estimate.value,
        error: estimate.error,
        method: Method::Quadrature,
        samples: None,
    })
}

/// Slope `zeta` of the large-region Waxman node capacity `zeta * rho`.
pub fn zeta_waxman(alpha_l_km: f64, loss: &LossParams, spec: &QuadratureSpec) -> Result<BoundResult> {
    if !(alpha_l_km > 0.0) {
        return Err(invalid("alpha_l_km", format!("must be positive, got {alpha_l_km}")));
    }
    radial_integral(alpha_l_km, loss, spec)
}

/// Slope `zeta_ER` of the large-region Erdős–Rényi node capacity
/// `zeta_ER * p * rho`.
pub fn zeta_er(loss: &LossParams, spec: &QuadratureSpec) -> Result<BoundResult> {
    radial_integral(f64::INFINITY, loss, spec)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_MONTE_CARLO_SAMPLES {
        return Err(invalid(
            "samples",
            format!("need at least {MIN_MONTE_CARLO_SAMPLES}, got {samples}"),
        ));
    }
    Ok(())
}

fn check_region(r_km: f64) -> Result<()> {
    if !(r_km > 0.0 && r_km.is_finite()) {
        return Err(invalid("r_km", format!("must be positive, got {r_km}")));
    }
    Ok(())
}

fn uniform_in_square(rng: &mut SimRng, r: f64) -> (f64, f64) {
    (
        r * (2.0 * rng.random::<f64>() - 1.0),
        r * (2.0 * rng.random::<f64>() - 1.0),
    )
}

/// Mean of `kernel(|x - x'|)` over independent uniform points of the square
/// of half-width `r`.
///
/// Half of the samples are literal uniform pairs; the other half draw the
/// displacement from a planar density `e^(-|u|/s) / (2 pi s^2)` that puts
/// mass where a short-range kernel lives. Each sample is weighted by
/// `p(u) / (p(u)/2 + q(u)/2)`, where `p` is the exact displacement density
/// of two uniform points (a product of triangular densities). Weights are
/// bounded by 2, and the estimate stays unbiased at every region size.
fn pair_mean<K: Fn(f64) -> f64>(
    r: f64,
    scale_km: f64,
    kernel: K,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let side = 2.0 * r;
    let tri = |a: f64| (side - a.abs()).max(0.0) / (side * side);
    let q_norm = 1.0 / (2.0 * PI * scale_km * scale_km);
    let mut rng = rng_from_seed(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let (ux, uy) = if rng.random::<bool>() {
            let (ax, ay) = uniform_in_square(&mut rng, r);
            let (bx, by) = uniform_in_square(&mut rng, r);
            (bx - ax, by - ay)
        } else {
            let u1 = 1.0 - rng.random::<f64>();
            let u2 = 1.0 - rng.random::<f64>();
            let dist = -scale_km * (u1 * u2).ln();
            let theta = 2.0 * PI * rng.random::<f64>();
            (dist * theta.cos(), dist * theta.sin())
        };
        let d = ux.hypot(uy);
        let p = tri(ux) * tri(uy);
        let w = if p > 0.0 && d > 0.0 {
            let q = q_norm * (-d / scale_km).exp();
            kernel(d) * p / (0.5 * p + 0.5 * q)
        } else {
            0.0
        };
        sum += w;
        sum_sq += w * w;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Proposal scale matched to the decay of `e^(-r/alpha_L) C_E(r)`, capped
/// at the region half-width.
fn proposal_scale(r_km: f64, alpha_l_km: f64, loss: &LossParams) -> f64 {
    (1.0 / (loss.gamma * LN_10 + 1.0 / alpha_l_km)).min(r_km)
}

/// Mean capacity that one node receives from one other uniformly placed
/// node in the Waxman model, `E[e^(-D/alpha_L) C_E(D)]`.
pub fn waxman_pair_mean(
    r_km: f64,
    alpha_l_km: f64,
    loss: &LossParams,
    samples: usize,
    seed: u64,
) -> Result<BoundResult> {
    check_samples(samples)?;
    check_region(r_km)?;
    if !(alpha_l_km > 0.0) {
        return Err(invalid("alpha_l_km", format!("must be positive, got {alpha_l_km}")));
    }
    let gamma = loss.gamma;
    let inv = 1.0 / alpha_l_km;
    let (mean, se) = pair_mean(
        r_km,
        proposal_scale(r_km, alpha_l_km, loss),
        |d| (-d * inv).exp() * pure_loss_capacity(d, gamma),
        samples,
        seed,
    );
    Ok(BoundResult {
        value: mean,
        error: se,
        method: Method::MonteCarlo,
        samples: Some(samples),
    })
}

/// Finite-region mean Waxman node capacity for `n` nodes.
pub fn node_bound_waxman_exact(
    n: usize,
    r_km: f64,
    alpha_l_km: f64,
    loss: &LossParams,
    samples: usize,
    seed: u64,
) -> Result<BoundResult> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 nodes, got {n}")));
    }
    let pair = waxman_pair_mean(r_km, alpha_l_km, loss, samples, seed)?;
    let k = (n - 1) as f64;
    Ok(BoundResult {
        value: k * pair.value,
        error: k * pair.error,
        ..pair
    })
}

/// Finite-region mean Erdős–Rényi node capacity `(N - 1) p E[C_E(D)]`.
pub fn node_bound_er_exact(
    n: usize,
    r_km: f64,
    p: f64,
    loss: &LossParams,
    samples: usize,
    seed: u64,
) -> Result<BoundResult> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 nodes, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    check_samples(samples)?;
    check_region(r_km)?;
    let gamma = loss.gamma;
    let (mean, se) = pair_mean(
        r_km,
        proposal_scale(r_km, f64::INFINITY, loss),
        |d| pure_loss_capacity(d, gamma),
        samples,
        seed,
    );
    let k = (n - 1) as f64 * p;
    Ok(BoundResult {
        value: k * mean,
        error: k * se,
        method: Method::MonteCarlo,
        samples: Some(samples),
    })
}

/// Scale-free node-capacity bound: `2m` times the ratio estimator
/// `sum w_i C_E(D_i) / sum w_i` with `w_i = 1 / max(D_i, epsilon)` over
/// uniform node pairs. Independent of the node count.
pub fn node_bound_scale_free(
    m: usize,
    r_km: f64,
    loss: &LossParams,
    samples: usize,
    epsilon_km: f64,
    seed: u64,
) -> Result<BoundResult> {
    check_samples(samples)?;
    check_region(r_km)?;
    if m < 1 {
        return Err(invalid("m", "must be at least 1"));
    }
    if !(epsilon_km > 0.0) {
        return Err(invalid("epsilon_km", format!("must be positive, got {epsilon_km}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (ax, ay) = uniform_in_square(&mut rng, r_km);
        let (bx, by) = uniform_in_square(&mut rng, r_km);
        let d = (bx - ax).hypot(by - ay);
        if d > 0.0 {
            pairs.push((1.0 / d.max(epsilon_km), pure_loss_capacity(d, loss.gamma)));
        }
    }
    let n = pairs.len() as f64;
    let sum_w: f64 = pairs.iter().map(|p| p.0).sum();
    let ratio = pairs.iter().map(|&(w, c)| w * c).sum::<f64>() / sum_w;
    let mean_w = sum_w / n;
    // delta-method variance of a ratio estimator
    let resid_var = pairs
        .iter()
        .map(|&(w, c)| (w * (c - ratio)).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    let se = (resid_var / n).sqrt() / mean_w;
    let scale = 2.0 * m as f64;
    Ok(BoundResult {
        value: scale * ratio,
        error: scale * se,
        method: Method::MonteCarlo,
        samples: Some(samples),
    })
}

/// Root of `bound(rho) = target` by geometric bisection on `[lo, hi]`, to a
/// relative width of 1e-7. `bound` must be non-decreasing.
pub fn solve_critical_density<F>(mut bound: F, target: f64, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid("bracket", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let (f_lo, f_hi) = (bound(lo)?, bound(hi)?);
    if !(f_lo <= target && target <= f_hi) || f_lo == f_hi {
        return Err(Error::NotBracketed {
            target,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1e-7 * hi {
        let mid = (lo * hi).sqrt();
        if bound(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Density at which the finite-region Waxman node-capacity bound reaches
/// `target`, treating `N = 4 R^2 rho` as continuous.
pub fn critical_density_waxman_exact(
    r_km: f64,
    alpha_l_km: f64,
    loss: &LossParams,
    samples: usize,
    seed: u64,
    target: f64,
) -> Result<f64> {
    let pair = waxman_pair_mean(r_km, alpha_l_km, loss, samples, seed)?.value;
    let area = 4.0 * r_km * r_km;
    solve_critical_density(
        |rho| Ok((rho * area - 1.0).max(0.0) * pair),
        target,
        1.0 / area,
        1.0,
    )
}
