//! Sampling oracles for the generators and the degree/cluster statistics.

use qnetcap_core::graphstats::{clustering, degree_histogram, fit_poisson, fit_power_law, DegreeHistogram};
use qnetcap_core::seed::{derive_seed, rng_from_seed};
use qnetcap_core::{generate, ModelParams, SpatialGraph};
use rand::Rng;
use rand_distr::{Distribution, Poisson};

fn ensemble(params: impl Fn(u64) -> ModelParams, graphs: u64) -> Vec<SpatialGraph> {
    (0..graphs).map(|g| generate(&params(g)).unwrap()).collect()
}

#[test]
fn waxman_links_follow_the_exponential_law() {
    // Two nodes at a time: the link count should match the summed link
    // probabilities exp(-D / alpha_L) of the sampled placements.
    let trials = 100_000;
    let (mut expected, mut variance, mut observed) = (0.0, 0.0, 0.0);
    for seed in 0..trials {
        let g = generate(&ModelParams::waxman(2, 150.0, seed)).unwrap();
        let p = (-g.coords()[0].distance(&g.coords()[1]) / 226.0).exp();
        expected += p;
        variance += p * (1.0 - p);
        observed += g.edge_count() as f64;
    }
    assert!((observed - expected).abs() <= 4.0 * variance.sqrt(), "{observed} vs {expected}");
}

#[test]
fn waxman_link_at_one_decay_length() {
    // Forcing D = alpha_L: pick alpha_L equal to the sampled distance.
    let mut hits = 0usize;
    let trials = 100_000u64;
    for seed in 0..trials {
        let probe = generate(&ModelParams::waxman(2, 100.0, seed)).unwrap();
        let d = probe.coords()[0].distance(&probe.coords()[1]);
        let g = generate(&ModelParams::waxman(2, 100.0, seed).with_alpha_l(d)).unwrap();
        hits += g.edge_count();
    }
    let p = (-1.0f64).exp();
    let sd = (p * (1.0 - p) * trials as f64).sqrt();
    assert!((hits as f64 - p * trials as f64).abs() <= 4.0 * sd, "{hits}");
}

#[test]
fn erdos_renyi_edge_count_is_binomial() {
    let (n, p) = (200usize, 0.05);
    let pairs = (n * (n - 1) / 2) as f64;
    let graphs = ensemble(|g| ModelParams::erdos_renyi(n, 300.0, p, g), 50);
    let mean = graphs.iter().map(|g| g.edge_count() as f64).sum::<f64>() / 50.0;
    let sd = (pairs * p * (1.0 - p) / 50.0).sqrt();
    assert!((mean - pairs * p).abs() <= 4.0 * sd, "{mean}");
}

#[test]
fn poisson_fit_recovers_rate_and_is_calibrated() {
    // Under a true Poisson law the 1% poor-fit flag should fire on about 2
    // of 200 samples; 8 or more is a 4-sigma excess.
    let poisson = Poisson::new(6.0).unwrap();
    let mut poor = 0;
    for seed in 0..200 {
        let mut rng = rng_from_seed(seed);
        let degrees: Vec<usize> = (0..10_000).map(|_| poisson.sample(&mut rng) as usize).collect();
        let fit = fit_poisson(&DegreeHistogram::from_degrees(&degrees)).unwrap();
        assert!((5.9..=6.1).contains(&fit.lambda), "{fit:?}");
        poor += fit.poor_fit as usize;
    }
    assert!(poor < 8, "{poor} of 200 flagged");
}

#[test]
fn power_law_fit_recovers_exponent() {
    let mut rng = rng_from_seed(2);
    let degrees: Vec<usize> = (0..20_000)
        .map(|_| {
            let u: f64 = 1.0 - rng.random::<f64>();
            (10.0 * u.powf(-0.5)).floor() as usize
        })
        .collect();
    let fit = fit_power_law(&DegreeHistogram::from_degrees(&degrees), 10).unwrap();
    assert!((fit.exponent - 2.0).abs() <= 0.3, "{fit:?}");
}

#[test]
fn waxman_degrees_are_poisson_at_low_density() {
    let (n, r) = (640, 4000.0);
    let graphs = ensemble(|g| ModelParams::waxman(n, r, derive_seed(9, &[g])), 50);
    let degrees: Vec<usize> = graphs.iter().flat_map(|g| g.degrees()).collect();
    let hist = DegreeHistogram::from_degrees(&degrees);
    assert!((0.9..=1.1).contains(&hist.dispersion()), "{}", hist.dispersion());
    // ((N - 1) / N) 4 R^2 E[exp(-D / alpha_L)] from quadrature at R = 4000 km
    let expected = 298_322.76 * (n - 1) as f64 / n as f64;
    let rho = n as f64 / (4.0 * r * r);
    assert!((hist.mean / rho / expected - 1.0).abs() < 0.03, "{}", hist.mean / rho);
}

#[test]
fn scale_free_tail_is_straighter_than_waxman() {
    // Both at rho = 1e-5. Denser Waxman graphs have k_max / 2 below their
    // mean degree, so the fitted range sits on the flat head of the survival
    // curve and says nothing about its shape.
    let sf = ensemble(|g| ModelParams::scale_free(640, 4000.0, 2, g), 40);
    let wx = ensemble(|g| ModelParams::waxman(640, 4000.0, g), 40);
    let pooled = |gs: &[SpatialGraph]| {
        DegreeHistogram::from_degrees(&gs.iter().flat_map(|g| g.degrees()).collect::<Vec<_>>())
    };
    let sf_fit = fit_power_law(&pooled(&sf), 2).unwrap();
    let wx_fit = fit_power_law(&pooled(&wx), 2).unwrap();
    assert!(sf_fit.rms_residual < wx_fit.rms_residual, "{sf_fit:?} vs {wx_fit:?}");
}

#[test]
fn scale_free_mean_degree_is_exact() {
    for n in [5usize, 100, 1001] {
        for m in 1..4 {
            let g = generate(&ModelParams::scale_free(n, 500.0, m, n as u64)).unwrap();
            let mean = degree_histogram(&g).mean;
            assert_eq!(g.edge_count(), m * n - m * (m + 1) / 2);
            assert!((mean - ((2 * n - 1 - m) * m) as f64 / n as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn scale_free_clustering_decays_with_size() {
    let mean_clustering = |n: usize| {
        let gs = ensemble(|g| ModelParams::scale_free(n, 800.0, 2, derive_seed(n as u64, &[g])), 10);
        gs.iter().map(|g| clustering(g).mean).sum::<f64>() / gs.len() as f64
    };
    let (small, large) = (mean_clustering(200), mean_clustering(2000));
    assert!(small > large, "{small} vs {large}");
}

#[test]
fn waxman_clustering_settles_at_fixed_density() {
    // alpha = 0.1 region; doubling N at fixed density changes little
    let r = 226.0 / (2.0 * 2f64.sqrt() * 0.1);
    let rho = 4e-4;
    let mean_clustering = |scale: f64| {
        let half = r * scale.sqrt();
        let n = (rho * 4.0 * half * half).round() as usize;
        let gs = ensemble(|g| ModelParams::waxman(n, half, derive_seed(n as u64, &[g])), 3);
        gs.iter().map(|g| clustering(g).mean).sum::<f64>() / gs.len() as f64
    };
    let (a, b) = (mean_clustering(1.0), mean_clustering(2.0));
    assert!(a > 0.2 && (a - b).abs() < 0.05, "{a} vs {b}");
}
