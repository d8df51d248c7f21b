use qnetcap_core::ensemble::{
    bin_by_distance, read_records_csv, read_summary_csv, write_records_csv, write_summary_csv,
    ModelTemplate, Sweep, SweepVariable, RECORDS_HEADER, SUMMARY_HEADER,
};
use qnetcap_core::{run_sweep, Error, ExperimentConfig, Family};

fn config(family: Family, variable: SweepVariable, values: &[f64]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        ModelTemplate::new(family),
        Sweep {
            variable,
            values: values.to_vec(),
        },
    );
    cfg.master_seed = Some(2024);
    cfg
}

#[test]
fn single_pair_summary_equals_its_record() {
    let mut cfg = config(Family::Waxman, SweepVariable::N, &[2.0]);
    cfg.model.alpha_l_km = 1e12;
    cfg.r_km = vec![10.0];
    cfg.graphs_per_point = 1;
    cfg.pairs_per_graph = 1;
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.records.len(), 1);
    let rec = &out.records[0];
    assert!(rec.connected() && rec.capacity > 0.0);
    assert_eq!(rec.end_ratio, 1.0);
    let s = &out.summary[0];
    assert_eq!(s.mean_capacity, rec.capacity);
    assert_eq!(s.median_capacity, rec.capacity);
    assert_eq!(s.rho, 2.0 / 400.0);
}

#[test]
fn sparse_waxman_median_vanishes_while_mean_does_not() {
    let mut cfg = config(Family::Waxman, SweepVariable::Rho, &[5e-5]);
    cfg.alpha = vec![0.1];
    cfg.graphs_per_point = 10;
    let out = run_sweep(&cfg).unwrap();
    let s = &out.summary[0];
    assert_eq!(s.records, 200);
    assert!(s.median_capacity < 1e-3 && s.median_capacity < 0.1 * s.mean_capacity, "{s:?}");
    assert!(s.mean_capacity > 0.0);
    assert_eq!(s.bound_violations, 0);
    assert!(s.mean_capacity < s.bound_exact);
}

#[test]
fn records_respect_the_sweep_contract() {
    let mut cfg = config(Family::ErdosRenyi, SweepVariable::Rho, &[2e-4, 1e-3]);
    cfg.alpha = vec![0.5, 1.0];
    cfg.graphs_per_point = 3;
    cfg.pairs_per_graph = 7;
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.summary.len(), 4);
    assert_eq!(out.records.len(), 4 * 3 * 7);
    for s in &out.summary {
        assert_eq!(s.rho, s.n as f64 / (4.0 * s.r_km * s.r_km));
        assert!(s.p.unwrap() > 0.4);
        let asymptote = s.bound_asymptotic.unwrap();
        assert!(s.bound_exact < asymptote);
    }
    for r in &out.records {
        assert!(r.s < r.t && r.t < r.n);
        assert!(r.capacity >= 0.0 && (0.0..=1.0).contains(&r.end_ratio));
        assert_eq!(r.connected(), r.capacity > 0.0);
    }
}

#[test]
fn csv_round_trip_and_headers() {
    let mut cfg = config(Family::ScaleFree, SweepVariable::N, &[30.0, 60.0]);
    cfg.r_km = vec![300.0];
    cfg.graphs_per_point = 2;
    cfg.pairs_per_graph = 5;
    let out = run_sweep(&cfg).unwrap();

    let mut buf = Vec::new();
    write_records_csv(&mut buf, &out.records).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), RECORDS_HEADER.join(","));
    assert_eq!(read_records_csv(buf.as_slice()).unwrap(), out.records);

    let mut buf = Vec::new();
    write_summary_csv(&mut buf, &out.summary).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), SUMMARY_HEADER.join(","));
    // scale-free points have no asymptotic bound: trailing empty field
    assert!(text.lines().nth(1).unwrap().ends_with(','));
    let rows = read_summary_csv(buf.as_slice()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].mean_c, out.summary[1].mean_capacity);
    assert_eq!(rows[1].bound_asymptotic, None);

    let mut empty = Vec::new();
    write_records_csv(&mut empty, &[]).unwrap();
    assert_eq!(String::from_utf8(empty).unwrap().trim_end(), RECORDS_HEADER.join(","));
}

#[test]
fn rerun_is_identical() {
    let mut cfg = config(Family::Waxman, SweepVariable::N, &[40.0, 80.0]);
    cfg.r_km = vec![150.0];
    cfg.graphs_per_point = 3;
    let a = run_sweep(&cfg).unwrap();
    let b = run_sweep(&cfg).unwrap();
    assert_eq!(a, b);
    cfg.master_seed = Some(2025);
    assert_ne!(run_sweep(&cfg).unwrap().records, a.records);
}

#[test]
fn equal_distances_bin_by_sort_order() {
    let mut cfg = config(Family::Waxman, SweepVariable::N, &[2.0]);
    cfg.model.alpha_l_km = 1e12;
    cfg.r_km = vec![10.0];
    cfg.graphs_per_point = 1;
    cfg.pairs_per_graph = 40;
    let out = run_sweep(&cfg).unwrap();
    // a single pair sampled 40 times: one distance, one capacity
    let bins = bin_by_distance(&out.records, 8).unwrap();
    assert!(bins.iter().all(|b| b.count == 5 && b.mean_capacity == out.records[0].capacity));
}

#[test]
fn missing_seed_and_bad_values_are_reported() {
    let mut cfg = config(Family::Waxman, SweepVariable::N, &[10.0]);
    cfg.r_km = vec![100.0];
    cfg.master_seed = None;
    assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));

    let err = ExperimentConfig::from_json(
        r#"{"model": {"family": "scale_free", "m": 5}, "sweep": {"variable": "n", "values": [4, 2.5]},
            "R_km": [-1]}"#,
    )
    .unwrap_err();
    let text = err.to_string();
    for field in ["sweep.values", "R_km"] {
        assert!(text.contains(field), "{text}");
    }
}
