use uc_kit::duality::{theorem1_chain, theorem1_path};
use uc_kit::geometry::ConvexBody;
use uc_kit::moduli::*;
use uc_kit::rademacher::*;
use uc_kit::rng::stream;
use uc_kit::Error;

fn l(p: f64, m: usize) -> ConvexBody {
    ConvexBody::lp(p, 1.0, m).unwrap()
}

fn hanner_fit(p: f64) -> UcFit {
    let grid = default_eps_grid();
    let curve = ModulusCurve {
        kind: ModulusKind::Delta,
        values: grid.iter().map(|e| 1.0 - (1.0 - (e / 2.0).powf(p)).powf(1.0 / p)).collect(),
        grid,
        bias: Bias::Exact,
        budget: Budget::default(),
        seed: 0,
        anchor: None,
        monotonicity_repairs: 0,
    };
    fit_uc_params(&curve, FitOptions::default()).unwrap()
}

fn fixed_one() -> DataModel {
    DataModel::new(1, Distribution::FixedPoints { points: vec![vec![1.0]] }, 1.0).unwrap()
}

#[test]
fn interval_with_unit_data() {
    let seg = l(2.0, 1);
    let one = estimate_rademacher(&seg, &fixed_one(), 1, 100, 1).unwrap();
    assert_eq!((one.mean, one.stderr), (1.0, 0.0));
    assert_eq!(rademacher_exact(&seg, &[vec![1.0]]).unwrap(), 1.0);
    assert_eq!(rademacher_exact(&seg, &[vec![1.0], vec![1.0]]).unwrap(), 0.5);
    let two = estimate_rademacher(&seg, &fixed_one(), 2, 20_000, 2).unwrap();
    assert!((two.mean - 0.5).abs() < 4.0 * two.stderr, "{two:?}");
}

#[test]
fn dual_norm_matches_sampled_sup() {
    let mut rng = stream(3, 0);
    for p in [2.0, 4.0] {
        let body = l(p, 2);
        let data = DataModel::new(2, Distribution::SphereUniformInPolarGauge, 1.0).unwrap();
        let xs = data.sample(&body, 8, &mut rng);
        let mut v = vec![0.0; 2];
        for (i, x) in xs.iter().enumerate() {
            let s = if i % 3 == 0 { -1.0 } else { 1.0 };
            v[0] += s * x[0] / 8.0;
            v[1] += s * x[1] / 8.0;
        }
        let closed = body.support(&v).unwrap();
        let brute = sampled_sup(&body, &v, 10_000, 4);
        assert!(brute <= closed + 1e-12 && closed - brute < 1e-2, "p {p}: {brute} vs {closed}");
    }
}

#[test]
fn data_respect_the_polar_bound() {
    let body = l(4.0, 3);
    let mut rng = stream(5, 0);
    for dist in [
        Distribution::SphereUniformInPolarGauge,
        Distribution::GaussianClipped { sigma: 2.0 },
        Distribution::SignedCoordinates,
        Distribution::FixedPoints { points: vec![vec![1.0, 2.0, 3.0], vec![0.0, -1.0, 0.5]] },
    ] {
        let data = DataModel::new(3, dist, 1.5).unwrap();
        for x in data.sample(&body, 500, &mut rng) {
            assert!(body.support(&x).unwrap() <= 1.5 + 1e-9);
        }
    }
    assert!(DataModel::new(3, Distribution::GaussianClipped { sigma: 0.0 }, 1.0).is_err());
    assert!(DataModel::new(2, Distribution::FixedPoints { points: vec![vec![1.0]] }, 1.0).is_err());
    let json = r#"{"dim":2,"distribution":"gaussian_clipped","sigma":0.5,"d_bound":1}"#;
    let parsed: DataModel = serde_json::from_str(json).unwrap();
    assert_eq!(parsed.distribution, Distribution::GaussianClipped { sigma: 0.5 });
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    let mut rng = stream(6, 0);
    for (p, m, n) in [(2.0, 2, 6), (4.0, 3, 10), (3.0, 1, 12)] {
        let body = l(p, m);
        let raw = DataModel::new(m, Distribution::SphereUniformInPolarGauge, 1.0).unwrap().sample(&body, n, &mut rng);
        let data = DataModel::new(m, Distribution::FixedPoints { points: raw.clone() }, 1.0).unwrap();
        let xs = data.sample(&body, n, &mut rng);
        let exact = rademacher_exact(&body, &xs).unwrap();
        let mc = estimate_rademacher(&body, &data, n, 100_000, 7).unwrap();
        assert!((mc.mean - exact).abs() <= 3.0 * mc.stderr, "p {p}: {} vs {exact} ± {}", mc.mean, mc.stderr);
    }
    assert!(rademacher_exact(&l(2.0, 1), &vec![vec![1.0]; 17]).is_err());
}

#[test]
fn estimates_decrease_with_n() {
    let body = l(2.0, 5);
    let data = DataModel::new(5, Distribution::GaussianClipped { sigma: 0.5 }, 1.0).unwrap();
    let rows: Vec<_> =
        [4, 16, 64, 256].iter().map(|&n| estimate_rademacher(&body, &data, n, 2000, n as u64).unwrap()).collect();
    for w in rows.windows(2) {
        assert!(w[1].mean <= w[0].mean + 2.0 * (w[0].stderr + w[1].stderr), "{w:?}");
    }
}

#[test]
fn scaling_the_data_scales_the_estimate() {
    let body = l(4.0, 3);
    let a = DataModel::new(3, Distribution::SphereUniformInPolarGauge, 1.0).unwrap();
    let b = DataModel::new(3, Distribution::SphereUniformInPolarGauge, 2.5).unwrap();
    let ra = estimate_rademacher(&body, &a, 32, 500, 8).unwrap();
    let rb = estimate_rademacher(&body, &b, 32, 500, 8).unwrap();
    assert!((rb.mean - 2.5 * ra.mean).abs() <= 1e-12 * rb.mean);
}

#[test]
fn bound_report_on_the_disk() {
    let body = l(2.0, 10);
    let data = DataModel::new(10, Distribution::GaussianClipped { sigma: 0.5 }, 1.0).unwrap();
    let grid = [16, 64, 256, 1024];
    let r = check_rademacher_bound(&body, &hanner_fit(2.0), &data, &grid, 500, 9).unwrap();
    assert!((r.slope.unwrap() + 0.5).abs() <= 0.1, "{:?}", r.slope);
    assert!((r.predicted_slope + 0.5).abs() < 0.03);
    assert!(r.chained_constant.unwrap() > 0.0);
    let p = r.p;
    for row in &r.rows {
        assert!(row.mean <= r.empirical_constant * data.d_bound / (row.n as f64).powf(1.0 / p) * (1.0 + 1e-12));
    }
    let csv = r.to_table().to_csv().unwrap();
    assert!(csv.starts_with("n,mean,stderr,trials,body,distribution,seed\n"));

    let single = check_rademacher_bound(&body, &hanner_fit(2.0), &data, &[64], 100, 9).unwrap();
    assert!(single.slope.is_none() && single.empirical_constant > 0.0);

    let flat = UcFit::NotUc { reason: "polytope".into() };
    assert!(matches!(
        check_rademacher_bound(&l(1.0, 2), &flat, &data, &grid, 10, 1),
        Err(Error::NotUniformlyConvex(_))
    ));
}

#[test]
fn type_induction_equality_in_euclidean_space() {
    let spec = SequenceSpec { count: 40, max_len: 12, mc_trials: 0 };
    let r = check_type_induction(&l(2.0, 3), 2.0, 2.0, spec, 10).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.exact);
    assert!(r.max_relative_gap < 1e-12, "{}", r.max_relative_gap);
}

#[test]
fn type_induction_with_chained_constant() {
    let params = hanner_fit(4.0).params().unwrap();
    let e = theorem1_chain(params, &theorem1_path(Item::T1c, Item::T1e).unwrap()).unwrap().last().unwrap().out_params;
    let polar = l(4.0, 3).polar();
    let spec = SequenceSpec { count: 60, max_len: 12, mc_trials: 0 };
    let r = check_type_induction(&polar, e.exponent, e.alpha, spec, 11).unwrap();
    assert_eq!(r.violations, 0, "{r:?}");
    assert!(r.exact);
}

#[test]
fn single_term_needs_cprime_at_least_q() {
    let spec = SequenceSpec { count: 5, max_len: 1, mc_trials: 0 };
    let ok = check_type_induction(&l(4.0, 2), 1.5, 1.5, spec, 12).unwrap();
    assert_eq!(ok.violations, 0);
    let bad = check_type_induction(&l(4.0, 2), 1.5, 1.4, spec, 12).unwrap();
    assert_eq!(bad.violations, 5);
    assert!(check_type_induction(&l(4.0, 2), 2.5, 1.0, spec, 12).is_err());
}

#[test]
fn long_sequences_fall_back_to_monte_carlo() {
    let spec = SequenceSpec { count: 20, max_len: 20, mc_trials: 2000 };
    let r = check_type_induction(&l(2.0, 2), 2.0, 2.0, spec, 13).unwrap();
    assert!(!r.exact);
    assert!(r.max_relative_gap < 0.2);
}

#[test]
fn signed_coordinates_match_the_dense_draw() {
    use rand::Rng;
    let body = l(4.0, 6);
    let data = DataModel::new(6, Distribution::SignedCoordinates, 1.0).unwrap();
    let est = estimate_rademacher(&body, &data, 9, 50, 14).unwrap();
    let dense: Vec<f64> = (0..50)
        .map(|t| {
            let mut rng = stream(14, t);
            let xs = data.sample(&body, 9, &mut rng);
            let mut acc = vec![0.0; 6];
            for x in &xs {
                let e = if rng.random::<bool>() { 1.0 } else { -1.0 };
                for (a, v) in acc.iter_mut().zip(x) {
                    *a += e * v;
                }
            }
            body.support(&acc).unwrap() / 9.0
        })
        .collect();
    assert_eq!(est.mean, dense.iter().sum::<f64>() / 50.0);
}
