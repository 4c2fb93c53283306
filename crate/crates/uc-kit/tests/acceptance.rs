//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Criteria whose targets are known to be unreachable print
//! `FAIL (known: ...)` and do not fail the run; every other failure does.

use std::time::Instant;

use rand::Rng;
use uc_kit::certify::{check_global_scaling, SAFETY_MARGIN};
use uc_kit::duality::{
    conjugate_table, discrete_conjugate, fd_hessian, lp_hessian_det, theorem1_chain, theorem1_path, SampledFunction,
};
use uc_kit::geometry::{pnorm, ConvexBody, Exponent};
use uc_kit::linalg;
use uc_kit::moduli::*;
use uc_kit::rademacher::*;
use uc_kit::rng::stream;
use uc_kit::solvers::*;

struct Outcome {
    pass: bool,
    /// Set when the failure is the documented unreachable part.
    known: Option<&'static str>,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, known: None, detail }
    }
}

fn l(p: f64, m: usize) -> ConvexBody {
    ConvexBody::lp(p, 1.0, m).unwrap()
}

fn info(msg: String) {
    println!("    info: {msg}");
}

fn chain_to(params: UCParams, to: Item) -> UCParams {
    let path = theorem1_path(params.item, to).unwrap();
    theorem1_chain(params, &path).unwrap().last().map_or(params, |t| t.out_params)
}

/// Fitted parameters carried from earlier criteria to later ones.
#[derive(Default)]
struct Shared {
    l2_fit: Option<UcFit>,
    l4_fit: Option<UcFit>,
}

fn criterion1(shared: &mut Shared) -> Outcome {
    let grid = default_eps_grid();
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for m in 2..=5 {
        let t0 = Instant::now();
        let c = delta_curve(&l(2.0, m), &grid, Budget::default(), 100 + m as u64).unwrap();
        let secs = t0.elapsed().as_secs_f64();
        let err = c
            .grid
            .iter()
            .zip(&c.values)
            .map(|(e, v)| (v - (1.0 - (1.0 - e * e / 4.0).sqrt())).abs())
            .fold(0.0, f64::max);
        info(format!("dim {m}: max |δ̂ − δ| = {err:.2e}, {secs:.1} s"));
        worst = worst.max(err);
        slowest = slowest.max(secs);
        if m == 2 {
            shared.l2_fit = Some(fit_uc_params(&c, FitOptions::default()).unwrap());
        }
    }
    Outcome::new(
        worst <= 1e-3 && slowest <= 60.0,
        format!("max error {worst:.2e} (tol 1e-3), slowest dimension {slowest:.1} s (limit 60 s)"),
    )
}

fn criterion2() -> Outcome {
    let tol = 1e-2;
    let params = default_tau_grid();
    let eps = default_eps_grid();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for p in [2.0, 4.0] {
        let body = l(p, 2);
        let g = check_lindenstrauss_global(&body, &params, &eps, Budget::default(), 200, tol).unwrap();
        let a = 2f64.powf(-1.0 / p);
        let anchor = Anchor::at(&body, &[a, a]).unwrap();
        let loc = check_lindenstrauss_local(&body, &params, &eps, &anchor, Budget::default(), 201, tol).unwrap();
        info(format!("ℓ{p}: global max discrepancy {:.2e}, local {:.2e}", g.max_discrepancy, loc.max_discrepancy));
        pass &= g.pass && loc.pass;
        worst = worst.max(g.max_discrepancy).max(loc.max_discrepancy);
    }
    Outcome::new(pass, format!("max discrepancy {worst:.2e} over 20 τ and 20 t values (tol {tol:.0e})"))
}

fn criterion3(shared: &mut Shared) -> Outcome {
    let body = l(4.0, 2);
    let curve = delta_curve(&body, &default_eps_grid(), Budget::default(), 300).unwrap();
    let fit = fit_uc_params(&curve, FitOptions::default()).unwrap();
    let Some(c) = fit.params() else {
        return Outcome::new(false, "ℓ4 δ curve was not certified".into());
    };
    shared.l4_fit = Some(fit);
    let b = chain_to(c, Item::T1b);
    let alpha = b.alpha * (1.0 - SAFETY_MARGIN);
    let r = check_global_scaling(&body, alpha, b.exponent, 100_000, 301).unwrap();
    let p_ok = (3.7..=4.3).contains(&c.exponent);
    Outcome::new(
        p_ok && r.violations == 0,
        format!(
            "p̂ = {:.3} (need [3.7, 4.3]), α̂ = {:.3e}, (b) constant {:.3e} with 10% margin: {} violations / 1e5",
            c.exponent, c.alpha, alpha, r.violations
        ),
    )
}

fn criterion4() -> Outcome {
    let mut rng = stream(400, 0);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for m in [2usize, 3] {
        for p in [3.0, 4.0, 6.0] {
            let mut done = 0;
            while done < 20 {
                let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
                let n = pnorm(&raw, Exponent::Finite(p));
                let x: Vec<f64> = raw.iter().map(|v| v / n).collect();
                if x.iter().any(|v| *v < 0.1) {
                    continue;
                }
                done += 1;
                let (det, _) = lp_hessian_det(&x, p).unwrap();
                let fd = fd_hessian(|z| pnorm(z, Exponent::Finite(p)).powi(2), &x).determinant();
                worst = worst.max((fd - det).abs() / det);
                count += 1;
            }
        }
    }
    let degenerate = lp_hessian_det(&[1.0, 0.0, 0.0], 4.0).unwrap() == (0.0, true);
    Outcome::new(
        worst <= 0.01 && degenerate,
        format!(
            "{count} points, max relative error {worst:.2e} (tol 1e-2); zero coordinate gives 0 + flag: {degenerate}"
        ),
    )
}

/// ℓ4 ball in dimension 20 with `x*` the radial projection of
/// `(1, 0.104, …, 0.104)` and `b` pushed out along the normal by `offset`.
fn corollary3_instance(offset: f64) -> (ConvexBody, Objective) {
    let m = 20;
    let body = l(4.0, m);
    let mut dir = vec![0.104; m];
    dir[0] = 1.0;
    let xs = body.radial(&dir).unwrap();
    let n = body.polar().lmo(&xs).unwrap();
    let b = linalg::axpy(&xs, offset / linalg::norm2(&n), &n);
    let obj = make_objective(&ObjectiveSpec::Quadratic { b, scale: 1.0 }, &body).unwrap();
    (body, obj)
}

fn criterion5() -> Outcome {
    let (body, obj) = corollary3_instance(0.8);
    let (xs, _) = obj.optimum.clone().unwrap();
    let min_coord = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let grad = linalg::norm2(&obj.gradient(&xs));
    info(format!("x* min coordinate {min_coord:.4}, ‖∇f(x*)‖ = {grad:.3}"));
    let window = (50, 2000);
    let fit = |rule: StepRule, seed: u64, model: RateModel| {
        let t = vanilla_fw(&obj, &body, rule, SolverOptions::new(2000, seed)).unwrap();
        fit_series(&t.k, t.primal_gap.as_ref().unwrap(), window, model)
    };
    let ls = fit(StepRule::LineSearch, 0, RateModel::Geometric);
    let ls_best = {
        let t = vanilla_fw(&obj, &body, StepRule::LineSearch, SolverOptions::new(2000, 0)).unwrap();
        fit_best(&t.k, t.primal_gap.as_ref().unwrap(), window).model
    };
    // The starting vertex depends on the seed. The gap falls in steps
    // rather than smoothly, which scatters r² from run to run, so the
    // spread over 100 seeds is reported next to the seed-0 verdict.
    let spread: Vec<f64> = (0..100).map(|s| fit(StepRule::LineSearch, s, RateModel::Geometric).r_squared).collect();
    let mut sorted = spread.clone();
    sorted.sort_by(f64::total_cmp);
    info(format!(
        "line search r² over seeds 0..100: min {:.3}, median {:.3}, max {:.3}, {} of 100 at or above 0.95",
        sorted[0],
        sorted[50],
        sorted[99],
        spread.iter().filter(|r| **r >= 0.95).count()
    ));
    let ls_pass = min_coord >= 0.1
        && grad >= 0.5
        && ls_best == RateModel::Geometric
        && ls.r_squared >= 0.95
        && ls.exponent_or_ratio < 1.0;
    let ag = fit(StepRule::Agnostic, 0, RateModel::PowerLaw);
    let ag_pass = (ag.exponent_or_ratio + 1.0).abs() <= 0.2;
    let mut out = Outcome::new(
        ls_pass && ag_pass,
        format!(
            "line search: geometric ratio {:.5}, r² {:.3} (need ≥ 0.95, ratio < 1); agnostic: power-law exponent {:.3}, r² {:.4} (need −1 ± 0.2)",
            ls.exponent_or_ratio, ls.r_squared, ag.exponent_or_ratio, ag.r_squared
        ),
    );
    if ls_pass && !ag_pass {
        out.known = Some("the agnostic step also accelerates at a boundary optimum of a locally strongly convex set");
    }
    out
}

fn pafw_exponent(body: &ConvexBody, b: &[f64], seed: u64) -> (f64, f64, SolverTrace, Objective) {
    let obj = make_objective(&ObjectiveSpec::Quadratic { b: b.to_vec(), scale: 1.0 }, body).unwrap();
    let t0 = Instant::now();
    let t = pafw(&obj, body, SolverOptions::new(100_000, seed)).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let last = *t.k.last().unwrap();
    let fit = fit_series(&t.k, t.primal_gap.as_ref().unwrap(), (last / 10, last), RateModel::PowerLaw);
    (fit.exponent_or_ratio, secs, t, obj)
}

fn criterion6(shared: &Shared) -> Outcome {
    let mut slowest: f64 = 0.0;
    let (e2, s2, t2, o2) = pafw_exponent(&l(2.0, 2), &[2.0, 0.0], 600);
    slowest = slowest.max(s2);
    let alpha = shared.l2_fit.as_ref().and_then(|f| f.params()).map_or(0.125, |p| p.alpha);
    let c = o2.grad_lower_bound_c.unwrap();
    let above =
        t2.k.iter()
            .zip(t2.primal_gap.as_ref().unwrap())
            .skip(1)
            .filter(|(k, g)| **g > pafw_envelope(**k, 2.0, o2.smoothness_l, 2.0, alpha, c).unwrap())
            .count();

    let mut e4s = Vec::new();
    for s in 0..5 {
        let (e, secs, ..) = pafw_exponent(&l(4.0, 2), &[2.0, 0.0], 610 + s);
        slowest = slowest.max(secs);
        e4s.push(e);
    }
    let e4 = e4s.iter().sum::<f64>() / 5.0;
    let (e5, s5, ..) = pafw_exponent(&l(5.0, 2), &[2.0, 0.0], 620);
    slowest = slowest.max(s5);
    let (e4_smooth, ..) = pafw_exponent(&l(4.0, 2), &[2.0, 2.0], 630);
    info(format!("ℓ4 with an all-nonzero optimum (b = (2, 2)): exponent {e4_smooth:.3}"));
    info(format!("ℓ4 per-seed exponents: {:?}", e4s.iter().map(|e| format!("{e:.3}")).collect::<Vec<_>>()));

    let pass = (e2 + 2.0).abs() <= 0.3
        && (-2.0..=-1.35).contains(&e4)
        && (-1.8..=-1.2).contains(&e5)
        && above == 0
        && slowest <= 300.0;
    Outcome::new(
        pass,
        format!(
            "ℓ2 {e2:.3} (need −2 ± 0.3), ℓ4 mean of 5 seeds {e4:.3} (need [−2.0, −1.35]), ℓ5 {e5:.3} (need [−1.8, −1.2]); \
             ℓ2 envelope exceeded at {above} of 1e5 iterates (α = {alpha:.4}); slowest run {slowest:.1} s"
        ),
    )
}

fn criterion7(shared: &Shared) -> Outcome {
    let grid: Vec<usize> = (4..=12).map(|i| 1usize << i).collect();
    let l2 = l(2.0, 10);
    let data2 = DataModel::new(10, Distribution::GaussianClipped { sigma: 0.5 }, 1.0).unwrap();
    let fit2 = shared.l2_fit.clone().unwrap();
    let r2 = check_rademacher_bound(&l2, &fit2, &data2, &grid, 2000, 700).unwrap();
    let s2 = r2.slope.unwrap();

    let m4 = 1 << 16;
    let l4 = l(4.0, m4);
    let data4 = DataModel::new(m4, Distribution::SignedCoordinates, 1.0).unwrap();
    let fit4 = shared.l4_fit.clone().unwrap();
    let r4 = check_rademacher_bound(&l4, &fit4, &data4, &grid, 2000, 701).unwrap();
    let s4 = r4.slope.unwrap();
    info(format!(
        "ℓ4 empirical constant {:.3}, chained (c′/q)^(1/q) {:.3e}",
        r4.empirical_constant,
        r4.chained_constant.unwrap_or(f64::NAN)
    ));
    let gauss4 = DataModel::new(10, Distribution::GaussianClipped { sigma: 0.5 }, 1.0).unwrap();
    let rg = check_rademacher_bound(&l(4.0, 10), &fit4, &gauss4, &grid, 2000, 702).unwrap();
    info(format!("ℓ4 with Gaussian data in dim 10: slope {:.3}", rg.slope.unwrap()));

    let mut rng = stream(703, 0);
    let mut sup_gap: f64 = 0.0;
    let mut below = true;
    for p in [2.0, 4.0] {
        let body = l(p, 3);
        let data = DataModel::new(3, Distribution::SphereUniformInPolarGauge, 1.0).unwrap();
        for k in 0..10 {
            let xs = data.sample(&body, 16, &mut rng);
            let mut v = vec![0.0; 3];
            for x in &xs {
                let e = if rng.random::<bool>() { 1.0 } else { -1.0 };
                for (a, xi) in v.iter_mut().zip(x) {
                    *a += e * xi / 16.0;
                }
            }
            let closed = body.support(&v).unwrap();
            let brute = sampled_sup(&body, &v, 10_000, 704 + k);
            below &= brute <= closed + 1e-12;
            sup_gap = sup_gap.max(closed - brute);
        }
    }
    let pass = (s2 + 0.5).abs() <= 0.1 && (s4 + 0.25).abs() <= 0.15 && below && sup_gap <= 1e-2;
    Outcome::new(
        pass,
        format!(
            "ℓ2 slope {s2:.3} (need −1/2 ± 0.1), ℓ4 slope {s4:.3} (need −1/4 ± 0.15); sampled sup below closed form by at most {sup_gap:.2e} (tol 1e-2)"
        ),
    )
}

fn criterion8(shared: &Shared) -> Outcome {
    let spec = SequenceSpec { count: 120, max_len: 12, mc_trials: 0 };
    let e2 = check_type_induction(&l(2.0, 3), 2.0, 2.0, spec, 800).unwrap();
    let c4 = shared.l4_fit.as_ref().unwrap().params().unwrap();
    let e = chain_to(c4, Item::T1e);
    let e4 = check_type_induction(&l(4.0, 3).polar(), e.exponent, e.alpha, spec, 801).unwrap();
    let pass = e2.exact && e4.exact && e2.violations == 0 && e4.violations == 0 && e2.max_relative_gap <= 1e-12;
    Outcome::new(
        pass,
        format!(
            "ℓ2 (c′ = q): {} violations, max relative gap {:.1e} (tol 1e-12); ℓ4 pipeline (c′ = {:.3e}, q = {:.3}): {} violations, max ratio {:.3e}",
            e2.violations, e2.max_relative_gap, e.alpha, e.exponent, e4.violations, e4.max_ratio
        ),
    )
}

fn geometry_invariants() -> usize {
    let mut rng = stream(900, 0);
    let bodies = [
        l(2.0, 3),
        l(3.0, 4),
        l(1.0, 3),
        ConvexBody::linf(2.0, 3).unwrap(),
        ConvexBody::ellipsoid(&[vec![2.0, 0.3, 0.0], vec![0.3, 1.0, 0.1], vec![0.0, 0.1, 0.5]]).unwrap(),
    ];
    let mut bad = 0;
    for body in &bodies {
        for _ in 0..20_000 {
            let x = uc_kit::rng::gaussian_vec(&mut rng, body.dim());
            let d = uc_kit::rng::gaussian_vec(&mut rng, body.dim());
            let s = rng.random_range(0.0..5.0);
            let g = body.gauge(&x).unwrap();
            if (body.gauge(&linalg::scale(&x, s)).unwrap() - s * g).abs() > 1e-12 * (1.0 + s * g) {
                bad += 1;
            }
            if (body.gauge(&linalg::scale(&x, -1.0)).unwrap() - g).abs() > 1e-12 * (1.0 + g) {
                bad += 1;
            }
            let sd = body.support(&d).unwrap();
            if linalg::dot(&x, &d) > g * sd * (1.0 + 1e-12) + 1e-12 {
                bad += 1;
            }
            let v = body.lmo(&d).unwrap();
            if (linalg::dot(&v, &d) - sd).abs() > 1e-8 * (1.0 + sd) || body.gauge(&v).unwrap() > 1.0 + 1e-9 {
                bad += 1;
            }
        }
    }
    bad
}

fn solver_invariants() -> usize {
    let mut rng = stream(901, 0);
    let mut bad = 0;
    for case in 0..60 {
        let p = [2.0, 3.0, 4.0, 6.0][case % 4];
        let m = 2 + case % 3;
        let body = l(p, m);
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let obj = make_objective(&ObjectiveSpec::Quadratic { b, scale: 1.0 }, &body).unwrap();
        let fstar = obj.optimum.as_ref().unwrap().1;
        let rule = [StepRule::Agnostic, StepRule::ShortStep, StepRule::LineSearch][case % 3];
        let mut opts = SolverOptions::new(500, case as u64);
        opts.snapshot_every = 1;
        for t in [vanilla_fw(&obj, &body, rule, opts).unwrap(), pafw(&obj, &body, opts).unwrap()] {
            let monotone = t.rule != "agnostic" && t.rule != "pafw";
            for i in 0..t.len() {
                if t.fw_gap[i] < t.f_value[i] - fstar - 1e-12 * (1.0 + fstar.abs()) {
                    bad += 1;
                }
                if monotone && i > 0 && t.f_value[i] > t.f_value[i - 1] + 1e-12 * (1.0 + t.f_value[i - 1].abs()) {
                    bad += 1;
                }
            }
            bad += t.snapshots.iter().filter(|(_, x)| body.gauge(x).unwrap() > 1.0 + 1e-9).count();
        }
    }
    bad
}

fn involution_errors() -> usize {
    let mut bad = 0;
    for p in [2.0, 3.0, 4.0] {
        let f = SampledFunction::tabulate(|x| x[0].abs().powf(p) / p, 2.0, 4001, 1).unwrap();
        let (conj, _) = conjugate_table(&f, 2.0, 4001).unwrap();
        let h = f.step().max(conj.step());
        for x in linalg::linspace(-1.0, 1.0, 101) {
            let back = discrete_conjugate(&conj, &[x]).unwrap();
            if back.boundary_active || (back.value - x.abs().powf(p) / p).abs() > 10.0 * h {
                bad += 1;
            }
        }
    }
    bad
}

fn determinism_failures() -> usize {
    let body = l(3.0, 2);
    let quick = Budget { restarts: 200, rounds: 20 };
    let mut bad = 0;
    let grid = [0.3, 0.9, 1.5];
    bad += usize::from(delta_curve(&body, &grid, quick, 5).unwrap() != delta_curve(&body, &grid, quick, 5).unwrap());
    bad += usize::from(
        check_global_scaling(&body, 0.01, 3.0, 5000, 6).unwrap()
            != check_global_scaling(&body, 0.01, 3.0, 5000, 6).unwrap(),
    );
    let obj = make_objective(&ObjectiveSpec::Quadratic { b: vec![1.5, 0.5], scale: 1.0 }, &body).unwrap();
    let (a, b) = (
        pafw(&obj, &body, SolverOptions::new(300, 7)).unwrap(),
        pafw(&obj, &body, SolverOptions::new(300, 7)).unwrap(),
    );
    bad += usize::from(a.f_value != b.f_value || a.final_iterate != b.final_iterate);
    let data = DataModel::new(2, Distribution::SphereUniformInPolarGauge, 1.0).unwrap();
    bad += usize::from(
        estimate_rademacher(&body, &data, 64, 500, 8).unwrap()
            != estimate_rademacher(&body, &data, 64, 500, 8).unwrap(),
    );
    bad
}

fn criterion9() -> Outcome {
    let g = geometry_invariants();
    let s = solver_invariants();
    let c = involution_errors();
    let d = determinism_failures();
    Outcome::new(
        g + s + c + d == 0,
        format!("violations: geometry {g}, solvers {s}, conjugate involution {c}, determinism {d}"),
    )
}

fn main() {
    let mut shared = Shared::default();
    let mut unexpected = 0;
    let criteria: Vec<(u8, Box<dyn FnOnce(&mut Shared) -> Outcome>)> = vec![
        (1, Box::new(criterion1)),
        (2, Box::new(|_| criterion2())),
        (3, Box::new(criterion3)),
        (4, Box::new(|_| criterion4())),
        (5, Box::new(|_| criterion5())),
        (6, Box::new(|s| criterion6(s))),
        (7, Box::new(|s| criterion7(s))),
        (8, Box::new(|s| criterion8(s))),
        (9, Box::new(|_| criterion9())),
    ];
    for (id, run) in criteria {
        let t0 = Instant::now();
        let out = run(&mut shared);
        let secs = t0.elapsed().as_secs_f64();
        let status = match (out.pass, out.known) {
            (true, _) => "PASS".to_string(),
            (false, Some(why)) => format!("FAIL (known: {why})"),
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
        };
        println!("criterion {id}: {status}: {} [{secs:.1} s]", out.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
