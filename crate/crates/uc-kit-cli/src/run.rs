//! One function per subcommand. Each reads a filled parameter section and
//! writes its artifacts into the output directory.

use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;
use uc_kit::certify::{
    check_global_scaling, check_lmo_holder, check_local_scaling, check_midpoint_inclusion, check_support_holder_sphere,
    CertifyReport,
};
use uc_kit::duality::{
    check_function_uc, check_function_us, local_sc_certificate, theorem1_chain, theorem1_path, transfer_table,
    CheckSampling, FunctionCheckReport,
};
use uc_kit::geometry::{ConvexBody, Exponent};
use uc_kit::io::{Cell, Table};
use uc_kit::moduli::{
    delta_curve, fit_uc_params, local_rho_curve, nu_curve, rho_curve, Anchor, FitOptions, Item, ModulusCurve, UCParams,
    UcFit,
};
use uc_kit::rademacher::{check_rademacher_bound, DataModel};
use uc_kit::rng::{child_seed, gaussian_vec, stream};
use uc_kit::solvers::{
    fit_best, make_objective, pafw, pafw_predicted_exponent, reference_fstar, vanilla_fw, ObjectiveSpec, RateEstimate,
    SolverOptions, StepRule,
};
use uc_kit::{linalg, Vector};

use crate::config::{
    Algorithm, AlphaArg, BenchParams, CertifyParams, CurveKind, ModuliParams, RademacherParams, SolveParams, UcArg,
};
use crate::error::CliError;
use crate::output::OutDir;
use crate::plot::{Axis, PlotSpec};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn curve_plot(out: &mut OutDir, name: &str, curve: &ModulusCurve) -> Result<(), CliError> {
    let table = curve.to_table();
    out.csv(&format!("{name}.csv"), &table)?;
    let title = format!("{} modulus", curve.kind.as_str());
    out.plot(
        &format!("{name}.svg"),
        &table,
        &PlotSpec { title: &title, x: "grid", ys: &["value"], x_axis: Axis::Linear, y_axis: Axis::Linear },
    )
}

fn print_fit(fit: &UcFit) {
    match fit {
        UcFit::Certified { params, fitted_exponent, r_squared } => println!(
            "fit ({}): alpha = {:.6e}, exponent = {:.4} (raw slope {:.4}, r² {:.4})",
            params.item, params.alpha, params.exponent, fitted_exponent, r_squared
        ),
        UcFit::NotUc { reason } => println!("fit: not uniformly convex ({reason})"),
    }
}

/// Fitted `(c)` parameters of the body's δ curve, with the curve saved.
fn fitted_modulus(
    body: &ConvexBody,
    grid: &[f64],
    budget: uc_kit::moduli::Budget,
    seed: u64,
    out: &mut OutDir,
) -> Result<UcFit, CliError> {
    let curve = delta_curve(body, grid, budget, seed)?;
    curve_plot(out, "delta_curve", &curve)?;
    let fit = fit_uc_params(&curve, FitOptions::default())?;
    print_fit(&fit);
    Ok(fit)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Target {
    Item(Item),
    Lmo,
    Local,
}

fn parse_target(item: &str) -> Result<Target, CliError> {
    match item.trim().to_ascii_lowercase().as_str() {
        "lmo" => Ok(Target::Lmo),
        "2b" | "t2b" | "local" => Ok(Target::Local),
        other => match other.parse::<Item>()? {
            i @ (Item::T1a | Item::T1b | Item::T1d | Item::T1e | Item::T1f) => Ok(Target::Item(i)),
            Item::T1c => Err(invalid("item c is the modulus bound itself; run `uc-kit moduli` to estimate and fit it")),
            i => Err(invalid(format!("item {i} has no sampled check; use a, b, d, e, f, lmo or 2b"))),
        },
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum AnyReport {
    Set(CertifyReport),
    Function(FunctionCheckReport),
}

impl AnyReport {
    fn violations(&self) -> usize {
        match self {
            AnyReport::Set(r) => r.violations,
            AnyReport::Function(r) => r.violations(),
        }
    }
}

#[derive(Serialize)]
struct CertifyOutcome<'a> {
    item: &'a str,
    alpha: f64,
    exponent: f64,
    automatic: bool,
    margin: Option<f64>,
    passed: bool,
    report: AnyReport,
}

fn unit_lp_exponent(body: &ConvexBody) -> Result<f64, CliError> {
    match body.lp_params() {
        Some((Exponent::Finite(p), r)) if p >= 2.0 && r == 1.0 => Ok(p),
        _ => Err(invalid("automatic local constants need a unit ℓp ball with 2 ≤ p < ∞")),
    }
}

/// `(α, exponent)` for `target`, printing how they were obtained.
fn resolve_constants(
    body: &ConvexBody,
    target: Target,
    p: &CertifyParams,
    seed: u64,
    out: &mut OutDir,
) -> Result<(f64, f64), CliError> {
    if let AlphaArg::Value(alpha) = p.alpha {
        let exponent =
            p.exponent.ok_or_else(|| invalid("certify.exponent is required when certify.alpha is a number"))?;
        println!("given: alpha = {alpha:.6e}, exponent = {exponent}");
        return Ok((alpha, exponent));
    }
    if target == Target::Local {
        let pe = unit_lp_exponent(body)?;
        let x = p.anchor.as_ref().ok_or_else(|| invalid("certify.anchor is required for item 2b"))?;
        let cert = local_sc_certificate(x, pe)?;
        if !cert.certified {
            return Err(invalid(format!("no local certificate at {x:?}: min eigenvalue {:.3e}", cert.min_eigenvalue)));
        }
        let alpha = cert.min_eigenvalue / 8.0;
        println!(
            "local certificate: min eigenvalue = {:.6e}, alpha = min eigenvalue / 8 = {alpha:.6e}, exponent = 2",
            cert.min_eigenvalue
        );
        return Ok((alpha, 2.0));
    }
    let fit = fitted_modulus(body, &p.grid, p.budget, child_seed(seed, 1), out)?;
    let c = fit.params().ok_or_else(|| invalid(format!("{body} is not uniformly convex; no automatic constant")))?;
    let last = match target {
        Target::Item(to) => {
            let path =
                theorem1_path(Item::T1c, to).ok_or_else(|| invalid(format!("no transfer path from 1c to {to}")))?;
            let rows = theorem1_chain(c, &path)?;
            for r in &rows {
                println!(
                    "{} -> {}: alpha = {:.6e}, exponent = {:.4} [{}]{}",
                    r.from,
                    r.to,
                    r.out_params.alpha,
                    r.out_params.exponent,
                    r.formula_id,
                    r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
                );
            }
            out.csv("chain.csv", &transfer_table(&rows))?;
            rows.last().map_or(c, |r| r.out_params)
        }
        _ => {
            println!("lmo: uses the (1c) pair directly");
            c
        }
    };
    let alpha = last.alpha * (1.0 - p.margin);
    println!("margin {:.0}%: alpha = {alpha:.6e}, exponent = {:.4}", 100.0 * p.margin, last.exponent);
    Ok((alpha, last.exponent))
}

/// `∇‖x‖_C`, zero at the origin.
fn gauge_gradient(body: &ConvexBody, x: &[f64]) -> Vector {
    if linalg::max_abs(x) == 0.0 {
        return vec![0.0; x.len()];
    }
    body.polar().lmo(x).unwrap_or_else(|_| vec![f64::NAN; x.len()])
}

pub fn certify(body: &ConvexBody, p: &CertifyParams, seed: u64, out: &mut OutDir) -> Result<(), CliError> {
    if !(0.0..1.0).contains(&p.margin) {
        return Err(invalid(format!("certify.margin must lie in [0, 1), got {}", p.margin)));
    }
    let target = parse_target(&p.item)?;
    let (alpha, exponent) = resolve_constants(body, target, p, seed, out)?;
    let check_seed = child_seed(seed, 2);
    let n = p.samples;
    let report = match target {
        Target::Item(Item::T1a) => AnyReport::Set(check_midpoint_inclusion(body, alpha, exponent, n, check_seed)?),
        Target::Item(Item::T1b) => AnyReport::Set(check_global_scaling(body, alpha, exponent, n, check_seed)?),
        // Item d carries the Hölder exponent q − 1.
        Target::Item(Item::T1d) => {
            AnyReport::Set(check_support_holder_sphere(body, alpha, 1.0 + exponent, n, check_seed)?)
        }
        Target::Item(Item::T1e) => {
            let q = exponent;
            let sampling = CheckSampling { samples: n, radius: 2.0, seed: check_seed };
            let f = |d: &[f64]| body.support(d).map_or(f64::NAN, |s| s.powf(q));
            let g = |d: &[f64]| match body.support(d) {
                Ok(s) if s > 0.0 => linalg::scale(&body.support_gradient(d).unwrap_or_default(), q * s.powf(q - 1.0)),
                _ => vec![0.0; d.len()],
            };
            AnyReport::Function(check_function_us(f, g, alpha, q, None, &body.polar(), sampling))
        }
        Target::Item(_) => {
            let pe = exponent;
            let sampling = CheckSampling { samples: n, radius: 2.0, seed: check_seed };
            let f = |x: &[f64]| body.gauge(x).map_or(f64::NAN, |g| g.powf(pe));
            let g = |x: &[f64]| {
                let gx = body.gauge(x).unwrap_or(f64::NAN);
                linalg::scale(&gauge_gradient(body, x), pe * gx.powf(pe - 1.0))
            };
            AnyReport::Function(check_function_uc(f, g, alpha, pe, body, sampling))
        }
        Target::Lmo => AnyReport::Set(check_lmo_holder(body, alpha, exponent, n, check_seed)?),
        Target::Local => {
            let x = p.anchor.as_ref().ok_or_else(|| invalid("certify.anchor is required for item 2b"))?;
            let anchor = Anchor::at(body, x)?;
            AnyReport::Set(check_local_scaling(body, &anchor.xstar, &anchor.d, alpha, exponent, n, check_seed)?)
        }
    };
    let passed = report.violations() == 0;
    match &report {
        AnyReport::Set(r) => {
            println!(
                "check {}: {} violations in {} samples, max ratio {:.6e}",
                r.check, r.violations, r.samples, r.max_ratio
            );
            if let Some(note) = &r.note {
                println!("note: {note}");
            }
        }
        AnyReport::Function(r) => println!(
            "check {}: {} zero-order and {} first-order violations in {} samples",
            r.check, r.zero_order.violations, r.first_order.violations, r.zero_order.checked
        ),
    }
    println!("result: {}", if passed { "PASS" } else { "FAIL" });
    let automatic = p.alpha == AlphaArg::Auto;
    out.json(
        "report.json",
        &CertifyOutcome {
            item: &p.item,
            alpha,
            exponent,
            automatic,
            margin: (automatic && target != Target::Local).then_some(p.margin),
            passed,
            report,
        },
    )
}

pub fn moduli(body: &ConvexBody, p: &ModuliParams, seed: u64, out: &mut OutDir) -> Result<(), CliError> {
    let grid = p.grid_or_default();
    let anchor = || -> Result<Anchor, CliError> {
        let x = p.anchor.as_ref().ok_or_else(|| invalid("moduli.anchor is required for local moduli"))?;
        Ok(Anchor::at(body, x)?)
    };
    let curve = match p.kind {
        CurveKind::Delta => delta_curve(body, &grid, p.budget, seed)?,
        CurveKind::Rho => rho_curve(body, &grid, p.budget, seed)?,
        CurveKind::LocalRho => local_rho_curve(body, &grid, &anchor()?, p.budget, seed)?,
        CurveKind::Nu => nu_curve(body, &grid, &anchor()?, p.budget, seed)?,
    };
    println!(
        "{} on {} points, budget {}, {} monotonicity repairs",
        curve.kind.as_str(),
        curve.grid.len(),
        curve.budget,
        curve.monotonicity_repairs
    );
    curve_plot(out, "curve", &curve)?;
    if matches!(p.kind, CurveKind::Delta | CurveKind::Nu) {
        let fit = fit_uc_params(&curve, FitOptions::default())?;
        print_fit(&fit);
        out.json("fit.json", &fit)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RateReport {
    algorithm: Algorithm,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<StepRule>,
    iterations: usize,
    fstar: f64,
    fstar_source: &'static str,
    final_fw_gap: f64,
    fit: RateEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_exponent: Option<f64>,
}

pub fn solve(body: &ConvexBody, p: &SolveParams, seed: u64, out: &mut OutDir) -> Result<(), CliError> {
    let spec: &ObjectiveSpec = p.objective.as_ref().ok_or_else(|| invalid("missing field `solve.objective`"))?;
    if !(0.0..1.0).contains(&p.burn_in) {
        return Err(invalid(format!("solve.burn_in must lie in [0, 1), got {}", p.burn_in)));
    }
    let obj = make_objective(spec, body)?;
    let opts = SolverOptions { max_iter: p.max_iter, tol_gap: p.tol_gap, seed, snapshot_every: 0 };
    let trace = match p.algorithm {
        Algorithm::Pafw => pafw(&obj, body, opts)?,
        Algorithm::Fw => vanilla_fw(&obj, body, p.rule, opts)?,
    };
    let (gap, fstar, source) = match (&trace.primal_gap, &obj.optimum) {
        (Some(gap), Some((_, fstar))) => (gap.clone(), *fstar, "closed_form"),
        _ => {
            let fstar = reference_fstar(&obj, body, p.max_iter.max(1), 4, child_seed(seed, 1))?;
            (trace.f_value.iter().map(|f| f - fstar).collect(), fstar, "long_line_search_run")
        }
    };
    let fit = match p.fit_window {
        Some(w) => fit_best(&trace.k, &gap, w),
        None => {
            let last = trace.k.last().copied().unwrap_or(0);
            fit_best(&trace.k, &gap, ((p.burn_in * last as f64).ceil() as usize, last))
        }
    };
    let predicted = match (p.algorithm, body.lp_params()) {
        (Algorithm::Pafw, Some((Exponent::Finite(q), _))) if q >= 2.0 => Some(pafw_predicted_exponent(q)),
        _ => None,
    };
    println!(
        "{} iterations; fit {:?}: {:.4} (r² {:.4}, window {:?}){}",
        trace.len().saturating_sub(1),
        fit.model,
        fit.exponent_or_ratio,
        fit.r_squared,
        fit.fit_window,
        predicted.map(|e| format!("; predicted exponent {e:.4}")).unwrap_or_default()
    );
    let table = trace.to_table();
    out.csv("trace.csv", &table)?;
    out.plot(
        "gap.svg",
        &table,
        &PlotSpec {
            title: "gap against iteration",
            x: "k",
            ys: &["primal_gap", "fw_gap"],
            x_axis: Axis::Log,
            y_axis: Axis::Log,
        },
    )?;
    out.json(
        "rate.json",
        &RateReport {
            algorithm: p.algorithm,
            rule: (p.algorithm == Algorithm::Fw).then_some(p.rule),
            iterations: trace.len().saturating_sub(1),
            fstar,
            fstar_source: source,
            final_fw_gap: trace.fw_gap.last().copied().unwrap_or(f64::NAN),
            fit,
            predicted_exponent: predicted,
        },
    )
}

pub fn rademacher(body: &ConvexBody, p: &RademacherParams, seed: u64, out: &mut OutDir) -> Result<(), CliError> {
    let (dist, d_bound) = p.data.split();
    let data = DataModel::new(body.dim(), dist, d_bound)?;
    let fit = match p.uc {
        UcArg::Auto => fitted_modulus(body, &uc_kit::moduli::default_eps_grid(), p.budget, child_seed(seed, 1), out)?,
        UcArg::Given { alpha, exponent } => UcFit::Certified {
            params: UCParams::new(alpha, exponent, Item::T1c)?,
            fitted_exponent: exponent,
            r_squared: f64::NAN,
        },
    };
    let report = check_rademacher_bound(body, &fit, &data, &p.n_grid, p.trials, seed)?;
    for r in &report.rows {
        println!("n = {:>6}: R_n = {:.6e} ± {:.2e}", r.n, r.mean, r.stderr);
    }
    println!(
        "slope {} (predicted {:.4}), empirical constant {:.4}{}",
        report.slope.map_or("n/a".into(), |s| format!("{s:.4}")),
        report.predicted_slope,
        report.empirical_constant,
        report.chained_constant.map(|c| format!(", chained constant {c:.4e}")).unwrap_or_default()
    );
    let table = report.to_table();
    out.csv("rademacher.csv", &table)?;
    out.plot(
        "rademacher.svg",
        &table,
        &PlotSpec {
            title: "Rademacher complexity against n",
            x: "n",
            ys: &["mean"],
            x_axis: Axis::Log,
            y_axis: Axis::Log,
        },
    )?;
    out.json("report.json", &report)
}

/// Oracle throughput. Timings vary between runs, unlike every other output.
pub fn bench(body: &ConvexBody, p: &BenchParams, seed: u64, out: &mut OutDir) -> Result<(), CliError> {
    if p.reps == 0 {
        return Err(invalid("bench.reps must be positive"));
    }
    let mut rng = stream(seed, 0);
    let dirs: Vec<Vector> = (0..1024).map(|_| gaussian_vec(&mut rng, body.dim())).collect();
    let polar = body.polar();
    let mut table = Table::new(&["op", "calls", "total_s", "ns_per_call"]);
    let mut time = |name: &str, reps: usize, f: &mut dyn FnMut(&[f64])| {
        let t0 = Instant::now();
        for i in 0..reps {
            f(&dirs[i % dirs.len()]);
        }
        let s = t0.elapsed().as_secs_f64();
        println!("{name:>12}: {:>10.1} ns/call", 1e9 * s / reps as f64);
        table.push(vec![Cell::Text(name), reps.into(), s.into(), (1e9 * s / reps as f64).into()]);
    };
    time("gauge", p.reps, &mut |d| {
        black_box(body.gauge(d).ok());
    });
    time("support", p.reps, &mut |d| {
        black_box(body.support(d).ok());
    });
    time("lmo", p.reps, &mut |d| {
        black_box(body.lmo(d).ok());
    });
    time("polar_lmo", p.reps, &mut |d| {
        black_box(polar.lmo(d).ok());
    });
    let mut b = vec![0.0; body.dim()];
    b[0] = 2.0 * body.euclidean_radius();
    let obj = make_objective(&ObjectiveSpec::Quadratic { b, scale: 1.0 }, body)?;
    let iters = (p.reps / 10).max(1);
    let t0 = Instant::now();
    black_box(pafw(&obj, body, SolverOptions::new(iters, seed))?);
    let s = t0.elapsed().as_secs_f64();
    println!("{:>12}: {:>10.1} ns/iteration", "pafw", 1e9 * s / iters as f64);
    table.push(vec![Cell::Text("pafw_iteration"), iters.into(), s.into(), (1e9 * s / iters as f64).into()]);
    out.csv("bench.csv", &table)
}
