//! Moduli of convexity, smoothness and rotundity, and the Lindenstrauss
//! duality formulas that link a body to its polar.
//!
//! Infima are estimated from above and suprema from below; every
//! [`Estimate`] carries its [`Bias`] so that duality checks can reason
//! one-sidedly.
//!
//! | modulus | definition |
//! |---|---|
//! | `δ_C(ε)` | `inf {1 − ‖(x+y)/2‖_C : ‖x‖_C = ‖y‖_C = 1, ‖x−y‖_C ≥ ε}` |
//! | `ρ_C(τ)` | `sup {(‖x+τy‖_C + ‖x−τy‖_C)/2 − 1 : ‖x‖_C = ‖y‖_C = 1}` |
//! | `ρ_C(t, x*, d)` | `sup {‖x*+tx‖_C − ‖x*‖_C − t⟨d, x⟩ : ‖x‖_C ≤ 1}` |
//! | `ν_C(ε, x*, d)` | `inf {⟨d, x*−x⟩ : x ∈ C, ‖x*−x‖_C ≥ ε}` |

use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexBody, Vector, BOUNDARY_TOL};
use crate::io::{Cell, Table};
use crate::linalg::{self, dot};
use crate::regress::linear_fit;
use crate::rng::{child_seed, gaussian_vec, Stream};
use crate::search;
use crate::{Error, Result};

/// Random restarts `N` and refinement rounds `K` of the estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub restarts: usize,
    pub rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { restarts: 2000, rounds: 40 }
    }
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={};K={}", self.restarts, self.rounds)
    }
}

/// Direction in which an estimate may differ from the true value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bias {
    /// Estimate ≥ truth (infimum over a sampled feasible set).
    Upper,
    /// Estimate ≤ truth (supremum over a sampled feasible set).
    Lower,
    Exact,
}

impl Bias {
    pub fn as_str(self) -> &'static str {
        match self {
            Bias::Upper => "upper",
            Bias::Lower => "lower",
            Bias::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub bias: Bias,
    /// The point(s) attaining `value`, concatenated.
    pub witness: Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    Delta,
    Rho,
    RhoLocal,
    NuLocal,
}

impl ModulusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModulusKind::Delta => "delta",
            ModulusKind::Rho => "rho",
            ModulusKind::RhoLocal => "rho_local",
            ModulusKind::NuLocal => "nu_local",
        }
    }

    fn bias(self) -> Bias {
        match self {
            ModulusKind::Delta | ModulusKind::NuLocal => Bias::Upper,
            ModulusKind::Rho | ModulusKind::RhoLocal => Bias::Lower,
        }
    }
}

/// A boundary point `x*` with a normal `d ∈ N_C(x*)`, `σ_C(d) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub xstar: Vector,
    pub d: Vector,
}

impl Anchor {
    /// Anchor at `x*` with the normalized LMO-consistent normal `∇‖·‖_C(x*)`,
    /// computed here for `ℓ_p` balls and ellipsoids by polar duality.
    pub fn at(body: &ConvexBody, xstar: &[f64]) -> Result<Anchor> {
        body.check_boundary(xstar, BOUNDARY_TOL)?;
        let d = body.polar().lmo(xstar)?;
        let s = body.support(&d)?;
        let d = linalg::scale(&d, 1.0 / s);
        let a = Anchor { xstar: xstar.to_vec(), d };
        a.validate(body)?;
        Ok(a)
    }

    pub fn validate(&self, body: &ConvexBody) -> Result<()> {
        body.check_boundary(&self.xstar, BOUNDARY_TOL)
            .map_err(|e| Error::InvalidAnchor(format!("x* must be a boundary point ({e})")))?;
        let s = body.support(&self.d)?;
        if (s - 1.0).abs() > BOUNDARY_TOL {
            return Err(Error::InvalidAnchor(format!("d must satisfy σ_C(d) = 1, got {s}")));
        }
        if !body.in_normal_cone(&self.xstar, &self.d, BOUNDARY_TOL)? {
            return Err(Error::InvalidAnchor("d is not in the normal cone at x*".into()));
        }
        Ok(())
    }
}

/// Sampled modulus values over an increasing parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusCurve {
    pub kind: ModulusKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bias: Bias,
    pub budget: Budget,
    pub seed: u64,
    pub anchor: Option<Anchor>,
    /// Raw estimates that broke monotonicity before smoothing.
    pub monotonicity_repairs: usize,
}

impl ModulusCurve {
    /// `kind, grid, value, bias, seed, budget` rows.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["kind", "grid", "value", "bias", "seed", "budget"]);
        let budget = self.budget.to_string();
        for (g, v) in self.grid.iter().zip(&self.values) {
            t.push(vec![
                self.kind.as_str().into(),
                (*g).into(),
                (*v).into(),
                self.bias.as_str().into(),
                self.seed.into(),
                Cell::Text(&budget),
            ]);
        }
        t
    }
}

/// 50 points on `[0.05, 2]`.
pub fn default_eps_grid() -> Vec<f64> {
    linalg::linspace(0.05, 2.0, 50)
}

/// 20 log-spaced points on `[0.01, 1]`.
pub fn default_tau_grid() -> Vec<f64> {
    linalg::logspace(0.01, 1.0, 20)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps must lie in [0, 2], got {eps}")));
    }
    Ok(())
}

fn split(p: &[f64]) -> (&[f64], &[f64]) {
    p.split_at(p.len() / 2)
}

fn radial(body: &ConvexBody, a: &[f64]) -> Option<Vector> {
    let g = body.gauge_unchecked(a);
    (g > 0.0 && g.is_finite()).then(|| linalg::scale(a, 1.0 / g))
}

/// Half the restarts start from LMO outputs (vertices of polytopes), half
/// from radially projected Gaussians.
fn boundary_seed(body: &ConvexBody, rng: &mut Stream) -> Vector {
    if rand::Rng::random::<bool>(rng) {
        body.sample_boundary(rng)
    } else {
        body.sample_sphere(rng)
    }
}

const BISECTION_STEPS: usize = 56;

/// A boundary point `y` with `‖x − y‖_C ≥ eps`, found by bisection along the
/// radial projection of the broken line `x → w → −x`.
fn pair_at_distance(body: &ConvexBody, x: &[f64], w: &[f64], eps: f64) -> Option<Vector> {
    let neg: Vector = x.iter().map(|v| -v).collect();
    let point = |s: f64| -> Option<Vector> {
        let raw = if s <= 0.5 { linalg::lerp(x, w, 2.0 * s) } else { linalg::lerp(w, &neg, 2.0 * s - 1.0) };
        radial(body, &raw)
    };
    let dist = |y: &[f64]| body.gauge_unchecked(&linalg::sub(x, y));
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = neg.clone();
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        match point(mid) {
            Some(y) if dist(&y) >= eps => {
                hi = mid;
                best = y;
            }
            Some(_) => lo = mid,
            None => hi = mid,
        }
    }
    (dist(&best) >= eps).then_some(best)
}

/// Upper-biased estimate of the modulus of convexity `δ_C(eps)`.
///
/// ```
/// use uc_kit::{geometry::ConvexBody, moduli::{estimate_delta, Budget}};
/// let ball = ConvexBody::lp(2.0, 1.0, 2)?;
/// let d = estimate_delta(&ball, 1.0, Budget { restarts: 200, rounds: 10 }, 0)?;
/// assert!((d.value - (1.0 - 0.75f64.sqrt())).abs() < 1e-6);
/// # Ok::<(), uc_kit::Error>(())
/// ```
pub fn estimate_delta(body: &ConvexBody, eps: f64, budget: Budget, seed: u64) -> Result<Estimate> {
    check_eps(eps)?;
    let m = body.dim();
    if eps == 0.0 {
        let x = linalg::basis(m, 0);
        let x = body.radial(&x)?;
        return Ok(Estimate { value: 0.0, bias: Bias::Exact, witness: [x.clone(), x].concat() });
    }
    let pair = |p: &[f64]| -> Option<(Vector, Vector)> {
        let (a, b) = split(p);
        let x = radial(body, a)?;
        let w = radial(body, b)?;
        let y = pair_at_distance(body, &x, &w, eps)?;
        Some((x, y))
    };
    let objective = |p: &[f64]| match pair(p) {
        Some((x, y)) => 1.0 - body.gauge_unchecked(&linalg::lerp(&x, &y, 0.5)),
        None => f64::INFINITY,
    };
    let sampler = |rng: &mut Stream| [boundary_seed(body, rng), boundary_seed(body, rng)].concat();
    let best = search::minimize(&objective, &sampler, budget.restarts, budget.rounds, seed);
    let (x, y) = pair(&best.point).ok_or_else(|| Error::Numerical("no feasible pair".into()))?;
    Ok(Estimate { value: best.value.max(0.0), bias: Bias::Upper, witness: [x, y].concat() })
}

/// Lower-biased estimate of the modulus of smoothness `ρ_C(tau)`.
pub fn estimate_rho(body: &ConvexBody, tau: f64, budget: Budget, seed: u64) -> Result<Estimate> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let pair = |p: &[f64]| -> Option<(Vector, Vector)> {
        let (a, b) = split(p);
        Some((radial(body, a)?, radial(body, b)?))
    };
    let objective = |p: &[f64]| match pair(p) {
        Some((x, y)) => {
            let plus = body.gauge_unchecked(&linalg::axpy(&x, tau, &y));
            let minus = body.gauge_unchecked(&linalg::axpy(&x, -tau, &y));
            0.5 * (plus + minus) - 1.0
        }
        None => f64::NEG_INFINITY,
    };
    let sampler = |rng: &mut Stream| [boundary_seed(body, rng), boundary_seed(body, rng)].concat();
    let best = search::maximize(&objective, &sampler, budget.restarts, budget.rounds, seed);
    let (x, y) = pair(&best.point).ok_or_else(|| Error::Numerical("degenerate pair".into()))?;
    Ok(Estimate { value: best.value.max(0.0), bias: Bias::Lower, witness: [x, y].concat() })
}

/// Lower-biased estimate of the local modulus of smoothness `ρ_C(t, x*, d)`.
pub fn estimate_local_rho(
    body: &ConvexBody,
    t: f64,
    xstar: &[f64],
    d: &[f64],
    budget: Budget,
    seed: u64,
) -> Result<Estimate> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be nonnegative, got {t}")));
    }
    Anchor { xstar: xstar.to_vec(), d: d.to_vec() }.validate(body)?;
    if t == 0.0 {
        return Ok(Estimate { value: 0.0, bias: Bias::Exact, witness: vec![0.0; body.dim()] });
    }
    let base = body.gauge_unchecked(xstar);
    // Convex in x, so the supremum over the ball sits on the boundary.
    let objective = |a: &[f64]| match radial(body, a) {
        Some(x) => body.gauge_unchecked(&linalg::axpy(xstar, t, &x)) - base - t * dot(d, &x),
        None => f64::NEG_INFINITY,
    };
    let sampler = |rng: &mut Stream| boundary_seed(body, rng);
    let best = search::maximize(&objective, &sampler, budget.restarts, budget.rounds, seed);
    let x = radial(body, &best.point).ok_or_else(|| Error::Numerical("degenerate point".into()))?;
    Ok(Estimate { value: best.value.max(0.0), bias: Bias::Lower, witness: x })
}

/// Upper-biased estimate of the local modulus of rotundity `ν_C(eps, x*, d)`.
///
/// Any feasible `x` lies on a segment from `x*` to a boundary point `b`; since
/// `⟨d, x* − b⟩ ≥ 0`, the infimum is attained at distance exactly `eps`, so
/// only boundary points `b` with `‖x* − b‖_C ≥ eps` are searched and scored
/// by `(eps/‖x* − b‖_C)·⟨d, x* − b⟩`.
pub fn estimate_nu(
    body: &ConvexBody,
    eps: f64,
    xstar: &[f64],
    d: &[f64],
    budget: Budget,
    seed: u64,
) -> Result<Estimate> {
    check_eps(eps)?;
    Anchor { xstar: xstar.to_vec(), d: d.to_vec() }.validate(body)?;
    if eps == 0.0 {
        return Ok(Estimate { value: 0.0, bias: Bias::Exact, witness: xstar.to_vec() });
    }
    let point = |a: &[f64]| -> Option<(Vector, f64)> {
        let b = radial(body, a)?;
        let gap = linalg::sub(xstar, &b);
        let dist = body.gauge_unchecked(&gap);
        (dist >= eps).then(|| (linalg::axpy(xstar, -eps / dist, &gap), eps / dist * dot(d, &gap)))
    };
    let objective = |a: &[f64]| point(a).map_or(f64::INFINITY, |(_, v)| v);
    let antipode: Vector = xstar.iter().map(|v| -v).collect();
    let sampler = |rng: &mut Stream| {
        if rand::Rng::random_ratio(rng, 1, 4) {
            let g = gaussian_vec(rng, body.dim());
            linalg::axpy(&antipode, 0.5, &g)
        } else {
            boundary_seed(body, rng)
        }
    };
    let best = search::minimize(&objective, &sampler, budget.restarts, budget.rounds, seed);
    let (x, value) = match point(&best.point) {
        Some(found) => found,
        // The antipode is always feasible: ‖x* − (−x*)‖_C = 2.
        None => point(&antipode).ok_or_else(|| Error::Numerical("no feasible point".into()))?,
    };
    Ok(Estimate { value: value.max(0.0), bias: Bias::Upper, witness: x })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("grid must be nonempty".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Replace each value by the minimum over larger parameters.
///
/// For a nondecreasing modulus estimated from above this keeps every entry an
/// upper bound while removing noise-induced decreases.
fn monotone_from_above(values: &mut [f64]) -> usize {
    let mut repairs = 0;
    for i in (0..values.len().saturating_sub(1)).rev() {
        if values[i] > values[i + 1] {
            values[i] = values[i + 1];
            repairs += 1;
        }
    }
    repairs
}

fn build_curve<F>(
    kind: ModulusKind,
    grid: &[f64],
    budget: Budget,
    seed: u64,
    anchor: Option<Anchor>,
    f: F,
) -> Result<ModulusCurve>
where
    F: Fn(f64, u64) -> Result<Estimate>,
{
    validate_grid(grid)?;
    let mut values = grid
        .iter()
        .enumerate()
        .map(|(i, &g)| f(g, child_seed(seed, i as u64)).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    let monotonicity_repairs = match kind.bias() {
        Bias::Upper => monotone_from_above(&mut values),
        _ => 0,
    };
    Ok(ModulusCurve {
        kind,
        grid: grid.to_vec(),
        values,
        bias: kind.bias(),
        budget,
        seed,
        anchor,
        monotonicity_repairs,
    })
}

/// `δ̂_C` over `grid`, made nondecreasing.
pub fn delta_curve(body: &ConvexBody, grid: &[f64], budget: Budget, seed: u64) -> Result<ModulusCurve> {
    build_curve(ModulusKind::Delta, grid, budget, seed, None, |e, s| estimate_delta(body, e, budget, s))
}

pub fn rho_curve(body: &ConvexBody, grid: &[f64], budget: Budget, seed: u64) -> Result<ModulusCurve> {
    build_curve(ModulusKind::Rho, grid, budget, seed, None, |t, s| estimate_rho(body, t, budget, s))
}

pub fn local_rho_curve(
    body: &ConvexBody,
    grid: &[f64],
    anchor: &Anchor,
    budget: Budget,
    seed: u64,
) -> Result<ModulusCurve> {
    build_curve(ModulusKind::RhoLocal, grid, budget, seed, Some(anchor.clone()), |t, s| {
        estimate_local_rho(body, t, &anchor.xstar, &anchor.d, budget, s)
    })
}

/// `ν̂_C(·, x*, d)` over `grid`, made nondecreasing.
pub fn nu_curve(body: &ConvexBody, grid: &[f64], anchor: &Anchor, budget: Budget, seed: u64) -> Result<ModulusCurve> {
    build_curve(ModulusKind::NuLocal, grid, budget, seed, Some(anchor.clone()), |e, s| {
        estimate_nu(body, e, &anchor.xstar, &anchor.d, budget, s)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityRow {
    /// `τ` (global) or `t` (local).
    pub param: f64,
    /// Smoothness modulus of the polar body, estimated from below.
    pub lhs: f64,
    /// `max_ε` of the conjugate expression over the grid, also from below.
    pub rhs: f64,
    pub argmax_eps: f64,
    pub discrepancy: f64,
    pub pass: bool,
}

/// Both sides of a Lindenstrauss formula per parameter value.
///
/// Each side is a lower estimate of the same quantity, so a discrepancy
/// beyond `tolerance` in either direction means an estimator fell short.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub formula: String,
    pub rows: Vec<DualityRow>,
    pub tolerance: f64,
    pub max_discrepancy: f64,
    pub pass: bool,
}

fn duality_report<L>(
    formula: &str,
    params: &[f64],
    eps: &[f64],
    conj: &[f64],
    tol: f64,
    lhs: L,
) -> Result<DualityReport>
where
    L: Fn(usize, f64) -> Result<f64>,
{
    let rows = params
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut rhs = 0.0;
            let mut argmax_eps = 0.0;
            for (j, &e) in eps.iter().enumerate() {
                let v = conj_term(formula, t, e) - conj[j];
                if v > rhs {
                    rhs = v;
                    argmax_eps = e;
                }
            }
            let lhs = lhs(i, t)?;
            let discrepancy = (lhs - rhs).abs();
            Ok(DualityRow { param: t, lhs, rhs, argmax_eps, discrepancy, pass: discrepancy <= tol })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_discrepancy = rows.iter().fold(0.0f64, |m, r| m.max(r.discrepancy));
    Ok(DualityReport {
        formula: formula.into(),
        pass: rows.iter().all(|r| r.pass),
        rows,
        tolerance: tol,
        max_discrepancy,
    })
}

fn conj_term(formula: &str, t: f64, e: f64) -> f64 {
    if formula == "global" {
        t * e / 2.0
    } else {
        t * e
    }
}

/// `ρ_{C°}(τ)` against `sup_ε {τε/2 − δ_C(ε)}` (the sup includes `ε = 0`).
pub fn check_lindenstrauss_global(
    body: &ConvexBody,
    tau_grid: &[f64],
    eps_grid: &[f64],
    budget: Budget,
    seed: u64,
    tol: f64,
) -> Result<DualityReport> {
    validate_grid(tau_grid)?;
    let delta = delta_curve(body, eps_grid, budget, child_seed(seed, 1))?;
    let polar = body.polar();
    duality_report("global", tau_grid, eps_grid, &delta.values, tol, |i, tau| {
        estimate_rho(&polar, tau, budget, child_seed(child_seed(seed, 2), i as u64)).map(|e| e.value)
    })
}

/// `ρ_{C°}(t, d, x*)` against `sup_ε {εt − ν_C(ε, x*, d)}`.
pub fn check_lindenstrauss_local(
    body: &ConvexBody,
    t_grid: &[f64],
    eps_grid: &[f64],
    anchor: &Anchor,
    budget: Budget,
    seed: u64,
    tol: f64,
) -> Result<DualityReport> {
    if t_grid.iter().any(|&t| t < 0.0) {
        return Err(Error::InvalidParameter("t must be nonnegative".into()));
    }
    let nu = nu_curve(body, eps_grid, anchor, budget, child_seed(seed, 1))?;
    let polar = body.polar();
    // In the polar body the roles swap: d is the boundary point, x* its normal.
    duality_report("local", t_grid, eps_grid, &nu.values, tol, |i, t| {
        estimate_local_rho(&polar, t, &anchor.d, &anchor.xstar, budget, child_seed(child_seed(seed, 2), i as u64))
            .map(|e| e.value)
    })
}

/// Characterization a [`UCParams`] pair refers to: global items `T1a..T1f`,
/// local items `T2a..T2e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Item {
    /// Mid-convex inclusion.
    T1a,
    /// Global scaling inequality.
    T1b,
    /// Modulus of convexity lower bound.
    T1c,
    /// Hölder-smooth support on the polar sphere.
    T1d,
    /// Uniformly smooth powered support function.
    T1e,
    /// Uniformly convex powered gauge.
    T1f,
    /// Local modulus of rotundity lower bound.
    T2a,
    /// Local scaling inequality.
    T2b,
    /// Local Hölder-smooth support.
    T2c,
    /// Local uniform smoothness of the powered support.
    T2d,
    /// Local uniform convexity of the powered gauge.
    T2e,
}

/// What the exponent of a [`UCParams`] means for its item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentRole {
    /// Convexity exponent `p ≥ 2`.
    P,
    /// Smoothness exponent `q ∈ (1, 2]`.
    Q,
    /// Hölder exponent `q − 1 ∈ (0, 1]`.
    QMinusOne,
}

impl Item {
    pub const THEOREM1: [Item; 6] = [Item::T1a, Item::T1b, Item::T1c, Item::T1d, Item::T1e, Item::T1f];

    pub fn role(self) -> ExponentRole {
        match self {
            Item::T1d | Item::T2c => ExponentRole::QMinusOne,
            Item::T1e | Item::T2d => ExponentRole::Q,
            _ => ExponentRole::P,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Item::T1a => "1a",
            Item::T1b => "1b",
            Item::T1c => "1c",
            Item::T1d => "1d",
            Item::T1e => "1e",
            Item::T1f => "1f",
            Item::T2a => "2a",
            Item::T2b => "2b",
            Item::T2c => "2c",
            Item::T2d => "2d",
            Item::T2e => "2e",
        }
    }
}

impl std::fmt::Display for Item {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Item {
    type Err = Error;

    fn from_str(s: &str) -> Result<Item> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.trim_start_matches('t');
        let key = if key.len() == 1 { format!("1{key}") } else { key.to_string() };
        [
            Item::T1a,
            Item::T1b,
            Item::T1c,
            Item::T1d,
            Item::T1e,
            Item::T1f,
            Item::T2a,
            Item::T2b,
            Item::T2c,
            Item::T2d,
            Item::T2e,
        ]
        .into_iter()
        .find(|i| i.label() == key)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown item {s:?}")))
    }
}

/// A constant and an exponent certifying one characterization.
///
/// The exponent is `p`, `q` or `q − 1` according to [`Item::role`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UCParams {
    pub alpha: f64,
    pub exponent: f64,
    pub item: Item,
}

impl UCParams {
    pub fn new(alpha: f64, exponent: f64, item: Item) -> Result<Self> {
        let ok = alpha > 0.0
            && alpha.is_finite()
            && match item.role() {
                ExponentRole::P => exponent >= 2.0,
                ExponentRole::Q => exponent > 1.0 && exponent <= 2.0,
                ExponentRole::QMinusOne => exponent > 0.0 && exponent <= 1.0,
            };
        if !ok {
            return Err(Error::InvalidParameter(format!("({alpha}, {exponent}) is not admissible for item {item}")));
        }
        Ok(UCParams { alpha, exponent, item })
    }

    /// The convexity exponent `p` implied by the stored exponent.
    pub fn p(&self) -> f64 {
        match self.item.role() {
            ExponentRole::P => self.exponent,
            ExponentRole::Q => self.exponent / (self.exponent - 1.0),
            ExponentRole::QMinusOne => 1.0 + 1.0 / self.exponent,
        }
    }

    /// The smoothness exponent `q = p/(p − 1)`.
    pub fn q(&self) -> f64 {
        let p = self.p();
        p / (p - 1.0)
    }
}

/// Controls for [`fit_uc_params`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Only grid points with `ε ≤ fit_max` enter the log-log regression.
    pub fit_max: f64,
    /// Values at or below this count as zero.
    pub floor: f64,
    /// A zero value at `ε ≥ floor_from` means the body is not UC.
    pub floor_from: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { fit_max: 1.0, floor: 1e-9, floor_from: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UcFit {
    Certified {
        params: UCParams,
        /// Raw regression slope before clamping to `p ≥ 2`.
        fitted_exponent: f64,
        r_squared: f64,
    },
    NotUc {
        reason: String,
    },
}

impl UcFit {
    pub fn params(&self) -> Option<UCParams> {
        match self {
            UcFit::Certified { params, .. } => Some(*params),
            UcFit::NotUc { .. } => None,
        }
    }
}

/// Fit `α̂ε^p̂ ≤ δ̂(ε)` to a convexity or rotundity curve.
///
/// `p̂` is the log-log slope on `ε ≤ fit_max` (clamped to at least 2); `α̂` is
/// then the largest constant keeping `α̂ε^p̂` below the curve on the whole
/// positive grid.
pub fn fit_uc_params(curve: &ModulusCurve, opts: FitOptions) -> Result<UcFit> {
    let item = match curve.kind {
        ModulusKind::Delta => Item::T1c,
        ModulusKind::NuLocal => Item::T2a,
        k => return Err(Error::InvalidParameter(format!("cannot fit convexity parameters to a {} curve", k.as_str()))),
    };
    let pts: Vec<(f64, f64)> =
        curve.grid.iter().zip(&curve.values).filter(|(e, _)| **e > 0.0).map(|(e, v)| (*e, *v)).collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints { need: 3, got: pts.len() });
    }
    if let Some((e, v)) = pts.iter().find(|(e, v)| *e >= opts.floor_from && *v <= opts.floor) {
        return Ok(UcFit::NotUc { reason: format!("modulus {v:e} at eps = {e} is below the floor") });
    }
    let usable: Vec<&(f64, f64)> = pts.iter().filter(|(_, v)| *v > opts.floor).collect();
    let window: Vec<&(f64, f64)> = usable.iter().copied().filter(|(e, _)| *e <= opts.fit_max).collect();
    let window = if window.len() >= 2 { window } else { usable };
    let lx: Vec<f64> = window.iter().map(|(e, _)| e.ln()).collect();
    let ly: Vec<f64> = window.iter().map(|(_, v)| v.ln()).collect();
    let fit = linear_fit(&lx, &ly).ok_or(Error::TooFewPoints { need: 2, got: window.len() })?;
    let p = fit.slope.max(2.0);
    let alpha = pts.iter().filter(|(_, v)| *v > opts.floor).map(|(e, v)| v / e.powf(p)).fold(f64::INFINITY, f64::min);
    Ok(UcFit::Certified {
        params: UCParams::new(alpha, p, item)?,
        fitted_exponent: fit.slope,
        r_squared: fit.r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_cumulative_min() {
        let mut v = vec![0.1, 0.3, 0.2, 0.4];
        assert_eq!(monotone_from_above(&mut v), 1);
        assert_eq!(v, vec![0.1, 0.2, 0.2, 0.4]);
    }

    #[test]
    fn item_parsing() {
        assert_eq!("b".parse::<Item>().unwrap(), Item::T1b);
        assert_eq!("2c".parse::<Item>().unwrap(), Item::T2c);
        assert!("7z".parse::<Item>().is_err());
    }

    #[test]
    fn exponent_roles_round_trip() {
        let d = UCParams::new(1.0, 1.0 / 3.0, Item::T1d).unwrap();
        assert!((d.p() - 4.0).abs() < 1e-12);
        assert!((d.q() - 4.0 / 3.0).abs() < 1e-12);
    }
}
