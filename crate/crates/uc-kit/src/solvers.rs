//! Frank-Wolfe solvers and convergence-rate fitting.
//!
//! Smoothness constants and gradient norms are Euclidean. Every solver is
//! sequential; the only randomness is the starting vertex `lmo(g)` for a
//! Gaussian `g` drawn from stream `(seed, 0)`.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexBody, Vector};
use crate::io::{Cell, Table};
use crate::linalg::{self, dot, norm2};
use crate::regress::linear_fit;
use crate::rng::{gaussian_vec, stream};
use crate::{Error, Result};

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vector + Send + Sync>;

/// Objective families with closed-form constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// `(scale/2)‖x − b‖²`.
    Quadratic {
        b: Vector,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `scale·‖x − b‖` for `b` outside the body.
    DistanceToPoint {
        b: Vector,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone)]
enum ObjKind {
    Quadratic { b: Vector, scale: f64 },
    Distance { b: Vector, scale: f64 },
    Custom { value: ValueFn, grad: GradFn },
}

/// Smooth convex objective with known constants on a given body.
#[derive(Clone)]
pub struct Objective {
    pub id: String,
    kind: ObjKind,
    /// Lipschitz constant of `∇f` on the body.
    pub smoothness_l: f64,
    /// Certified `inf_{x ∈ C} ‖∇f(x)‖`, when positive.
    pub grad_lower_bound_c: Option<f64>,
    /// `(x*, f*)` when available in closed form.
    pub optimum: Option<(Vector, f64)>,
}

impl std::fmt::Debug for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Objective")
            .field("id", &self.id)
            .field("smoothness_l", &self.smoothness_l)
            .field("grad_lower_bound_c", &self.grad_lower_bound_c)
            .field("optimum", &self.optimum)
            .finish()
    }
}

/// Relative tolerance of the gradient check on custom objectives.
pub const GRADIENT_CHECK_TOL: f64 = 1e-5;

/// Build an objective for `body`; `x*` is the Euclidean projection of `b`.
pub fn make_objective(spec: &ObjectiveSpec, body: &ConvexBody) -> Result<Objective> {
    let (b, scale) = match spec {
        ObjectiveSpec::Quadratic { b, scale } | ObjectiveSpec::DistanceToPoint { b, scale } => (b, *scale),
    };
    if b.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: b.len() });
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let xstar = body.project(b)?;
    let dist = norm2(&linalg::sub(b, &xstar));
    let exterior = body.gauge(b)? > 1.0 && dist > 0.0;
    Ok(match spec {
        ObjectiveSpec::Quadratic { .. } => Objective {
            id: format!("quadratic(b={b:?}, scale={scale})"),
            kind: ObjKind::Quadratic { b: b.clone(), scale },
            smoothness_l: scale,
            grad_lower_bound_c: exterior.then_some(dist * scale),
            optimum: Some((xstar, 0.5 * scale * dist * dist)),
        },
        ObjectiveSpec::DistanceToPoint { .. } => {
            if !exterior {
                return Err(Error::ObjectiveRejected("distance objective needs b outside the body".into()));
            }
            Objective {
                id: format!("distance(b={b:?}, scale={scale})"),
                kind: ObjKind::Distance { b: b.clone(), scale },
                smoothness_l: scale / dist,
                grad_lower_bound_c: Some(scale),
                optimum: Some((xstar, scale * dist)),
            }
        }
    })
}

impl Objective {
    /// Wrap user oracles after a finite-difference gradient check on 20
    /// probes in `body`. `L` is estimated by power iteration on
    /// finite-difference Hessian-vector products over 100 probes, times 1.2.
    pub fn custom<F, G>(id: &str, value: F, grad: G, body: &ConvexBody, seed: u64) -> Result<Objective>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vector + Send + Sync + 'static,
    {
        let mut rng = stream(seed, 1);
        let h = 1e-6;
        for _ in 0..20 {
            let x = body.sample_interior(&mut rng);
            let g = grad(&x);
            if g.len() != x.len() || !linalg::all_finite(&g) {
                return Err(Error::ObjectiveRejected("gradient oracle returned a bad vector".into()));
            }
            let fd: Vector = (0..x.len())
                .map(|i| {
                    let mut a = x.clone();
                    let mut b = x.clone();
                    a[i] += h;
                    b[i] -= h;
                    (value(&a) - value(&b)) / (2.0 * h)
                })
                .collect();
            let err = norm2(&linalg::sub(&fd, &g));
            if err > GRADIENT_CHECK_TOL * norm2(&g).max(1.0) {
                return Err(Error::ObjectiveRejected(format!(
                    "gradient check failed at {x:?}: finite-difference error {err:.3e}"
                )));
            }
        }
        let mut l = 0.0f64;
        for _ in 0..100 {
            let x = body.sample_interior(&mut rng);
            let mut v = gaussian_vec(&mut rng, x.len());
            let mut lambda = 0.0;
            for _ in 0..30 {
                let n = norm2(&v);
                if n == 0.0 {
                    break;
                }
                v = linalg::scale(&v, 1.0 / n);
                let hv = linalg::scale(
                    &linalg::sub(&grad(&linalg::axpy(&x, 1e-5, &v)), &grad(&linalg::axpy(&x, -1e-5, &v))),
                    1.0 / 2e-5,
                );
                lambda = norm2(&hv);
                v = hv;
            }
            l = l.max(lambda);
        }
        Ok(Objective {
            id: id.into(),
            kind: ObjKind::Custom { value: Arc::new(value), grad: Arc::new(grad) },
            smoothness_l: 1.2 * l.max(f64::MIN_POSITIVE),
            grad_lower_bound_c: None,
            optimum: None,
        })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ObjKind::Quadratic { b, scale } => {
                let r = linalg::sub(x, b);
                0.5 * scale * dot(&r, &r)
            }
            ObjKind::Distance { b, scale } => scale * norm2(&linalg::sub(x, b)),
            ObjKind::Custom { value, .. } => value(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vector {
        match &self.kind {
            ObjKind::Quadratic { b, scale } => linalg::scale(&linalg::sub(x, b), *scale),
            ObjKind::Distance { b, scale } => {
                let r = linalg::sub(x, b);
                let n = norm2(&r);
                linalg::scale(&r, scale / n)
            }
            ObjKind::Custom { grad, .. } => grad(x),
        }
    }

    /// `f(x) − f*`, evaluated without cancellation for quadratics as
    /// `(scale/2)⟨x − x*, x + x* − 2b⟩`.
    pub fn primal_gap(&self, x: &[f64]) -> Option<f64> {
        let (xs, fs) = self.optimum.as_ref()?;
        Some(match &self.kind {
            ObjKind::Quadratic { b, scale } => {
                let u = linalg::sub(x, xs);
                let w: Vector = x.iter().zip(xs).zip(b).map(|((a, c), bb)| a + c - 2.0 * bb).collect();
                0.5 * scale * dot(&u, &w)
            }
            _ => self.value(x) - fs,
        })
    }

    /// Minimizer of `γ ↦ f(x + γ(v − x))` over `[0, 1]`.
    fn line_search(&self, x: &[f64], dir: &[f64], gap: f64) -> f64 {
        if let ObjKind::Quadratic { scale, .. } = &self.kind {
            let dd = dot(dir, dir);
            return if dd > 0.0 { (gap / (scale * dd)).clamp(0.0, 1.0) } else { 0.0 };
        }
        let phi = |g: f64| self.value(&linalg::axpy(x, g, dir));
        let gamma = golden_section(&phi, 0.0, 1.0, 64);
        if phi(gamma) <= phi(0.0) {
            gamma
        } else {
            0.0
        }
    }
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mut best = (f(a), a);
    for (v, t) in [(fc, c), (fd, d), (f(b), b)] {
        if v < best.0 {
            best = (v, t);
        }
    }
    best.1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `γ_k = 2/(k+2)`.
    Agnostic,
    /// `γ_k = clamp(gap_k / (L‖x_k − v_k‖²), 0, 1)`.
    ShortStep,
    /// Exact minimization along the segment.
    LineSearch,
}

impl StepRule {
    pub fn as_str(self) -> &'static str {
        match self {
            StepRule::Agnostic => "agnostic",
            StepRule::ShortStep => "short_step",
            StepRule::LineSearch => "line_search",
        }
    }
}

impl std::str::FromStr for StepRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "agnostic" => Ok(StepRule::Agnostic),
            "short_step" => Ok(StepRule::ShortStep),
            "line_search" => Ok(StepRule::LineSearch),
            _ => Err(Error::InvalidParameter(format!("unknown step rule {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iter: usize,
    pub tol_gap: f64,
    pub seed: u64,
    /// Record the iterate every this many iterations; 0 keeps only the last.
    pub snapshot_every: usize,
}

impl SolverOptions {
    pub fn new(max_iter: usize, seed: u64) -> Self {
        SolverOptions { max_iter, tol_gap: 0.0, seed, snapshot_every: 0 }
    }
}

/// Row `k` describes the iterate after `k` updates (`y_k` for PAFW);
/// `step_size[k]` is the step that produced it, 0 for the start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub k: Vec<usize>,
    pub f_value: Vec<f64>,
    pub fw_gap: Vec<f64>,
    pub step_size: Vec<f64>,
    /// `f − f*` without cancellation, when the optimum is known.
    pub primal_gap: Option<Vec<f64>>,
    pub snapshots: Vec<(usize, Vector)>,
    pub final_iterate: Vector,
    pub body: String,
    pub objective: String,
    pub rule: String,
    pub seed: u64,
    pub wall_time_s: f64,
}

impl SolverTrace {
    fn new(body: &ConvexBody, obj: &Objective, rule: &str, seed: u64) -> Self {
        SolverTrace {
            k: Vec::new(),
            f_value: Vec::new(),
            fw_gap: Vec::new(),
            step_size: Vec::new(),
            primal_gap: obj.optimum.as_ref().map(|_| Vec::new()),
            snapshots: Vec::new(),
            final_iterate: Vec::new(),
            body: body.to_string(),
            objective: obj.id.clone(),
            rule: rule.into(),
            seed,
            wall_time_s: 0.0,
        }
    }

    fn record(
        &mut self,
        k: usize,
        x: &[f64],
        f: f64,
        gap: f64,
        step: f64,
        obj: &Objective,
        every: usize,
    ) -> Result<()> {
        if !f.is_finite() || !gap.is_finite() || !linalg::all_finite(x) {
            return Err(Error::Numerical(format!("non-finite state at iteration {k}")));
        }
        self.k.push(k);
        self.f_value.push(f);
        self.fw_gap.push(gap);
        self.step_size.push(step);
        if let (Some(pg), Some(v)) = (self.primal_gap.as_mut(), obj.primal_gap(x)) {
            pg.push(v);
        }
        if every > 0 && k % every == 0 {
            self.snapshots.push((k, x.to_vec()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// `k, f_value, fw_gap, step_size[, primal_gap]`.
    pub fn to_table(&self) -> Table {
        let mut header = vec!["k", "f_value", "fw_gap", "step_size"];
        if self.primal_gap.is_some() {
            header.push("primal_gap");
        }
        let mut t = Table::new(&header);
        for i in 0..self.len() {
            let mut row: Vec<Cell> =
                vec![self.k[i].into(), self.f_value[i].into(), self.fw_gap[i].into(), self.step_size[i].into()];
            if let Some(pg) = &self.primal_gap {
                row.push(pg[i].into());
            }
            t.push(row);
        }
        t
    }
}

fn start(body: &ConvexBody, seed: u64) -> Vector {
    body.sample_boundary(&mut stream(seed, 0))
}

/// `(gap, v)` at `x` for gradient `g`.
fn fw_vertex(body: &ConvexBody, x: &[f64], g: &[f64]) -> Result<(f64, Vector)> {
    if !linalg::all_finite(g) {
        return Err(Error::Numerical("non-finite gradient".into()));
    }
    if linalg::max_abs(g) == 0.0 {
        return Ok((0.0, x.to_vec()));
    }
    let v = body.lmo_unchecked(&linalg::scale(g, -1.0));
    Ok((dot(g, &linalg::sub(x, &v)), v))
}

/// Vanilla Frank-Wolfe from `x_0 = lmo(g)`, stopping at `gap ≤ tol_gap` or
/// after `max_iter` updates.
pub fn vanilla_fw(obj: &Objective, body: &ConvexBody, rule: StepRule, opts: SolverOptions) -> Result<SolverTrace> {
    let t0 = Instant::now();
    let mut trace = SolverTrace::new(body, obj, rule.as_str(), opts.seed);
    let mut x = start(body, opts.seed);
    let mut step = 0.0;
    for k in 0..=opts.max_iter {
        let g = obj.gradient(&x);
        let (gap, v) = fw_vertex(body, &x, &g)?;
        trace.record(k, &x, obj.value(&x), gap, step, obj, opts.snapshot_every)?;
        if gap <= opts.tol_gap || k == opts.max_iter {
            break;
        }
        let dir = linalg::sub(&v, &x);
        step = match rule {
            StepRule::Agnostic => 2.0 / (k as f64 + 2.0),
            StepRule::ShortStep => {
                let dd = dot(&dir, &dir);
                if dd > 0.0 {
                    (gap / (obj.smoothness_l * dd)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            StepRule::LineSearch => obj.line_search(&x, &dir, gap),
        };
        x = linalg::axpy(&x, step, &dir);
    }
    trace.final_iterate = x;
    trace.wall_time_s = t0.elapsed().as_secs_f64();
    Ok(trace)
}

/// One PAFW update: returns `(z_{k−1}, x_k, y_k)`.
///
/// `z_{k−1} = ((k−1)/(k+1)) y_{k−1} + (2/(k+1)) x_{k−1}`,
/// `x_k = lmo(−∇f(z_{k−1}))`, `y_k = (1 − α_k) y_{k−1} + α_k x_k` with
/// `α_k = 2/(k+2)`.
pub fn pafw_step(
    obj: &Objective,
    body: &ConvexBody,
    k: usize,
    x_prev: &[f64],
    y_prev: &[f64],
) -> Result<(Vector, Vector, Vector)> {
    assert!(k >= 1, "PAFW iterations start at k = 1");
    let kf = k as f64;
    let z: Vector =
        y_prev.iter().zip(x_prev).map(|(y, x)| (kf - 1.0) / (kf + 1.0) * y + 2.0 / (kf + 1.0) * x).collect();
    let g = obj.gradient(&z);
    if !linalg::all_finite(&g) {
        return Err(Error::Numerical(format!("non-finite gradient at iteration {k}")));
    }
    let x = if linalg::max_abs(&g) == 0.0 { z.clone() } else { body.lmo_unchecked(&linalg::scale(&g, -1.0)) };
    let a = 2.0 / (kf + 2.0);
    let y = linalg::lerp(y_prev, &x, a);
    Ok((z, x, y))
}

/// Primal-averaging Frank-Wolfe with `α_k = 2/(k+2)` and `y_0 = x_0`.
/// The trace records `f(y_k)` and the Frank-Wolfe gap at `y_k`.
pub fn pafw(obj: &Objective, body: &ConvexBody, opts: SolverOptions) -> Result<SolverTrace> {
    let t0 = Instant::now();
    let mut trace = SolverTrace::new(body, obj, "pafw", opts.seed);
    let mut x = start(body, opts.seed);
    let mut y = x.clone();
    for k in 0..=opts.max_iter {
        if k > 0 {
            let (_, xk, yk) = pafw_step(obj, body, k, &x, &y)?;
            x = xk;
            y = yk;
        }
        let (gap, _) = fw_vertex(body, &y, &obj.gradient(&y))?;
        let step = if k == 0 { 0.0 } else { 2.0 / (k as f64 + 2.0) };
        trace.record(k, &y, obj.value(&y), gap, step, obj, opts.snapshot_every)?;
        if gap <= opts.tol_gap {
            break;
        }
    }
    trace.final_iterate = y;
    trace.wall_time_s = t0.elapsed().as_secs_f64();
    Ok(trace)
}

/// `2L(6LD/(4αc))^{1/(p−1)}` times `k^{−(p+1)/(p−1)}` for `p > 3`,
/// `log(k+1)/k²` for `p = 3` and `((3−p)/(p−1))/k²` for `p ∈ [2, 3)`.
///
/// ```
/// use uc_kit::solvers::pafw_envelope;
/// let e = pafw_envelope(10, 2.0, 1.0, 2.0, 0.125, 1.0)?;
/// assert!((e - 48.0 / 100.0).abs() < 1e-12);
/// # Ok::<(), uc_kit::Error>(())
/// ```
pub fn pafw_envelope(k: usize, p: f64, l: f64, d: f64, alpha: f64, c: f64) -> Result<f64> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
    }
    for (name, v) in [("L", l), ("D", d), ("alpha", alpha), ("c", c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if k == 0 {
        return Err(Error::InvalidParameter("the envelope starts at k = 1".into()));
    }
    let kf = k as f64;
    let factor = 2.0 * l * (6.0 * l * d / (4.0 * alpha * c)).powf(1.0 / (p - 1.0));
    Ok(factor * pafw_regime(kf, p))
}

/// The `k`-dependent factor of [`pafw_envelope`].
pub fn pafw_regime(k: f64, p: f64) -> f64 {
    if p > 3.0 {
        k.powf(-(p + 1.0) / (p - 1.0))
    } else if p == 3.0 {
        (k + 1.0).ln() / (k * k)
    } else {
        (3.0 - p) / (p - 1.0) / (k * k)
    }
}

/// Predicted power-law exponent of the PAFW envelope.
pub fn pafw_predicted_exponent(p: f64) -> f64 {
    if p > 3.0 {
        -(p + 1.0) / (p - 1.0)
    } else {
        -2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `log gap ≈ a + k log ρ`; the reported value is `ρ`.
    Geometric,
    /// `log gap ≈ a + e log k`; the reported value is `e`.
    PowerLaw,
    /// `log(gap / log(k+1)) ≈ a + e log k`.
    PowerLawLog,
    /// Too few positive gaps to fit.
    ConvergedExactly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub model: RateModel,
    pub exponent_or_ratio: f64,
    pub constant: f64,
    pub r_squared: f64,
    pub fit_window: (usize, usize),
    pub points: usize,
}

/// Gaps at or below this are excluded from fits.
pub const GAP_FLOOR: f64 = 1e-14;
/// Minimum number of fit points.
pub const MIN_FIT_POINTS: usize = 50;

/// Fit one model on `k ∈ [k_min, k_max]`, using only gaps above
/// [`GAP_FLOOR`] and `k ≥ 1`.
pub fn fit_series(k: &[usize], gap: &[f64], window: (usize, usize), model: RateModel) -> RateEstimate {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&ki, &gi) in k.iter().zip(gap) {
        if ki < window.0.max(1) || ki > window.1 || gi.is_nan() || gi <= GAP_FLOOR {
            continue;
        }
        let kf = ki as f64;
        match model {
            RateModel::Geometric => {
                xs.push(kf);
                ys.push(gi.ln());
            }
            RateModel::PowerLaw => {
                xs.push(kf.ln());
                ys.push(gi.ln());
            }
            RateModel::PowerLawLog => {
                xs.push(kf.ln());
                ys.push((gi / (kf + 1.0).ln()).ln());
            }
            RateModel::ConvergedExactly => {}
        }
    }
    let converged = RateEstimate {
        model: RateModel::ConvergedExactly,
        exponent_or_ratio: 0.0,
        constant: 0.0,
        r_squared: 0.0,
        fit_window: window,
        points: xs.len(),
    };
    if xs.len() < MIN_FIT_POINTS || model == RateModel::ConvergedExactly {
        return converged;
    }
    let Some(fit) = linear_fit(&xs, &ys) else {
        return converged;
    };
    RateEstimate {
        model,
        exponent_or_ratio: if model == RateModel::Geometric { fit.slope.exp() } else { fit.slope },
        constant: fit.intercept.exp(),
        r_squared: fit.r_squared,
        fit_window: window,
        points: xs.len(),
    }
}

/// Geometric versus power law, whichever has the higher `r²`.
pub fn fit_best(k: &[usize], gap: &[f64], window: (usize, usize)) -> RateEstimate {
    let g = fit_series(k, gap, window, RateModel::Geometric);
    let p = fit_series(k, gap, window, RateModel::PowerLaw);
    if g.model == RateModel::ConvergedExactly {
        return g;
    }
    if g.r_squared >= p.r_squared {
        g
    } else {
        p
    }
}

fn burn_in_window(trace: &SolverTrace, burn_in_fraction: f64) -> (usize, usize) {
    let last = trace.k.last().copied().unwrap_or(0);
    let start = (burn_in_fraction.clamp(0.0, 1.0) * last as f64).ceil() as usize;
    (start, last)
}

/// Fit `f_value − fstar` after discarding the first `burn_in_fraction` of
/// iterations.
pub fn fit_rate(trace: &SolverTrace, fstar: f64, burn_in_fraction: f64) -> RateEstimate {
    let gap: Vec<f64> = trace.f_value.iter().map(|f| f - fstar).collect();
    fit_best(&trace.k, &gap, burn_in_window(trace, burn_in_fraction))
}

/// Like [`fit_rate`] but on the cancellation-free primal gap column.
pub fn fit_primal_gap(trace: &SolverTrace, burn_in_fraction: f64) -> Option<RateEstimate> {
    let gap = trace.primal_gap.as_ref()?;
    Some(fit_best(&trace.k, gap, burn_in_window(trace, burn_in_fraction)))
}

/// Best objective value over a line-search run `factor` times longer, for
/// objectives without a closed-form optimum.
pub fn reference_fstar(obj: &Objective, body: &ConvexBody, max_iter: usize, factor: usize, seed: u64) -> Result<f64> {
    if let Some((_, f)) = &obj.optimum {
        return Ok(*f);
    }
    let t = vanilla_fw(obj, body, StepRule::LineSearch, SolverOptions::new(max_iter * factor, seed))?;
    Ok(t.f_value.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_interior_minimum() {
        let t = golden_section(&|g: f64| (g - 0.3).powi(2), 0.0, 1.0, 64);
        assert!((t - 0.3).abs() < 1e-9);
    }
}
