//! Constant transfers between the equivalent characterizations, a discrete
//! Legendre transform, functional UC/US checkers and the `ℓ_p` Hessian
//! certificate.
//!
//! Every transfer evaluates a closed-form clause; nothing here is estimated.
//! Exponent conventions follow [`Item::role`]: `p ≥ 2`, `q = p/(p − 1)`.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{pnorm, ConvexBody, Exponent, Vector};
use crate::io::Table;
use crate::linalg::{self, dot};
use crate::moduli::{Item, UCParams};
use crate::rng::{gaussian_vec, log_uniform, stream};
use crate::{Error, Result};

/// `α‖·‖^p` as a coefficient/exponent pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFuncParams {
    pub coefficient: f64,
    pub exponent: f64,
}

/// Conjugate of `α σ_C^p`: `[1/(αp)^{1/(p−1)} − α/(αp)^q] ‖·‖_C^q`.
///
/// ```
/// let c = uc_kit::duality::power_conjugate_params(0.5, 2.0)?;
/// assert_eq!((c.coefficient, c.exponent), (0.5, 2.0));
/// # Ok::<(), uc_kit::Error>(())
/// ```
pub fn power_conjugate_params(alpha: f64, p: f64) -> Result<PowerFuncParams> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent must exceed 1, got {p}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("coefficient must be positive, got {alpha}")));
    }
    let q = p / (p - 1.0);
    let ap = alpha * p;
    Ok(PowerFuncParams { coefficient: 1.0 / ap.powf(1.0 / (p - 1.0)) - alpha / ap.powf(q), exponent: q })
}

/// A function tabulated on the regular grid `[−R, R]^m`, row-major with the
/// last coordinate fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub radius: f64,
    pub points_per_axis: usize,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn tabulate<F: FnMut(&[f64]) -> f64>(
        mut f: F,
        radius: f64,
        points_per_axis: usize,
        dim: usize,
    ) -> Result<Self> {
        if !(radius > 0.0) || points_per_axis < 2 || dim == 0 {
            return Err(Error::InvalidParameter("grid needs radius > 0 and 2+ points per axis".into()));
        }
        let total = points_per_axis
            .checked_pow(dim as u32)
            .filter(|n| *n <= 50_000_000)
            .ok_or_else(|| Error::InvalidParameter("grid too large".into()))?;
        let mut s = SampledFunction { radius, points_per_axis, dim, values: Vec::with_capacity(total) };
        for k in 0..total {
            let x = s.point(k);
            let v = f(&x);
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            s.values.push(v);
        }
        Ok(s)
    }

    pub fn step(&self) -> f64 {
        2.0 * self.radius / (self.points_per_axis - 1) as f64
    }

    fn index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = k % self.points_per_axis;
            k /= self.points_per_axis;
        }
        idx
    }

    pub fn point(&self, k: usize) -> Vector {
        let h = self.step();
        self.index(k).iter().map(|&i| -self.radius + h * i as f64).collect()
    }

    /// Largest absolute forward difference quotient along any axis.
    pub fn lipschitz_estimate(&self) -> f64 {
        let n = self.points_per_axis;
        let h = self.step();
        let mut lip = 0.0f64;
        for k in 0..self.values.len() {
            let mut stride = 1;
            for axis in (0..self.dim).rev() {
                let i = (k / stride) % n;
                if i + 1 < n {
                    lip = lip.max((self.values[k + stride] - self.values[k]).abs() / h);
                }
                stride *= n;
                let _ = axis;
            }
        }
        lip
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateValue {
    pub value: f64,
    pub argmax: Vector,
    /// The maximizer sits on the grid boundary, so the value is untrusted.
    pub boundary_active: bool,
    /// `h·(‖y‖_1 + Lip(f))`, a first-order bound on the discretization error
    /// when the maximizer is interior.
    pub error_bound: f64,
}

/// `f*(y) ≈ max_{x ∈ grid} ⟨x, y⟩ − f(x)`.
///
/// ```
/// use uc_kit::duality::{discrete_conjugate, SampledFunction};
/// let f = SampledFunction::tabulate(|x| x[0] * x[0] / 2.0, 4.0, 8001, 1)?;
/// let c = discrete_conjugate(&f, &[1.0])?;
/// assert!((c.value - 0.5).abs() < 1e-6 && !c.boundary_active);
/// # Ok::<(), uc_kit::Error>(())
/// ```
pub fn discrete_conjugate(f: &SampledFunction, y: &[f64]) -> Result<ConjugateValue> {
    if y.len() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, got: y.len() });
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, fv) in f.values.iter().enumerate() {
        let v = dot(&f.point(k), y) - fv;
        if v > best.0 {
            best = (v, k);
        }
    }
    let idx = f.index(best.1);
    let boundary_active = idx.iter().any(|&i| i == 0 || i + 1 == f.points_per_axis);
    let y1: f64 = y.iter().map(|v| v.abs()).sum();
    Ok(ConjugateValue {
        value: best.0,
        argmax: f.point(best.1),
        boundary_active,
        error_bound: f.step() * (y1 + f.lipschitz_estimate()),
    })
}

/// Tabulate `f*` on `[−radius, radius]^m`, flagging whether any value came
/// from a boundary maximizer.
pub fn conjugate_table(f: &SampledFunction, radius: f64, points_per_axis: usize) -> Result<(SampledFunction, bool)> {
    let mut any_boundary = false;
    let mut err = None;
    let table = SampledFunction::tabulate(
        |y| match discrete_conjugate(f, y) {
            Ok(c) => {
                any_boundary |= c.boundary_active;
                c.value
            }
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        radius,
        points_per_axis,
        f.dim,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let _ = &any_boundary;
    Ok((table?, any_boundary))
}

/// Which closed-form clause produced a transfer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub from: String,
    pub to: String,
    pub in_params: UCParams,
    pub out_params: UCParams,
    pub formula_id: String,
    pub note: Option<String>,
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("convexity exponent must be at least 2, got {p}")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::InvalidParameter(format!("smoothness exponent must lie in (1, 2], got {q}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Functional UC/US pair used by the Fenchel transfers: `(constant, exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionParams {
    pub constant: f64,
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FenchelTransfer {
    pub input: FunctionParams,
    pub output: FunctionParams,
    pub formula_id: String,
}

/// `f` `(c, p)`-uniformly convex ⇒ `f*` `(1/(q c^{q−1}), q)`-uniformly smooth.
///
/// The output constant is the coefficient of `λ(1−λ)‖·‖_*^q`, i.e. the
/// conjugate of `(c/p)‖·‖^p`. Under the `(c′/q)` zero-order normalization
/// used by [`check_function_us`] it corresponds to `c′ = q·constant`.
pub fn fenchel_uc_to_us(c: f64, p: f64) -> Result<FenchelTransfer> {
    check_positive("c", c)?;
    check_p(p)?;
    let q = p / (p - 1.0);
    Ok(FenchelTransfer {
        input: FunctionParams { constant: c, exponent: p },
        output: FunctionParams { constant: 1.0 / (q * c.powf(q - 1.0)), exponent: q },
        formula_id: "fenchel:uc->us".into(),
    })
}

/// `f` `(α, q)`-uniformly smooth ⇒ `f*` `(1/(p α^{p−1}), p)`-uniformly convex.
pub fn fenchel_us_to_uc(alpha: f64, q: f64) -> Result<FenchelTransfer> {
    check_positive("alpha", alpha)?;
    check_q(q)?;
    let p = q / (q - 1.0);
    Ok(FenchelTransfer {
        input: FunctionParams { constant: alpha, exponent: q },
        output: FunctionParams { constant: 1.0 / (p * alpha.powf(p - 1.0)), exponent: p },
        formula_id: "fenchel:us->uc".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarDirection {
    UcToUs,
    UsToUc,
}

/// Set-level constants for the polar body.
///
/// `(α, p)`-UC `C` ⇒ `C°` is `(1/(2q(2αp)^{q−1}), q)`-US;
/// `(α, q)`-US `C` ⇒ `C°` is `(1/(2p(2αq)^{1/(q−1)}), p)`-UC.
/// The input exponent is read as `p` for `UcToUs` and `q` for `UsToUc`.
pub fn polar_transfer(alpha: f64, exponent: f64, direction: PolarDirection) -> Result<FenchelTransfer> {
    check_positive("alpha", alpha)?;
    let (out, id) = match direction {
        PolarDirection::UcToUs => {
            let p = exponent;
            check_p(p)?;
            let q = p / (p - 1.0);
            (
                FunctionParams { constant: 1.0 / (2.0 * q * (2.0 * alpha * p).powf(q - 1.0)), exponent: q },
                "polar:uc->us",
            )
        }
        PolarDirection::UsToUc => {
            let q = exponent;
            check_q(q)?;
            let p = q / (q - 1.0);
            (
                FunctionParams { constant: 1.0 / (2.0 * p * (2.0 * alpha * q).powf(1.0 / (q - 1.0))), exponent: p },
                "polar:us->uc",
            )
        }
    };
    Ok(FenchelTransfer { input: FunctionParams { constant: alpha, exponent }, output: out, formula_id: id.into() })
}

/// One listed edge between global characterizations.
///
/// Edges: `a↔c` (same constant), `a→b`, `b→d`, `e→c`, `f→e`, `e→f`, `d→e`,
/// plus the identity. Anything else must be composed with
/// [`theorem1_chain`].
pub fn theorem1_transfer(from: Item, to: Item, params: UCParams) -> Result<TransferResult> {
    if params.item != from {
        return Err(Error::InvalidParameter(format!("parameters certify item {}, not {from}", params.item)));
    }
    let p = params.p();
    let q = params.q();
    let a = params.alpha;
    let mut note = None;
    let (alpha, exponent, id) = match (from, to) {
        (f, t) if f == t => (a, params.exponent, "identity"),
        (Item::T1a, Item::T1c) | (Item::T1c, Item::T1a) => (a, p, "remark:a<->c"),
        (Item::T1a, Item::T1b) => (2.0 * a, p, "remark:a->b"),
        (Item::T1b, Item::T1d) => (1.0 / (2.0 * a).powf(q - 1.0), q - 1.0, "remark:b->d"),
        (Item::T1e, Item::T1c) => {
            (q.powf(p - 1.0) / (2f64.powf(2.0 * p - 1.0) * p * a.powf(p - 1.0)), p, "remark:e->c")
        }
        (Item::T1f, Item::T1e) => {
            note = Some("the clause writes c for the constant introduced as alpha; both are read as alpha".into());
            (p.powf(q - 1.0) / ((p - 1.0) * q * a.powf(q - 1.0)), q, "remark:f->e")
        }
        (Item::T1e, Item::T1f) => (q.powf(p - 1.0) / ((q - 1.0) * p * a.powf(p - 1.0)), p, "remark:e->f"),
        (Item::T1d, Item::T1e) => {
            note = Some("the clause gives no exponent; q is used".into());
            (2.0 * q * q * (a * 2f64.powf(q - 1.0) + 1.0), q, "remark:d->e")
        }
        _ => {
            return Err(Error::NoDirectClause { from: from.to_string(), to: to.to_string() });
        }
    };
    Ok(TransferResult {
        from: from.to_string(),
        to: to.to_string(),
        in_params: params,
        out_params: UCParams::new(alpha, exponent, to)?,
        formula_id: id.into(),
        note,
    })
}

/// `from_item, to_item, alpha_in, p_in, alpha_out, p_out, formula_id` rows.
pub fn transfer_table(rows: &[TransferResult]) -> Table {
    let mut t = Table::new(&["from_item", "to_item", "alpha_in", "p_in", "alpha_out", "p_out", "formula_id"]);
    for r in rows {
        t.push(vec![
            r.from.as_str().into(),
            r.to.as_str().into(),
            r.in_params.alpha.into(),
            r.in_params.exponent.into(),
            r.out_params.alpha.into(),
            r.out_params.exponent.into(),
            r.formula_id.as_str().into(),
        ]);
    }
    t
}

/// Compose listed edges along `path` (which starts at `params.item`).
pub fn theorem1_chain(params: UCParams, path: &[Item]) -> Result<Vec<TransferResult>> {
    let mut cur = params;
    let mut out = Vec::new();
    for &next in path.iter().skip_while(|i| **i == params.item) {
        let t = theorem1_transfer(cur.item, next, cur)?;
        cur = t.out_params;
        out.push(t);
    }
    Ok(out)
}

/// Shortest composition of listed edges from `from` to `to`, if any.
pub fn theorem1_path(from: Item, to: Item) -> Option<Vec<Item>> {
    use std::collections::VecDeque;
    let edges: &[(Item, Item)] = &[
        (Item::T1a, Item::T1c),
        (Item::T1c, Item::T1a),
        (Item::T1a, Item::T1b),
        (Item::T1b, Item::T1d),
        (Item::T1e, Item::T1c),
        (Item::T1f, Item::T1e),
        (Item::T1e, Item::T1f),
        (Item::T1d, Item::T1e),
    ];
    let mut prev = std::collections::HashMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &(a, b) in edges {
            if a == u && !prev.contains_key(&b) {
                prev.insert(b, u);
                queue.push_back(b);
            }
        }
    }
    None
}

/// Violation scan of one inequality family.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub checked: usize,
    pub violations: usize,
    pub max_deficit: f64,
}

impl ClauseReport {
    /// Record `lhs ≤ rhs`; a deficit counts only beyond `1e−9·(1 + |rhs|)`.
    pub fn record(&mut self, lhs: f64, rhs: f64) {
        self.checked += 1;
        let deficit = lhs - rhs;
        if deficit.is_nan() || deficit > 1e-9 * (1.0 + rhs.abs()) {
            self.violations += 1;
        }
        if deficit > self.max_deficit || deficit.is_nan() {
            self.max_deficit = if deficit.is_nan() { f64::INFINITY } else { deficit };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionCheckReport {
    pub check: String,
    pub constant: f64,
    pub exponent: f64,
    pub zero_order: ClauseReport,
    pub first_order: ClauseReport,
    pub holder: Option<ClauseReport>,
    pub seed: u64,
}

impl FunctionCheckReport {
    pub fn violations(&self) -> usize {
        self.zero_order.violations + self.first_order.violations + self.holder.as_ref().map_or(0, |h| h.violations)
    }
}

/// Interpolation weights used by the functional checkers.
pub const LAMBDAS: [f64; 11] = [0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];

/// Sampling box half-width and sample count for functional checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSampling {
    pub samples: usize,
    pub radius: f64,
    pub seed: u64,
}

/// Pairs `(x, y)` with `x` uniform in the box and `y − x` at log-uniform scale.
fn sample_pair(rng: &mut impl Rng, dim: usize, radius: f64) -> (Vector, Vector) {
    let x: Vector = (0..dim).map(|_| radius * (2.0 * rng.random::<f64>() - 1.0)).collect();
    let g = gaussian_vec(rng, dim);
    let n = linalg::norm2(&g).max(f64::MIN_POSITIVE);
    let s = log_uniform(rng, 1e-3 * radius, 2.0 * radius);
    let y = linalg::axpy(&x, s / n, &g);
    (x, y)
}

/// Zero- and first-order uniform convexity scan of `f` w.r.t. `‖·‖_norm`:
/// `f(λx+(1−λ)y) + (c/p)λ(1−λ)‖x−y‖^p ≤ λf(x) + (1−λ)f(y)` and
/// `f(y) ≥ f(x) + ⟨g(x), y−x⟩ + (c/p)‖x−y‖^p`.
pub fn check_function_uc<F, G>(
    f: F,
    subgrad: G,
    c: f64,
    p: f64,
    norm: &ConvexBody,
    sampling: CheckSampling,
) -> FunctionCheckReport
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vector,
{
    let mut zero = ClauseReport::default();
    let mut first = ClauseReport::default();
    let mut rng = stream(sampling.seed, 0);
    for _ in 0..sampling.samples {
        let (x, y) = sample_pair(&mut rng, norm.dim(), sampling.radius);
        let dist = norm.gauge_unchecked(&linalg::sub(&x, &y));
        let (fx, fy) = (f(&x), f(&y));
        let pen = c / p * dist.powf(p);
        for &l in &LAMBDAS {
            let z = linalg::lerp(&y, &x, l);
            zero.record(f(&z) + pen * l * (1.0 - l), l * fx + (1.0 - l) * fy);
        }
        let g = subgrad(&x);
        first.record(fx + dot(&g, &linalg::sub(&y, &x)) + pen, fy);
    }
    FunctionCheckReport {
        check: "function_uc".into(),
        constant: c,
        exponent: p,
        zero_order: zero,
        first_order: first,
        holder: None,
        seed: sampling.seed,
    }
}

/// Zero-order, first-order and Hölder-gradient uniform smoothness scan:
/// `f(λx+(1−λ)y) + (c/q)λ(1−λ)‖x−y‖^q ≥ λf(x) + (1−λ)f(y)`,
/// `f(y) ≤ f(x) + ⟨∇f(x), y−x⟩ + (c/q)‖x−y‖^q` and
/// `‖∇f(x) − ∇f(y)‖_* ≤ c″‖x−y‖^{q−1}`, where `‖·‖_*` is the support
/// function of `norm`. Each clause is reported separately; the Hölder
/// clause only when `holder_constant` is given.
#[allow(clippy::too_many_arguments)]
pub fn check_function_us<F, G>(
    f: F,
    grad: G,
    c: f64,
    q: f64,
    holder_constant: Option<f64>,
    norm: &ConvexBody,
    sampling: CheckSampling,
) -> FunctionCheckReport
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vector,
{
    let mut zero = ClauseReport::default();
    let mut first = ClauseReport::default();
    let mut holder = holder_constant.map(|_| ClauseReport::default());
    let mut rng = stream(sampling.seed, 0);
    for _ in 0..sampling.samples {
        let (x, y) = sample_pair(&mut rng, norm.dim(), sampling.radius);
        let dist = norm.gauge_unchecked(&linalg::sub(&x, &y));
        let (fx, fy) = (f(&x), f(&y));
        let pen = c / q * dist.powf(q);
        for &l in &LAMBDAS {
            let z = linalg::lerp(&y, &x, l);
            zero.record(l * fx + (1.0 - l) * fy, f(&z) + pen * l * (1.0 - l));
        }
        let (gx, gy) = (grad(&x), grad(&y));
        first.record(fy, fx + dot(&gx, &linalg::sub(&y, &x)) + pen);
        if let (Some(h), Some(c2)) = (holder.as_mut(), holder_constant) {
            h.record(norm.support_unchecked(&linalg::sub(&gx, &gy)), c2 * dist.powf(q - 1.0));
        }
    }
    FunctionCheckReport {
        check: "function_us".into(),
        constant: c,
        exponent: q,
        zero_order: zero,
        first_order: first,
        holder,
        seed: sampling.seed,
    }
}

/// `2^m (p−1)^{m−1} ∏ λ_i^{p−2}`, the Hessian determinant of `‖·‖_p²` at a
/// positive point of the unit sphere. The flag marks a zero coordinate.
pub fn lp_hessian_det(lambda: &[f64], p: f64) -> Result<(f64, bool)> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
    }
    if lambda.iter().any(|v| *v == 0.0) {
        return Ok((0.0, true));
    }
    let m = lambda.len() as i32;
    let prod: f64 = lambda.iter().map(|v| v.abs().powf(p - 2.0)).product();
    Ok((2f64.powi(m) * (p - 1.0).powi(m - 1) * prod, false))
}

/// Central finite-difference Hessian, step `1e−4·max(1, ‖x‖)`, symmetrized.
pub fn fd_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> DMatrix<f64> {
    let m = x.len();
    let h = 1e-4 * linalg::norm2(x).max(1.0);
    let mut hess = DMatrix::zeros(m, m);
    let mut probe = x.to_vec();
    let mut eval = |i: usize, si: f64, j: usize, sj: f64| {
        probe.copy_from_slice(x);
        probe[i] += si * h;
        probe[j] += sj * h;
        f(&probe)
    };
    for i in 0..m {
        for j in 0..m {
            hess[(i, j)] = (eval(i, 1.0, j, 1.0) - eval(i, 1.0, j, -1.0) - eval(i, -1.0, j, 1.0)
                + eval(i, -1.0, j, -1.0))
                / (4.0 * h * h);
        }
    }
    (&hess + hess.transpose()) * 0.5
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCertificate {
    pub min_eigenvalue: f64,
    pub certified: bool,
}

pub const EIGEN_TOL: f64 = 1e-6;
pub const COORDINATE_FLOOR: f64 = 1e-3;

/// Local strong convexity of the `ℓ_p` ball at `x` from the smallest
/// eigenvalue of the Hessian of `‖·‖_p²`.
pub fn local_sc_certificate(x: &[f64], p: f64) -> Result<LocalCertificate> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
    }
    let ball = ConvexBody::lp(p, 1.0, x.len())?;
    ball.check_boundary(x, 1e-8)?;
    let hess = fd_hessian(|z| pnorm(z, Exponent::Finite(p)).powi(2), x);
    let min_eigenvalue = hess.symmetric_eigen().eigenvalues.min();
    let certified = min_eigenvalue > EIGEN_TOL && x.iter().all(|v| v.abs() > COORDINATE_FLOOR);
    Ok(LocalCertificate { min_eigenvalue, certified })
}
