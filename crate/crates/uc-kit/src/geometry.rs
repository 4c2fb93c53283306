//! Convex-body oracles.
//!
//! A [`ConvexBody`] is a centrally symmetric compact convex set with nonempty
//! interior, accessed through its gauge `‖x‖_C`, its support function
//! `σ_C(d) = ‖d‖_{C°}` and its linear minimization oracle. Closed forms are
//! provided for `ℓ_p` balls and ellipsoids; [`ConvexBody::scaled`] wraps any
//! body in a positive dilation.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{self, dot};
use crate::rng::gaussian_vec;
use crate::{Error, Result};

pub type Vector = Vec<f64>;

/// Default relative tolerance for boundary and normal-cone tests.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Components below this magnitude are zeroed before fractional powers.
const LMO_FLOOR: f64 = 1e-300;

/// Exponent of an `ℓ_p` ball, `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Hölder conjugate `p*` with `1/p + 1/p* = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p.is_finite() && p >= 1.0) => {
                Err(Error::InvalidParameter(format!("lp exponent must lie in [1, inf], got {p}")))
            }
            e => Ok(e),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "infinity" => Ok(Exponent::Infinity),
            t => t
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent {t:?}")))
                .and_then(|p| Exponent::Finite(p).validate()),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let e = match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::Finite(p),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom)?,
        };
        e.validate().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Lp { p: Exponent, r: f64 },
    // Row-major `Q` and `Q⁻¹`.
    Ellipsoid { q: Vec<f64>, q_inv: Vec<f64> },
    Scaled { inner: Box<ConvexBody>, s: f64 },
}

/// A centrally symmetric convex body given by closed-form oracles.
///
/// Serializes as `{"kind":"lp","p":4.0,"r":1.0,"dim":3}`,
/// `{"kind":"ellipsoid","Q":[[..],..]}` or
/// `{"kind":"scaled","inner":{..},"scale":2.0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodySpec", into = "BodySpec")]
pub struct ConvexBody {
    dim: usize,
    kind: Kind,
}

/// Wire format of a [`ConvexBody`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Lp {
        p: Exponent,
        #[serde(default = "one")]
        r: f64,
        dim: usize,
    },
    Ellipsoid {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
    },
    Scaled {
        inner: Box<BodySpec>,
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl TryFrom<BodySpec> for ConvexBody {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Self> {
        match spec {
            BodySpec::Lp { p, r, dim } => ConvexBody::lp_ball(p, r, dim),
            BodySpec::Ellipsoid { q } => ConvexBody::ellipsoid(&q),
            BodySpec::Scaled { inner, scale } => ConvexBody::try_from(*inner)?.scaled(scale),
        }
    }
}

impl From<ConvexBody> for BodySpec {
    fn from(body: ConvexBody) -> Self {
        let dim = body.dim;
        match body.kind {
            Kind::Lp { p, r } => BodySpec::Lp { p, r, dim },
            Kind::Ellipsoid { q, .. } => BodySpec::Ellipsoid { q: q.chunks(dim).map(<[f64]>::to_vec).collect() },
            Kind::Scaled { inner, s } => BodySpec::Scaled { inner: Box::new((*inner).into()), scale: s },
        }
    }
}

/// Witness of the support value: `⟨witness, d⟩ = primal_value ≤ dual_value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPair {
    pub primal_value: f64,
    pub dual_value: f64,
    pub witness: Vector,
}

impl ConvexBody {
    /// `ℓ_p` ball of radius `r` for finite `p ≥ 1`.
    pub fn lp(p: f64, r: f64, dim: usize) -> Result<Self> {
        Self::lp_ball(Exponent::Finite(p), r, dim)
    }

    /// `ℓ_∞` ball of radius `r`.
    pub fn linf(r: f64, dim: usize) -> Result<Self> {
        Self::lp_ball(Exponent::Infinity, r, dim)
    }

    pub fn lp_ball(p: Exponent, r: f64, dim: usize) -> Result<Self> {
        let p = p.validate()?;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(ConvexBody { dim, kind: Kind::Lp { p, r } })
    }

    /// `{x : xᵀQx ≤ 1}` for symmetric positive-definite `Q` (rows given).
    pub fn ellipsoid(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("Q must be a nonempty square matrix".into()));
        }
        let q: Vec<f64> = rows.iter().flatten().copied().collect();
        if !linalg::all_finite(&q) {
            return Err(Error::NonFinite);
        }
        let m = DMatrix::from_row_slice(dim, dim, &q);
        let asym = (&m - m.transpose()).abs().max();
        if asym > 1e-12 * m.abs().max().max(1.0) {
            return Err(Error::InvalidParameter("Q must be symmetric".into()));
        }
        let min_eig = m.clone().symmetric_eigen().eigenvalues.min();
        if min_eig <= 0.0 {
            return Err(Error::InvalidParameter(format!("Q must be positive definite, min eigenvalue {min_eig}")));
        }
        let inv = m.cholesky().ok_or_else(|| Error::InvalidParameter("Q is not positive definite".into()))?.inverse();
        let inv = (&inv + inv.transpose()) * 0.5;
        let q_inv = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| inv[(i, j)]).collect();
        Ok(ConvexBody { dim, kind: Kind::Ellipsoid { q, q_inv } })
    }

    /// Dilation `s·C` for `s > 0`.
    pub fn scaled(self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {s}")));
        }
        Ok(ConvexBody { dim: self.dim, kind: Kind::Scaled { inner: Box::new(self), s } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `ℓ_p` exponent and radius, if this is an `ℓ_p` ball.
    pub fn lp_params(&self) -> Option<(Exponent, f64)> {
        match self.kind {
            Kind::Lp { p, r } => Some((p, r)),
            _ => None,
        }
    }

    /// Strictly convex bodies have a differentiable support function off 0.
    pub fn is_strictly_convex(&self) -> bool {
        match &self.kind {
            Kind::Lp { p: Exponent::Finite(p), .. } => *p > 1.0,
            Kind::Lp { .. } => false,
            Kind::Ellipsoid { .. } => true,
            Kind::Scaled { inner, .. } => inner.is_strictly_convex(),
        }
    }

    /// The polar body `C° = {d : ⟨x, d⟩ ≤ 1 ∀x ∈ C}`.
    pub fn polar(&self) -> ConvexBody {
        let kind = match &self.kind {
            Kind::Lp { p, r } => Kind::Lp { p: p.conjugate(), r: 1.0 / r },
            Kind::Ellipsoid { q, q_inv } => Kind::Ellipsoid { q: q_inv.clone(), q_inv: q.clone() },
            Kind::Scaled { inner, s } => Kind::Scaled { inner: Box::new(inner.polar()), s: 1.0 / s },
        };
        ConvexBody { dim: self.dim, kind }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !linalg::all_finite(x) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Gauge (Minkowski functional) `‖x‖_C = inf{λ ≥ 0 : x ∈ λC}`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.gauge_unchecked(x))
    }

    /// Support function `σ_C(d) = sup_{v ∈ C} ⟨v, d⟩`.
    pub fn support(&self, d: &[f64]) -> Result<f64> {
        self.check(d)?;
        Ok(self.support_unchecked(d))
    }

    pub(crate) fn gauge_unchecked(&self, x: &[f64]) -> f64 {
        match &self.kind {
            Kind::Lp { p, r } => pnorm(x, *p) / r,
            Kind::Ellipsoid { q, .. } => quad_form(q, x).max(0.0).sqrt(),
            Kind::Scaled { inner, s } => inner.gauge_unchecked(x) / s,
        }
    }

    pub(crate) fn support_unchecked(&self, d: &[f64]) -> f64 {
        match &self.kind {
            Kind::Lp { p, r } => r * pnorm(d, p.conjugate()),
            Kind::Ellipsoid { q_inv, .. } => quad_form(q_inv, d).max(0.0).sqrt(),
            Kind::Scaled { inner, s } => s * inner.support_unchecked(d),
        }
    }

    /// A maximizer of `⟨d, ·⟩` over `C`, on the boundary.
    ///
    /// For `ℓ_1` ties go to the lowest index among the maximal `|d_i|`; for
    /// `ℓ_∞` zero components map to 0.
    pub fn lmo(&self, d: &[f64]) -> Result<Vector> {
        self.check(d)?;
        if linalg::max_abs(d) == 0.0 {
            return Err(Error::AmbiguousLmo);
        }
        Ok(self.lmo_unchecked(d))
    }

    pub(crate) fn lmo_unchecked(&self, d: &[f64]) -> Vector {
        match &self.kind {
            Kind::Lp { p, r } => lp_lmo(d, *p, *r),
            Kind::Ellipsoid { q_inv, .. } => {
                let w = mat_vec(q_inv, d);
                let s = dot(&w, d).max(f64::MIN_POSITIVE).sqrt();
                linalg::scale(&w, 1.0 / s)
            }
            Kind::Scaled { inner, s } => linalg::scale(&inner.lmo_unchecked(d), *s),
        }
    }

    /// `∇σ_C(d)`, which equals the unique LMO output on strictly convex bodies.
    pub fn support_gradient(&self, d: &[f64]) -> Result<Vector> {
        if !self.is_strictly_convex() {
            return Err(Error::NotDifferentiable(self.to_string()));
        }
        self.lmo(d)
    }

    /// Whether `d ∈ N_C(x)` for a boundary point `x`, via
    /// `σ_C(d) − ⟨d, x⟩ ≤ tol·σ_C(d)`.
    pub fn in_normal_cone(&self, x: &[f64], d: &[f64], tol: f64) -> Result<bool> {
        self.check_boundary(x, tol)?;
        self.check(d)?;
        if linalg::max_abs(d) == 0.0 {
            return Err(Error::InvalidParameter("normal direction must be nonzero".into()));
        }
        let s = self.support_unchecked(d);
        Ok(s - dot(d, x) <= tol * s)
    }

    /// Errors unless `|‖x‖_C − 1| ≤ tol`.
    pub fn check_boundary(&self, x: &[f64], tol: f64) -> Result<()> {
        let g = self.gauge(x)?;
        if (g - 1.0).abs() > tol {
            return Err(Error::NotOnBoundary { gauge: g, tol });
        }
        Ok(())
    }

    /// Support value of `d` with its LMO witness.
    pub fn dual_pair(&self, d: &[f64]) -> Result<DualPair> {
        let witness = self.lmo(d)?;
        Ok(DualPair { primal_value: dot(&witness, d), dual_value: self.support_unchecked(d), witness })
    }

    /// Radial projection `x / ‖x‖_C` onto the boundary.
    pub fn radial(&self, x: &[f64]) -> Result<Vector> {
        let g = self.gauge(x)?;
        if g == 0.0 {
            return Err(Error::InvalidParameter("cannot project the origin".into()));
        }
        Ok(linalg::scale(x, 1.0 / g))
    }

    /// Half-widths `σ_C(e_i)` of the axis-aligned bounding box.
    pub fn half_widths(&self) -> Vector {
        (0..self.dim).map(|i| self.support_unchecked(&linalg::basis(self.dim, i))).collect()
    }

    /// Largest Euclidean norm of a point of `C`; the Euclidean diameter is
    /// twice this.
    pub fn euclidean_radius(&self) -> f64 {
        match &self.kind {
            Kind::Lp { p: Exponent::Infinity, r } => r * (self.dim as f64).sqrt(),
            Kind::Lp { p: Exponent::Finite(p), r } => r * (self.dim as f64).powf((0.5 - 1.0 / p).max(0.0)),
            Kind::Ellipsoid { q, .. } => {
                let m = DMatrix::from_row_slice(self.dim, self.dim, q);
                1.0 / m.symmetric_eigen().eigenvalues.min().sqrt()
            }
            Kind::Scaled { inner, s } => s * inner.euclidean_radius(),
        }
    }

    /// Euclidean projection of `b` onto `C`.
    ///
    /// Points inside are returned unchanged. Otherwise the KKT multiplier is
    /// found by bisection, so the result is accurate to a few ulps.
    pub fn project(&self, b: &[f64]) -> Result<Vector> {
        self.check(b)?;
        if self.gauge_unchecked(b) <= 1.0 {
            return Ok(b.to_vec());
        }
        Ok(match &self.kind {
            Kind::Lp { p, r } => {
                let y = linalg::scale(b, 1.0 / r);
                linalg::scale(&project_unit_lp(&y, *p), *r)
            }
            Kind::Ellipsoid { q, .. } => {
                let eig = DMatrix::from_row_slice(self.dim, self.dim, q).symmetric_eigen();
                let c = eig.eigenvectors.transpose() * nalgebra::DVector::from_column_slice(b);
                let lam = &eig.eigenvalues;
                let x_of = |mu: f64| -> nalgebra::DVector<f64> {
                    let mut v = c.clone();
                    for i in 0..v.len() {
                        v[i] /= 1.0 + mu * lam[i];
                    }
                    v
                };
                let excess = |mu: f64| {
                    let v = x_of(mu);
                    (0..v.len()).map(|i| lam[i] * v[i] * v[i]).sum::<f64>() - 1.0
                };
                let mu = bisect_decreasing(excess);
                let x = &eig.eigenvectors * x_of(mu);
                x.iter().copied().collect()
            }
            Kind::Scaled { inner, s } => linalg::scale(&inner.project(&linalg::scale(b, 1.0 / s))?, *s),
        })
    }

    /// Boundary point `lmo(g)` for a Gaussian direction `g`.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        loop {
            let g = gaussian_vec(rng, self.dim);
            if linalg::max_abs(&g) > 0.0 {
                return self.lmo_unchecked(&g);
            }
        }
    }

    /// Boundary point `g / ‖g‖_C` for a Gaussian direction `g`.
    pub fn sample_sphere<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        loop {
            let g = gaussian_vec(rng, self.dim);
            let n = self.gauge_unchecked(&g);
            if n > 0.0 {
                return linalg::scale(&g, 1.0 / n);
            }
        }
    }

    /// Uniform point of `C` by rejection from the bounding box.
    ///
    /// Above dimension 6 the acceptance rate collapses, so a radial sample
    /// `u^{1/m}·g/‖g‖_C` is returned instead (uniform only for ellipsoids).
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        if self.dim <= 6 {
            let h = self.half_widths();
            for _ in 0..10_000 {
                let x: Vector = h.iter().map(|&w| w * (2.0 * rng.random::<f64>() - 1.0)).collect();
                if self.gauge_unchecked(&x) <= 1.0 {
                    return x;
                }
            }
        }
        let u: f64 = rng.random::<f64>().powf(1.0 / self.dim as f64);
        linalg::scale(&self.sample_sphere(rng), u)
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Lp { p, r } => write!(f, "lp(p={p}, r={r}, dim={})", self.dim),
            Kind::Ellipsoid { .. } => write!(f, "ellipsoid(dim={})", self.dim),
            Kind::Scaled { inner, s } => write!(f, "{s}*{inner}"),
        }
    }
}

/// `‖x‖_p`, rescaled by the largest entry to avoid overflow.
pub fn pnorm(x: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => linalg::max_abs(x),
        Exponent::Finite(p) if p == 1.0 => x.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(p) if p == 2.0 => {
            let m = linalg::max_abs(x);
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
        }
        Exponent::Finite(p) => {
            let m = linalg::max_abs(x);
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

/// Root of a decreasing function on `[0, ∞)` with `g(0) > 0`.
fn bisect_decreasing<G: Fn(f64) -> f64>(g: G) -> f64 {
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Projection of `y` (outside) onto the unit `ℓ_p` ball. Coordinates solve
/// `x + μ x^{p−1} = |y_i|`; `μ` makes `‖x‖_p = 1`.
fn project_unit_lp(y: &[f64], p: Exponent) -> Vector {
    let shrink = |mu: f64, a: f64| -> f64 {
        match p {
            Exponent::Infinity => a.min(1.0),
            Exponent::Finite(p) if p == 1.0 => (a - mu).max(0.0),
            Exponent::Finite(p) => {
                let (mut lo, mut hi) = (0.0f64, a);
                loop {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        return lo;
                    }
                    if mid + mu * mid.powf(p - 1.0) > a {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
        }
    };
    if p == Exponent::Infinity {
        return y.iter().map(|v| v.signum() * shrink(0.0, v.abs())).collect();
    }
    let norm_at = |mu: f64| {
        let x: Vector = y.iter().map(|v| shrink(mu, v.abs())).collect();
        pnorm(&x, p) - 1.0
    };
    let mu = bisect_decreasing(norm_at);
    y.iter().map(|v| v.signum() * shrink(mu, v.abs())).collect()
}

fn lp_lmo(d: &[f64], p: Exponent, r: f64) -> Vector {
    match p {
        Exponent::Infinity => d.iter().map(|&v| if v.abs() < LMO_FLOOR { 0.0 } else { r * v.signum() }).collect(),
        Exponent::Finite(p) if p == 1.0 => {
            let mut best = 0;
            for (i, v) in d.iter().enumerate() {
                if v.abs() > d[best].abs() {
                    best = i;
                }
            }
            let mut out = vec![0.0; d.len()];
            out[best] = r * d[best].signum();
            out
        }
        Exponent::Finite(p) => {
            let ps = p / (p - 1.0);
            let e = ps - 1.0;
            let m = linalg::max_abs(d);
            let a: Vec<f64> = d.iter().map(|&v| if v.abs() < LMO_FLOOR { 0.0 } else { v.abs() / m }).collect();
            let norm = a.iter().map(|v| v.powf(ps)).sum::<f64>().powf(1.0 / ps);
            let denom = norm.powf(e);
            d.iter().zip(&a).map(|(&s, &v)| if v == 0.0 { 0.0 } else { r * s.signum() * v.powf(e) / denom }).collect()
        }
    }
}

fn quad_form(q: &[f64], x: &[f64]) -> f64 {
    let m = x.len();
    (0..m).map(|i| x[i] * dot(&q[i * m..(i + 1) * m], x)).sum()
}

fn mat_vec(q: &[f64], x: &[f64]) -> Vector {
    let m = x.len();
    (0..m).map(|i| dot(&q[i * m..(i + 1) * m], x)).collect()
}
