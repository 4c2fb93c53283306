//! Randomized violation scans for the geometric characterizations.
//!
//! Each check draws seeded samples in parallel chunks, evaluates one
//! inequality `lhs ≤ rhs` per sample and reports the number of violations,
//! the worst deficit `lhs − rhs` and the worst ratio `lhs / rhs`. A sample
//! counts as a violation only when its deficit exceeds `1e−9·(1 + |rhs|)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexBody, Vector};
use crate::linalg::{self, dot};
use crate::moduli::Anchor;
use crate::rng::{gaussian_vec, log_uniform, stream, Stream};
use crate::{Error, Result};

/// Default relative safety margin applied to transferred constants.
pub const SAFETY_MARGIN: f64 = 0.1;

const CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    pub alpha: f64,
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub check: String,
    pub body: String,
    pub params: CheckParams,
    pub samples: usize,
    pub violations: usize,
    pub max_deficit: f64,
    pub max_ratio: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }
}

/// One evaluated inequality `lhs ≤ rhs`, with an optional ratio override.
struct Sample {
    lhs: f64,
    rhs: f64,
    ratio: Option<f64>,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    violations: usize,
    max_deficit: f64,
    max_ratio: f64,
}

impl Tally {
    fn add(&mut self, s: &Sample) {
        let deficit = s.lhs - s.rhs;
        if deficit.is_nan() || deficit > 1e-9 * (1.0 + s.rhs.abs()) {
            self.violations += 1;
        }
        self.max_deficit = self.max_deficit.max(if deficit.is_nan() { f64::INFINITY } else { deficit });
        let ratio = s.ratio.unwrap_or_else(|| {
            if s.rhs > 1e-12 {
                s.lhs / s.rhs
            } else if deficit > 1e-9 * (1.0 + s.rhs.abs()) {
                f64::INFINITY
            } else {
                // Both sides at rounding level: no information.
                0.0
            }
        });
        self.max_ratio = self.max_ratio.max(ratio);
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            violations: self.violations + o.violations,
            max_deficit: self.max_deficit.max(o.max_deficit),
            max_ratio: self.max_ratio.max(o.max_ratio),
        }
    }
}

/// Evaluate `samples` draws; chunk `i` uses stream `(seed, i)` so the result
/// does not depend on the thread count.
fn scan<F>(samples: usize, seed: u64, draw: F) -> Tally
where
    F: Fn(&mut Stream) -> Vec<Sample> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c as u64);
            let mut t = Tally::default();
            for _ in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                for s in draw(&mut rng) {
                    t.add(&s);
                }
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

fn report(
    check: &str,
    body: &ConvexBody,
    alpha: f64,
    exponent: f64,
    samples: usize,
    seed: u64,
    t: Tally,
) -> CertifyReport {
    CertifyReport {
        check: check.into(),
        body: body.to_string(),
        params: CheckParams { alpha, exponent },
        samples,
        violations: t.violations,
        max_deficit: t.max_deficit,
        max_ratio: t.max_ratio,
        seed,
        margin: None,
        note: None,
    }
}

fn validate(alpha: f64, p: f64, allow_zero: bool) -> Result<()> {
    let alpha_ok = if allow_zero { alpha >= 0.0 } else { alpha > 0.0 };
    if !(alpha_ok && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

/// A point of `C`: boundary, interior, or a boundary point near `near`.
fn point_in(body: &ConvexBody, rng: &mut Stream, near: Option<&[f64]>) -> Vector {
    match (rng.random_range(0..4u8), near) {
        (0, _) => body.sample_interior(rng),
        (3, Some(a)) => perturb_on_boundary(body, rng, a),
        _ => body.sample_boundary(rng),
    }
}

/// Radial projection of `a + s·g` with `s` log-uniform in `[1e−4, 1]`,
/// occasionally pulled inward.
fn perturb_on_boundary(body: &ConvexBody, rng: &mut Stream, a: &[f64]) -> Vector {
    let g = gaussian_vec(rng, a.len());
    let n = body.gauge_unchecked(&g).max(f64::MIN_POSITIVE);
    let s = log_uniform(rng, 1e-4, 1.0);
    let z = linalg::axpy(a, s / n, &g);
    let gz = body.gauge_unchecked(&z);
    if gz == 0.0 {
        return z;
    }
    let shrink = if rng.random_ratio(1, 4) { 1.0 - log_uniform(rng, 1e-6, 0.5) } else { 1.0 };
    linalg::scale(&z, shrink / gz)
}

/// `(x+y)/2 + α‖x−y‖^p z ∈ C` for sampled `x, y ∈ C` and unit `z`.
///
/// Each draw tests a random `z` and the aligned `z = m/‖m‖_C`, which
/// realizes the worst case. The reported ratio is `α‖x−y‖^p / (1 − ‖m‖_C)`.
pub fn check_midpoint_inclusion(
    body: &ConvexBody,
    alpha: f64,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<CertifyReport> {
    validate(alpha, p, true)?;
    let t = scan(samples, seed, |rng| {
        let x = point_in(body, rng, None);
        let y = if rng.random::<bool>() { perturb_on_boundary(body, rng, &x) } else { point_in(body, rng, None) };
        let m = linalg::lerp(&x, &y, 0.5);
        let s = alpha * body.gauge_unchecked(&linalg::sub(&x, &y)).powf(p);
        let gm = body.gauge_unchecked(&m);
        let ratio = if s == 0.0 { 0.0 } else { s / (1.0 - gm).max(0.0) };
        let z = body.sample_sphere(rng);
        let mut out =
            vec![Sample { lhs: body.gauge_unchecked(&linalg::axpy(&m, s, &z)), rhs: 1.0, ratio: Some(ratio) }];
        if gm > 0.0 {
            let aligned = linalg::scale(&m, 1.0 / gm);
            out.push(Sample {
                lhs: body.gauge_unchecked(&linalg::axpy(&m, s, &aligned)),
                rhs: 1.0,
                ratio: Some(ratio),
            });
        }
        out
    });
    Ok(report("midpoint_inclusion", body, alpha, p, samples, seed, t))
}

/// `⟨d, y−x⟩ ≥ α‖d‖_{C°}‖y−x‖_C^p` with `y = lmo(d)` and `x ∈ C`.
pub fn check_global_scaling(body: &ConvexBody, alpha: f64, p: f64, samples: usize, seed: u64) -> Result<CertifyReport> {
    validate(alpha, p, false)?;
    let polar = body.polar();
    let t = scan(samples, seed, |rng| {
        let d = linalg::scale(&polar.sample_sphere(rng), log_uniform(rng, 1e-2, 1e2));
        let y = body.lmo_unchecked(&d);
        let x = point_in(body, rng, Some(&y));
        let diff = linalg::sub(&y, &x);
        vec![Sample {
            lhs: alpha * body.support_unchecked(&d) * body.gauge_unchecked(&diff).powf(p),
            rhs: dot(&d, &diff),
            ratio: None,
        }]
    });
    Ok(report("global_scaling", body, alpha, p, samples, seed, t))
}

/// `⟨d, x* − x⟩ ≥ α‖x* − x‖_C^p` for `x ∈ C`, after validating the anchor.
///
/// Half of the draws are boundary points near `x*`, where flat directions
/// show up.
pub fn check_local_scaling(
    body: &ConvexBody,
    xstar: &[f64],
    d: &[f64],
    alpha: f64,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<CertifyReport> {
    validate(alpha, p, false)?;
    let anchor = Anchor { xstar: xstar.to_vec(), d: d.to_vec() };
    anchor.validate(body)?;
    let t = scan(samples, seed, |rng| {
        let x = if rng.random::<bool>() { perturb_on_boundary(body, rng, xstar) } else { point_in(body, rng, None) };
        let diff = linalg::sub(xstar, &x);
        vec![Sample { lhs: alpha * body.gauge_unchecked(&diff).powf(p), rhs: dot(d, &diff), ratio: None }]
    });
    let mut r = report("local_scaling", body, alpha, p, samples, seed, t);
    if !body.is_strictly_convex() {
        r.note = Some("body is not strictly convex; local scan run without that hypothesis".into());
    }
    Ok(r)
}

/// `‖v_1 − v_2‖_C ≤ [2α(‖d_1‖_* + ‖d_2‖_*)]^{−1/(p−1)} ‖d_1 − d_2‖_*^{1/(p−1)}`
/// for `v_i = lmo(d_i)`, with `‖·‖_*` the polar gauge.
pub fn check_lmo_holder(body: &ConvexBody, alpha: f64, p: f64, pairs: usize, seed: u64) -> Result<CertifyReport> {
    validate(alpha, p, false)?;
    let polar = body.polar();
    let e = 1.0 / (p - 1.0);
    let t = scan(pairs, seed, |rng| {
        let d1 = linalg::scale(&polar.sample_sphere(rng), log_uniform(rng, 1e-2, 1e2));
        let d2 = if rng.random::<bool>() {
            let g = gaussian_vec(rng, d1.len());
            let s = log_uniform(rng, 1e-5, 1.0) * body.support_unchecked(&d1)
                / polar.gauge_unchecked(&g).max(f64::MIN_POSITIVE);
            linalg::axpy(&d1, s, &g)
        } else {
            linalg::scale(&polar.sample_sphere(rng), log_uniform(rng, 1e-2, 1e2))
        };
        let (n1, n2) = (body.support_unchecked(&d1), body.support_unchecked(&d2));
        let lhs = body.gauge_unchecked(&linalg::sub(&body.lmo_unchecked(&d1), &body.lmo_unchecked(&d2)));
        let rhs = (2.0 * alpha * (n1 + n2)).powf(-e) * body.support_unchecked(&linalg::sub(&d1, &d2)).powf(e);
        vec![Sample { lhs, rhs, ratio: None }]
    });
    Ok(report("lmo_holder", body, alpha, p, pairs, seed, t))
}

/// `‖∇σ_C(d_1) − ∇σ_C(d_2)‖_C ≤ c‖d_1 − d_2‖_{C°}^{q−1}` on the polar unit
/// sphere. The reported exponent is `q − 1`.
pub fn check_support_holder_sphere(
    body: &ConvexBody,
    c: f64,
    q: f64,
    pairs: usize,
    seed: u64,
) -> Result<CertifyReport> {
    if !body.is_strictly_convex() {
        return Err(Error::NotDifferentiable(body.to_string()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::InvalidParameter(format!("q must lie in (1, 2], got {q}")));
    }
    let polar = body.polar();
    let t = scan(pairs, seed, |rng| {
        let d1 = polar.sample_sphere(rng);
        let d2 = if rng.random::<bool>() {
            let g = gaussian_vec(rng, d1.len());
            let z =
                linalg::axpy(&d1, log_uniform(rng, 1e-5, 1.0) / polar.gauge_unchecked(&g).max(f64::MIN_POSITIVE), &g);
            let n = polar.gauge_unchecked(&z);
            linalg::scale(&z, 1.0 / n)
        } else {
            polar.sample_sphere(rng)
        };
        let lhs = body.gauge_unchecked(&linalg::sub(&body.lmo_unchecked(&d1), &body.lmo_unchecked(&d2)));
        let rhs = c * polar.gauge_unchecked(&linalg::sub(&d1, &d2)).powf(q - 1.0);
        vec![Sample { lhs, rhs, ratio: None }]
    });
    Ok(report("support_holder_sphere", body, c, q - 1.0, pairs, seed, t))
}
