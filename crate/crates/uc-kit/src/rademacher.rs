//! Rademacher constants of the linear class `{x ↦ ⟨w, x⟩ : ‖w‖_C ≤ 1}`.
//!
//! The supremum over the class reduces to the polar gauge, so
//! `R_n = E ‖(1/n) Σ ε_i x_i‖_{C°}` with `‖·‖_{C°} = σ_C`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{theorem1_chain, theorem1_path};
use crate::geometry::{ConvexBody, Vector};
use crate::io::Table;
use crate::linalg;
use crate::moduli::{Item, UcFit};
use crate::regress::linear_fit;
use crate::rng::{gaussian_vec, log_uniform, stream, Stream};
use crate::{Error, Result};

/// Sign patterns are enumerated exactly up to this many points.
pub const EXACT_CUTOFF: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "snake_case")]
pub enum Distribution {
    /// `D·g/‖g‖_{C°}` for Gaussian `g`.
    SphereUniformInPolarGauge,
    /// `σ·g`, radially clipped to polar gauge `D`.
    GaussianClipped { sigma: f64 },
    /// `±D·e_j / ‖e_j‖_{C°}` with `j` uniform; sparse, so sums grow like
    /// `n^{1/q}` rather than `√n` while `n` is below the dimension.
    SignedCoordinates,
    /// `x_i = points[i mod len]`, scaled so the largest has polar gauge `D`.
    FixedPoints { points: Vec<Vector> },
}

impl Distribution {
    pub fn name(&self) -> &'static str {
        match self {
            Distribution::SphereUniformInPolarGauge => "sphere_uniform_in_polar_gauge",
            Distribution::GaussianClipped { .. } => "gaussian_clipped",
            Distribution::SignedCoordinates => "signed_coordinates",
            Distribution::FixedPoints { .. } => "fixed_points",
        }
    }
}

/// Data with `‖x‖_{C°} ≤ D` almost surely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataModel {
    pub dim: usize,
    #[serde(flatten)]
    pub distribution: Distribution,
    pub d_bound: f64,
}

impl DataModel {
    pub fn new(dim: usize, distribution: Distribution, d_bound: f64) -> Result<Self> {
        if dim == 0 || !(d_bound > 0.0 && d_bound.is_finite()) {
            return Err(Error::InvalidParameter("data model needs dim > 0 and D > 0".into()));
        }
        match &distribution {
            Distribution::GaussianClipped { sigma } if !(*sigma > 0.0) => {
                return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
            }
            Distribution::FixedPoints { points } => {
                if points.is_empty() || points.iter().any(|p| p.len() != dim) {
                    return Err(Error::InvalidParameter(
                        "fixed points must be nonempty and of the data dimension".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(DataModel { dim, distribution, d_bound })
    }

    /// Draw `x_0..x_{n−1}`.
    pub fn sample(&self, body: &ConvexBody, n: usize, rng: &mut Stream) -> Vec<Vector> {
        let d = self.d_bound;
        match &self.distribution {
            Distribution::SphereUniformInPolarGauge => (0..n)
                .map(|_| loop {
                    let g = gaussian_vec(rng, self.dim);
                    let s = body.support_unchecked(&g);
                    if s > 0.0 {
                        break linalg::scale(&g, d / s);
                    }
                })
                .collect(),
            Distribution::GaussianClipped { sigma } => (0..n)
                .map(|_| {
                    let g = linalg::scale(&gaussian_vec(rng, self.dim), *sigma);
                    let s = body.support_unchecked(&g);
                    if s > d {
                        linalg::scale(&g, d / s)
                    } else {
                        g
                    }
                })
                .collect(),
            Distribution::SignedCoordinates => (0..n)
                .map(|_| {
                    let j = rng.random_range(0..self.dim);
                    let e = linalg::basis(self.dim, j);
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    linalg::scale(&e, sign * d / coordinate_support(body, j))
                })
                .collect(),
            Distribution::FixedPoints { points } => {
                let top = points.iter().map(|p| body.support_unchecked(p)).fold(0.0, f64::max);
                let s = if top > 0.0 { d / top } else { 0.0 };
                (0..n).map(|i| linalg::scale(&points[i % points.len()], s)).collect()
            }
        }
    }
}

/// `‖(1/n) Σ ε_i x_i‖_{C°}` for one sign pattern.
fn correlation(body: &ConvexBody, xs: &[Vector], signs: impl Iterator<Item = f64>) -> f64 {
    let mut acc = vec![0.0; body.dim()];
    for (x, e) in xs.iter().zip(signs) {
        for (a, v) in acc.iter_mut().zip(x) {
            *a += e * v;
        }
    }
    body.support_unchecked(&acc) / xs.len() as f64
}

/// [`correlation`] for signed-coordinate data without materializing the
/// `n` dense vectors. Draws in the same order as the dense path.
fn sparse_correlation(body: &ConvexBody, data: &DataModel, n: usize, rng: &mut Stream) -> f64 {
    let picks: Vec<(usize, f64)> = (0..n)
        .map(|_| {
            let j = rng.random_range(0..data.dim);
            (j, if rng.random::<bool>() { 1.0 } else { -1.0 })
        })
        .collect();
    let mut acc = vec![0.0; data.dim];
    for (j, s) in picks {
        let e = if rng.random::<bool>() { 1.0 } else { -1.0 };
        acc[j] += e * (s * data.d_bound / coordinate_support(body, j));
    }
    body.support_unchecked(&acc) / n as f64
}

/// `σ_C(e_j)`, in O(1) for `ℓ_p` balls.
fn coordinate_support(body: &ConvexBody, j: usize) -> f64 {
    match body.lp_params() {
        Some((_, r)) => r,
        None => body.support_unchecked(&linalg::basis(body.dim(), j)),
    }
}

/// `E_ε ‖(1/n) Σ ε_i x_i‖_{C°}` by enumerating all `2^n` sign patterns.
pub fn rademacher_exact(body: &ConvexBody, xs: &[Vector]) -> Result<f64> {
    let n = xs.len();
    if n == 0 || n > EXACT_CUTOFF {
        return Err(Error::InvalidParameter(format!("exact enumeration needs 1 ≤ n ≤ {EXACT_CUTOFF}, got {n}")));
    }
    let total: f64 = (0u32..1 << n)
        .map(|mask| correlation(body, xs, (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })))
        .sum();
    Ok(total / (1u64 << n) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RademacherEstimate {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Monte-Carlo `R_n` with fresh data and signs per trial; trial `t` uses
/// stream `(seed, t)`.
pub fn estimate_rademacher(
    body: &ConvexBody,
    data: &DataModel,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<RademacherEstimate> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter("n and trials must be positive".into()));
    }
    if data.dim != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: data.dim });
    }
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, t as u64);
            if let Distribution::SignedCoordinates = data.distribution {
                return sparse_correlation(body, data, n, &mut rng);
            }
            let xs = data.sample(body, n, &mut rng);
            let signs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            correlation(body, &xs, signs.into_iter())
        })
        .collect();
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var =
        if trials > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64 } else { 0.0 };
    Ok(RademacherEstimate { n, mean, stderr: (var / trials as f64).sqrt(), trials })
}

/// `max ⟨w, v⟩` over `samples` sampled boundary points `w = g/‖g‖_C`; a
/// lower bound on `σ_C(v)`.
pub fn sampled_sup(body: &ConvexBody, v: &[f64], samples: usize, seed: u64) -> f64 {
    let mut rng = stream(seed, 0);
    (0..samples).map(|_| linalg::dot(&body.sample_sphere(&mut rng), v)).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RademacherBoundReport {
    pub body: String,
    pub distribution: String,
    pub d_bound: f64,
    pub p: f64,
    pub rows: Vec<RademacherEstimate>,
    /// Fitted slope of `log R_n` against `log n`; absent for one grid point.
    pub slope: Option<f64>,
    pub predicted_slope: f64,
    /// Smallest `K` with `R_n ≤ K·D/n^{1/p}` on the grid.
    pub empirical_constant: f64,
    /// `(c′/q)^{1/q}` with `c′` from chaining the listed transfers to the
    /// support-smoothness item.
    pub chained_constant: Option<f64>,
    pub seed: u64,
}

impl RademacherBoundReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "mean", "stderr", "trials", "body", "distribution", "seed"]);
        for r in &self.rows {
            t.push(vec![
                r.n.into(),
                r.mean.into(),
                r.stderr.into(),
                r.trials.into(),
                self.body.as_str().into(),
                self.distribution.as_str().into(),
                self.seed.into(),
            ]);
        }
        t
    }
}

/// Estimate `R_n` over `n_grid`, fit the log-log slope and compare it with
/// `−1/p` for certified parameters. Grid point `i` uses seed `(seed, i)`
/// through [`crate::rng::child_seed`].
pub fn check_rademacher_bound(
    body: &ConvexBody,
    fit: &UcFit,
    data: &DataModel,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<RademacherBoundReport> {
    let params = fit
        .params()
        .ok_or_else(|| Error::NotUniformlyConvex(format!("{body} has no uniform convexity certificate")))?;
    if n_grid.is_empty() {
        return Err(Error::InvalidParameter("n_grid must be nonempty".into()));
    }
    let p = params.p();
    let q = params.q();
    let rows = n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| estimate_rademacher(body, data, n, trials, crate::rng::child_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let slope = if rows.len() >= 2 {
        let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.mean.ln()).collect();
        linear_fit(&x, &y).map(|f| f.slope)
    } else {
        None
    };
    let empirical_constant =
        rows.iter().map(|r| r.mean * (r.n as f64).powf(1.0 / p) / data.d_bound).fold(0.0, f64::max);
    let chained_constant = theorem1_path(params.item, Item::T1e)
        .and_then(|path| theorem1_chain(params, &path).ok())
        .and_then(|chain| chain.last().map(|t| t.out_params.alpha))
        .map(|cp| (cp / q).powf(1.0 / q));
    Ok(RademacherBoundReport {
        body: body.to_string(),
        distribution: data.distribution.name().into(),
        d_bound: data.d_bound,
        p,
        rows,
        slope,
        predicted_slope: -1.0 / p,
        empirical_constant,
        chained_constant,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeInductionReport {
    pub norm: String,
    pub q: f64,
    pub cprime: f64,
    pub sequences: usize,
    pub violations: usize,
    /// Largest `E‖Σ ε_i x_i‖^q / ((c′/q) Σ ‖x_i‖^q)`.
    pub max_ratio: f64,
    /// Largest `|lhs − rhs| / rhs`, which is 0 exactly in the equality case.
    pub max_relative_gap: f64,
    pub exact: bool,
    pub seed: u64,
}

/// Sequence lengths and Monte-Carlo settings for [`check_type_induction`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub count: usize,
    pub max_len: usize,
    pub mc_trials: usize,
}

/// `E‖Σ ε_i x_i‖^q ≤ (c′/q) Σ ‖x_i‖^q` where `‖·‖` is the gauge of `norm`.
///
/// Sequence `j` has length `1 + j mod max_len` and Gaussian entries with
/// log-uniform scales. Lengths up to [`EXACT_CUTOFF`] are enumerated.
pub fn check_type_induction(
    norm: &ConvexBody,
    q: f64,
    cprime: f64,
    spec: SequenceSpec,
    seed: u64,
) -> Result<TypeInductionReport> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::InvalidParameter(format!("q must lie in (1, 2], got {q}")));
    }
    if !(cprime > 0.0 && cprime.is_finite()) || spec.max_len == 0 {
        return Err(Error::InvalidParameter("c′ must be positive and max_len nonzero".into()));
    }
    let rows: Vec<(f64, f64, bool)> = (0..spec.count)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(seed, j as u64);
            let n = 1 + j % spec.max_len;
            let xs: Vec<Vector> = (0..n)
                .map(|_| linalg::scale(&gaussian_vec(&mut rng, norm.dim()), log_uniform(&mut rng, 0.1, 10.0)))
                .collect();
            let powered = |signs: &mut dyn Iterator<Item = f64>| {
                let mut acc = vec![0.0; norm.dim()];
                for (x, e) in xs.iter().zip(signs) {
                    for (a, v) in acc.iter_mut().zip(x) {
                        *a += e * v;
                    }
                }
                norm.gauge_unchecked(&acc).powf(q)
            };
            let (lhs, exact) = if n <= EXACT_CUTOFF {
                let s: f64 = (0u32..1 << n)
                    .map(|mask| powered(&mut (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })))
                    .sum();
                (s / (1u64 << n) as f64, true)
            } else {
                let s: f64 = (0..spec.mc_trials.max(1))
                    .map(|_| {
                        let signs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
                        powered(&mut signs.into_iter())
                    })
                    .sum();
                (s / spec.mc_trials.max(1) as f64, false)
            };
            let rhs = cprime / q * xs.iter().map(|x| norm.gauge_unchecked(x).powf(q)).sum::<f64>();
            (lhs, rhs, exact)
        })
        .collect();
    let mut report = TypeInductionReport {
        norm: norm.to_string(),
        q,
        cprime,
        sequences: spec.count,
        violations: 0,
        max_ratio: 0.0,
        max_relative_gap: 0.0,
        exact: true,
        seed,
    };
    for (lhs, rhs, exact) in rows {
        if lhs - rhs > 1e-9 * (1.0 + rhs.abs()) || lhs.is_nan() {
            report.violations += 1;
        }
        report.max_ratio = report.max_ratio.max(lhs / rhs);
        report.max_relative_gap = report.max_relative_gap.max((lhs - rhs).abs() / rhs);
        report.exact &= exact;
    }
    Ok(report)
}
