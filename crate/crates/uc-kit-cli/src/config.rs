//! Experiment configuration: JSON on disk, overridable from the command line.
//!
//! Every struct rejects unknown fields. Optional sections are filled with
//! their defaults before a run, and the filled config is what the manifest
//! echoes, so a manifest config reruns the same experiment.

use std::path::{Path, PathBuf};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use uc_kit::geometry::{BodySpec, ConvexBody, Exponent};
use uc_kit::moduli::{default_eps_grid, default_tau_grid, Budget};
use uc_kit::rademacher::Distribution;
use uc_kit::solvers::{ObjectiveSpec, StepRule};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Certify,
    Moduli,
    Solve,
    Rademacher,
    Bench,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::Moduli => "moduli",
            Command::Solve => "solve",
            Command::Rademacher => "rademacher",
            Command::Bench => "bench",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plots: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<ModuliParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rademacher: Option<RademacherParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchParams>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// A body as a shorthand string or a [`BodySpec`] object.
///
/// Shorthand: `lp:<p|inf>:<r>:<dim>` or `ell:<path to Q.json>`.
#[derive(Clone, Debug, PartialEq)]
pub enum BodyArg {
    Shorthand(String),
    Spec(BodySpec),
}

impl Serialize for BodyArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BodyArg::Shorthand(t) => s.serialize_str(t),
            BodyArg::Spec(spec) => spec.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for BodyArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(BodyArg::Shorthand(s)),
            v => BodySpec::deserialize(v).map(BodyArg::Spec).map_err(D::Error::custom),
        }
    }
}

impl BodyArg {
    pub fn build(&self) -> Result<ConvexBody, CliError> {
        match self {
            BodyArg::Spec(spec) => Ok(ConvexBody::try_from(spec.clone())?),
            BodyArg::Shorthand(s) => parse_shorthand(s),
        }
    }
}

fn parse_shorthand(s: &str) -> Result<ConvexBody, CliError> {
    let bad =
        |why: &str| CliError::Validation(format!("body {s:?}: {why}; expected lp:<p|inf>:<r>:<dim> or ell:<path>"));
    if let Some(path) = s.strip_prefix("ell:") {
        let text = std::fs::read_to_string(path).map_err(|e| bad(&format!("cannot read {path}: {e}")))?;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum QFile {
            Bare(Vec<Vec<f64>>),
            Wrapped {
                #[serde(rename = "Q")]
                q: Vec<Vec<f64>>,
            },
        }
        let q = match serde_json::from_str::<QFile>(&text).map_err(|e| bad(&e.to_string()))? {
            QFile::Bare(q) | QFile::Wrapped { q } => q,
        };
        return Ok(ConvexBody::ellipsoid(&q)?);
    }
    let parts: Vec<&str> = s.split(':').collect();
    let [kind, p, r, dim] = parts[..] else {
        return Err(bad("wrong number of fields"));
    };
    if kind != "lp" {
        return Err(bad("unknown body kind"));
    }
    let p: Exponent = p.parse()?;
    let r: f64 = r.parse().map_err(|_| bad("radius is not a number"))?;
    let dim: usize = dim.parse().map_err(|_| bad("dimension is not a positive integer"))?;
    Ok(ConvexBody::lp_ball(p, r, dim)?)
}

/// A constant given as a number or as the keyword `"auto"`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum AlphaArg {
    #[default]
    Auto,
    Value(f64),
}

impl Serialize for AlphaArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AlphaArg::Auto => s.serialize_str("auto"),
            AlphaArg::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) => Ok(AlphaArg::Value(n.as_f64().unwrap_or(f64::NAN))),
            v => Err(D::Error::custom(format!("expected a number or \"auto\", got {v}"))),
        }
    }
}

impl std::str::FromStr for AlphaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(AlphaArg::Auto);
        }
        s.parse::<f64>().map(AlphaArg::Value).map_err(|_| format!("expected a number or \"auto\", got {s:?}"))
    }
}

fn default_item() -> String {
    "b".into()
}

fn default_samples() -> usize {
    100_000
}

fn default_margin() -> f64 {
    uc_kit::certify::SAFETY_MARGIN
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyParams {
    /// `a`, `b`, `d`, `e`, `f`, `lmo` or `2b`.
    #[serde(default = "default_item")]
    pub item: String,
    #[serde(default)]
    pub alpha: AlphaArg,
    /// Required with a numeric `alpha`; derived otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Fraction removed from an automatic constant.
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default = "default_eps_grid")]
    pub grid: Vec<f64>,
    /// Boundary point for the local item `2b`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            item: default_item(),
            alpha: AlphaArg::Auto,
            exponent: None,
            samples: default_samples(),
            margin: default_margin(),
            budget: Budget::default(),
            grid: default_eps_grid(),
            anchor: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    #[default]
    Delta,
    Rho,
    LocalRho,
    Nu,
}

impl std::str::FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown modulus {s:?}"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliParams {
    #[serde(default)]
    pub kind: CurveKind,
    /// Defaults to 50 points on [0.05, 2] for δ and ν, 20 log-spaced points
    /// on [0.01, 1] for ρ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(default)]
    pub budget: Budget,
    /// Boundary point for the local moduli.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
}

impl ModuliParams {
    pub fn grid_or_default(&self) -> Vec<f64> {
        self.grid.clone().unwrap_or_else(|| match self.kind {
            CurveKind::Delta | CurveKind::Nu => default_eps_grid(),
            CurveKind::Rho | CurveKind::LocalRho => default_tau_grid(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Fw,
    #[default]
    Pafw,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown algorithm {s:?}"))
    }
}

fn default_rule() -> StepRule {
    StepRule::Agnostic
}

fn default_max_iter() -> usize {
    10_000
}

fn default_burn_in() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSpec>,
    #[serde(default)]
    pub algorithm: Algorithm,
    /// Step rule of vanilla Frank-Wolfe; ignored by PAFW.
    #[serde(default = "default_rule")]
    pub rule: StepRule,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub tol_gap: f64,
    /// Leading fraction of iterations left out of the rate fit.
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    /// Explicit `[first, last]` iterations of the fit; overrides `burn_in`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<(usize, usize)>,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            objective: None,
            algorithm: Algorithm::Pafw,
            rule: default_rule(),
            max_iter: default_max_iter(),
            tol_gap: 0.0,
            burn_in: default_burn_in(),
            fit_window: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

/// Data distribution plus its polar-gauge bound `D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    SphereUniformInPolarGauge {
        #[serde(default = "one")]
        d_bound: f64,
    },
    GaussianClipped {
        sigma: f64,
        #[serde(default = "one")]
        d_bound: f64,
    },
    SignedCoordinates {
        #[serde(default = "one")]
        d_bound: f64,
    },
    FixedPoints {
        points: Vec<Vec<f64>>,
        #[serde(default = "one")]
        d_bound: f64,
    },
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::SphereUniformInPolarGauge { d_bound: 1.0 }
    }
}

impl DataSpec {
    pub fn split(&self) -> (Distribution, f64) {
        match self {
            DataSpec::SphereUniformInPolarGauge { d_bound } => (Distribution::SphereUniformInPolarGauge, *d_bound),
            DataSpec::GaussianClipped { sigma, d_bound } => (Distribution::GaussianClipped { sigma: *sigma }, *d_bound),
            DataSpec::SignedCoordinates { d_bound } => (Distribution::SignedCoordinates, *d_bound),
            DataSpec::FixedPoints { points, d_bound } => {
                (Distribution::FixedPoints { points: points.clone() }, *d_bound)
            }
        }
    }
}

/// Uniform convexity parameters for the predicted slope: fitted from the δ
/// curve (`"auto"`) or given as a modulus bound `α ε^p`.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum UcArg {
    #[default]
    Auto,
    Given {
        alpha: f64,
        exponent: f64,
    },
}

impl Serialize for UcArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UcArg::Auto => s.serialize_str("auto"),
            UcArg::Given { alpha, exponent } => {
                serde_json::json!({ "alpha": alpha, "exponent": exponent }).serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for UcArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Given {
            alpha: f64,
            exponent: f64,
        }
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "auto" => Ok(UcArg::Auto),
            v @ serde_json::Value::Object(_) => {
                let g = Given::deserialize(v).map_err(D::Error::custom)?;
                Ok(UcArg::Given { alpha: g.alpha, exponent: g.exponent })
            }
            v => Err(D::Error::custom(format!("expected \"auto\" or {{alpha, exponent}}, got {v}"))),
        }
    }
}

fn default_n_grid() -> Vec<usize> {
    (4..=12).map(|i| 1usize << i).collect()
}

fn default_trials() -> usize {
    2000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RademacherParams {
    #[serde(default)]
    pub data: DataSpec,
    #[serde(default = "default_n_grid")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub uc: UcArg,
    /// Budget of the δ curve behind `uc = "auto"`.
    #[serde(default)]
    pub budget: Budget,
}

impl Default for RademacherParams {
    fn default() -> Self {
        RademacherParams {
            data: DataSpec::default(),
            n_grid: default_n_grid(),
            trials: default_trials(),
            uc: UcArg::Auto,
            budget: Budget::default(),
        }
    }
}

fn default_reps() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchParams {
    /// Oracle calls per timed operation.
    #[serde(default = "default_reps")]
    pub reps: usize,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams { reps: default_reps() }
    }
}
