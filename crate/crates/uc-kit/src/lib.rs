//! Executable uniform convexity.
//!
//! `uc-kit` works with centrally symmetric convex bodies through three
//! oracles: the gauge `‖x‖_C`, the support function `σ_C(d)` and the linear
//! minimization oracle. On top of those it provides:
//!
//! * [`moduli`]: estimators for the moduli of convexity, smoothness and
//!   rotundity, plus the global and local Lindenstrauss duality checks;
//! * [`duality`]: closed-form constant transfers between the equivalent
//!   characterizations of uniform convexity, a discrete Legendre transform and
//!   functional UC/US checkers;
//! * [`certify`]: randomized scans for the scaling inequalities and the
//!   mid-convex inclusion;
//! * [`solvers`]: Frank-Wolfe with three step rules, primal-averaging
//!   Frank-Wolfe and convergence-rate fitting;
//! * [`rademacher`]: Monte-Carlo Rademacher constants of linear classes.
//!
//! ```
//! use uc_kit::geometry::ConvexBody;
//!
//! let ball = ConvexBody::lp(4.0, 1.0, 2)?;
//! let v = ball.lmo(&[1.0, 1.0])?;
//! assert!((v[0] - 2f64.powf(-0.25)).abs() < 1e-12);
//! assert!((ball.gauge(&v)? - 1.0).abs() < 1e-12);
//! # Ok::<(), uc_kit::Error>(())
//! ```

pub mod certify;
pub mod duality;
mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod rademacher;
pub mod regress;
pub mod rng;
mod search;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, Exponent, Vector};
