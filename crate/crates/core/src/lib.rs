//! Complex-order B-splines, fractional differintegrals, complex divided
//! differences and Dirichlet averages, together with numerical checks of the
//! identities that connect them.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: gamma function, truncated powers, singular quadrature,
//!   reproducible random streams, grids and analytic test functions.
//! * [`bspline`]: the cardinal complex B-spline in time and frequency domain.
//! * [`fractional`]: fractional integrals and derivatives of complex order.
//! * [`differences`]: complex difference operators and divided differences.
//! * [`dirichlet`]: Dirichlet measures and averages on simplices.
//! * [`weighted`]: splines with general weights and knots (Dirichlet splines).
//! * [`multivariate`]: ridge-type multivariate splines and exponential splines.
//! * [`verify`]: the identity suites behind the `fracspline verify` command.

pub mod bspline;
pub mod classical;
pub mod cli;
pub mod differences;
pub mod dirichlet;
pub mod error;
pub mod fractional;
pub mod multivariate;
pub mod numerics;
pub mod report;
pub mod verify;
pub mod weighted;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use report::VerificationReport;
