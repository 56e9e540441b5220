//! Special functions, quadrature, grids, random streams and test functions.

pub mod gamma;
pub mod grid;
pub mod order;
pub mod quadrature;
pub mod rng;
pub mod sum;
pub mod testfn;

pub use gamma::{binom, gamma, kernel_k, ln_gamma, rgamma, sin_pi, trunc_pow};
pub use grid::{Grid, SampledFunction};
pub use order::{ComplexOrder, FracOrder};
pub use quadrature::{integrate, integrate_singular, QuadOptions};
pub use rng::{seeded_rng, McConfig, McEstimate};
pub use testfn::{ExpPoly, TestFunction};
