//! Exact q-series engine for eta products, multidimensional theta sums, and
//! coefficient-nonnegativity verification.
//!
//! Everything is computed over arbitrary-precision integers; truncation order
//! is tracked explicitly and arithmetic never silently extends it. The main
//! entry points are:
//!
//! - [`series`]: truncated univariate/bivariate series and lazy factor lists
//! - [`products`]: Euler products, eta quotients, Pochhammer brackets,
//!   Gaussian polynomials
//! - [`theta`]: the constrained lattice sums `C_a(z;q)` and their product side
//! - [`saito`]: the eta quotient `S_N(q)` and its case decompositions
//! - [`pcore`]: brute-force partition/hook-length ground truth
//! - [`identities`]: a catalog of verifiable identities and conjecture scans

pub mod error;
pub mod identities;
pub mod numth;
pub mod pcore;
pub mod products;
pub mod report;
pub mod saito;
pub mod series;
pub mod theta;

pub use error::Error;
pub use report::{Discrepancy, NonnegReport, Status, VerificationReport};
pub use series::{BiSeries, FactorList, LaurentPoly, UniSeries};
