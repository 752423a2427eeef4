//! Exact truncated-series arithmetic.
//!
//! [`UniSeries`] is a power series in q with coefficients known through a
//! fixed order; [`BiSeries`] adds a Laurent polynomial in z per q-order;
//! [`FactorList`] is the lazy product form that everything expands from.
//! Arithmetic never silently extends truncation order: the order of a
//! product is the minimum of the operand orders.

mod bi;
mod factors;
mod laurent;
mod uni;

pub use bi::BiSeries;
pub use factors::{Atom, FactorList, PochAtom};
pub use laurent::LaurentPoly;
pub use uni::{RowJson, SeriesJson, UniSeries};

pub(crate) use factors::euler_pentagonal;

use num_bigint::BigInt;

/// Outcome of a coefficient-nonnegativity scan: `Ok` or the lexicographically
/// first (q-order, z-exponent) holding a negative coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanOutcome {
    AllNonnegative,
    Negative {
        q_exp: usize,
        z_exp: Option<i64>,
        value: BigInt,
    },
}

impl ScanOutcome {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, ScanOutcome::AllNonnegative)
    }
}
