//! Constructors for the classical products: Euler products E(q^d), eta
//! quotients with exact fractional prefactors, Pochhammer/bracket factor
//! lists, and Gaussian polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::series::euler_pentagonal;
use crate::series::{Atom, FactorList, PochAtom, UniSeries};
use crate::Error;

/// E(q^d) = prod_{n>=1} (1 - q^{dn}) by the pentagonal-number expansion.
pub fn euler_series(d: u64, order: usize) -> UniSeries {
    euler_pentagonal(d, order)
}

/// Finite map from eta argument multiplier k to its integer exponent e(k):
/// the product prod_k eta(k tau)^{e(k)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    terms: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(terms: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (k, e) in terms {
            if k == 0 {
                return Err(Error::InvalidArgument(
                    "eta argument multiplier must be >= 1".into(),
                ));
            }
            if e == 0 {
                return Err(Error::InvalidArgument(format!(
                    "zero exponent for eta({k} tau)"
                )));
            }
            *map.entry(k).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        if map.is_empty() {
            return Err(Error::InvalidArgument(
                "eta quotient needs at least one term".into(),
            ));
        }
        Ok(EtaQuotientSpec { terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&k, &e)| (k, e))
    }

    /// Combine two specs by adding exponents.
    pub fn union(&self, other: &EtaQuotientSpec) -> Result<EtaQuotientSpec, Error> {
        EtaQuotientSpec::new(self.terms().chain(other.terms()))
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    /// Compact text form "k1^e1 * k2^e2 * ...", e.g. "5^5 * 1^-1".
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut terms = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "empty factor in eta spec {s:?}"
                )));
            }
            let (k, e) = match part.split_once('^') {
                Some((k, e)) => (k.trim(), e.trim()),
                None => (part, "1"),
            };
            let k: u64 = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad eta multiplier {k:?}")))?;
            let e: i64 = e
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad eta exponent {e:?}")))?;
            terms.push((k, e));
        }
        EtaQuotientSpec::new(terms)
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, e) in self.terms() {
            if !first {
                write!(f, " * ")?;
            }
            write!(f, "{k}^{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// An expanded eta quotient: the fractional q-prefactor exponent (a rational
/// with denominator dividing 24, never merged into the series) and the
/// integer-exponent series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaExpansion {
    pub prefactor: Ratio<i64>,
    pub series: UniSeries,
}

/// Expand an eta quotient: prefactor exponent sum(k e(k))/24, series
/// prod E(q^k)^{e(k)}.
pub fn eta_quotient(spec: &EtaQuotientSpec, order: usize) -> EtaExpansion {
    let mut num = 0i64;
    for (k, e) in spec.terms() {
        num += k as i64 * e;
    }
    let prefactor = Ratio::new(num, 24);
    let mut series = UniSeries::one(order);
    for (k, e) in spec.terms() {
        series = series.mul(&euler_series(k, order).pow(e).expect("E has unit constant"));
    }
    EtaExpansion { prefactor, series }
}

/// [z^e q^f; q^m]_inf = (z^e q^f; q^m)_inf (z^-e q^{m-f}; q^m)_inf.
/// The shift must satisfy f < m; the f = 0 case carries the sole q^0 factor.
pub fn bracket(e: i64, f: u64, m: u64) -> Result<FactorList, Error> {
    if f >= m {
        return Err(Error::BracketShiftTooLarge { f, m });
    }
    let mut fl = FactorList::new();
    fl.push_num(Atom::Poch(PochAtom::new(1, e, f, m)));
    fl.push_num(Atom::Poch(PochAtom::new(1, -e, m - f, m)));
    Ok(fl)
}

/// One-sided product (z^e q^f; q^m)_inf.
pub fn pochhammer(e: i64, f: u64, m: u64) -> FactorList {
    let mut fl = FactorList::new();
    fl.push_num(Atom::Poch(PochAtom::new(1, e, f, m)));
    fl
}

/// Gaussian polynomial (q-binomial) [n+m choose m]_q by the product formula
/// (1-q^{n+1})...(1-q^{n+m}) / (q)_m, computed by exact series division. The
/// division leaving a remainder would signal an arithmetic bug and panics.
pub fn gaussian_poly(n: usize, m: usize) -> UniSeries {
    let deg = n * m;
    let full = deg + m * (m + 1) / 2;
    let mut num = UniSeries::one(full);
    for j in n + 1..=n + m {
        num.mul_two_term(1, j);
    }
    let mut den = UniSeries::one(full);
    for j in 1..=m {
        den.mul_two_term(1, j);
    }
    let quot = num.mul(&den.recip().expect("(q)_m has unit constant"));
    for k in deg + 1..=full {
        assert!(
            quot.coeff(k).is_zero(),
            "gaussian_poly division left a remainder at q^{k} (n={n}, m={m})"
        );
    }
    quot.truncated(deg)
}
