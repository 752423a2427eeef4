use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ScanOutcome;
use crate::Error;

/// Truncated power series in q with arbitrary-precision integer coefficients.
///
/// Coefficients are known for q^0 .. q^order and stored densely. The order of
/// any arithmetic result is the minimum of the operand orders.
#[derive(Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<BigInt>,
}

impl UniSeries {
    /// Zero series of the given truncation order.
    pub fn zero(order: usize) -> Self {
        UniSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// c * q^exp, truncated to the given order.
    pub fn monomial(order: usize, exp: usize, c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c.into();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series stores at least the q^0 coefficient"
        );
        UniSeries { coeffs }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, n: usize) -> &mut BigInt {
        &mut self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Copy truncated to a lower (or equal) order.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation cannot extend the order");
        UniSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Truncated Cauchy product; result order is min of the operand orders.
    pub fn mul(&self, other: &UniSeries) -> UniSeries {
        let order = self.order().min(other.order());
        // iterate over the sparser operand's support
        let (outer, inner) = if self.support_size() <= other.support_size() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = UniSeries::zero(order);
        for (i, c) in outer.coeffs.iter().enumerate().take(order + 1) {
            if c.is_zero() {
                continue;
            }
            for (j, d) in inner.coeffs.iter().enumerate().take(order + 1 - i) {
                if !d.is_zero() {
                    out.coeffs[i + j] += c * d;
                }
            }
        }
        out
    }

    fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiplicative inverse through the truncation order. The constant term
    /// must be a unit (+1 or -1); every product in the formulas is of this
    /// shape.
    pub fn recip(&self) -> Result<UniSeries, Error> {
        let c0 = &self.coeffs[0];
        if !(c0.magnitude().is_one()) {
            return Err(Error::NonUnitConstant);
        }
        let order = self.order();
        let support: Vec<usize> = (1..=order).filter(|&k| !self.coeffs[k].is_zero()).collect();
        let mut r = vec![BigInt::zero(); order + 1];
        r[0] = c0.clone();
        for n in 1..=order {
            let mut s = BigInt::zero();
            for &k in support.iter().take_while(|&&k| k <= n) {
                s += &self.coeffs[k] * &r[n - k];
            }
            // 1/c0 = c0 for units
            r[n] = -(c0 * s);
        }
        Ok(UniSeries { coeffs: r })
    }

    /// Integer power; negative exponents go through `recip`.
    pub fn pow(&self, k: i64) -> Result<UniSeries, Error> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        let mut result = UniSeries::one(self.order());
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Multiply in place by the two-term factor (1 - sign * q^g).
    pub fn mul_two_term(&mut self, sign: i8, q_exp: usize) {
        debug_assert!(sign == 1 || sign == -1);
        let order = self.order();
        if q_exp > order {
            return;
        }
        for n in (q_exp..=order).rev() {
            let prev = self.coeffs[n - q_exp].clone();
            if sign == 1 {
                self.coeffs[n] -= prev;
            } else {
                self.coeffs[n] += prev;
            }
        }
    }

    /// Divide in place by (1 - sign * q^g) with g >= 1.
    pub fn div_two_term(&mut self, sign: i8, q_exp: usize) {
        debug_assert!(sign == 1 || sign == -1);
        assert!(q_exp >= 1, "q^0 factors cannot be divided in place");
        let order = self.order();
        for n in q_exp..=order {
            let prev = self.coeffs[n - q_exp].clone();
            if sign == 1 {
                self.coeffs[n] += prev;
            } else {
                self.coeffs[n] -= prev;
            }
        }
    }

    /// Substitute q -> q^d, keeping the same truncation order. Source
    /// coefficients beyond order/d cannot land inside the order and are
    /// dropped.
    pub fn scale_exponents(&self, d: usize) -> UniSeries {
        assert!(d >= 1);
        let order = self.order();
        let mut out = UniSeries::zero(order);
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * d > order {
                break;
            }
            out.coeffs[n * d] = c.clone();
        }
        out
    }

    /// First negative coefficient, if any.
    pub fn nonneg_scan(&self) -> ScanOutcome {
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_negative() {
                return ScanOutcome::Negative {
                    q_exp: n,
                    z_exp: None,
                    value: c.clone(),
                };
            }
        }
        ScanOutcome::AllNonnegative
    }

    /// First order where the two series differ (compared through the shorter
    /// truncation), with the differing values.
    pub fn first_difference(&self, other: &UniSeries) -> Option<(usize, BigInt, BigInt)> {
        let order = self.order().min(other.order());
        (0..=order)
            .find(|&n| self.coeffs[n] != other.coeffs[n])
            .map(|n| (n, self.coeffs[n].clone(), other.coeffs[n].clone()))
    }
}

impl Add for &UniSeries {
    type Output = UniSeries;
    fn add(self, other: &UniSeries) -> UniSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| &self.coeffs[n] + &other.coeffs[n])
            .collect();
        UniSeries { coeffs }
    }
}

impl Sub for &UniSeries {
    type Output = UniSeries;
    fn sub(self, other: &UniSeries) -> UniSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| &self.coeffs[n] - &other.coeffs[n])
            .collect();
        UniSeries { coeffs }
    }
}

impl Neg for &UniSeries {
    type Output = UniSeries;
    fn neg(self) -> UniSeries {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*q^{}", c, n)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// JSON form shared by uni- and bivariate series: one row per q-exponent,
/// coefficients as decimal strings.
#[derive(Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize)]
pub struct RowJson {
    pub q: usize,
    pub zlo: i64,
    pub coeffs: Vec<String>,
}

impl UniSeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order(),
            rows: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| RowJson {
                    q: n,
                    zlo: 0,
                    coeffs: vec![c.to_string()],
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &SeriesJson) -> Result<UniSeries, Error> {
        let mut s = UniSeries::zero(doc.order);
        for row in &doc.rows {
            if row.q > doc.order || row.zlo != 0 || row.coeffs.len() != 1 {
                return Err(Error::InvalidArgument(
                    "malformed univariate series document".into(),
                ));
            }
            s.coeffs[row.q] = row.coeffs[0]
                .parse()
                .map_err(|_| Error::InvalidArgument("bad coefficient string".into()))?;
        }
        Ok(s)
    }
}
