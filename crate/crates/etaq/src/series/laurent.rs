use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

/// Laurent polynomial in z: dense coefficients for z^lo .. z^hi.
///
/// Normalized so the leading and trailing coefficients are nonzero; the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::term(0, 1)
    }

    /// c * z^e.
    pub fn term(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly {
                lo: e,
                coeffs: vec![c],
            }
        }
    }

    /// From dense coefficients for z^lo upward; trims zero fringes.
    pub fn new(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { lo, coeffs };
        p.normalize();
        p
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn normalize(&mut self) {
        let first_nz = self.coeffs.iter().position(|c| !c.is_zero());
        match first_nz {
            None => {
                self.coeffs.clear();
                self.lo = 0;
            }
            Some(i) => {
                let j = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                self.coeffs.drain(j + 1..);
                self.coeffs.drain(..i);
                self.lo += i as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (None for the zero poly).
    pub fn min_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo)
        }
    }

    pub fn max_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if self.is_zero() || e < self.lo || e > self.max_exp().unwrap() {
            BigInt::zero()
        } else {
            self.coeffs[(e - self.lo) as usize].clone()
        }
    }

    /// Iterate (exponent, coefficient) over the nonzero support, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.lo = e;
            self.coeffs.push(c);
            return;
        }
        let hi = self.lo + self.coeffs.len() as i64 - 1;
        if e < self.lo {
            let mut pre = vec![BigInt::zero(); (self.lo - e) as usize];
            pre.append(&mut self.coeffs);
            self.coeffs = pre;
            self.lo = e;
        } else if e > hi {
            self.coeffs
                .resize((e - self.lo + 1) as usize, BigInt::zero());
        }
        let idx = (e - self.lo) as usize;
        self.coeffs[idx] += c;
        // interior writes keep the fringe invariant; only boundary
        // cancellations need a re-trim
        if self.coeffs[idx].is_zero() && (idx == 0 || idx == self.coeffs.len() - 1) {
            self.normalize();
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let lo = self.lo + other.lo;
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::new(lo, coeffs)
    }

    /// Multiply by z^k (exponent shift).
    pub fn mul_zpow(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division; None when the remainder is nonzero or divisor is zero.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // divide the polynomial parts; z-unit shift handled separately
        let mut rem = self.coeffs.clone();
        let d = &divisor.coeffs;
        if rem.len() < d.len() {
            return None;
        }
        let dlead = d.last().unwrap();
        let qlen = rem.len() - d.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + d.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = num_integer::Integer::div_rem(&top, dlead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] -= dc * &qc;
                }
            }
            quot[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(LaurentPoly::new(self.lo - divisor.lo, quot))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*z^{e}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_trims_fringes() {
        let p = LaurentPoly::new(-2, vec![0.into(), 3.into(), 0.into(), 5.into(), 0.into()]);
        assert_eq!(p.min_exp(), Some(-1));
        assert_eq!(p.max_exp(), Some(1));
        assert_eq!(p.coeff(-1), BigInt::from(3));
        assert_eq!(p.coeff(0), BigInt::from(0));
        assert_eq!(p.coeff(1), BigInt::from(5));
    }

    #[test]
    fn mul_with_negative_exponents() {
        // (z + z^-1)^2 = z^2 + 2 + z^-2
        let p = LaurentPoly::from_terms(&[(1, 1), (-1, 1)]);
        let sq = p.mul(&p);
        assert_eq!(sq, LaurentPoly::from_terms(&[(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn exact_division_cofactors() {
        // (1 - z^4) / (1 - z^2) = 1 + z^2
        let num = LaurentPoly::from_terms(&[(0, 1), (4, -1)]);
        let den = LaurentPoly::from_terms(&[(0, 1), (2, -1)]);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            LaurentPoly::from_terms(&[(0, 1), (2, 1)])
        );
        // (1 - z^3) / (1 - z) = 1 + z + z^2
        let num = LaurentPoly::from_terms(&[(0, 1), (3, -1)]);
        let den = LaurentPoly::from_terms(&[(0, 1), (1, -1)]);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            LaurentPoly::from_terms(&[(0, 1), (1, 1), (2, 1)])
        );
        // (1 - z^2) / (1 + z) = 1 - z
        let num = LaurentPoly::from_terms(&[(0, 1), (2, -1)]);
        let den = LaurentPoly::from_terms(&[(0, 1), (1, 1)]);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            LaurentPoly::from_terms(&[(0, 1), (1, -1)])
        );
        // non-divisible pair
        let num = LaurentPoly::from_terms(&[(0, 1), (3, -1)]);
        let den = LaurentPoly::from_terms(&[(0, 1), (2, -1)]);
        assert!(num.div_exact(&den).is_none());
    }

    #[test]
    fn division_handles_laurent_shifts() {
        // (1 - z^-4) / (1 - z^-2) = 1 + z^-2
        let num = LaurentPoly::from_terms(&[(0, 1), (-4, -1)]);
        let den = LaurentPoly::from_terms(&[(0, 1), (-2, -1)]);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            LaurentPoly::from_terms(&[(0, 1), (-2, 1)])
        );
    }
}
