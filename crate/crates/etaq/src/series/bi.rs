use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::uni::{RowJson, SeriesJson};
use super::{LaurentPoly, ScanOutcome, UniSeries};
use crate::Error;

/// Truncated series in q whose coefficient at each q-order is a Laurent
/// polynomial in z.
///
/// `exact` rows hold the complete Laurent coefficient of that q-order. A
/// windowed series (from [`crate::FactorList::expand_windowed`]) stores only
/// z-exponents inside `window`; every stored coefficient is still exactly
/// correct, but coefficients outside the window are unavailable.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    rows: Vec<LaurentPoly>,
    window: Option<(i64, i64)>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            rows: vec![LaurentPoly::zero(); order + 1],
            window: None,
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.rows[0] = LaurentPoly::one();
        s
    }

    /// c * z^e * q^n.
    pub fn monomial(order: usize, q_exp: usize, z_exp: i64, c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(order);
        if q_exp <= order {
            s.rows[q_exp] = LaurentPoly::term(z_exp, c);
        }
        s
    }

    pub fn from_rows(rows: Vec<LaurentPoly>) -> Self {
        assert!(!rows.is_empty());
        BiSeries { rows, window: None }
    }

    pub(crate) fn windowed_from_rows(rows: Vec<LaurentPoly>, window: (i64, i64)) -> Self {
        assert!(!rows.is_empty());
        BiSeries {
            rows,
            window: Some(window),
        }
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.window.is_none()
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn row(&self, n: usize) -> &LaurentPoly {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[LaurentPoly] {
        &self.rows
    }

    pub fn coeff(&self, n: usize, i: i64) -> BigInt {
        self.rows[n].coeff(i)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order());
        BiSeries {
            rows: self.rows[..=order].to_vec(),
            window: self.window,
        }
    }

    /// Realized z-support across all rows; None when the series is zero.
    pub fn z_support(&self) -> Option<(i64, i64)> {
        let mut bounds: Option<(i64, i64)> = None;
        for r in &self.rows {
            if let (Some(lo), Some(hi)) = (r.min_exp(), r.max_exp()) {
                bounds = Some(match bounds {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        bounds
    }

    fn clip_to_window(&mut self, window: (i64, i64)) {
        for row in &mut self.rows {
            let clipped: Vec<(i64, BigInt)> = row
                .terms()
                .filter(|(e, _)| *e >= window.0 && *e <= window.1)
                .map(|(e, c)| (e, c.clone()))
                .collect();
            let mut nr = LaurentPoly::zero();
            for (e, c) in clipped {
                nr.add_term(e, c);
            }
            *row = nr;
        }
        self.window = Some(window);
    }

    /// Product. Exact inputs give an exact result; a windowed operand shrinks
    /// the result window to where every contribution is stored, and two
    /// windowed operands clip to the intersection of their windows.
    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let order = self.order().min(other.order());
        let mut rows = vec![LaurentPoly::zero(); order + 1];
        for (n1, r1) in self.rows.iter().enumerate().take(order + 1) {
            if r1.is_zero() {
                continue;
            }
            for (n2, r2) in other.rows.iter().enumerate().take(order + 1 - n1) {
                if !r2.is_zero() {
                    rows[n1 + n2] = &rows[n1 + n2] + &r1.mul(r2);
                }
            }
        }
        let mut out = BiSeries { rows, window: None };
        match (self.window, other.window) {
            (None, None) => {}
            (Some(w), None) => {
                // sound shrink by the exact operand's realized support
                match other.z_support() {
                    None => out = BiSeries::zero(order),
                    Some((slo, shi)) => out.clip_to_window((w.0 + shi, w.1 + slo)),
                }
            }
            (None, Some(w)) => match self.z_support() {
                None => out = BiSeries::zero(order),
                Some((slo, shi)) => out.clip_to_window((w.0 + shi, w.1 + slo)),
            },
            (Some(w1), Some(w2)) => {
                out.clip_to_window((w1.0.max(w2.0), w1.1.min(w2.1)));
            }
        }
        out
    }

    /// Multiply by a z-free univariate series.
    pub fn mul_uni(&self, u: &UniSeries) -> BiSeries {
        let order = self.order().min(u.order());
        let mut rows = vec![LaurentPoly::zero(); order + 1];
        for (k, c) in u.coeffs().iter().enumerate().take(order + 1) {
            if c.is_zero() {
                continue;
            }
            for n in 0..=order - k {
                if !self.rows[n].is_zero() {
                    rows[n + k] = &rows[n + k] + &self.rows[n].scale(c);
                }
            }
        }
        BiSeries {
            rows,
            window: self.window,
        }
    }

    /// Multiply in place by the two-term factor (1 - sign * z^e * q^g).
    pub fn mul_two_term(&mut self, sign: i8, z_exp: i64, q_exp: usize) {
        debug_assert!(sign == 1 || sign == -1);
        let order = self.order();
        if q_exp > order {
            return;
        }
        for n in (0..=order).rev() {
            if n >= q_exp && !self.rows[n - q_exp].is_zero() {
                let shifted = self.rows[n - q_exp].mul_zpow(z_exp);
                self.rows[n] = if sign == 1 {
                    &self.rows[n] - &shifted
                } else {
                    &self.rows[n] + &shifted
                };
            }
        }
    }

    /// Divide in place by (1 - sign * z^e * q^g) with g >= 1, i.e. multiply by
    /// the geometric series in (sign * z^e * q^g).
    pub fn div_two_term(&mut self, sign: i8, z_exp: i64, q_exp: usize) {
        debug_assert!(sign == 1 || sign == -1);
        assert!(q_exp >= 1, "q^0 factors cannot be divided in place");
        let order = self.order();
        for n in q_exp..=order {
            if !self.rows[n - q_exp].is_zero() {
                let shifted = self.rows[n - q_exp].mul_zpow(z_exp);
                self.rows[n] = if sign == 1 {
                    &self.rows[n] + &shifted
                } else {
                    &self.rows[n] - &shifted
                };
            }
        }
    }

    /// Multiply every row by a fixed Laurent polynomial (a q^0 factor).
    pub fn mul_laurent_q0(&mut self, p: &LaurentPoly) {
        for row in &mut self.rows {
            if !row.is_zero() {
                *row = row.mul(p);
            }
        }
    }

    /// Multiply by z^e * q^g.
    pub fn mul_monomial(&self, z_exp: i64, q_exp: usize) -> BiSeries {
        let order = self.order();
        let mut rows = vec![LaurentPoly::zero(); order + 1];
        for (n, r) in self.rows.iter().enumerate() {
            if n + q_exp <= order && !r.is_zero() {
                rows[n + q_exp] = r.mul_zpow(z_exp);
            }
        }
        BiSeries {
            rows,
            window: self.window.map(|(a, b)| (a + z_exp, b + z_exp)),
        }
    }

    /// Evaluate at z = 1: each row collapses to the sum of its coefficients.
    pub fn substitute_z_one(&self) -> UniSeries {
        assert!(self.is_exact(), "z = 1 evaluation requires exact rows");
        let coeffs = self
            .rows
            .iter()
            .map(|r| r.terms().fold(BigInt::zero(), |acc, (_, c)| acc + c))
            .collect::<Vec<_>>();
        UniSeries::from_coeffs(if coeffs.is_empty() {
            vec![BigInt::zero()]
        } else {
            coeffs
        })
    }

    /// Reduce z-exponents modulo a into 0..a-1, summing within each residue
    /// class. This is the checkable form of evaluation at a-th roots of unity.
    pub fn reduce_mod_z_pow(&self, a: i64) -> BiSeries {
        assert!(self.is_exact(), "residue reduction requires exact rows");
        assert!(a >= 2);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut nr = LaurentPoly::zero();
                for (e, c) in r.terms() {
                    nr.add_term(e.rem_euclid(a), c.clone());
                }
                nr
            })
            .collect();
        BiSeries { rows, window: None }
    }

    /// Substitute z -> zq: the z^i q^n term moves to z^i q^{n+i}. The output
    /// order shrinks by the largest positive z-exponent present, so every
    /// reported row is complete with respect to the stored terms. Terms that
    /// would land at negative q-order mean the input is not shift-stable and
    /// are reported as an error.
    pub fn shift_z_to_zq(&self) -> Result<BiSeries, Error> {
        assert!(self.is_exact(), "shift requires exact rows");
        let order = self.order();
        let max_pos = self.z_support().map(|(_, hi)| hi.max(0)).unwrap_or(0) as usize;
        let new_order = order.saturating_sub(max_pos);
        let mut rows = vec![LaurentPoly::zero(); new_order + 1];
        for (n, r) in self.rows.iter().enumerate() {
            for (i, c) in r.terms() {
                let landing = n as i64 + i;
                if landing < 0 {
                    return Err(Error::InvalidArgument(format!(
                        "shift z -> zq sends z^{i} q^{n} below q^0"
                    )));
                }
                if (landing as usize) <= new_order {
                    rows[landing as usize].add_term(i, c.clone());
                }
            }
        }
        Ok(BiSeries { rows, window: None })
    }

    /// Substitute z -> q^r, q -> q^m treating the series as a complete
    /// polynomial object (no terms beyond the stored order). The result order
    /// is the largest landing exponent.
    pub fn substitute_z_poly(&self, r: u64, m: u64) -> Result<UniSeries, Error> {
        if r == 0 {
            return Err(Error::NonPositiveSubstitution);
        }
        assert!(self.is_exact());
        let landings = self.landing_terms(r, m)?;
        let order = landings.iter().map(|&(e, _)| e).max().unwrap_or(0);
        let mut out = UniSeries::zero(order);
        for (e, c) in landings {
            *out.coeff_mut(e) += c;
        }
        Ok(out)
    }

    /// Substitute z -> q^r, q -> q^m on a truncated series. `unseen_z_floor`
    /// is the caller's guarantee that every term beyond the stored order has
    /// z-exponent at least that value; the result order is cut so no unseen
    /// term could land inside it.
    pub fn substitute_z(&self, r: u64, m: u64, unseen_z_floor: i64) -> Result<UniSeries, Error> {
        if r == 0 {
            return Err(Error::NonPositiveSubstitution);
        }
        assert!(self.is_exact());
        let first_unseen = (self.order() as i64 + 1) * m as i64 + r as i64 * unseen_z_floor.min(0);
        if first_unseen <= 0 {
            return Err(Error::InvalidArgument(
                "substitution cannot certify any coefficient at this order".into(),
            ));
        }
        let order = (first_unseen - 1) as usize;
        let mut out = UniSeries::zero(order);
        for (e, c) in self.landing_terms(r, m)? {
            if e <= order {
                *out.coeff_mut(e) += c;
            }
        }
        Ok(out)
    }

    fn landing_terms(&self, r: u64, m: u64) -> Result<Vec<(usize, BigInt)>, Error> {
        let mut out = Vec::new();
        for (n, row) in self.rows.iter().enumerate() {
            for (i, c) in row.terms() {
                let e = n as i64 * m as i64 + i * r as i64;
                if e < 0 {
                    return Err(Error::NegativeSubstitutedExponent(e));
                }
                out.push((e as usize, c.clone()));
            }
        }
        Ok(out)
    }

    /// First negative stored coefficient in lexicographic (q, z) order.
    pub fn nonneg_scan(&self) -> ScanOutcome {
        for (n, row) in self.rows.iter().enumerate() {
            for (i, c) in row.terms() {
                if c.is_negative() {
                    return ScanOutcome::Negative {
                        q_exp: n,
                        z_exp: Some(i),
                        value: c.clone(),
                    };
                }
            }
        }
        ScanOutcome::AllNonnegative
    }

    /// First (q, z) position where the two series differ, compared through
    /// the shorter truncation.
    pub fn first_difference(&self, other: &BiSeries) -> Option<(usize, i64, BigInt, BigInt)> {
        let order = self.order().min(other.order());
        for n in 0..=order {
            let (a, b) = (&self.rows[n], &other.rows[n]);
            if a == b {
                continue;
            }
            let lo = a.min_exp().into_iter().chain(b.min_exp()).min().unwrap();
            let hi = a.max_exp().into_iter().chain(b.max_exp()).max().unwrap();
            for i in lo..=hi {
                if a.coeff(i) != b.coeff(i) {
                    return Some((n, i, a.coeff(i), b.coeff(i)));
                }
            }
        }
        None
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let order = self.order().min(other.order());
        let rows = (0..=order)
            .map(|n| &self.rows[n] + &other.rows[n])
            .collect();
        let window = match (self.window, other.window) {
            (None, None) => None,
            (Some(w), None) | (None, Some(w)) => Some(w),
            (Some(a), Some(b)) => Some((a.0.max(b.0), a.1.min(b.1))),
        };
        let mut out = BiSeries { rows, window };
        if let Some(w) = window {
            out.clip_to_window(w);
        }
        out
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        let order = self.order().min(other.order());
        let rows = (0..=order)
            .map(|n| &self.rows[n] - &other.rows[n])
            .collect();
        BiSeries {
            rows,
            window: self.window,
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(n, r)| RowJson {
                    q: n,
                    zlo: r.min_exp().unwrap_or(0),
                    coeffs: match r.min_exp() {
                        None => Vec::new(),
                        Some(lo) => (lo..=r.max_exp().unwrap())
                            .map(|e| r.coeff(e).to_string())
                            .collect(),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &SeriesJson) -> Result<BiSeries, Error> {
        let mut s = BiSeries::zero(doc.order);
        for row in &doc.rows {
            if row.q > doc.order {
                return Err(Error::InvalidArgument("row beyond declared order".into()));
            }
            let mut p = LaurentPoly::zero();
            for (k, c) in row.coeffs.iter().enumerate() {
                let c: BigInt = c
                    .parse()
                    .map_err(|_| Error::InvalidArgument("bad coefficient string".into()))?;
                p.add_term(row.zlo + k as i64, c);
            }
            s.rows[row.q] = p;
        }
        Ok(s)
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, r) in self.rows.iter().enumerate() {
            writeln!(f, "q^{n}: {r:?}")?;
        }
        if let Some(w) = self.window {
            writeln!(f, "(windowed to z^{}..z^{})", w.0, w.1)?;
        }
        Ok(())
    }
}
