use num_bigint::BigInt;
use num_traits::Zero;

use super::{BiSeries, LaurentPoly, UniSeries};
use crate::Error;

/// One-sided infinite product family: prod_{n>=0} (1 - sign * z^e * q^{f+nm}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochAtom {
    pub sign: i8,
    pub z_exp: i64,
    pub q_shift: u64,
    pub q_step: u64,
}

impl PochAtom {
    pub fn new(sign: i8, z_exp: i64, q_shift: u64, q_step: u64) -> Self {
        assert!(sign == 1 || sign == -1);
        assert!(q_step >= 1);
        PochAtom {
            sign,
            z_exp,
            q_shift,
            q_step,
        }
    }

    fn describe(&self) -> String {
        let s = if self.sign == 1 { "" } else { "-" };
        format!("{}z^{} q^{}", s, self.z_exp, self.q_shift)
    }

    /// The single q^0 factor (1 - sign * z^e) of a family with f = 0.
    fn q0_factor(&self) -> LaurentPoly {
        debug_assert_eq!(self.q_shift, 0);
        let mut p = LaurentPoly::one();
        p.add_term(self.z_exp, BigInt::from(-(self.sign as i64)));
        p
    }

    /// The same family starting from its second factor.
    fn tail(&self) -> PochAtom {
        PochAtom {
            q_shift: self.q_shift + self.q_step,
            ..*self
        }
    }
}

/// A single symbolic factor of a lazy product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Poch(PochAtom),
    /// E(q^scale)^power; negative powers expand through the reciprocal.
    Euler {
        scale: u64,
        power: i64,
    },
    /// An explicit finite Laurent-polynomial factor at q^0.
    Poly(LaurentPoly),
}

/// Multiset of symbolic factors in numerator/denominator position: the lazy,
/// exactly expandable product form every identity is built from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorList {
    pub numerator: Vec<Atom>,
    pub denominator: Vec<Atom>,
}

/// E(q^d) by the pentagonal-number expansion: O(sqrt(order)) nonzero terms.
pub(crate) fn euler_pentagonal(d: u64, order: usize) -> UniSeries {
    assert!(d >= 1);
    let mut s = UniSeries::zero(order);
    *s.coeff_mut(0) = BigInt::from(1);
    let (d, order_u) = (d as u128, order as u128);
    let mut k = 1u128;
    loop {
        let e1 = d * (k * (3 * k - 1) / 2);
        let e2 = d * (k * (3 * k + 1) / 2);
        if e1 > order_u {
            break;
        }
        let sign = if k % 2 == 1 { -1i64 } else { 1 };
        *s.coeff_mut(e1 as usize) += sign;
        if e2 <= order_u {
            *s.coeff_mut(e2 as usize) += sign;
        }
        k += 1;
    }
    s
}

impl FactorList {
    pub fn new() -> Self {
        FactorList::default()
    }

    pub fn push_num(&mut self, a: Atom) -> &mut Self {
        self.numerator.push(a);
        self
    }

    pub fn push_den(&mut self, a: Atom) -> &mut Self {
        self.denominator.push(a);
        self
    }

    /// Concatenate another factor list (product of the two).
    pub fn product(mut self, other: FactorList) -> FactorList {
        self.numerator.extend(other.numerator);
        self.denominator.extend(other.denominator);
        self
    }

    /// Swap numerator and denominator.
    pub fn inverted(self) -> FactorList {
        FactorList {
            numerator: self.denominator,
            denominator: self.numerator,
        }
    }

    /// Exact expansion to the given q-order. Infinite families contribute
    /// only their factors with q-exponent <= order; denominator families must
    /// start at q-exponent >= 1 (cancel q^0 factors first).
    pub fn expand(&self, order: usize) -> Result<BiSeries, Error> {
        for atom in &self.denominator {
            match atom {
                Atom::Poch(p) if p.q_shift == 0 => {
                    return Err(Error::UncancelledQ0Denominator(p.describe()));
                }
                Atom::Poly(p) => {
                    return Err(Error::UncancelledQ0Denominator(format!("{p:?}")));
                }
                _ => {}
            }
        }
        let mut acc = BiSeries::one(order);
        self.fold_euler_tags(&mut acc, order)?;
        for atom in &self.numerator {
            match atom {
                Atom::Poly(p) => acc.mul_laurent_q0(p),
                Atom::Poch(p) => {
                    let mut g = p.q_shift;
                    while g <= order as u64 {
                        acc.mul_two_term(p.sign, p.z_exp, g as usize);
                        g += p.q_step;
                    }
                }
                Atom::Euler { .. } => {}
            }
        }
        for atom in &self.denominator {
            if let Atom::Poch(p) = atom {
                let mut g = p.q_shift;
                while g <= order as u64 {
                    acc.div_two_term(p.sign, p.z_exp, g as usize);
                    g += p.q_step;
                }
            }
        }
        Ok(acc)
    }

    fn fold_euler_tags(&self, acc: &mut BiSeries, order: usize) -> Result<(), Error> {
        let mut tags: Vec<(u64, i64)> = Vec::new();
        for (atoms, flip) in [(&self.numerator, 1i64), (&self.denominator, -1i64)] {
            for atom in atoms {
                if let Atom::Euler { scale, power } = atom {
                    tags.push((*scale, flip * power));
                }
            }
        }
        for (scale, power) in tags {
            if power == 0 {
                continue;
            }
            let e = euler_pentagonal(scale, order).pow(power)?;
            *acc = acc.mul_uni(&e);
        }
        Ok(())
    }

    /// Divide every denominator q^0 factor (1 - s z^e) exactly into a
    /// matching numerator q^0 atom, moving the polynomial cofactor into the
    /// numerator. Fails when some q^0 pole has no divisible partner; the
    /// caller must then expand in windowed mode instead.
    pub fn cancel_q0(&self) -> Result<FactorList, Error> {
        let mut num = self.numerator.clone();
        let mut den = Vec::with_capacity(self.denominator.len());
        let mut cofactors = Vec::new();
        for atom in &self.denominator {
            let p = match atom {
                Atom::Poch(p) if p.q_shift == 0 => p.clone(),
                other => {
                    den.push(other.clone());
                    continue;
                }
            };
            let pole = p.q0_factor();
            let mut cancelled = false;
            for cand in num.iter_mut() {
                let (src, tail): (LaurentPoly, Option<Atom>) = match cand {
                    Atom::Poch(n) if n.q_shift == 0 => (n.q0_factor(), Some(Atom::Poch(n.tail()))),
                    Atom::Poly(lp) => (lp.clone(), None),
                    _ => continue,
                };
                if let Some(quot) = src.div_exact(&pole) {
                    match tail {
                        Some(t) => *cand = t,
                        None => *cand = Atom::Poly(LaurentPoly::one()),
                    }
                    if quot != LaurentPoly::one() {
                        cofactors.push(Atom::Poly(quot));
                    }
                    den.push(Atom::Poch(p.tail()));
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                return Err(Error::NonCancellableQ0(p.describe()));
            }
        }
        num.retain(|a| !matches!(a, Atom::Poly(p) if *p == LaurentPoly::one()));
        num.extend(cofactors);
        Ok(FactorList {
            numerator: num,
            denominator: den,
        })
    }

    /// Expansion with q^0 poles of the form 1/(1 - z^e), e > 0, expanded as
    /// geometric series in z^e. Every coefficient inside the window is
    /// exactly correct; coefficients outside it are not stored.
    pub fn expand_windowed(&self, order: usize, window: (i64, i64)) -> Result<BiSeries, Error> {
        if window.0 > window.1 {
            return Err(Error::BadWindow(window.0, window.1));
        }
        // split q^0 poles off the denominator families
        let mut poles: Vec<i64> = Vec::new();
        let mut finite = FactorList {
            numerator: self.numerator.clone(),
            denominator: vec![],
        };
        for atom in &self.denominator {
            match atom {
                Atom::Poch(p) if p.q_shift == 0 => {
                    if p.sign != 1 || p.z_exp <= 0 {
                        return Err(Error::UnsupportedPole(p.describe()));
                    }
                    poles.push(p.z_exp);
                    finite.denominator.push(Atom::Poch(p.tail()));
                }
                Atom::Poly(p) => {
                    return Err(Error::UnsupportedPole(format!("{p:?}")));
                }
                other => finite.denominator.push(other.clone()),
            }
        }
        // the pole-free part has finite rows and is computed on full support
        let acc = finite.expand(order)?;
        let mut rows: Vec<LaurentPoly> = acc.rows().to_vec();
        for e in poles {
            for row in rows.iter_mut() {
                let Some(lo) = row.min_exp() else { continue };
                if window.1 < lo {
                    *row = LaurentPoly::zero();
                    continue;
                }
                // multiply by sum_{k>=0} z^{ke}: prefix sums along residue
                // classes mod e, from the true support floor up to the window top
                let len = (window.1 - lo + 1) as usize;
                let mut out = vec![BigInt::zero(); len];
                for idx in 0..len {
                    let below = if idx as i64 >= e {
                        out[idx - e as usize].clone()
                    } else {
                        BigInt::zero()
                    };
                    out[idx] = row.coeff(lo + idx as i64) + below;
                }
                *row = LaurentPoly::new(lo, out);
            }
        }
        // clip to the requested window
        let rows = rows
            .into_iter()
            .map(|r| {
                let mut nr = LaurentPoly::zero();
                for (e, c) in r.terms() {
                    if e >= window.0 && e <= window.1 {
                        nr.add_term(e, c.clone());
                    }
                }
                nr
            })
            .collect();
        Ok(BiSeries::windowed_from_rows(rows, window))
    }

    /// Expand the substitution z -> q^r, q -> q^m to an exact univariate
    /// series. Every factor is specialized symbolically, so any order is
    /// exactly reachable.
    pub fn substitute_expand(&self, r: u64, m: u64, order: usize) -> Result<UniSeries, Error> {
        if r == 0 || m == 0 {
            return Err(Error::NonPositiveSubstitution);
        }
        let mut acc = UniSeries::one(order);
        for atom in &self.numerator {
            match atom {
                Atom::Euler { scale, power } => {
                    acc = acc.mul(&euler_pentagonal(scale * m, order).pow(*power)?);
                }
                Atom::Poly(p) => {
                    let mut u = UniSeries::zero(order);
                    for (i, c) in p.terms() {
                        let e = i * r as i64;
                        if e < 0 {
                            return Err(Error::NegativeSubstitutedExponent(e));
                        }
                        if e as usize <= order {
                            *u.coeff_mut(e as usize) += c.clone();
                        }
                    }
                    acc = acc.mul(&u);
                }
                Atom::Poch(p) => {
                    for e in substituted_exponents(p, r, m, order)? {
                        acc.mul_two_term(p.sign, e);
                    }
                }
            }
        }
        for atom in &self.denominator {
            match atom {
                Atom::Euler { scale, power } => {
                    acc = acc.mul(&euler_pentagonal(scale * m, order).pow(-power)?);
                }
                Atom::Poly(p) => {
                    return Err(Error::UncancelledQ0Denominator(format!("{p:?}")));
                }
                Atom::Poch(p) => {
                    for e in substituted_exponents(p, r, m, order)? {
                        if e == 0 {
                            return Err(Error::UncancelledQ0Denominator(p.describe()));
                        }
                        acc.div_two_term(p.sign, e);
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Univariate expansion of a z-free factor list.
    pub fn expand_univariate(&self, order: usize) -> Result<UniSeries, Error> {
        let z_free = self
            .numerator
            .iter()
            .chain(&self.denominator)
            .all(|a| match a {
                Atom::Poch(p) => p.z_exp == 0,
                Atom::Euler { .. } => true,
                Atom::Poly(p) => p.terms().all(|(e, _)| e == 0),
            });
        assert!(z_free, "expand_univariate requires a z-free factor list");
        self.substitute_expand(1, 1, order)
    }
}

/// q-exponents of the factors of `p` after z -> q^r, q -> q^m, up to `order`.
fn substituted_exponents(p: &PochAtom, r: u64, m: u64, order: usize) -> Result<Vec<usize>, Error> {
    let base = p.z_exp * r as i64 + p.q_shift as i64 * m as i64;
    if base < 0 {
        return Err(Error::NegativeSubstitutedExponent(base));
    }
    let step = p.q_step * m;
    let mut out = Vec::new();
    let mut e = base as u64;
    while e <= order as u64 {
        out.push(e as usize);
        e += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poch(sign: i8, z_exp: i64, q_shift: u64, q_step: u64) -> Atom {
        Atom::Poch(PochAtom::new(sign, z_exp, q_shift, q_step))
    }

    /// [z;q]_inf = (z;q)_inf (z^-1 q;q)_inf as a factor list.
    fn bracket_z_q() -> FactorList {
        let mut f = FactorList::new();
        f.push_num(poch(1, 1, 0, 1));
        f.push_num(poch(1, -1, 1, 1));
        f
    }

    fn terms(p: &LaurentPoly) -> Vec<(i64, i64)> {
        use num_traits::ToPrimitive;
        p.terms().map(|(e, c)| (e, c.to_i64().unwrap())).collect()
    }

    #[test]
    fn expand_bracket_low_rows() {
        // oracle: hand/JTP expansion of (1-z)(1-zq)(1-z^-1 q)(1-zq^2)...
        let b = bracket_z_q().expand(3).unwrap();
        assert_eq!(terms(b.row(0)), vec![(0, 1), (1, -1)]);
        assert_eq!(terms(b.row(1)), vec![(-1, -1), (0, 1), (1, -1), (2, 1)]);
        assert_eq!(terms(b.row(2)), vec![(-1, -1), (0, 2), (1, -2), (2, 1)]);
        assert_eq!(
            terms(b.row(3)),
            vec![(-2, 1), (-1, -2), (0, 3), (1, -3), (2, 2), (3, -1)]
        );
    }

    #[test]
    fn expand_matches_truncated_raw_product() {
        // brute-force oracle: multiply the first five bracket factors directly
        let order = 2;
        let mut direct = BiSeries::one(order);
        for (sign, e, g) in [(1, 1, 0), (1, 1, 1), (1, -1, 1), (1, 1, 2), (1, -1, 2)] {
            direct.mul_two_term(sign, e, g);
        }
        assert_eq!(bracket_z_q().expand(order).unwrap(), direct);
    }

    #[test]
    fn euler_tag_is_pentagonal() {
        let mut f = FactorList::new();
        f.push_num(Atom::Euler { scale: 1, power: 1 });
        let e = f.expand(7).unwrap();
        let expect = UniSeries::from_i64(&[1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(e.substitute_z_one(), expect);
        // brute-force oracle: product of (1 - q^n), n <= 7
        let mut direct = UniSeries::one(7);
        for n in 1..=7 {
            direct.mul_two_term(1, n);
        }
        assert_eq!(euler_pentagonal(1, 7), direct);
    }

    #[test]
    fn empty_list_is_one() {
        assert_eq!(FactorList::new().expand(4).unwrap(), BiSeries::one(4));
    }

    #[test]
    fn expand_rejects_uncancelled_pole() {
        let mut f = FactorList::new();
        f.push_den(poch(1, 1, 0, 1));
        assert!(matches!(
            f.expand(3),
            Err(Error::UncancelledQ0Denominator(_))
        ));
    }

    #[test]
    fn cancel_q0_cofactors() {
        // (1-z^4 type)/(1-z^2 type) -> cofactor 1 + z^2
        let mut f = FactorList::new();
        f.push_num(poch(1, 4, 0, 1));
        f.push_den(poch(1, 2, 0, 1));
        let c = f.cancel_q0().unwrap();
        assert!(c
            .numerator
            .iter()
            .any(|a| *a == Atom::Poly(LaurentPoly::from_terms(&[(0, 1), (2, 1)]))));
        assert!(c
            .denominator
            .iter()
            .all(|a| !matches!(a, Atom::Poch(p) if p.q_shift == 0)));
        // and the cancelled list expands exactly
        assert!(c.expand(5).is_ok());
    }

    #[test]
    fn cancel_q0_fails_without_partner() {
        let mut f = FactorList::new();
        f.push_num(poch(1, 3, 0, 1));
        f.push_den(poch(1, 2, 0, 1));
        assert!(matches!(f.cancel_q0(), Err(Error::NonCancellableQ0(_))));
    }

    #[test]
    fn cancel_q0_uses_poly_atoms() {
        // explicit (1-z) numerator cancels the (z;q) pole: the crank shape
        let mut f = FactorList::new();
        f.push_num(Atom::Poly(LaurentPoly::from_terms(&[(0, 1), (1, -1)])));
        f.push_num(Atom::Euler { scale: 1, power: 1 });
        f.push_den(poch(1, 1, 0, 1));
        f.push_den(poch(1, -1, 1, 1));
        let c = f.cancel_q0().unwrap();
        let b = c.expand(3).unwrap();
        // crank rows: 1; z + z^-1 - 1; z^2 + z^-2; z^3 + 1 + z^-3
        assert_eq!(terms(b.row(0)), vec![(0, 1)]);
        assert_eq!(terms(b.row(1)), vec![(-1, 1), (0, -1), (1, 1)]);
        assert_eq!(terms(b.row(2)), vec![(-2, 1), (2, 1)]);
        assert_eq!(terms(b.row(3)), vec![(-3, 1), (0, 1), (3, 1)]);
    }

    #[test]
    fn windowed_geometric() {
        // 1/(1-z) at order 0, window (0,3): 1 + z + z^2 + z^3
        let mut f = FactorList::new();
        f.push_den(poch(1, 1, 0, u64::MAX >> 1));
        // a huge step leaves only the q^0 pole in range
        let b = f.expand_windowed(0, (0, 3)).unwrap();
        assert_eq!(terms(b.row(0)), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        assert!(!b.is_exact());
    }

    #[test]
    fn windowed_two_factor_example() {
        // 1/((1-z)(1-zq)): coefficient of z^2 q^1 is 1
        let mut f = FactorList::new();
        f.push_den(poch(1, 1, 0, 1));
        let b = f.expand_windowed(3, (-2, 5)).unwrap();
        assert_eq!(b.coeff(1, 2), BigInt::from(1));
        // q^0 row is the plain geometric series
        assert_eq!(b.coeff(0, 4), BigInt::from(1));
        assert_eq!(b.coeff(0, -1), BigInt::zero());
    }

    #[test]
    fn windowed_crank_adjacent_row() {
        // E(q)/((z;q)(qz^-1;q)): q^1 row inside window (-1,1) is z^-1 + 0 + z,
        // derived by brute force from the first factors
        let mut f = FactorList::new();
        f.push_num(Atom::Euler { scale: 1, power: 1 });
        f.push_den(poch(1, 1, 0, 1));
        f.push_den(poch(1, -1, 1, 1));
        let b = f.expand_windowed(4, (-1, 1)).unwrap();
        assert_eq!(b.coeff(1, -1), BigInt::from(1));
        assert_eq!(b.coeff(1, 0), BigInt::zero());
        assert_eq!(b.coeff(1, 1), BigInt::from(1));
        // brute-force oracle on a wide window: multiply truncated geometric
        // factors directly and divide by the remaining pole
        let mut direct = BiSeries::one(4);
        direct = direct.mul_uni(&euler_pentagonal(1, 4));
        for g in 1..=4 {
            direct.div_two_term(1, 1, g); // 1/(1 - z q^g) from (z;q) tail
            direct.div_two_term(1, -1, g); // 1/(1 - z^-1 q^g)
        }
        // multiply by sum_{k>=0} z^k, collecting only exponents in [-1, 1]
        for (n, row) in direct.rows().iter().enumerate() {
            for i in -1i64..=1 {
                let mut total = BigInt::zero();
                let lo = row.min_exp().unwrap_or(0);
                let mut e = i;
                while e >= lo {
                    total += row.coeff(e);
                    e -= 1;
                }
                assert_eq!(b.coeff(n, i), total, "q^{n} z^{i}");
            }
        }
    }

    #[test]
    fn windowed_rejects_bad_window() {
        let f = FactorList::new();
        assert!(matches!(
            f.expand_windowed(2, (3, -3)),
            Err(Error::BadWindow(3, -3))
        ));
    }

    #[test]
    fn windowed_rejects_negative_pole() {
        let mut f = FactorList::new();
        f.push_den(poch(1, -1, 0, 1));
        assert!(matches!(
            f.expand_windowed(2, (0, 2)),
            Err(Error::UnsupportedPole(_))
        ));
    }

    #[test]
    fn substitute_bracket_to_univariate() {
        // [z;q] at z = q, q -> q^3 equals [q;q^3] = prod (1-q^{3k+1})(1-q^{3k+2})
        let sub = bracket_z_q().substitute_expand(1, 3, 20).unwrap();
        let mut direct = UniSeries::one(20);
        let mut n = 1usize;
        while n <= 20 {
            if n % 3 != 0 {
                direct.mul_two_term(1, n);
            }
            n += 1;
        }
        assert_eq!(sub, direct);
    }

    #[test]
    fn substitute_rejects_zero_exponents() {
        assert!(bracket_z_q().substitute_expand(0, 1, 5).is_err());
        assert!(bracket_z_q().substitute_expand(1, 0, 5).is_err());
    }

    #[test]
    fn windowed_agrees_with_cleared_on_cancellable_lists() {
        // deterministic generator of cancellable factor lists
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % m
        };
        for _ in 0..20 {
            let e = 1 + next(2) as i64;
            let k = 1 + next(3) as i64;
            let m1 = 1 + next(3);
            let m2 = 1 + next(3);
            let mut f = FactorList::new();
            f.push_num(poch(1, k * e, 0, m1));
            f.push_den(poch(1, e, 0, m2));
            if next(2) == 0 {
                f.push_num(Atom::Euler {
                    scale: 1 + next(2),
                    power: 1 - next(3) as i64,
                });
            }
            if next(2) == 0 {
                f.push_num(poch(-1, next(5) as i64 - 2, next(2), 1 + next(2)));
            }
            if next(2) == 0 {
                f.push_den(poch(1, next(5) as i64 - 2, 1 + next(2), 1 + next(2)));
            }
            let exact = f.cancel_q0().unwrap().expand(10).unwrap();
            let window = (-8i64, 8i64);
            let windowed = f.expand_windowed(10, window).unwrap();
            for n in 0..=10 {
                for i in window.0..=window.1 {
                    assert_eq!(
                        exact.coeff(n, i),
                        windowed.coeff(n, i),
                        "mismatch at q^{n} z^{i} for {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn truncation_stability() {
        let mut state = 0x6a09e667f3bcc909u64;
        let mut next = move |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % m
        };
        for _ in 0..20 {
            let mut f = FactorList::new();
            for _ in 0..=next(3) {
                f.push_num(poch(
                    if next(2) == 0 { 1 } else { -1 },
                    next(7) as i64 - 3,
                    next(3),
                    1 + next(3),
                ));
            }
            if next(2) == 0 {
                f.push_num(Atom::Euler {
                    scale: 1 + next(3),
                    power: next(5) as i64 - 2,
                });
            }
            if next(2) == 0 {
                f.push_den(poch(
                    if next(2) == 0 { 1 } else { -1 },
                    next(7) as i64 - 3,
                    1 + next(3),
                    1 + next(3),
                ));
            }
            let lo = f.expand(6).unwrap();
            let hi = f.expand(13).unwrap();
            assert_eq!(hi.truncated(6), lo, "truncation instability for {f:?}");
        }
    }
}
