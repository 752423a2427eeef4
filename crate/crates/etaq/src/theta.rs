//! Constrained lattice sums: the quadratic form Q_a, pruned enumeration of
//! zero-sum integer vectors, the component sums F_j, their combination
//! C_a(z;q), the product side R_a, and the specialization D_a(q^r;q^M).
//!
//! The enumeration works with the centered decomposition 2*Q_a(v) =
//! sum_i G_i(v_i) where G_i(x) = a x^2 + (2i - (a-1)) x on zero-sum vectors.
//! Each G_i is >= 0 with equality only at x = 0 (its real minimum lies inside
//! (-1/2, 1/2)), so partial sums prune exactly and Q_a >= 0 on the whole
//! constrained lattice.

use num_bigint::BigInt;

use crate::products::euler_series;
use crate::series::{Atom, BiSeries, FactorList, LaurentPoly, PochAtom, UniSeries};
use crate::Error;

/// Q_a(v) = (a/2) v.v + (0,1,...,a-1).v. Requires the zero-sum constraint,
/// which also makes the value an integer for every a.
pub fn qform(a: usize, v: &[i64]) -> i64 {
    assert!(a >= 1 && v.len() == a, "vector length must equal a");
    assert_eq!(
        v.iter().sum::<i64>(),
        0,
        "lattice vector must have zero sum"
    );
    let s2: i64 = v.iter().map(|&x| x * x).sum();
    let lin: i64 = v.iter().enumerate().map(|(i, &x)| i as i64 * x).sum();
    let doubled = a as i64 * s2 + 2 * lin;
    assert!(doubled % 2 == 0 && doubled >= 0, "Q_a must be a nonnegative integer");
    doubled / 2
}

/// Doubled per-coordinate cost G_i(x) = a x^2 + (2i - (a-1)) x.
#[inline]
fn coord_cost(a: usize, i: usize, x: i64) -> i64 {
    let c = 2 * i as i64 - (a as i64 - 1);
    a as i64 * x * x + c * x
}

/// Candidate range for coordinate i: all integers x with G_i(x) <= budget,
/// widened by one on each side and filtered exactly by the caller.
fn coord_candidates(a: usize, i: usize, budget: i64) -> std::ops::RangeInclusive<i64> {
    if budget < 0 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0; // empty
    }
    let c = (2 * i as i64 - (a as i64 - 1)) as f64;
    let disc = (c * c + 4.0 * a as f64 * budget as f64).sqrt();
    let lo = ((-c - disc) / (2.0 * a as f64)).floor() as i64 - 1;
    let hi = ((-c + disc) / (2.0 * a as f64)).ceil() as i64 + 1;
    lo..=hi
}

fn enumerate_from(
    a: usize,
    t2: i64,
    k: usize,
    partial: i64,
    sum: i64,
    coords: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64], usize),
) {
    if k == a - 1 {
        let x = -sum;
        let total = partial + coord_cost(a, k, x);
        if total <= t2 {
            assert!(
                total % 2 == 0 && total >= 0,
                "Q_a must be a nonnegative integer"
            );
            coords.push(x);
            visit(coords, (total / 2) as usize);
            coords.pop();
        }
        return;
    }
    let budget = t2 - partial;
    for x in coord_candidates(a, k, budget) {
        let g = coord_cost(a, k, x);
        if g > budget {
            continue;
        }
        coords.push(x);
        enumerate_from(a, t2, k + 1, partial + g, sum + x, coords, visit);
        coords.pop();
    }
}

/// Visit every zero-sum vector with Q_a <= t_max, in lexicographic coordinate
/// order, together with its Q_a value.
pub fn enumerate_visit(a: usize, t_max: usize, mut visit: impl FnMut(&[i64], usize)) {
    assert!(a >= 2);
    let mut coords = Vec::with_capacity(a);
    enumerate_from(a, 2 * t_max as i64, 0, 0, 0, &mut coords, &mut visit);
}

/// All zero-sum vectors with Q_a <= t_max, lexicographically ordered.
pub fn enumerate(a: usize, t_max: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    enumerate_visit(a, t_max, |v, _| out.push(v.to_vec()));
    out
}

/// Upper bound on |z-exponent| appearing in any F_j term of a vector with
/// Q_a <= q_order (conservative, from the per-coordinate bound).
pub fn z_exp_bound(a: usize, q_order: usize) -> i64 {
    // a x^2 - (a-1)|x| <= 2T  =>  |x| <= ((a-1) + sqrt((a-1)^2 + 8 a T)) / (2a)
    let am1 = a as f64 - 1.0;
    let disc = (am1 * am1 + 8.0 * a as f64 * q_order as f64).sqrt();
    let xmax = ((am1 + disc) / (2.0 * a as f64)).ceil() as i64 + 1;
    a as i64 * xmax + a as i64 - 1
}

/// Klyachko's theta sum: sum of q^{Q_t(v)} over the constrained lattice.
pub fn klyachko_theta(t: usize, order: usize) -> UniSeries {
    assert!(t >= 1);
    let mut s = UniSeries::zero(order);
    if t == 1 {
        // the only zero-sum vector in Z^1 is the origin
        *s.coeff_mut(0) += 1;
        return s;
    }
    enumerate_visit(t, order, |_, q| {
        *s.coeff_mut(q) += 1;
    });
    s
}

/// Component sum F_j: z-exponent a*v_j + j for 1 <= j <= a-1, and
/// -a*v_{a-1} for j = 0. All z-exponents are congruent to j modulo a.
pub fn f_component(a: usize, j: usize, order: usize) -> BiSeries {
    assert!(a >= 2 && j < a);
    let mut rows = vec![LaurentPoly::zero(); order + 1];
    enumerate_visit(a, order, |v, q| {
        let e = if j == 0 {
            -(a as i64) * v[a - 1]
        } else {
            a as i64 * v[j] + j as i64
        };
        rows[q].add_term(e, BigInt::from(1));
    });
    BiSeries::from_rows(rows)
}

fn add_c_terms(a: usize, v: &[i64], q: usize, rows: &mut [LaurentPoly]) {
    for j in 1..a {
        rows[q].add_term(a as i64 * v[j] + j as i64, BigInt::from(1));
    }
    rows[q].add_term(-(a as i64) * v[a - 1], BigInt::from(1));
}

/// C_a(z;q) = sum_{j=0}^{a-1} F_j(z;q), enumerated in a single pass.
pub fn c_series_sequential(a: usize, order: usize) -> BiSeries {
    assert!(a >= 2);
    let mut rows = vec![LaurentPoly::zero(); order + 1];
    enumerate_visit(a, order, |v, q| add_c_terms(a, v, q, &mut rows));
    BiSeries::from_rows(rows)
}

/// Parallel C_a: the leading-coordinate range is partitioned across threads
/// and per-partition rows are summed. Integer addition makes the merge
/// bit-identical to the sequential result.
#[cfg(feature = "parallel")]
pub fn c_series_parallel(a: usize, order: usize) -> BiSeries {
    use rayon::prelude::*;
    assert!(a >= 2);
    let t2 = 2 * order as i64;
    let head: Vec<i64> = coord_candidates(a, 0, t2)
        .filter(|&x| coord_cost(a, 0, x) <= t2)
        .collect();
    let rows = head
        .par_iter()
        .map(|&x0| {
            let mut rows = vec![LaurentPoly::zero(); order + 1];
            let mut coords = vec![x0];
            enumerate_from(
                a,
                t2,
                1,
                coord_cost(a, 0, x0),
                x0,
                &mut coords,
                &mut |v, q| add_c_terms(a, v, q, &mut rows),
            );
            rows
        })
        .reduce(
            || vec![LaurentPoly::zero(); order + 1],
            |mut acc, part| {
                for (r, p) in acc.iter_mut().zip(&part) {
                    *r = &*r + p;
                }
                acc
            },
        );
    BiSeries::from_rows(rows)
}

/// C_a(z;q), parallel when the `parallel` feature is enabled.
pub fn c_series(a: usize, order: usize) -> BiSeries {
    #[cfg(feature = "parallel")]
    {
        c_series_parallel(a, order)
    }
    #[cfg(not(feature = "parallel"))]
    {
        c_series_sequential(a, order)
    }
}

/// The product side `R_a = E(q) E(q^a)^{a-2} [z^a;q^a]_inf / [z;q]_inf` as a
/// lazy factor list.
pub fn r_factors(a: usize) -> FactorList {
    assert!(a >= 2);
    let mut f = FactorList::new();
    f.push_num(Atom::Euler { scale: 1, power: 1 });
    if a > 2 {
        f.push_num(Atom::Euler {
            scale: a as u64,
            power: a as i64 - 2,
        });
    }
    f.push_num(Atom::Poch(PochAtom::new(1, a as i64, 0, a as u64)));
    f.push_num(Atom::Poch(PochAtom::new(
        1,
        -(a as i64),
        a as u64,
        a as u64,
    )));
    f.push_den(Atom::Poch(PochAtom::new(1, 1, 0, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, -1, 1, 1)));
    f
}

/// R_a expanded to exact rows (the q^0 pole cancels against [z^a;q^a]).
pub fn r_series(a: usize, order: usize) -> Result<BiSeries, Error> {
    r_factors(a).cancel_q0()?.expand(order)
}

/// C_a(q^r; q^M) as an exact univariate series, by enumerating the lattice
/// with the substituted exponent M*Q_a(v) + r*z_exp. The enumeration bound is
/// chosen so every unseen vector lands beyond the requested order.
pub fn c_specialized(a: usize, r: u64, m: u64, order: usize) -> Result<UniSeries, Error> {
    assert!(a >= 2);
    if r == 0 || m == 0 {
        return Err(Error::NonPositiveSubstitution);
    }
    let t_max = specialization_lattice_bound(a, r, m, order);
    let mut s = UniSeries::zero(order);
    let mut bad: Option<i64> = None;
    enumerate_visit(a, t_max, |v, q| {
        let mut exps = Vec::with_capacity(a);
        for j in 1..a {
            exps.push(a as i64 * v[j] + j as i64);
        }
        exps.push(-(a as i64) * v[a - 1]);
        for i in exps {
            let e = q as i64 * m as i64 + i * r as i64;
            if e < 0 {
                bad.get_or_insert(e);
            } else if e as usize <= order {
                *s.coeff_mut(e as usize) += 1;
            }
        }
    });
    match bad {
        Some(e) => Err(Error::NegativeSubstitutedExponent(e)),
        None => Ok(s),
    }
}

/// Smallest enumeration bound T such that every vector with Q_a > T lands
/// beyond `order` under z -> q^r, q -> q^m, using the conservative z-bound.
fn specialization_lattice_bound(a: usize, r: u64, m: u64, order: usize) -> usize {
    let lands_beyond = |q: usize| m as i64 * q as i64 - r as i64 * z_exp_bound(a, q) > order as i64;
    // past s* = 2ar/m the landing bound is monotone increasing in Q
    let s_star = 2.0 * a as f64 * r as f64 / m as f64;
    let q_star = ((s_star * s_star - ((a - 1) * (a - 1)) as f64) / (8.0 * a as f64)).max(0.0);
    let mut q = q_star as usize;
    while !lands_beyond(q + 1) {
        q += 1;
    }
    q
}

/// D_a(q^r; q^M) through the lattice route:
/// (E(q^{aM})^a / E(q^M)) * C_a(q^r; q^M).
pub fn d_specialized(a: usize, r: u64, m: u64, order: usize) -> Result<UniSeries, Error> {
    let c = c_specialized(a, r, m, order)?;
    let quot = euler_series(a as u64 * m, order)
        .pow(a as i64)?
        .mul(&euler_series(m, order).recip()?);
    Ok(c.mul(&quot))
}

/// D_a(q^r; q^M) through the product route:
/// E(q^{aM})^{2a-2} [q^{ar};q^{aM}]_inf / [q^r;q^M]_inf.
pub fn d_product_form(a: usize, r: u64, m: u64, order: usize) -> Result<UniSeries, Error> {
    assert!(a >= 2);
    if r == 0 || r >= m {
        return Err(Error::InvalidArgument(format!(
            "product form requires 1 <= r < M, got r = {r}, M = {m}"
        )));
    }
    let mut f = FactorList::new();
    f.push_num(Atom::Euler {
        scale: a as u64,
        power: 2 * a as i64 - 2,
    });
    f.push_num(Atom::Poch(PochAtom::new(1, a as i64, 0, a as u64)));
    f.push_num(Atom::Poch(PochAtom::new(
        1,
        -(a as i64),
        a as u64,
        a as u64,
    )));
    f.push_den(Atom::Poch(PochAtom::new(1, 1, 0, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, -1, 1, 1)));
    f.substitute_expand(r, m, order)
}

/// Check dst = z^{a-1} * src(zq; q) term by term: the coefficient of
/// z^i q^n in src must equal the coefficient of z^{i+a-1} q^{n+i} in dst.
/// Both directions of the bijection are checked over the region where both
/// truncations are stored. Returns the first failing (q, z) or the number of
/// positions compared.
pub fn check_shift_relation(
    src: &BiSeries,
    dst: &BiSeries,
    a: usize,
) -> Result<usize, (usize, i64)> {
    let shift = a as i64 - 1;
    let mut compared = 0usize;
    for (n, row) in src.rows().iter().enumerate() {
        for (i, c) in row.terms() {
            let landing = n as i64 + i;
            if landing >= 0 && landing <= dst.order() as i64 {
                if dst.coeff(landing as usize, i + shift) != *c {
                    return Err((n, i));
                }
                compared += 1;
            }
        }
    }
    for (n2, row) in dst.rows().iter().enumerate() {
        for (i2, c) in row.terms() {
            let pre_row = n2 as i64 - (i2 - shift);
            if pre_row >= 0 && pre_row <= src.order() as i64 {
                if src.coeff(pre_row as usize, i2 - shift) != *c {
                    return Err((n2, i2));
                }
                compared += 1;
            }
        }
    }
    Ok(compared)
}
