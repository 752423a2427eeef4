//! Per-identity builders: each entry constructs both sides in cleared
//! denominator form (or windowed form for the conjecture scans) and compares
//! exact coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{IdentityId, IdentityParams};
use crate::pcore::{count_tcores, crank_counts, tcore_series, PARTITION_GUARD};
use crate::products::{bracket, euler_series, gaussian_poly};
use crate::report::{Discrepancy, Status, VerificationReport};
use crate::saito::{coprime_restricted_product, mobius_product, verify_case2, verify_case3};
use crate::series::{Atom, BiSeries, FactorList, LaurentPoly, PochAtom, UniSeries};
use crate::theta::{c_series, check_shift_relation, f_component, klyachko_theta, r_series};
use crate::Error;

fn bad(id: IdentityId, msg: impl Into<String>) -> Error {
    Error::BadIdentityParams {
        id: id.name().into(),
        msg: msg.into(),
    }
}

fn req_min(id: IdentityId, params: &IdentityParams, name: &str, min: i64) -> Result<i64, Error> {
    let v = params.get(id, name)?;
    if v < min {
        return Err(bad(id, format!("{name} must be >= {min}, got {v}")));
    }
    Ok(v)
}

fn params_map(params: &IdentityParams) -> BTreeMap<String, i64> {
    params.values.clone()
}

fn bi_report(
    id: IdentityId,
    params: &IdentityParams,
    lhs: &BiSeries,
    rhs: &BiSeries,
) -> VerificationReport {
    let disc = lhs
        .first_difference(rhs)
        .map(|(q, z, a, b)| Discrepancy::unequal(q, Some(z), &a, &b));
    let status = if disc.is_none() {
        Status::Pass
    } else {
        Status::Fail
    };
    VerificationReport::new(id.name(), params_map(params), status, params.order, disc)
}

fn uni_report(
    id: IdentityId,
    params: &IdentityParams,
    lhs: &UniSeries,
    rhs: &UniSeries,
) -> VerificationReport {
    let disc = lhs
        .first_difference(rhs)
        .map(|(q, a, b)| Discrepancy::unequal(q, None, &a, &b));
    let status = if disc.is_none() {
        Status::Pass
    } else {
        Status::Fail
    };
    VerificationReport::new(id.name(), params_map(params), status, params.order, disc)
}

pub(super) fn dispatch(
    id: IdentityId,
    params: &IdentityParams,
) -> Result<VerificationReport, Error> {
    match id {
        IdentityId::Thm1 => thm1(id, params),
        IdentityId::Cazq2 => cazq2(id, params),
        IdentityId::Kid => kid(id, params),
        IdentityId::Eprop => eprop(id, params),
        IdentityId::Dprod => {
            let n = req_min(id, params, "N", 2)? as u64;
            verify_case2(n, params.order)
        }
        IdentityId::Sprop => {
            let n = req_min(id, params, "N", 2)? as u64;
            verify_case3(n, params.order)
        }
        IdentityId::Pcore1 => pcore1(id, params),
        IdentityId::Atq => atq(id, params),
        IdentityId::Atqfin => atqfin(id, params),
        IdentityId::Coratq1 => coratq1(id, params),
        IdentityId::Coratq2 => coratq(id, params, false),
        IdentityId::Coratq3 => coratq(id, params, true),
        IdentityId::Crankgen => crankgen(id, params),
        IdentityId::Aci => aci(id, params),
        IdentityId::Res1 => res1(id, params),
        IdentityId::Res2 => res2(id, params),
        IdentityId::Ekin => ekin(id, params),
        IdentityId::Cazqzero => cazqzero(id, params),
        IdentityId::FunceqR => funceq_r(id, params),
        IdentityId::FunceqC => funceq_c(id, params),
        IdentityId::FunceqF => funceq_f(id, params),
        IdentityId::Conj2a => conj2a(id, params),
        IdentityId::Conj2b => conj2b(id, params),
        IdentityId::Conj2c => conj2c(id, params),
    }
}

/// The main product identity in cleared form:
/// C_a * [z;q] = E(q) E(q^a)^{a-2} [z^a;q^a].
fn thm1(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 2)? as usize;
    let order = params.order;
    let lhs = c_series(a, order).mul(&bracket(1, 0, 1)?.expand(order)?);
    let mut rhs = bracket(a as i64, 0, a as u64)?;
    rhs.push_num(Atom::Euler { scale: 1, power: 1 });
    if a > 2 {
        rhs.push_num(Atom::Euler {
            scale: a as u64,
            power: a as i64 - 2,
        });
    }
    Ok(bi_report(id, params, &lhs, &rhs.expand(order)?))
}

/// The a = 2 case as a Jacobi-triple-product shape:
/// sum q^{2n^2+n}(z^{2n+1} + z^{-2n}) = prod (1+zq^{n-1})(1+z^-1 q^n)(1-q^n),
/// compared against the generic lattice route.
fn cazq2(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    let mut rows = vec![LaurentPoly::zero(); order + 1];
    let mut n = -(order as i64) - 2;
    while n <= order as i64 + 2 {
        let q = 2 * n * n + n;
        if (0..=order as i64).contains(&q) {
            rows[q as usize].add_term(2 * n + 1, BigInt::from(1));
            rows[q as usize].add_term(-2 * n, BigInt::from(1));
        }
        n += 1;
    }
    let direct = BiSeries::from_rows(rows);
    let mut product = FactorList::new();
    product.push_num(Atom::Poch(PochAtom::new(-1, 1, 0, 1)));
    product.push_num(Atom::Poch(PochAtom::new(-1, -1, 1, 1)));
    product.push_num(Atom::Euler { scale: 1, power: 1 });
    let rhs = product.expand(order)?;
    let r = bi_report(id, params, &direct, &rhs);
    if r.status != Status::Pass {
        return Ok(r);
    }
    Ok(bi_report(id, params, &direct, &c_series(2, order)))
}

/// Klyachko: the constrained lattice sum equals E(q^t)^t / E(q).
fn kid(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let t = req_min(id, params, "t", 1)? as usize;
    let order = params.order;
    let product = euler_series(t as u64, order)
        .pow(t as i64)?
        .mul(&euler_series(1, order).recip()?);
    Ok(uni_report(id, params, &klyachko_theta(t, order), &product))
}

/// Möbius product identity: prod_{d|M} E(q^d)^mu(d) = prod_{(n,M)=1} (1-q^n).
fn eprop(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let m = req_min(id, params, "M", 1)? as u64;
    let order = params.order;
    Ok(uni_report(
        id,
        params,
        &mobius_product(m, order),
        &coprime_restricted_product(m, order),
    ))
}

/// t-core generating function against brute-force hook-length counts.
fn pcore1(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let t = req_min(id, params, "t", 1)? as u64;
    let order = params.order.min(PARTITION_GUARD as usize);
    let series = tcore_series(t, order);
    for n in 0..=order {
        let expect = BigInt::from(count_tcores(t, n as u64)?);
        if series.coeff(n) != &expect {
            return Ok(VerificationReport::new(
                id.name(),
                params_map(params),
                Status::Fail,
                order,
                Some(Discrepancy::unequal(n, None, series.coeff(n), &expect)),
            ));
        }
    }
    Ok(VerificationReport::new(
        id.name(),
        params_map(params),
        Status::Pass,
        order,
        None,
    ))
}

/// q-binomial-theorem quotient at a = q^i, t = q^j: equality with the series
/// side and nonnegativity of the product side.
fn atq(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let i = req_min(id, params, "i", 1)? as u64;
    let j = req_min(id, params, "j", 1)? as u64;
    let order = params.order;
    // (q^{i+j};q)inf / ((q^i;q)inf (q^j;q)inf)
    let mut f = FactorList::new();
    f.push_num(Atom::Poch(PochAtom::new(1, 0, i + j, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, 0, i, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, 0, j, 1)));
    let lhs = f.expand_univariate(order)?;
    // sum_{s>=0} t^s / ((a q^s;q)inf (q)_s) specialized
    let mut rhs = UniSeries::zero(order);
    let mut s = 0u64;
    while j * s <= order as u64 {
        let mut term = UniSeries::monomial(order, (j * s) as usize, 1);
        let mut denom = UniSeries::one(order);
        for k in 1..=s {
            denom.mul_two_term(1, k as usize);
        }
        let mut g = i + s;
        while g <= order as u64 {
            denom.mul_two_term(1, g as usize);
            g += 1;
        }
        term = term.mul(&denom.recip()?);
        rhs = &rhs + &term;
        s += 1;
    }
    let r = uni_report(id, params, &lhs, &rhs);
    if r.status != Status::Pass {
        return Ok(r);
    }
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &lhs.nonneg_scan(),
        false,
    ))
}

/// Finite analogue with Gaussian polynomials, specialized z1 = q^i, z2 = q^j.
fn atqfin(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let cap = req_min(id, params, "L", 0)? as u64;
    let i = req_min(id, params, "i", 1)? as u64;
    let j = req_min(id, params, "j", 1)? as u64;
    let order = params.order;
    // left: (q^{i+j};q)_L / ((q^i;q)_L (q^j;q)_L)
    let mut lhs = UniSeries::one(order);
    for k in 0..cap {
        lhs.mul_two_term(1, (i + j + k) as usize);
    }
    for k in 0..cap {
        lhs.div_two_term(1, (i + k) as usize);
        lhs.div_two_term(1, (j + k) as usize);
    }
    // right: sum_s [L s]_q q^{is} / ((q^{i+L-s};q)_s (q^{j+s};q)_{L-s})
    let mut rhs = UniSeries::zero(order);
    for s in 0..=cap {
        let gauss = gaussian_poly((cap - s) as usize, s as usize);
        let mut term = UniSeries::zero(order);
        for (k, c) in gauss.coeffs().iter().enumerate() {
            let e = k + (i * s) as usize;
            if e <= order {
                *term.coeff_mut(e) += c;
            }
        }
        for k in 0..s {
            term.div_two_term(1, (i + cap - s + k) as usize);
        }
        for k in 0..cap - s {
            term.div_two_term(1, (j + s + k) as usize);
        }
        rhs = &rhs + &term;
    }
    let r = uni_report(id, params, &lhs, &rhs);
    if r.status != Status::Pass {
        return Ok(r);
    }
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &lhs.nonneg_scan(),
        false,
    ))
}

/// Corollary (i): prod (1-q^{Mn+a+b}) / ((1-q^{Mn+a})(1-q^{Mn+b})) >= 0.
fn coratq1(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 1)? as u64;
    let b = req_min(id, params, "b", 1)? as u64;
    let m = req_min(id, params, "M", 1)? as u64;
    let order = params.order;
    let mut f = FactorList::new();
    f.push_num(Atom::Poch(PochAtom::new(1, 0, a + b, m)));
    f.push_den(Atom::Poch(PochAtom::new(1, 0, a, m)));
    f.push_den(Atom::Poch(PochAtom::new(1, 0, b, m)));
    let s = f.expand_univariate(order)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &s.nonneg_scan(),
        false,
    ))
}

/// Corollaries (ii) and (iii): E(q^m) E(q^n) [E(q^{mn})] / E(q) >= 0 for
/// m, n > 1, with (m, n) = (2, 2) excluded from the three-factor form.
fn coratq(
    id: IdentityId,
    params: &IdentityParams,
    with_mn: bool,
) -> Result<VerificationReport, Error> {
    let m = req_min(id, params, "m", 2)? as u64;
    let n = req_min(id, params, "n", 2)? as u64;
    if with_mn && m == 2 && n == 2 {
        return Err(bad(id, "the pair (2,2) is excluded by the hypothesis"));
    }
    let order = params.order;
    let mut s = euler_series(m, order).mul(&euler_series(n, order));
    if with_mn {
        s = s.mul(&euler_series(m * n, order));
    }
    s = s.mul(&euler_series(1, order).recip()?);
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &s.nonneg_scan(),
        false,
    ))
}

/// The excluded CORATQ3 pair (2,2), expanded for documentation: returns the
/// first negative coefficient of E(q^2)^2 E(q^4) / E(q).
pub fn coratq3_excluded_pair(order: usize) -> Option<(usize, BigInt)> {
    let s = euler_series(2, order)
        .pow(2)
        .expect("unit")
        .mul(&euler_series(4, order))
        .mul(&euler_series(1, order).recip().expect("unit"));
    match s.nonneg_scan() {
        crate::series::ScanOutcome::AllNonnegative => None,
        crate::series::ScanOutcome::Negative { q_exp, value, .. } => Some((q_exp, value)),
    }
}

/// The crank generating function (1-z) E(q) / [z;q]_inf with exact rows.
pub(crate) fn crank_series(order: usize) -> Result<BiSeries, Error> {
    let mut f = FactorList::new();
    f.push_num(Atom::Poly(LaurentPoly::from_terms(&[(0, 1), (1, -1)])));
    f.push_num(Atom::Euler { scale: 1, power: 1 });
    f.push_den(Atom::Poch(PochAtom::new(1, 1, 0, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, -1, 1, 1)));
    f.cancel_q0()?.expand(order)
}

/// Brute-force crank table M(m, n) for 0 <= n <= nmax.
pub fn crank_table(nmax: usize) -> Result<Vec<BTreeMap<i64, u64>>, Error> {
    if nmax > 25 {
        return Err(Error::GuardExceeded(format!(
            "crank_table enumerates all partitions; nmax = {nmax} exceeds 25"
        )));
    }
    Ok((0..=nmax as u64).map(crank_counts).collect())
}

/// Crank series against the brute-force table: the q^1 row must be
/// z + z^-1 - 1 (the known combinatorial anomaly, excluded from the oracle
/// comparison) and every later row must match M(m, n) exactly.
fn crankgen(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    if order > 25 {
        return Err(bad(id, "oracle comparison is guarded at order 25"));
    }
    let series = crank_series(order)?;
    let fail = |q: usize, z: i64, lhs: &BigInt, rhs: &BigInt| {
        VerificationReport::new(
            id.name(),
            params_map(params),
            Status::Fail,
            order,
            Some(Discrepancy::unequal(q, Some(z), lhs, rhs)),
        )
    };
    if *series.row(0) != LaurentPoly::one() {
        return Ok(fail(0, 0, &series.coeff(0, 0), &BigInt::from(1)));
    }
    if order >= 1 {
        let anomaly = LaurentPoly::from_terms(&[(1, 1), (-1, 1), (0, -1)]);
        if *series.row(1) != anomaly {
            return Ok(fail(1, 0, &series.coeff(1, 0), &BigInt::from(-1)));
        }
    }
    for n in 2..=order {
        let counts = crank_counts(n as u64);
        let mut expect = LaurentPoly::zero();
        for (&m, &c) in &counts {
            expect.add_term(m, BigInt::from(c));
        }
        if *series.row(n) != expect {
            let lo = series
                .row(n)
                .min_exp()
                .into_iter()
                .chain(expect.min_exp())
                .min()
                .unwrap();
            let hi = series
                .row(n)
                .max_exp()
                .into_iter()
                .chain(expect.max_exp())
                .max()
                .unwrap();
            for z in lo..=hi {
                if series.coeff(n, z) != expect.coeff(z) {
                    return Ok(fail(n, z, &series.coeff(n, z), &expect.coeff(z)));
                }
            }
        }
    }
    Ok(VerificationReport::new(
        id.name(),
        params_map(params),
        Status::Pass,
        order,
        None,
    ))
}

/// (1+z) times the crank series has nonnegative coefficients.
fn aci(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    let mut s = crank_series(order)?;
    s.mul_laurent_q0(&LaurentPoly::from_terms(&[(0, 1), (1, 1)]));
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &s.nonneg_scan(),
        false,
    ))
}

/// E(q^2) [z^4;q^2] / ([z^2;q^2] [qz^3;q^2]) >= 0.
fn res1(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    let f = bracket(4, 0, 2)?
        .product(bracket(2, 0, 2)?.inverted())
        .product(bracket(3, 1, 2)?.inverted());
    let mut f = f;
    f.push_num(Atom::Euler { scale: 2, power: 1 });
    let s = f.cancel_q0()?.expand(order)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &s.nonneg_scan(),
        false,
    ))
}

/// E(q^3) (z^2;q^3) / ((q^3 z^-1;q^3) (z;q)) >= 0.
fn res2(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    let mut f = FactorList::new();
    f.push_num(Atom::Euler { scale: 3, power: 1 });
    f.push_num(Atom::Poch(PochAtom::new(1, 2, 0, 3)));
    f.push_den(Atom::Poch(PochAtom::new(1, -1, 3, 3)));
    f.push_den(Atom::Poch(PochAtom::new(1, 1, 0, 1)));
    let s = f.cancel_q0()?.expand(order)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        order,
        &s.nonneg_scan(),
        false,
    ))
}

/// Ekin's identity in cleared form. Both sides are multiplied by
/// [z;q][z^3;q][z^3;q^3][z^-3 q;q^3][z^-3 q^2;q^3] so that every factor list
/// is denominator-free.
fn ekin(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let order = params.order;
    let lhs = bracket(2, 0, 1)?
        .product(bracket(3, 0, 3)?)
        .product(bracket(-3, 1, 3)?)
        .product(bracket(-3, 2, 3)?);
    let mut lhs = lhs;
    lhs.push_num(Atom::Euler { scale: 1, power: 1 });

    let mut term1 = bracket(1, 0, 1)?
        .product(bracket(3, 0, 1)?)
        .product(bracket(-3, 2, 3)?);
    term1.push_num(Atom::Euler { scale: 3, power: 1 });
    let mut term2 = bracket(1, 0, 1)?
        .product(bracket(3, 0, 1)?)
        .product(bracket(-3, 1, 3)?);
    term2.push_num(Atom::Euler { scale: 3, power: 1 });
    term2.push_num(Atom::Poly(LaurentPoly::term(1, 1)));

    let rhs = term1.expand(order)?.add(&term2.expand(order)?);
    Ok(bi_report(id, params, &lhs.expand(order)?, &rhs))
}

/// Residue-class form of the root-of-unity vanishing: C_a reduced modulo z^a
/// has equal residue-class sums in every row.
fn cazqzero(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 2)? as usize;
    let order = params.order;
    let reduced = c_series(a, order).reduce_mod_z_pow(a as i64);
    for (n, row) in reduced.rows().iter().enumerate() {
        let c0 = row.coeff(0);
        for i in 1..a as i64 {
            if row.coeff(i) != c0 {
                return Ok(VerificationReport::new(
                    id.name(),
                    params_map(params),
                    Status::Fail,
                    order,
                    Some(Discrepancy::unequal(n, Some(i), &row.coeff(i), &c0)),
                ));
            }
        }
    }
    Ok(VerificationReport::new(
        id.name(),
        params_map(params),
        Status::Pass,
        order,
        None,
    ))
}

fn shift_report(
    id: IdentityId,
    params: &IdentityParams,
    outcome: Result<usize, (usize, i64)>,
) -> VerificationReport {
    match outcome {
        Ok(compared) => {
            debug_assert!(compared > 0);
            VerificationReport::new(
                id.name(),
                params_map(params),
                Status::Pass,
                params.order,
                None,
            )
        }
        Err((q, z)) => VerificationReport::new(
            id.name(),
            params_map(params),
            Status::Fail,
            params.order,
            Some(Discrepancy {
                q,
                z: Some(z),
                value: None,
                lhs: None,
                rhs: None,
            }),
        ),
    }
}

/// R_a(zq;q) = z^{-(a-1)} R_a(z;q) as an exact term bijection.
fn funceq_r(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 2)? as usize;
    let r = r_series(a, params.order)?;
    Ok(shift_report(id, params, check_shift_relation(&r, &r, a)))
}

/// C_a(zq;q) = z^{-(a-1)} C_a(z;q).
fn funceq_c(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 2)? as usize;
    let c = c_series(a, params.order);
    Ok(shift_report(id, params, check_shift_relation(&c, &c, a)))
}

/// The component chain F_j(zq) = z^{-(a-1)} F_{j-1} (2 <= j <= a-1),
/// F_0(zq) = z^{-(a-1)} F_{a-1}, and F_1(zq) = z^{-(a-1)} F_0.
fn funceq_f(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 2)? as usize;
    let order = params.order;
    let f: Vec<BiSeries> = (0..a).map(|j| f_component(a, j, order)).collect();
    for j in 2..a {
        if let Err(pos) = check_shift_relation(&f[j], &f[j - 1], a) {
            return Ok(shift_report(id, params, Err(pos)));
        }
    }
    if let Err(pos) = check_shift_relation(&f[0], &f[a - 1], a) {
        return Ok(shift_report(id, params, Err(pos)));
    }
    if let Err(pos) = check_shift_relation(&f[1], &f[0], a) {
        return Ok(shift_report(id, params, Err(pos)));
    }
    Ok(VerificationReport::new(
        id.name(),
        params_map(params),
        Status::Pass,
        order,
        None,
    ))
}

/// Conjecture 2(i): E(q) / ((z;q)inf (q z^-p;q)inf), scanned in a window.
fn conj2a(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let p = req_min(id, params, "p", 1)?;
    let window = params
        .window
        .ok_or_else(|| Error::WindowRequired(id.name().into()))?;
    let mut f = FactorList::new();
    f.push_num(Atom::Euler { scale: 1, power: 1 });
    f.push_den(Atom::Poch(PochAtom::new(1, 1, 0, 1)));
    f.push_den(Atom::Poch(PochAtom::new(1, -p, 1, 1)));
    let s = f.expand_windowed(params.order, window)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        params.order,
        &s.nonneg_scan(),
        true,
    ))
}

/// Conjecture 2(ii): E(q^{ma+nb}) / ((q^a;q^{ma+nb})inf (q^b;q^{ma+nb})inf),
/// a univariate scan.
fn conj2b(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 1)? as u64;
    let b = req_min(id, params, "b", 1)? as u64;
    let m = req_min(id, params, "m", 1)? as u64;
    let n = req_min(id, params, "n", 1)? as u64;
    let step = m * a + n * b;
    let mut f = FactorList::new();
    f.push_num(Atom::Euler {
        scale: step,
        power: 1,
    });
    f.push_den(Atom::Poch(PochAtom::new(1, 0, a, step)));
    f.push_den(Atom::Poch(PochAtom::new(1, 0, b, step)));
    let s = f.expand_univariate(params.order)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        params.order,
        &s.nonneg_scan(),
        true,
    ))
}

/// Conjecture 2(iii): [z^a;q] E(q) / ([z;q] [z^{a+1};q]), scanned in a
/// window. The numerator q^0 factor cancels only one of the two poles, so
/// windowed expansion is required throughout.
fn conj2c(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    let a = req_min(id, params, "a", 1)?;
    let window = params
        .window
        .ok_or_else(|| Error::WindowRequired(id.name().into()))?;
    let f = bracket(a, 0, 1)?
        .product(bracket(1, 0, 1)?.inverted())
        .product(bracket(a + 1, 0, 1)?.inverted());
    let mut f = f;
    f.push_num(Atom::Euler { scale: 1, power: 1 });
    let s = f.expand_windowed(params.order, window)?;
    Ok(VerificationReport::from_scan(
        id.name(),
        params_map(params),
        params.order,
        &s.nonneg_scan(),
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{verify, IdentityId, IdentityParams};
    use super::*;

    fn ok(id: IdentityId, params: IdentityParams) {
        let r = verify(id, &params).unwrap();
        assert!(r.is_ok(), "{id} failed: {:?}", r.first_discrepancy);
    }

    #[test]
    fn thm1_small_orders() {
        for a in 2..=4 {
            ok(IdentityId::Thm1, IdentityParams::new(15).with("a", a));
        }
    }

    #[test]
    fn cazq2_matches_both_routes() {
        ok(IdentityId::Cazq2, IdentityParams::new(25));
    }

    #[test]
    fn kid_and_eprop() {
        ok(IdentityId::Kid, IdentityParams::new(30).with("t", 3));
        ok(IdentityId::Eprop, IdentityParams::new(40).with("M", 6));
    }

    #[test]
    fn pcore1_small() {
        ok(IdentityId::Pcore1, IdentityParams::new(12).with("t", 3));
    }

    #[test]
    fn atq_point() {
        ok(
            IdentityId::Atq,
            IdentityParams::new(25).with("i", 1).with("j", 2),
        );
    }

    #[test]
    fn atqfin_point() {
        ok(
            IdentityId::Atqfin,
            IdentityParams::new(25)
                .with("L", 3)
                .with("i", 2)
                .with("j", 1),
        );
        // L = 0: both sides are 1
        ok(
            IdentityId::Atqfin,
            IdentityParams::new(10)
                .with("L", 0)
                .with("i", 1)
                .with("j", 1),
        );
    }

    #[test]
    fn coratq_points() {
        ok(
            IdentityId::Coratq1,
            IdentityParams::new(30)
                .with("a", 1)
                .with("b", 2)
                .with("M", 3),
        );
        ok(
            IdentityId::Coratq2,
            IdentityParams::new(30).with("m", 2).with("n", 2),
        );
        ok(
            IdentityId::Coratq3,
            IdentityParams::new(30).with("m", 2).with("n", 3),
        );
        assert!(verify(
            IdentityId::Coratq3,
            &IdentityParams::new(10).with("m", 2).with("n", 2)
        )
        .is_err());
    }

    #[test]
    fn excluded_pair_goes_negative_at_q4() {
        let (n, value) = coratq3_excluded_pair(30).expect("known negative");
        assert_eq!(n, 4);
        assert_eq!(value, BigInt::from(-1));
    }

    #[test]
    fn crankgen_and_aci() {
        ok(IdentityId::Crankgen, IdentityParams::new(12));
        ok(IdentityId::Aci, IdentityParams::new(25));
        assert!(verify(IdentityId::Crankgen, &IdentityParams::new(30)).is_err());
    }

    #[test]
    fn res_props() {
        ok(IdentityId::Res1, IdentityParams::new(25));
        ok(IdentityId::Res2, IdentityParams::new(25));
    }

    #[test]
    fn ekin_cleared() {
        ok(IdentityId::Ekin, IdentityParams::new(20));
    }

    #[test]
    fn structural_suite_small() {
        for a in 2..=4 {
            ok(IdentityId::Cazqzero, IdentityParams::new(12).with("a", a));
            ok(IdentityId::FunceqR, IdentityParams::new(15).with("a", a));
            ok(IdentityId::FunceqC, IdentityParams::new(15).with("a", a));
            ok(IdentityId::FunceqF, IdentityParams::new(15).with("a", a));
        }
    }

    #[test]
    fn conjecture_scans_small() {
        let r = verify(
            IdentityId::Conj2a,
            &IdentityParams::new(25).with("p", 2).with_window(-15, 15),
        )
        .unwrap();
        assert_eq!(r.status, Status::ScanPass);
        let r = verify(
            IdentityId::Conj2b,
            &IdentityParams::new(40)
                .with("a", 1)
                .with("b", 2)
                .with("m", 2)
                .with("n", 1),
        )
        .unwrap();
        assert_eq!(r.status, Status::ScanPass);
        let r = verify(
            IdentityId::Conj2c,
            &IdentityParams::new(25).with("a", 2).with_window(-15, 15),
        )
        .unwrap();
        assert_eq!(r.status, Status::ScanPass);
    }

    #[test]
    fn crank_table_guard() {
        assert!(crank_table(26).is_err());
        let t = crank_table(4).unwrap();
        assert_eq!(t[0].get(&0), Some(&1));
        let total: u64 = t[4].values().sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn crank_series_fails_scan_exactly_at_the_anomaly() {
        use crate::series::ScanOutcome;
        match crank_series(10).unwrap().nonneg_scan() {
            ScanOutcome::Negative {
                q_exp,
                z_exp,
                value,
            } => {
                assert_eq!((q_exp, z_exp), (1, Some(0)));
                assert_eq!(value, BigInt::from(-1));
            }
            ScanOutcome::AllNonnegative => panic!("the z^0 q^1 coefficient must be -1"),
        }
    }
}
