//! The Saito product S_N(q) = E(q^N)^phi(N) / prod_{d|N} E(q^d)^{mu(d)}, the
//! Möbius product identity, the three-case decomposition of the
//! nonnegativity proof, and per-N nonnegativity reports.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::numth::{coprime_residues_halved, divisors, euler_phi, factorize, mobius};
use crate::products::euler_series;
use crate::report::{Discrepancy, NonnegReport, Status, VerificationReport};
use crate::series::UniSeries;
use crate::theta::d_specialized;
use crate::Error;

/// Case split of the nonnegativity proof, driven by the factorization of N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaitoCase {
    /// N = p^alpha.
    PrimePower { p: u64, alpha: u32 },
    /// N = p * M with M odd, p not dividing M, M >= 3.
    CaseTwo { p: u64, m: u64 },
    /// N = p^alpha * M with alpha >= 2; reduces to N' = p * M.
    CaseThree {
        p: u64,
        alpha: u32,
        m: u64,
        n_prime: u64,
    },
}

/// Choose p = 2 for even N (making M odd automatically), else the smallest
/// prime factor; route M = 1 to the prime-power case.
pub fn classify(n: u64) -> Result<SaitoCase, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "classify requires N >= 2, got {n}"
        )));
    }
    let (p, alpha) = factorize(n)[0];
    let m = n / p.pow(alpha);
    Ok(if m == 1 {
        SaitoCase::PrimePower { p, alpha }
    } else if alpha == 1 {
        SaitoCase::CaseTwo { p, m }
    } else {
        SaitoCase::CaseThree {
            p,
            alpha,
            m,
            n_prime: p * m,
        }
    })
}

/// Prefactor exponent of the eta form: (N phi(N) - sum_{d|N} d mu(d)) / 24.
pub fn saito_prefactor(n: u64) -> Ratio<i64> {
    assert!(n >= 1);
    let lead = n as i64 * euler_phi(n) as i64;
    let tail: i64 = divisors(n)
        .iter()
        .map(|&d| d as i64 * mobius(d) as i64)
        .sum();
    Ratio::new(lead - tail, 24)
}

/// S_N(q) as (prefactor exponent, exact truncated series).
pub fn saito_series(n: u64, order: usize) -> (Ratio<i64>, UniSeries) {
    assert!(n >= 1);
    let mut num = euler_series(n, order)
        .pow(euler_phi(n) as i64)
        .expect("unit constant");
    for d in divisors(n) {
        let mu = mobius(d);
        if mu != 0 {
            num = num.mul(
                &euler_series(d, order)
                    .pow(-mu as i64)
                    .expect("unit constant"),
            );
        }
    }
    (saito_prefactor(n), num)
}

/// prod_{d|M} E(q^d)^{mu(d)}, the left side of the Möbius product identity.
pub fn mobius_product(m: u64, order: usize) -> UniSeries {
    assert!(m >= 1);
    let mut out = UniSeries::one(order);
    for d in divisors(m) {
        let mu = mobius(d);
        if mu != 0 {
            out = out.mul(
                &euler_series(d, order)
                    .pow(mu as i64)
                    .expect("unit constant"),
            );
        }
    }
    out
}

/// prod_{n>=1, gcd(n,M)=1} (1 - q^n): the right side of the Möbius product
/// identity, built factor by factor as an independent route.
pub fn coprime_restricted_product(m: u64, order: usize) -> UniSeries {
    assert!(m >= 1);
    let mut out = UniSeries::one(order);
    for n in 1..=order {
        if num_integer::gcd(n as u64, m) == 1 {
            out.mul_two_term(1, n);
        }
    }
    out
}

fn report_equality(
    id: &str,
    params: BTreeMap<String, i64>,
    order: usize,
    lhs: &UniSeries,
    rhs: &UniSeries,
) -> VerificationReport {
    match lhs.first_difference(rhs) {
        None => VerificationReport::new(id, params, Status::Pass, order, None),
        Some((n, a, b)) => VerificationReport::new(
            id,
            params,
            Status::Fail,
            order,
            Some(Discrepancy::unequal(n, None, &a, &b)),
        ),
    }
}

/// Case 2 decomposition: prod_{r coprime, r <= (M-1)/2} D_p(q^r; q^M) must
/// equal S_N(q) coefficient for coefficient.
pub fn verify_case2(n: u64, order: usize) -> Result<VerificationReport, Error> {
    let SaitoCase::CaseTwo { p, m } = classify(n)? else {
        return Err(Error::InvalidArgument(format!(
            "N = {n} is not a Case 2 integer"
        )));
    };
    let mut product = UniSeries::one(order);
    for r in coprime_residues_halved(m)? {
        product = product.mul(&d_specialized(p as usize, r, m, order)?);
    }
    let (_, s) = saito_series(n, order);
    let mut params = BTreeMap::new();
    params.insert("N".to_string(), n as i64);
    params.insert("p".to_string(), p as i64);
    params.insert("M".to_string(), m as i64);
    Ok(report_equality("DPROD", params, order, &product, &s))
}

/// Case 3 decomposition: S_N = (E(q^{p^{alpha-1} N'})^{p^{alpha-1}} /
/// E(q^{N'}))^{(p-1) phi(M)} * S_{N'}, plus the divisor-set identity
/// prod_{d|N} E^{mu} = prod_{d|N'} E^{mu}.
pub fn verify_case3(n: u64, order: usize) -> Result<VerificationReport, Error> {
    let SaitoCase::CaseThree {
        p,
        alpha,
        m,
        n_prime,
    } = classify(n)?
    else {
        return Err(Error::InvalidArgument(format!(
            "N = {n} is not a Case 3 integer"
        )));
    };
    let mut params = BTreeMap::new();
    params.insert("N".to_string(), n as i64);
    params.insert("p".to_string(), p as i64);
    params.insert("alpha".to_string(), alpha as i64);
    params.insert("M".to_string(), m as i64);
    params.insert("Nprime".to_string(), n_prime as i64);

    // squarefree divisors of N and N' coincide
    let lhs = mobius_product(n, order);
    let rhs = mobius_product(n_prime, order);
    if lhs != rhs {
        return Ok(report_equality("SPROP", params, order, &lhs, &rhs));
    }

    let t = p.pow(alpha - 1);
    let quotient = euler_series(t * n_prime, order)
        .pow(t as i64)?
        .mul(&euler_series(n_prime, order).recip()?);
    let exponent = (p as i64 - 1) * euler_phi(m) as i64;
    let first = quotient.pow(exponent)?;
    let (_, s_nprime) = saito_series(n_prime, order);
    let (_, s_n) = saito_series(n, order);
    Ok(report_equality(
        "SPROP",
        params,
        order,
        &first.mul(&s_nprime),
        &s_n,
    ))
}

/// Scan S_N(q) for negative coefficients through the given order.
pub fn nonneg_report(n: u64, order: usize) -> NonnegReport {
    let (prefactor, series) = saito_series(n, order);
    NonnegReport::new(n, order, prefactor, &series.nonneg_scan())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(8).unwrap(),
            SaitoCase::PrimePower { p: 2, alpha: 3 }
        );
        assert_eq!(classify(10).unwrap(), SaitoCase::CaseTwo { p: 2, m: 5 });
        assert_eq!(
            classify(12).unwrap(),
            SaitoCase::CaseThree {
                p: 2,
                alpha: 2,
                m: 3,
                n_prime: 6
            }
        );
        assert_eq!(classify(15).unwrap(), SaitoCase::CaseTwo { p: 3, m: 5 });
        assert!(classify(1).is_err());
    }

    #[test]
    fn classify_keeps_m_odd_and_coprime() {
        for n in 2..=300u64 {
            match classify(n).unwrap() {
                SaitoCase::PrimePower { p, alpha } => assert_eq!(p.pow(alpha), n),
                SaitoCase::CaseTwo { p, m } => {
                    assert_eq!(p * m, n);
                    assert!(m % 2 == 1 && m >= 3 && m % p != 0);
                }
                SaitoCase::CaseThree {
                    p,
                    alpha,
                    m,
                    n_prime,
                } => {
                    assert!(alpha >= 2);
                    assert_eq!(p.pow(alpha) * m, n);
                    assert!(m % 2 == 1 && m >= 3 && m % p != 0);
                    assert_eq!(n_prime, p * m);
                }
            }
        }
    }

    #[test]
    fn saito_series_small() {
        let (pre, s) = saito_series(1, 5);
        assert_eq!(pre, Ratio::new(0, 1));
        assert_eq!(s, UniSeries::from_i64(&[1, 0, 0, 0, 0, 0]));
        // S_2 = E(q^2)^2/E(q): the 2-core series
        let (pre, s) = saito_series(2, 10);
        assert_eq!(pre, Ratio::new(1, 8)); // (4-1)/24
        assert_eq!(s, crate::pcore::tcore_series(2, 10));
    }

    #[test]
    fn prime_prefactor_matches_eta_form() {
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(
                saito_prefactor(p),
                Ratio::new((p * p) as i64 - 1, 24),
                "p = {p}"
            );
        }
    }

    #[test]
    fn prefactor_consistency_and_nonnegativity() {
        for n in 1..=200u64 {
            let pre = saito_prefactor(n);
            assert!(
                pre >= Ratio::new(0, 1),
                "negative prefactor at N = {n}: {pre}"
            );
            assert!(
                24 % pre.denom() == 0,
                "denominator of {pre} does not divide 24"
            );
        }
    }

    #[test]
    fn mobius_product_dual_route() {
        for m in [1u64, 2, 6, 9, 12] {
            assert_eq!(
                mobius_product(m, 30),
                coprime_restricted_product(m, 30),
                "M = {m}"
            );
        }
    }

    #[test]
    fn mobius_product_m2_example() {
        // product over odd n of (1 - q^n)
        let s = mobius_product(2, 6);
        assert_eq!(s, UniSeries::from_i64(&[1, -1, 0, -1, 1, -1, 1]));
    }

    #[test]
    fn case2_small() {
        // N = 18 = 2 * 9 classifies as Case 2 (p = 2 keeps M odd)
        for n in [10u64, 15, 18, 21] {
            let r = verify_case2(n, 60).unwrap();
            assert_eq!(r.status, Status::Pass, "N = {n}: {:?}", r.first_discrepancy);
        }
        assert!(verify_case2(12, 10).is_err());
    }

    #[test]
    fn case3_small() {
        for n in [12u64, 20, 45] {
            let r = verify_case3(n, 60).unwrap();
            assert_eq!(r.status, Status::Pass, "N = {n}: {:?}", r.first_discrepancy);
        }
        assert!(verify_case3(10, 10).is_err());
    }

    #[test]
    fn nonneg_small() {
        let r = nonneg_report(6, 100);
        assert!(r.pass);
        assert_eq!(r.prefactor, "5/12"); // (6 phi(6) - sum d mu(d)) / 24 = 10/24
        let r = nonneg_report(1, 10);
        assert!(r.pass);
    }

    #[test]
    fn bracket_regrouping_of_mobius_product() {
        // prod_{d|M} E(q^d)^mu(d) = prod_{r} [q^r; q^M]_inf over halved residues
        for m in [3u64, 5, 9, 15] {
            let order = 40;
            let lhs = mobius_product(m, order);
            let mut rhs = UniSeries::one(order);
            for r in coprime_residues_halved(m).unwrap() {
                let b = crate::products::bracket(1, 0, 1).unwrap();
                // substitute z -> q^r, q -> q^M in [z;q]
                let sub = b.substitute_expand(r, m, order).unwrap();
                rhs = rhs.mul(&sub);
            }
            assert_eq!(lhs, rhs, "M = {m}");
        }
    }
}
