//! Cross-module sweeps: the full case-decomposition run for every applicable
//! N <= 60, the bracket regrouping of the Möbius product, and the agreement
//! between the lattice sum and the combinatorial t-core series.

use etaq::numth::coprime_residues_halved;
use etaq::pcore::tcore_series;
use etaq::products::bracket;
use etaq::report::Status;
use etaq::saito::{classify, mobius_product, verify_case2, verify_case3, SaitoCase};
use etaq::theta::klyachko_theta;
use etaq::UniSeries;

#[test]
fn case_decompositions_all_applicable_n_through_60() {
    for n in 2..=60u64 {
        match classify(n).unwrap() {
            SaitoCase::PrimePower { .. } => {
                // Case 1 is covered by the direct nonnegativity scan
            }
            SaitoCase::CaseTwo { .. } => {
                let r = verify_case2(n, 150).unwrap();
                assert_eq!(
                    r.status,
                    Status::Pass,
                    "Case 2 N = {n}: {:?}",
                    r.first_discrepancy
                );
            }
            SaitoCase::CaseThree { .. } => {
                let r = verify_case3(n, 150).unwrap();
                assert_eq!(
                    r.status,
                    Status::Pass,
                    "Case 3 N = {n}: {:?}",
                    r.first_discrepancy
                );
            }
        }
    }
}

#[test]
fn mobius_product_regroups_into_brackets() {
    // prod_{d|M} E(q^d)^mu(d) = prod over halved coprime residues of
    // [q^r;q^M]_inf, for every Case 2 modulus M arising below 60
    let order = 100;
    for n in 2..=60u64 {
        let SaitoCase::CaseTwo { m, .. } = classify(n).unwrap() else {
            continue;
        };
        let lhs = mobius_product(m, order);
        let mut rhs = UniSeries::one(order);
        for r in coprime_residues_halved(m).unwrap() {
            rhs = rhs.mul(
                &bracket(1, 0, 1)
                    .unwrap()
                    .substitute_expand(r, m, order)
                    .unwrap(),
            );
        }
        assert_eq!(lhs, rhs, "M = {m}");
    }
}

#[test]
fn lattice_sum_equals_tcore_series() {
    for t in 1..=6usize {
        assert_eq!(klyachko_theta(t, 60), tcore_series(t as u64, 60), "t = {t}");
    }
}

#[test]
fn nonneg_reports_hold_beyond_the_proved_range() {
    // the paper's pre-existing cases N = 2,3,4,5,6,7,10 plus a composite spread
    for n in [2u64, 3, 4, 5, 6, 7, 10, 36, 48, 60] {
        let r = etaq::saito::nonneg_report(n, 200);
        assert!(r.pass, "S_{n} reported negative: {:?}", r.first_negative);
    }
}
