//! Brute-force partition combinatorics: hook lengths, t-core counting, the
//! t-core generating function, and the positivity scan for t >= 4.

use std::collections::BTreeMap;

use crate::products::euler_series;
use crate::report::{Status, VerificationReport};
use crate::series::UniSeries;
use crate::Error;

/// Partitions above this size are rejected by the brute-force ops.
pub const PARTITION_GUARD: u64 = 40;

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0),
            "parts must be weakly decreasing and positive"
        );
        Partition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Conjugate partition (column lengths of the diagram).
    pub fn conjugate(&self) -> Vec<u64> {
        match self.parts.first() {
            None => Vec::new(),
            Some(&w) => (0..w)
                .map(|j| self.parts.iter().filter(|&&p| p > j).count() as u64)
                .collect(),
        }
    }
}

/// Visit all partitions of n (descending-parts recursion).
pub fn for_each_partition(n: u64, mut f: impl FnMut(&Partition)) {
    fn rec(left: u64, maxpart: u64, stack: &mut Vec<u64>, f: &mut impl FnMut(&Partition)) {
        if left == 0 {
            f(&Partition {
                parts: stack.clone(),
            });
            return;
        }
        let top = maxpart.min(left);
        for p in (1..=top).rev() {
            stack.push(p);
            rec(left - p, p, stack, f);
            stack.pop();
        }
    }
    let mut stack = Vec::new();
    rec(n, n.max(1), &mut stack, &mut f);
}

/// Multiset of hook lengths over all cells: arm + leg + 1.
pub fn hook_lengths(lambda: &Partition) -> Vec<u64> {
    let conj = lambda.conjugate();
    let mut out = Vec::new();
    for (i, &p) in lambda.parts.iter().enumerate() {
        for j in 0..p {
            out.push((p - j) + (conj[j as usize] - i as u64) - 1);
        }
    }
    out
}

/// Number of partitions of n with no hook of length exactly t.
pub fn count_tcores(t: u64, n: u64) -> Result<u64, Error> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if n > PARTITION_GUARD {
        return Err(Error::GuardExceeded(format!(
            "count_tcores enumerates all partitions; n = {n} exceeds {PARTITION_GUARD}"
        )));
    }
    let mut count = 0u64;
    for_each_partition(n, |lam| {
        if !hook_lengths(lam).contains(&t) {
            count += 1;
        }
    });
    Ok(count)
}

/// Generating function for t-cores: E(q^t)^t / E(q).
pub fn tcore_series(t: u64, order: usize) -> UniSeries {
    assert!(t >= 1);
    euler_series(t, order)
        .pow(t as i64)
        .expect("unit constant")
        .mul(&euler_series(1, order).recip().expect("unit constant"))
}

/// Scan a_t(n) >= 1 for tmin <= t <= tmax, 0 <= n <= order. The claim is a
/// theorem only for t >= 4 (a_3(3) = 0 already fails below), so smaller tmin
/// is rejected.
pub fn positivity_scan(tmin: u64, tmax: u64, order: usize) -> Result<VerificationReport, Error> {
    if tmin < 4 {
        return Err(Error::InvalidArgument(format!(
            "positivity holds only for t >= 4 (e.g. a_3(3) = 0); got tmin = {tmin}"
        )));
    }
    if tmax < tmin {
        return Err(Error::InvalidArgument("empty t range".into()));
    }
    let mut params = BTreeMap::new();
    params.insert("tmin".to_string(), tmin as i64);
    params.insert("tmax".to_string(), tmax as i64);
    for t in tmin..=tmax {
        let s = tcore_series(t, order);
        for n in 0..=order {
            if s.coeff(n).sign() != num_bigint::Sign::Plus {
                let mut p = params.clone();
                p.insert("t".to_string(), t as i64);
                return Ok(VerificationReport::new(
                    "GO-POSITIVITY",
                    p,
                    Status::Fail,
                    order,
                    Some(crate::report::Discrepancy::negative(n, None, s.coeff(n))),
                ));
            }
        }
    }
    Ok(VerificationReport::new(
        "GO-POSITIVITY",
        params,
        Status::Pass,
        order,
        None,
    ))
}

/// Crank of a partition: the largest part when no part equals 1; otherwise
/// (parts greater than omega) - omega, where omega counts the ones.
pub fn crank(lambda: &Partition) -> i64 {
    let omega = lambda.parts.iter().filter(|&&p| p == 1).count() as u64;
    if omega == 0 {
        return lambda.parts.first().copied().unwrap_or(0) as i64;
    }
    let mu = lambda.parts.iter().filter(|&&p| p > omega).count() as i64;
    mu - omega as i64
}

/// M(m, n) for one n: the number of partitions of n with each crank value.
pub fn crank_counts(n: u64) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for_each_partition(n, |lam| {
        *out.entry(crank(lam)).or_insert(0) += 1;
    });
    out
}
