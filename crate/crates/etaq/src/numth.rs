//! Elementary arithmetic functions used by the product formulas.
//!
//! Inputs are desk-scale (a few thousand at most), so trial division is used
//! throughout. All functions reject 0; the formulas only ever use positive
//! arguments.

use crate::Error;

/// Prime factorization as (prime, exponent) pairs with strictly increasing
/// primes. `factorize(1)` is the empty product.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut n = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function: 0 when n has a squared prime factor, else (-1)^(number of
/// prime factors).
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1, "mobius requires n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient: the number of 1 <= k <= n coprime to n.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi requires n >= 1");
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// All divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// The residues 1 <= r <= (M-1)/2 coprime to M, ascending. Requires M odd and
/// M >= 3; the result has exactly phi(M)/2 elements.
pub fn coprime_residues_halved(m: u64) -> Result<Vec<u64>, Error> {
    if m % 2 == 0 || m < 3 {
        return Err(Error::InvalidArgument(format!(
            "coprime_residues_halved requires odd M >= 3, got {m}"
        )));
    }
    Ok((1..=(m - 1) / 2)
        .filter(|&r| num_integer::gcd(r, m) == 1)
        .collect())
}

/// Smallest prime factor of n >= 2.
pub fn smallest_prime_factor(n: u64) -> u64 {
    assert!(n >= 2);
    factorize(n)[0].0
}
