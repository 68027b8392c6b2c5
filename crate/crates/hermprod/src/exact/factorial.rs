//! Exact integer factorials, binomials and prime-exponent bookkeeping.
//!
//! Factorials are memoized up to the largest index seen. The table behaves as
//! if each lookup were computed independently: concurrent reads share the
//! cache, fills take the write lock and extend it.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

static FACTORIALS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
static PRIMES: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();

fn table() -> &'static RwLock<Vec<BigInt>> {
    FACTORIALS.get_or_init(|| RwLock::new(vec![BigInt::one(), BigInt::one()]))
}

fn ensure(n: usize) {
    {
        let t = table().read().unwrap();
        if t.len() > n {
            return;
        }
    }
    let mut t = table().write().unwrap();
    while t.len() <= n {
        let next = t.last().unwrap() * BigInt::from(t.len());
        t.push(next);
    }
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    let n = n as usize;
    ensure(n);
    table().read().unwrap()[n].clone()
}

/// Apply `f` to a cached reference to n! without cloning it.
pub fn with_factorial<T>(n: u64, f: impl FnOnce(&BigInt) -> T) -> T {
    let n = n as usize;
    ensure(n);
    f(&table().read().unwrap()[n])
}

/// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    ensure(n);
    let t = table().read().unwrap();
    &t[n] / (&t[k] * &t[n - k])
}

/// (-1)^e for a possibly negative exponent.
pub fn alt_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let lock = PRIMES.get_or_init(|| RwLock::new(vec![2, 3, 5, 7, 11, 13]));
    {
        let p = lock.read().unwrap();
        if *p.last().unwrap() >= n {
            return p.iter().copied().take_while(|&q| q <= n).collect();
        }
    }
    let mut p = lock.write().unwrap();
    if *p.last().unwrap() < n {
        let limit = (n + 1).max(64) as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        if limit >= 1 {
            sieve[1] = false;
        }
        let mut i = 2usize;
        while i * i <= limit {
            if sieve[i] {
                let mut m = i * i;
                while m <= limit {
                    sieve[m] = false;
                    m += i;
                }
            }
            i += 1;
        }
        *p = sieve
            .iter()
            .enumerate()
            .filter_map(|(i, &is_p)| if is_p { Some(i as u64) } else { None })
            .collect();
    }
    p.iter().copied().take_while(|&q| q <= n).collect()
}

/// Exponent of the prime `p` in n! (Legendre's formula).
pub fn legendre_exponent(n: u64, p: u64) -> i64 {
    let mut e = 0i64;
    let mut q = p;
    while q <= n {
        e += (n / q) as i64;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    e
}

/// Add `mult` times the prime factorization of n! into `acc`.
pub fn accumulate_factorial_exponents(n: u64, mult: i64, acc: &mut BTreeMap<u64, i64>) {
    if n < 2 || mult == 0 {
        return;
    }
    for p in primes_up_to(n) {
        *acc.entry(p).or_insert(0) += mult * legendre_exponent(n, p);
    }
}
