//! Exact integer services: factorization, primality, prime sieves,
//! primorials and radicals.
//!
//! Factorization is complete or it fails. A missed split merges two primes
//! into one "factor" and under-counts ω, which would make any rank bound
//! built on top of it unsound, so there is no partial result.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Maximum number of trial divisions per call to [`factor`].
pub const TRIAL_DIVISION_BUDGET: u64 = 1_000_000;

/// Maximum total number of Pollard–Brent iterations per call to [`factor`].
pub const RHO_ITERATION_BUDGET: u64 = 10_000_000;

/// Strong-pseudoprime tests to the first 13 prime bases are a proof of
/// primality below this value (the smallest composite fooling all of them).
pub const PRIMALITY_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Largest index accepted by [`nth_prime`] and [`primorial`].
pub const NTH_PRIME_BUDGET: usize = 2_000_000;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// A nonzero integer together with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigInt,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.value.sign() == Sign::Minus {
            -1
        } else {
            1
        }
    }

    /// Prime/exponent pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p` in the factorization (0 if absent).
    pub fn valuation(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Product of the distinct primes not in `excluded`.
    pub fn radical(&self, excluded: &BTreeSet<u64>) -> BigUint {
        radical(self, excluded)
    }

    /// Multiplies the factorization back out.
    pub fn recompute(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        let sign = if self.sign() < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        };
        BigInt::from_biguint(sign, magnitude)
    }

    /// `log |value|` as a float; exact enough for bound evaluation.
    pub fn ln_abs(&self) -> f64 {
        ln_biguint(self.value.magnitude())
    }
}

/// Natural logarithm of a (possibly huge) positive integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `|n|`.
pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// Completely factors a nonzero integer.
pub fn factor(n: &BigInt) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.magnitude().clone();

    let trial_bound = trial_divide(&mut rest, &mut found);

    let mut rho_budget = RHO_ITERATION_BUDGET;
    let mut pending = vec![rest];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        // every prime factor of m exceeds the trial bound
        if m < (BigUint::from(trial_bound) * trial_bound) {
            *found.entry(m).or_insert(0) += 1;
            continue;
        }
        if strong_probable_prime(&m) {
            if m >= BigUint::from(PRIMALITY_LIMIT) {
                return Err(Error::FactorizationIncomplete {
                    cofactor: m.to_string(),
                });
            }
            *found.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(root) = exact_power_root(&m) {
            // perfect powers defeat rho; peel them here
            let (base, k) = root;
            for _ in 0..k {
                pending.push(base.clone());
            }
            continue;
        }
        match split(&m, &mut rho_budget) {
            Some(d) => {
                let other = &m / &d;
                pending.push(d);
                pending.push(other);
            }
            None => {
                return Err(Error::FactorizationIncomplete {
                    cofactor: m.to_string(),
                })
            }
        }
    }

    let factored = FactoredInteger {
        value: n.clone(),
        factors: found.into_iter().collect(),
    };
    debug_assert_eq!(&factored.recompute(), n);
    Ok(factored)
}

/// Strips small prime factors from `rest`, returning the first divisor that
/// was not tried (all prime factors left in `rest` are at least that large).
fn trial_divide(rest: &mut BigUint, found: &mut BTreeMap<BigUint, u32>) -> u64 {
    let mut divisions = 0u64;
    let mut d = 2u64;
    let mut step_toggle = false;
    loop {
        if divisions >= TRIAL_DIVISION_BUDGET {
            return d;
        }
        if let Some(small) = rest.to_u64() {
            if (d as u128) * (d as u128) > small as u128 {
                if small > 1 {
                    *found.entry(BigUint::from(small)).or_insert(0) += 1;
                    *rest = BigUint::one();
                }
                return d;
            }
            divisions += 1;
            if small % d == 0 {
                let mut s = small;
                let mut e = 0;
                while s % d == 0 {
                    s /= d;
                    e += 1;
                }
                *found.entry(BigUint::from(d)).or_insert(0) += e;
                *rest = BigUint::from(s);
            }
        } else {
            divisions += 1;
            let (q, r) = rest.div_rem(&BigUint::from(d));
            if r.is_zero() {
                let mut e = 1;
                *rest = q;
                loop {
                    let (q, r) = rest.div_rem(&BigUint::from(d));
                    if !r.is_zero() {
                        break;
                    }
                    *rest = q;
                    e += 1;
                }
                *found.entry(BigUint::from(d)).or_insert(0) += e;
            }
        }
        // 2, 3, 5, then 6k ± 1
        d = match d {
            2 => 3,
            3 => 5,
            _ => {
                step_toggle = !step_toggle;
                if step_toggle {
                    d + 2
                } else {
                    d + 4
                }
            }
        };
    }
}

/// Returns `(b, k)` with `b^k = n`, `k ≥ 2` maximal among small exponents.
fn exact_power_root(n: &BigUint) -> Option<(BigUint, u32)> {
    let max_k = n.bits() as u32;
    for k in (2..=max_k.min(64)).rev() {
        let b = n.nth_root(k);
        if b > BigUint::one() && b.pow(k) == *n {
            return Some((b, k));
        }
    }
    None
}

/// Deterministic Miller–Rabin with the first 13 prime bases; a proof of
/// primality below [`PRIMALITY_LIMIT`], a probable-prime test above it.
fn strong_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Certified primality for arbitrary inputs below [`PRIMALITY_LIMIT`].
pub fn is_prime(n: &BigUint) -> Result<bool> {
    if n >= &BigUint::from(PRIMALITY_LIMIT) {
        return Err(Error::EffortExceeded(format!(
            "primality of {n} cannot be certified deterministically"
        )));
    }
    Ok(strong_probable_prime(n))
}

/// Finds a nontrivial divisor of an odd composite, or gives up when the
/// iteration budget runs out.
fn split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u8));
    }
    if let Some(small) = n.to_u64() {
        for c in 1..u64::MAX {
            if *budget == 0 {
                return None;
            }
            if let Some(d) = brent_u64(small, c, budget) {
                return Some(BigUint::from(d));
            }
        }
        return None;
    }
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        if let Some(d) = brent_big(n, &BigUint::from(c), budget) {
            return Some(d);
        }
    }
    None
}

const BRENT_BATCH: u64 = 128;

fn brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |v: u64| ((v as u128 * v as u128 + c as u128) % n as u128) as u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = BRENT_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            *budget = budget.saturating_sub(batch + r.min(batch));
            g = q.gcd(&n);
            k += batch;
            if *budget == 0 && g == 1 {
                return None;
            }
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let f = |v: &BigUint| (v * v + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let one = BigUint::one();
    let mut y = BigUint::from(2u8);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            let batch = BRENT_BATCH.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            *budget = budget.saturating_sub(batch + r.min(batch));
            g = q.gcd(n);
            k += batch;
            if *budget == 0 && g == one {
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Product of the prime divisors of `n` outside `excluded`; 1 if none survive.
pub fn radical(n: &FactoredInteger, excluded: &BTreeSet<u64>) -> BigUint {
    n.factors
        .iter()
        .filter(|(p, _)| p.to_u64().is_none_or(|p| !excluded.contains(&p)))
        .fold(BigUint::one(), |acc, (p, _)| acc * p)
}

/// All primes `≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Upper bound for the n-th prime (Rosser–Schoenfeld for n ≥ 6).
fn nth_prime_upper(n: usize) -> usize {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as usize + 1
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Result<Vec<u64>> {
    if n > NTH_PRIME_BUDGET {
        return Err(Error::EffortExceeded(format!(
            "prime index {n} exceeds sieve budget {NTH_PRIME_BUDGET}"
        )));
    }
    let mut primes = primes_up_to(nth_prime_upper(n));
    primes.truncate(n);
    Ok(primes)
}

/// The n-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Parse("prime index must be at least 1".into()));
    }
    Ok(*first_primes(n)?.last().expect("n ≥ 1"))
}

/// `p_n#`, the product of the first `n` primes.
pub fn primorial(n: usize) -> Result<BigUint> {
    Ok(first_primes(n)?
        .into_iter()
        .fold(BigUint::one(), |acc, p| acc * p))
}

/// Explicit prime-number-theorem bound `ω(m) ≤ c₂ log m / log log m`, m ≥ 3.
pub fn omega_upper_bound(ln_m: f64, c2: f64) -> f64 {
    c2 * ln_m / ln_m.ln()
}

/// `(q, v)` with `n = p^v q` and `p ∤ q`; `n` must be nonzero.
pub fn split_valuation(n: &BigInt, p: u64) -> (BigInt, u32) {
    let p = BigInt::from(p);
    let mut q = n.clone();
    let mut v = 0;
    loop {
        let (d, r) = q.div_rem(&p);
        if !r.is_zero() || q.is_zero() {
            return (q, v);
        }
        q = d;
        v += 1;
    }
}
