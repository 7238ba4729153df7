//! Exact rational arithmetic and elementary number theory.
//!
//! Every quantity in the construction is an exact rational; this module
//! supplies the shared helpers (sieve, `d_n`, valuations, rising factorials,
//! the floor-pattern exponent used for the common divisor `Φ_n`).

use std::sync::OnceLock;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use num_rational::BigRational;

/// A prime together with an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: i64,
}

/// The q-adic order of a rational number. Zero has infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }
}

/// Shared prime table: `(covered limit, primes up to it)`.
static SIEVE: OnceLock<RwLock<(u64, Vec<u64>)>> = OnceLock::new();

fn eratosthenes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// All primes `≤ limit`, ascending.
///
/// Results are served from a shared table that only grows; concurrent
/// readers never block each other once the table covers their range.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    let table = SIEVE.get_or_init(|| RwLock::new((0, Vec::new())));
    {
        let guard = table.read().expect("sieve lock poisoned");
        if guard.0 >= limit {
            let end = guard.1.partition_point(|&q| q <= limit);
            return guard.1[..end].to_vec();
        }
    }
    let target = limit.max(1024);
    let fresh = eratosthenes(target);
    let mut guard = table.write().expect("sieve lock poisoned");
    if guard.0 < target {
        *guard = (target, fresh);
    }
    let end = guard.1.partition_point(|&q| q <= limit);
    guard.1[..end].to_vec()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rejects anything but an odd prime `p ≥ 5`.
pub fn require_working_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(invalid(format!("p must be a prime >= 5, got {p}")));
    }
    Ok(())
}

/// `d_n = lcm(1, 2, …, n)`, assembled prime by prime.
pub fn lcm_up_to(n: u64) -> Result<BigUint> {
    if n < 1 {
        return Err(invalid("lcm_up_to needs n >= 1"));
    }
    let mut acc = BigUint::one();
    for q in sieve_primes(n) {
        let mut qe = q;
        while qe <= n / q {
            qe *= q;
        }
        acc *= BigUint::from(qe);
    }
    Ok(acc)
}

/// Exponent of `q` in the prime factorisation of `d_n`.
pub fn lcm_exponent(q: u64, n: u64) -> i64 {
    let mut e = 0;
    let mut qe = 1u64;
    while qe <= n / q {
        qe *= q;
        e += 1;
    }
    e
}

/// q-adic order of a nonzero integer; `Infinite` for zero.
pub fn int_valuation(q: u64, x: &BigInt) -> Order {
    if x.is_zero() {
        return Order::Infinite;
    }
    Order::Finite(strip_factor(q, x.magnitude()).1)
}

/// Removes every factor `q` from `x`; returns the cofactor and the count.
pub fn strip_factor(q: u64, x: &BigUint) -> (BigUint, i64) {
    debug_assert!(!x.is_zero());
    let qb = BigUint::from(q);
    let mut rest = x.clone();
    let mut count = 0i64;
    // peel large blocks first so high valuations stay cheap
    let mut block = vec![(qb.clone(), 1i64)];
    loop {
        let (last, w) = block.last().unwrap().clone();
        if last.bits() * 2 > rest.bits() + 1 {
            break;
        }
        block.push((&last * &last, w * 2));
    }
    for (power, weight) in block.iter().rev() {
        loop {
            let (quo, rem) = rest.div_rem(power);
            if !rem.is_zero() {
                break;
            }
            rest = quo;
            count += weight;
        }
    }
    (rest, count)
}

/// `v_q(x)` for a rational `x`; `Order::Infinite` when `x = 0`.
pub fn valuation(q: u64, x: &BigRational) -> Order {
    if x.is_zero() {
        return Order::Infinite;
    }
    let num = strip_factor(q, x.numer().magnitude()).1;
    let den = strip_factor(q, x.denom().magnitude()).1;
    Order::Finite(num - den)
}

/// Legendre's formula: `v_p(n!)`.
pub fn factorial_valuation(p: u64, n: u64) -> i64 {
    let mut total = 0;
    let mut m = n;
    while m > 0 {
        m /= p;
        total += m as i64;
    }
    total
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient `C(a, j)` for an arbitrary integer top entry.
pub fn binomial_signed(a: i64, j: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= BigInt::from(a) - BigInt::from(i);
    }
    acc / BigInt::from(factorial(j))
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, k: i64) -> Result<BigRational> {
    if k < 0 {
        return Err(invalid(format!("pochhammer length must be >= 0, got {k}")));
    }
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += BigRational::one();
    }
    Ok(acc)
}

/// Fractional part `{x} = x - ⌊x⌋`, always in `[0, 1)`.
pub fn fractional_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// The step function controlling the exponent of `q` in `Φ_n`:
/// 0 when `{x} < 2/p`, otherwise `j - 1` where `j = ⌊p {x}⌋`.
pub fn phi_exponent(p: u64, x: &BigRational) -> u32 {
    debug_assert!(p >= 5);
    let scaled = fractional_part(x) * BigRational::from_integer(BigInt::from(p));
    let j = scaled.floor().to_integer().to_u64().unwrap_or(0);
    if j < 2 {
        0
    } else {
        (j - 1) as u32
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Natural log of `|x|` for a nonzero big integer, good to f64 accuracy.
pub fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|x|` for a nonzero rational.
pub fn ln_abs(x: &BigRational) -> f64 {
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

/// True when `x` is an integer.
pub fn is_integral(x: &BigRational) -> bool {
    x.denom().is_one()
}

/// Factor the denominator of `x` over the given primes. Any cofactor left
/// over is returned separately.
pub fn denominator_deficits(x: &BigRational, primes: &[u64]) -> (Vec<PrimePower>, BigUint) {
    let mut rest = x.denom().magnitude().clone();
    let mut out = Vec::new();
    for &q in primes {
        if rest.is_one() {
            break;
        }
        let (r, e) = strip_factor(q, &rest);
        if e > 0 {
            out.push(PrimePower { prime: q, exponent: e });
            rest = r;
        }
    }
    (out, rest)
}

pub fn abs_rational(x: &BigRational) -> BigRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sieve_small_limits() {
        assert!(sieve_primes(0).is_empty());
        assert!(sieve_primes(1).is_empty());
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        let p30 = sieve_primes(30);
        assert_eq!(p30.len(), 10);
        assert_eq!(*p30.last().unwrap(), 29);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let primes = sieve_primes(5000);
        let brute: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, brute);
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_up_to(1).unwrap(), BigUint::from(1u32));
        assert_eq!(lcm_up_to(6).unwrap(), BigUint::from(60u32));
        let mut direct = BigUint::one();
        for k in 1..=10u32 {
            let kb = BigUint::from(k);
            direct = direct.lcm(&kb);
        }
        assert_eq!(lcm_up_to(10).unwrap(), direct);
        assert_eq!(direct, BigUint::from(2520u32));
        assert!(lcm_up_to(0).is_err());
    }

    #[test]
    fn lcm_divisibility_structure() {
        for n in 1..=80u64 {
            let d = lcm_up_to(n).unwrap();
            for k in 1..=n {
                assert!((&d % k).is_zero());
            }
            for q in sieve_primes(n) {
                let e = lcm_exponent(q, n);
                let qe1 = BigUint::from(q).pow((e + 1) as u32);
                assert!(qe1 > BigUint::from(n));
                assert!(!(&d % &qe1).is_zero());
            }
        }
    }

    #[test]
    fn valuation_examples() {
        let f124 = BigRational::from_integer(BigInt::from(factorial(124)));
        assert_eq!(valuation(5, &f124), Order::Finite(28));
        assert_eq!(factorial_valuation(5, 124), 28);
        assert_eq!(valuation(5, &rat(2, 5)), Order::Finite(-1));
        assert_eq!(valuation(3, &rat(7, 4)), Order::Finite(0));
        assert_eq!(valuation(3, &rat(0, 1)), Order::Infinite);
        assert!(Order::Finite(i64::MAX) < Order::Infinite);
    }

    #[test]
    fn valuation_of_large_prime_power() {
        let x = BigUint::from(5u32).pow(777) * BigUint::from(12u32);
        assert_eq!(strip_factor(5, &x), (BigUint::from(12u32), 777));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(1), 4).unwrap(), int(24));
        assert_eq!(pochhammer(&rat(1, 5), 2).unwrap(), rat(6, 25));
        assert_eq!(pochhammer(&int(-3), 5).unwrap(), int(0));
        assert_eq!(pochhammer(&rat(3, 7), 0).unwrap(), int(1));
        assert!(pochhammer(&int(1), -1).is_err());
    }

    #[test]
    fn phi_exponent_examples() {
        assert_eq!(phi_exponent(5, &rat(28, 13)), 0);
        assert_eq!(phi_exponent(5, &rat(28, 17)), 2);
        assert_eq!(phi_exponent(5, &rat(4, 5)), 3);
        assert_eq!(phi_exponent(5, &rat(2, 5)), 1);
        assert_eq!(phi_exponent(7, &int(3)), 0);
    }

    /// Literal piecewise definition, checked interval by interval.
    fn phi_bruteforce(p: u64, x: &BigRational) -> u32 {
        let f = fractional_part(x);
        if f < rat(2, p as i64) {
            return 0;
        }
        for j in 2..p {
            let lo = rat(j as i64, p as i64);
            let hi = rat(j as i64 + 1, p as i64);
            if f >= lo && f < hi {
                return (j - 1) as u32;
            }
        }
        unreachable!("fractional part outside [0,1)")
    }

    #[test]
    fn phi_exponent_dense_grid() {
        for p in [5u64, 7, 11] {
            for den in 1..=60i64 {
                for num in 0..(p as i64 * den) {
                    let x = rat(num, den);
                    assert_eq!(phi_exponent(p, &x), phi_bruteforce(p, &x), "p={p} x={x}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn valuation_strips_exactly(num in -100000i64..100000, den in 1i64..100000, qi in 0usize..6) {
            prop_assume!(num != 0);
            let q = [2u64, 3, 5, 7, 11, 13][qi];
            let x = rat(num, den);
            let v = valuation(q, &x).finite().unwrap();
            let scale = BigRational::from_integer(BigInt::from(q)).pow(-v as i32);
            let y = &x * scale;
            prop_assert!(!(y.numer() % BigInt::from(q)).is_zero());
            prop_assert!(!(y.denom() % BigInt::from(q)).is_zero());
        }

        #[test]
        fn pochhammer_splits(num in -50i64..50, den in 1i64..20, j in 0i64..6, k in 0i64..6) {
            let a = rat(num, den);
            let whole = pochhammer(&a, j + k).unwrap();
            let left = pochhammer(&a, j).unwrap();
            let right = pochhammer(&(&a + int(j)), k).unwrap();
            prop_assert_eq!(whole, left * right);
        }
    }
}
