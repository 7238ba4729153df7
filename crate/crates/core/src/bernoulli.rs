//! Bernoulli numbers and polynomials, Volkenborn integrals and the
//! Bernoulli functionals `L_n(f) = Σ n a_k B_{k+n} / (k+n)`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{binomial, int, BigRational};
use crate::padic::PadicNumber;

#[derive(Default)]
struct CacheState {
    numbers: Vec<BigRational>,
    // Last boustrophedon row; row m ends in the zigzag number A_m.
    row: Vec<BigInt>,
}

/// Lazily grown table of `B_0, B_1, ...`.
///
/// Even-index values come from the zigzag numbers `A_{2k-1}` via
/// `B_{2k} = (-1)^(k-1) 2k A_{2k-1} / (2^{2k} (2^{2k} - 1))`; the
/// boustrophedon row is kept so extending the table never restarts.
pub struct BernoulliCache {
    state: RwLock<CacheState>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { state: RwLock::new(CacheState::default()) }
    }

    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    pub fn len(&self) -> usize {
        self.state.read().unwrap().numbers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Makes `B_0..=B_n` available.
    pub fn ensure(&self, n: usize) {
        if self.state.read().unwrap().numbers.len() > n {
            return;
        }
        let mut st = self.state.write().unwrap();
        while st.numbers.len() <= n {
            let m = st.numbers.len();
            let value = match m {
                0 => {
                    st.row = vec![BigInt::one()];
                    BigRational::one()
                }
                1 => BigRational::new((-1).into(), 2.into()),
                _ if m % 2 == 1 => BigRational::zero(),
                _ => {
                    // advance the boustrophedon to row m - 1
                    while st.row.len() < m {
                        let prev = std::mem::take(&mut st.row);
                        let len = prev.len();
                        let mut next = Vec::with_capacity(len + 1);
                        next.push(BigInt::zero());
                        for k in 1..=len {
                            let v = &next[k - 1] + &prev[len - k];
                            next.push(v);
                        }
                        st.row = next;
                    }
                    let zigzag = st.row.last().unwrap().clone();
                    let k = (m / 2) as u32;
                    let two_m = BigInt::one() << (2 * k);
                    let den = &two_m * (&two_m - 1);
                    let mut num = zigzag * BigInt::from(m);
                    if k.is_multiple_of(2) {
                        num = -num;
                    }
                    BigRational::new(num, den)
                }
            };
            st.numbers.push(value);
        }
    }

    pub fn get(&self, n: usize) -> BigRational {
        self.ensure(n);
        self.state.read().unwrap().numbers[n].clone()
    }

    /// `B_0..=B_n`, cloned under a single lock.
    pub fn range(&self, n: usize) -> Vec<BigRational> {
        self.ensure(n);
        self.state.read().unwrap().numbers[..=n].to_vec()
    }
}

/// Exact `B_n` (convention `B_1 = -1/2`).
pub fn bernoulli_number(n: i64) -> Result<BigRational> {
    if n < 0 {
        return Err(invalid(format!("Bernoulli index must be nonnegative, got {n}")));
    }
    Ok(BernoulliCache::global().get(n as usize))
}

/// `B_n(x) = Σ_k C(n,k) B_k x^(n-k)`.
pub fn bernoulli_polynomial(n: u64, x: &BigRational) -> BigRational {
    let b = BernoulliCache::global().range(n as usize);
    let mut acc = BigRational::zero();
    // Horner in x over descending k.
    for k in 0..=n {
        let c = int(BigInt::from(binomial(n, k)));
        acc = acc * x + c * &b[k as usize];
    }
    acc
}

/// `∫_{Z_p} Σ c_k t^k dt = Σ c_k B_k`.
pub fn volkenborn_integral_polynomial(coeffs: &[BigRational]) -> BigRational {
    if coeffs.is_empty() {
        return BigRational::zero();
    }
    let b = BernoulliCache::global().range(coeffs.len() - 1);
    coeffs.iter().zip(&b).map(|(c, bk)| c * bk).sum()
}

/// `L_n` applied to a polynomial, exactly.
pub fn bernoulli_functional_polynomial(n: u64, coeffs: &[BigRational]) -> Result<BigRational> {
    if n == 0 {
        return Err(invalid("Bernoulli functional order must be at least 1"));
    }
    if coeffs.is_empty() {
        return Ok(BigRational::zero());
    }
    let b = BernoulliCache::global().range(coeffs.len() - 1 + n as usize);
    let nn = int(n as i64);
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a * &nn * &b[k + n as usize] / int((k as u64 + n) as i64))
        .sum())
}

/// `p^{-m} Σ_{k < p^m} f(k)` reduced modulo `p^modulus_exp`. The values
/// `f(k)` need absolute precision at least `modulus_exp + m`.
pub fn volkenborn_partial_sum<F>(f: F, p: u64, m: u32, modulus_exp: i64) -> Result<PadicNumber>
where
    F: Fn(u64) -> Result<PadicNumber>,
{
    if m < 1 {
        return Err(invalid("partial sums need m >= 1"));
    }
    let count = p
        .checked_pow(m)
        .ok_or_else(|| invalid(format!("{p}^{m} points is too many")))?;
    let mut acc = PadicNumber::exact_zero(p);
    for k in 0..count {
        let v = f(k).map_err(|e| Error::Evaluation { k, reason: e.to_string() })?;
        acc = acc.add(&v);
    }
    let pm = BigRational::new(BigInt::one(), BigInt::from(p).pow(m));
    Ok(acc.mul_rational(&pm).reduce(modulus_exp))
}

/// Lower bound `v_p(a_k) ≥ max(floor, offset + slope·k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TailBound {
    pub floor: i64,
    pub offset: i64,
    pub slope: i64,
}

impl TailBound {
    pub fn at(&self, k: u64) -> i64 {
        self.floor.max(self.offset.saturating_add(self.slope.saturating_mul(k as i64)))
    }
}

/// Truncated power series `Σ_{k<K} a_k t^k` plus a bound covering every
/// coefficient (in particular the unknown ones with `k ≥ K`).
#[derive(Debug, Clone)]
pub struct PadicPowerSeries {
    pub prime: u64,
    pub coefficients: Vec<PadicNumber>,
    pub tail: TailBound,
}

impl PadicPowerSeries {
    pub fn new(prime: u64, coefficients: Vec<PadicNumber>, tail: TailBound) -> Result<Self> {
        if tail.slope < 0 {
            return Err(invalid("tail bound must be non-decreasing"));
        }
        Ok(PadicPowerSeries { prime, coefficients, tail })
    }

    /// Exact rational polynomial; every coefficient beyond the degree is 0.
    pub fn from_polynomial(prime: u64, coeffs: &[BigRational], precision: i64) -> Self {
        let coefficients = coeffs
            .iter()
            .map(|c| PadicNumber::from_rational_abs(c, prime, precision))
            .collect();
        let tail = TailBound { floor: crate::padic::EXACT, offset: 0, slope: 0 };
        PadicPowerSeries { prime, coefficients, tail }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// Keeps only the first `k` coefficients; the tail bound still applies.
    pub fn truncated(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.coefficients.truncate(k);
        s
    }
}

/// Value of `L_n(f)` together with the certificate of its truncation.
#[derive(Debug, Clone)]
pub struct FunctionalValue {
    pub value: PadicNumber,
    /// Minimum valuation of any omitted term.
    pub tail_valuation: i64,
    pub terms: usize,
}

fn floor_log(p: u64, x: u64) -> i64 {
    let mut e = 0;
    let mut q = p;
    while q <= x {
        e += 1;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    e
}

/// `L_n(f)` modulo `p^precision`. Refuses to answer when the omitted tail
/// cannot be bounded below `p^precision`.
pub fn bernoulli_functional(n: u64, f: &PadicPowerSeries, precision: i64) -> Result<FunctionalValue> {
    if n == 0 {
        return Err(invalid("Bernoulli functional order must be at least 1"));
    }
    let p = f.prime;
    let big_k = f.coefficients.len() as u64;
    let vn = crate::exact::factorial_valuation(p, n) - crate::exact::factorial_valuation(p, n - 1);

    // Valuation of n a_k B_{k+n}/(k+n) is at least
    // bound(k) + v(n) - 1 - floor(log_p(k+n)); minimise over k ≥ K.
    let term_bound = |k: u64| f.tail.at(k).saturating_add(vn - 1 - floor_log(p, k + n));
    let tail_valuation = if f.tail.floor >= crate::padic::EXACT {
        crate::padic::EXACT
    } else if f.tail.slope == 0 {
        // bound stays flat while log_p(k+n) grows without limit
        return Err(Error::PrecisionShortfall { requested: precision, certified: i64::MIN });
    } else {
        // past the end of the floor region the bound is non-decreasing
        let knee = if f.tail.offset >= f.tail.floor {
            0
        } else {
            ((f.tail.floor - f.tail.offset + f.tail.slope - 1) / f.tail.slope) as u64
        };
        let last = knee.max(big_k);
        (big_k..=last).map(term_bound).min().unwrap()
    };
    if tail_valuation < precision {
        return Err(Error::PrecisionShortfall { requested: precision, certified: tail_valuation });
    }

    let b = BernoulliCache::global().range(f.coefficients.len() + n as usize);
    let nn = int(n as i64);
    let mut acc = PadicNumber::exact_zero(p);
    for (k, a) in f.coefficients.iter().enumerate() {
        let w = &nn * &b[k + n as usize] / int((k as u64 + n) as i64);
        if w.is_zero() {
            continue;
        }
        acc = acc.add(&a.mul_rational(&w));
    }
    if acc.precision() < precision {
        return Err(Error::PrecisionShortfall { requested: precision, certified: acc.precision() });
    }
    Ok(FunctionalValue { value: acc.reduce(precision), tail_valuation, terms: f.coefficients.len() })
}
