//! Fixed-precision arithmetic in `Q_p`.
//!
//! A [`PadicNumber`] is stored as `p^v · u + O(p^M)` where `u` is a unit
//! reduced modulo `p^(M - v)` and `M` is the absolute precision. Every
//! operation returns the precision it can prove; nothing is ever rounded
//! upwards. Exact zero (for example the embedding of the rational 0) carries
//! the sentinel precision [`EXACT`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{strip_factor, valuation, BigRational, Order};

/// Absolute precision assigned to values that are exactly zero.
pub const EXACT: i64 = i64::MAX / 8;

thread_local! {
    static POWERS: RefCell<HashMap<(u64, u32), BigUint>> = RefCell::new(HashMap::new());
}

/// `p^e` for `e ≥ 0`, memoised per thread.
pub fn prime_power(p: u64, e: i64) -> BigUint {
    debug_assert!(e >= 0);
    if e <= 0 {
        return BigUint::one();
    }
    let e = e as u32;
    POWERS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some(v) = cache.get(&(p, e)) {
            return v.clone();
        }
        let v = BigUint::from(p).pow(e);
        if cache.len() > 4096 {
            cache.clear();
        }
        cache.insert((p, e), v.clone());
        v
    })
}

fn add_prec(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a.saturating_add(b).min(EXACT)
    }
}

/// Element of `Q_p` known modulo `p^precision`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    prime: u64,
    valuation: i64,
    unit: BigUint,
    precision: i64,
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.prime, self.precision)
        } else {
            write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.prime, self.valuation, self.unit, self.prime, self.precision
            )
        }
    }
}

impl PadicNumber {
    /// Zero known modulo `p^precision`.
    pub fn zero(prime: u64, precision: i64) -> Self {
        PadicNumber { prime, valuation: precision, unit: BigUint::zero(), precision }
    }

    pub fn exact_zero(prime: u64) -> Self {
        Self::zero(prime, EXACT)
    }

    pub fn one(prime: u64, precision: i64) -> Self {
        Self::from_integer_parts(prime, 0, BigInt::one(), precision)
    }

    /// Builds `p^shift · x + O(p^precision)` from an arbitrary integer `x`.
    pub fn from_integer_parts(prime: u64, shift: i64, x: BigInt, precision: i64) -> Self {
        if x.is_zero() || shift >= precision {
            return Self::zero(prime, precision);
        }
        let (stripped, extra) = strip_factor(prime, x.magnitude());
        let valuation = shift + extra;
        if valuation >= precision {
            return Self::zero(prime, precision);
        }
        let modulus = prime_power(prime, precision - valuation);
        let mut unit = stripped % &modulus;
        if x.sign() == Sign::Minus {
            unit = &modulus - unit;
        }
        PadicNumber { prime, valuation, unit, precision }
    }

    /// Embeds `x` with `relative` digits after its leading one.
    pub fn from_rational(x: &BigRational, prime: u64, relative: i64) -> Self {
        match valuation(prime, x) {
            Order::Infinite => Self::exact_zero(prime),
            Order::Finite(v) => Self::from_rational_abs(x, prime, v + relative.max(1)),
        }
    }

    /// Embeds `x` modulo `p^precision` (absolute).
    pub fn from_rational_abs(x: &BigRational, prime: u64, precision: i64) -> Self {
        let v = match valuation(prime, x) {
            Order::Infinite => return Self::zero(prime, precision),
            Order::Finite(v) => v,
        };
        if v >= precision {
            return Self::zero(prime, precision);
        }
        let rel = precision - v;
        let modulus = prime_power(prime, rel);
        let (num, _) = strip_factor(prime, x.numer().magnitude());
        let (den, _) = strip_factor(prime, x.denom().magnitude());
        let den_inv = den
            .modinv(&modulus)
            .expect("denominator is coprime to p after stripping");
        let mut unit = (num % &modulus) * den_inv % &modulus;
        if x.is_negative() {
            unit = (&modulus - unit) % &modulus;
        }
        PadicNumber { prime, valuation: v, unit, precision }
    }

    pub fn from_i64(x: i64, prime: u64, precision: i64) -> Self {
        Self::from_integer_parts(prime, 0, BigInt::from(x), precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn relative_precision(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.precision - self.valuation
        }
    }

    /// `None` when the value cannot be distinguished from zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    /// Lower bound on the valuation: exact when nonzero, the precision when
    /// the value is zero to that precision.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.precision >= EXACT
    }

    /// Drops digits so that the value is known modulo `p^precision` only.
    pub fn reduce(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        if self.is_zero() || self.valuation >= precision {
            return Self::zero(self.prime, precision);
        }
        let modulus = prime_power(self.prime, precision - self.valuation);
        PadicNumber {
            prime: self.prime,
            valuation: self.valuation,
            unit: &self.unit % modulus,
            precision,
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing p-adic numbers over different primes");
    }

    /// Integer `m` with `self = p^shift · m + O(p^precision)` where
    /// `shift ≤ valuation`.
    fn scaled_integer(&self, shift: i64) -> BigInt {
        debug_assert!(shift <= self.valuation || self.is_zero());
        if self.is_zero() {
            return BigInt::zero();
        }
        BigInt::from(&self.unit * prime_power(self.prime, self.valuation - shift))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_prime(other);
        let precision = self.precision.min(other.precision);
        if self.is_zero() {
            return other.reduce(precision);
        }
        if other.is_zero() {
            return self.reduce(precision);
        }
        let base = self.valuation.min(other.valuation);
        if base >= precision {
            return Self::zero(self.prime, precision);
        }
        let sum = self.scaled_integer(base) + other.scaled_integer(base);
        Self::from_integer_parts(self.prime, base, sum, precision)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = prime_power(self.prime, self.precision - self.valuation);
        PadicNumber { unit: &modulus - &self.unit, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_prime(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Self::zero(self.prime, add_prec(self.precision, other.precision)),
            (true, false) => Self::zero(self.prime, add_prec(self.precision, other.valuation)),
            (false, true) => Self::zero(self.prime, add_prec(other.precision, self.valuation)),
            (false, false) => {
                let rel = self.relative_precision().min(other.relative_precision());
                let valuation = self.valuation + other.valuation;
                let modulus = prime_power(self.prime, rel);
                let unit = (&self.unit * &other.unit) % modulus;
                PadicNumber { prime: self.prime, valuation, unit, precision: valuation + rel }
            }
        }
    }

    /// Multiplication by an exact rational; loses no relative precision.
    pub fn mul_rational(&self, x: &BigRational) -> Self {
        let v = match valuation(self.prime, x) {
            Order::Infinite => return Self::exact_zero(self.prime),
            Order::Finite(v) => v,
        };
        if self.is_zero() {
            return Self::zero(self.prime, add_prec(self.precision, v));
        }
        let rel = self.relative_precision();
        let embedded = Self::from_rational_abs(x, self.prime, v + rel);
        self.mul(&embedded)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of a p-adic zero".into()));
        }
        let rel = self.relative_precision();
        let modulus = prime_power(self.prime, rel);
        let unit = self.unit.modinv(&modulus).expect("unit is invertible");
        Ok(PadicNumber {
            prime: self.prime,
            valuation: -self.valuation,
            unit,
            precision: -self.valuation + rel,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.prime, self.relative_precision().max(1)));
        }
        if self.is_zero() {
            if e < 0 {
                return Err(Error::Domain("negative power of a p-adic zero".into()));
            }
            if self.is_exact_zero() {
                return Ok(self.clone());
            }
            return Ok(Self::zero(self.prime, self.precision.saturating_mul(e)));
        }
        let rel = self.relative_precision();
        let modulus = prime_power(self.prime, rel);
        let base = if e < 0 {
            self.unit.modinv(&modulus).expect("unit is invertible")
        } else {
            self.unit.clone()
        };
        let unit = base.modpow(&BigUint::from(e.unsigned_abs()), &modulus);
        let valuation = self.valuation * e;
        Ok(PadicNumber { prime: self.prime, valuation, unit, precision: valuation + rel })
    }

    /// Number of leading digits on which `self` and `other` provably agree:
    /// the valuation of the difference, capped by the joint precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        let d = self.sub(other);
        d.valuation_lower_bound().min(d.precision)
    }

    /// Value modulo `p^k` as an integer in `[0, p^k)`; requires `v ≥ 0` and
    /// precision at least `k`.
    pub fn residue(&self, k: i64) -> Option<BigUint> {
        if k > self.precision || self.valuation < 0 && !self.is_zero() {
            return None;
        }
        if self.is_zero() || self.valuation >= k {
            return Some(BigUint::zero());
        }
        let modulus = prime_power(self.prime, k);
        Some((&self.unit * prime_power(self.prime, self.valuation)) % modulus)
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn unit_digits(&self) -> Vec<u64> {
        let mut digits = Vec::new();
        let mut rest = self.unit.clone();
        let p = BigUint::from(self.prime);
        for _ in 0..self.relative_precision() {
            let (q, r) = rest.div_rem(&p);
            digits.push(r.to_u64().unwrap());
            rest = q;
        }
        digits
    }
}

/// Hensel/Newton lift of the root of unity `ω` with `ω ≡ a (mod p)` and
/// `ω^(p-1) = 1`, returned modulo `p^digits`.
pub fn teichmuller_unit(p: u64, a: &BigUint, digits: i64) -> BigUint {
    let pb = BigUint::from(p);
    let seed = a % &pb;
    assert!(!seed.is_zero(), "Teichmuller lift needs a unit");
    let digits = digits.max(1);
    let mut x = seed;
    let mut known = 1i64;
    let e_minus_1 = BigUint::from(p - 1);
    let e_minus_2 = BigUint::from(p - 2);
    while known < digits {
        known = (known * 2).min(digits);
        let m = prime_power(p, known);
        let f = (x.modpow(&e_minus_1, &m) + &m - 1u32) % &m;
        let df = (x.modpow(&e_minus_2, &m) * &e_minus_1) % &m;
        let step = f * df.modinv(&m).expect("derivative is a unit") % &m;
        x = (x + &m - step) % &m;
    }
    x % prime_power(p, digits)
}

/// Teichmüller character, extended to `Q_p^×` by `ω(x) = p^v ω(x / p^v)`.
pub fn teichmuller(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() {
        return Err(Error::InvalidInput("Teichmuller character of zero".into()));
    }
    let rel = x.relative_precision();
    let unit = teichmuller_unit(x.prime, &x.unit, rel);
    Ok(PadicNumber { prime: x.prime, valuation: x.valuation, unit, precision: x.valuation + rel })
}

/// `⟨x⟩ = x / ω(x)`, a principal unit.
pub fn angle_projection(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() {
        return Err(Error::InvalidInput("angle projection of zero".into()));
    }
    let rel = x.relative_precision();
    let modulus = prime_power(x.prime, rel);
    let omega = teichmuller_unit(x.prime, &x.unit, rel);
    let unit = &x.unit * omega.modinv(&modulus).expect("root of unity is invertible") % &modulus;
    Ok(PadicNumber { prime: x.prime, valuation: 0, unit, precision: rel })
}

fn floor_log(p: u64, j: u64) -> i64 {
    let mut e = 0;
    let mut pe = p;
    while pe <= j {
        e += 1;
        pe = match pe.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    e
}

/// `log_p(1 + x)` for `v(x) ≥ 1`, certified modulo `p^precision` (or the
/// precision of `x`, if smaller).
pub fn log_one_plus(x: &PadicNumber, precision: i64) -> Result<PadicNumber> {
    let r = if precision > 16 { (precision as f64).sqrt() as i64 } else { 0 };
    log_one_plus_with_boost(x, precision, r)
}

/// Series evaluation after raising `1 + x` to the power `p^boost`, which
/// pushes the argument deeper into `pZ_p` and shortens the series; the
/// result is divided by `p^boost` afterwards. `boost = 0` is the plain series.
pub fn log_one_plus_with_boost(x: &PadicNumber, precision: i64, boost: i64) -> Result<PadicNumber> {
    let p = x.prime;
    let target = precision.min(x.precision);
    if x.is_zero() {
        return Ok(PadicNumber::zero(p, target));
    }
    if x.valuation < 1 {
        return Err(Error::Domain(format!(
            "log_p(1+x) needs v_p(x) >= 1, got {}",
            x.valuation
        )));
    }
    if target <= 0 {
        return Ok(PadicNumber::zero(p, target));
    }
    let boost = boost.max(0);
    // Digits that must survive the final division by p^boost.
    let need = target + boost;
    // Guard digits for division by j in the series; bounded by the
    // largest power of p among the indices used.
    let v_lower = x.valuation + boost;
    let mut terms = 1u64;
    while (terms as i64) * v_lower - floor_log(p, terms) < need {
        terms += 1;
    }
    let guard = floor_log(p, terms);
    let work = need + guard;
    let m = prime_power(p, work);

    let base = &x.unit * prime_power(p, x.valuation);
    let mut one_plus = (BigUint::one() + base) % &m;
    let pb = BigUint::from(p);
    for _ in 0..boost {
        one_plus = one_plus.modpow(&pb, &m);
    }
    let y = (one_plus + &m - 1u32) % &m;

    let mut sum = BigInt::zero();
    let mut power = y.clone();
    for j in 1..terms {
        let (jp, e) = strip_factor(p, &BigUint::from(j));
        let mut term = if e > 0 {
            debug_assert!((&power % prime_power(p, e)).is_zero());
            &power / prime_power(p, e)
        } else {
            power.clone()
        };
        if !jp.is_one() {
            let inv = jp.modinv(&m).expect("cofactor of j is a unit");
            term = term * inv % &m;
        }
        if j % 2 == 1 {
            sum += BigInt::from(term);
        } else {
            sum -= BigInt::from(term);
        }
        power = power * &y % &m;
    }
    let modulus = BigInt::from(prime_power(p, need));
    let sum = sum.mod_floor(&modulus).to_biguint().unwrap();
    // log(1+y) = p^boost log(1+x) is divisible by p^boost.
    let (quotient, rem) = sum.div_rem(&prime_power(p, boost));
    if !rem.is_zero() {
        return Err(Error::Internal("boosted log not divisible by p^boost".into()));
    }
    Ok(PadicNumber::from_integer_parts(p, 0, BigInt::from(quotient), target))
}

/// `log_p⟨x⟩` for nonzero `x`.
pub fn log_angle(x: &PadicNumber, precision: i64) -> Result<PadicNumber> {
    let angle = angle_projection(x)?;
    let shifted = angle.sub(&PadicNumber::one(x.prime, angle.precision));
    log_one_plus(&shifted, precision)
}
