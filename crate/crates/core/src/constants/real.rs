//! Binary fixed-point reals with 320 fractional bits (about 96 decimal
//! digits). Enough for every constant in this crate with a wide margin;
//! each elementary operation is off by at most one unit in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::BigRational;

pub const FRACTION_BITS: u32 = 320;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Real(BigInt);

impl Real {
    pub fn zero() -> Self {
        Real(BigInt::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Real(n.into() << FRACTION_BITS)
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Real((x.numer() << FRACTION_BITS).div_floor(x.denom()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Real((BigInt::from(n) << FRACTION_BITS).div_floor(&BigInt::from(d)))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// At most one unit in the last place.
    pub fn is_negligible(&self) -> bool {
        self.0.magnitude() <= &num_bigint::BigUint::one()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.clone() >> FRACTION_BITS
    }

    /// `(self - other)` as a float; for margins and display.
    pub fn to_f64(&self) -> f64 {
        let shift = self.0.bits().saturating_sub(60);
        let top = (&self.0 >> shift).to_f64().unwrap();
        top * 2f64.powi(shift as i32 - FRACTION_BITS as i32)
    }

    /// Decimal expansion truncated toward negative infinity.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = (&self.0 * BigInt::from(10u32).pow(digits)) >> FRACTION_BITS;
        let neg = scaled.is_negative();
        let mag = scaled.abs().to_string();
        let mag = format!("{:0>width$}", mag, width = digits as usize + 1);
        let (int_part, frac) = mag.split_at(mag.len() - digits as usize);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// `⌊self · 10^digits⌋`.
    pub fn scaled_floor(&self, digits: u32) -> BigInt {
        (&self.0 * BigInt::from(10u32).pow(digits)) >> FRACTION_BITS
    }

    /// True when `|self - other| < 2^-bits`.
    pub fn close_to(&self, other: &Real, bits: u32) -> bool {
        let diff = (&self.0 - &other.0).abs();
        diff < (BigInt::one() << (FRACTION_BITS - bits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(40))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(30) as u32))
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        Real(&self.0 + &o.0)
    }
}
impl Sub for &Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        Real(&self.0 - &o.0)
    }
}
impl Mul for &Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        Real((&self.0 * &o.0) >> FRACTION_BITS)
    }
}
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &Real {
    type Output = Real;
    fn div(self, o: &Real) -> Real {
        Real((&self.0 << FRACTION_BITS).div_floor(&o.0))
    }
}
impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-&self.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl PartialEq<i64> for Real {
    fn eq(&self, o: &i64) -> bool {
        *self == Real::from_int(*o)
    }
}
impl PartialOrd<i64> for Real {
    fn partial_cmp(&self, o: &i64) -> Option<Ordering> {
        Some(self.cmp(&Real::from_int(*o)))
    }
}

/// `atanh(y) = Σ y^{2k+1}/(2k+1)` for a rational `|y| ≤ 1/3`.
fn atanh_small(y: &BigRational) -> Real {
    let yr = Real::from_rational(y);
    let y2 = &yr * &yr;
    let mut power = yr;
    let mut acc = Real::zero();
    let mut k = 1i64;
    while !power.is_negligible() {
        acc = acc + Real(&power.0 / BigInt::from(k));
        power = &power * &y2;
        k += 2;
    }
    acc
}

pub fn ln2() -> Real {
    use std::sync::OnceLock;
    static LN2: OnceLock<Real> = OnceLock::new();
    LN2.get_or_init(|| {
        let third = BigRational::new(1.into(), 3.into());
        let a = atanh_small(&third);
        &a + &a
    })
    .clone()
}

/// Natural logarithm of a positive rational.
pub fn ln(x: &BigRational) -> Real {
    assert!(x.is_positive(), "ln of a non-positive number");
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = BigRational::from_integer(2.into());
    let scale = |k: i64| {
        if k >= 0 {
            x / BigRational::from_integer(BigInt::one() << k as u64)
        } else {
            x * BigRational::from_integer(BigInt::one() << (-k) as u64)
        }
    };
    let mut z = scale(k);
    let lo = BigRational::new(2.into(), 3.into());
    let hi = BigRational::new(4.into(), 3.into());
    while z > hi {
        z /= &two;
        k += 1;
    }
    while z < lo {
        z *= &two;
        k -= 1;
    }
    let one = BigRational::one();
    let y = (&z - &one) / (&z + &one);
    let a = atanh_small(&y);
    let l2 = ln2();
    Real(&l2.0 * BigInt::from(k)) + &a + &a
}

pub fn ln_int(n: u64) -> Real {
    ln(&BigRational::from_integer(n.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::ratio(1, 3).to_decimal(5), "0.33333");
        assert_eq!(Real::ratio(-1, 4).to_decimal(2), "-0.25");
        assert_eq!(Real::from_int(7).to_decimal(0), "7");
        assert_eq!(Real::ratio(22, 7).to_decimal(3), "3.142");
    }

    #[test]
    fn ln_values() {
        let l2 = "0.69314718055994530941723212145817656807550013436025525412068";
        assert!(ln2().to_decimal(60).starts_with(l2));
        let l10 = "2.30258509299404568401799145468436420760110148862877297603332";
        assert_eq!(ln_int(10).to_decimal(59), l10);
        assert!((ln(&rat(7, 3)) - ln_int(7) + ln_int(3)).close_to(&Real::zero(), 300));
        assert!(ln_int(1).close_to(&Real::zero(), 310));
    }

    #[test]
    fn arithmetic() {
        let a = Real::ratio(3, 4);
        let b = Real::ratio(5, 2);
        assert!((&a * &b).close_to(&Real::ratio(15, 8), 315));
        assert!((&b / &a).close_to(&Real::ratio(10, 3), 315));
        assert!(a < b);
        assert!((a.to_f64() - 0.75).abs() < 1e-15);
    }
}
