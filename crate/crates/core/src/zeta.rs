//! p-adic Hurwitz zeta values `ζ_p(s, x)` for `|x|_p > 1` and p-adic zeta
//! values `ζ_p(i)` through the distribution relation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bernoulli::BernoulliCache;
use crate::error::{invalid, Error, Result};
use crate::exact::{int, rat, require_working_prime, valuation, BigRational, Order};
use crate::padic::{angle_projection, teichmuller, PadicNumber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzQuery {
    pub p: u64,
    pub s: i64,
    pub x: BigRational,
    /// Absolute precision of the answer.
    pub precision: i64,
}

/// `ζ_p(s, x) = ⟨x⟩^{1-s}/(s-1) · Σ_j C(1-s, j) B_j x^{-j}`.
///
/// Term `j` has valuation at least `j·|v_p(x)| - 1`, which fixes the
/// truncation.
pub fn hurwitz_zeta_p(q: &HurwitzQuery) -> Result<PadicNumber> {
    let p = q.p;
    require_working_prime(p)?;
    if q.s == 1 {
        return Err(Error::Pole("s = 1".into()));
    }
    if q.s < 2 {
        return Err(invalid(format!("integer argument s >= 2 expected, got {}", q.s)));
    }
    let w = match valuation(p, &q.x) {
        Order::Finite(v) if v < 0 => -v,
        _ => {
            return Err(Error::Domain(format!(
                "p-adic Hurwitz zeta needs v_p(x) < 0, got x = {}",
                q.x
            )))
        }
    };
    let vs = valuation(p, &int(q.s - 1)).finite().unwrap();
    let work = q.precision + vs;
    let terms = ((work + 1 + w - 1) / w).max(1) as usize + 2;
    let rel = (work + 2).max(1);

    let bern = BernoulliCache::global().range(terms);
    let y = PadicNumber::from_rational(&q.x.recip(), p, rel);
    let a = BigInt::from(1 - q.s);
    let mut binom = BigRational::one();
    let mut y_pow = PadicNumber::one(p, rel);
    let mut sum = PadicNumber::exact_zero(p);
    for (j, b) in bern.iter().enumerate().take(terms) {
        if !b.is_zero() {
            let c = &binom * b;
            let term = PadicNumber::from_rational(&c, p, rel).mul(&y_pow);
            sum = sum.add(&term);
        }
        binom = binom * BigRational::from_integer(&a - j) / int(j as i64 + 1);
        y_pow = y_pow.mul(&y);
    }
    // everything beyond `terms` has valuation ≥ work + 1
    let sum = sum.reduce(work + 1);
    let angle = angle_projection(&PadicNumber::from_rational(&q.x, p, rel))?;
    let value = angle.pow(1 - q.s)?.mul(&sum).mul_rational(&rat(1, q.s - 1));
    if value.precision() < q.precision {
        return Err(Error::PrecisionShortfall { requested: q.precision, certified: value.precision() });
    }
    Ok(value.reduce(q.precision))
}

/// `ζ_p(i) = D^{-i} Σ_{1≤j≤D, p∤j} ω(j/D)^{1-i} ζ_p(i, j/D)` for any `D`
/// divisible by `p`.
pub fn zeta_p_distribution(p: u64, i: i64, d: u64, precision: i64) -> Result<PadicNumber> {
    require_working_prime(p)?;
    if i < 2 {
        return Err(invalid(format!("zeta_p(i) needs i >= 2, got {i}")));
    }
    if d == 0 || !d.is_multiple_of(p) {
        return Err(invalid(format!("D = {d} must be a positive multiple of p")));
    }
    let e = valuation(p, &int(d as i64)).finite().unwrap();
    // D^{-i} ω(j/D)^{1-i} has valuation -e, plus the unit part of 1/(i-1)
    let vi = valuation(p, &int(i - 1)).finite().unwrap();
    let inner = precision + e + 1;
    let rel = inner + vi + 4;
    let parts: Vec<Result<PadicNumber>> = (1..=d)
        .into_par_iter()
        .filter(|j| j % p != 0)
        .map(|j| {
            let x = rat(j as i64, d as i64);
            let h = hurwitz_zeta_p(&HurwitzQuery { p, s: i, x: x.clone(), precision: inner })?;
            let omega = teichmuller(&PadicNumber::from_rational(&x, p, rel))?;
            Ok(omega.pow(1 - i)?.mul(&h))
        })
        .collect();
    let mut sum = PadicNumber::exact_zero(p);
    for part in parts {
        sum = sum.add(&part?);
    }
    let dpow = BigRational::from_integer(BigInt::from(d).pow(i as u32));
    let value = sum.mul_rational(&dpow.recip());
    if value.precision() < precision {
        return Err(Error::PrecisionShortfall { requested: precision, certified: value.precision() });
    }
    Ok(value.reduce(precision))
}

/// `ζ_p(i)` modulo `p^precision`, via the distribution relation with `D = p`.
pub fn zeta_p(p: u64, i: i64, precision: i64) -> Result<PadicNumber> {
    zeta_p_distribution(p, i, p, precision)
}
