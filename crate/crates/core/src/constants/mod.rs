//! Digamma, Euler's constant and the real constants `ϖ_p`, `c_p`,
//! minimal `s` and the exponent `λ(p, s)`.

pub mod real;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::BernoulliCache;
use crate::error::{invalid, Error, Result};
use crate::exact::{int, require_working_prime, sieve_primes, BigRational};
pub use real::{ln, ln2, ln_int, Real};

/// Reference value of γ used to validate the Brent–McMillan evaluation.
pub const EULER_GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";

/// Euler's constant by the Brent–McMillan sums with `N = 60`
/// (error about `e^{-4N}`).
pub fn euler_gamma() -> Real {
    static GAMMA: OnceLock<Real> = OnceLock::new();
    GAMMA
        .get_or_init(|| {
            let big_n = 60i64;
            let n2 = BigInt::from(big_n * big_n);
            let mut a = -ln_int(big_n as u64);
            let mut b = Real::from_int(1);
            let mut u = a.clone();
            let mut v = b.clone();
            let mut k = 1i64;
            loop {
                let kk = BigInt::from(k);
                b = scale(&b, &n2, &(&kk * &kk));
                a = scale(&(scale(&a, &n2, &kk) + &b), &BigInt::one(), &kk);
                u = u + &a;
                v = v + &b;
                if k > big_n && a.is_negligible() && b.is_negligible() {
                    break;
                }
                k += 1;
            }
            &u / &v
        })
        .clone()
}

fn scale(x: &Real, num: &BigInt, den: &BigInt) -> Real {
    // x * num / den in fixed point
    let r = BigRational::new(num.clone(), den.clone());
    x * &Real::from_rational(&r)
}

/// `ψ(x)` for rational `x > 0`: shift up to `y ≥ 100`, then
/// `ψ(y) = ln y - 1/(2y) - Σ_k B_{2k} / (2k y^{2k})`.
pub fn digamma(x: &BigRational) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let threshold = int(100);
    let mut y = x.clone();
    let mut shift = Real::zero();
    while y < threshold {
        shift = shift + Real::from_rational(&y.recip());
        y += BigRational::one();
    }
    let mut acc = ln(&y) - Real::from_rational(&(y.recip() / int(2)));
    let y2 = &y * &y;
    let mut ypow = y2.clone();
    let mut k = 1usize;
    loop {
        let b = BernoulliCache::global().get(2 * k);
        let term = Real::from_rational(&(b / (int(2 * k as i64) * &ypow)));
        if term.is_negligible() || k > 200 {
            break;
        }
        acc = acc - term;
        ypow *= &y2;
        k += 1;
    }
    Ok(acc - shift)
}

/// `ϖ_p = ψ(1/p) + 2p - 1 + γ + p (ln p - H_p)`.
pub fn varpi(p: u64) -> Result<Real> {
    require_working_prime(p)?;
    let h = harmonic_real(1, p);
    varpi_with_harmonic(p, &h)
}

fn harmonic_real(from: u64, to: u64) -> Real {
    let mut acc = Real::zero();
    for j in from..=to {
        acc = acc + Real::ratio(1, j as i64);
    }
    acc
}

fn varpi_with_harmonic(p: u64, h_p: &Real) -> Result<Real> {
    let psi = digamma(&BigRational::new(1.into(), BigInt::from(p)))?;
    let pr = Real::from_int(p as i64);
    Ok(psi + Real::from_int(2 * p as i64 - 1) + euler_gamma() + &pr * &(ln_int(p) - h_p))
}

/// `(p/(p-1)) ln p - 1 - ln 2`, the denominator of `c_p - p`.
fn criterion_slope(p: u64) -> Real {
    Real::ratio(p as i64, p as i64 - 1) * ln_int(p) - Real::from_int(1) - ln2()
}

/// `(p - 1 - ϖ_p) / ((p/(p-1)) ln p - 1 - ln 2)`.
fn excess(p: u64, varpi: &Real) -> Real {
    (Real::from_int(p as i64 - 1) - varpi) / criterion_slope(p)
}

pub fn c_p_from(p: u64, varpi: &Real) -> Real {
    Real::from_int(p as i64) + excess(p, varpi)
}

pub fn c_p(p: u64) -> Result<Real> {
    Ok(c_p_from(p, &varpi(p)?))
}

/// Greatest odd integer not exceeding `x`.
pub fn greatest_odd_le(x: &Real) -> i64 {
    let f = x.floor().to_i64().expect("value in range");
    if f.rem_euclid(2) == 1 {
        f
    } else {
        f - 1
    }
}

pub fn minimal_s_from(p: u64, varpi: &Real) -> i64 {
    excess(p, varpi).floor().to_i64().expect("value in range") + 1
}

/// `⌊(p - 1 - ϖ_p)/((p/(p-1)) ln p - 1 - ln 2)⌋ + 1`.
pub fn minimal_s(p: u64) -> Result<i64> {
    Ok(minimal_s_from(p, &varpi(p)?))
}

/// `λ(p, s) = s ln 2 + p ln p + (p - 1 + s - ϖ_p) - (p + ps/(p-1)) ln p`.
pub fn lambda_exponent(p: u64, s: u64, varpi: &Real) -> Real {
    let lp = ln_int(p);
    let (pi, si) = (p as i64, s as i64);
    Real::from_int(si) * ln2() + Real::from_int(pi) * &lp + Real::from_int(pi - 1 + si)
        - varpi
        - (Real::from_int(pi) + Real::ratio(pi * si, pi - 1)) * &lp
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub p: u64,
    #[serde(serialize_with = "real_30")]
    pub varpi: Real,
    #[serde(serialize_with = "real_30")]
    pub c_p: Real,
    pub greatest_odd_le_cp: i64,
    pub s_min: i64,
    /// `(p-1)(1-γ) - ln 2 - 1 < ϖ_p < (p-1)(1-γ)`.
    pub bounds_ok: bool,
    pub lower_margin: f64,
    pub upper_margin: f64,
    /// greatest odd `≤ c_p` is at most `p + p/ln p + 5`.
    pub odd_threshold_ok: bool,
}

fn real_30<S: serde::Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_decimal(30))
}

fn report_from(p: u64, varpi: Real) -> ConstantsReport {
    let gamma = euler_gamma();
    let upper = Real::from_int(p as i64 - 1) * (Real::from_int(1) - &gamma);
    let lower = &upper - &ln2() - Real::from_int(1);
    let c = c_p_from(p, &varpi);
    let odd = greatest_odd_le(&c);
    let pr = Real::from_int(p as i64);
    let threshold = &pr + &(&pr / &ln_int(p)) + Real::from_int(5);
    ConstantsReport {
        p,
        bounds_ok: lower < varpi && varpi < upper,
        lower_margin: (&varpi - &lower).to_f64(),
        upper_margin: (&upper - &varpi).to_f64(),
        odd_threshold_ok: Real::from_int(odd) <= threshold,
        s_min: minimal_s_from(p, &varpi),
        greatest_odd_le_cp: odd,
        c_p: c,
        varpi,
    }
}

pub fn constants_report(p: u64) -> Result<ConstantsReport> {
    Ok(report_from(p, varpi(p)?))
}

/// Reports for every prime `5 ≤ p ≤ pmax`, sharing the harmonic sums.
pub fn constants_table(pmax: u64) -> Result<Vec<ConstantsReport>> {
    if pmax < 5 {
        return Err(invalid("pmax must be at least 5"));
    }
    let primes: Vec<u64> = sieve_primes(pmax).into_iter().filter(|&p| p >= 5).collect();
    let mut harmonics = Vec::with_capacity(primes.len());
    let mut h = Real::zero();
    let mut last = 0u64;
    for &p in &primes {
        h = h + harmonic_real(last + 1, p);
        last = p;
        harmonics.push(h.clone());
    }
    primes
        .par_iter()
        .zip(harmonics.par_iter())
        .map(|(&p, hp)| Ok(report_from(p, varpi_with_harmonic(p, hp)?)))
        .collect()
}

/// One line of the table of `c_p` values.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub p: u64,
    pub expected_cp: &'static str,
    pub expected_odd: i64,
    pub computed_cp: String,
    pub computed_odd: i64,
    pub matches: bool,
}

pub const TABLE1: [(u64, &str, i64); 7] = [
    (5, "14.6698", 13),
    (7, "14.4779", 13),
    (11, "18.0949", 17),
    (13, "20.2567", 19),
    (17, "24.7553", 23),
    (19, "27.0426", 27),
    (101, "120.8043", 119),
];

pub fn table1() -> Result<Vec<Table1Row>> {
    TABLE1
        .par_iter()
        .map(|&(p, expected_cp, expected_odd)| {
            let c = c_p(p)?;
            let computed_cp = c.to_decimal(4);
            let computed_odd = greatest_odd_le(&c);
            Ok(Table1Row {
                p,
                expected_cp,
                expected_odd,
                matches: computed_cp == expected_cp && computed_odd == expected_odd,
                computed_cp,
                computed_odd,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn close(a: &Real, b: &Real, digits: u32) -> bool {
        let tol = BigRational::new(1.into(), BigInt::from(10u32).pow(digits));
        (a - b).abs() < Real::from_rational(&tol)
    }

    #[test]
    fn gamma_matches_reference() {
        assert_eq!(euler_gamma().to_decimal(50), EULER_GAMMA_50);
    }

    #[test]
    fn digamma_identities() {
        let g = euler_gamma();
        assert!(close(&digamma(&int(1)).unwrap(), &(-&g), 30));
        assert!(close(&digamma(&int(2)).unwrap(), &(Real::from_int(1) - &g), 30));
        for p in [5u64, 7, 11] {
            let mut sum = Real::zero();
            for j in 1..=p {
                sum = sum + digamma(&rat(j as i64, p as i64)).unwrap();
            }
            let want = -(Real::from_int(p as i64) * (&g + &ln_int(p)));
            assert!(close(&sum, &want, 30), "p={p}");
        }
        assert!(digamma(&int(0)).is_err());
        assert!(digamma(&rat(-1, 2)).is_err());
    }

    #[test]
    fn digamma_half() {
        // ψ(1/2) = -γ - 2 ln 2
        let want = -euler_gamma() - ln2() - ln2();
        assert!(close(&digamma(&rat(1, 2)).unwrap(), &want, 30));
    }

    #[test]
    fn varpi_5_anchor() {
        let v = varpi(5).unwrap();
        assert!(v.to_decimal(4).starts_with("0.918"), "{v}");
        assert_eq!(v.to_decimal(30), VARPI_5_30);
    }

    // frozen 30-digit value, consistent with c_5 = 14.6698...
    const VARPI_5_30: &str = "0.918698663813179771396434127096";

    #[test]
    fn table_rows_match() {
        for row in table1().unwrap() {
            assert!(row.matches, "{row:?}");
        }
    }

    #[test]
    fn minimal_s_examples() {
        assert_eq!(minimal_s(5).unwrap(), 10);
        for &(p, _, odd) in &TABLE1 {
            let s = minimal_s(p).unwrap();
            assert!(s >= 1);
            let top = p as i64 - 1 + s;
            assert_eq!(if top % 2 == 1 { top } else { top - 1 }, odd, "p={p}");
        }
    }

    #[test]
    fn lambda_sign_change() {
        let v = varpi(5).unwrap();
        assert!(lambda_exponent(5, 10, &v).is_negative());
        assert!(!lambda_exponent(5, 9, &v).is_negative());
        let l1 = lambda_exponent(5, 1, &v).to_f64();
        assert!((l1 - 2.76).abs() < 0.01, "{l1}");
    }

    #[test]
    fn batch_agrees_with_single() {
        let table = constants_table(60).unwrap();
        assert_eq!(table.first().unwrap().p, 5);
        for r in &table {
            assert_eq!(r.varpi, varpi(r.p).unwrap());
        }
    }
}
