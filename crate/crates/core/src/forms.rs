//! The rational functions `R_n`, their partial fractions and the derived
//! coefficients `ρ_i`, `ρ_{0,j/p}`, together with the values `R̃_n(j/p)` and
//! the power-series coefficients of `R_n(t + j/p)`.
//!
//! ```text
//! R_n(t) = p^{pn} n!^s t^{M_0} ∏_{j=1}^{p-1} (t + j/p)_n / (t)_{n+1}^{p-1+s}
//!        = Σ_{i=1}^{p-1+s} Σ_{k=1}^{n} r_{i,k} / (t + k)^i
//! ```

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{PadicPowerSeries, TailBound};
use crate::error::{invalid, Error, Result};
use crate::exact::{
    factorial, int, pochhammer, rat, require_working_prime, strip_factor, valuation, BigRational,
    Order,
};
use crate::padic::{log_angle, prime_power, PadicNumber};

/// Which hypothesis a construction was validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `n > (p+s)^4`, as stated for the construction.
    Strict,
    /// Only `deg R_n ≤ -2` and `pn > (p+s)^2`.
    Relaxed,
    /// `M_0` overridden by a small value; for testing the pipeline only.
    Toy,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
            Mode::Toy => "toy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormParams {
    pub p: u64,
    pub s: u64,
    pub n: u64,
    #[serde(rename = "N_0")]
    pub n0: u32,
    #[serde(rename = "M_0")]
    pub m0: u64,
    pub mode: Mode,
}

impl FormParams {
    /// Highest pole order `p - 1 + s`.
    pub fn e(&self) -> u64 {
        self.p - 1 + self.s
    }

    /// `deg R_n = M_0 - (p-1) - s(n+1)`.
    pub fn degree(&self) -> i64 {
        self.m0 as i64 - (self.p as i64 - 1) - (self.s * (self.n + 1)) as i64
    }

    /// `(p+1+s)(n+1) + s v_p(n!) - M_0 - 2`, the valuation floor of the
    /// coefficients of `R_n(t + j/p)`.
    pub fn series_base_valuation(&self) -> i64 {
        let (p, s, n) = (self.p as i64, self.s as i64, self.n as i64);
        (p + 1 + s) * (n + 1) + s * crate::exact::factorial_valuation(self.p, self.n)
            - self.m0 as i64
            - 2
    }
}

/// `N_0 = v_p(p-1+s)` and `M_0 = p^{2+N_0} s - 1`.
pub fn construction_constants(p: u64, s: u64) -> Result<(u32, u64)> {
    require_working_prime(p)?;
    if s < 1 {
        return Err(invalid("s must be positive"));
    }
    let n0 = strip_factor(p, &BigUint::from(p - 1 + s)).1 as u32;
    let m0 = p
        .checked_pow(2 + n0)
        .and_then(|v| v.checked_mul(s))
        .ok_or_else(|| invalid("M_0 overflows"))?
        - 1;
    Ok((n0, m0))
}

pub fn make_params(p: u64, s: u64, n: u64, relaxed: bool) -> Result<FormParams> {
    let (n0, m0) = construction_constants(p, s)?;
    if n < 1 {
        return Err(invalid("n must be positive"));
    }
    let mode = if relaxed { Mode::Relaxed } else { Mode::Strict };
    let params = FormParams { p, s, n, n0, m0, mode };
    let deg = params.degree();
    if deg > -2 {
        let need = (m0 + p + 1).div_ceil(s); // s(n+1) ≥ M_0 - p + 3
        return Err(Error::Construction(format!(
            "deg R_n = {deg} > -2 for (p, s, n) = ({p}, {s}, {n}); need n >= {}",
            need.saturating_sub(1)
        )));
    }
    let ps = (p + s) as u128;
    if relaxed {
        if (p as u128) * (n as u128) <= ps * ps {
            return Err(Error::Hypothesis(format!("relaxed mode needs p n > (p+s)^2 = {}", ps * ps)));
        }
    } else if (n as u128) <= ps.pow(4) {
        return Err(Error::Hypothesis(format!(
            "strict mode needs n > (p+s)^4 = {}; use relaxed mode",
            ps.pow(4)
        )));
    }
    Ok(params)
}

/// Same construction with `M_0` replaced by a small value (`M_0 > p-1+s`).
pub fn toy_params(p: u64, s: u64, n: u64, m0: u64) -> Result<FormParams> {
    require_working_prime(p)?;
    if s < 1 || n < 1 {
        return Err(invalid("s and n must be positive"));
    }
    if m0 <= p - 1 + s {
        return Err(invalid("toy M_0 must exceed p - 1 + s"));
    }
    let n0 = strip_factor(p, &BigUint::from(p - 1 + s)).1 as u32;
    let params = FormParams { p, s, n, n0, m0, mode: Mode::Toy };
    if params.degree() > -2 {
        return Err(Error::Construction(format!("deg R_n = {} > -2", params.degree())));
    }
    Ok(params)
}

/// An index `N` with `p^N ≡ p^{2+N_0} (mod p-1+s)` and its `n(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexN {
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n: u64,
}

/// `n(N) = (p^N (p-1) + M_0 + 1)/(p-1+s) - 1`, or `None` when the
/// congruence fails.
pub fn admissible_index(p: u64, s: u64, big_n: u32) -> Result<Option<IndexN>> {
    let (n0, m0) = construction_constants(p, s)?;
    if big_n < 1 {
        return Err(invalid("N must be positive"));
    }
    let e = BigUint::from(p - 1 + s);
    let pb = BigUint::from(p);
    if pb.modpow(&BigUint::from(big_n), &e) != pb.modpow(&BigUint::from(2 + n0), &e) {
        return Ok(None);
    }
    let pn = pb.pow(big_n);
    let numer = &pn * (p - 1) + m0 + 1u32;
    let (q, r) = numer.div_rem(&e);
    if !r.is_zero() {
        return Err(Error::Internal("n(N) is not integral".into()));
    }
    let n = (q - 1u32).to_u64().ok_or_else(|| invalid(format!("n({big_n}) does not fit in 64 bits")))?;
    // (n+1)(p-1+s) - M_0 = p^N (p-1) + 1
    let lhs = BigInt::from(n + 1) * BigInt::from(p - 1 + s) - BigInt::from(m0);
    let rhs = BigInt::from(pn * (p - 1) + 1u32);
    if lhs != rhs {
        return Err(Error::Internal("key identity for n(N) fails".into()));
    }
    Ok(Some(IndexN { big_n, n }))
}

fn pole_check(params: &FormParams, t: &BigRational) -> Result<()> {
    if t.is_integer() {
        let v = t.to_integer();
        if v.is_negative() && v >= BigInt::from(-(params.n as i64)) {
            return Err(Error::Pole(t.to_string()));
        }
    }
    Ok(())
}

/// `R_n(t)` in the defining product form.
pub fn eval_r_definition(params: &FormParams, t: &BigRational) -> Result<BigRational> {
    pole_check(params, t)?;
    if t.is_zero() {
        return Ok(BigRational::zero());
    }
    let (p, n) = (params.p, params.n);
    let mut num = int(BigInt::from(p).pow((p * n) as u32))
        * int(BigInt::from(factorial(n)).pow(params.s as u32))
        * t.pow(params.m0 as i32);
    for j in 1..p {
        num *= pochhammer(&(t + rat(j as i64, p as i64)), n as i64)?;
    }
    let den = pochhammer(t, n as i64 + 1)?.pow(params.e() as i32);
    Ok(num / den)
}

/// `R_n(t) = n!^s t^{M_0} p^{-1} (pt)_{pn+1} / (t)_{n+1}^{p+s}`.
pub fn eval_r_rewritten(params: &FormParams, t: &BigRational) -> Result<BigRational> {
    pole_check(params, t)?;
    if t.is_zero() {
        return Ok(BigRational::zero());
    }
    let (p, n) = (params.p, params.n);
    let pt = t * int(p as i64);
    let num = int(BigInt::from(factorial(n)).pow(params.s as u32))
        * t.pow(params.m0 as i32)
        * pochhammer(&pt, (p * n + 1) as i64)?
        / int(p as i64);
    let den = pochhammer(t, n as i64 + 1)?.pow((p + params.s) as i32);
    Ok(num / den)
}

/// `R_n(t)`, evaluated in both product forms which must agree.
pub fn eval_r(params: &FormParams, t: &BigRational) -> Result<BigRational> {
    let a = eval_r_definition(params, t)?;
    let b = eval_r_rewritten(params, t)?;
    if a != b {
        return Err(Error::Internal(format!("product forms of R_n disagree at t = {t}")));
    }
    Ok(a)
}

/// `r_{p-1+s,k} = [R_n(t)(t+k)^{p-1+s}]_{t=-k}` for `k = 1..=n`, as the
/// literal product `n!^s (-k)^{M_0} ∏_{ν≠pk} (ν-pk) / ∏_{ν≠k} (ν-k)^{p+s}`.
pub fn leading_residues(params: &FormParams) -> Vec<BigRational> {
    let nfs = BigInt::from(factorial(params.n)).pow(params.s as u32);
    (1..=params.n)
        .into_par_iter()
        .map(|k| leading_residue(params, k, &nfs))
        .collect()
}

fn leading_residue(params: &FormParams, k: u64, nfs: &BigInt) -> BigRational {
    let (p, n) = (params.p as i64, params.n as i64);
    let k = k as i64;
    let mut num = nfs * BigInt::from(-k).pow(params.m0 as u32);
    for nu in (0..=p * n).filter(|&nu| nu != p * k) {
        num *= nu - p * k;
    }
    let mut den = BigInt::one();
    for nu in (0..=n).filter(|&nu| nu != k) {
        den *= nu - k;
    }
    BigRational::new(num, den.pow((params.p + params.s) as u32))
}

/// `H^{(e)}(x) = Σ_{d=1}^{x} d^{-e}` for `x = 0..=upto`.
fn harmonic_prefix(order: u32, upto: u64) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for d in 1..=upto {
        acc += BigRational::new(BigInt::one(), BigInt::from(d).pow(order));
        out.push(acc.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTable {
    pub params: FormParams,
    /// `r[i-1][k-1] = r_{i,k}`.
    pub r: Vec<Vec<BigRational>>,
    /// `rho[i] = ρ_i` for `1 ≤ i ≤ p-1+s`, and `rho[0] = ρ_0`.
    pub rho: Vec<BigRational>,
    /// `rho0_parts[j-1] = ρ_{0,j/p}`.
    pub rho0_parts: Vec<BigRational>,
    pub elapsed_ms: u128,
}

impl FormTable {
    pub fn r(&self, i: u64, k: u64) -> &BigRational {
        &self.r[i as usize - 1][k as usize - 1]
    }
}

/// Builds the full partial-fraction table of `R_n` by the Leibniz
/// recurrence on `F_k(t) = R_n(t)(t+k)^{p-1+s}`:
///
/// ```text
/// r_{e-i,k} = (1/i) Σ_{m<i} r_{e-(i-1-m),k} · D_m(k),
/// D_m(k) = (-1)^m [ M_0/(-k)^{m+1}
///                  + p^{m+1} ((-1)^{m+1} H^{(m+1)}(pk) + H^{(m+1)}(pn-pk))
///                  - (p+s) ((-1)^{m+1} H^{(m+1)}(k) + H^{(m+1)}(n-k)) ]
/// ```
///
/// where `D_m(k)` is the m-th Taylor coefficient at `t = -k` of
/// `U = F_k'/F_k = M_0/t + Σ_{ν≠pk} 1/(t+ν/p) - (p+s) Σ_{ν≠k} 1/(t+ν)`.
pub fn partial_fractions(params: &FormParams) -> Result<FormTable> {
    let start = Instant::now();
    let (p, s, n) = (params.p, params.s, params.n);
    let e = params.e() as usize;
    let leading = leading_residues(params);
    let harmonic: Vec<Vec<BigRational>> = (1..e as u32)
        .into_par_iter()
        .map(|order| harmonic_prefix(order, p * n))
        .collect();
    let m0 = int(params.m0 as i64);
    let ps = int((p + s) as i64);

    let columns: Vec<Vec<BigRational>> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let d: Vec<BigRational> = (0..e.saturating_sub(1))
                .map(|m| {
                    let h = &harmonic[m];
                    let sign = if m % 2 == 0 { int(1) } else { int(-1) };
                    let flip = -&sign; // (-1)^{m+1}
                    let mk = int(-(k as i64)).pow(m as i32 + 1);
                    let pm = int(BigInt::from(p).pow(m as u32 + 1));
                    let a = &m0 / mk;
                    let b = pm * (&flip * &h[(p * k) as usize] + &h[(p * n - p * k) as usize]);
                    let c = &ps * (&flip * &h[k as usize] + &h[(n - k) as usize]);
                    sign * (a + b - c)
                })
                .collect();
            // a[i] = r_{e-i,k}
            let mut a: Vec<BigRational> = Vec::with_capacity(e);
            a.push(leading[k as usize - 1].clone());
            for i in 1..e {
                let mut acc = BigRational::zero();
                for (m, dm) in d.iter().enumerate().take(i) {
                    acc += &a[i - 1 - m] * dm;
                }
                a.push(acc / int(i as i64));
            }
            a.reverse(); // a[i-1] = r_{i,k}
            a
        })
        .collect();

    let mut r = vec![Vec::with_capacity(n as usize); e];
    for col in columns {
        for (i, v) in col.into_iter().enumerate() {
            r[i].push(v);
        }
    }
    let mut rho: Vec<BigRational> = Vec::with_capacity(e + 1);
    rho.push(BigRational::zero());
    rho.extend(r.par_iter().map(|row| row.iter().sum::<BigRational>()).collect::<Vec<_>>());
    let rho0_parts = rho0_parts(params, &r);
    rho[0] = rho0_parts.iter().sum();
    Ok(FormTable { params: params.clone(), r, rho, rho0_parts, elapsed_ms: start.elapsed().as_millis() })
}

/// `ρ_{0,j/p} = -Σ_i Σ_k r_{i,k} Σ_{ν<k} (ν + j/p)^{-i}`, with the inner sums
/// kept as running prefix sums.
fn rho0_parts(params: &FormParams, r: &[Vec<BigRational>]) -> Vec<BigRational> {
    let (p, n) = (params.p, params.n);
    (1..p)
        .into_par_iter()
        .map(|j| {
            let mut total = BigRational::zero();
            for (idx, row) in r.iter().enumerate() {
                let i = idx as u32 + 1;
                let scale = int(BigInt::from(p).pow(i));
                // prefix = Σ_{ν<k} (pν + j)^{-i}
                let mut prefix = BigRational::zero();
                let mut part = BigRational::zero();
                for k in 1..=n {
                    prefix += BigRational::new(BigInt::one(), BigInt::from(p * (k - 1) + j).pow(i));
                    part += &row[k as usize - 1] * &prefix;
                }
                total += part * scale;
            }
            -total
        })
        .collect()
}

/// `Σ_{i,k} r_{i,k}/(t+k)^i`.
pub fn resum(table: &FormTable, t: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (idx, row) in table.r.iter().enumerate() {
        for (kdx, v) in row.iter().enumerate() {
            if !v.is_zero() {
                acc += v / (t + int(kdx as i64 + 1)).pow(idx as i32 + 1);
            }
        }
    }
    acc
}

/// `R̃_n(j/p) = Σ_k r_{1,k} log_p⟨k + j/p⟩ + Σ_{i≥2} Σ_k r_{i,k} / ((1-i)(k+j/p)^{i-1})`
/// modulo `p^precision`.
pub fn rtilde_at(table: &FormTable, j: u64, precision: i64) -> Result<PadicNumber> {
    let params = &table.params;
    let p = params.p;
    if j < 1 || j >= p {
        return Err(invalid(format!("j must lie in 1..{p}, got {j}")));
    }
    let logs: Vec<Result<PadicNumber>> = table.r[0]
        .par_iter()
        .enumerate()
        .map(|(kdx, r1)| {
            let v = match valuation(p, r1) {
                Order::Infinite => return Ok(PadicNumber::exact_zero(p)),
                Order::Finite(v) => v,
            };
            let need = (precision - v).max(1);
            // ⟨k + j/p⟩ = ⟨pk + j⟩ because ω(p) = p
            let arg = PadicNumber::from_i64((p * (kdx as u64 + 1) + j) as i64, p, need + 2);
            Ok(log_angle(&arg, need)?.mul_rational(r1))
        })
        .collect();
    let mut acc = PadicNumber::exact_zero(p);
    for l in logs {
        acc = acc.add(&l?);
    }
    let theta = rat(j as i64, p as i64);
    let mut exact = BigRational::zero();
    for (idx, row) in table.r.iter().enumerate().skip(1) {
        let i = idx as i64 + 1;
        for (kdx, v) in row.iter().enumerate() {
            let x = &theta + int(kdx as i64 + 1);
            exact += v / (int(1 - i) * x.pow(i as i32 - 1));
        }
    }
    let value = acc.add(&PadicNumber::from_rational_abs(&exact, p, precision));
    if value.precision() < precision {
        return Err(Error::PrecisionShortfall { requested: precision, certified: value.precision() });
    }
    Ok(value.reduce(precision))
}

/// Coefficients `u_0..u_{K-1}` of `R_n(t + j/p) = Σ u_k t^k`, each known
/// modulo `p^{base + digits}` where `base` is
/// [`FormParams::series_base_valuation`].
///
/// Uses `R_n(t + j/p) = p^{(p+1+s)(n+1)-M_0-2} n!^s P(t) Q(t)` with
/// `P = (t+1)_n` and
/// `Q = (pt+j)^{M_0} ∏_{ν≠p-j} ∏_{m<n} (pt+pm+j+ν) ∏_{m≤n} (pt+pm+j)^{-(p-1+s)}`,
/// a power series in `pt`; only its first `digits` terms matter.
pub fn series_coefficients(params: &FormParams, j: u64, terms: usize, digits: i64) -> Result<PadicPowerSeries> {
    let (p, s, n) = (params.p, params.s, params.n);
    if j < 1 || j >= p {
        return Err(invalid(format!("j must lie in 1..{p}, got {j}")));
    }
    if digits < 1 {
        return Err(invalid("series needs at least one digit of relative precision"));
    }
    let m = prime_power(p, digits);
    let len = digits as usize;

    // q[l] is the coefficient of x^l in Q with x = pt.
    let mut q = vec![BigUint::zero(); len];
    q[0] = BigUint::one();
    let mul_linear = |q: &mut Vec<BigUint>, c: &BigUint| {
        for l in (1..q.len()).rev() {
            q[l] = (&q[l] * c + &q[l - 1]) % &m;
        }
        q[0] = &q[0] * c % &m;
    };
    let div_linear = |q: &mut Vec<BigUint>, c_inv: &BigUint| {
        q[0] = &q[0] * c_inv % &m;
        for l in 1..q.len() {
            let diff = (&q[l] + &m - &q[l - 1]) % &m;
            q[l] = diff * c_inv % &m;
        }
    };
    let cj = BigUint::from(j);
    for _ in 0..params.m0 {
        mul_linear(&mut q, &cj);
    }
    for nu in (1..p).filter(|&nu| nu != p - j) {
        for mm in 0..n {
            mul_linear(&mut q, &BigUint::from(p * mm + j + nu));
        }
    }
    for mm in 0..=n {
        let c = BigUint::from(p * mm + j);
        let c_inv = c.modinv(&m).ok_or_else(|| Error::Internal("non-unit factor in Q".into()))?;
        for _ in 0..params.e() {
            div_linear(&mut q, &c_inv);
        }
    }
    // coefficient of t^l in Q
    let q_t: Vec<BigUint> = q
        .into_iter()
        .enumerate()
        .map(|(l, c)| c * prime_power(p, l as i64) % &m)
        .collect();

    // P(t) = (t+1)_n reduced mod p^digits
    let mut poly = vec![BigUint::one()];
    for mm in 1..=n {
        let c = BigUint::from(mm);
        let mut next = vec![BigUint::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i] = (&next[i] + a * &c) % &m;
            next[i + 1] = (&next[i + 1] + a) % &m;
        }
        poly = next;
    }

    let base0 = (p as i64 + 1 + s as i64) * (n as i64 + 1) - params.m0 as i64 - 2;
    let (nf_unit, nf_val) = strip_factor(p, &factorial(n).pow(s as u32));
    let base = base0 + nf_val;
    let nf_unit = nf_unit % &m;
    let coefficients: Vec<PadicNumber> = (0..terms)
        .into_par_iter()
        .map(|k| {
            let mut acc = BigUint::zero();
            for (l, ql) in q_t.iter().enumerate().take(k + 1) {
                if let Some(pc) = poly.get(k - l) {
                    acc += pc * ql;
                }
            }
            let acc = acc % &m * &nf_unit % &m;
            PadicNumber::from_integer_parts(p, base, BigInt::from(acc), base + digits)
        })
        .collect();
    PadicPowerSeries::new(
        p,
        coefficients,
        TailBound { floor: base, offset: base - n as i64, slope: 1 },
    )
}

/// Lossless decimal-string encoding of a rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalString {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalString {
    fn from(x: &BigRational) -> Self {
        RationalString { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

impl TryFrom<&RationalString> for BigRational {
    type Error = Error;
    fn try_from(x: &RationalString) -> Result<Self> {
        let num: BigInt = x.num.parse().map_err(|_| invalid(format!("bad numerator {:?}", x.num)))?;
        let den: BigInt = x.den.parse().map_err(|_| invalid(format!("bad denominator {:?}", x.den)))?;
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormTableJson {
    pub params: FormParams,
    /// `r[i-1][k-1]`.
    pub r: Vec<Vec<RationalString>>,
    /// `rho[0] = ρ_0`, `rho[i] = ρ_i`.
    pub rho: Vec<RationalString>,
    pub rho0_parts: Vec<RationalString>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u128>,
}

impl FormTable {
    pub fn to_json(&self, with_timing: bool) -> FormTableJson {
        let enc = |v: &[BigRational]| v.iter().map(RationalString::from).collect::<Vec<_>>();
        FormTableJson {
            params: self.params.clone(),
            r: self.r.iter().map(|row| enc(row)).collect(),
            rho: enc(&self.rho),
            rho0_parts: enc(&self.rho0_parts),
            timing_ms: with_timing.then_some(self.elapsed_ms),
        }
    }

    pub fn from_json(j: &FormTableJson) -> Result<Self> {
        let dec = |v: &[RationalString]| v.iter().map(BigRational::try_from).collect::<Result<Vec<_>>>();
        let params = j.params.clone();
        require_working_prime(params.p)?;
        let e = params.e() as usize;
        let table = FormTable {
            r: j.r.iter().map(|row| dec(row)).collect::<Result<_>>()?,
            rho: dec(&j.rho)?,
            rho0_parts: dec(&j.rho0_parts)?,
            elapsed_ms: j.timing_ms.unwrap_or(0),
            params,
        };
        let n = table.params.n as usize;
        if table.r.len() != e
            || table.r.iter().any(|row| row.len() != n)
            || table.rho.len() != e + 1
            || table.rho0_parts.len() != table.params.p as usize - 1
        {
            return Err(invalid("form table has inconsistent dimensions"));
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_examples() {
        assert_eq!(construction_constants(5, 1).unwrap(), (1, 124));
        assert_eq!(construction_constants(7, 1).unwrap(), (1, 342));
        assert_eq!(construction_constants(5, 10).unwrap(), (0, 249));
        assert!(construction_constants(3, 1).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(make_params(5, 1, 100, true), Err(Error::Construction(_))));
        assert!(make_params(5, 1, 121, true).is_ok());
        assert!(matches!(make_params(5, 1, 124, false), Err(Error::Hypothesis(_))));
        assert!(make_params(5, 1, 1297, false).is_ok());
        assert_eq!(make_params(5, 1, 124, true).unwrap().degree(), -5);
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_index(5, 1, 3).unwrap().unwrap().n, 124);
        assert_eq!(admissible_index(5, 1, 4).unwrap().unwrap().n, 524);
        assert_eq!(admissible_index(5, 1, 5).unwrap().unwrap().n, 2524);
        // p - 1 + s = 14: 5^N ≡ 5^2 (mod 14) only for N ≡ 2 (mod 6)
        assert!(admissible_index(5, 10, 3).unwrap().is_none());
        assert!(admissible_index(5, 10, 8).unwrap().is_some());
        let first_strict = (1..10)
            .filter_map(|big_n| admissible_index(5, 1, big_n).unwrap())
            .find(|ix| ix.n > 6u64.pow(4))
            .unwrap();
        assert_eq!(first_strict.n, 2524);
    }

    #[test]
    fn eval_zero_and_roots() {
        let params = toy_params(5, 1, 4, 7).unwrap();
        assert!(eval_r(&params, &int(0)).unwrap().is_zero());
        for j in 1..5 {
            for k in 0..4 {
                let t = -(int(k) + rat(j, 5));
                assert!(eval_r(&params, &t).unwrap().is_zero());
            }
        }
        assert!(matches!(eval_r(&params, &int(-2)), Err(Error::Pole(_))));
    }

    #[test]
    fn toy_table_resums() {
        let params = toy_params(5, 1, 6, 8).unwrap();
        let table = partial_fractions(&params).unwrap();
        for t in [rat(1, 3), rat(-7, 2), rat(11, 5)] {
            assert_eq!(resum(&table, &t), eval_r(&params, &t).unwrap());
        }
        assert!(table.rho[1].is_zero());
    }

    #[test]
    fn json_round_trip() {
        let params = toy_params(7, 2, 5, 10).unwrap();
        let table = partial_fractions(&params).unwrap();
        let text = serde_json::to_string(&table.to_json(false)).unwrap();
        let back: FormTableJson = serde_json::from_str(&text).unwrap();
        let mut restored = FormTable::from_json(&back).unwrap();
        restored.elapsed_ms = table.elapsed_ms;
        assert_eq!(restored, table);
    }
}
