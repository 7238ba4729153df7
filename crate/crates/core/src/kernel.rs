//! Seeded identity suite for the Bernoulli, Volkenborn and Teichmüller
//! layers. Every row is either an exact identity or a congruence with a
//! stated number of digits.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bernoulli::{
    bernoulli_functional_polynomial, bernoulli_polynomial, volkenborn_integral_polynomial,
    volkenborn_partial_sum, BernoulliCache,
};
use crate::error::Result;
use crate::exact::{int, is_integral, rat, sieve_primes, BigRational};
use crate::padic::{log_angle, prime_power, teichmuller, PadicNumber};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Serialize)]
pub struct KernelRow {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Smallest number of agreeing digits for congruence rows, `None`
    /// when the identity is exact.
    pub min_margin: Option<i64>,
    pub notes: Vec<String>,
}

impl KernelRow {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub seed: u64,
    pub rows: Vec<KernelRow>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(KernelRow::pass)
    }

    /// Fixed-width summary table.
    pub fn render(&self, verbose: bool) -> String {
        let mut out = format!("{:<34} {:>6} {:>8} {:>7}\n", "identity", "cases", "failures", "verdict");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<34} {:>6} {:>8} {:>7}\n",
                r.name,
                r.cases,
                r.failures,
                if r.pass() { "pass" } else { "FAIL" }
            ));
            if verbose {
                match r.min_margin {
                    Some(m) => out.push_str(&format!("    min agreement: {m} digits\n")),
                    None => out.push_str("    exact\n"),
                }
                for n in &r.notes {
                    out.push_str(&format!("    {n}\n"));
                }
            }
        }
        out
    }
}

struct Row {
    name: &'static str,
    cases: usize,
    failures: usize,
    margin: Option<i64>,
    notes: Vec<String>,
}

impl Row {
    fn new(name: &'static str) -> Self {
        Row { name, cases: 0, failures: 0, margin: None, notes: Vec::new() }
    }

    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.notes.push(note());
        }
    }

    fn margin(&mut self, digits: i64) {
        self.margin = Some(self.margin.map_or(digits, |m| m.min(digits)));
    }

    fn finish(self) -> KernelRow {
        KernelRow {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            min_margin: self.margin,
            notes: self.notes,
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Polynomial {
    let deg = rng.gen_range(0..=max_degree);
    let c = (0..=deg).map(|_| rat(rng.gen_range(-60..=60), rng.gen_range(1..=24))).collect();
    Polynomial::new(c)
}

fn random_int_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Polynomial {
    let deg = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=deg).map(|_| int(rng.gen_range(-40..=40))).collect())
}

fn random_unit_rational(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    loop {
        let a: i64 = rng.gen_range(1..=5000);
        let b: i64 = rng.gen_range(1..=5000);
        let shift: i32 = rng.gen_range(-3..=3);
        if !(a as u64).is_multiple_of(p) && !(b as u64).is_multiple_of(p) {
            let pp = int(BigInt::from(p).pow(shift.unsigned_abs()));
            let x = rat(a, b);
            return if shift >= 0 { x * pp } else { x / pp };
        }
    }
}

fn bernoulli_polynomial_integrals() -> Row {
    let mut row = Row::new("volkenborn_equals_bernoulli_poly");
    for x in [int(0), int(1), rat(1, 2), rat(3, 7)] {
        for n in 0..=12usize {
            let f = Polynomial::binomial_power(&x, n);
            let ok = volkenborn_integral_polynomial(f.coeffs()) == bernoulli_polynomial(n as u64, &x);
            row.record(ok, || format!("n = {n}, x = {x}"));
        }
    }
    row
}

fn translation(rng: &mut ChaCha8Rng) -> Row {
    let mut row = Row::new("translation_identity");
    for _ in 0..40 {
        let f = random_poly(rng, 12);
        let df = f.derivative();
        for m in 1..=5i64 {
            let lhs = volkenborn_integral_polynomial(f.shift(&int(m)).coeffs());
            let rhs = volkenborn_integral_polynomial(f.coeffs())
                + (0..m).map(|nu| df.eval(&int(nu))).sum::<BigRational>();
            row.record(lhs == rhs, || format!("m = {m}, f = {:?}", f.coeffs()));
        }
    }
    row
}

fn functional_of_derivative(rng: &mut ChaCha8Rng) -> Row {
    let mut row = Row::new("functional_of_derivative");
    for _ in 0..60 {
        let f = random_poly(rng, 12);
        let lhs = bernoulli_functional_polynomial(1, f.derivative().coeffs());
        let rhs = volkenborn_integral_polynomial(f.coeffs()) - f.eval(&BigRational::zero());
        let ok = matches!(&lhs, Ok(v) if *v == rhs);
        row.record(ok, || format!("f = {:?}", f.coeffs()));
    }
    row
}

fn partial_sums(rng: &mut ChaCha8Rng) -> Result<Row> {
    let mut row = Row::new("partial_sum_oracle");
    let p = 5u64;
    for _ in 0..4 {
        let f = random_int_poly(rng, 8);
        let exact = volkenborn_integral_polynomial(f.coeffs());
        for m in 3..=6u32 {
            let target = m as i64 - 2;
            let got = volkenborn_partial_sum(
                |k| Ok(PadicNumber::from_rational_abs(&f.eval(&int(k as i64)), p, target + m as i64)),
                p,
                m,
                target,
            )?;
            let want = PadicNumber::from_rational_abs(&exact, p, target);
            let agree = got.agreement(&want);
            row.margin(agree);
            row.record(agree >= target, || format!("m = {m}: agreement {agree} < {target}"));
        }
    }
    Ok(row)
}

fn von_staudt_clausen() -> Row {
    let mut row = Row::new("von_staudt_clausen");
    let b = BernoulliCache::global().range(301);
    let primes = sieve_primes(302);
    for n in (2..=300usize).step_by(2) {
        let mut acc = b[n].clone();
        for &q in primes.iter().filter(|&&q| (n as u64).is_multiple_of(q - 1)) {
            acc += rat(1, q as i64);
        }
        row.record(is_integral(&acc), || format!("n = {n}"));
    }
    row
}

fn teichmuller_roots(rng: &mut ChaCha8Rng) -> Result<Row> {
    let mut row = Row::new("teichmuller_root_of_unity");
    let digits = 40;
    for p in [5u64, 7, 11, 13] {
        for _ in 0..10 {
            let x = random_unit_rational(rng, p);
            let px = PadicNumber::from_rational(&x, p, digits);
            let w = teichmuller(&px)?;
            let v = px.valuation().unwrap();
            let wp = w.pow(p as i64 - 1)?;
            let top = (p as i64 - 1) * v;
            let target = PadicNumber::from_integer_parts(p, top, BigInt::one(), top + digits + 10);
            let agree = wp.agreement(&target) - (p as i64 - 1) * v;
            let same_residue = {
                let m = prime_power(p, 1);
                w.unit() % &m == px.unit() % &m
            };
            row.margin(agree);
            row.record(agree >= digits && same_residue, || format!("p = {p}, x = {x}"));
        }
    }
    Ok(row)
}

fn log_homomorphism(rng: &mut ChaCha8Rng) -> Result<Row> {
    let mut row = Row::new("log_angle_homomorphism");
    let m = 30;
    for p in [5u64, 7] {
        for _ in 0..10 {
            let x = random_unit_rational(rng, p);
            let y = random_unit_rational(rng, p);
            let emb = |z: &BigRational| PadicNumber::from_rational(z, p, m + 5);
            let lhs = log_angle(&emb(&(&x * &y)), m)?;
            let rhs = log_angle(&emb(&x), m)?.add(&log_angle(&emb(&y), m)?);
            let agree = lhs.agreement(&rhs);
            row.margin(agree);
            row.record(agree >= m, || format!("p = {p}, x = {x}, y = {y}"));
        }
    }
    Ok(row)
}

/// Runs every identity family with the given seed.
pub fn verify_kernel(seed: u64) -> Result<KernelReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = vec![
        bernoulli_polynomial_integrals(),
        translation(&mut rng),
        functional_of_derivative(&mut rng),
        partial_sums(&mut rng)?,
        von_staudt_clausen(),
        teichmuller_roots(&mut rng)?,
        log_homomorphism(&mut rng)?,
    ];
    Ok(KernelReport { seed, rows: rows.into_iter().map(Row::finish).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_reproducible() {
        let a = verify_kernel(11).unwrap();
        assert!(a.passed(), "{}", a.render(true));
        let b = verify_kernel(11).unwrap();
        assert_eq!(a.render(true), b.render(true));
        assert!(a.render(true).contains("min agreement"));
    }
}
