//! Dense polynomials with exact rational coefficients.

use num_traits::{One, Zero};

use crate::exact::{binomial, int, BigRational};

/// Coefficients are stored lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(pub Vec<BigRational>);

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial(coeffs)
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![BigRational::zero(); degree + 1];
        c[degree] = BigRational::one();
        Polynomial(c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * int(k as i64))
            .collect();
        Polynomial::new(c)
    }

    /// `f(t + m)` as a polynomial in `t`.
    pub fn shift(&self, m: &BigRational) -> Self {
        let n = self.0.len();
        let mut out = vec![BigRational::zero(); n];
        for (k, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // a (t+m)^k = a Σ C(k,j) m^{k-j} t^j
            let mut mp = BigRational::one();
            let mut powers = Vec::with_capacity(k + 1);
            for _ in 0..=k {
                powers.push(mp.clone());
                mp *= m;
            }
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let c = int(num_bigint::BigInt::from(binomial(k as u64, j as u64)));
                *slot += a * c * &powers[k - j];
            }
        }
        Polynomial::new(out)
    }

    /// `(t + x)^n` expanded.
    pub fn binomial_power(x: &BigRational, n: usize) -> Self {
        Polynomial::monomial(n).shift(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn eval_and_derivative() {
        // 1 + 2t + 3t^2
        let f = Polynomial::new(vec![int(1), int(2), int(3)]);
        assert_eq!(f.eval(&int(2)), int(17));
        assert_eq!(f.derivative(), Polynomial::new(vec![int(2), int(6)]));
        assert_eq!(Polynomial::new(vec![int(5)]).derivative().degree(), None);
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = Polynomial::new(vec![rat(1, 3), int(-2), int(0), rat(5, 7)]);
        let m = rat(3, 2);
        let g = f.shift(&m);
        for t in [-3i64, 0, 1, 4] {
            let t = int(t);
            assert_eq!(g.eval(&t), f.eval(&(&t + &m)));
        }
    }
}
