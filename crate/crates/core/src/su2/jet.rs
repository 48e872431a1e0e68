//! Truncated power series in the pulse-area error ε.
//!
//! A [`Jet`] of order K holds the complex Taylor coefficients `0..=K`.
//! All arithmetic truncates: coefficient `k` of a result depends only on
//! coefficients `0..=k` of the operands.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = value;
        j
    }

    /// `value + slope·ε`.
    pub fn linear(value: Complex64, slope: Complex64, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = slope;
        }
        j
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least the constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    /// Evaluates the truncated polynomial at `eps`.
    pub fn eval(&self, eps: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * eps + c)
    }

    /// Coefficient-wise conjugate; the conjugate series for real ε.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// `(sin g, cos g)` through the coupled recurrence `s' = c·g'`, `c' = -s·g'`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let g = &self.coeffs;
        let mut s = vec![Complex64::new(0.0, 0.0); n];
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        s[0] = g[0].sin();
        c[0] = g[0].cos();
        for k in 1..n {
            let mut ds = Complex64::new(0.0, 0.0);
            let mut dc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                let jg = g[j] * j as f64;
                ds += jg * c[k - j];
                dc -= jg * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    /// `|z|²` as a series, together with the per-coefficient magnitude of
    /// the terms summed into it. The imaginary parts are left in place.
    pub fn norm_sqr_with_scale(&self) -> (Self, Vec<f64>) {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut scale = vec![0.0; n];
        for k in 0..n {
            for j in 0..=k {
                let t = self.coeffs[j] * self.coeffs[k - j].conj();
                out[k] += t;
                scale[k] += t.norm();
            }
        }
        (Self { coeffs: out }, scale)
    }

    pub fn norm_sqr(&self) -> Self {
        self.norm_sqr_with_scale().0
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "jets of different order"
        );
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            for j in 0..=k {
                *slot += self.coeffs[j] * rhs.coeffs[k - j];
            }
        }
        Jet { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_truncates() {
        // (1 + ε)(1 - ε) = 1 - ε², truncated at order 1 gives 1
        let a = Jet::linear(c(1.0), c(1.0), 1);
        let b = Jet::linear(c(1.0), c(-1.0), 1);
        assert_eq!((&a * &b).coeffs(), &[c(1.0), c(0.0)]);
        let a = Jet::linear(c(1.0), c(1.0), 3);
        let b = Jet::linear(c(1.0), c(-1.0), 3);
        assert_eq!((&a * &b).coeffs(), &[c(1.0), c(0.0), c(-1.0), c(0.0)]);
    }

    #[test]
    fn sin_cos_of_linear_argument_matches_taylor() {
        // sin(x0 + ε): coefficients sin^(k)(x0)/k!
        let x0 = 0.7;
        let (s, co) = Jet::linear(c(x0), c(1.0), 5).sin_cos();
        let derivs_sin = [x0.sin(), x0.cos(), -x0.sin(), -x0.cos(), x0.sin(), x0.cos()];
        let derivs_cos = [x0.cos(), -x0.sin(), -x0.cos(), x0.sin(), x0.cos(), -x0.sin()];
        let mut fact = 1.0;
        for k in 0..=5 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((s.coeff(k) - c(derivs_sin[k] / fact)).norm() < 1e-15);
            assert!((co.coeff(k) - c(derivs_cos[k] / fact)).norm() < 1e-15);
        }
    }

    #[test]
    fn sin_cos_of_nonlinear_argument() {
        // sin(ε²) = ε² - ε⁶/6 + ...
        let g = Jet::from_coeffs(vec![c(0.0), c(0.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let (s, co) = g.sin_cos();
        let expected_s = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0 / 6.0];
        let expected_c = [1.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0];
        for k in 0..=6 {
            assert!((s.coeff(k) - c(expected_s[k])).norm() < 1e-15);
            assert!((co.coeff(k) - c(expected_c[k])).norm() < 1e-15);
        }
    }

    #[test]
    fn pythagorean_identity_holds_on_series() {
        let g = Jet::from_coeffs(vec![
            Complex64::new(0.3, 0.1),
            c(1.2),
            Complex64::new(0.0, -0.4),
            c(0.2),
            c(0.0),
        ]);
        let (s, co) = g.sin_cos();
        let one = &(&s * &s) + &(&co * &co);
        assert!((one.coeff(0) - c(1.0)).norm() < 1e-14);
        for k in 1..=4 {
            assert!(one.coeff(k).norm() < 1e-14);
        }
    }

    #[test]
    fn eval_and_norm_sqr() {
        let z = Jet::linear(Complex64::new(1.0, 2.0), Complex64::new(0.0, 1.0), 2);
        assert_eq!(z.eval(0.5), Complex64::new(1.0, 2.5));
        // |1 + 2i + iε|² = 1 + (2 + ε)² = 5 + 4ε + ε²
        let n = z.norm_sqr();
        for (k, want) in [5.0, 4.0, 1.0].into_iter().enumerate() {
            assert!((n.coeff(k) - c(want)).norm() < 1e-15);
        }
    }
}
