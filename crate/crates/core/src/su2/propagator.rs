use core::f64::consts::PI;

use num_complex::Complex64;

use crate::su2::sequence::Pulse;

/// An SU(2) propagator `[[a, b], [-b*, a*]]` stored through its
/// Cayley-Klein parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub a: Complex64,
    pub b: Complex64,
}

impl Propagator {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Resonant pulse with area `area_pi·π·(1+eps)` and phase `phase_pi·π`.
    pub fn pulse(pulse: &Pulse, eps: f64) -> Self {
        let half_area = 0.5 * pulse.area_pi() * PI * (1.0 + eps);
        let (s, c) = libm::sincos(half_area);
        let phase = Complex64::from_polar(1.0, pulse.phase_pi() * PI);
        Self::new(Complex64::new(c, 0.0), Complex64::new(0.0, -s) * phase)
    }

    /// Returns `next · self`, i.e. `self` acts first.
    pub fn then(&self, next: &Propagator) -> Self {
        Self::new(
            next.a * self.a - next.b * self.b.conj(),
            next.a * self.b + next.b * self.a.conj(),
        )
    }

    /// Full 2×2 matrix, row-major.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [-self.b.conj(), self.a.conj()]]
    }

    /// `|U_12|² = |b|²`.
    pub fn transition_probability(&self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() - 1.0).abs()
    }
}

/// Population inversion `w = 2p - 1`.
pub fn inversion(p: f64) -> f64 {
    2.0 * p - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-15;

    #[test]
    fn pi_pulse_inverts() {
        let u = Pulse::full(0.0).propagator(0.0);
        assert!(u.a.norm() < TOL);
        assert!((u.b - Complex64::new(0.0, -1.0)).norm() < TOL);
        assert!((u.transition_probability() - 1.0).abs() < TOL);
    }

    #[test]
    fn half_pi_pulse_values() {
        let u = Pulse::half(0.0).propagator(0.0);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((u.a - Complex64::new(r, 0.0)).norm() < TOL);
        assert!((u.b - Complex64::new(0.0, -r)).norm() < TOL);
    }

    #[test]
    fn phased_pulse_with_error() {
        let u = Pulse::full(2.0 / 3.0).propagator(0.1);
        let ang = 0.55 * PI;
        let expected_b = Complex64::new(0.0, -libm::sin(ang))
            * Complex64::new(libm::cos(2.0 * PI / 3.0), libm::sin(2.0 * PI / 3.0));
        assert!((u.a.re - libm::cos(ang)).abs() < TOL);
        assert_eq!(u.a.im, 0.0);
        assert!((u.b - expected_b).norm() < TOL);
        assert!(u.unitarity_defect() < 1e-15);
    }

    #[test]
    fn identity_and_full_inversion_probabilities() {
        assert_eq!(Propagator::identity().transition_probability(), 0.0);
        let u = Propagator::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0));
        assert_eq!(u.transition_probability(), 1.0);
    }

    #[test]
    fn then_matches_explicit_matrix_product() {
        let u1 = Pulse::half(0.3).propagator(0.05);
        let u2 = Pulse::full(1.2).propagator(0.05);
        let m1 = u1.matrix();
        let m2 = u2.matrix();
        let mut prod = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    prod[i][j] += m2[i][k] * m1[k][j];
                }
            }
        }
        let u = u1.then(&u2).matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[i][j] - prod[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn inversion_values() {
        assert_eq!(inversion(1.0), 1.0);
        assert_eq!(inversion(0.5), 0.0);
        let p = libm::sin(PI / 6.0).powi(2);
        assert!((inversion(p) + 0.5).abs() < 1e-15);
    }
}
