//! Exact SU(2) algebra for resonant pulses with phase shifts.

mod jet;
mod propagator;
mod sequence;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

pub use jet::Jet;
pub use propagator::{inversion, Propagator};
pub use sequence::{canonical_phase, phase_distance, CompositeSequence, Pulse};

use crate::error::{Error, Result};

/// Imaginary residue allowed in a probability coefficient, relative to the
/// magnitude of the terms that were summed into it (floored at 1).
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Propagator of the whole train at error `eps`; the first pulse acts first.
pub fn compose(seq: &CompositeSequence, eps: f64) -> Propagator {
    seq.pulses()
        .iter()
        .fold(Propagator::identity(), |acc, p| acc.then(&p.propagator(eps)))
}

pub fn pulse_propagator(pulse: &Pulse, eps: f64) -> Propagator {
    pulse.propagator(eps)
}

pub fn transition_probability(u: &Propagator) -> f64 {
    u.transition_probability()
}

/// Taylor coefficients in ε of the Cayley-Klein parameters of
/// `compose(seq, ε)` about ε = 0, up to order `order`.
pub fn jet_compose(seq: &CompositeSequence, order: usize) -> Result<(Jet, Jet)> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let mut a = Jet::constant(Complex64::new(1.0, 0.0), order);
    let mut b = Jet::zero(order);
    for p in seq.pulses() {
        let half_area = Complex64::new(0.5 * p.area_pi() * PI, 0.0);
        let (s, c) = Jet::linear(half_area, half_area, order).sin_cos();
        let pb = s.scale(Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, p.phase_pi() * PI));
        let next_a = &(&c * &a) - &(&pb * &b.conj());
        let next_b = &(&c * &b) + &(&pb * &a.conj());
        a = next_a;
        b = next_b;
    }
    Ok((a, b))
}

/// Probability coefficients `c_k` together with the summed magnitude of
/// the products that formed each one, which bounds its rounding error.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySeries {
    pub coeffs: Vec<f64>,
    pub scale: Vec<f64>,
}

impl ProbabilitySeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * eps + c)
    }
}

pub fn probability_series_with_scale(
    seq: &CompositeSequence,
    order: usize,
) -> Result<ProbabilitySeries> {
    let (_, b) = jet_compose(seq, order)?;
    let (p, scale) = b.norm_sqr_with_scale();
    let mut coeffs = Vec::with_capacity(order + 1);
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.im.abs() > IMAGINARY_RESIDUE_TOL * scale[k].max(1.0) {
            return Err(Error::ImaginaryResidue {
                index: k,
                residue: c.im,
            });
        }
        coeffs.push(c.re);
    }
    Ok(ProbabilitySeries { coeffs, scale })
}

/// `P(ε) = Σ c_k ε^k + O(ε^{K+1})` for the transition probability.
pub fn probability_series(seq: &CompositeSequence, order: usize) -> Result<Vec<f64>> {
    Ok(probability_series_with_scale(seq, order)?.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seq(pairs: &[(f64, f64)]) -> CompositeSequence {
        CompositeSequence::from_pairs(pairs, "test").unwrap()
    }

    #[test]
    fn single_pulse_sequence_equals_pulse() {
        let p = Pulse::new(0.7, 0.3).unwrap();
        let s = CompositeSequence::new(vec![p], "one").unwrap();
        for eps in [-0.4, 0.0, 0.25] {
            assert_eq!(compose(&s, eps), pulse_propagator(&p, eps));
        }
    }

    #[test]
    fn freeman_pair_gives_half() {
        let s = seq(&[(0.5, 0.0), (0.5, 0.5)]);
        assert!((compose(&s, 0.0).transition_probability() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_pulse_symmetric_half_pi_against_matrix_product() {
        // Oracle: explicit 2x2 complex matrices multiplied right to left.
        let s = seq(&[(0.5, 0.0), (1.0, 0.25), (0.5, 1.0)]);
        let eps = 0.2;
        let mut m = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                     [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        for p in s.pulses() {
            let ang = p.area_pi() * PI * (1.0 + eps);
            let (sn, cs) = ((ang / 2.0).sin(), (ang / 2.0).cos());
            let e = Complex64::from_polar(1.0, p.phase_pi() * PI);
            let u = [[Complex64::new(cs, 0.0), Complex64::new(0.0, -sn) * e],
                     [Complex64::new(0.0, -sn) * e.conj(), Complex64::new(cs, 0.0)]];
            let mut next = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        next[i][j] += u[i][k] * m[k][j];
                    }
                }
            }
            m = next;
        }
        let oracle = m[0][1].norm_sqr();
        let closed = 0.5 - 0.5 * (0.1 * PI).sin().powi(4);
        let p = compose(&s, eps).transition_probability();
        assert!((p - oracle).abs() < 1e-14);
        assert!((p - closed).abs() < 1e-14);
        assert!((p - 0.495440).abs() < 1e-6);
    }

    #[test]
    fn jet_rejects_order_zero() {
        let s = seq(&[(0.5, 0.0)]);
        assert_eq!(jet_compose(&s, 0), Err(Error::InvalidOrder(0)));
        assert_eq!(probability_series(&s, 0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn single_half_pulse_jet() {
        let s = seq(&[(0.5, 0.0)]);
        let (a, _) = jet_compose(&s, 1).unwrap();
        let q = PI / 4.0;
        assert!((a.coeff(0) - Complex64::new(q.cos(), 0.0)).norm() < 1e-15);
        assert!((a.coeff(1) - Complex64::new(-q * q.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn order_zero_coefficients_reproduce_compose() {
        let s = seq(&[(0.5, 0.1), (1.0, 1.3), (1.0, 0.77), (0.5, 1.9)]);
        let (a, b) = jet_compose(&s, 6).unwrap();
        let u = compose(&s, 0.0);
        assert!((a.coeff(0) - u.a).norm() < 1e-12);
        assert!((b.coeff(0) - u.b).norm() < 1e-12);
    }

    #[test]
    fn single_theta_pulse_series() {
        // P = sin²(θ(1+ε)/2): c0 = P_θ, c1 = P_θ·θ·cot(θ/2)
        let s = seq(&[(0.5, 0.0)]);
        let c = probability_series(&s, 3).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!((c[1] - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_three_pulse_series() {
        let s = seq(&[(0.5, 0.0), (1.0, 0.25), (0.5, 1.0)]);
        let c = probability_series(&s, 5).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-15);
        for (k, ck) in c.iter().enumerate().take(4).skip(1) {
            assert!(ck.abs() < 1e-13, "c{k} = {ck}");
        }
        assert!((c[4] + 0.5 * (PI / 2.0).powi(4)).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_two_pulse_series() {
        let s = seq(&[(0.5, 0.0), (1.0, 2.0 / 3.0)]);
        let c = probability_series(&s, 4).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!(c[1].abs() < 1e-14 && c[2].abs() < 1e-14);
        assert!((c[3] - 0.5 * (PI / 2.0).powi(3)).abs() < 1e-12);
    }

    #[test]
    fn symmetric_pair_series_matches_richardson_differences() {
        // Oracle: central differences at steps h, h/2, h/4 combined by two
        // Richardson levels, for derivatives 1..4 of P(ε) at 0. A step of
        // 1e-2 keeps the fourth difference clear of cancellation noise.
        let s = seq(&[(0.5, 0.0), (0.5, 0.5)]);
        let p = |e: f64| compose(&s, e).transition_probability();
        let d = |h: f64| -> [f64; 4] {
            let (m2, m1, z, p1, p2) = (p(-2.0 * h), p(-h), p(0.0), p(h), p(2.0 * h));
            [
                (p1 - m1) / (2.0 * h),
                (p1 - 2.0 * z + m1) / (h * h),
                (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
                (p2 - 4.0 * p1 + 6.0 * z - 4.0 * m1 + m2) / (h * h * h * h),
            ]
        };
        let h = 1e-2;
        let (d1, d2, d3) = (d(h), d(h / 2.0), d(h / 4.0));
        let c = probability_series(&s, 4).unwrap();
        let mut fact = 1.0;
        #[allow(clippy::needless_range_loop)]
        for k in 1..=4 {
            fact *= k as f64;
            let i = k - 1;
            let r1 = d2[i] + (d2[i] - d1[i]) / 3.0;
            let r2 = d3[i] + (d3[i] - d2[i]) / 3.0;
            let deriv = r2 + (r2 - r1) / 15.0;
            let from_series = c[k] * fact;
            let err = (from_series - deriv).abs();
            assert!(err <= 1e-6 * deriv.abs().max(1.0), "k={k}: {from_series} vs {deriv}");
        }
    }
}
