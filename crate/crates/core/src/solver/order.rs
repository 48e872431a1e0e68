//! Error-compensation order: the index of the first non-vanishing
//! probability coefficient beyond the constant term, certified against a
//! log-log slope measured on the exact propagator.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::families::DESIGN_POINT_TOL;
use crate::su2::{probability_series_with_scale, CompositeSequence, ProbabilitySeries};

/// Relative threshold above which a coefficient counts as non-zero.
pub const COEFF_ZERO_TOL: f64 = 1e-8;
/// Allowed gap between the series order and the fitted slope.
pub const SLOPE_TOL: f64 = 0.2;
/// Smallest |P(ε) - target| used in the slope fit; below it the f64
/// evaluation noise (~1e-16) would dominate the local slope.
pub const SLOPE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCertificate {
    pub order: usize,
    pub slope: f64,
    /// ε range the slope was measured on.
    pub window: (f64, f64),
    pub coeffs: Vec<f64>,
}

/// Series order used when none is given: two past twice the total area,
/// which bounds every order observed for these sequence shapes.
pub fn default_series_order(seq: &CompositeSequence) -> usize {
    libm::ceil(2.0 * seq.total_area_pi()) as usize + 2
}

/// Index of the first coefficient `c_k`, `k ≥ 1`, that is non-zero
/// relative to the magnitude of the terms that formed it.
pub fn series_order(series: &ProbabilitySeries) -> Result<usize> {
    (1..series.coeffs.len())
        .find(|&k| series.coeffs[k].abs() > COEFF_ZERO_TOL * series.scale[k].max(1.0))
        .ok_or(Error::OrderExceedsK(series.order()))
}

/// Log-log slope of `|P(ε) - target|` extrapolated to ε → 0.
///
/// The window starts at ε = 1e-3, or where the deviation first clears
/// [`SLOPE_FLOOR`] if that is later, and spans one decade (capped at 0.5).
/// Local secant slopes on that window are fitted with a cubic in ε whose
/// intercept is the slope at the origin, which removes the bias from
/// higher-order terms in long windows.
pub fn fitted_slope(seq: &CompositeSequence, p_target: f64) -> Result<(f64, (f64, f64))> {
    let dev = |e: f64| (seq.probability(e) - p_target).abs();
    let mut lo = 1e-3;
    while dev(lo) < SLOPE_FLOOR {
        lo *= 1.05;
        if lo > 0.5 {
            return Err(Error::SlopeUnresolved);
        }
    }
    let mut hi = (10.0 * lo).min(0.5);
    if hi < 2.0 * lo {
        hi = (2.0 * lo).min(0.9);
    }
    const POINTS: usize = 12;
    const RATIO: f64 = 1.01;
    let ln_ratio = libm::log(RATIO);
    let mut design = DMatrix::<f64>::zeros(POINTS, 4);
    let mut slopes = DVector::<f64>::zeros(POINTS);
    for i in 0..POINTS {
        let t = i as f64 / (POINTS - 1) as f64;
        let e = lo * libm::pow(hi / lo, t);
        let s = (libm::log(dev(e * RATIO)) - libm::log(dev(e))) / ln_ratio;
        if !s.is_finite() {
            return Err(Error::SlopeUnresolved);
        }
        slopes[i] = s;
        let mut pow = 1.0;
        for j in 0..4 {
            design[(i, j)] = pow;
            pow *= e;
        }
    }
    let fit = design
        .svd(true, true)
        .solve(&slopes, 1e-14)
        .map_err(|_| Error::SlopeUnresolved)?;
    Ok((fit[0], (lo, hi)))
}

/// Certifies the error-compensation order of `seq` around `p_target`,
/// using a series of order `order` (see [`default_series_order`]).
pub fn verify_order_with(
    seq: &CompositeSequence,
    p_target: f64,
    order: usize,
) -> Result<OrderCertificate> {
    let p0 = seq.probability(0.0);
    if (p0 - p_target).abs() >= DESIGN_POINT_TOL {
        return Err(Error::DesignPointMismatch {
            actual: p0,
            target: p_target,
        });
    }
    let series = probability_series_with_scale(seq, order)?;
    let m = series_order(&series)?;
    let (slope, window) = fitted_slope(seq, p_target)?;
    if (slope - m as f64).abs() > SLOPE_TOL {
        return Err(Error::OrderMismatch { series: m, slope });
    }
    Ok(OrderCertificate {
        order: m,
        slope,
        window,
        coeffs: series.coeffs,
    })
}

pub fn verify_order(seq: &CompositeSequence, p_target: f64) -> Result<OrderCertificate> {
    verify_order_with(seq, p_target, default_series_order(seq))
}
