//! Excitation profiles, robustness windows and head-to-head comparisons.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::families;
use crate::su2::CompositeSequence;
use crate::tables::{WINDOW_CLAIMS, WINDOW_CLAIM_TOL};

/// Number of points of the guard grid scanned before bisection.
pub const GUARD_POINTS: usize = 2001;
/// Upper end of the ε range searched for a robustness window.
pub const WINDOW_RANGE: f64 = 1.0;
/// Bisection stops once the bracket is this narrow.
pub const WINDOW_RESOLUTION: f64 = 1e-8;
/// Closed-form and oracle windows must agree to this.
pub const WINDOW_AGREEMENT_TOL: f64 = 1e-6;
/// Default half-width of the comparison band.
pub const COMPARISON_BAND: f64 = 0.2;
/// Sequences are considered to share a target when `P(0)` agree to this.
pub const TARGET_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationProfile {
    pub eps_grid: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub sequence_label: String,
}

impl ExcitationProfile {
    pub fn len(&self) -> usize {
        self.eps_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_grid.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.eps_grid.iter().copied().zip(self.probabilities.iter().copied())
    }
}

/// `points` uniformly spaced values from `min` to `max`, both included.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid(alloc::format!("need at least 2 points, got {points}")));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidGrid(alloc::format!("empty range [{min}, {max}]")));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + (max - min) * (i as f64 / last)
            }
        })
        .collect())
}

pub fn profile(
    seq: &CompositeSequence,
    eps_min: f64,
    eps_max: f64,
    points: usize,
) -> Result<ExcitationProfile> {
    let eps_grid = uniform_grid(eps_min, eps_max, points)?;
    Ok(profile_on(seq, &eps_grid))
}

pub fn profile_on(seq: &CompositeSequence, grid: &[f64]) -> ExcitationProfile {
    ExcitationProfile {
        eps_grid: grid.to_vec(),
        probabilities: grid.iter().map(|&e| seq.probability(e)).collect(),
        sequence_label: seq.label().into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub tol: f64,
    /// Half-width of the symmetric ε window holding `|P - P_target| ≤ tol`.
    pub eps_star: f64,
    pub family: String,
    pub n: usize,
}

/// Largest `e ≤ WINDOW_RANGE` with `deviation(±ε) ≤ tol` for all `|ε| ≤ e`.
///
/// A guard grid locates the first violation, then bisection refines it.
/// Scanning first matters for oscillating deviations, where a plain
/// bisection can step over a violation.
pub fn window_of<F: Fn(f64) -> f64>(deviation: F, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    let ok = |e: f64| deviation(e) <= tol && deviation(-e) <= tol;
    if !ok(0.0) {
        return Ok(0.0);
    }
    let step = WINDOW_RANGE / (GUARD_POINTS - 1) as f64;
    let mut lo = 0.0;
    for i in 1..GUARD_POINTS {
        let e = if i == GUARD_POINTS - 1 { WINDOW_RANGE } else { i as f64 * step };
        if !ok(e) {
            let mut hi = e;
            while hi - lo > WINDOW_RESOLUTION {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(lo);
        }
        lo = e;
    }
    Ok(WINDOW_RANGE)
}

pub fn robustness_window(
    seq: &CompositeSequence,
    p_target: f64,
    tol: f64,
) -> Result<RobustnessReport> {
    let eps_star = window_of(|e| (seq.probability(e) - p_target).abs(), tol)?;
    Ok(RobustnessReport {
        tol,
        eps_star,
        family: seq.label().into(),
        n: seq.len(),
    })
}

/// The two π/2 families, whose deviations from 1/2 have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPiFamily {
    Symmetric,
    Asymmetric,
}

impl HalfPiFamily {
    pub const ALL: [HalfPiFamily; 2] = [HalfPiFamily::Symmetric, HalfPiFamily::Asymmetric];

    pub fn name(&self) -> &'static str {
        match self {
            HalfPiFamily::Symmetric => "sym",
            HalfPiFamily::Asymmetric => "asym",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sym" | "symmetric" => Some(HalfPiFamily::Symmetric),
            "asym" | "asymmetric" => Some(HalfPiFamily::Asymmetric),
            _ => None,
        }
    }

    pub fn build(&self, n: usize) -> Result<CompositeSequence> {
        match self {
            HalfPiFamily::Symmetric => families::symmetric_half_pi(n),
            HalfPiFamily::Asymmetric => families::asymmetric_half_pi(n),
        }
    }

    /// Power of `sin(πε/2)` in the deviation from 1/2.
    pub fn exponent(&self, n: usize) -> i32 {
        match self {
            HalfPiFamily::Symmetric => 2 * n as i32 - 2,
            HalfPiFamily::Asymmetric => 2 * n as i32 - 1,
        }
    }

    /// Closed-form `P(ε)`.
    pub fn probability(&self, n: usize, eps: f64) -> f64 {
        let s = libm::pow(libm::sin(PI * eps / 2.0), self.exponent(n) as f64);
        match self {
            HalfPiFamily::Symmetric => 0.5 - 0.5 * s,
            HalfPiFamily::Asymmetric => 0.5 + 0.5 * s,
        }
    }
}

/// Window of a π/2 family member from the inverted closed form.
pub fn closed_form_window(family: HalfPiFamily, n: usize, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if n < 2 {
        return Err(Error::InvalidPulseCount { count: n, min: 2 });
    }
    let x = 2.0 * tol;
    if x >= 1.0 {
        return Ok(WINDOW_RANGE);
    }
    let k = family.exponent(n) as f64;
    Ok((2.0 / PI * libm::asin(libm::pow(x, 1.0 / k))).min(WINDOW_RANGE))
}

/// Window of a π/2 family member from the matrix product.
pub fn oracle_window(family: HalfPiFamily, n: usize, tol: f64) -> Result<f64> {
    let seq = family.build(n)?;
    Ok(robustness_window(&seq, 0.5, tol)?.eps_star)
}

/// Both windows, failing if they disagree by more than
/// [`WINDOW_AGREEMENT_TOL`].
pub fn checked_window(family: HalfPiFamily, n: usize, tol: f64) -> Result<RobustnessReport> {
    let closed_form = closed_form_window(family, n, tol)?;
    let oracle = oracle_window(family, n, tol)?;
    if (closed_form - oracle).abs() > WINDOW_AGREEMENT_TOL {
        return Err(Error::OracleMismatch { closed_form, oracle });
    }
    Ok(RobustnessReport {
        tol,
        eps_star: closed_form,
        family: family.name().into(),
        n,
    })
}

/// Smallest `N ≤ n_max` whose window reaches `eps_req`, from the closed
/// form with each candidate cross-checked against the matrix product.
pub fn min_pulses_for_window(
    family: HalfPiFamily,
    tol: f64,
    eps_req: f64,
    n_max: usize,
) -> Result<usize> {
    if !(eps_req > 0.0 && eps_req <= 1.0) {
        return Err(Error::InvalidGrid(alloc::format!("eps_req {eps_req} outside (0, 1]")));
    }
    for n in 2..=n_max {
        if checked_window(family, n, tol)?.eps_star >= eps_req {
            return Ok(n);
        }
    }
    Err(Error::NotAchievable { eps_req, n_max })
}

/// Same query decided purely by the matrix product.
pub fn min_pulses_oracle(
    family: HalfPiFamily,
    tol: f64,
    eps_req: f64,
    n_max: usize,
) -> Result<usize> {
    for n in 2..=n_max {
        if oracle_window(family, n, tol)? >= eps_req {
            return Ok(n);
        }
    }
    Err(Error::NotAchievable { eps_req, n_max })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowAuditRow {
    pub eps_req: f64,
    pub family: HalfPiFamily,
    pub claimed: usize,
    pub closed_form: usize,
    pub oracle: usize,
    /// Windows of the computed minimum, closed form and oracle.
    pub eps_star_closed_form: f64,
    pub eps_star_oracle: f64,
}

impl WindowAuditRow {
    pub fn matches_claim(&self) -> bool {
        self.closed_form == self.claimed && self.oracle == self.claimed
    }

    pub fn methods_agree(&self) -> bool {
        self.closed_form == self.oracle
            && (self.eps_star_closed_form - self.eps_star_oracle).abs() <= WINDOW_AGREEMENT_TOL
    }
}

/// Recomputes the published minimal pulse counts at tolerance 1e-4.
pub fn window_audit(n_max: usize) -> Result<Vec<WindowAuditRow>> {
    let mut rows = Vec::new();
    for &(eps_req, sym, asym) in &WINDOW_CLAIMS {
        for (family, claimed) in [(HalfPiFamily::Symmetric, sym), (HalfPiFamily::Asymmetric, asym)] {
            let closed_form = min_pulses_for_window(family, WINDOW_CLAIM_TOL, eps_req, n_max)?;
            let oracle = min_pulses_oracle(family, WINDOW_CLAIM_TOL, eps_req, n_max)?;
            rows.push(WindowAuditRow {
                eps_req,
                family,
                claimed,
                closed_form,
                oracle,
                eps_star_closed_form: closed_form_window(family, closed_form, WINDOW_CLAIM_TOL)?,
                eps_star_oracle: oracle_window(family, closed_form, WINDOW_CLAIM_TOL)?,
            });
        }
    }
    Ok(rows)
}

/// Deviations `|P - P_target|` of several sequences on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub p_target: f64,
    pub eps_grid: Vec<f64>,
    pub labels: Vec<String>,
    /// `deviations[s][i]` for sequence `s` at grid point `i`.
    pub deviations: Vec<Vec<f64>>,
    pub band: f64,
    /// Largest deviation of each sequence over grid points with `|ε| ≤ band`.
    pub max_in_band: Vec<f64>,
}

impl Comparison {
    /// Index of the sequence with the smallest in-band maximum.
    pub fn best(&self) -> Option<usize> {
        self.max_in_band
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
    }
}

pub fn compare(seqs: &[CompositeSequence], grid: &[f64]) -> Result<Comparison> {
    compare_with_band(seqs, grid, COMPARISON_BAND)
}

pub fn compare_with_band(seqs: &[CompositeSequence], grid: &[f64], band: f64) -> Result<Comparison> {
    let first = seqs.first().ok_or(Error::EmptySequence)?;
    let p_target = first.probability(0.0);
    for s in &seqs[1..] {
        let p = s.probability(0.0);
        if (p - p_target).abs() > TARGET_MATCH_TOL {
            return Err(Error::MixedTargets(p_target, p));
        }
    }
    if !grid.iter().any(|e| e.abs() <= band) {
        return Err(Error::InvalidGrid(alloc::format!("no grid point within |eps| <= {band}")));
    }
    let deviations: Vec<Vec<f64>> = seqs
        .iter()
        .map(|s| grid.iter().map(|&e| (s.probability(e) - p_target).abs()).collect())
        .collect();
    let max_in_band = deviations
        .iter()
        .map(|d| {
            grid.iter()
                .zip(d)
                .filter(|(e, _)| e.abs() <= band)
                .map(|(_, &v)| v)
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(Comparison {
        p_target,
        eps_grid: grid.to_vec(),
        labels: seqs.iter().map(|s| s.label().into()).collect(),
        deviations,
        band,
        max_in_band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{asymmetric_half_pi, bb1, prime_three, prime_two, symmetric_half_pi, Branch};

    #[test]
    fn grid_hits_endpoints() {
        let g = uniform_grid(-1.0, 1.0, 2).unwrap();
        assert_eq!(g, [-1.0, 1.0]);
        let g = uniform_grid(-1.0, 1.0, 201).unwrap();
        assert_eq!(g[100], 0.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        assert!(uniform_grid(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn prime_two_half_profile() {
        let s = prime_two(0.5, Branch::Minus).unwrap();
        let p = profile(&s, -1.0, 1.0, 3).unwrap();
        assert!(p.probabilities[0].abs() < 1e-15);
        assert!((p.probabilities[1] - 0.5).abs() < 1e-15);
        assert!(p.probabilities[2].abs() < 1e-15);
        let p = profile(&s, -1.0, 1.0, 101).unwrap();
        for i in 0..101 {
            assert!((p.probabilities[i] - p.probabilities[100 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn asymmetric_deviation_is_odd() {
        let s = asymmetric_half_pi(3).unwrap();
        for i in 0..50 {
            let e = i as f64 / 50.0;
            let d = s.probability(e) - 0.5 + (s.probability(-e) - 0.5);
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn asymmetric_two_window() {
        let r = robustness_window(&asymmetric_half_pi(2).unwrap(), 0.5, 1e-2).unwrap();
        let expected = 2.0 / PI * libm::asin(libm::cbrt(2e-2));
        assert!((r.eps_star - expected).abs() < 1e-6);
        assert!((r.eps_star - 0.175).abs() < 1e-3);
        assert!((closed_form_window(HalfPiFamily::Asymmetric, 2, 1e-2).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn loose_and_impossible_tolerances() {
        let s = symmetric_half_pi(2).unwrap();
        assert_eq!(robustness_window(&s, 0.5, 1.0).unwrap().eps_star, 1.0);
        assert_eq!(robustness_window(&s, 0.9, 0.1).unwrap().eps_star, 0.0);
        assert!(robustness_window(&s, 0.5, 0.0).is_err());
    }

    #[test]
    fn guard_grid_catches_narrow_spike() {
        let d = |e: f64| if (e - 0.3).abs() < 2e-3 { 1.0 } else { 0.0 };
        let w = window_of(d, 0.5).unwrap();
        assert!((w - 0.298).abs() < 1e-6, "{w}");
    }

    #[test]
    fn symmetric_five_reaches_two_tenths() {
        let r = robustness_window(&symmetric_half_pi(5).unwrap(), 0.5, 1e-4).unwrap();
        assert!(r.eps_star >= 0.2);
    }

    #[test]
    fn minimal_counts() {
        assert_eq!(min_pulses_for_window(HalfPiFamily::Asymmetric, 1e-4, 0.2, 20).unwrap(), 5);
        assert_eq!(min_pulses_for_window(HalfPiFamily::Symmetric, 1e-4, 0.2, 20).unwrap(), 5);
        assert_eq!(min_pulses_for_window(HalfPiFamily::Symmetric, 0.499, 1e-6, 20).unwrap(), 2);
        assert!(matches!(
            min_pulses_for_window(HalfPiFamily::Symmetric, 1e-6, 0.9, 6),
            Err(Error::NotAchievable { .. })
        ));
    }

    #[test]
    fn audit_methods_agree() {
        let rows = window_audit(20).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            assert!(r.methods_agree(), "{r:?}");
        }
        for r in rows.iter().filter(|r| r.eps_req == 0.2) {
            assert!(r.matches_claim(), "{r:?}");
        }
    }

    #[test]
    fn windows_grow_with_n() {
        for f in HalfPiFamily::ALL {
            let mut last = 0.0;
            for n in 2..=12 {
                let w = closed_form_window(f, n, 1e-4).unwrap();
                assert!(w >= last);
                last = w;
            }
        }
    }

    #[test]
    fn comparison_against_bb1() {
        let grid = uniform_grid(-0.2, 0.2, 401).unwrap();
        let seqs = [
            asymmetric_half_pi(5).unwrap(),
            prime_three(0.5, 4).unwrap(),
            bb1(0.5).unwrap(),
        ];
        let c = compare(&seqs, &grid).unwrap();
        assert!(c.max_in_band[0] < c.max_in_band[2]);
        assert!(c.max_in_band[1] < c.max_in_band[2]);
        assert_eq!(c.best(), Some(0));
    }

    #[test]
    fn self_comparison_and_mixed_targets() {
        let grid = uniform_grid(-1.0, 1.0, 21).unwrap();
        let s = symmetric_half_pi(3).unwrap();
        let c = compare(&[s.clone(), s.clone()], &grid).unwrap();
        assert_eq!(c.deviations[0], c.deviations[1]);
        let other = prime_two(0.25, Branch::Minus).unwrap();
        assert!(matches!(compare(&[s, other], &grid), Err(Error::MixedTargets(..))));
    }
}
