//! Constructors for the analytic sequence families and reference sequences.
//!
//! Naming follows the pulse letters used throughout: `A` is a nominal π/2
//! pulse, `B` a nominal π pulse, and the subscript is the phase in units of π.
//! Constructors parameterised by a target probability `P` use the rotation
//! angle `θ = arccos(1 - 2P)` on the principal branch, so `θ ∈ [0, π]`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::su2::{phase_distance, CompositeSequence, Pulse};

/// Zero-error probability a design must reach for `|P(0) - target|` to count as met.
pub const DESIGN_POINT_TOL: f64 = 1e-9;

/// `sin²(θ/2)` for `θ = theta_pi·π`.
pub fn target_probability(theta_pi: f64) -> f64 {
    let s = libm::sin(0.5 * theta_pi * PI);
    s * s
}

/// Rotation angle in units of π producing probability `p`.
pub fn theta_from_probability(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(libm::acos(1.0 - 2.0 * p) / PI)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

fn check_theta(theta_pi: f64) -> Result<()> {
    if !(theta_pi > 0.0 && theta_pi <= 1.0) {
        return Err(Error::InvalidTheta(theta_pi));
    }
    Ok(())
}

fn build(pulses: Vec<Pulse>, label: String) -> CompositeSequence {
    CompositeSequence::new(pulses, label).expect("family constructors emit at least one pulse")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `φ₂ = π - θ`
    Minus,
    /// `φ₂ = π + θ`
    Plus,
}

/// `A₀ A_{φ₂}` with `φ₂ = π ∓ θ`; probability `cos²(πε/2)·cos²(φ₂/2)`.
pub fn prime_two(p: f64, branch: Branch) -> Result<CompositeSequence> {
    let theta = theta_from_probability(p)?;
    let phi2 = match branch {
        Branch::Minus => 1.0 - theta,
        Branch::Plus => 1.0 + theta,
    };
    Ok(build(
        vec![Pulse::half(0.0), Pulse::half(phi2)],
        format!("prime2 P={p}"),
    ))
}

/// Three-pulse `A B A` sequences with `α = θ/2` and
/// `β = arccos(√P - √(1-P))`. The four variants are
/// `A_β B_α A_{-β}`, `A_{-β} B_α A_β`, `A₀ B_{α-β} A_{-2β}` and
/// `A₀ B_{α+β} A_{2β}`; all share the profile `P(1 - sin⁴(πε/2))`.
pub fn prime_three(p: f64, variant: u8) -> Result<CompositeSequence> {
    let theta = theta_from_probability(p)?;
    let alpha = 0.5 * theta;
    let beta = libm::acos((libm::sqrt(p) - libm::sqrt(1.0 - p)).clamp(-1.0, 1.0)) / PI;
    let phases = match variant {
        1 => [beta, alpha, -beta],
        2 => [-beta, alpha, beta],
        3 => [0.0, alpha - beta, -2.0 * beta],
        4 => [0.0, alpha + beta, 2.0 * beta],
        v => return Err(Error::InvalidVariant(v)),
    };
    Ok(build(
        vec![
            Pulse::half(phases[0]),
            Pulse::full(phases[1]),
            Pulse::half(phases[2]),
        ],
        format!("prime3 P={p} variant={variant}"),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourClass {
    /// `A B B A`, total area 3π, order 6.
    Abba,
    /// `A A A A`, total area 2π, order 4.
    Aaaa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourVariant {
    A,
    B,
}

pub fn prime_four(p: f64, class: FourClass, variant: FourVariant) -> Result<CompositeSequence> {
    let t = theta_from_probability(p)?;
    let pulses = match (class, variant) {
        (FourClass::Abba, FourVariant::A) => vec![
            Pulse::half(0.0),
            Pulse::full(2.0 / 3.0),
            Pulse::full(t - 1.0 / 3.0),
            Pulse::half(t + 1.0),
        ],
        (FourClass::Abba, FourVariant::B) => vec![
            Pulse::half(0.0),
            Pulse::full(2.0 / 3.0),
            Pulse::full(5.0 / 3.0 - t),
            Pulse::half(1.0 - t),
        ],
        (FourClass::Aaaa, FourVariant::A) => vec![
            Pulse::half(0.0),
            Pulse::half(0.5),
            Pulse::half(t - 0.5),
            Pulse::half(t + 1.0),
        ],
        (FourClass::Aaaa, FourVariant::B) => vec![
            Pulse::half(0.0),
            Pulse::half(1.5),
            Pulse::half(t + 0.5),
            Pulse::half(t + 1.0),
        ],
    };
    Ok(build(pulses, format!("prime4 {class:?}-{variant:?} P={p}")))
}

fn check_count(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidPulseCount { count: n, min });
    }
    Ok(())
}

/// `A_{φ₁} B_{φ₂} … B_{φ_{N-1}} A_{φ_N}` with `φ_k = (k-1)²/(2(N-1))`,
/// reduced modulo 2. Probability `1/2 - sin^{2N-2}(πε/2)/2`.
pub fn symmetric_half_pi(n: usize) -> Result<CompositeSequence> {
    check_count(n, 2)?;
    let den = 2 * (n - 1);
    let pulses = (0..n)
        .map(|k| {
            let phase = ((k * k) % (2 * den)) as f64 / den as f64;
            if k == 0 || k == n - 1 {
                Pulse::half(phase)
            } else {
                Pulse::full(phase)
            }
        })
        .collect();
    Ok(build(pulses, format!("sym_half_pi N={n}")))
}

/// `A_{φ₁} B_{φ₂} … B_{φ_N}` with `φ_k = 2(k-1)²/(2N-1)`, reduced modulo 2.
/// Probability `1/2 + sin^{2N-1}(πε/2)/2`.
pub fn asymmetric_half_pi(n: usize) -> Result<CompositeSequence> {
    check_count(n, 1)?;
    let den = 2 * n - 1;
    let pulses = (0..n)
        .map(|k| {
            let phase = ((2 * k * k) % (2 * den)) as f64 / den as f64;
            if k == 0 {
                Pulse::half(phase)
            } else {
                Pulse::full(phase)
            }
        })
        .collect();
    Ok(build(pulses, format!("asym_half_pi N={n}")))
}

pub fn reverse(seq: &CompositeSequence) -> CompositeSequence {
    seq.reversed()
}

/// Moves the first pulse to phase zero by a global shift.
fn anchored(seq: &CompositeSequence) -> CompositeSequence {
    let first = seq.pulses()[0].phase_pi();
    seq.shifted(-first)
}

/// `H₀ H^R_ϑ`: the base followed by its reversal with every phase shifted by
/// `ϑ = π - θ`. Requires the base to give probability 1/2 at zero error.
pub fn twin(base: &CompositeSequence, theta_pi: f64) -> Result<CompositeSequence> {
    if !(0.0..=2.0).contains(&theta_pi) {
        return Err(Error::InvalidTheta(theta_pi));
    }
    let p0 = base.probability(0.0);
    if (p0 - 0.5).abs() > DESIGN_POINT_TOL {
        return Err(Error::NotHalfPi(p0));
    }
    let shift = 1.0 - theta_pi;
    let second = base.reversed().shifted(shift);
    Ok(base
        .then(&second)
        .with_label(format!("twin[{}] theta={theta_pi}", base.label())))
}

pub fn twin_symmetric(n: usize, theta_pi: f64) -> Result<CompositeSequence> {
    twin(&symmetric_half_pi(n)?, theta_pi)
}

pub fn twin_asymmetric(n: usize, theta_pi: f64) -> Result<CompositeSequence> {
    twin(&asymmetric_half_pi(n)?, theta_pi)
}

/// Twin built on the mirrored asymmetric sequence `B … B A`, anchored so its
/// first pulse has phase zero.
pub fn twin_asymmetric_reversed(n: usize, theta_pi: f64) -> Result<CompositeSequence> {
    let base = anchored(&asymmetric_half_pi(n)?.reversed())
        .with_label(format!("asym_half_pi_reversed N={n}"));
    twin(&base, theta_pi)
}

/// Wimperis BB1: `Θ₀ B_χ B_{3χ} B_{3χ} B_χ` with `χ = arccos(-θ/(4π))`.
pub fn bb1(theta_pi: f64) -> Result<CompositeSequence> {
    check_theta(theta_pi)?;
    let ratio = -theta_pi / 4.0;
    if ratio.abs() > 1.0 {
        return Err(Error::InvalidTheta(theta_pi));
    }
    let chi = libm::acos(ratio) / PI;
    let theta_pulse = Pulse::new(theta_pi, 0.0)?;
    Ok(build(
        vec![
            theta_pulse,
            Pulse::full(chi),
            Pulse::full(3.0 * chi),
            Pulse::full(3.0 * chi),
            Pulse::full(chi),
        ],
        format!("bb1 theta={theta_pi}"),
    ))
}

/// BB1 phase `χ` in units of π.
pub fn bb1_chi(theta_pi: f64) -> f64 {
    libm::acos(-theta_pi / 4.0) / PI
}

/// The nested Levitt-Ernst π/2 sequences of 4 and 8 pulses.
pub fn levitt_ernst(n: usize) -> Result<CompositeSequence> {
    let phases: &[f64] = match n {
        4 => &[0.0, -0.5, 0.0, 0.5],
        8 => &[0.0, 1.5, 0.0, 0.5, 1.0, 0.5, 0.0, 0.5],
        _ => return Err(Error::UnsupportedLevittErnst(n)),
    };
    Ok(build(
        phases.iter().map(|&p| Pulse::half(p)).collect(),
        format!("levitt_ernst N={n}"),
    ))
}

/// Probability-preserving rewrites of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    /// Negate every phase.
    Negate,
    /// Add `2π·k_j` to phase `j`.
    AddTurns(Vec<i64>),
    /// Apply the pulses in the opposite order.
    Reverse,
    /// Add the same phase (units of π) to every pulse.
    GlobalShift(f64),
}

pub fn equivalent(seq: &CompositeSequence, transform: &Transform) -> Result<CompositeSequence> {
    Ok(match transform {
        Transform::Negate => seq.map_phases(|p| -p),
        Transform::AddTurns(turns) => {
            if turns.len() != seq.len() {
                return Err(Error::TransformLength {
                    expected: seq.len(),
                    got: turns.len(),
                });
            }
            let mut it = turns.iter();
            seq.map_phases(|p| p + 2.0 * *it.next().expect("length checked") as f64)
        }
        Transform::Reverse => seq.reversed(),
        Transform::GlobalShift(shift) => seq.shifted(*shift),
    })
}

fn same_areas(a: &CompositeSequence, b: &CompositeSequence) -> bool {
    a.len() == b.len()
        && a
            .pulses()
            .iter()
            .zip(b.pulses())
            .all(|(x, y)| (x.area_pi() - y.area_pi()).abs() < 1e-12)
}

/// Smallest maximum per-pulse phase distance (units of π) between `a` and
/// any image of `b` under negation, reversal, global shift and 2π turns.
/// `None` when no image has the same area pattern as `a`.
pub fn equivalence_distance(a: &CompositeSequence, b: &CompositeSequence) -> Option<f64> {
    let reversed = b.reversed();
    let candidates = [
        b.clone(),
        b.map_phases(|p| -p),
        reversed.clone(),
        reversed.map_phases(|p| -p),
    ];
    let mut best: Option<f64> = None;
    for c in candidates.iter().filter(|c| same_areas(a, c)) {
        for (pa, pc) in a.pulses().iter().zip(c.pulses()) {
            let shift = pa.phase_pi() - pc.phase_pi();
            let d = a
                .pulses()
                .iter()
                .zip(c.pulses())
                .map(|(x, y)| phase_distance(x.phase_pi(), y.phase_pi() + shift))
                .fold(0.0, f64::max);
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Prime2,
    Prime3,
    Prime4Abba,
    Prime4Aaaa,
    SymHalfPi,
    AsymHalfPi,
    TwinSym,
    TwinAsym,
    TwinAsymReversed,
    Bb1,
    LevittErnst,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Prime2,
        Family::Prime3,
        Family::Prime4Abba,
        Family::Prime4Aaaa,
        Family::SymHalfPi,
        Family::AsymHalfPi,
        Family::TwinSym,
        Family::TwinAsym,
        Family::TwinAsymReversed,
        Family::Bb1,
        Family::LevittErnst,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Prime2 => "prime2",
            Family::Prime3 => "prime3",
            Family::Prime4Abba => "prime4-abba",
            Family::Prime4Aaaa => "prime4-aaaa",
            Family::SymHalfPi => "sym-half-pi",
            Family::AsymHalfPi => "asym-half-pi",
            Family::TwinSym => "twin-sym",
            Family::TwinAsym => "twin-asym",
            Family::TwinAsymReversed => "twin-asym-reversed",
            Family::Bb1 => "bb1",
            Family::LevittErnst => "levitt-ernst",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Families whose rotation angle is a free parameter.
    pub fn takes_theta(&self) -> bool {
        !matches!(
            self,
            Family::SymHalfPi | Family::AsymHalfPi | Family::LevittErnst
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Names one member of a family. `n` is the pulse count for the π/2
/// families and Levitt-Ernst, and the base π/2 pulse count for twins; it is
/// ignored by the fixed-length prime families and BB1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub n: usize,
    pub theta_pi: f64,
    pub variant: u8,
}

impl FamilyDescriptor {
    pub fn new(family: Family, n: usize, theta_pi: f64, variant: u8) -> Self {
        Self {
            family,
            n,
            theta_pi,
            variant,
        }
    }

    pub fn target_probability(&self) -> f64 {
        if self.family.takes_theta() {
            target_probability(self.theta_pi)
        } else {
            0.5
        }
    }

    /// Pulse count of the built sequence.
    pub fn pulse_count(&self) -> usize {
        match self.family {
            Family::Prime2 => 2,
            Family::Prime3 => 3,
            Family::Prime4Abba | Family::Prime4Aaaa => 4,
            Family::Bb1 => 5,
            Family::TwinSym | Family::TwinAsym | Family::TwinAsymReversed => 2 * self.n,
            Family::SymHalfPi | Family::AsymHalfPi | Family::LevittErnst => self.n,
        }
    }

    pub fn build(&self) -> Result<CompositeSequence> {
        let theta = self.theta_pi;
        if self.family.takes_theta() {
            check_theta(theta)?;
        }
        let p = target_probability(theta);
        let four_variant = || match self.variant {
            0 | 1 => Ok(FourVariant::A),
            2 => Ok(FourVariant::B),
            v => Err(Error::InvalidVariant(v)),
        };
        let seq = match self.family {
            Family::Prime2 => match self.variant {
                0 | 1 => prime_two(p, Branch::Minus)?,
                2 => prime_two(p, Branch::Plus)?,
                v => return Err(Error::InvalidVariant(v)),
            },
            Family::Prime3 => prime_three(p, if self.variant == 0 { 4 } else { self.variant })?,
            Family::Prime4Abba => {
                // the published table uses variant b for this class
                let v = if self.variant == 0 { FourVariant::B } else { four_variant()? };
                prime_four(p, FourClass::Abba, v)?
            }
            Family::Prime4Aaaa => prime_four(p, FourClass::Aaaa, four_variant()?)?,
            Family::SymHalfPi => symmetric_half_pi(self.n)?,
            Family::AsymHalfPi => asymmetric_half_pi(self.n)?,
            Family::TwinSym => twin_symmetric(self.n, theta)?,
            Family::TwinAsym => twin_asymmetric(self.n, theta)?,
            Family::TwinAsymReversed => twin_asymmetric_reversed(self.n, theta)?,
            Family::Bb1 => bb1(theta)?,
            Family::LevittErnst => levitt_ernst(self.n)?,
        };
        Ok(seq.with_label(self.label()))
    }

    pub fn label(&self) -> String {
        if self.family.takes_theta() {
            format!(
                "{} N={} theta={}pi P={}",
                self.family,
                self.pulse_count(),
                short(self.theta_pi),
                short(self.target_probability())
            )
        } else {
            format!("{} N={} P=0.5", self.family, self.n)
        }
    }
}

/// Up to ten decimals, trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}
