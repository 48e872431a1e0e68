use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::su2::propagator::Propagator;

/// Maps a phase in units of π onto `[0, 2)`.
///
/// Values within `1e-12` of 2 snap to 0 so that `-1e-17` and `2 - 1e-16`
/// do not end up on opposite ends of the interval.
pub fn canonical_phase(phase_pi: f64) -> f64 {
    let mut r = libm::fmod(phase_pi, 2.0);
    if r < 0.0 {
        r += 2.0;
    }
    if r >= 2.0 - 1e-12 {
        r = 0.0;
    }
    r
}

/// Shortest distance between two phases on the circle, in units of π.
pub fn phase_distance(x_pi: f64, y_pi: f64) -> f64 {
    let d = canonical_phase(x_pi - y_pi);
    d.min(2.0 - d)
}

/// One resonant pulse: nominal area and phase, both in units of π.
///
/// The physical area is `area_pi·π·(1 + ε)` for a common relative error ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    area_pi: f64,
    phase_pi: f64,
}

impl Pulse {
    pub fn new(area_pi: f64, phase_pi: f64) -> Result<Self> {
        if !(area_pi.is_finite() && area_pi > 0.0 && phase_pi.is_finite()) {
            return Err(Error::InvalidPulse { area_pi, phase_pi });
        }
        Ok(Self { area_pi, phase_pi })
    }

    /// Nominal π/2 pulse.
    pub fn half(phase_pi: f64) -> Self {
        Self { area_pi: 0.5, phase_pi }
    }

    /// Nominal π pulse.
    pub fn full(phase_pi: f64) -> Self {
        Self { area_pi: 1.0, phase_pi }
    }

    pub fn area_pi(&self) -> f64 {
        self.area_pi
    }

    pub fn phase_pi(&self) -> f64 {
        self.phase_pi
    }

    pub fn canonical_phase_pi(&self) -> f64 {
        canonical_phase(self.phase_pi)
    }

    pub fn with_phase(self, phase_pi: f64) -> Self {
        Self { phase_pi, ..self }
    }

    pub fn propagator(&self, eps: f64) -> Propagator {
        Propagator::pulse(self, eps)
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.area_pi == 0.5 {
            "A"
        } else if self.area_pi == 1.0 {
            "B"
        } else {
            return write!(f, "({}π)_{{{}π}}", self.area_pi, self.canonical_phase_pi());
        };
        write!(f, "{}_{{{}π}}", name, self.canonical_phase_pi())
    }
}

/// An ordered pulse train; pulse 0 acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSequence {
    pulses: Vec<Pulse>,
    label: String,
}

impl CompositeSequence {
    pub fn new(pulses: Vec<Pulse>, label: impl Into<String>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            pulses,
            label: label.into(),
        })
    }

    /// Builds a sequence from `(area_pi, phase_pi)` pairs, validating each pulse.
    pub fn from_pairs(pairs: &[(f64, f64)], label: impl Into<String>) -> Result<Self> {
        let pulses = pairs
            .iter()
            .map(|&(a, p)| Pulse::new(a, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pulses, label)
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn total_area_pi(&self) -> f64 {
        self.pulses.iter().map(Pulse::area_pi).sum()
    }

    pub fn areas_pi(&self) -> Vec<f64> {
        self.pulses.iter().map(Pulse::area_pi).collect()
    }

    pub fn phases_pi(&self) -> Vec<f64> {
        self.pulses.iter().map(Pulse::phase_pi).collect()
    }

    pub fn canonical_phases_pi(&self) -> Vec<f64> {
        self.pulses.iter().map(Pulse::canonical_phase_pi).collect()
    }

    /// Same pulses in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut pulses = self.pulses.clone();
        pulses.reverse();
        Self {
            pulses,
            label: self.label.clone(),
        }
    }

    /// Adds `shift_pi` to every phase.
    pub fn shifted(&self, shift_pi: f64) -> Self {
        self.map_phases(|p| p + shift_pi)
    }

    pub fn map_phases(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            pulses: self
                .pulses
                .iter()
                .map(|p| p.with_phase(f(p.phase_pi)))
                .collect(),
            label: self.label.clone(),
        }
    }

    /// Concatenates `other` after `self`.
    pub fn then(&self, other: &CompositeSequence) -> Self {
        let mut pulses = self.pulses.clone();
        pulses.extend_from_slice(&other.pulses);
        Self {
            pulses,
            label: self.label.clone(),
        }
    }

    pub fn propagator(&self, eps: f64) -> Propagator {
        crate::su2::compose(self, eps)
    }

    pub fn probability(&self, eps: f64) -> f64 {
        self.propagator(eps).transition_probability()
    }
}

impl fmt::Display for CompositeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pulses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
