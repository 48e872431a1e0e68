//! Numerical phase derivation: drive `c₀ - P` and the leading probability
//! coefficients to zero, starting from many seeds, and keep the distinct
//! verified roots.

mod newton;
mod order;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use order::{
    default_series_order, fitted_slope, series_order, verify_order, verify_order_with,
    OrderCertificate, COEFF_ZERO_TOL, SLOPE_FLOOR, SLOPE_TOL,
};

use crate::error::{Error, Result};
use crate::families;
use crate::su2::{canonical_phase, phase_distance, probability_series_with_scale, CompositeSequence, Pulse};
use newton::{norm, Newton};

/// Residual norm a root must reach to be reported.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Two roots closer than this (max phase distance, units of π) after an
/// equivalence transform are the same branch.
pub const BRANCH_TOL: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 0x00C0_FFEE_2018;

const STRUCTURAL_ZERO_TOL: f64 = 1e-12;
const STRUCTURAL_PROBES: usize = 3;

/// Pulse areas, which phases are unknown, the target probability and the
/// highest series coefficient index `M` to annul.
///
/// Coefficients that vanish identically for the area pattern (every odd
/// one when the pattern is a palindrome with integer total area) carry no
/// information; they stay in the residual but do not count as equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTemplate {
    areas_pi: Vec<f64>,
    free: Vec<bool>,
    fixed_phases_pi: Vec<f64>,
    p_target: f64,
    annul_count: usize,
    structural_zero: Vec<bool>,
}

impl SolveTemplate {
    /// Template with the first phase pinned to zero and all others free.
    /// `M` defaults to the smallest value giving a square system.
    pub fn new(areas_pi: Vec<f64>, p_target: f64) -> Result<Self> {
        let n = areas_pi.len();
        let free = (0..n).map(|i| i > 0).collect();
        Self::with_mask(areas_pi, free, vec![0.0; n], p_target, None)
    }

    /// Template from pulse letters: `A` = π/2, `B` = π, e.g. `"ABBBA"`.
    pub fn from_letters(pattern: &str, p_target: f64) -> Result<Self> {
        Self::new(parse_letters(pattern)?, p_target)
    }

    pub fn with_mask(
        areas_pi: Vec<f64>,
        free: Vec<bool>,
        fixed_phases_pi: Vec<f64>,
        p_target: f64,
        annul_count: Option<usize>,
    ) -> Result<Self> {
        let n = areas_pi.len();
        if n == 0 {
            return Err(Error::InvalidTemplate("no pulses".to_string()));
        }
        if free.len() != n || fixed_phases_pi.len() != n {
            return Err(Error::InvalidTemplate(format!(
                "{n} areas but {} mask entries and {} phases",
                free.len(),
                fixed_phases_pi.len()
            )));
        }
        for &a in &areas_pi {
            Pulse::new(a, 0.0)?;
        }
        if !(0.0..=1.0).contains(&p_target) {
            return Err(Error::InvalidProbability(p_target));
        }
        let n_free = free.iter().filter(|&&f| f).count();
        if n_free == 0 {
            return Err(Error::InvalidTemplate("no free phases".to_string()));
        }
        let mut t = Self {
            areas_pi,
            free,
            fixed_phases_pi,
            p_target,
            annul_count: 0,
            structural_zero: Vec::new(),
        };
        let probe_order = annul_count.unwrap_or(0).max(2 * n_free + 2);
        t.structural_zero = t.probe_structural_zeros(probe_order)?;
        let m = match annul_count {
            Some(m) => m,
            None => {
                let mut active = 0;
                let mut m = 0;
                while active + 1 < n_free {
                    m += 1;
                    if !t.structural_zero[m] {
                        active += 1;
                    }
                }
                m
            }
        };
        t.annul_count = m;
        t.structural_zero.truncate(m + 1);
        let equations = t.active_equations();
        if equations > n_free {
            return Err(Error::InvalidTemplate(format!(
                "{equations} independent equations (c0 and {} coefficients up to c{m}) exceed {n_free} free phases",
                equations - 1
            )));
        }
        Ok(t)
    }

    pub fn with_annul_count(self, m: usize) -> Result<Self> {
        Self::with_mask(self.areas_pi, self.free, self.fixed_phases_pi, self.p_target, Some(m))
    }

    pub fn with_target(&self, p_target: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_target) {
            return Err(Error::InvalidProbability(p_target));
        }
        Ok(Self {
            p_target,
            ..self.clone()
        })
    }

    pub fn areas_pi(&self) -> &[f64] {
        &self.areas_pi
    }

    pub fn free_mask(&self) -> &[bool] {
        &self.free
    }

    pub fn p_target(&self) -> f64 {
        self.p_target
    }

    pub fn annul_count(&self) -> usize {
        self.annul_count
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    /// `c₀` plus every annulled coefficient that is not identically zero.
    pub fn active_equations(&self) -> usize {
        1 + (1..=self.annul_count)
            .filter(|&k| !self.structural_zero[k])
            .count()
    }

    /// Indices `k ≥ 1` of coefficients that vanish for every phase choice.
    pub fn structural_zeros(&self) -> Vec<usize> {
        (1..self.structural_zero.len())
            .filter(|&k| self.structural_zero[k])
            .collect()
    }

    pub fn is_palindrome(&self) -> bool {
        self.areas_pi.iter().eq(self.areas_pi.iter().rev())
    }

    pub fn letters(&self) -> String {
        self.areas_pi
            .iter()
            .map(|&a| {
                if a == 0.5 {
                    'A'
                } else if a == 1.0 {
                    'B'
                } else {
                    '?'
                }
            })
            .collect()
    }

    pub fn sequence(&self, phases_pi: &[f64]) -> Result<CompositeSequence> {
        if phases_pi.len() != self.areas_pi.len() {
            return Err(Error::InvalidTemplate(format!(
                "{} phases for {} pulses",
                phases_pi.len(),
                self.areas_pi.len()
            )));
        }
        let pairs: Vec<(f64, f64)> = self
            .areas_pi
            .iter()
            .copied()
            .zip(phases_pi.iter().copied())
            .collect();
        CompositeSequence::from_pairs(&pairs, format!("{} P={}", self.letters(), self.p_target))
    }

    fn full_phases(&self, free_values: &[f64]) -> Vec<f64> {
        let mut it = free_values.iter();
        self.free
            .iter()
            .zip(&self.fixed_phases_pi)
            .map(|(&f, &fixed)| if f { *it.next().expect("free count") } else { fixed })
            .collect()
    }

    fn free_values(&self, phases: &[f64]) -> Vec<f64> {
        phases
            .iter()
            .zip(&self.free)
            .filter(|(_, &f)| f)
            .map(|(&p, _)| p)
            .collect()
    }

    fn probe_structural_zeros(&self, order: usize) -> Result<Vec<bool>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5713_0C7A);
        let mut zero = vec![true; order + 1];
        zero[0] = false;
        for _ in 0..STRUCTURAL_PROBES {
            let free: Vec<f64> = (0..self.free_count()).map(|_| rng.gen_range(0.0..2.0)).collect();
            let seq = self.sequence(&self.full_phases(&free))?;
            let s = probability_series_with_scale(&seq, order.max(1))?;
            for (k, z) in zero.iter_mut().enumerate().skip(1) {
                if s.coeffs[k].abs() > STRUCTURAL_ZERO_TOL * s.scale[k].max(1.0) {
                    *z = false;
                }
            }
        }
        Ok(zero)
    }
}

fn parse_letters(pattern: &str) -> Result<Vec<f64>> {
    pattern
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c.to_ascii_uppercase() {
            'A' => Ok(0.5),
            'B' => Ok(1.0),
            other => Err(Error::InvalidTemplate(format!("unknown pulse letter {other:?}"))),
        })
        .collect()
}

/// `(c₀ - P, c₁, …, c_M)` for the sequence with the given phases.
pub fn objective(template: &SolveTemplate, phases_pi: &[f64]) -> Result<Vec<f64>> {
    let seq = template.sequence(phases_pi)?;
    let m = template.annul_count;
    let series = probability_series_with_scale(&seq, m.max(1))?;
    let mut r = Vec::with_capacity(m + 1);
    r.push(series.coeffs[0] - template.p_target);
    r.extend_from_slice(&series.coeffs[1..=m]);
    Ok(r)
}

/// Where Newton runs start from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedStrategy {
    /// Start from the closed-form π/2 phases when the template has a
    /// matching shape (used directly at P = 1/2, and as continuation roots).
    pub analytic: bool,
    /// March the target from 1/2 to the requested value.
    pub continuation: bool,
    pub continuation_step: f64,
    pub random_restarts: usize,
    pub seed: u64,
}

impl Default for SeedStrategy {
    fn default() -> Self {
        Self {
            analytic: true,
            continuation: true,
            continuation_step: 0.05,
            random_restarts: 200,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Canonical phases in `[0, 2)`, first phase zero when it was pinned.
    pub phases_pi: Vec<f64>,
    pub residual_norm: f64,
    /// First non-vanishing coefficient index of the probability series.
    pub achieved_order: usize,
    /// Index of the seed that first reached this branch.
    pub branch_id: usize,
}

impl SolveResult {
    pub fn sequence(&self, template: &SolveTemplate) -> Result<CompositeSequence> {
        template.sequence(&self.phases_pi)
    }
}

/// Closed-form π/2 phases whose area pattern matches the template.
fn analytic_seeds(template: &SolveTemplate) -> Vec<Vec<f64>> {
    let n = template.areas_pi.len();
    let mut out = Vec::new();
    let mut candidates = Vec::new();
    if let Ok(s) = families::symmetric_half_pi(n) {
        candidates.push(s);
    }
    if let Ok(s) = families::asymmetric_half_pi(n) {
        candidates.push(s.reversed());
        candidates.push(s);
    }
    for c in candidates {
        if c.areas_pi() == template.areas_pi {
            let first = c.pulses()[0].phase_pi();
            out.push(c.phases_pi().iter().map(|p| p - first).collect());
        }
    }
    out
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-9 {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

fn anchor(phases: &[f64], pinned_first: bool) -> Vec<f64> {
    let shift = if pinned_first { phases[0] } else { 0.0 };
    phases.iter().map(|p| canonical_phase(p - shift)).collect()
}

impl SolveTemplate {
    /// Phase vectors equivalent to `phases` that still fit this template.
    fn orbit(&self, phases: &[f64]) -> Vec<Vec<f64>> {
        let only_first_pinned = self.free.iter().skip(1).all(|&f| f);
        let pinned_first = !self.free[0];
        let mut out = vec![anchor(phases, pinned_first)];
        if !only_first_pinned {
            return out;
        }
        let neg: Vec<f64> = phases.iter().map(|p| -p).collect();
        out.push(anchor(&neg, true));
        if self.is_palindrome() {
            let rev: Vec<f64> = phases.iter().rev().copied().collect();
            let rev_neg: Vec<f64> = rev.iter().map(|p| -p).collect();
            out.push(anchor(&rev, true));
            out.push(anchor(&rev_neg, true));
        }
        out
    }

    fn representative(&self, phases: &[f64]) -> Vec<f64> {
        self.orbit(phases)
            .into_iter()
            .min_by(|a, b| lex_cmp(a, b))
            .expect("orbit is never empty")
    }

    fn same_branch(&self, a: &[f64], b: &[f64]) -> bool {
        self.orbit(b).iter().any(|cand| {
            a.iter()
                .zip(cand)
                .all(|(x, y)| phase_distance(*x, *y) < BRANCH_TOL)
        })
    }
}

struct Collector<'a> {
    template: &'a SolveTemplate,
    newton: Newton,
    results: Vec<SolveResult>,
}

impl Collector<'_> {
    fn solve_free(&self, template: &SolveTemplate, start: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
        let f = |x: &[f64]| objective(template, &template.full_phases(x));
        let (x, rn) = self.newton.run(f, start)?;
        Ok((rn < RESIDUAL_TOL).then_some((x, rn)))
    }

    fn accept(&mut self, free: &[f64], seed_index: usize) -> Result<()> {
        let t = self.template;
        let phases = t.representative(&t.full_phases(free));
        let residual = norm(&objective(t, &phases)?);
        if residual >= RESIDUAL_TOL {
            return Ok(());
        }
        if self.results.iter().any(|r| t.same_branch(&r.phases_pi, &phases)) {
            return Ok(());
        }
        let seq = t.sequence(&phases)?;
        let k = default_series_order(&seq).max(t.annul_count + 2);
        let series = probability_series_with_scale(&seq, k)?;
        let achieved_order = series_order(&series).unwrap_or(k + 1);
        self.results.push(SolveResult {
            phases_pi: phases,
            residual_norm: residual,
            achieved_order,
            branch_id: seed_index,
        });
        Ok(())
    }

    /// Follows a root at P = 1/2 to the template's target.
    fn continue_from(&self, start: &[f64], step: f64) -> Result<Option<Vec<f64>>> {
        let goal = self.template.p_target;
        let mut p = 0.5;
        let mut x = start.to_vec();
        let mut h = step;
        while (goal - p).abs() > 1e-15 {
            let next = if (goal - p).abs() <= h { goal } else { p + h * (goal - p).signum() };
            let t = self.template.with_target(next)?;
            match self.solve_free(&t, &x)? {
                Some((xn, _)) => {
                    x = xn;
                    p = next;
                    h = step;
                }
                None if h > step / 64.0 => h *= 0.5,
                None => return Ok(None),
            }
        }
        Ok(Some(x))
    }
}

/// Runs damped Newton from every seed and returns the distinct verified
/// roots, sorted by their canonical phase vectors.
pub fn solve_phases(template: &SolveTemplate, seeds: &SeedStrategy) -> Result<Vec<SolveResult>> {
    let mut c = Collector {
        template,
        newton: Newton::default(),
        results: Vec::new(),
    };
    let mut seed_index = 0;
    let mut attempts = 0;

    let analytic = if seeds.analytic { analytic_seeds(template) } else { Vec::new() };
    let half = template.with_target(0.5)?;
    let at_half = (template.p_target - 0.5).abs() < 1e-15;
    for start in &analytic {
        let free = template.free_values(start);
        attempts += 1;
        if at_half {
            if let Some((x, _)) = c.solve_free(template, &free)? {
                c.accept(&x, seed_index)?;
            }
        } else if seeds.continuation {
            if let Some((x, _)) = c.solve_free(&half, &free)? {
                if let Some(x) = c.continue_from(&x, seeds.continuation_step)? {
                    c.accept(&x, seed_index)?;
                }
            }
        }
        seed_index += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seeds.seed);
    for _ in 0..seeds.random_restarts {
        let start: Vec<f64> = (0..template.free_count())
            .map(|_| rng.gen_range(0.0..2.0))
            .collect();
        attempts += 1;
        if let Some((x, _)) = c.solve_free(template, &start)? {
            c.accept(&x, seed_index)?;
        }
        seed_index += 1;
    }

    if c.results.is_empty() {
        return Err(Error::NoConvergence { attempts });
    }
    let mut results = c.results;
    results.sort_by(|a, b| lex_cmp(&a.phases_pi, &b.phases_pi));
    Ok(results)
}
