//! Published phase tables (units of π) and checks that regenerate them
//! from the constructors and the solver.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::families::{self, equivalence_distance, FourClass, FourVariant};
use crate::solver::{solve_phases, SeedStrategy, SolveTemplate};
use crate::su2::{CompositeSequence, Pulse};

/// Per-phase agreement required when regenerating a table entry.
pub const TABLE_TOL: f64 = 1e-3;

pub const A: f64 = 0.5;
pub const B: f64 = 1.0;

/// One row of the prime-sequence table, indexed by target probability.
#[derive(Debug, Clone, Copy)]
pub struct PrimeRow {
    pub p_num: u32,
    pub p_den: u32,
    pub two: [f64; 2],
    pub three: [f64; 3],
    pub four: [f64; 4],
    pub five: [f64; 5],
    pub six: [f64; 6],
}

impl PrimeRow {
    pub fn p(&self) -> f64 {
        self.p_num as f64 / self.p_den as f64
    }

    pub fn name(&self) -> String {
        format!("P={}/{}", self.p_num, self.p_den)
    }
}

const T2: f64 = 2.0 / 3.0;
const F2: f64 = 0.4;
const F8: f64 = 1.6;

/// Phases of `A₀A`, `A₀BA`, `A₀BBA`, `A₀BBBA` and `A₀BBBBA` sequences.
pub const PRIME_TABLE: [PrimeRow; 13] = [
    PrimeRow { p_num: 1, p_den: 10, two: [0.0, 0.7952], three: [0.0, 0.8204, 1.4359], four: [0.0, T2, 1.4618, 0.7952], five: [0.0, 0.5033, 1.6110, 1.1032, 1.7861], six: [0.0, F2, F8, 0.3952, 1.1952, 0.7952] },
    PrimeRow { p_num: 1, p_den: 8, two: [0.0, 0.7699], three: [0.0, 0.8127, 1.3954], four: [0.0, T2, 1.4366, 0.7699], five: [0.0, 0.4891, 1.5988, 1.1258, 1.8022], six: [0.0, F2, F8, 0.3699, 1.1699, 0.7699] },
    PrimeRow { p_num: 1, p_den: 6, two: [0.0, 0.7323], three: [0.0, 0.8022, 1.3367], four: [0.0, T2, 1.3990, 0.7323], five: [0.0, 0.4698, 1.5821, 1.1599, 1.8275], six: [0.0, F2, F8, 0.3323, 1.1323, 0.7323] },
    PrimeRow { p_num: 1, p_den: 5, two: [0.0, 0.7048], three: [0.0, 0.7952, 1.2952], four: [0.0, T2, 1.3715, 0.7048], five: [0.0, 0.4569, 1.5710, 1.185, 1.8467], six: [0.0, F2, F8, 0.3048, 1.1048, 0.7048] },
    PrimeRow { p_num: 1, p_den: 4, two: [0.0, T2], three: [0.0, 0.7859, 1.2386], four: [0.0, T2, 4.0 / 3.0, T2], five: [0.0, 0.4401, 1.5564, 1.2201, 1.8743], six: [0.0, F2, F8, 4.0 / 15.0, 16.0 / 15.0, T2] },
    PrimeRow { p_num: 1, p_den: 3, two: [0.0, 0.6082], three: [0.0, 0.7728, 1.1537], four: [0.0, T2, 1.2748, 0.6082], five: [0.0, 0.4162, 1.5357, 1.2743, 1.9177], six: [0.0, F2, F8, 0.2082, 1.0082, 0.6082] },
    PrimeRow { p_num: 1, p_den: 2, two: [0.0, 0.5], three: [0.0, 0.75, 1.0], four: [0.0, T2, 7.0 / 6.0, 0.5], five: [0.0, 3.0 / 8.0, 1.5, 11.0 / 8.0, 0.0], six: [0.0, F2, F8, 0.1, 0.9, 0.5] },
    PrimeRow { p_num: 2, p_den: 3, two: [0.0, 0.3918], three: [0.0, 0.7272, 0.8463], four: [0.0, T2, 1.0585, 0.3918], five: [0.0, 0.3338, 1.4643, 1.4757, 0.0823], six: [0.0, F2, F8, 1.9918, 0.7918, 0.3918] },
    PrimeRow { p_num: 3, p_den: 4, two: [0.0, 1.0 / 3.0], three: [0.0, 0.7141, 0.7614], four: [0.0, T2, 1.0, 1.0 / 3.0], five: [0.0, 0.3099, 1.4436, 1.5299, 0.1257], six: [0.0, F2, F8, 29.0 / 15.0, 11.0 / 15.0, 1.0 / 3.0] },
    PrimeRow { p_num: 4, p_den: 5, two: [0.0, 0.2952], three: [0.0, 0.7048, 0.7048], four: [0.0, T2, 0.9618, 0.2952], five: [0.0, 0.2931, 1.4291, 1.565, 0.1533], six: [0.0, F2, F8, 1.8952, 0.6952, 0.2952] },
    PrimeRow { p_num: 5, p_den: 6, two: [0.0, 0.2677], three: [0.0, 0.6978, 0.6633], four: [0.0, T2, 0.9344, 0.2677], five: [0.0, 0.2802, 1.4179, 1.5901, 0.1725], six: [0.0, F2, F8, 1.8677, 0.6677, 0.2677] },
    PrimeRow { p_num: 7, p_den: 8, two: [0.0, 0.2301], three: [0.0, 0.6873, 0.6047], four: [0.0, T2, 0.8967, 0.2301], five: [0.0, 0.2609, 1.4013, 1.6242, 0.1979], six: [0.0, F2, F8, 1.8301, 0.6301, 0.2301] },
    PrimeRow { p_num: 9, p_den: 10, two: [0.0, 0.2048], three: [0.0, 0.6796, 0.5641], four: [0.0, T2, 0.8715, 0.2048], five: [0.0, 0.2467, 1.3890, 1.6468, 0.2139], six: [0.0, F2, F8, 1.8048, 0.6048, 0.2048] },
];

/// Rotation angles (units of π) of the twin-sequence table columns.
pub const TWIN_THETAS: [f64; 4] = [0.25, 1.0 / 3.0, 2.0 / 3.0, 0.75];

/// How a twin-table row is built from a π/2 base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinBase {
    Symmetric(usize),
    Asymmetric(usize),
    AsymmetricReversed(usize),
}

impl TwinBase {
    pub fn build(&self, theta_pi: f64) -> Result<CompositeSequence> {
        match *self {
            TwinBase::Symmetric(n) => families::twin_symmetric(n, theta_pi),
            TwinBase::Asymmetric(n) => families::twin_asymmetric(n, theta_pi),
            TwinBase::AsymmetricReversed(n) => families::twin_asymmetric_reversed(n, theta_pi),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TwinRow {
    pub base: TwinBase,
    pub total_area_pi: f64,
    pub order: usize,
    /// `(area, phase)` pairs, one list per entry of [`TWIN_THETAS`].
    pub entries: [&'static [(f64, f64)]; 4],
}

pub const TWIN_TABLE: [TwinRow; 6] = [
    TwinRow {
        base: TwinBase::Symmetric(2),
        total_area_pi: 2.0,
        order: 4,
        entries: [
            &[(A, 0.0), (A, 0.5), (A, 1.25), (A, 0.75)],
            &[(A, 0.0), (A, 0.5), (A, 7.0 / 6.0), (A, T2)],
            &[(A, 0.0), (A, 0.5), (A, 5.0 / 6.0), (A, 1.0 / 3.0)],
            &[(A, 0.0), (A, 0.5), (A, 0.75), (A, 0.25)],
        ],
    },
    TwinRow {
        base: TwinBase::Asymmetric(2),
        total_area_pi: 3.0,
        order: 6,
        entries: [
            &[(A, 0.0), (B, T2), (B, 17.0 / 12.0), (A, 0.75)],
            &[(A, 0.0), (B, T2), (B, 4.0 / 3.0), (A, T2)],
            &[(A, 0.0), (B, T2), (B, 1.0), (A, 1.0 / 3.0)],
            &[(A, 0.0), (B, T2), (B, 11.0 / 12.0), (A, 0.25)],
        ],
    },
    TwinRow {
        base: TwinBase::AsymmetricReversed(2),
        total_area_pi: 3.0,
        order: 6,
        entries: [
            &[(B, 0.0), (A, 4.0 / 3.0), (A, 1.0 / 12.0), (B, 0.75)],
            &[(B, 0.0), (A, 4.0 / 3.0), (A, 0.0), (B, T2)],
            &[(B, 0.0), (A, 4.0 / 3.0), (A, 5.0 / 3.0), (B, 1.0 / 3.0)],
            &[(B, 0.0), (A, 4.0 / 3.0), (A, 19.0 / 12.0), (B, 0.25)],
        ],
    },
    TwinRow {
        base: TwinBase::Symmetric(3),
        total_area_pi: 4.0,
        order: 8,
        entries: [
            &[(A, 0.0), (B, 0.25), (A, 1.0), (A, 1.75), (B, 1.0), (A, 0.75)],
            &[(A, 0.0), (B, 0.25), (A, 1.0), (A, 5.0 / 3.0), (B, 11.0 / 12.0), (A, T2)],
            &[(A, 0.0), (B, 0.25), (A, 1.0), (A, 4.0 / 3.0), (B, 7.0 / 12.0), (A, 1.0 / 3.0)],
            &[(A, 0.0), (B, 0.25), (A, 1.0), (A, 1.25), (B, 0.5), (A, 0.25)],
        ],
    },
    TwinRow {
        base: TwinBase::Asymmetric(3),
        total_area_pi: 5.0,
        order: 10,
        entries: [
            &[(A, 0.0), (B, F2), (B, F8), (B, 7.0 / 20.0), (B, 23.0 / 20.0), (A, 0.75)],
            &[(A, 0.0), (B, F2), (B, F8), (B, 4.0 / 15.0), (B, 16.0 / 15.0), (A, T2)],
            &[(A, 0.0), (B, F2), (B, F8), (B, 29.0 / 15.0), (B, 11.0 / 15.0), (A, 1.0 / 3.0)],
            &[(A, 0.0), (B, F2), (B, F8), (B, 37.0 / 20.0), (B, 13.0 / 20.0), (A, 0.25)],
        ],
    },
    TwinRow {
        base: TwinBase::AsymmetricReversed(3),
        total_area_pi: 5.0,
        order: 10,
        entries: [
            &[(B, 0.0), (B, 0.8), (A, F2), (A, 23.0 / 20.0), (B, 31.0 / 20.0), (B, 0.75)],
            &[(B, 0.0), (B, 0.8), (A, F2), (A, 16.0 / 15.0), (B, 22.0 / 15.0), (B, T2)],
            &[(B, 0.0), (B, 0.8), (A, F2), (A, 11.0 / 15.0), (B, 17.0 / 15.0), (B, 1.0 / 3.0)],
            &[(B, 0.0), (B, 0.8), (A, F2), (A, 13.0 / 20.0), (B, 21.0 / 20.0), (B, 0.25)],
        ],
    },
];

/// A twin sequence with symbolic angle: phase = `offset - θ` when the flag
/// is set, else `offset`.
#[derive(Debug, Clone, Copy)]
pub struct TwinFormula {
    pub base: TwinBase,
    pub pulses: &'static [(f64, f64, bool)],
}

impl TwinFormula {
    pub fn sequence(&self, theta_pi: f64) -> Result<CompositeSequence> {
        let pairs: Vec<(f64, f64)> = self
            .pulses
            .iter()
            .map(|&(a, off, th)| (a, if th { off - theta_pi } else { off }))
            .collect();
        CompositeSequence::from_pairs(&pairs, format!("{:?} theta={theta_pi}", self.base))
    }
}

pub const TWIN_FORMULAS: [TwinFormula; 12] = [
    TwinFormula { base: TwinBase::Symmetric(2), pulses: &[(A, 0.0, false), (A, 0.5, false), (A, 1.5, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Symmetric(3), pulses: &[(A, 0.0, false), (B, 0.25, false), (A, 1.0, false), (A, 2.0, true), (B, 1.25, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Symmetric(4), pulses: &[(A, 0.0, false), (B, 1.0 / 6.0, false), (B, T2, false), (A, 1.5, false), (A, 0.5, true), (B, 5.0 / 3.0, true), (B, 7.0 / 6.0, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Symmetric(5), pulses: &[(A, 0.0, false), (B, 0.125, false), (B, 0.5, false), (B, 1.125, false), (A, 0.0, false), (A, 1.0, true), (B, 0.125, true), (B, 1.5, true), (B, 1.125, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Asymmetric(2), pulses: &[(A, 0.0, false), (B, T2, false), (B, 5.0 / 3.0, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Asymmetric(3), pulses: &[(A, 0.0, false), (B, F2, false), (B, F8, false), (B, 0.6, true), (B, 1.4, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Asymmetric(4), pulses: &[(A, 0.0, false), (B, 2.0 / 7.0, false), (B, 8.0 / 7.0, false), (B, 4.0 / 7.0, false), (B, 11.0 / 7.0, true), (B, 1.0 / 7.0, true), (B, 9.0 / 7.0, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::Asymmetric(5), pulses: &[(A, 0.0, false), (B, 2.0 / 9.0, false), (B, 8.0 / 9.0, false), (B, 0.0, false), (B, 14.0 / 9.0, false), (B, 5.0 / 9.0, true), (B, 1.0, true), (B, 17.0 / 9.0, true), (B, 11.0 / 9.0, true), (A, 1.0, true)] },
    TwinFormula { base: TwinBase::AsymmetricReversed(2), pulses: &[(B, 0.0, false), (A, 4.0 / 3.0, false), (A, 1.0 / 3.0, true), (B, 1.0, true)] },
    TwinFormula { base: TwinBase::AsymmetricReversed(3), pulses: &[(B, 0.0, false), (B, 0.8, false), (A, F2, false), (A, 1.4, true), (B, 1.8, true), (B, 1.0, true)] },
    TwinFormula { base: TwinBase::AsymmetricReversed(4), pulses: &[(B, 0.0, false), (B, 4.0 / 7.0, false), (B, 12.0 / 7.0, false), (A, 10.0 / 7.0, false), (A, 3.0 / 7.0, true), (B, 5.0 / 7.0, true), (B, 11.0 / 7.0, true), (B, 1.0, true)] },
    TwinFormula { base: TwinBase::AsymmetricReversed(5), pulses: &[(B, 0.0, false), (B, 4.0 / 9.0, false), (B, 4.0 / 3.0, false), (B, T2, false), (A, 4.0 / 9.0, false), (A, 13.0 / 9.0, true), (B, 5.0 / 3.0, true), (B, 1.0 / 3.0, true), (B, 13.0 / 9.0, true), (B, 1.0, true)] },
];

/// Printed π/2 examples: symmetric then asymmetric, N = 2..=6.
pub const HALF_PI_SYMMETRIC: [&[f64]; 5] = [
    &[0.0, 0.5],
    &[0.0, 0.25, 1.0],
    &[0.0, 1.0 / 6.0, T2, 1.5],
    &[0.0, 0.125, 0.5, 1.125, 0.0],
    &[0.0, 0.1, F2, 0.9, F8, 0.5],
];

pub const HALF_PI_ASYMMETRIC: [&[f64]; 5] = [
    &[0.0, T2],
    &[0.0, F2, F8],
    &[0.0, 2.0 / 7.0, 8.0 / 7.0, 4.0 / 7.0],
    &[0.0, 2.0 / 9.0, 8.0 / 9.0, 0.0, 14.0 / 9.0],
    &[0.0, 2.0 / 11.0, 8.0 / 11.0, 18.0 / 11.0, 10.0 / 11.0, 6.0 / 11.0],
];

/// Minimal pulse counts claimed for holding `|P - 1/2| ≤ 1e-4` over
/// `|ε| ≤ 0.1, 0.2, 0.3`: `(symmetric, asymmetric)` per window.
pub const WINDOW_CLAIMS: [(f64, usize, usize); 3] = [(0.1, 3, 4), (0.2, 5, 5), (0.3, 6, 7)];
pub const WINDOW_CLAIM_TOL: f64 = 1e-4;

/// Outcome of regenerating one table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub table: &'static str,
    pub row: String,
    pub max_deviation: f64,
    pub passed: bool,
}

impl RowCheck {
    fn new(table: &'static str, row: String, max_deviation: f64) -> Self {
        Self {
            table,
            row,
            max_deviation,
            passed: max_deviation <= TABLE_TOL,
        }
    }

    fn failed(table: &'static str, row: String) -> Self {
        Self {
            table,
            row,
            max_deviation: f64::INFINITY,
            passed: false,
        }
    }
}

/// Builds `A₀ B … B A` style sequences from a phase list, with `A` at both
/// ends for lengths ≥ 3 and `A A` for length 2.
pub fn prime_table_sequence(phases: &[f64]) -> CompositeSequence {
    let n = phases.len();
    let pulses = phases
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if i == 0 || i == n - 1 {
                Pulse::half(p)
            } else {
                Pulse::full(p)
            }
        })
        .collect();
    CompositeSequence::new(pulses, "table").expect("non-empty")
}

fn distance(expected: &CompositeSequence, got: &Result<CompositeSequence>) -> f64 {
    got.as_ref()
        .ok()
        .and_then(|g| equivalence_distance(expected, g))
        .unwrap_or(f64::INFINITY)
}

/// Regenerates the 2-, 3-, 4- and 6-pulse columns from the constructors.
pub fn check_prime_constructors() -> Vec<RowCheck> {
    let mut out = Vec::new();
    for row in &PRIME_TABLE {
        let p = row.p();
        let theta = families::theta_from_probability(p).expect("table probabilities are valid");
        let cols: [(&str, &[f64], Result<CompositeSequence>); 4] = [
            ("2 pulses", &row.two, families::prime_two(p, families::Branch::Minus)),
            ("3 pulses", &row.three, families::prime_three(p, 4)),
            ("4 pulses", &row.four, families::prime_four(p, FourClass::Abba, FourVariant::B)),
            ("6 pulses", &row.six, families::twin_asymmetric(3, theta)),
        ];
        for (col, phases, built) in cols {
            let d = distance(&prime_table_sequence(phases), &built);
            out.push(RowCheck::new("primes", format!("{} {col}", row.name()), d));
        }
    }
    out
}

/// Re-derives the 5-pulse column with the solver; a row passes when any
/// returned branch matches it.
pub fn check_prime_solver(seeds: &SeedStrategy) -> Vec<RowCheck> {
    PRIME_TABLE
        .iter()
        .map(|row| check_five_pulse_row(row, seeds))
        .collect()
}

pub fn check_five_pulse_row(row: &PrimeRow, seeds: &SeedStrategy) -> RowCheck {
    let name = format!("{} 5 pulses (solver)", row.name());
    let expected = prime_table_sequence(&row.five);
    let solved = SolveTemplate::from_letters("ABBBA", row.p()).and_then(|t| {
        let res = solve_phases(&t, seeds)?;
        Ok((t, res))
    });
    match solved {
        Ok((t, res)) => {
            let d = res
                .iter()
                .map(|r| distance(&expected, &r.sequence(&t)))
                .fold(f64::INFINITY, f64::min);
            RowCheck::new("primes", name, d)
        }
        Err(_) => RowCheck::failed("primes", name),
    }
}

/// Regenerates the twin table and the symbolic twin formulas at the
/// table angles.
pub fn check_twins() -> Vec<RowCheck> {
    let mut out = Vec::new();
    for row in &TWIN_TABLE {
        for (theta, entry) in TWIN_THETAS.iter().zip(row.entries) {
            let expected = CompositeSequence::from_pairs(entry, "table").expect("valid table entry");
            let d = distance(&expected, &row.base.build(*theta));
            out.push(RowCheck::new(
                "twins",
                format!("{:?} theta={:.4}pi", row.base, theta),
                d,
            ));
        }
    }
    for f in &TWIN_FORMULAS {
        for theta in TWIN_THETAS.iter().chain(&[0.5, 1.0]) {
            let expected = f.sequence(*theta).expect("valid formula");
            let d = distance(&expected, &f.base.build(*theta));
            out.push(RowCheck::new(
                "twins",
                format!("formula {:?} theta={:.4}pi", f.base, theta),
                d,
            ));
        }
    }
    out
}

/// Regenerates the printed π/2 examples from the closed-form phase rules.
pub fn check_half_pi() -> Vec<RowCheck> {
    let mut out = Vec::new();
    for (i, phases) in HALF_PI_SYMMETRIC.iter().enumerate() {
        let n = i + 2;
        let expected = prime_table_sequence(phases);
        let d = distance(&expected, &families::symmetric_half_pi(n));
        out.push(RowCheck::new("half_pi", format!("symmetric N={n}"), d));
    }
    for (i, phases) in HALF_PI_ASYMMETRIC.iter().enumerate() {
        let n = i + 2;
        let pulses = phases
            .iter()
            .enumerate()
            .map(|(k, &p)| if k == 0 { Pulse::half(p) } else { Pulse::full(p) })
            .collect();
        let expected = CompositeSequence::new(pulses, "table").expect("non-empty");
        let d = distance(&expected, &families::asymmetric_half_pi(n));
        out.push(RowCheck::new("half_pi", format!("asymmetric N={n}"), d));
    }
    out
}
