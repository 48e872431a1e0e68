use alloc::string::String;

/// Failures reported by sequence construction, evaluation and solving.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid pulse: area {area_pi}π, phase {phase_pi}π")]
    InvalidPulse { area_pi: f64, phase_pi: f64 },

    #[error("a composite sequence needs at least one pulse")]
    EmptySequence,

    #[error("series order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("probability coefficient {index} has imaginary residue {residue:e}")]
    ImaginaryResidue { index: usize, residue: f64 },

    #[error("target probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("rotation angle {0}π outside the admissible range")]
    InvalidTheta(f64),

    #[error("invalid variant {0}")]
    InvalidVariant(u8),

    #[error("pulse count {count} not allowed here (minimum {min})")]
    InvalidPulseCount { count: usize, min: usize },

    #[error("Levitt-Ernst sequences exist only for 4 or 8 pulses, got {0}")]
    UnsupportedLevittErnst(usize),

    #[error("twin base must give probability 1/2 at zero error, got {0}")]
    NotHalfPi(f64),

    #[error("transform expects {expected} entries, got {got}")]
    TransformLength { expected: usize, got: usize },

    #[error("invalid solve template: {0}")]
    InvalidTemplate(String),

    #[error("no root found after {attempts} attempts")]
    NoConvergence { attempts: usize },

    #[error("zero-error probability {actual} differs from target {target}")]
    DesignPointMismatch { actual: f64, target: f64 },

    #[error("all coefficients up to order {0} vanish")]
    OrderExceedsK(usize),

    #[error("deviation never rises above the evaluation floor; slope cannot be fitted")]
    SlopeUnresolved,

    #[error("series order {series} disagrees with fitted log-log slope {slope:.3}")]
    OrderMismatch { series: usize, slope: f64 },

    #[error("sequences have different zero-error probabilities ({0} vs {1})")]
    MixedTargets(f64, f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("window of {eps_req} not achievable with at most {n_max} pulses")]
    NotAchievable { eps_req: f64, n_max: usize },

    #[error("closed-form window {closed_form} disagrees with matrix oracle {oracle}")]
    OracleMismatch { closed_form: f64, oracle: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
