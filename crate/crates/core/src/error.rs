use thiserror::Error;

/// Errors raised by the sampling, summation, gauge and generator routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal is empty")]
    EmptySignal,

    #[error("sample count {0} must be a power of two and at least 4")]
    BadSampleCount(usize),

    #[error("signal is not unimodular: max ||f_j| - 1| = {deviation:e} exceeds tolerance {tolerance:e}")]
    NotUnimodular { deviation: f64, tolerance: f64 },

    #[error("bandwidth {bandwidth} exceeds Nyquist limit {limit}")]
    BandwidthExceedsNyquist { bandwidth: usize, limit: usize },

    #[error("undersampled synthesis: {samples} samples cannot carry bandwidth {bandwidth} (need at least {required})")]
    UndersampledSynthesis {
        samples: usize,
        bandwidth: usize,
        required: usize,
    },

    #[error("undersampled: angular step {step:.4} rad at sample {index} exceeds bound {bound:.4} rad; increase N")]
    Undersampled { index: usize, step: f64, bound: f64 },

    #[error("cutoff {cutoff} exceeds sequence length {len}")]
    CutoffExceedsSequence { cutoff: usize, len: usize },

    #[error("invalid summation method: {0}")]
    InvalidMethod(String),

    #[error("invalid limit protocol: {0}")]
    InvalidProtocol(String),

    #[error("parameter {name} = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("evaluation failed at parameter {parameter}: {source}")]
    Evaluation {
        parameter: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("arc of length {arc_length} holds fewer than 2 grid points")]
    ArcTooShort { arc_length: f64 },

    #[error("shift {shift} is not a multiple of the grid step")]
    NonGridShift { shift: f64 },

    #[error("aliasing: frequency {frequency} not representable with {samples} samples")]
    Aliasing { frequency: i64, samples: usize },

    #[error("Blaschke zero {zero} has modulus {modulus:.4} above the conditioning bound {bound}")]
    ZeroNearBoundary {
        zero: String,
        modulus: f64,
        bound: f64,
    },

    #[error("discontinuous phase specification: {0}")]
    DiscontinuousPhase(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for numerical precondition failures (as opposed to malformed input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotUnimodular { .. }
            | Error::BandwidthExceedsNyquist { .. }
            | Error::UndersampledSynthesis { .. }
            | Error::Undersampled { .. }
            | Error::CutoffExceedsSequence { .. }
            | Error::ArcTooShort { .. }
            | Error::NonGridShift { .. }
            | Error::Aliasing { .. }
            | Error::ZeroNearBoundary { .. }
            | Error::DiscontinuousPhase(_)
            | Error::EmptySignal
            | Error::BadSampleCount(_)
            | Error::OutOfRange { .. } => true,
            Error::Evaluation { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
