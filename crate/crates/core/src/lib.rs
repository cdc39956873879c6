//! Winding numbers of circle-valued functions from their Fourier coefficients.
//!
//! The degree of a continuous `f: S¹ → S¹` equals `Σ n |a_n|²` whenever that
//! series converges absolutely; for rougher `f` the series is summed with a
//! classical process (partial sums, Cesàro, Riemann, Abel–Poisson). This crate
//! computes those sums from sampled data, checks each one against the winding
//! number of the sample polygon, and measures the smoothness gauges that
//! decide when the processes work.
//!
//! ```
//! use winding::{analyze, degree_fourier_default, winding_geometric, zoo, SummationMethod};
//!
//! let signal = zoo::monomial(3, 256).unwrap();
//! let spectrum = analyze(&signal, 64).unwrap();
//! let report = degree_fourier_default(&spectrum, SummationMethod::Abel).unwrap();
//! assert_eq!(report.rounded, winding_geometric(&signal).unwrap());
//! ```

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod degree;
pub mod error;
pub mod io;
pub mod lab;
pub mod seminorms;
pub mod spectrum;
pub mod summation;
pub mod zoo;

pub use degree::{
    degree_fourier, degree_fourier_default, lifted_winding, oracle_compare, winding_geometric,
    ComparisonRow, DegreeReport, OracleComparison,
};
pub use error::{Error, Result};
pub use lab::{convergence_table, q5_report, s_sweep, Q5Report, Ratio, SweepRow, TableRow};
pub use seminorms::{gagliardo, h_half_coefficient, lambda_test, vmo_modulus, LambdaPoint};
pub use spectrum::{
    analyze, energy_sequence, parseval_defect, synthesize, CircleSignal, EnergySequence,
    FourierSpectrum,
};
pub use summation::{
    extract_limit, riemann_sin_form, sum_abel, sum_cesaro, sum_partial, sum_riemann,
    LimitOutcome, LimitProtocol, SummationMethod,
};
