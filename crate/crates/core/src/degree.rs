//! Degree of a circle-valued signal, computed two independent ways: by lifting
//! the argument along the sample polygon, and by summing the energy sequence
//! of its spectrum with one of the summation processes.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{analyze, energy_sequence, CircleSignal, FourierSpectrum, GENERATOR_UNIMODULAR_TOL};
use crate::summation::{extract_limit, LimitProtocol, SummationMethod};

/// Minimum distance (radians) an angular step must keep from `π`.
pub const ANGULAR_STEP_MARGIN: f64 = 0.1;

/// The lifted winding must land this close to an integer.
const LIFT_INTEGRALITY_TOL: f64 = 1e-6;

/// `(1/2π) Σ_j arg(f_{j+1}/f_j)` over the closed sample polygon, before rounding.
///
/// Fails if any step comes within [`ANGULAR_STEP_MARGIN`] of `±π`, since the
/// principal branch can no longer tell winding from aliasing there.
pub fn lifted_winding(signal: &CircleSignal) -> Result<f64> {
    let tol = signal.unimodular_tol().unwrap_or(GENERATOR_UNIMODULAR_TOL);
    signal.check_unimodular(tol)?;
    let samples = signal.samples();
    let n = samples.len();
    let bound = PI - ANGULAR_STEP_MARGIN;
    let mut total = 0.0;
    for j in 0..n {
        let step = (samples[(j + 1) % n] * samples[j].conj()).arg();
        if step.abs() >= bound {
            return Err(Error::Undersampled {
                index: j,
                step: step.abs(),
                bound,
            });
        }
        total += step;
    }
    Ok(total / TAU)
}

/// Winding number of the sample polygon (the geometric oracle).
pub fn winding_geometric(signal: &CircleSignal) -> Result<i64> {
    let lifted = lifted_winding(signal)?;
    let rounded = lifted.round();
    // Closed polygon: the principal-branch steps always sum to a multiple of 2π.
    debug_assert!((lifted - rounded).abs() <= LIFT_INTEGRALITY_TOL);
    if (lifted - rounded).abs() > LIFT_INTEGRALITY_TOL {
        return Err(Error::Parse(format!("lifted winding {lifted} is not integral")));
    }
    Ok(rounded as i64)
}

/// Outcome of a spectral degree estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub estimate: f64,
    pub rounded: i64,
    pub method: SummationMethod,
    /// Plateau reached and the estimate sits within the protocol tolerance of
    /// `rounded`.
    pub converged: bool,
    pub residual: f64,
    pub trace: Vec<(f64, f64)>,
}

/// Applies `method` to the energy sequence of `spectrum` along `protocol`.
///
/// Divergence is not an error: it shows up as `converged = false`.
pub fn degree_fourier(
    spectrum: &FourierSpectrum,
    method: SummationMethod,
    protocol: &LimitProtocol,
) -> Result<DegreeReport> {
    method.validate()?;
    let energy = energy_sequence(spectrum);
    let u = energy.values();
    let outcome = extract_limit(|p| method.evaluate(u, p), protocol)?;
    let estimate = outcome.estimate;
    let (rounded, residual) = if estimate.is_finite() {
        let r = estimate.round();
        (r as i64, (estimate - r).abs())
    } else {
        (0, f64::INFINITY)
    };
    Ok(DegreeReport {
        estimate,
        rounded,
        method,
        converged: outcome.converged && residual <= protocol.tolerance(),
        residual,
        trace: outcome.trace,
    })
}

/// [`degree_fourier`] with the method's default schedule.
pub fn degree_fourier_default(spectrum: &FourierSpectrum, method: SummationMethod) -> Result<DegreeReport> {
    let protocol = method.default_protocol(spectrum.bandwidth());
    degree_fourier(spectrum, method, &protocol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub method: SummationMethod,
    pub estimate: f64,
    pub converged: bool,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub geometric: i64,
    pub bandwidth: usize,
    pub rows: Vec<ComparisonRow>,
}

/// Runs every method against the geometric degree of `signal`.
///
/// The spectrum is taken at `bandwidth` (default `N/4`); methods use their
/// default protocols and may run concurrently, rows keep the input order.
pub fn oracle_compare(
    signal: &CircleSignal,
    methods: &[SummationMethod],
    bandwidth: Option<usize>,
) -> Result<OracleComparison> {
    let geometric = winding_geometric(signal)?;
    let bandwidth = bandwidth.unwrap_or(signal.len() / 4);
    let spectrum = analyze(signal, bandwidth)?;
    let rows = methods
        .par_iter()
        .map(|&method| {
            let report = degree_fourier_default(&spectrum, method)?;
            Ok(ComparisonRow {
                method,
                estimate: report.estimate,
                converged: report.converged,
                error: (report.estimate - geometric as f64).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleComparison {
        geometric,
        bandwidth,
        rows,
    })
}
