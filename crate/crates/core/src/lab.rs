//! Experiment drivers: energy inequalities, the `|n|^{2s}` sweep, and bulk
//! method-versus-family convergence tables.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::degree::{degree_fourier_default, winding_geometric};
use crate::error::{Error, Result};
use crate::seminorms::h_half_coefficient;
use crate::spectrum::{analyze, CircleSignal, FourierSpectrum};
use crate::summation::SummationMethod;
use crate::zoo::ZooSpec;

/// Slack allowed when checking `lhs ≤ |deg| + 2·positive_energy`.
pub const BOUND1_SLACK: f64 = 1e-6;
/// Constant of the second, unconditional bound as printed.
pub const BOUND2_CONSTANT: f64 = 32.0;

/// A quotient that may have a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    /// Positive numerator over zero.
    Infinite,
    /// Zero over zero.
    Undefined,
}

impl Ratio {
    pub fn of(numerator: f64, denominator: f64) -> Self {
        if denominator != 0.0 {
            Ratio::Finite(numerator / denominator)
        } else if numerator == 0.0 {
            Ratio::Undefined
        } else {
            Ratio::Infinite
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => serializer.serialize_f64(*v),
            Ratio::Infinite => serializer.serialize_str("infinite"),
            Ratio::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeSource {
    /// Rounded Abel estimate that converged.
    Abel,
    /// Geometric oracle, used because Abel did not converge.
    Oracle,
    /// Rounded Abel estimate that did not converge and no signal was supplied.
    AbelUnconverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q5Report {
    /// `Σ |n| |a_n|²`.
    pub lhs: f64,
    /// `Σ_{n≥1} n |a_n|²`.
    pub positive_energy: f64,
    /// `Σ_{n≥1} n |a_{-n}|²`.
    pub negative_energy: f64,
    pub degree_abel: f64,
    pub degree: i64,
    pub degree_source: DegreeSource,
    pub bound1: f64,
    pub bound2: f64,
    pub ratio1: Ratio,
    pub ratio2: Ratio,
    pub bound1_holds: bool,
    pub bound2_violated: bool,
    /// `|lhs - Σ n|a_n|² - 2Σ_{m≥1} m|a_{-m}|²|`, zero up to rounding.
    pub identity_residual: f64,
}

/// Measures both energy inequalities on one spectrum.
///
/// The degree is the Abel estimate when it converges; otherwise the geometric
/// oracle of `signal` if one is given. The constant-32 bound is recorded, not
/// enforced: antiholomorphic monomials violate it as printed.
pub fn q5_report(spectrum: &FourierSpectrum, signal: Option<&CircleSignal>) -> Result<Q5Report> {
    let lhs = h_half_coefficient(spectrum);
    let m = spectrum.bandwidth() as i64;
    let positive_energy: f64 = (1..=m).map(|n| n as f64 * spectrum.power(n)).sum();
    let negative_energy: f64 = (1..=m).map(|n| n as f64 * spectrum.power(-n)).sum();
    let signed: f64 = spectrum.iter().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
    let identity_residual = (lhs - signed - 2.0 * negative_energy).abs();

    let abel = degree_fourier_default(spectrum, SummationMethod::Abel)?;
    let (degree, degree_source) = match (abel.converged, signal) {
        (true, _) => (abel.rounded, DegreeSource::Abel),
        (false, Some(s)) => (winding_geometric(s)?, DegreeSource::Oracle),
        (false, None) => (abel.rounded, DegreeSource::AbelUnconverged),
    };
    let bound1 = degree.unsigned_abs() as f64 + 2.0 * positive_energy;
    let bound2 = BOUND2_CONSTANT * positive_energy;
    Ok(Q5Report {
        lhs,
        positive_energy,
        negative_energy,
        degree_abel: abel.estimate,
        degree,
        degree_source,
        bound1,
        bound2,
        ratio1: Ratio::of(lhs, bound1),
        ratio2: Ratio::of(lhs, bound2),
        bound1_holds: lhs <= bound1 + BOUND1_SLACK,
        bound2_violated: lhs > bound2,
        identity_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    /// `Σ_{|n|≤M} |n|^{2s} |a_n|²`.
    pub full: f64,
    /// `Σ_{1≤n≤M} n^{2s} |a_n|²`.
    pub positive: f64,
    pub ratio: Ratio,
}

pub fn s_sweep(spectrum: &FourierSpectrum, s_values: &[f64]) -> Result<Vec<SweepRow>> {
    s_values
        .iter()
        .map(|&s| {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::OutOfRange {
                    name: "s",
                    value: s,
                    expected: "positive",
                });
            }
            let weight = |n: i64| (n.unsigned_abs() as f64).powf(2.0 * s);
            let full: f64 = spectrum
                .iter()
                .filter(|(n, _)| *n != 0)
                .map(|(n, a)| weight(n) * a.norm_sqr())
                .sum();
            let positive: f64 = spectrum
                .iter()
                .filter(|(n, _)| *n > 0)
                .map(|(n, a)| weight(n) * a.norm_sqr())
                .sum();
            Ok(SweepRow {
                s,
                full,
                positive,
                ratio: Ratio::of(full, positive),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub family: String,
    pub samples: usize,
    pub bandwidth: usize,
    pub oracle: i64,
    pub method: SummationMethod,
    pub estimate: f64,
    pub converged: bool,
    pub error: f64,
}

pub const TABLE_COLUMNS: [&str; 8] = [
    "family", "samples", "bandwidth", "oracle", "method", "estimate", "converged", "error",
];

/// One row per `(grid entry, method)`, in grid order then method order.
///
/// Grid entries are evaluated in parallel; each uses bandwidth `N/4`.
pub fn convergence_table(grid: &[ZooSpec], methods: &[SummationMethod]) -> Result<Vec<TableRow>> {
    if grid.is_empty() {
        return Err(Error::Parse("convergence table needs a nonempty grid".into()));
    }
    let blocks = grid
        .par_iter()
        .map(|spec| {
            let signal = spec.generate()?;
            let oracle = winding_geometric(&signal)?;
            let bandwidth = signal.len() / 4;
            let spectrum = analyze(&signal, bandwidth)?;
            methods
                .iter()
                .map(|&method| {
                    let report = degree_fourier_default(&spectrum, method)?;
                    Ok(TableRow {
                        family: spec.to_string(),
                        samples: signal.len(),
                        bandwidth,
                        oracle,
                        method,
                        estimate: report.estimate,
                        converged: report.converged,
                        error: (report.estimate - oracle as f64).abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}
