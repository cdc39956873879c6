//! Smoothness gauges on the circle: the `H^{1/2}` coefficient sum, Gagliardo
//! double integrals for `W^{s,p}`, the mean-oscillation modulus behind VMO,
//! and the integrated-difference ratios defining `λ_α^p`.
//!
//! Distances on the circle are chordal, `|e^{ix} - e^{iy}| = 2|sin((x-y)/2)|`.
//! With that choice the `s = 1/2, p = 2` Gagliardo integral, normalized by
//! `1/(2π)²`, equals `Σ |n| |a_n|²` in the continuum.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{CircleSignal, FourierSpectrum};

/// `Σ_{|n| ≤ M} |n| |a_n|²`.
pub fn h_half_coefficient(spectrum: &FourierSpectrum) -> f64 {
    spectrum
        .iter()
        .map(|(n, a)| n.unsigned_abs() as f64 * a.norm_sqr())
        .sum()
}

/// Discretized `(2π)⁻² ∬ |f(x) - f(y)|^p / |e^{ix} - e^{iy}|^{1+sp} dx dy`.
///
/// Pairs on the diagonal are skipped. Rows are summed in parallel and then
/// combined in index order, so the value does not depend on the thread count.
pub fn gagliardo(signal: &CircleSignal, s: f64, p: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            expected: "inside (0, 1)",
        });
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            expected: "inside (1, ∞)",
        });
    }
    let f = signal.samples();
    let n = f.len();
    let exponent = 1.0 + s * p;
    // Kernel depends only on the lag.
    let kernel: Vec<f64> = (0..n)
        .map(|lag| {
            if lag == 0 {
                0.0
            } else {
                (2.0 * (PI * lag as f64 / n as f64).sin()).powf(-exponent)
            }
        })
        .collect();
    let square = p == 2.0;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = 0.0;
            for lag in 1..n {
                let d = f[(j + lag) % n] - f[j];
                let v = if square { d.norm_sqr() } else { d.norm().powf(p) };
                acc += v * kernel[lag];
            }
            acc
        })
        .collect();
    let total: f64 = rows.iter().sum();
    Ok(total / (n as f64 * n as f64))
}

/// Largest mean oscillation `|I|⁻² ∬_{I×I} |f(x) - f(y)|` over grid-aligned
/// arcs `I` of length at most `arc_length`.
///
/// An arc of `L` consecutive samples has length `L·2π/N`. All arcs are swept in
/// `O(N · L_max)` using the running column sums
/// `T(j, L) = Σ_{i=j}^{j+L-1} |f_i - f_{j+L}| = |f_j - f_{j+L}| + T(j+1, L-1)`.
pub fn vmo_modulus(signal: &CircleSignal, arc_length: f64) -> Result<f64> {
    if !(arc_length > 0.0) || arc_length > 2.0 * PI * (1.0 + 1e-12) {
        return Err(Error::OutOfRange {
            name: "arc_length",
            value: arc_length,
            expected: "inside (0, 2π]",
        });
    }
    let f = signal.samples();
    let n = f.len();
    let h = signal.grid_step();
    let max_points = ((arc_length / h + 1e-9).floor() as usize).min(n);
    if max_points < 2 {
        return Err(Error::ArcTooShort { arc_length });
    }
    let dist = |a: usize, b: usize| (f[a % n] - f[b % n]).norm();
    // sums[j] = S(j, L) = Σ_{a,b ∈ arc} |f_a - f_b|; column[j] = T(j, L).
    let mut sums = vec![0.0; n];
    let mut column = vec![0.0; n];
    let mut best: f64 = 0.0;
    for len in 1..max_points {
        let next: Vec<f64> = (0..n).map(|j| dist(j, j + len) + column[(j + 1) % n]).collect();
        column = next;
        let points = (len + 1) as f64;
        for j in 0..n {
            sums[j] += 2.0 * column[j];
            best = best.max(sums[j] / (points * points));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaPoint {
    pub shift: f64,
    pub ratio: f64,
}

/// For each shift `t`: `∫ |f(s+t) - f(s)|^p ds / t^α` as a Riemann sum.
///
/// Membership in `λ_α^p` corresponds to the ratio tending to zero. Shifts must
/// be positive multiples of the grid step.
pub fn lambda_test(signal: &CircleSignal, alpha: f64, p: f64, shifts: &[f64]) -> Result<Vec<LambdaPoint>> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            expected: "positive",
        });
    }
    if !alpha.is_finite() {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            expected: "finite",
        });
    }
    let f = signal.samples();
    let n = f.len();
    let h = signal.grid_step();
    shifts
        .iter()
        .map(|&t| {
            let steps = t / h;
            let lag = steps.round();
            if !(t > 0.0) || (steps - lag).abs() > 1e-9 * steps.max(1.0) {
                return Err(Error::NonGridShift { shift: t });
            }
            let lag = lag as usize;
            let integral: f64 = (0..n)
                .map(|j| (f[(j + lag) % n] - f[j]).norm().powf(p))
                .sum::<f64>()
                * h;
            Ok(LambdaPoint {
                shift: t,
                ratio: integral / t.powf(alpha),
            })
        })
        .collect()
}

/// Grid-aligned dyadic shifts `2π·2^{-i}` for `i` in `first..=last`.
pub fn dyadic_shifts(first: u32, last: u32) -> Vec<f64> {
    (first..=last).map(|i| 2.0 * PI / 2f64.powi(i as i32)).collect()
}
