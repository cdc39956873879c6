//! Sampled circle-valued functions, their discrete Fourier coefficients and
//! the energy sequence whose generalized sum is the degree.
//!
//! A signal holds `N` samples `f_j = f(e^{i t_j})` on the uniform grid
//! `t_j = 2πj/N`. Coefficients are the uniform Riemann sum of the defining
//! integral, `a_n = (1/N) Σ_j f_j e^{-i n t_j}`, which is one forward DFT.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Tolerance used when a generator asserts unimodularity of its output.
pub const GENERATOR_UNIMODULAR_TOL: f64 = 1e-8;

/// Grid angle `2πj/N`.
///
/// Every generator goes through this so that identical angles are produced
/// bit-for-bit regardless of which family built the signal.
#[inline]
pub fn grid_angle(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

fn check_sample_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySignal);
    }
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::BadSampleCount(n));
    }
    Ok(())
}

/// Uniform samples of a function on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSignal {
    samples: Vec<Complex64>,
    unimodular_tol: Option<f64>,
}

impl CircleSignal {
    /// Wraps raw samples without any unimodularity claim.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_sample_count(samples.len())?;
        Ok(Self {
            samples,
            unimodular_tol: None,
        })
    }

    /// Wraps samples declared unimodular within `tol`; rejects them otherwise.
    pub fn unimodular(samples: Vec<Complex64>, tol: f64) -> Result<Self> {
        if !(tol >= 0.0) {
            return Err(Error::OutOfRange {
                name: "unimodular_tol",
                value: tol,
                expected: "nonnegative",
            });
        }
        let mut signal = Self::new(samples)?;
        signal.check_unimodular(tol)?;
        signal.unimodular_tol = Some(tol);
        Ok(signal)
    }

    /// Samples `f(t_j)` for a function of the angle.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_sample_count(n)?;
        Self::new((0..n).map(|j| f(grid_angle(j, n))).collect())
    }

    /// Samples `e^{iφ(t_j)}` for a real phase function, declared unimodular.
    pub fn from_phase(n: usize, phase: impl Fn(f64) -> f64) -> Result<Self> {
        check_sample_count(n)?;
        let samples = (0..n)
            .map(|j| Complex64::cis(phase(grid_angle(j, n))))
            .collect();
        Self::unimodular(samples, GENERATOR_UNIMODULAR_TOL)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Declared tolerance, if the signal was constructed as unimodular.
    pub fn unimodular_tol(&self) -> Option<f64> {
        self.unimodular_tol
    }

    pub fn grid_step(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn max_unimodular_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_unimodular(&self, tol: f64) -> Result<()> {
        let deviation = self.max_unimodular_deviation();
        if deviation > tol || deviation.is_nan() {
            return Err(Error::NotUnimodular {
                deviation,
                tolerance: tol,
            });
        }
        Ok(())
    }

    /// Grid translation `g(t) = f(t + k·2π/N)`.
    pub fn shifted(&self, k: usize) -> Self {
        let n = self.len();
        let samples = (0..n).map(|j| self.samples[(j + k) % n]).collect();
        Self {
            samples,
            unimodular_tol: self.unimodular_tol,
        }
    }

    /// Rotation `e^{iθ} f`.
    pub fn rotated(&self, theta: f64) -> Self {
        let w = Complex64::cis(theta);
        Self {
            samples: self.samples.iter().map(|z| w * z).collect(),
            unimodular_tol: self.unimodular_tol.map(|t| t + 4.0 * f64::EPSILON),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|z| z.conj()).collect(),
            unimodular_tol: self.unimodular_tol,
        }
    }

    /// Pointwise product on a common grid.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Parse(format!(
                "cannot multiply signals of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        let unimodular_tol = match (self.unimodular_tol, other.unimodular_tol) {
            (Some(a), Some(b)) => Some(a + b + a * b + 4.0 * f64::EPSILON),
            _ => None,
        };
        Ok(Self {
            samples,
            unimodular_tol,
        })
    }
}

/// Coefficients `a_n` for `-M ≤ n ≤ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    bandwidth: usize,
    coefficients: Vec<Complex64>,
}

impl FourierSpectrum {
    /// Builds a spectrum from the dense coefficient vector `[a_{-M}, ..., a_M]`.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() % 2 != 1 {
            return Err(Error::Parse(format!(
                "spectrum needs 2M+1 coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            bandwidth: coefficients.len() / 2,
            coefficients,
        })
    }

    /// Sparse constructor; frequencies not listed are zero.
    pub fn from_terms(bandwidth: usize, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * bandwidth + 1];
        for &(n, a) in terms {
            if n.unsigned_abs() as usize > bandwidth {
                return Err(Error::Parse(format!(
                    "frequency {n} outside bandwidth {bandwidth}"
                )));
            }
            coefficients[(n + bandwidth as i64) as usize] += a;
        }
        Ok(Self {
            bandwidth,
            coefficients,
        })
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// `a_n`, zero outside the band.
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.bandwidth {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients[(n + self.bandwidth as i64) as usize]
    }

    /// `|a_n|²`, zero outside the band.
    pub fn power(&self, n: i64) -> f64 {
        self.get(n).norm_sqr()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Iterates `(n, a_n)` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.bandwidth as i64;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &a)| (i as i64 - m, a))
    }

    /// `Σ |a_n|²` over the band.
    pub fn total_power(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Spectrum of the conjugate function: `a_n ↦ conj(a_{-n})`.
    pub fn conj(&self) -> Self {
        let coefficients = self.coefficients.iter().rev().map(|a| a.conj()).collect();
        Self {
            bandwidth: self.bandwidth,
            coefficients,
        }
    }
}

/// `u_m = m(|a_m|² - |a_{-m}|²)` for `m = 1..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySequence {
    u: Vec<f64>,
}

impl EnergySequence {
    pub fn from_values(u: Vec<f64>) -> Self {
        Self { u }
    }

    /// Terms `u_1, u_2, ...` (slice index `m - 1`).
    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u_m`, 1-based.
    pub fn get(&self, m: usize) -> f64 {
        if m == 0 || m > self.u.len() {
            0.0
        } else {
            self.u[m - 1]
        }
    }
}

/// Forward transform: `a_n = (1/N) Σ_j f_j e^{-i n t_j}` for `|n| ≤ M`.
pub fn analyze(signal: &CircleSignal, bandwidth: usize) -> Result<FourierSpectrum> {
    let n = signal.len();
    if n == 0 {
        return Err(Error::EmptySignal);
    }
    if bandwidth > n / 2 {
        return Err(Error::BandwidthExceedsNyquist {
            bandwidth,
            limit: n / 2,
        });
    }
    let mut buffer = signal.samples().to_vec();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buffer);
    let scale = 1.0 / n as f64;
    let m = bandwidth as i64;
    let coefficients = (-m..=m)
        .map(|k| buffer[k.rem_euclid(n as i64) as usize] * scale)
        .collect();
    Ok(FourierSpectrum {
        bandwidth,
        coefficients,
    })
}

/// Inverse transform: `f_j = Σ_n a_n e^{i n t_j}` on an `N`-point grid.
///
/// The result carries no unimodularity claim; callers that know the spectrum
/// came from a unimodular function can check and declare it.
pub fn synthesize(spectrum: &FourierSpectrum, n: usize) -> Result<CircleSignal> {
    check_sample_count(n)?;
    let required = 2 * spectrum.bandwidth() + 2;
    if n < required {
        return Err(Error::UndersampledSynthesis {
            samples: n,
            bandwidth: spectrum.bandwidth(),
            required,
        });
    }
    let mut buffer = vec![Complex64::new(0.0, 0.0); n];
    for (k, a) in spectrum.iter() {
        buffer[k.rem_euclid(n as i64) as usize] = a;
    }
    FftPlanner::<f64>::new()
        .plan_fft_inverse(n)
        .process(&mut buffer);
    CircleSignal::new(buffer)
}

pub fn energy_sequence(spectrum: &FourierSpectrum) -> EnergySequence {
    let u = (1..=spectrum.bandwidth() as i64)
        .map(|m| m as f64 * (spectrum.power(m) - spectrum.power(-m)))
        .collect();
    EnergySequence { u }
}

/// `|(1/N) Σ |f_j|² - Σ_n |a_n|²|`, the power lost to truncation at bandwidth `M`.
pub fn parseval_defect(signal: &CircleSignal, spectrum: &FourierSpectrum) -> f64 {
    let mean_power =
        signal.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / signal.len() as f64;
    (mean_power - spectrum.total_power()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_has_single_coefficient() {
        let signal = CircleSignal::from_phase(256, |t| 3.0 * t).unwrap();
        let spectrum = analyze(&signal, 8).unwrap();
        for (n, a) in spectrum.iter() {
            let expected = if n == 3 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((a - expected).norm() < 1e-14, "a_{n} = {a}");
        }
    }

    #[test]
    fn constant_has_only_mean() {
        let signal = CircleSignal::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        let spectrum = analyze(&signal, 16).unwrap();
        assert!((spectrum.get(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(spectrum.iter().filter(|(n, _)| *n != 0).all(|(_, a)| a.norm() < 1e-15));
    }

    #[test]
    fn rejects_bad_grids_and_bandwidths() {
        assert!(matches!(
            CircleSignal::new(vec![]),
            Err(Error::EmptySignal)
        ));
        assert!(matches!(
            CircleSignal::new(vec![c(1.0, 0.0); 12]),
            Err(Error::BadSampleCount(12))
        ));
        let signal = CircleSignal::from_phase(16, |t| t).unwrap();
        assert!(matches!(
            analyze(&signal, 9),
            Err(Error::BandwidthExceedsNyquist { .. })
        ));
        assert!(analyze(&signal, 8).is_ok());
    }

    #[test]
    fn unimodular_declaration_is_checked() {
        let samples = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.1)];
        assert!(matches!(
            CircleSignal::unimodular(samples.clone(), 1e-8),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(CircleSignal::unimodular(samples, 0.2).is_ok());
    }

    #[test]
    fn synthesize_small_spectra() {
        let one = FourierSpectrum::from_terms(2, &[(1, c(1.0, 0.0))]).unwrap();
        let signal = synthesize(&one, 16).unwrap();
        for (j, z) in signal.samples().iter().enumerate() {
            assert!((z - Complex64::cis(grid_angle(j, 16))).norm() < 1e-15);
        }
        let constant = FourierSpectrum::from_terms(0, &[(0, c(1.0, 0.0))]).unwrap();
        let signal = synthesize(&constant, 4).unwrap();
        assert!(signal.samples().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn synthesize_requires_room_for_the_band() {
        let spectrum = FourierSpectrum::from_terms(7, &[(7, c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            synthesize(&spectrum, 8),
            Err(Error::UndersampledSynthesis { required: 16, .. })
        ));
        assert!(synthesize(&spectrum, 16).is_ok());
    }

    #[test]
    fn energy_of_monomials() {
        let plus = FourierSpectrum::from_terms(5, &[(3, c(1.0, 0.0))]).unwrap();
        let u = energy_sequence(&plus);
        assert_eq!(u.len(), 5);
        assert_eq!(u.values(), &[0.0, 0.0, 3.0, 0.0, 0.0]);
        let minus = FourierSpectrum::from_terms(5, &[(-2, c(0.0, 1.0))]).unwrap();
        assert_eq!(energy_sequence(&minus).values(), &[0.0, -2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn parseval_defect_vanishes_at_full_band() {
        let signal = CircleSignal::from_phase(64, |t| t).unwrap();
        let spectrum = analyze(&signal, 32).unwrap();
        assert!(parseval_defect(&signal, &spectrum) < 1e-14);
        let constant = CircleSignal::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        let spectrum = analyze(&constant, 16).unwrap();
        assert!(parseval_defect(&constant, &spectrum) < 1e-15);
    }

    #[test]
    fn conj_spectrum_matches_conj_signal() {
        let signal = CircleSignal::from_phase(64, |t| 2.0 * t + (3.0 * t).sin()).unwrap();
        let direct = analyze(&signal.conj(), 16).unwrap();
        let mapped = analyze(&signal, 16).unwrap().conj();
        for (a, b) in direct.coefficients().iter().zip(mapped.coefficients()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
