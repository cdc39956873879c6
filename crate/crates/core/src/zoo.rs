//! Signal generators with known degree, plus the inline `name:key=val,...`
//! descriptors the CLI and lab tables use to name them.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::ANGULAR_STEP_MARGIN;
use crate::error::{Error, Result};
use crate::spectrum::{grid_angle, synthesize, CircleSignal, FourierSpectrum, GENERATOR_UNIMODULAR_TOL};

/// Largest admissible modulus of a Blaschke zero.
pub const BLASCHKE_ZERO_BOUND: f64 = 0.95;

/// Blaschke products are rational and exactly unimodular on the circle, so they
/// are held to a tighter check than the generic generator tolerance.
pub const BLASCHKE_UNIMODULAR_TOL: f64 = 1e-10;

/// `e^{idt}`.
pub fn monomial(d: i64, n: usize) -> Result<CircleSignal> {
    if 2 * d.unsigned_abs() as usize >= n {
        return Err(Error::Aliasing { frequency: d, samples: n });
    }
    let samples = (0..n)
        .map(|j| {
            let k = (d * j as i64).rem_euclid(n as i64) as usize;
            Complex64::cis(grid_angle(k, n))
        })
        .collect();
    CircleSignal::unimodular(samples, GENERATOR_UNIMODULAR_TOL)
}

/// Finite Blaschke product `Π_k (z - z_k)/(1 - conj(z_k) z)` on `|z| = 1`.
///
/// The argument of each factor advances at rate `(1 - |a|²)/|z - a|²`, at most
/// `(1+|a|)/(1-|a|)`; the sum of these bounds times the grid step must stay
/// below the oracle's angular-step limit.
pub fn blaschke(zeros: &[Complex64], n: usize) -> Result<CircleSignal> {
    for z in zeros {
        let modulus = z.norm();
        if !(modulus <= BLASCHKE_ZERO_BOUND) {
            return Err(Error::ZeroNearBoundary {
                zero: z.to_string(),
                modulus,
                bound: BLASCHKE_ZERO_BOUND,
            });
        }
    }
    let max_rate: f64 = zeros.iter().map(|z| (1.0 + z.norm()) / (1.0 - z.norm())).sum();
    let step = max_rate * TAU / n as f64;
    let bound = std::f64::consts::PI - ANGULAR_STEP_MARGIN;
    if step >= bound {
        return Err(Error::Undersampled { index: 0, step, bound });
    }
    let samples = (0..n)
        .map(|j| {
            let z = Complex64::cis(grid_angle(j, n));
            zeros
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * ((z - a) / (1.0 - a.conj() * z)))
        })
        .collect();
    CircleSignal::unimodular(samples, BLASCHKE_UNIMODULAR_TOL)
}

/// `e^{iφ(t)}` with `φ` linear between knots `(angle, phase)`.
///
/// Knot angles must be strictly increasing inside `[0, 2π)`. The last segment
/// wraps to the first knot shifted by `(2π, 2πd)`, so the total phase increment
/// is `2πd` and the result is continuous of bounded variation with degree `d`.
pub fn piecewise_linear_phase(knots: &[(f64, f64)], d: i64, n: usize) -> Result<CircleSignal> {
    if knots.is_empty() {
        return Err(Error::DiscontinuousPhase("no knots".into()));
    }
    if knots.iter().any(|&(a, v)| !(0.0..TAU).contains(&a) || !v.is_finite()) {
        return Err(Error::DiscontinuousPhase("knot angles must lie in [0, 2π)".into()));
    }
    if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::DiscontinuousPhase(
            "knot angles must be strictly increasing".into(),
        ));
    }
    let (a0, v0) = knots[0];
    let mut nodes = knots.to_vec();
    nodes.push((a0 + TAU, v0 + TAU * d as f64));
    let phase = |t: f64| {
        let t = if t < a0 { t + TAU } else { t };
        let i = nodes.partition_point(|&(a, _)| a <= t).clamp(1, nodes.len() - 1);
        let (ta, va) = nodes[i - 1];
        let (tb, vb) = nodes[i];
        va + (vb - va) * (t - ta) / (tb - ta)
    };
    CircleSignal::from_phase(n, phase)
}

/// Knots of `φ(t) = dt + amplitude·saw(teeth·t)`, a triangle wave with
/// `teeth` periods and peak `amplitude`.
pub fn sawtooth_knots(d: i64, teeth: usize, amplitude: f64) -> Vec<(f64, f64)> {
    let teeth = teeth.max(1);
    let quarter = TAU / (4 * teeth) as f64;
    (0..4 * teeth)
        .map(|i| {
            let t = i as f64 * quarter;
            let wave = match i % 4 {
                1 => amplitude,
                3 => -amplitude,
                _ => 0.0,
            };
            (t, d as f64 * t + wave)
        })
        .collect()
}

/// Parameters of a lacunary-phase signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassParams {
    pub alpha: f64,
    pub scales: u32,
    pub amplitude: f64,
    pub degree: i64,
    pub seed: u64,
}

/// `exp(i(dt + λ Σ_{j=1}^{J} 2^{-αj} cos(2^j t + φ_j)))`, seeded phases `φ_j`.
///
/// The lacunary cosine sum is Hölder of order `α` for `0 < α < 1`, and being
/// periodic it does not change the degree `d`.
pub fn weierstrass_phase(params: WeierstrassParams, n: usize) -> Result<CircleSignal> {
    let WeierstrassParams {
        alpha,
        scales,
        amplitude,
        degree,
        seed,
    } = params;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            expected: "positive",
        });
    }
    if scales >= 63 || (1usize << scales) >= n / 2 {
        return Err(Error::Aliasing {
            frequency: 1i64 << scales.min(62),
            samples: n,
        });
    }
    if 2 * degree.unsigned_abs() as usize >= n {
        return Err(Error::Aliasing { frequency: degree, samples: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64)> = (1..=scales)
        .map(|j| {
            let shift = rng.random_range(0.0..TAU);
            (2f64.powi(j as i32), amplitude * 2f64.powf(-alpha * j as f64), shift)
        })
        .collect();
    CircleSignal::from_phase(n, |t| {
        degree as f64 * t
            + terms
                .iter()
                .map(|&(freq, amp, shift)| amp * (freq * t + shift).cos())
                .sum::<f64>()
    })
}

/// `+1` on `[0, π)` and `-1` on `[π, 2π)`: bounded and unimodular, not continuous.
pub fn step(n: usize) -> Result<CircleSignal> {
    let samples = (0..n)
        .map(|j| Complex64::new(if 2 * j < n { 1.0 } else { -1.0 }, 0.0))
        .collect();
    CircleSignal::unimodular(samples, GENERATOR_UNIMODULAR_TOL)
}

/// Phase source for [`phase_scramble`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scramble {
    /// Keeps every phase; returns the input.
    Identity,
    Seeded(u64),
}

/// Keeps every `|a_n|` and replaces the phases by seeded uniform draws.
///
/// The output is generally not the spectrum of a unimodular function; measure
/// that with [`unimodular_deviation`].
pub fn phase_scramble(spectrum: &FourierSpectrum, scramble: Scramble) -> FourierSpectrum {
    match scramble {
        Scramble::Identity => spectrum.clone(),
        Scramble::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coefficients = spectrum
                .coefficients()
                .iter()
                .map(|a| Complex64::from_polar(a.norm(), rng.random_range(0.0..TAU)))
                .collect();
            FourierSpectrum::new(coefficients).expect("odd length preserved")
        }
    }
}

/// `max_j ||f_j| - 1|` of the synthesized spectrum on an `n`-point grid.
pub fn unimodular_deviation(spectrum: &FourierSpectrum, n: usize) -> Result<f64> {
    Ok(synthesize(spectrum, n)?.max_unimodular_deviation())
}

/// Inline generator descriptor, e.g. `monomial:d=3,n=4096` or
/// `blaschke:zeros=0.3,-0.4+0.2i;n=4096`.
///
/// Parameters are separated by `,` or `;`; a token without `=` continues the
/// previous value, which is how zero lists carry their own commas.
#[derive(Debug, Clone, PartialEq)]
pub enum ZooSpec {
    Monomial { d: i64, n: usize },
    Blaschke { zeros: Vec<Complex64>, n: usize },
    Sawtooth { d: i64, teeth: usize, amplitude: f64, n: usize },
    Weierstrass { params: WeierstrassParams, n: usize },
    Step { n: usize },
}

pub const DEFAULT_SAMPLES: usize = 4096;

impl ZooSpec {
    pub fn generate(&self) -> Result<CircleSignal> {
        match self {
            ZooSpec::Monomial { d, n } => monomial(*d, *n),
            ZooSpec::Blaschke { zeros, n } => blaschke(zeros, *n),
            ZooSpec::Sawtooth { d, teeth, amplitude, n } => {
                piecewise_linear_phase(&sawtooth_knots(*d, *teeth, *amplitude), *d, *n)
            }
            ZooSpec::Weierstrass { params, n } => weierstrass_phase(*params, *n),
            ZooSpec::Step { n } => step(*n),
        }
    }

    pub fn samples(&self) -> usize {
        match self {
            ZooSpec::Monomial { n, .. }
            | ZooSpec::Blaschke { n, .. }
            | ZooSpec::Sawtooth { n, .. }
            | ZooSpec::Weierstrass { n, .. }
            | ZooSpec::Step { n } => *n,
        }
    }

    /// Degree known by construction, if the family has one.
    pub fn declared_degree(&self) -> Option<i64> {
        match self {
            ZooSpec::Monomial { d, .. } | ZooSpec::Sawtooth { d, .. } => Some(*d),
            ZooSpec::Blaschke { zeros, .. } => Some(zeros.len() as i64),
            ZooSpec::Weierstrass { params, .. } => Some(params.degree),
            ZooSpec::Step { .. } => None,
        }
    }
}

fn split_params(body: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for token in body.split([',', ';']).map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), v.trim().to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(token);
                }
                None => return Err(Error::Parse(format!("expected key=value, got {token:?}"))),
            },
        }
    }
    Ok(out)
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let normalized = match s {
        "i" | "+i" => "1i".to_string(),
        "-i" => "-1i".to_string(),
        _ => s.replace("+i", "+1i").replace("-i", "-1i"),
    };
    normalized
        .parse::<Complex64>()
        .map_err(|_| Error::Parse(format!("cannot parse complex number {s:?}")))
}

pub fn parse_zeros(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect()
}

struct Params {
    name: String,
    entries: Vec<(String, String)>,
}

impl Params {
    fn take(&mut self, key: &str) -> Option<String> {
        let i = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(i).1)
    }

    fn parse<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T> {
        match self.take(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("{}: cannot parse {key}={v:?}", self.name))),
            None => default.ok_or_else(|| Error::Parse(format!("{}: missing {key}", self.name))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.entries.first() {
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown parameter {k:?}", self.name))),
            None => Ok(()),
        }
    }
}

impl FromStr for ZooSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut p = Params {
            name: name.to_string(),
            entries: split_params(body)?,
        };
        let n = p.parse("n", Some(DEFAULT_SAMPLES))?;
        let spec = match name {
            "monomial" => ZooSpec::Monomial { d: p.parse("d", None)?, n },
            "blaschke" => {
                let zeros = match p.take("zeros") {
                    Some(v) => parse_zeros(&v)?,
                    None => Vec::new(),
                };
                ZooSpec::Blaschke { zeros, n }
            }
            "sawtooth" => ZooSpec::Sawtooth {
                d: p.parse("d", None)?,
                teeth: p.parse("teeth", Some(3))?,
                amplitude: p.parse("amp", Some(1.0))?,
                n,
            },
            "weierstrass" => ZooSpec::Weierstrass {
                params: WeierstrassParams {
                    alpha: p.parse("alpha", None)?,
                    scales: p.parse("scales", Some(8))?,
                    amplitude: p.parse("lambda", Some(1.0))?,
                    degree: p.parse("d", Some(1))?,
                    seed: p.parse("seed", Some(0))?,
                },
                n,
            },
            "step" => ZooSpec::Step { n },
            _ => return Err(Error::Parse(format!("unknown family {name:?}"))),
        };
        p.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for ZooSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZooSpec::Monomial { d, n } => write!(f, "monomial:d={d},n={n}"),
            ZooSpec::Blaschke { zeros, n } => {
                let zs: Vec<String> = zeros.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                write!(f, "blaschke:zeros={};n={n}", zs.join(","))
            }
            ZooSpec::Sawtooth { d, teeth, amplitude, n } => {
                write!(f, "sawtooth:d={d},teeth={teeth},amp={amplitude},n={n}")
            }
            ZooSpec::Weierstrass { params, n } => write!(
                f,
                "weierstrass:alpha={},scales={},lambda={},d={},seed={},n={n}",
                params.alpha, params.scales, params.amplitude, params.degree, params.seed
            ),
            ZooSpec::Step { n } => write!(f, "step:n={n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::winding_geometric;
    use crate::seminorms::h_half_coefficient;
    use crate::spectrum::{analyze, energy_sequence};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_examples() {
        let s = monomial(0, 16).unwrap();
        assert!(s.samples().iter().all(|z| *z == c(1.0, 0.0)));
        assert_eq!(winding_geometric(&monomial(3, 64).unwrap()).unwrap(), 3);
        let spectrum = analyze(&monomial(-2, 64).unwrap(), 16).unwrap();
        assert!((h_half_coefficient(&spectrum) - 2.0).abs() < 1e-13);
        assert!((energy_sequence(&spectrum).get(2) + 2.0).abs() < 1e-13);
        assert!(matches!(monomial(8, 16), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn blaschke_examples() {
        let s = blaschke(&[], 32).unwrap();
        assert!(s.samples().iter().all(|z| *z == c(1.0, 0.0)));
        let zeros = [c(0.3, 0.0), c(-0.4, 0.2), c(0.1, -0.5)];
        assert_eq!(winding_geometric(&blaschke(&zeros, 256).unwrap()).unwrap(), 3);
        let spectrum = analyze(&blaschke(&[c(0.5, 0.0)], 512).unwrap(), 128).unwrap();
        assert!((spectrum.get(0) - c(-0.5, 0.0)).norm() < 1e-12);
        for k in 1..=20 {
            let expected = 0.75 * 0.5f64.powi(k - 1);
            assert!((spectrum.get(k as i64) - c(expected, 0.0)).norm() < 1e-12);
            assert!(spectrum.get(-(k as i64)).norm() < 1e-12);
        }
        assert!(matches!(
            blaschke(&[c(0.96, 0.0)], 4096),
            Err(Error::ZeroNearBoundary { .. })
        ));
    }

    #[test]
    fn blaschke_at_origin_is_monomial_one() {
        for n in [16, 256, 4096] {
            let b = blaschke(&[c(0.0, 0.0)], n).unwrap();
            assert_eq!(b.samples(), monomial(1, n).unwrap().samples());
            assert_eq!(b.unimodular_tol(), Some(BLASCHKE_UNIMODULAR_TOL));
        }
    }

    #[test]
    fn piecewise_linear_examples() {
        let s = piecewise_linear_phase(&[(0.0, 0.0)], 1, 64).unwrap();
        for (j, z) in s.samples().iter().enumerate() {
            assert!((z - Complex64::cis(grid_angle(j, 64))).norm() < 1e-14);
        }
        let saw = piecewise_linear_phase(&sawtooth_knots(3, 5, 1.5), 3, 1024).unwrap();
        assert_eq!(winding_geometric(&saw).unwrap(), 3);
        let triangle = piecewise_linear_phase(&sawtooth_knots(0, 1, 2.0), 0, 1024).unwrap();
        assert_eq!(winding_geometric(&triangle).unwrap(), 0);
        assert!(h_half_coefficient(&analyze(&triangle, 256).unwrap()) > 0.1);
    }

    #[test]
    fn piecewise_linear_rejects_bad_knots() {
        assert!(piecewise_linear_phase(&[], 1, 64).is_err());
        assert!(piecewise_linear_phase(&[(1.0, 0.0), (1.0, 2.0)], 1, 64).is_err());
        assert!(piecewise_linear_phase(&[(2.0, 0.0), (1.0, 2.0)], 1, 64).is_err());
        assert!(piecewise_linear_phase(&[(7.0, 0.0)], 1, 64).is_err());
    }

    #[test]
    fn weierstrass_examples() {
        let flat = WeierstrassParams { alpha: 0.6, scales: 6, amplitude: 0.0, degree: 2, seed: 1 };
        let s = weierstrass_phase(flat, 256).unwrap();
        for (a, b) in s.samples().iter().zip(monomial(2, 256).unwrap().samples()) {
            assert!((a - b).norm() < 1e-14);
        }
        let p = WeierstrassParams { alpha: 0.6, scales: 10, amplitude: 1.0, degree: 1, seed: 7 };
        assert_eq!(winding_geometric(&weierstrass_phase(p, 4096).unwrap()).unwrap(), 1);
        let rough = WeierstrassParams { alpha: 0.25, scales: 12, amplitude: 1.0, degree: 2, seed: 3 };
        assert_eq!(winding_geometric(&weierstrass_phase(rough, 1 << 14).unwrap()).unwrap(), 2);
        assert!(matches!(
            weierstrass_phase(WeierstrassParams { scales: 11, ..p }, 4096),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn weierstrass_is_seed_deterministic() {
        let p = WeierstrassParams { alpha: 0.5, scales: 8, amplitude: 1.0, degree: 1, seed: 11 };
        assert_eq!(weierstrass_phase(p, 1024).unwrap(), weierstrass_phase(p, 1024).unwrap());
        let q = WeierstrassParams { seed: 12, ..p };
        assert_ne!(weierstrass_phase(p, 1024).unwrap(), weierstrass_phase(q, 1024).unwrap());
    }

    #[test]
    fn scramble_examples() {
        let b = analyze(&blaschke(&[c(0.5, 0.0)], 512).unwrap(), 128).unwrap();
        assert_eq!(phase_scramble(&b, Scramble::Identity), b);
        let scrambled = phase_scramble(&b, Scramble::Seeded(5));
        for (x, y) in b.coefficients().iter().zip(scrambled.coefficients()) {
            assert!((x.norm() - y.norm()).abs() < 1e-15);
        }
        assert!(unimodular_deviation(&scrambled, 512).unwrap() > 1e-3);
        let one = FourierSpectrum::from_terms(4, &[(1, c(1.0, 0.0))]).unwrap();
        let s1 = phase_scramble(&one, Scramble::Seeded(9));
        assert!((s1.get(1).norm() - 1.0).abs() < 1e-15);
        assert!(unimodular_deviation(&s1, 16).unwrap() < 1e-14);
    }

    #[test]
    fn spec_strings() {
        let s: ZooSpec = "monomial:d=3,n=4096".parse().unwrap();
        assert_eq!(s, ZooSpec::Monomial { d: 3, n: 4096 });
        let s: ZooSpec = "blaschke:zeros=0.5;n=4096".parse().unwrap();
        assert_eq!(s, ZooSpec::Blaschke { zeros: vec![c(0.5, 0.0)], n: 4096 });
        let s: ZooSpec = "blaschke:zeros=0.3,-0.4+0.2i,0.1-0.5i;n=256".parse().unwrap();
        assert_eq!(
            s,
            ZooSpec::Blaschke { zeros: vec![c(0.3, 0.0), c(-0.4, 0.2), c(0.1, -0.5)], n: 256 }
        );
        let round: ZooSpec = s.to_string().parse().unwrap();
        assert_eq!(round, s);
        let w: ZooSpec = "weierstrass:alpha=0.6,scales=10,seed=7".parse().unwrap();
        assert_eq!(w.samples(), DEFAULT_SAMPLES);
        assert_eq!(w.to_string().parse::<ZooSpec>().unwrap(), w);
        assert!("monomial:n=64".parse::<ZooSpec>().is_err());
        assert!("monomial:d=1,q=2".parse::<ZooSpec>().is_err());
        assert!("spiral:d=1".parse::<ZooSpec>().is_err());
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.2i").unwrap(), c(0.0, 0.2));
    }
}
