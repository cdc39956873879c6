//! Summation processes for real sequences `u_1, u_2, ...` and the numerical
//! realization of their limits.
//!
//! Every evaluator treats a finite sequence as finitely supported: terms past
//! the end are zero. The limit `n → ∞`, `t ↓ 0` or `r ↑ 1` is approximated by
//! walking a monotone schedule and watching the last few values for a plateau.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectrum::FourierSpectrum;

pub const DEFAULT_PLATEAU_WINDOW: usize = 4;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
/// Number of halvings used by the default schedules.
pub const DEFAULT_DEPTH: u32 = 40;

/// A summation process: partial sums `(C)`, Cesàro `(C,k)`, Riemann `(R,k)`
/// or Abel–Poisson `(A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SummationMethod {
    Partial,
    Cesaro { order: f64 },
    Riemann { order: u32 },
    Abel,
}

impl SummationMethod {
    pub fn cesaro(order: f64) -> Result<Self> {
        let method = SummationMethod::Cesaro { order };
        method.validate()?;
        Ok(method)
    }

    pub fn riemann(order: u32) -> Result<Self> {
        let method = SummationMethod::Riemann { order };
        method.validate()?;
        Ok(method)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SummationMethod::Cesaro { order } if !(order > -1.0) || !order.is_finite() => Err(
                Error::InvalidMethod(format!("Cesaro order must exceed -1, got {order}")),
            ),
            SummationMethod::Riemann { order } if order < 1 => Err(Error::InvalidMethod(
                format!("Riemann order must be a positive integer, got {order}"),
            )),
            _ => Ok(()),
        }
    }

    /// Value of the method's transform of `u` at one schedule parameter.
    ///
    /// The parameter is the cutoff `n` for partial and Cesàro sums, `t` for
    /// Riemann and `r` for Abel.
    pub fn evaluate(&self, u: &[f64], parameter: f64) -> Result<f64> {
        match *self {
            SummationMethod::Partial => {
                let n = cutoff_from(parameter)?;
                sum_partial(u, n.min(u.len()))
            }
            SummationMethod::Cesaro { order } => sum_cesaro(u, order, cutoff_from(parameter)?),
            SummationMethod::Riemann { order } => sum_riemann(u, order, parameter),
            SummationMethod::Abel => sum_abel(u, parameter),
        }
    }

    /// Default geometric schedule for this method on a sequence of `len` terms.
    pub fn default_protocol(&self, len: usize) -> LimitProtocol {
        let schedule = match self {
            SummationMethod::Partial => partial_schedule(len),
            SummationMethod::Cesaro { .. } => (0..=DEFAULT_DEPTH).map(|i| 2f64.powi(i as i32)).collect(),
            SummationMethod::Riemann { .. } => (0..=DEFAULT_DEPTH).map(|i| 2f64.powi(-(i as i32))).collect(),
            SummationMethod::Abel => (1..=DEFAULT_DEPTH).map(|i| 1.0 - 2f64.powi(-(i as i32))).collect(),
        };
        LimitProtocol {
            schedule,
            plateau_window: DEFAULT_PLATEAU_WINDOW,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

fn cutoff_from(parameter: f64) -> Result<usize> {
    if parameter < 0.0 || parameter.fract() != 0.0 || !parameter.is_finite() {
        return Err(Error::OutOfRange {
            name: "n",
            value: parameter,
            expected: "a nonnegative integer cutoff",
        });
    }
    Ok(parameter as usize)
}

// Doublings up to the sequence length, ending exactly at the length; extended
// past the end only when the sequence is too short to fill a plateau window.
fn partial_schedule(len: usize) -> Vec<f64> {
    let mut schedule: Vec<f64> = Vec::new();
    let mut n = 1usize;
    while n < len {
        schedule.push(n as f64);
        n *= 2;
    }
    schedule.push(len.max(1) as f64);
    let mut last = len.max(1);
    while schedule.len() < DEFAULT_PLATEAU_WINDOW + 2 {
        last *= 2;
        schedule.push(last as f64);
    }
    schedule
}

impl fmt::Display for SummationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummationMethod::Partial => write!(f, "partial"),
            SummationMethod::Cesaro { order } => write!(f, "cesaro:k={order}"),
            SummationMethod::Riemann { order } => write!(f, "riemann:k={order}"),
            SummationMethod::Abel => write!(f, "abel"),
        }
    }
}

impl FromStr for SummationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((name, args)) => (name.trim(), Some(args.trim())),
            None => (s, None),
        };
        let bad = |v: &str| Error::InvalidMethod(format!("cannot parse order {v:?}"));
        match name {
            "partial" if args.is_none() => Ok(SummationMethod::Partial),
            "abel" if args.is_none() => Ok(SummationMethod::Abel),
            "cesaro" => {
                let v = order_arg(name, args)?;
                SummationMethod::cesaro(v.parse().map_err(|_| bad(v))?)
            }
            "riemann" => {
                let v = order_arg(name, args)?;
                SummationMethod::riemann(v.parse().map_err(|_| bad(v))?)
            }
            _ => Err(Error::InvalidMethod(format!("unknown method {s:?}"))),
        }
    }
}

fn order_arg<'a>(name: &str, args: Option<&'a str>) -> Result<&'a str> {
    let args = args.ok_or_else(|| Error::InvalidMethod(format!("{name} needs k=<order>")))?;
    match args.split_once('=') {
        Some(("k", v)) => Ok(v.trim()),
        _ => Err(Error::InvalidMethod(format!("expected k=<order>, got {args:?}"))),
    }
}

impl Serialize for SummationMethod {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SummationMethod {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Schedule plus plateau rule used to read off a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProtocol {
    schedule: Vec<f64>,
    plateau_window: usize,
    tolerance: f64,
}

impl LimitProtocol {
    pub fn new(schedule: Vec<f64>, plateau_window: usize, tolerance: f64) -> Result<Self> {
        if plateau_window < 3 {
            return Err(Error::InvalidProtocol(format!(
                "plateau window must be at least 3, got {plateau_window}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidProtocol(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        if schedule.len() < plateau_window + 2 {
            return Err(Error::InvalidProtocol(format!(
                "schedule has {} points, needs at least {}",
                schedule.len(),
                plateau_window + 2
            )));
        }
        if schedule.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidProtocol("schedule contains non-finite values".into()));
        }
        let increasing = schedule.windows(2).all(|w| w[0] < w[1]);
        let decreasing = schedule.windows(2).all(|w| w[0] > w[1]);
        if !increasing && !decreasing {
            return Err(Error::InvalidProtocol("schedule is not strictly monotone".into()));
        }
        Ok(Self {
            schedule,
            plateau_window,
            tolerance,
        })
    }

    /// Same schedule with a different plateau rule.
    pub fn with_plateau(&self, plateau_window: usize, tolerance: f64) -> Result<Self> {
        Self::new(self.schedule.clone(), plateau_window, tolerance)
    }

    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }

    pub fn plateau_window(&self) -> usize {
        self.plateau_window
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// Result of walking a limit protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitOutcome {
    pub estimate: f64,
    pub converged: bool,
    pub trace: Vec<(f64, f64)>,
}

/// Evaluates along the schedule; converged when the last `plateau_window`
/// values lie within `tolerance` of each other.
pub fn extract_limit<F>(evaluator: F, protocol: &LimitProtocol) -> Result<LimitOutcome>
where
    F: Fn(f64) -> Result<f64>,
{
    let trace = protocol
        .schedule
        .iter()
        .map(|&p| {
            evaluator(p)
                .map(|v| (p, v))
                .map_err(|e| Error::Evaluation {
                    parameter: p,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &trace[trace.len() - protocol.plateau_window..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
    let converged = tail.iter().all(|(_, v)| v.is_finite()) && hi - lo <= protocol.tolerance;
    Ok(LimitOutcome {
        estimate: trace[trace.len() - 1].1,
        converged,
        trace,
    })
}

/// `Σ_{m=1}^{n} u_m`, accumulated left to right.
pub fn sum_partial(u: &[f64], n: usize) -> Result<f64> {
    if n > u.len() {
        return Err(Error::CutoffExceedsSequence {
            cutoff: n,
            len: u.len(),
        });
    }
    Ok(u[..n].iter().fold(0.0, |acc, x| acc + x))
}

/// Cesàro mean of order `k`: `binom(n+k,k)⁻¹ Σ_{m=1}^{n} binom(n+k-m,k) u_m`.
///
/// Terms beyond the end of `u` are zero, so `n` may exceed the length. The
/// weight quotient is built from `w_m / w_{m-1} = (n-m+1)/(n+k-m+1)`, which
/// keeps `(C,0)` bit-identical to the partial sum.
pub fn sum_cesaro(u: &[f64], k: f64, n: usize) -> Result<f64> {
    SummationMethod::Cesaro { order: k }.validate()?;
    let mut weight = 1.0;
    let mut acc = 0.0;
    for (i, &x) in u.iter().take(n).enumerate() {
        let m = (i + 1) as f64;
        let remaining = n as f64 - m + 1.0;
        weight *= remaining / (remaining + k);
        acc += weight * x;
    }
    Ok(acc)
}

/// Riemann mean of order `k`: `Σ u_m (sin(mt)/(mt))^k`.
pub fn sum_riemann(u: &[f64], k: u32, t: f64) -> Result<f64> {
    SummationMethod::Riemann { order: k }.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            expected: "positive",
        });
    }
    Ok(u.iter().enumerate().fold(0.0, |acc, (i, &x)| {
        let mt = (i + 1) as f64 * t;
        acc + x * sinc(mt).powi(k as i32)
    }))
}

/// `Σ |u_m| m^{-k}`, the quantity that must be finite for `(R,k)`.
pub fn riemann_weighted_mass(u: &[f64], k: u32) -> f64 {
    u.iter()
        .enumerate()
        .map(|(i, x)| x.abs() / ((i + 1) as f64).powi(k as i32))
        .sum()
}

/// Abel–Poisson mean `Σ r^m u_m`.
pub fn sum_abel(u: &[f64], r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: "inside (0, 1)",
        });
    }
    let mut rm = 1.0;
    let mut acc = 0.0;
    for &x in u {
        rm *= r;
        acc += rm * x;
    }
    Ok(acc)
}

/// `Σ_{n=-M}^{M} |a_n|² sin(nt)/t`, the `(R,1)` mean written on the spectrum.
pub fn riemann_sin_form(spectrum: &FourierSpectrum, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            expected: "positive",
        });
    }
    Ok(spectrum
        .iter()
        .fold(0.0, |acc, (n, a)| acc + a.norm_sqr() * (n as f64 * t).sin() / t))
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}
