//! Command-line front end. Exit status: 0 success, 1 I/O failure, 2 usage or
//! malformed input, 3 numerical precondition failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::degree::{degree_fourier, oracle_compare, winding_geometric, ComparisonRow, DegreeReport};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, read_sequence_csv, read_signal_csv, write_signal_csv, write_spectrum_csv, write_trace_csv};
use crate::lab::{convergence_table, q5_report, s_sweep, Ratio, TABLE_COLUMNS};
use crate::seminorms::{dyadic_shifts, gagliardo, h_half_coefficient, lambda_test, vmo_modulus};
use crate::spectrum::{analyze, CircleSignal};
use crate::summation::{extract_limit, riemann_weighted_mass, LimitProtocol, SummationMethod};
use crate::zoo::{self, parse_zeros, WeierstrassParams, ZooSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "winding", version, about = "Winding numbers from Fourier coefficients")]
struct Cli {
    /// Worker threads for parallel kernels (default: all cores).
    #[arg(long, global = true, env = "WINDING_THREADS")]
    threads: Option<usize>,

    /// Write output to a file instead of stdout.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Source {
    /// Signal CSV with header j,t,re,im.
    signal: Option<PathBuf>,

    /// Inline generator, e.g. "monomial:d=3,n=4096" or "blaschke:zeros=0.5;n=4096".
    #[arg(long, conflicts_with = "signal")]
    zoo: Option<String>,

    /// Declare a loaded signal unimodular within this tolerance.
    #[arg(long)]
    unimodular_tol: Option<f64>,
}

impl Source {
    fn load(&self) -> Result<CircleSignal> {
        match (&self.signal, &self.zoo) {
            (Some(path), None) => read_signal_csv(BufReader::new(File::open(path)?), self.unimodular_tol),
            (None, Some(spec)) => spec.parse::<ZooSpec>()?.generate(),
            _ => Err(Error::Parse("give a signal file or --zoo <spec>".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral degree estimates plus comparison with the geometric winding number.
    ///
    /// Emits JSON {oracle, bandwidth, reports: [{estimate, rounded, method,
    /// converged, residual, trace}], comparison: [{method, estimate, converged, error}]}.
    Degree {
        #[command(flatten)]
        source: Source,
        /// Summation method: partial, cesaro:k=<order>, riemann:k=<order>, abel. Repeatable.
        #[arg(long = "method")]
        methods: Vec<String>,
        /// Plateau rule overriding the default, e.g. "window=4,tol=1e-4".
        #[arg(long)]
        protocol: Option<String>,
        /// Spectral bandwidth M (default N/4).
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// Signal to spectrum CSV (n,re,im).
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// Smoothness gauges. JSON {gauge, parameters, value}; lambda emits CSV shift,ratio.
    Seminorm {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        gauge: Gauge,
        /// Gagliardo order s in (0,1).
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Exponent p (Gagliardo and lambda).
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Maximal arc length for the VMO modulus.
        #[arg(long, default_value_t = std::f64::consts::PI / 16.0)]
        arc_length: f64,
        /// Order alpha for the lambda ratio.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Dyadic shifts 2π·2^-i for i in FIRST:LAST (lambda).
        #[arg(long, default_value = "3:10")]
        shifts: String,
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// Sums a sequence CSV (m,u). JSON {method, length, estimate, converged,
    /// riemann_mass, trace}; with --trace-csv emits param,value instead.
    Sum {
        #[arg(long)]
        method: String,
        #[arg(long)]
        sequence: PathBuf,
        /// Plateau rule, e.g. "window=4,tol=1e-4".
        #[arg(long)]
        protocol: Option<String>,
        #[arg(long)]
        trace_csv: bool,
    },
    /// Generators; each emits a signal CSV (j,t,re,im).
    #[command(subcommand)]
    Zoo(ZooCommand),
    /// Experiment drivers.
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Gauge {
    Hhalf,
    Gagliardo,
    Vmo,
    Lambda,
}

#[derive(Debug, Subcommand)]
enum ZooCommand {
    Monomial {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = zoo::DEFAULT_SAMPLES)]
        n: usize,
    },
    Blaschke {
        /// Comma-separated zeros, e.g. "0.3,-0.4+0.2i".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        zeros: String,
        #[arg(long, default_value_t = zoo::DEFAULT_SAMPLES)]
        n: usize,
    },
    Sawtooth {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        teeth: usize,
        #[arg(long, default_value_t = 1.0)]
        amp: f64,
        #[arg(long, default_value_t = zoo::DEFAULT_SAMPLES)]
        n: usize,
    },
    Weierstrass {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        scales: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        d: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = zoo::DEFAULT_SAMPLES)]
        n: usize,
    },
    Step {
        #[arg(long, default_value_t = zoo::DEFAULT_SAMPLES)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum LabCommand {
    /// Energy inequalities. JSON {lhs, positive_energy, negative_energy,
    /// degree_abel, degree, degree_source, bound1, bound2, ratio1, ratio2,
    /// bound1_holds, bound2_violated, identity_residual}.
    Q5 {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// |n|^{2s} sweep. CSV columns: s,full,positive,ratio.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Comma-separated exponents s.
        #[arg(long, default_value = "0.25,0.5,0.75,1")]
        s: String,
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// Method-vs-family table. CSV columns:
    /// family,samples,bandwidth,oracle,method,estimate,converged,error.
    Table {
        /// Generator spec; repeat for each grid point.
        #[arg(long = "zoo", required = true)]
        grid: Vec<String>,
        #[arg(long = "method")]
        methods: Vec<String>,
    },
}

#[derive(Serialize)]
struct DegreeOutput {
    oracle: i64,
    bandwidth: usize,
    reports: Vec<DegreeReport>,
    comparison: Vec<ComparisonRow>,
}

#[derive(Serialize)]
struct SeminormOutput {
    gauge: &'static str,
    parameters: BTreeMap<&'static str, f64>,
    value: f64,
}

#[derive(Serialize)]
struct SumOutput {
    method: SummationMethod,
    length: usize,
    estimate: f64,
    converged: bool,
    riemann_mass: Option<f64>,
    trace: Vec<(f64, f64)>,
}

pub fn default_methods() -> Vec<SummationMethod> {
    vec![
        SummationMethod::Partial,
        SummationMethod::Cesaro { order: 1.0 },
        SummationMethod::Riemann { order: 1 },
        SummationMethod::Riemann { order: 2 },
        SummationMethod::Abel,
    ]
}

fn parse_methods(raw: &[String]) -> Result<Vec<SummationMethod>> {
    if raw.is_empty() {
        return Ok(default_methods());
    }
    raw.iter().map(|s| s.parse()).collect()
}

/// Applies a `window=..,tol=..` override to a method's default protocol.
fn protocol_for(method: SummationMethod, len: usize, raw: Option<&str>) -> Result<LimitProtocol> {
    let base = method.default_protocol(len);
    let Some(raw) = raw else { return Ok(base) };
    let mut window = base.plateau_window();
    let mut tol = base.tolerance();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::InvalidProtocol(format!("cannot parse {item:?}"));
        match item.split_once('=') {
            Some(("window", v)) => window = v.trim().parse().map_err(|_| bad())?,
            Some(("tol", v)) => tol = v.trim().parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        }
    }
    base.with_plateau(window, tol)
}

fn bandwidth_or_default(signal: &CircleSignal, bandwidth: Option<usize>) -> usize {
    bandwidth.unwrap_or(signal.len() / 4)
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Degree {
            source,
            methods,
            protocol,
            bandwidth,
        } => {
            let signal = source.load()?;
            let methods = parse_methods(&methods)?;
            let oracle = winding_geometric(&signal)?;
            let bandwidth = bandwidth_or_default(&signal, bandwidth);
            let spectrum = analyze(&signal, bandwidth)?;
            let reports = methods
                .iter()
                .map(|&m| degree_fourier(&spectrum, m, &protocol_for(m, bandwidth, protocol.as_deref())?))
                .collect::<Result<Vec<_>>>()?;
            let comparison = oracle_compare(&signal, &methods, Some(bandwidth))?.rows;
            write_json(
                &DegreeOutput {
                    oracle,
                    bandwidth,
                    reports,
                    comparison,
                },
                out,
            )
        }
        Command::Spectrum { source, bandwidth } => {
            let signal = source.load()?;
            let spectrum = analyze(&signal, bandwidth_or_default(&signal, bandwidth))?;
            write_spectrum_csv(&spectrum, out)
        }
        Command::Seminorm {
            source,
            gauge,
            s,
            p,
            arc_length,
            alpha,
            shifts,
            bandwidth,
        } => {
            let signal = source.load()?;
            let samples = signal.len() as f64;
            let (name, parameters, value) = match gauge {
                Gauge::Hhalf => {
                    let m = bandwidth_or_default(&signal, bandwidth);
                    let spectrum = analyze(&signal, m)?;
                    ("hhalf", vec![("bandwidth", m as f64)], h_half_coefficient(&spectrum))
                }
                Gauge::Gagliardo => ("gagliardo", vec![("s", s), ("p", p)], gagliardo(&signal, s, p)?),
                Gauge::Vmo => ("vmo", vec![("arc_length", arc_length)], vmo_modulus(&signal, arc_length)?),
                Gauge::Lambda => {
                    let (first, last) = shifts
                        .split_once(':')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                        .ok_or_else(|| Error::Parse(format!("--shifts expects FIRST:LAST, got {shifts:?}")))?;
                    let trace = lambda_test(&signal, alpha, p, &dyadic_shifts(first, last))?;
                    let pairs: Vec<(f64, f64)> = trace.iter().map(|pt| (pt.shift, pt.ratio)).collect();
                    let mut wtr = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(out);
                    wtr.write_record(["shift", "ratio"])?;
                    for (t, r) in pairs {
                        wtr.write_record([fmt_f64(t), fmt_f64(r)])?;
                    }
                    wtr.flush()?;
                    return Ok(());
                }
            };
            let mut parameters: BTreeMap<&'static str, f64> = parameters.into_iter().collect();
            parameters.insert("samples", samples);
            write_json(
                &SeminormOutput {
                    gauge: name,
                    parameters,
                    value,
                },
                out,
            )
        }
        Command::Sum {
            method,
            sequence,
            protocol,
            trace_csv,
        } => {
            let method: SummationMethod = method.parse()?;
            let u = read_sequence_csv(BufReader::new(File::open(sequence)?))?;
            let protocol = protocol_for(method, u.len(), protocol.as_deref())?;
            let outcome = extract_limit(|p| method.evaluate(&u, p), &protocol)?;
            if trace_csv {
                return write_trace_csv(&outcome.trace, out);
            }
            let riemann_mass = match method {
                SummationMethod::Riemann { order } => Some(riemann_weighted_mass(&u, order)),
                _ => None,
            };
            write_json(
                &SumOutput {
                    method,
                    length: u.len(),
                    estimate: outcome.estimate,
                    converged: outcome.converged,
                    riemann_mass,
                    trace: outcome.trace,
                },
                out,
            )
        }
        Command::Zoo(cmd) => {
            let spec = match cmd {
                ZooCommand::Monomial { d, n } => ZooSpec::Monomial { d, n },
                ZooCommand::Blaschke { zeros, n } => ZooSpec::Blaschke {
                    zeros: parse_zeros(&zeros)?,
                    n,
                },
                ZooCommand::Sawtooth { d, teeth, amp, n } => ZooSpec::Sawtooth {
                    d,
                    teeth,
                    amplitude: amp,
                    n,
                },
                ZooCommand::Weierstrass {
                    alpha,
                    scales,
                    lambda,
                    d,
                    seed,
                    n,
                } => ZooSpec::Weierstrass {
                    params: WeierstrassParams {
                        alpha,
                        scales,
                        amplitude: lambda,
                        degree: d,
                        seed,
                    },
                    n,
                },
                ZooCommand::Step { n } => ZooSpec::Step { n },
            };
            write_signal_csv(&spec.generate()?, out)
        }
        Command::Lab(LabCommand::Q5 { source, bandwidth }) => {
            let signal = source.load()?;
            let spectrum = analyze(&signal, bandwidth_or_default(&signal, bandwidth))?;
            write_json(&q5_report(&spectrum, Some(&signal))?, out)
        }
        Command::Lab(LabCommand::Sweep { source, s, bandwidth }) => {
            let signal = source.load()?;
            let spectrum = analyze(&signal, bandwidth_or_default(&signal, bandwidth))?;
            let s_values = s
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad s value {v:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let mut wtr = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            wtr.write_record(["s", "full", "positive", "ratio"])?;
            for row in s_sweep(&spectrum, &s_values)? {
                let ratio = match row.ratio {
                    Ratio::Finite(v) => fmt_f64(v),
                    Ratio::Infinite => "infinite".into(),
                    Ratio::Undefined => "undefined".into(),
                };
                wtr.write_record([fmt_f64(row.s), fmt_f64(row.full), fmt_f64(row.positive), ratio])?;
            }
            wtr.flush()?;
            Ok(())
        }
        Command::Lab(LabCommand::Table { grid, methods }) => {
            let grid = grid.iter().map(|s| s.parse()).collect::<Result<Vec<ZooSpec>>>()?;
            let methods = parse_methods(&methods)?;
            let rows = convergence_table(&grid, &methods)?;
            let mut wtr = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            wtr.write_record(TABLE_COLUMNS)?;
            for r in rows {
                wtr.write_record([
                    r.family,
                    r.samples.to_string(),
                    r.bandwidth.to_string(),
                    r.oracle.to_string(),
                    r.method.to_string(),
                    fmt_f64(r.estimate),
                    r.converged.to_string(),
                    fmt_f64(r.error),
                ])?;
            }
            wtr.flush()?;
            Ok(())
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => EXIT_IO,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Output goes to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = cli.threads {
        builder = builder.num_threads(threads);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let command = cli.command;
    let result = pool
        .install(move || {
            let mut buf = Vec::new();
            execute(command, &mut buf).map(|()| buf)
        })
        .and_then(|buf| match &cli.out {
            Some(path) => Ok(std::fs::write(path, buf)?),
            None => Ok(stdout.write_all(&buf)?),
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
