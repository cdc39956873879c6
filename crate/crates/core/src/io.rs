//! CSV formats for signals (`j,t,re,im`), spectra (`n,re,im`), sequences
//! (`m,u`) and limit traces (`param,value`).
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{grid_angle, CircleSignal, FourierSpectrum};

pub const SIGNAL_HEADER: [&str; 4] = ["j", "t", "re", "im"];
pub const SPECTRUM_HEADER: [&str; 3] = ["n", "re", "im"];
pub const SEQUENCE_HEADER: [&str; 2] = ["m", "u"];
pub const TRACE_HEADER: [&str; 2] = ["param", "value"];

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn reader<R: Read>(r: R, expected: &[&str]) -> Result<csv::Reader<R>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(Error::Parse(format!(
            "expected header {}, found {}",
            expected.join(","),
            header.join(",")
        )));
    }
    Ok(rdr)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    let raw = record
        .get(i)
        .ok_or_else(|| Error::Parse(format!("row {line}: missing column {i}")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("row {line}: cannot parse {raw:?}")))
}

pub fn write_signal_csv<W: Write>(signal: &CircleSignal, w: W) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(SIGNAL_HEADER)?;
    let n = signal.len();
    for (j, z) in signal.samples().iter().enumerate() {
        wtr.write_record([
            j.to_string(),
            fmt_f64(grid_angle(j, n)),
            fmt_f64(z.re),
            fmt_f64(z.im),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a signal; with `unimodular_tol` the samples are declared (and checked)
/// unimodular at that tolerance.
pub fn read_signal_csv<R: Read>(r: R, unimodular_tol: Option<f64>) -> Result<CircleSignal> {
    let mut rdr = reader(r, &SIGNAL_HEADER)?;
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let j: usize = field(&record, 0, line + 1)?;
        if j != line {
            return Err(Error::Parse(format!("row {}: expected j = {line}, got {j}", line + 1)));
        }
        let t: f64 = field(&record, 1, line + 1)?;
        rows.push((t, Complex64::new(field(&record, 2, line + 1)?, field(&record, 3, line + 1)?)));
    }
    let n = rows.len();
    for (j, (t, _)) in rows.iter().enumerate() {
        if (t - grid_angle(j, n)).abs() > 1e-9 {
            return Err(Error::Parse(format!("row {}: t = {t} is off the uniform grid", j + 1)));
        }
    }
    let samples = rows.into_iter().map(|(_, z)| z).collect();
    match unimodular_tol {
        Some(tol) => CircleSignal::unimodular(samples, tol),
        None => CircleSignal::new(samples),
    }
}

pub fn write_spectrum_csv<W: Write>(spectrum: &FourierSpectrum, w: W) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(SPECTRUM_HEADER)?;
    for (n, a) in spectrum.iter() {
        wtr.write_record([n.to_string(), fmt_f64(a.re), fmt_f64(a.im)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_spectrum_csv<R: Read>(r: R) -> Result<FourierSpectrum> {
    let mut rdr = reader(r, &SPECTRUM_HEADER)?;
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let n: i64 = field(&record, 0, line + 1)?;
        rows.push((n, Complex64::new(field(&record, 1, line + 1)?, field(&record, 2, line + 1)?)));
    }
    if rows.len() % 2 != 1 {
        return Err(Error::Parse(format!("spectrum needs 2M+1 rows, got {}", rows.len())));
    }
    let m = (rows.len() / 2) as i64;
    for (i, (n, _)) in rows.iter().enumerate() {
        if *n != i as i64 - m {
            return Err(Error::Parse(format!(
                "row {}: expected n = {}, got {n}",
                i + 1,
                i as i64 - m
            )));
        }
    }
    FourierSpectrum::new(rows.into_iter().map(|(_, a)| a).collect())
}

pub fn write_sequence_csv<W: Write>(u: &[f64], w: W) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(SEQUENCE_HEADER)?;
    for (i, x) in u.iter().enumerate() {
        wtr.write_record([(i + 1).to_string(), fmt_f64(*x)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_sequence_csv<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rdr = reader(r, &SEQUENCE_HEADER)?;
    let mut u = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let m: usize = field(&record, 0, line + 1)?;
        if m != line + 1 {
            return Err(Error::Parse(format!("row {}: expected m = {}, got {m}", line + 1, line + 1)));
        }
        u.push(field(&record, 1, line + 1)?);
    }
    Ok(u)
}

pub fn write_trace_csv<W: Write>(trace: &[(f64, f64)], w: W) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(TRACE_HEADER)?;
    for (p, v) in trace {
        wtr.write_record([fmt_f64(*p), fmt_f64(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}
