//! Line-oriented text formats.
//!
//! Density matrix file:
//!
//! ```text
//! format density-matrix
//! n_parties 3
//! <re>,<im> <re>,<im> ...      one line per row, 2^n entries each
//! ```
//!
//! Coefficient file:
//!
//! ```text
//! format hs-coefficients
//! n_parties 3
//! III 1.0000000000000000e0
//! IIX 0.0000000000000000e0
//! ...                          4^n records, Pauli strings over I X Y Z
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Numbers are written
//! with 17 significant digits so values round-trip exactly.

use std::collections::HashSet;
use std::fmt::Write as _;

use hscorr::hsdecomp::CoefficientTensor;
use hscorr::qstate::MAX_PARTIES;
use hscorr::{CMatrix, PauliString};
use num_complex::Complex64;
use thiserror::Error;

pub const DENSITY_HEADER: &str = "format density-matrix";
pub const COEFFICIENT_HEADER: &str = "format hs-coefficients";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    DensityMatrix,
    Coefficients,
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Renders `x` with 17 significant digits; negative zero prints as zero.
pub fn fmt_real(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

fn parse_real(tok: &str, line: usize, column: usize) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, column, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(err(line, column, format!("non-finite number {tok:?}")));
    }
    Ok(v)
}

struct Header<'a, I: Iterator<Item = (usize, &'a str)>> {
    rest: I,
    n_parties: usize,
    last_line: usize,
}

fn read_header<'a, I>(mut lines: I, expected: &str) -> Result<Header<'a, I>, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (ln, first) = lines.next().ok_or_else(|| err(1, 1, "empty file"))?;
    if first.trim() != expected {
        return Err(err(ln, 1, format!("expected header {expected:?}")));
    }
    let (ln, second) = lines
        .next()
        .ok_or_else(|| err(ln + 1, 1, "missing n_parties line"))?;
    let toks = tokens(second);
    match toks.as_slice() {
        [(_, "n_parties"), (col, value)] => {
            let n: usize = value
                .parse()
                .map_err(|_| err(ln, *col, format!("invalid party count {value:?}")))?;
            if n == 0 || n > MAX_PARTIES {
                return Err(err(ln, *col, format!("n_parties must be in 1..={MAX_PARTIES}")));
            }
            Ok(Header {
                rest: lines,
                n_parties: n,
                last_line: ln,
            })
        }
        _ => Err(err(ln, 1, "expected `n_parties <count>`")),
    }
}

/// Sniff the header line.
pub fn detect_kind(text: &str) -> Result<FileKind, ParseError> {
    match content_lines(text).next() {
        Some((_, l)) if l.trim() == DENSITY_HEADER => Ok(FileKind::DensityMatrix),
        Some((_, l)) if l.trim() == COEFFICIENT_HEADER => Ok(FileKind::Coefficients),
        Some((ln, _)) => Err(err(ln, 1, "unrecognized file header")),
        None => Err(err(1, 1, "empty file")),
    }
}

/// Parse a density matrix file into `(n_parties, entries)`. Shape is
/// checked here; physical validity is left to the caller.
pub fn parse_density(text: &str) -> Result<(usize, CMatrix<f64>), ParseError> {
    let Header {
        rest,
        n_parties,
        last_line,
    } = read_header(content_lines(text), DENSITY_HEADER)?;
    let dim = 1usize << n_parties;
    let mut entries = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    let mut last = last_line;
    for (ln, line) in rest {
        last = ln;
        if rows == dim {
            return Err(err(ln, 1, format!("more than {dim} rows")));
        }
        let toks = tokens(line);
        if toks.len() != dim {
            let col = toks.get(dim).map_or(line.chars().count() + 1, |t| t.0);
            return Err(err(ln, col, format!("expected {dim} entries, found {}", toks.len())));
        }
        for (col, tok) in toks {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| err(ln, col, format!("expected `re,im`, found {tok:?}")))?;
            let re = parse_real(re, ln, col)?;
            let im = parse_real(im, ln, col + re_len(tok))?;
            entries.push(Complex64::new(re, im));
        }
        rows += 1;
    }
    if rows != dim {
        return Err(err(last + 1, 1, format!("expected {dim} rows, found {rows}")));
    }
    let m = CMatrix::from_shape_vec((dim, dim), entries).expect("row count checked");
    Ok((n_parties, m))
}

fn re_len(tok: &str) -> usize {
    tok.find(',').map_or(0, |i| tok[..=i].chars().count())
}

pub fn write_density(n_parties: usize, entries: &CMatrix<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{DENSITY_HEADER}").unwrap();
    writeln!(out, "n_parties {n_parties}").unwrap();
    for row in entries.rows() {
        let line: Vec<String> = row
            .iter()
            .map(|z| format!("{},{}", fmt_real(z.re), fmt_real(z.im)))
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// Parse a coefficient file. Every one of the `4^n` strings must appear
/// exactly once; order is free.
pub fn parse_coefficients(text: &str) -> Result<CoefficientTensor<f64>, ParseError> {
    let Header {
        rest,
        n_parties,
        last_line,
    } = read_header(content_lines(text), COEFFICIENT_HEADER)?;
    let total = 1usize << (2 * n_parties);
    let mut values = vec![0.0; total];
    let mut seen = HashSet::new();
    let mut last = last_line;
    for (ln, line) in rest {
        last = ln;
        let toks = tokens(line);
        let [(scol, s), (vcol, v)] = toks.as_slice() else {
            return Err(err(ln, 1, "expected `<pauli string> <coefficient>`"));
        };
        let string: PauliString = s
            .parse()
            .map_err(|e: hscorr::Error| err(ln, *scol, e.to_string()))?;
        if string.n_parties() != n_parties {
            return Err(err(
                ln,
                *scol,
                format!("Pauli string {s:?} has {} symbols, expected {n_parties}", string.n_parties()),
            ));
        }
        if !seen.insert(string.index()) {
            return Err(err(ln, *scol, format!("duplicate record for {s}")));
        }
        values[string.index()] = parse_real(v, ln, *vcol)?;
    }
    if seen.len() != total {
        let missing = (0..total)
            .find(|i| !seen.contains(i))
            .map(|i| PauliString::from_index(n_parties, i).to_string())
            .unwrap_or_default();
        return Err(err(
            last + 1,
            1,
            format!("expected {total} records, found {} (first missing: {missing})", seen.len()),
        ));
    }
    Ok(CoefficientTensor::from_vec(n_parties, values).expect("length is 4^n"))
}

pub fn write_coefficients(c: &CoefficientTensor<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{COEFFICIENT_HEADER}").unwrap();
    writeln!(out, "n_parties {}", c.n_parties()).unwrap();
    for (s, v) in c.iter() {
        writeln!(out, "{s} {}", fmt_real(v)).unwrap();
    }
    out
}
