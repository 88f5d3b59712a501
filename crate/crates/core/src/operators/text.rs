//! Plain-text matrices and vectors.
//!
//! ```text
//! complex-matrix 2 2
//! 1,0 0,-1
//! 0,1 2,0
//! ```
//!
//! Vectors use the header `complex-vector n`. Entries are `re,im` pairs
//! separated by whitespace; line breaks are not significant.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::precision::C64;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_entry(tok: &str) -> Result<C64> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| parse_err(format!("entry '{tok}' is not a 're,im' pair")))?;
    let re: f64 = re.trim().parse().map_err(|_| parse_err(format!("bad real part in '{tok}'")))?;
    let im: f64 = im.trim().parse().map_err(|_| parse_err(format!("bad imaginary part in '{tok}'")))?;
    Ok(C64::new(re, im))
}

fn entries<'a>(body: impl Iterator<Item = &'a str>, expected: usize) -> Result<Vec<C64>> {
    let out = body
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(parse_entry)
        .collect::<Result<Vec<_>>>()?;
    if out.len() != expected {
        return Err(parse_err(format!("expected {expected} entries, found {}", out.len())));
    }
    Ok(out)
}

fn header<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Vec<&'a str>> {
    lines
        .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .ok_or_else(|| parse_err("empty input"))
}

fn dim(tok: Option<&&str>) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err("missing or invalid dimension in header"))
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<C64>> {
    let mut lines = text.lines();
    let head = header(&mut lines)?;
    if head.first() != Some(&"complex-matrix") {
        return Err(parse_err("matrix header must be 'complex-matrix rows cols'"));
    }
    let (rows, cols) = (dim(head.get(1))?, dim(head.get(2))?);
    Ok(DMatrix::from_row_slice(rows, cols, &entries(lines, rows * cols)?))
}

pub fn parse_vector(text: &str) -> Result<Vec<C64>> {
    let mut lines = text.lines();
    let head = header(&mut lines)?;
    if head.first() != Some(&"complex-vector") {
        return Err(parse_err("vector header must be 'complex-vector n'"));
    }
    entries(lines, dim(head.get(1))?)
}

pub fn read_matrix(path: &Path) -> Result<DMatrix<C64>> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_vector(path: &Path) -> Result<Vec<C64>> {
    parse_vector(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(m: &DMatrix<C64>) -> String {
    let mut s = format!("complex-matrix {} {}\n", m.nrows(), m.ncols());
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn write_vector(v: &[C64]) -> String {
    let mut s = format!("complex-vector {}\n", v.len());
    for z in v {
        let _ = writeln!(s, "{:e},{:e}", z.re, z.im);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = parse_matrix("complex-matrix 2 2\n1,0 0,-1\n0,1 2.5,0\n").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        let v = vec![C64::new(0.1, -3.0), C64::new(1e-300, 7.0)];
        assert_eq!(parse_vector(&write_vector(&v)).unwrap(), v);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_matrix("complex-matrix 2 2\n1,0 0,-1\n").is_err());
        assert!(parse_vector("complex-matrix 1 1\n1,0").is_err());
        assert!(parse_vector("complex-vector 1\n1;0").is_err());
        assert!(parse_vector("").is_err());
    }
}
