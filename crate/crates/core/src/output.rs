//! Text output: number formatting, CSV datasets and the plain-text state file.
//!
//! State file layout: a `dim 9` line followed by 81 lines `row col re im`.
//! Values in state files use the shortest representation that parses back
//! to the same `f64`, so a write/read cycle is lossless.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, DensityMatrix, LinalgError, DIM};

/// Rounds to 12 significant digits and prints without exponent or trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(&'static str),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Num(x) => fmt_sig(*x),
            Value::Int(i) => i.to_string(),
            Value::Text(t) => (*t).to_string(),
        }
    }
}

/// Rectangular table with a single header line.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry ({row},{col}) appears more than once")]
    Duplicate { row: usize, col: usize },
    #[error("expected {DIM}x{DIM} entries, found {0}")]
    Missing(usize),
    #[error(transparent)]
    Invalid(#[from] LinalgError),
}

pub fn state_to_string(rho: &DensityMatrix<f64>) -> String {
    let m = rho.matrix();
    let mut out = format!("dim {DIM}\n");
    for i in 0..DIM {
        for j in 0..DIM {
            let z = m[(i, j)];
            writeln!(out, "{i} {j} {} {}", z.re, z.im).expect("writing to String");
        }
    }
    out
}

pub fn write_state<W: Write>(rho: &DensityMatrix<f64>, mut w: W) -> io::Result<()> {
    w.write_all(state_to_string(rho).as_bytes())
}

/// Parses and validates a state file.
pub fn read_state<R: BufRead>(r: R) -> Result<DensityMatrix<f64>, StateFileError> {
    let parse_err = |line: usize, message: String| StateFileError::Parse { line, message };
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let header = header?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("dim") || parts.next() != Some("9") || parts.next().is_some() {
        return Err(parse_err(n, format!("expected `dim 9`, got `{header}`")));
    }
    let mut data = vec![None; DIM * DIM];
    let mut seen = 0;
    for (n, line) in lines {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(n, format!("expected `row col re im`, got `{line}`")));
        }
        let row: usize = fields[0].parse().map_err(|_| parse_err(n, format!("bad row `{}`", fields[0])))?;
        let col: usize = fields[1].parse().map_err(|_| parse_err(n, format!("bad column `{}`", fields[1])))?;
        let re: f64 = fields[2].parse().map_err(|_| parse_err(n, format!("bad real part `{}`", fields[2])))?;
        let im: f64 = fields[3].parse().map_err(|_| parse_err(n, format!("bad imaginary part `{}`", fields[3])))?;
        if row >= DIM || col >= DIM {
            return Err(parse_err(n, format!("index ({row},{col}) out of range")));
        }
        let slot = &mut data[row * DIM + col];
        if slot.is_some() {
            return Err(StateFileError::Duplicate { row, col });
        }
        *slot = Some(Complex::new(re, im));
        seen += 1;
    }
    if seen != DIM * DIM {
        return Err(StateFileError::Missing(seen));
    }
    let entries = data.into_iter().map(|z| z.expect("all entries present")).collect();
    Ok(DensityMatrix::new(ComplexMatrix::new(DIM, DIM, entries)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::werner_state;
    use crate::weyl::ModIndex;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(0.5000000000000002), "0.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(123456.789012345), "123456.789012");
        assert_eq!(fmt_sig(2.0), "2");
    }

    #[test]
    fn csv_layout() {
        let mut d = Dataset::new(vec!["p", "negativity"]);
        d.push(vec![Value::Num(0.5), Value::Num(0.5)]);
        d.push(vec![Value::Num(1.0), Value::Num(1.0)]);
        assert_eq!(d.to_csv(), "p,negativity\n0.5,0.5\n1,1\n");
        assert_eq!(d.column("negativity"), Some(1));
    }

    #[test]
    fn state_file_roundtrip_is_exact() {
        let rho = werner_state(0.37, ModIndex::new(1, 2)).unwrap();
        let text = state_to_string(&rho);
        assert!(text.starts_with("dim 9\n"));
        assert_eq!(text.lines().count(), 82);
        let back = read_state(text.as_bytes()).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn state_file_errors() {
        assert!(matches!(read_state("".as_bytes()), Err(StateFileError::Parse { .. })));
        assert!(matches!(read_state("dim 4\n".as_bytes()), Err(StateFileError::Parse { .. })));
        assert!(matches!(read_state("dim 9\n0 0 1 0\n".as_bytes()), Err(StateFileError::Missing(1))));
        assert!(matches!(
            read_state("dim 9\n0 0 1 0\n0 0 1 0\n".as_bytes()),
            Err(StateFileError::Duplicate { row: 0, col: 0 })
        ));
        assert!(matches!(read_state("dim 9\n0 9 1 0\n".as_bytes()), Err(StateFileError::Parse { .. })));
        let mut not_a_state = String::from("dim 9\n");
        for i in 0..9 {
            for j in 0..9 {
                not_a_state.push_str(&format!("{i} {j} {} 0\n", if i == j { 1.0 } else { 0.0 }));
            }
        }
        assert!(matches!(read_state(not_a_state.as_bytes()), Err(StateFileError::Invalid(_))));
    }
}
