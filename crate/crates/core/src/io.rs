//! Text formats for matrices, boundary operators, codes and circuits.
//!
//! All formats are line based. Blank lines and lines starting with `#` are
//! skipped; errors carry the 1-based line number of the offending line.
//!
//! ```text
//! GF2 <rows> <cols>          GF4 <rows> <cols>       CSS n=<n>
//! 0110                       0w1W                    GF2 ... (Z checks)
//! ...                        ...                     GF2 ... (X checks)
//!
//! QUBITS <n>
//! INIT <q> zero|plus|epr_a <p>|epr_b <p>
//! CNOT <c> <t>
//! ```
//!
//! A matrix with zero columns has no row lines.

use std::fmt::Write as _;

use crate::circuit::{Cnot, EncodingCircuit, QubitInit};
use crate::complex::BoundaryOperator;
use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::gf4::{Gf4, Gf4Boundary, Gf4Matrix};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next content line as `(line number, trimmed text)`.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            self.last = i + 1;
            if !line.is_empty() && !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next()
            .ok_or_else(|| Error::parse(self.last + 1, format!("unexpected end of input, expected {what}")))
    }

    fn finish(mut self) -> Result<()> {
        match self.next() {
            None => Ok(()),
            Some((n, _)) => Err(Error::parse(n, "trailing content")),
        }
    }
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn header(lines: &mut Lines<'_>, tag: &str) -> Result<(usize, usize)> {
    let (n, text) = lines.expect(&format!("`{tag} <rows> <cols>` header"))?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(Error::parse(n, format!("expected `{tag} <rows> <cols>` header")));
    }
    let rows = parse_usize(n, toks.next(), "row count")?;
    let cols = parse_usize(n, toks.next(), "column count")?;
    if toks.next().is_some() {
        return Err(Error::parse(n, "extra tokens after header"));
    }
    Ok((rows, cols))
}

fn read_rows<T>(
    lines: &mut Lines<'_>,
    tag: &str,
    mut cell: impl FnMut(char) -> Option<T>,
) -> Result<(usize, usize, Vec<Vec<T>>)> {
    let (rows, cols) = header(lines, tag)?;
    let mut out = Vec::with_capacity(rows);
    if cols == 0 {
        return Ok((rows, cols, (0..rows).map(|_| Vec::new()).collect()));
    }
    for _ in 0..rows {
        let (n, text) = lines.expect("matrix row")?;
        let row: Vec<T> = text
            .chars()
            .map(|c| cell(c).ok_or_else(|| Error::parse(n, format!("unexpected character `{c}`"))))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::parse(
                n,
                format!("row has {} entries, expected {cols}", row.len()),
            ));
        }
        out.push(row);
    }
    Ok((rows, cols, out))
}

fn read_matrix(lines: &mut Lines<'_>) -> Result<BitMatrix> {
    let (rows, cols, cells) = read_rows(lines, "GF2", |c| match c {
        '0' => Some(false),
        '1' => Some(true),
        _ => None,
    })?;
    Ok(BitMatrix::from_fn(rows, cols, |r, c| cells[r][c]))
}

fn push_matrix(out: &mut String, m: &BitMatrix) {
    writeln!(out, "GF2 {} {}", m.rows(), m.cols()).unwrap();
    if m.cols() > 0 {
        for r in 0..m.rows() {
            out.extend((0..m.cols()).map(|c| if m.get(r, c) { '1' } else { '0' }));
            out.push('\n');
        }
    }
}

pub fn write_matrix(m: &BitMatrix) -> String {
    let mut out = String::new();
    push_matrix(&mut out, m);
    out
}

pub fn parse_matrix(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines::new(text);
    let m = read_matrix(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn write_boundary(d: &BoundaryOperator) -> String {
    let mut out = format!("# boundary H={}\n", d.hom_dim());
    push_matrix(&mut out, d.matrix());
    out
}

/// Parses a matrix and checks that it squares to zero.
pub fn parse_boundary(text: &str) -> Result<BoundaryOperator> {
    BoundaryOperator::new(parse_matrix(text)?)
}

pub fn write_code(c: &CssCode) -> String {
    let mut out = format!("CSS n={}\n", c.n());
    push_matrix(&mut out, c.a_z());
    push_matrix(&mut out, c.a_x());
    out
}

pub fn parse_code(text: &str) -> Result<CssCode> {
    let mut lines = Lines::new(text);
    let (n, head) = lines.expect("`CSS n=<n>` header")?;
    let len = head
        .strip_prefix("CSS")
        .map(str::trim)
        .and_then(|rest| rest.strip_prefix("n="))
        .ok_or_else(|| Error::parse(n, "expected `CSS n=<n>` header"))?;
    let len = parse_usize(n, Some(len), "code length")?;
    let z_line = lines.last + 1;
    let a_z = read_matrix(&mut lines)?;
    let x_line = lines.last + 1;
    let a_x = read_matrix(&mut lines)?;
    lines.finish()?;
    for (m, line) in [(&a_z, z_line), (&a_x, x_line)] {
        if m.cols() != len {
            return Err(Error::parse(
                line,
                format!("check matrix has {} columns, code length is {len}", m.cols()),
            ));
        }
    }
    CssCode::new(a_z, a_x)
}

fn read_gf4(lines: &mut Lines<'_>) -> Result<Gf4Matrix> {
    let (rows, cols, cells) = read_rows(lines, "GF4", Gf4::from_char)?;
    Ok(Gf4Matrix::from_fn(rows, cols, |r, c| cells[r][c]))
}

pub fn write_gf4_matrix(m: &Gf4Matrix) -> String {
    let mut out = format!("GF4 {} {}\n", m.rows(), m.cols());
    if m.cols() > 0 {
        for r in 0..m.rows() {
            out.extend((0..m.cols()).map(|c| m.get(r, c).to_char()));
            out.push('\n');
        }
    }
    out
}

pub fn parse_gf4_matrix(text: &str) -> Result<Gf4Matrix> {
    let mut lines = Lines::new(text);
    let m = read_gf4(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn write_gf4_boundary(d: &Gf4Boundary) -> String {
    format!("# boundary H={}\n{}", d.hom_dim(), write_gf4_matrix(d.matrix()))
}

pub fn parse_gf4_boundary(text: &str) -> Result<Gf4Boundary> {
    Gf4Boundary::new(parse_gf4_matrix(text)?)
}

pub fn write_circuit(c: &EncodingCircuit) -> String {
    let mut out = format!("QUBITS {}\n", c.n_qubits);
    for (q, tag) in c.init.iter().enumerate() {
        match tag {
            QubitInit::Data => {}
            QubitInit::Zero => writeln!(out, "INIT {q} zero").unwrap(),
            QubitInit::Plus => writeln!(out, "INIT {q} plus").unwrap(),
            QubitInit::EprA(p) => writeln!(out, "INIT {q} epr_a {p}").unwrap(),
            QubitInit::EprB(p) => writeln!(out, "INIT {q} epr_b {p}").unwrap(),
        }
    }
    for g in &c.gates {
        writeln!(out, "{g}").unwrap();
    }
    out
}

/// Parses a circuit; qubits without an `INIT` line are data qubits.
pub fn parse_circuit(text: &str) -> Result<EncodingCircuit> {
    let mut lines = Lines::new(text);
    let (n, head) = lines.expect("`QUBITS <n>` header")?;
    let mut toks = head.split_whitespace();
    if toks.next() != Some("QUBITS") {
        return Err(Error::parse(n, "expected `QUBITS <n>` header"));
    }
    let n_qubits = parse_usize(n, toks.next(), "qubit count")?;
    let mut init = vec![QubitInit::Data; n_qubits];
    let mut init_line = vec![0; n_qubits];
    let mut gates = Vec::new();
    let qubit = |line: usize, tok: Option<&str>| -> Result<usize> {
        let q = parse_usize(line, tok, "qubit index")?;
        if q >= n_qubits {
            return Err(Error::parse(line, format!("qubit {q} out of range")));
        }
        Ok(q)
    };
    while let Some((n, text)) = lines.next() {
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("INIT") => {
                if !gates.is_empty() {
                    return Err(Error::parse(n, "INIT after the first CNOT"));
                }
                let q = qubit(n, toks.next())?;
                if init_line[q] != 0 {
                    return Err(Error::parse(n, format!("qubit {q} initialized twice")));
                }
                init_line[q] = n;
                init[q] = match toks.next() {
                    Some("zero") => QubitInit::Zero,
                    Some("plus") => QubitInit::Plus,
                    Some("epr_a") => QubitInit::EprA(qubit(n, toks.next())?),
                    Some("epr_b") => QubitInit::EprB(qubit(n, toks.next())?),
                    Some(t) => return Err(Error::parse(n, format!("unknown tag `{t}`"))),
                    None => return Err(Error::parse(n, "missing tag")),
                };
            }
            Some("CNOT") => {
                let control = qubit(n, toks.next())?;
                let target = qubit(n, toks.next())?;
                if control == target {
                    return Err(Error::parse(n, "control equals target"));
                }
                gates.push(Cnot { control, target });
            }
            _ => return Err(Error::parse(n, format!("unrecognized line `{text}`"))),
        }
        if toks.next().is_some() {
            return Err(Error::parse(n, "extra tokens"));
        }
    }
    for (q, tag) in init.iter().enumerate() {
        let partner_ok = match *tag {
            QubitInit::EprA(p) => init[p] == QubitInit::EprB(q),
            QubitInit::EprB(p) => init[p] == QubitInit::EprA(q),
            _ => true,
        };
        if !partner_ok {
            return Err(Error::parse(init_line[q], format!("qubit {q}: unmatched Bell partner")));
        }
    }
    Ok(EncodingCircuit { n_qubits, init, gates })
}
