//! The line-oriented MF file format.
//!
//! ```text
//! field: 2^1 modulus 11
//! ring: x,y laurent:1,1
//! potential: x + y + x^-1*y^-1
//! size: 2
//! <row 1>
//! <row 2>
//! ```
//!
//! Rows hold `,`-separated entries. Lines starting with `#` and blank lines
//! are skipped. The modulus is written as `k+1` bits, constant term first.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2k::FieldSpec;
use crate::mfcore::{verify_mf, UngradedMF, VerifyReport};
use crate::ringmat::RingMatrix;
use crate::ringpoly::{Ring, RingPoly};

/// A parsed file. `Q^2 = W Id` is not checked at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfFile {
    pub potential: RingPoly,
    pub matrix: RingMatrix,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

/// `2^k` or `2^k:<modulus bits>`.
pub fn parse_field_arg(text: &str) -> Result<FieldSpec> {
    let text = text.trim();
    let (deg, bits) = match text.split_once(':') {
        Some((d, b)) => (d, Some(b)),
        None => (text, None),
    };
    let k: u32 = deg
        .trim()
        .strip_prefix("2^")
        .and_then(|k| k.trim().parse().ok())
        .ok_or_else(|| Error::InvalidField(format!("expected 2^k, got `{deg}`")))?;
    match bits {
        None => FieldSpec::with_default_modulus(k),
        Some(b) => {
            let f = FieldSpec::from_modulus_bits(b)?;
            if f.degree() != k {
                return Err(Error::InvalidField(format!("modulus `{b}` does not have degree {k}")));
            }
            Ok(f)
        }
    }
}

fn header<'a>(lines: &[(usize, &'a str)], idx: usize, key: &str) -> Result<(usize, &'a str)> {
    let &(no, line) = lines
        .get(idx)
        .ok_or_else(|| syntax(lines.last().map_or(1, |l| l.0), format!("missing `{key}:` line")))?;
    let body = line
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| syntax(no, format!("expected `{key}:`")))?;
    Ok((no, body.trim()))
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => syntax(line, other.to_string()),
    }
}

impl MfFile {
    pub fn parse(text: &str) -> Result<MfFile> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let (no, body) = header(&lines, 0, "field")?;
        let field = match body.split_once("modulus") {
            Some((deg, bits)) => parse_field_arg(&format!("{}:{}", deg.trim(), bits.trim())),
            None => parse_field_arg(body),
        }
        .map_err(|e| located(no, e))?;
        let (no, body) = header(&lines, 1, "ring")?;
        let ring = Ring::parse_descriptor(field, body).map_err(|e| located(no, e))?;
        let (no, body) = header(&lines, 2, "potential")?;
        let potential = RingPoly::parse(body, &ring).map_err(|e| shift_syntax(e, no, body, lines[2].1))?;
        let (no, body) = header(&lines, 3, "size")?;
        let size: usize = body.parse().map_err(|_| syntax(no, format!("bad size `{body}`")))?;
        let rows = &lines[4..];
        if rows.len() != size {
            return Err(syntax(
                rows.last().map_or(no, |r| r.0),
                format!("expected {size} matrix rows, found {}", rows.len()),
            ));
        }
        let mut entries = Vec::with_capacity(size);
        for &(no, row) in rows {
            let m = RingMatrix::parse_from_line(row, &ring, no)?;
            if m.rows() != 1 || m.cols() != size {
                return Err(syntax(no, format!("expected {size} entries, found {}", m.cols())));
            }
            entries.push((0..size).map(|j| m.get(0, j).clone()).collect());
        }
        let matrix = RingMatrix::from_rows(&ring, entries)?;
        Ok(MfFile { potential, matrix })
    }

    pub fn from_mf(x: &UngradedMF) -> MfFile {
        MfFile {
            potential: x.potential().clone(),
            matrix: x.matrix().clone(),
        }
    }

    pub fn ring(&self) -> &Ring {
        self.potential.ring()
    }

    pub fn verify(&self) -> Result<VerifyReport> {
        verify_mf(&self.matrix, &self.potential)
    }

    pub fn into_mf(self) -> Result<UngradedMF> {
        UngradedMF::new(self.potential, self.matrix)
    }
}

/// Moves a syntax error reported against `body` to its place in the file line.
fn shift_syntax(e: Error, line_no: usize, body: &str, full: &str) -> Error {
    match e {
        Error::Syntax { column, message, .. } => {
            let offset = full.find(body).unwrap_or(0);
            Error::Syntax {
                line: line_no,
                column: column + offset,
                message,
            }
        }
        other => located(line_no, other),
    }
}

impl fmt::Display for MfFile {
    /// Canonical form; `parse` of the output reproduces `self`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        writeln!(
            f,
            "field: 2^{} modulus {}",
            ring.field().degree(),
            ring.field().modulus_bits()
        )?;
        writeln!(f, "ring: {ring}")?;
        writeln!(f, "potential: {}", self.potential)?;
        writeln!(f, "size: {}", self.matrix.rows())?;
        writeln!(f, "{}", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rp2::{RP2_MATRIX, RP2_POTENTIAL};

    fn rp2_text() -> String {
        let rows = RP2_MATRIX.replace("; ", "\n");
        format!("field: 2^1 modulus 11\nring: x,y laurent:1,1\npotential: {RP2_POTENTIAL}\nsize: 4\n{rows}\n")
    }

    #[test]
    fn round_trip() {
        let f = MfFile::parse(&rp2_text()).unwrap();
        assert!(f.verify().unwrap().ok);
        let once = f.to_string();
        let again = MfFile::parse(&once).unwrap().to_string();
        assert_eq!(once, again);
        assert_eq!(MfFile::parse(&once).unwrap(), f);
    }

    #[test]
    fn field_args() {
        assert_eq!(parse_field_arg("2^2").unwrap(), FieldSpec::gf4());
        assert_eq!(parse_field_arg("2^2:111").unwrap(), FieldSpec::gf4());
        assert!(parse_field_arg("2^3:111").is_err());
        assert!(parse_field_arg("3^2").is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = rp2_text().replace("y, 0, x^-1, 1", "y, 0, x^^-1, 1");
        match MfFile::parse(&bad) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let short = rp2_text().replace("size: 4", "size: 5");
        assert!(matches!(MfFile::parse(&short), Err(Error::Syntax { .. })));
        let missing = "field: 2^1\nring: x laurent:0\n";
        assert!(matches!(MfFile::parse(missing), Err(Error::Syntax { .. })));
        let potential = rp2_text().replace("x + y + x^-1*y^-1", "x + + y");
        match MfFile::parse(&potential) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 16)),
            other => panic!("{other:?}"),
        }
    }
}
