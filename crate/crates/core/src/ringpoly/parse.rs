//! Text grammar for polynomials and matrices of polynomials.
//!
//! ```text
//! poly   := term ('+' term)*
//! term   := atom ('*' atom)*
//! atom   := '{' uint '}' | '0' | '1' | var ('^' '-'? uint)?
//! matrix := row ((';' | newline) row)*      row := poly (',' poly)*
//! ```

use smallvec::SmallVec;

use super::{Exponents, Ring, RingPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Coeff(u64),
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Semi,
    Newline,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (first_line, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let single = |tok| Token {
            tok,
            line: tl,
            column: tc,
        };
        match c {
            '\n' => {
                out.push(single(Tok::Newline));
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => out.push(single(Tok::Plus)),
            '-' => out.push(single(Tok::Minus)),
            '*' => out.push(single(Tok::Star)),
            '^' => out.push(single(Tok::Caret)),
            ',' => out.push(single(Tok::Comma)),
            ';' => out.push(single(Tok::Semi)),
            '{' => {
                let start = i;
                i += 1;
                let mut digits = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    digits.push(chars[i]);
                    i += 1;
                }
                if digits.is_empty() || i >= chars.len() || chars[i] != '}' {
                    return Err(syntax(tl, tc, "expected `{n}` field coefficient"));
                }
                let v = digits
                    .parse::<u64>()
                    .map_err(|_| syntax(tl, tc, "coefficient too large"))?;
                out.push(single(Tok::Coeff(v)));
                col += i - start + 1;
                i += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<u64>().map_err(|_| syntax(tl, tc, "integer too large"))?;
                out.push(single(Tok::Int(v)));
                col += i - start;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(single(Tok::Ident(chars[start..i].iter().collect())));
                col += i - start;
                continue;
            }
            other => return Err(syntax(tl, tc, format!("unexpected character `{other}`"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

fn unexpected_at(t: &Token, want: &str) -> Error {
    let found = match &t.tok {
        Tok::End => "end of input".to_string(),
        Tok::Newline => "end of line".to_string(),
        other => format!("{other:?}"),
    };
    syntax(t.line, t.column, format!("expected {want}, found {found}"))
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, want: &str) -> Error {
        unexpected_at(self.peek(), want)
    }

    fn poly(&mut self) -> Result<RingPoly> {
        let mut acc = self.term()?;
        while self.peek().tok == Tok::Plus {
            self.bump();
            let t = self.term()?;
            acc += &t;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingPoly> {
        let n = self.ring.nvars();
        let field = self.ring.field();
        let mut coeff = 1u8;
        let mut exps: Exponents = SmallVec::from_elem(0, n);
        loop {
            let t = self.bump();
            match t.tok {
                Tok::Coeff(v) => {
                    if v as usize >= field.size() {
                        return Err(syntax(
                            t.line,
                            t.column,
                            format!("coefficient {v} outside GF(2^{})", field.degree()),
                        ));
                    }
                    coeff = field.mul_raw(coeff, v as u8);
                }
                Tok::Int(0) => coeff = 0,
                Tok::Int(1) => {}
                Tok::Int(v) => {
                    return Err(syntax(
                        t.line,
                        t.column,
                        format!("integer literal {v}; write field coefficients as {{n}}"),
                    ))
                }
                Tok::Ident(name) => {
                    let i = self
                        .ring
                        .var_index(&name)
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    let mut e: i64 = 1;
                    if self.peek().tok == Tok::Caret {
                        self.bump();
                        let neg = if self.peek().tok == Tok::Minus {
                            self.bump();
                            true
                        } else {
                            false
                        };
                        let et = self.bump();
                        match et.tok {
                            Tok::Int(v) if v <= i32::MAX as u64 => {
                                e = if neg { -(v as i64) } else { v as i64 };
                            }
                            Tok::Int(_) => return Err(syntax(et.line, et.column, "exponent overflow")),
                            _ => return Err(unexpected_at(&et, "integer exponent")),
                        }
                        if e < 0 && !self.ring.is_laurent(i) {
                            return Err(Error::NegativeExponent(name));
                        }
                    }
                    let sum = exps[i] as i64 + e;
                    if sum > i32::MAX as i64 || sum < i32::MIN as i64 {
                        return Err(syntax(t.line, t.column, "exponent overflow"));
                    }
                    exps[i] = sum as i32;
                }
                _ => return Err(unexpected_at(&t, "coefficient, `1` or variable")),
            }
            if self.peek().tok == Tok::Star {
                self.bump();
            } else {
                break;
            }
        }
        self.ring.check_exponents(&exps)?;
        Ok(RingPoly::monomial_raw(self.ring, exps, coeff))
    }
}

pub(super) fn parse_poly(text: &str, ring: &Ring) -> Result<RingPoly> {
    let toks = lex(text, 1)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.poly()?;
    if p.peek().tok != Tok::End {
        return Err(p.unexpected("`+` or end of input"));
    }
    Ok(out)
}

/// Rows separated by `;` or newlines, entries by `,`. Line numbers in
/// errors start at `first_line`.
pub(crate) fn parse_matrix_text(text: &str, ring: &Ring, first_line: usize) -> Result<Vec<Vec<RingPoly>>> {
    let mut p = Parser {
        toks: lex(text, first_line)?,
        pos: 0,
        ring,
    };
    let mut rows = Vec::new();
    loop {
        while matches!(p.peek().tok, Tok::Newline | Tok::Semi) {
            p.bump();
        }
        if p.peek().tok == Tok::End {
            break;
        }
        let mut row = vec![p.poly()?];
        while p.peek().tok == Tok::Comma {
            p.bump();
            row.push(p.poly()?);
        }
        match p.peek().tok {
            Tok::Newline | Tok::Semi | Tok::End => {}
            _ => return Err(p.unexpected("`,`, `;` or end of row")),
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::FieldSpec;

    fn ring() -> Ring {
        Ring::new(FieldSpec::gf2(), &["x", "y"], &[true, false]).unwrap()
    }

    #[test]
    fn potential_parses() {
        let r = Ring::laurent(FieldSpec::gf2(), &["x", "y"]).unwrap();
        let w = parse_poly("x + y + x^-1*y^-1", &r).unwrap();
        assert_eq!(w.num_terms(), 3);
        assert!(w.coeff(&[-1, -1]).is_one());
    }

    #[test]
    fn negative_exponent_on_polynomial_variable() {
        let r = Ring::polynomial(FieldSpec::gf2(), &["x"]).unwrap();
        assert_eq!(parse_poly("x^-1", &r), Err(Error::NegativeExponent("x".into())));
        assert_eq!(parse_poly("y^-2", &ring()), Err(Error::NegativeExponent("y".into())));
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(parse_poly("x + w", &ring()), Err(Error::UnknownVariable("w".into())));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_poly("x +\n  * y", &ring()) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_poly("x ^ y", &ring()) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x # y", &ring()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &ring()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("3*x", &ring()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn coefficients_in_extension() {
        let r = Ring::laurent(FieldSpec::gf4(), &["x", "y"]).unwrap();
        let q = parse_poly("{3}*x^-2*y + 1", &r).unwrap();
        assert_eq!(q.coeff(&[-2, 1]).value(), 3);
        assert!(matches!(parse_poly("{4}*x", &r), Err(Error::Syntax { .. })));
        // {2}*{2} = t*t = t+1
        assert_eq!(parse_poly("{2}*{2}", &r).unwrap().coeff(&[0, 0]).value(), 3);
    }

    #[test]
    fn repeated_factors_accumulate() {
        let r = ring();
        assert_eq!(parse_poly("x*x^-1*y", &r).unwrap(), parse_poly("y", &r).unwrap());
        assert!(parse_poly("x + x", &r).unwrap().is_zero());
        assert!(parse_poly("0", &r).unwrap().is_zero());
    }

    #[test]
    fn matrices() {
        let r = ring();
        let rows = parse_matrix_text("0, 1; x^-1, y\n1, x", &r, 1).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|row| row.len() == 2));
        match parse_matrix_text("1, 1\nx, + ", &r, 5) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
    }
}
