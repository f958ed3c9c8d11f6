//! Recursive-descent parser for the free-polynomial expression grammar:
//!
//! ```text
//! expr    := ('+' | '-')? term (('+' | '-') term)* ;
//! term    := factor ('*' factor)* ;
//! factor  := atom ('^' UINT)? ;
//! atom    := COEFF | VAR | '(' expr ')' ;
//! VAR     := 'x' UINT                  (1-based index)
//! COEFF   := decimal real, or complex written as '(a+bi)'
//! ```
//!
//! Whitespace is insignificant. Multiplication is strictly left-to-right and
//! noncommutative. The optional leading sign is a convenience superset so that
//! formatted polynomials with a negative leading coefficient parse back.

use num_complex::Complex64;

use super::NcPoly;
use crate::error::{Error, Result};
use crate::C64;

/// Parse `text` as a free polynomial in `num_vars` variables.
///
/// ```
/// let p = ncfun::parse_poly("2*x1^2 + 3*x1*x2 - 4*x2*x1", 2).unwrap();
/// assert_eq!(p.num_terms(), 3);
/// assert_eq!(p.degree(), 2);
/// assert_eq!(ncfun::parse_poly(&p.to_string(), 2).unwrap(), p);
/// ```
pub fn parse_poly(text: &str, num_vars: usize) -> Result<NcPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        num_vars,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let exp = self.uint()?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<NcPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let var_pos = self.pos;
                let index = self.uint()? as usize;
                if index == 0 || index > self.num_vars {
                    let _ = var_pos;
                    return Err(Error::VarOutOfRange {
                        var: index,
                        num_vars: self.num_vars,
                    });
                }
                NcPoly::var(self.num_vars, index)
            }
            Some(b'(') => {
                if let Some(c) = self.try_complex_literal() {
                    return Ok(NcPoly::constant(self.num_vars, c));
                }
                self.pos += 1; // consume '('
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let value = self.number()?;
                Ok(NcPoly::constant(self.num_vars, C64::new(value, 0.0)))
            }
            _ => Err(self.syntax("expected coefficient, variable, or '('")),
        }
    }

    /// Attempt to read a complex literal `(a+bi)` / `(a-bi)` starting at the
    /// current `(`; on any mismatch the position is restored and `None`
    /// returned so the caller can parse a parenthesized expression instead.
    fn try_complex_literal(&mut self) -> Option<C64> {
        let start = self.pos;
        let result = (|| {
            if !self.eat(b'(') {
                return None;
            }
            self.skip_ws();
            let re_sign = if self.eat(b'-') {
                -1.0
            } else {
                self.eat(b'+');
                1.0
            };
            self.skip_ws();
            let re = self.number().ok()?;
            self.skip_ws();
            let im_sign = match self.bump() {
                Some(b'+') => 1.0,
                Some(b'-') => -1.0,
                _ => return None,
            };
            self.skip_ws();
            let im = self.number().ok()?;
            self.skip_ws();
            if self.bump() != Some(b'i') {
                return None;
            }
            self.skip_ws();
            if self.bump() != Some(b')') {
                return None;
            }
            Some(Complex64::new(re_sign * re, im_sign * im))
        })();
        if result.is_none() {
            self.pos = start;
        }
        result
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if self.pos == start || (self.pos == start + 1 && self.src[start] == b'.') {
            self.pos = start;
            return Err(self.syntax("expected a number"));
        }
        // Optional exponent; never produced by the formatter but accepted.
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits_start {
                self.pos = mark; // bare 'e' is not an exponent
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("invalid number `{}`", text),
        })
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<u32>().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("integer `{}` out of range", text),
        })
    }
}
