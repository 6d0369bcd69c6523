//! Text form of exp-polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      // '/' only by a nonzero constant
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER | IDENT | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `p/q` literals fall out of `term`. The argument of `exp` must be a linear
//! form in the declared variables.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{ExpPoly, Frequency, Monomial, Vars};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("non-affine exp argument")]
    NonAffineExp,
    #[error("exp argument has a nonzero constant term")]
    ExpConstant,
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("division by a non-constant expression")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
}

/// Parses `text` as an expression over `vars`.
pub fn parse(text: &str, vars: &Vars) -> Result<ExpPoly, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.unexpected());
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&b) => self.error(self.pos, ParseErrorKind::UnexpectedChar(b as char)),
            None => self.error(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(self.error(self.pos, ParseErrorKind::UnexpectedEnd))
        } else {
            Err(self.error(self.pos, ParseErrorKind::Expected(what)))
        }
    }

    fn expr(&mut self) -> Result<ExpPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExpPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.unary()?;
                    let c = divisor
                        .as_constant()
                        .ok_or_else(|| self.error(at, ParseErrorKind::NonConstantDivisor))?;
                    if c.is_zero() {
                        return Err(self.error(at, ParseErrorKind::DivisionByZero));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExpPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ExpPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let digits = self.integer_literal();
        if digits.is_empty() {
            return Err(self.error(at, ParseErrorKind::BadExponent));
        }
        let n: u32 = digits
            .parse()
            .map_err(|_| self.error(at, ParseErrorKind::BadExponent))?;
        Ok(base.pow(n))
    }

    fn integer_literal(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b.is_ascii_alphanumeric() || b == b'_' || (b == b'\'' && self.pos > start) {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<ExpPoly, ParseError> {
        let Some(b) = self.peek() else {
            return Err(self.error(self.pos, ParseErrorKind::UnexpectedEnd));
        };
        let start = self.pos;
        if b.is_ascii_digit() {
            let digits = self.integer_literal();
            let n: BigInt = digits.parse().expect("ascii digits");
            return Ok(ExpPoly::constant(self.vars, Rational::from_integer(n)));
        }
        if b == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')', "')'")?;
            return Ok(inner);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let name = self.identifier();
            if name == "exp" && self.peek() == Some(b'(') {
                self.pos += 1;
                let arg = self.expr()?;
                self.expect(b')', "')'")?;
                return self.exp_of(arg, start);
            }
            return match self.vars.iter().position(|v| *v == name) {
                Some(k) => Ok(ExpPoly::var(self.vars, k)),
                None => Err(self.error(start, ParseErrorKind::UnknownVariable(name))),
            };
        }
        Err(self.unexpected())
    }

    fn exp_of(&self, arg: ExpPoly, at: usize) -> Result<ExpPoly, ParseError> {
        if !arg.is_polynomial() || arg.degree() > 1 {
            return Err(self.error(at, ParseErrorKind::NonAffineExp));
        }
        if arg.terms().any(|(_, m, _)| m.is_one()) {
            return Err(self.error(at, ParseErrorKind::ExpConstant));
        }
        let lambda = arg
            .as_linear_form()
            .unwrap_or_else(|| vec![Rational::zero(); self.vars.len()]);
        Ok(ExpPoly::exp(self.vars, Frequency::new(lambda)))
    }
}

/// Deterministic text form: frequencies in ascending lexicographic order,
/// monomials within a frequency in descending graded-lexicographic order.
pub(super) fn render(e: &ExpPoly) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (f, poly) in &e.terms {
        for (m, c) in poly.iter().rev() {
            let mut factors = Vec::new();
            render_monomial(m, &e.vars, &mut factors);
            if !f.is_zero() {
                factors.push(format!("exp({})", render_linear(f, &e.vars)));
            }
            push_signed_term(&mut out, c, &factors);
        }
    }
    out
}

fn render_monomial(m: &Monomial, vars: &Vars, factors: &mut Vec<String>) {
    for (k, &exp) in m.exponents().iter().enumerate() {
        match exp {
            0 => {}
            1 => factors.push(vars[k].clone()),
            _ => factors.push(format!("{}^{}", vars[k], exp)),
        }
    }
}

fn render_linear(f: &Frequency, vars: &Vars) -> String {
    let mut out = String::new();
    for (k, c) in f.components().iter().enumerate() {
        if !c.is_zero() {
            push_signed_term(&mut out, c, std::slice::from_ref(&vars[k]));
        }
    }
    out
}

fn push_signed_term(out: &mut String, c: &Rational, factors: &[String]) {
    let negative = c.is_negative();
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let magnitude = c.abs();
    if factors.is_empty() {
        let _ = write!(out, "{magnitude}");
    } else if magnitude.is_one() {
        out.push_str(&factors.join("*"));
    } else {
        let _ = write!(out, "{}*{}", magnitude, factors.join("*"));
    }
}
