//! Recursive-descent parser for the expression grammar.
//!
//! Grammar (byte offsets are reported on errors):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?          // right-associative, binds tightest
//! atom    := number | ident | ident '(' expr ')' | '(' expr ')' | 'q'
//! number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits] ['i']
//! ```
//!
//! The exponent of `^` must fold to a constant integer. Decimal literals are
//! converted exactly to rationals, so `0.1` is one tenth, not the nearest
//! float.

use super::{add, div, function, mul, neg, pow, sub, Const, Expression, Func};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        offset,
        message: message.into(),
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parse `text` into an [`Expression`].
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return err(p.pos, "unexpected trailing input");
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = add(&lhs, &rhs);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = sub(&lhs, &rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = mul(&lhs, &rhs);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                lhs = div(&lhs, &rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(neg(&inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exponent = self.unary()?;
            let n = exponent
                .as_const()
                .and_then(Const::as_i32)
                .ok_or_else(|| ParseError {
                    offset: at,
                    message: "exponent must be a constant integer".into(),
                })?;
            return Ok(pow(&base, n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => err(at, format!("unexpected character '{}'", c as char)),
            None => err(at, "unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expression, ParseError> {
        let start = self.pos;
        let mut int_digits = String::new();
        let mut frac_digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            int_digits.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                frac_digits.push(self.src[self.pos] as char);
                self.pos += 1;
            }
        }
        if int_digits.is_empty() && frac_digits.is_empty() {
            return err(start, "malformed number");
        }
        let mut exp10: i64 = -(frac_digits.len() as i64);
        let digits = format!("{int_digits}{frac_digits}");
        let mut mantissa: BigInt = digits.parse().map_err(|_| ParseError {
            offset: start,
            message: "malformed number".into(),
        })?;
        if matches!(self.peek(), Some(b'e' | b'E')) {
            // Only treat as exponent when followed by digits or sign+digits;
            // otherwise it starts an identifier such as `exp(...)`.
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1i64;
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else if self.peek() == Some(b'-') {
                sign = -1;
                self.pos += 1;
            }
            let mut e_digits = String::new();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                e_digits.push(self.src[self.pos] as char);
                self.pos += 1;
            }
            if e_digits.is_empty() {
                self.pos = save;
            } else {
                exp10 += sign * e_digits.parse::<i64>().map_err(|_| ParseError {
                    offset: save,
                    message: "malformed exponent".into(),
                })?;
            }
        }
        let mut value = BigRational::from_integer(std::mem::take(&mut mantissa));
        let ten = BigRational::from_integer(BigInt::from(10));
        for _ in 0..exp10.unsigned_abs() {
            if exp10 >= 0 {
                value *= &ten;
            } else {
                value /= &ten;
            }
        }
        let imaginary = self.peek() == Some(b'i');
        if imaginary {
            self.pos += 1;
            // Reject `3ix`: an identifier may not continue an imaginary literal.
            if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                return err(self.pos, "unexpected character after imaginary literal");
            }
        }
        self.skip_ws();
        let c = if imaginary {
            Const {
                re: BigRational::zero(),
                im: value,
            }
        } else {
            Const {
                re: value,
                im: BigRational::zero(),
            }
        };
        Ok(Expression::constant(c))
    }

    fn ident(&mut self) -> Result<Expression, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii identifier")
            .to_string();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            let func = Func::from_name(&name).ok_or_else(|| ParseError {
                offset: start,
                message: format!("unknown function '{name}'"),
            })?;
            self.pos += 1;
            self.skip_ws();
            let arg = self.expr()?;
            if !self.eat(b')') {
                return err(self.pos, "expected ')'");
            }
            return Ok(function(func, &arg));
        }
        if name == "q" {
            return Ok(Expression::var());
        }
        Ok(Expression::param(&name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, Bindings};
    use num_complex::Complex64;

    fn eval_at(text: &str, q: f64) -> Complex64 {
        evaluate(&parse(text).unwrap(), Complex64::new(q, 0.0), &Bindings::new()).unwrap()
    }

    #[test]
    fn precedence_and_evaluation() {
        assert!((eval_at("q^2 + 1", 2.0).re - 5.0).abs() < 1e-15);
        assert!((eval_at("2*q^2", 3.0).re - 18.0).abs() < 1e-15);
        // `^` is right-associative: q^2^3 = q^8.
        assert!((eval_at("q^2^3", 2.0).re - 256.0).abs() < 1e-15);
        // Unary minus binds looser than `^`.
        assert!((eval_at("-q^2", 3.0).re + 9.0).abs() < 1e-15);
    }

    #[test]
    fn parameters_parse_and_bind_later() {
        let e = parse("C1*exp(E0*q)").unwrap();
        assert_eq!(e.parameters(), vec!["C1".to_string(), "E0".to_string()]);
    }

    #[test]
    fn syntax_error_carries_offset() {
        let e = parse("q+*2").unwrap_err();
        assert_eq!(e.offset, 2);
    }

    #[test]
    fn unknown_function_rejected() {
        let e = parse("tanh(q)").unwrap_err();
        assert!(e.message.contains("unknown function"));
    }

    #[test]
    fn exact_decimals_and_imaginary_literals() {
        let e = parse("0.1").unwrap();
        assert_eq!(e.as_const().unwrap(), &Const::from_ratio(1, 10));
        let e = parse("3i/4").unwrap();
        let v = evaluate(&e, Complex64::new(1.0, 0.0), &Bindings::new()).unwrap();
        assert!((v - Complex64::new(0.0, 0.75)).norm() < 1e-15);
        // exponent notation stays exact too
        let e = parse("2.5e-1").unwrap();
        assert_eq!(e.as_const().unwrap(), &Const::from_ratio(1, 4));
    }

    #[test]
    fn exp_function_not_confused_with_exponent() {
        let v = eval_at("exp(q)", 0.0);
        assert!((v.re - 1.0).abs() < 1e-15);
    }
}
