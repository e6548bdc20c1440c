//! Infix polynomial syntax: integers, variables such as `x1` or `t3`, `+ - *`,
//! `^` with a nonnegative integer exponent, and parentheses. Juxtaposition
//! multiplies (`3x1^2y1`).

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{canonical_vars, IntPolynomial};
use crate::syntax::{error_at, Cursor, SyntaxError};
use crate::Error;

const MAX_EXPONENT: u64 = 1000;

struct Parser<'a> {
    c: Cursor<'a>,
    seen: BTreeSet<String>,
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<IntPolynomial, SyntaxError> {
        let mut negate = self.c.eat('-');
        if !negate {
            self.c.eat('+');
        }
        let mut acc = IntPolynomial::zero(vec![]);
        loop {
            let term = self.term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            if self.c.eat('+') {
                negate = false;
            } else if self.c.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial, SyntaxError> {
        let mut acc = self.power()?;
        loop {
            if self.c.eat('*') {
                acc = &acc * &self.power()?;
                continue;
            }
            match self.c.peek_token() {
                Some(ch) if ch.is_ascii_alphabetic() || ch == '(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<IntPolynomial, SyntaxError> {
        let base = self.atom()?;
        if self.c.eat('^') {
            let pos = self.c.position();
            let e = self.c.uint()?;
            if e > MAX_EXPONENT {
                return Err(error_at(pos, format!("exponent {e} exceeds {MAX_EXPONENT}")));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPolynomial, SyntaxError> {
        match self.c.peek_token() {
            Some(ch) if ch.is_ascii_digit() => {
                let digits = self.c.digits()?;
                let value: BigInt = digits.parse().expect("decimal digits");
                Ok(IntPolynomial::constant(vec![], value))
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let mut name = self.c.word();
                while let Some(d) = self.c.peek().filter(char::is_ascii_digit) {
                    name.push(d);
                    self.c.bump();
                }
                self.seen.insert(name.clone());
                Ok(IntPolynomial::variable(vec![name.clone()], &name).expect("own variable"))
            }
            Some('(') => {
                self.c.bump();
                let inner = self.expr()?;
                self.c.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.c.unexpected("an integer, a variable or `(`")),
        }
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser {
            c: Cursor::new(s),
            seen: BTreeSet::new(),
        };
        let poly = p.expr()?;
        p.c.expect_end()?;
        let vars = canonical_vars(&p.seen);
        Ok(poly.with_vars(&vars).expect("all parsed variables are listed"))
    }
}
