//! Grammar:
//!
//! ```text
//! system    := "[" form (";" form)* "]"
//! form      := "!"? sum
//! sum       := ("+"|"-")? term (("+"|"-") term)*
//! term      := int? "*"? (var | "(" sum ")")
//! var       := "g" int
//! quantum   := signedterm (("+"|"-") signedterm)*
//! signedterm:= int? "*"? system ("*" system)*  |  int
//! ```
//!
//! Arity is the largest variable index in the system.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{LinearForm, LinearSystem, QuantumSystem, QuantumTerm};
use crate::syntax::{error_at, Cursor, SyntaxError};
use crate::Error;

type Coefficients = BTreeMap<usize, i64>;

fn add_scaled(into: &mut Coefficients, from: Coefficients, scale: i64, c: &Cursor) -> Result<(), SyntaxError> {
    for (var, coef) in from {
        let entry = into.entry(var).or_insert(0);
        *entry = coef
            .checked_mul(scale)
            .and_then(|v| entry.checked_add(v))
            .ok_or_else(|| c.error("coefficient overflow"))?;
    }
    Ok(())
}

fn parse_term(c: &mut Cursor) -> Result<Coefficients, SyntaxError> {
    c.skip_ws();
    let start = c.position();
    let scale = if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
        let v = c.uint()?;
        Some(i64::try_from(v).map_err(|_| c.error("coefficient too large"))?)
    } else {
        None
    };
    let starred = scale.is_some() && c.eat('*');
    let mut out = Coefficients::new();
    match c.peek_token() {
        Some('g') => {
            c.bump();
            let pos = c.position();
            if !c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                return Err(c.unexpected("a variable index"));
            }
            let idx = c.uint()?;
            if idx == 0 {
                return Err(error_at(pos, "variables are numbered from g1".into()));
            }
            out.insert(idx as usize - 1, scale.unwrap_or(1));
        }
        Some('(') => {
            c.bump();
            let inner = parse_sum(c)?;
            c.expect(')')?;
            add_scaled(&mut out, inner, scale.unwrap_or(1), c)?;
        }
        _ if scale.is_some() && !starred => {
            if scale != Some(0) {
                return Err(error_at(start, "linear forms cannot have constant terms".into()));
            }
        }
        _ => return Err(c.unexpected("a variable `g<n>` or `(`")),
    }
    Ok(out)
}

fn parse_sum(c: &mut Cursor) -> Result<Coefficients, SyntaxError> {
    let mut sign = 1;
    if c.eat('-') {
        sign = -1;
    } else {
        c.eat('+');
    }
    let mut acc = Coefficients::new();
    loop {
        let term = parse_term(c)?;
        add_scaled(&mut acc, term, sign, c)?;
        if c.eat('+') {
            sign = 1;
        } else if c.eat('-') {
            sign = -1;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_form(c: &mut Cursor) -> Result<(Coefficients, bool), SyntaxError> {
    let negated = c.eat('!');
    Ok((parse_sum(c)?, negated))
}

pub(super) fn parse_system(c: &mut Cursor) -> Result<LinearSystem, SyntaxError> {
    let start = c.position();
    c.expect('[')?;
    let mut raw = vec![parse_form(c)?];
    while c.eat(';') {
        raw.push(parse_form(c)?);
    }
    c.expect(']')?;
    let arity = raw
        .iter()
        .filter_map(|(coefs, _)| coefs.keys().next_back())
        .max()
        .map_or(1, |&v| v + 1);
    let forms = raw
        .into_iter()
        .map(|(coefs, negated)| {
            let mut v = vec![0i64; arity];
            for (var, coef) in coefs {
                v[var] = coef;
            }
            LinearForm::new(v, negated).expect("arity >= 1")
        })
        .collect();
    LinearSystem::new(forms).map_err(|e| error_at(start, e.to_string()))
}

fn parse_quantum_term(c: &mut Cursor, negative: bool) -> Result<QuantumTerm, SyntaxError> {
    c.skip_ws();
    let mut coefficient = BigInt::from(1);
    let mut need_system = true;
    if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
        coefficient = c.digits()?.parse().expect("decimal digits");
        if c.eat('*') {
            need_system = true;
        } else {
            need_system = c.peek_token() == Some('[');
        }
    }
    let mut factors = Vec::new();
    if need_system {
        factors.push(parse_system(c)?);
        while c.eat('*') {
            factors.push(parse_system(c)?);
        }
    }
    if negative {
        coefficient = -coefficient;
    }
    Ok(QuantumTerm::new(coefficient, factors))
}

pub(super) fn parse_quantum(c: &mut Cursor) -> Result<QuantumSystem, SyntaxError> {
    let mut negative = c.eat('-');
    if !negative {
        c.eat('+');
    }
    let mut terms = Vec::new();
    loop {
        terms.push(parse_quantum_term(c, negative)?);
        if c.eat('+') {
            negative = false;
        } else if c.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    Ok(QuantumSystem::new(terms))
}

impl FromStr for LinearSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut c = Cursor::new(s);
        let system = parse_system(&mut c)?;
        c.expect_end()?;
        Ok(system)
    }
}

impl FromStr for QuantumSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut c = Cursor::new(s);
        let q = parse_quantum(&mut c)?;
        c.expect_end()?;
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_walk() {
        let s: LinearSystem = "[!(3g1); g2-2g1; 2g2-4g1]".parse().unwrap();
        assert_eq!(s.arity(), 2);
        assert_eq!(s.len(), 3);
        assert!(s.forms()[0].is_negated());
        assert_eq!(s.forms()[0].coefficients(), &[3, 0]);
        assert_eq!(s.forms()[1].coefficients(), &[-2, 1]);
        assert_eq!(s.forms()[2].coefficients(), &[-4, 2]);
    }

    #[test]
    fn scaled_groups_and_stars() {
        let s: LinearSystem = "[3*(g2 - 2g1); !g1 + g1 + 0; -g3]".parse().unwrap();
        assert_eq!(s.arity(), 3);
        assert_eq!(s.forms()[0].coefficients(), &[-6, 3, 0]);
        assert_eq!(s.forms()[1].coefficients(), &[2, 0, 0]);
        assert_eq!(s.forms()[2].coefficients(), &[0, 0, -1]);
    }

    #[test]
    fn errors_have_positions() {
        for (text, col) in [("[g0]", 3), ("[g1; 2]", 6), ("[g1 g2]", 5), ("[x1]", 2)] {
            let Err(Error::Syntax(e)) = text.parse::<LinearSystem>() else {
                panic!("{text} should fail");
            };
            assert_eq!(e.column, col, "{text}: {e}");
        }
    }

    #[test]
    fn quantum_terms() {
        let q: QuantumSystem = "-3[g1]*[g1;g2] + 2 * [g1] - 4".parse().unwrap();
        assert_eq!(q.terms()[0].coefficient, BigInt::from(-3));
        assert_eq!(q.terms()[0].factors.len(), 2);
        assert_eq!(q.terms()[1].coefficient, BigInt::from(2));
        assert_eq!(q.terms()[2].coefficient, BigInt::from(-4));
        assert!(q.terms()[2].factors.is_empty());
    }

    fn arb_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..4).prop_flat_map(|arity| {
            prop::collection::vec(
                (prop::collection::vec(-9i64..10, arity), any::<bool>()),
                1..5,
            )
            .prop_map(move |forms| {
                let mut forms: Vec<LinearForm> = forms
                    .into_iter()
                    .map(|(c, n)| LinearForm::new(c, n).unwrap())
                    .collect();
                // pin the arity so it survives inference
                let mut top = vec![0; arity];
                top[arity - 1] = 1;
                forms.push(LinearForm::positive(top).unwrap());
                LinearSystem::new(forms).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn system_display_round_trips(s in arb_system()) {
            let back: LinearSystem = s.to_string().parse().unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn quantum_display_round_trips(
            terms in prop::collection::vec((-5i64..6, prop::collection::vec(arb_system(), 0..3)), 1..4)
        ) {
            let q = QuantumSystem::new(
                terms.into_iter().map(|(c, f)| QuantumTerm::new(c, f)).collect(),
            );
            let back: QuantumSystem = q.to_string().parse().unwrap();
            prop_assert_eq!(back, q);
        }
    }
}
