//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! Exponent vectors are dense over the polynomial's variable list. Terms are
//! kept in graded-lexicographic order and serialised highest term first, so the
//! textual form of a polynomial is canonical.

mod parse;
mod transform;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

pub use transform::{
    transform_p_from_q, transform_q_from_p, transform_qstar, vet_vars, xy_vars, QFromP,
};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct IntPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Sort key placing `x`, `y`, `v`, `e`, `t` families first, then by index.
fn var_key(name: &str) -> (usize, String, u64) {
    let letters: String = name.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let index = name[letters.len()..].parse().unwrap_or(0);
    let family = ["x", "y", "v", "e", "t"]
        .iter()
        .position(|f| *f == letters)
        .unwrap_or(5);
    (family, letters, index)
}

fn canonical_vars<'a>(names: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    let mut out: Vec<String> = names.into_iter().cloned().collect();
    out.sort_by_key(|n| var_key(n));
    out.dedup();
    out
}

impl IntPolynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        IntPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: impl Into<BigInt>) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        p.add_term(Monomial(vec![0; n]), c.into());
        p
    }

    /// The polynomial `name` over `vars`.
    pub fn variable(vars: Vec<String>, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(Monomial(exps), BigInt::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms combine.
    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(Error::ArityMismatch {
                    expected: p.vars.len(),
                    got: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    /// Maximum total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_default()
    }

    /// Variables that occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-expresses the polynomial over `vars`, which must contain every used variable.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            match vars.iter().position(|v| v == name) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|m| m.0[i] == 0) => map.push(None),
                None => return Err(Error::UnknownVariable(name.clone())),
            }
        }
        let mut out = Self::zero(vars.to_vec());
        for (m, c) in &self.terms {
            let mut exps = vec![0; vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] = e;
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial with unused variables dropped.
    pub fn normalized(&self) -> Self {
        let used = self.used_vars();
        self.with_vars(&used).expect("used variables are kept")
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = canonical_vars(self.vars.iter().chain(&other.vars));
        (
            self.with_vars(&vars).expect("union contains all"),
            other.with_vars(&vars).expect("union contains all"),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `point`, given in variable order.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Exact value with variables looked up by name; unused variables may be omitted.
    pub fn eval_named(&self, values: &[(&str, Rational)]) -> Result<Rational> {
        let point: Vec<Rational> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, name)| {
                match values.iter().find(|(n, _)| n == name) {
                    Some((_, v)) => Ok(v.clone()),
                    None if self.terms.keys().all(|m| m.0[i] == 0) => Ok(Rational::zero()),
                    None => Err(Error::UnknownVariable(name.clone())),
                }
            })
            .collect::<Result<_>>()?;
        self.eval(&point)
    }

    /// Formal derivative with respect to `var`.
    pub fn partial_derivative(&self, var: &str) -> Result<Self> {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * BigInt::from(e));
        }
        Ok(out)
    }

    /// `sum |c|`: an upper bound for `|P|` on `[0,1]^k`, since every monomial
    /// has magnitude at most 1 there.
    pub fn sup_bound_unit_box(&self) -> BigInt {
        self.terms.values().map(BigInt::abs).sum()
    }

    /// `max |P|` over the grid `{0, 1/s, ..., 1}^k`. The number of points is
    /// capped at `max_points` by coarsening `s`.
    pub fn grid_sup_estimate(&self, steps: u32, max_points: u64) -> Rational {
        let k = self.vars.len() as u32;
        let mut s = steps.max(1) as u64;
        while s > 1 && (s + 1).checked_pow(k).is_none_or(|p| p > max_points) {
            s -= 1;
        }
        let per_axis = s + 1;
        let total = per_axis.pow(k);
        let mut best = Rational::zero();
        let mut point = vec![Rational::zero(); k as usize];
        for code in 0..total {
            let mut rest = code;
            for x in point.iter_mut() {
                *x = Rational::new((rest % per_axis).into(), s.into());
                rest /= per_axis;
            }
            let v = self.eval(&point).expect("point has matching length").abs();
            if v > best {
                best = v;
            }
        }
        best
    }
}

impl PartialEq for IntPolynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = (self.normalized(), other.normalized());
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for IntPolynomial {}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (mut a, b) = self.aligned(rhs);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (a, b) = self.aligned(rhs);
        let mut out = IntPolynomial::zero(a.vars.clone());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let exps = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;

            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (name, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() || !mag.is_one() {
                factors.insert(0, mag.to_string());
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use proptest::prelude::*;

    fn poly(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    #[test]
    fn eval_examples() {
        let p = poly("x1^2 - y1");
        assert_eq!(p.eval(&[q(2), q(3)]).unwrap(), q(1));
        assert_eq!(p.num_terms(), 2);
        let p = poly("x1*x2 - 3*x1^2*x2^2 + 7");
        assert_eq!(p.eval(&[q(0), q(0)]).unwrap(), q(7));
        assert_eq!(poly("x1*x2 - 3*x1^2*x2^2").eval(&[q(1), q(1)]).unwrap(), q(-2));
        assert!(p.eval(&[q(1)]).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(poly("x1^3").partial_derivative("x1").unwrap(), poly("3x1^2"));
        assert!(poly("y1 + x1").partial_derivative("x1").unwrap() == poly("1"));
        assert!(poly("y1").with_vars(&["x1".into(), "y1".into()]).unwrap().partial_derivative("x1").unwrap().is_zero());
        assert_eq!(
            poly("x1^2*x2 - x1").partial_derivative("x1").unwrap(),
            poly("2x1*x2 - 1")
        );
        assert!(matches!(
            poly("x1").partial_derivative("x9"),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn sup_bound_examples() {
        assert_eq!(poly("2x1 - 3x2").sup_bound_unit_box(), BigInt::from(5));
        assert_eq!(poly("7").sup_bound_unit_box(), BigInt::from(7));
        assert_eq!(poly("x1^2*x2").sup_bound_unit_box(), BigInt::from(1));
        assert_eq!(poly("2x1 - 3x2").grid_sup_estimate(10, 10_000), q(3));
    }

    #[test]
    fn canonical_display() {
        let p = poly("y1 - 3 + x1^2*x2 + x1");
        assert_eq!(p.to_string(), "x1^2*x2 + x1 + y1 - 3");
        assert_eq!(IntPolynomial::zero(vec![]).to_string(), "0");
        assert_eq!(poly("-x1").to_string(), "-x1");
        assert_eq!(poly("x1 - x1").degree(), 0);
    }

    #[test]
    fn equality_ignores_unused_variables() {
        let a = poly("x1 + 1");
        let b = a.with_vars(&["x1".into(), "y3".into()]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, poly("x1 + 2"));
    }

    fn arb_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..6), 0..6).prop_map(
            |terms| {
                let vars = vec!["x1".to_string(), "x2".into(), "y1".into()];
                IntPolynomial::from_terms(vars, terms.into_iter().map(|(e, c)| (e, c.into())))
                    .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn display_round_trips(a in arb_poly()) {
            let back: IntPolynomial = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn eval_is_a_ring_map(a in arb_poly(), b in arb_poly(), x in -4i64..5, y in 1i64..4, z in -3i64..3) {
            let point = [ratio(x, y), ratio(z, 2), ratio(y, 3)];
            let prod = (&a * &b).eval(&point).unwrap();
            prop_assert_eq!(prod, a.eval(&point).unwrap() * b.eval(&point).unwrap());
        }
    }
}
