//! Systems of linear forms over `G^k` and their densities `t(L, A)`.
//!
//! A [`LinearForm`] is an integer combination `c_1 g_1 + ... + c_k g_k`; a
//! negated form asks for its value to lie outside `A`. A [`LinearSystem`]
//! holds forms of a common arity, and `t(L, A)` is the probability that a
//! uniform assignment in `G^k` satisfies all of them. [`QuantumSystem`]s are
//! integer combinations of formal products of systems, each factor evaluated on
//! its own fresh variables.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub use eval::{
    estimate_density, eval_density, eval_density_fixed, eval_form, eval_quantum,
    hoeffding_radius, satisfying_assignments, satisfying_count, Estimate, EvalConfig,
    DEFAULT_WORK_BUDGET,
};

/// `sum_i c_i g_i`, optionally negated (the value must avoid `A`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coefficients: Vec<i64>,
    negated: bool,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>, negated: bool) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("a linear form needs arity >= 1".into()));
        }
        Ok(LinearForm {
            coefficients,
            negated,
        })
    }

    pub fn positive(coefficients: Vec<i64>) -> Result<Self> {
        Self::new(coefficients, false)
    }

    /// Builds a form from sparse `(variable, coefficient)` pairs, variables 0-based.
    /// Repeated variables accumulate.
    pub fn from_terms(arity: usize, terms: &[(usize, i64)], negated: bool) -> Result<Self> {
        let mut coefficients = vec![0i64; arity];
        for &(var, c) in terms {
            let slot = coefficients.get_mut(var).ok_or(Error::ArityMismatch {
                expected: arity,
                got: var + 1,
            })?;
            *slot += c;
        }
        Self::new(coefficients, negated)
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn negate(&self) -> Self {
        LinearForm {
            coefficients: self.coefficients.clone(),
            negated: !self.negated,
        }
    }

    /// Same form over `arity >= self.arity()` variables.
    pub fn with_arity(&self, arity: usize) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.resize(arity.max(self.arity()), 0);
        LinearForm {
            coefficients,
            negated: self.negated,
        }
    }

    /// Highest variable with a nonzero coefficient.
    pub fn highest_variable(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|&c| c != 0)
    }

    fn fmt_sum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            match (first, c < 0) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "g{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!(")?;
            self.fmt_sum(f)?;
            f.write_str(")")
        } else {
            self.fmt_sum(f)
        }
    }
}

/// A nonempty list of forms sharing one arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearSystem {
    arity: usize,
    forms: Vec<LinearForm>,
}

/// Findings from [`LinearSystem::canonicalize`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub duplicates_removed: usize,
    /// Forms present both plain and negated; such a system has density 0.
    pub contradictions: Vec<LinearForm>,
}

impl LinearSystem {
    pub fn new(forms: Vec<LinearForm>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::InvalidArgument("a linear system needs at least one form".into()));
        };
        let arity = first.arity();
        if let Some(bad) = forms.iter().find(|f| f.arity() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: bad.arity(),
            });
        }
        Ok(LinearSystem { arity, forms })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Pads every form to `arity` variables (never shrinks).
    pub fn with_arity(&self, arity: usize) -> Self {
        let arity = arity.max(self.arity);
        LinearSystem {
            arity,
            forms: self.forms.iter().map(|f| f.with_arity(arity)).collect(),
        }
    }

    /// Concatenation of both form lists over the larger arity.
    pub fn union(&self, other: &LinearSystem) -> Self {
        let arity = self.arity.max(other.arity);
        let mut forms = self.with_arity(arity).forms;
        forms.extend(other.with_arity(arity).forms);
        LinearSystem { arity, forms }
    }

    /// Sorts the forms and drops repeated positive forms. Reports forms that
    /// occur both plain and negated.
    pub fn canonicalize(&self) -> (LinearSystem, Diagnostics) {
        let mut forms = self.forms.clone();
        forms.sort();
        let before = forms.len();
        forms.dedup_by(|a, b| !a.negated && a == b);
        let positives: BTreeSet<&[i64]> = forms
            .iter()
            .filter(|f| !f.negated)
            .map(|f| f.coefficients.as_slice())
            .collect();
        let mut contradictions: Vec<LinearForm> = forms
            .iter()
            .filter(|f| f.negated && positives.contains(f.coefficients.as_slice()))
            .map(LinearForm::negate)
            .collect();
        contradictions.dedup();
        let diagnostics = Diagnostics {
            duplicates_removed: before - forms.len(),
            contradictions,
        };
        (
            LinearSystem {
                arity: self.arity,
                forms,
            },
            diagnostics,
        )
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, form) in self.forms.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{form}")?;
        }
        f.write_str("]")
    }
}

/// One term `c * L_1 * ... * L_r` of a quantum system. An empty factor list
/// is the empty product and contributes `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantumTerm {
    pub coefficient: BigInt,
    pub factors: Vec<LinearSystem>,
}

impl QuantumTerm {
    pub fn new(coefficient: impl Into<BigInt>, factors: Vec<LinearSystem>) -> Self {
        QuantumTerm {
            coefficient: coefficient.into(),
            factors,
        }
    }
}

/// `sum_i a_i t(L_i1 * ... * L_ir, A)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuantumSystem {
    terms: Vec<QuantumTerm>,
}

impl QuantumSystem {
    pub fn new(terms: Vec<QuantumTerm>) -> Self {
        QuantumSystem { terms }
    }

    pub fn single(system: LinearSystem) -> Self {
        QuantumSystem::new(vec![QuantumTerm::new(1, vec![system])])
    }

    pub fn terms(&self) -> &[QuantumTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: QuantumTerm) {
        self.terms.push(term);
    }
}

impl fmt::Display for QuantumSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coefficient.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = term.coefficient.abs();
            if term.factors.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            for (j, factor) in term.factors.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{factor}")?;
            }
        }
        Ok(())
    }
}

impl QuantumSystem {
    /// Drops zero-coefficient terms.
    pub fn prune(mut self) -> Self {
        self.terms.retain(|t| !t.coefficient.is_zero());
        self
    }
}
