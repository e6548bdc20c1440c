//! Classical sumset and energy inequalities with exact left-hand sides, and
//! exhaustive sweeps over all subsets (or subset pairs) of a small group.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::energy_upper_bound;
use crate::abelian::{FiniteAbelianGroup, GroupSubset};
use crate::{Error, Rational, Result};

/// One inequality instance: `lhs >= 0` is the claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub check: &'static str,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub lhs: Rational,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(check: &'static str, lhs: Rational) -> Self {
        let holds = !lhs.is_negative();
        InequalityCheck { check, lhs, holds }
    }
}

/// `α(A+B) - α(A) - α(B) + α(H)` with `H` the stabilizer of `A+B`
/// (the stabilizer of the empty set is the whole group).
pub fn check_kneser(a: &GroupSubset, b: &GroupSubset) -> Result<InequalityCheck> {
    let sum = a.sumset(b)?;
    let h = sum.stabilizer();
    let lhs = sum.density() - a.density() - b.density() + h.density();
    Ok(InequalityCheck::new("kneser", lhs))
}

/// `α(A+B)^(r+s) - α(A)^(r+s-1) α(rB - sB)`.
pub fn check_plunnecke_ruzsa(a: &GroupSubset, b: &GroupSubset, r: usize, s: usize) -> Result<InequalityCheck> {
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    if r + s == 0 {
        return Err(Error::InvalidArgument("r + s must be >= 1".into()));
    }
    let e = (r + s) as i32;
    let sum = a.sumset(b)?;
    let rb_sb = b.signed_iterated_sumset(r, s)?;
    let lhs = num_traits::pow(sum.density(), e as usize)
        - num_traits::pow(a.density(), (e - 1) as usize) * rb_sb.density();
    Ok(InequalityCheck::new("plunnecke_ruzsa", lhs))
}

/// `E(A) α(A+A) - α(A)^4` with `E` the normalised additive energy.
pub fn check_energy_doubling(a: &GroupSubset) -> Result<InequalityCheck> {
    let sum = a.sumset(a)?;
    let alpha = a.density();
    let lhs = a.additive_energy() * sum.density() - num_traits::pow(alpha, 4);
    Ok(InequalityCheck::new("energy_doubling", lhs))
}

/// `energy_upper_bound(α(A)) - E(A)`.
pub fn check_energy_bound(a: &GroupSubset) -> Result<InequalityCheck> {
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    let lhs = energy_upper_bound(&a.density())? - a.additive_energy();
    Ok(InequalityCheck::new("energy_bound", lhs))
}

/// Outcome of checking an inequality on every subset (or pair) of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub check: String,
    pub instance: String,
    pub checked: u64,
    /// Instances outside the inequality's hypotheses (e.g. empty `A`).
    pub vacuous: u64,
    pub violations: u64,
    /// Smallest left-hand side seen.
    #[serde(serialize_with = "crate::json::ser_opt_rational")]
    pub min_lhs: Option<Rational>,
    /// Up to five violating instances, each a list of subsets as residue tuples.
    pub witnesses: Vec<Vec<Vec<Vec<u64>>>>,
}

impl SweepReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

const MAX_WITNESSES: usize = 5;
/// Largest group order for an exhaustive subset sweep (`2^order` subsets).
pub const MAX_SWEEP_ORDER: usize = 24;

#[derive(Default)]
struct Acc {
    checked: u64,
    vacuous: u64,
    violations: u64,
    min_lhs: Option<Rational>,
    witnesses: Vec<(u64, Vec<Vec<Vec<u64>>>)>,
}

impl Acc {
    fn add(&mut self, key: u64, sets: &[&GroupSubset], outcome: Option<InequalityCheck>) {
        self.checked += 1;
        let Some(c) = outcome else {
            self.vacuous += 1;
            return;
        };
        if self.min_lhs.as_ref().is_none_or(|m| c.lhs < *m) {
            self.min_lhs = Some(c.lhs.clone());
        }
        if !c.holds {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                let w = sets
                    .iter()
                    .map(|s| s.elements().iter().map(|x| x.residues().to_vec()).collect())
                    .collect();
                self.witnesses.push((key, w));
            }
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.checked += other.checked;
        self.vacuous += other.vacuous;
        self.violations += other.violations;
        if let Some(m) = other.min_lhs {
            if self.min_lhs.as_ref().is_none_or(|s| m < *s) {
                self.min_lhs = Some(m);
            }
        }
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_key(|w| w.0);
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }

    fn report(self, check: &str, group: &FiniteAbelianGroup) -> SweepReport {
        SweepReport {
            check: check.to_string(),
            instance: group.to_string(),
            checked: self.checked,
            vacuous: self.vacuous,
            violations: self.violations,
            min_lhs: self.min_lhs,
            witnesses: self.witnesses.into_iter().map(|w| w.1).collect(),
        }
    }
}

fn sweep_size(group: &FiniteAbelianGroup, sets: u32) -> Result<u64> {
    let n = group.order();
    if n * sets as usize > MAX_SWEEP_ORDER {
        return Err(Error::WorkCap {
            predicted: 1u128 << (n * sets as usize).min(127),
            budget: 1u128 << MAX_SWEEP_ORDER,
        });
    }
    Ok(1u64 << (n * sets as usize))
}

/// Applies `check` to every subset; `Ok(None)` marks an instance outside the
/// hypotheses. Parallel over mask ranges, merged in mask order.
pub fn sweep_subsets<F>(name: &str, group: &FiniteAbelianGroup, check: F) -> Result<SweepReport>
where
    F: Fn(&GroupSubset) -> Result<Option<InequalityCheck>> + Sync,
{
    let total = sweep_size(group, 1)?;
    let acc = (0..total)
        .into_par_iter()
        .try_fold(Acc::default, |mut acc, mask| {
            let a = GroupSubset::from_mask(group, mask)?;
            acc.add(mask, &[&a], check(&a)?);
            Ok::<_, Error>(acc)
        })
        .try_reduce(Acc::default, |x, y| Ok(x.merge(y)))?;
    Ok(acc.report(name, group))
}

/// Applies `check` to every ordered pair of subsets.
pub fn sweep_pairs<F>(name: &str, group: &FiniteAbelianGroup, check: F) -> Result<SweepReport>
where
    F: Fn(&GroupSubset, &GroupSubset) -> Result<Option<InequalityCheck>> + Sync,
{
    let per = sweep_size(group, 1)?;
    sweep_size(group, 2)?;
    let acc = (0..per)
        .into_par_iter()
        .try_fold(Acc::default, |mut acc, ma| {
            let a = GroupSubset::from_mask(group, ma)?;
            for mb in 0..per {
                let b = GroupSubset::from_mask(group, mb)?;
                acc.add(ma * per + mb, &[&a, &b], check(&a, &b)?);
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(Acc::default, |x, y| Ok(x.merge(y)))?;
    Ok(acc.report(name, group))
}
