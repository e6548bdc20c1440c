//! Exact and sampled evaluation of `t(L, A)`.
//!
//! Exact evaluation enumerates the free variables in declaration order. Each
//! form is attached to the level of its highest free variable, so it is tested
//! as soon as it is fully bound and failing prefixes are cut. Partial values of
//! every form are carried per level as residue vectors, so extending an
//! assignment by one variable costs one multiply-add per touched form.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{LinearForm, LinearSystem, QuantumSystem};
use crate::abelian::{FiniteAbelianGroup, GroupElement, GroupSubset};
use crate::{Error, Rational, Result};

/// Default cap on predicted primitive evaluations (`|G|^free * forms`).
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub work_budget: u128,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            work_budget: DEFAULT_WORK_BUDGET,
        }
    }
}

/// Value of a single form under a full assignment; the negation flag is ignored.
pub fn eval_form(form: &LinearForm, assignment: &[GroupElement]) -> Result<GroupElement> {
    if assignment.len() != form.arity() {
        return Err(Error::ArityMismatch {
            expected: form.arity(),
            got: assignment.len(),
        });
    }
    let Some(first) = assignment.first() else {
        unreachable!("forms have arity >= 1");
    };
    let mut acc = first.group().zero();
    for (x, &c) in assignment.iter().zip(form.coefficients()) {
        acc = acc.try_add(&x.scale(c))?;
    }
    Ok(acc)
}

const MAX_RANK: usize = 32;

struct Update {
    form: usize,
    coefficient: Vec<u64>,
}

/// Compiled evaluation plan for one system, subset and partial assignment.
pub(crate) struct Plan<'a> {
    group: &'a FiniteAbelianGroup,
    subset: &'a GroupSubset,
    rank: usize,
    forms: usize,
    negated: Vec<bool>,
    /// Free variables that occur in some form, in enumeration order.
    levels: Vec<usize>,
    /// Free variables absent from every form; each contributes a factor `|G|`.
    idle: usize,
    base: Vec<u64>,
    updates: Vec<Vec<Update>>,
    checks: Vec<Vec<usize>>,
    /// Forms with no free variables.
    settled: Vec<usize>,
}

impl<'a> Plan<'a> {
    pub(crate) fn new(
        system: &LinearSystem,
        subset: &'a GroupSubset,
        fixed: &[Option<usize>],
    ) -> Result<Self> {
        let group = subset.group();
        if fixed.len() != system.arity() {
            return Err(Error::ArityMismatch {
                expected: system.arity(),
                got: fixed.len(),
            });
        }
        if let Some(&bad) = fixed.iter().flatten().find(|&&v| v >= group.order()) {
            return Err(Error::InvalidArgument(format!(
                "fixed element index {bad} out of range for {group}"
            )));
        }
        let rank = group.rank();
        if rank > MAX_RANK {
            return Err(Error::InvalidArgument(format!(
                "linear-form evaluation supports at most {MAX_RANK} cyclic factors"
            )));
        }
        let moduli = group.moduli();
        let reduce = |c: i64| -> Vec<u64> {
            moduli.iter().map(|&n| c.rem_euclid(n as i64) as u64).collect()
        };

        let free: Vec<usize> = (0..system.arity()).filter(|&v| fixed[v].is_none()).collect();
        let used = |v: usize| system.forms().iter().any(|f| f.coefficients()[v] != 0);
        let levels: Vec<usize> = free.iter().copied().filter(|&v| used(v)).collect();
        let idle = free.len() - levels.len();
        let level_of: HashMap<usize, usize> =
            levels.iter().enumerate().map(|(l, &v)| (v, l)).collect();

        let mut base = vec![0u64; system.len() * rank];
        let mut updates: Vec<Vec<Update>> = (0..levels.len()).map(|_| Vec::new()).collect();
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
        let mut settled = Vec::new();
        for (f, form) in system.forms().iter().enumerate() {
            let mut last = None;
            for (v, &c) in form.coefficients().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                match fixed[v] {
                    Some(x) => {
                        for (t, (&n, cr)) in moduli.iter().zip(reduce(c)).enumerate() {
                            let r = group.residue(x, t);
                            let slot = &mut base[f * rank + t];
                            *slot = ((*slot as u128 + cr as u128 * r as u128) % n as u128) as u64;
                        }
                    }
                    None => {
                        let l = level_of[&v];
                        updates[l].push(Update {
                            form: f,
                            coefficient: reduce(c),
                        });
                        last = Some(last.map_or(l, |m: usize| m.max(l)));
                    }
                }
            }
            match last {
                Some(l) => checks[l].push(f),
                None => settled.push(f),
            }
        }
        Ok(Plan {
            group,
            subset,
            rank,
            forms: system.len(),
            negated: system.forms().iter().map(LinearForm::is_negated).collect(),
            levels,
            idle,
            base,
            updates,
            checks,
            settled,
        })
    }

    fn predicted_work(&self) -> u128 {
        let n = self.group.order() as u128;
        let mut work = self.forms.max(1) as u128;
        for _ in 0..self.levels.len() {
            work = work.saturating_mul(n);
        }
        work
    }

    fn check_budget(&self, config: &EvalConfig) -> Result<()> {
        let predicted = self.predicted_work();
        if predicted > config.work_budget {
            return Err(Error::WorkCap {
                predicted,
                budget: config.work_budget,
            });
        }
        Ok(())
    }

    #[inline]
    fn passes(&self, partial: &[u64], f: usize) -> bool {
        let strides = self.group.strides();
        let idx: u64 = (0..self.rank)
            .map(|t| partial[f * self.rank + t] * strides[t])
            .sum();
        self.subset.contains_index(idx as usize) != self.negated[f]
    }

    /// Writes `partial` extended by `value` at `level` into `next`; returns
    /// whether every form completed at this level is satisfied.
    #[inline]
    fn extend(&self, level: usize, value: usize, partial: &[u64], next: &mut [u64]) -> bool {
        next.copy_from_slice(partial);
        let moduli = self.group.moduli();
        let mut residues = [0u64; MAX_RANK];
        for (t, r) in residues.iter_mut().enumerate().take(self.rank) {
            *r = self.group.residue(value, t);
        }
        for u in &self.updates[level] {
            for t in 0..self.rank {
                let slot = &mut next[u.form * self.rank + t];
                *slot = (*slot + u.coefficient[t] * residues[t]) % moduli[t];
            }
        }
        self.checks[level].iter().all(|&f| self.passes(next, f))
    }

    fn settled_ok(&self) -> bool {
        self.settled.iter().all(|&f| self.passes(&self.base, f))
    }

    fn scratch(&self) -> Vec<Vec<u64>> {
        vec![vec![0u64; self.forms * self.rank]; self.levels.len()]
    }

    fn count_from(&self, level: usize, partial: &[u64], scratch: &mut [Vec<u64>]) -> u128 {
        if level == self.levels.len() {
            return 1;
        }
        let (head, tail) = scratch.split_at_mut(1);
        let next = &mut head[0];
        let mut total = 0u128;
        for v in 0..self.group.order() {
            if self.extend(level, v, partial, next) {
                total += self.count_from(level + 1, next, tail);
            }
        }
        total
    }

    /// Satisfying assignments of the enumerated (used, free) variables.
    pub(crate) fn count(&self) -> u128 {
        if !self.settled_ok() {
            return 0;
        }
        if self.levels.is_empty() {
            return 1;
        }
        let n = self.group.order();
        if self.predicted_work() < 1 << 14 {
            let mut scratch = self.scratch();
            return self.count_from(0, &self.base, &mut scratch);
        }
        (0..n)
            .into_par_iter()
            .map_init(
                || self.scratch(),
                |scratch, v| {
                    let (head, tail) = scratch.split_at_mut(1);
                    if self.extend(0, v, &self.base, &mut head[0]) {
                        self.count_from(1, &head[0], tail)
                    } else {
                        0
                    }
                },
            )
            .sum()
    }

    fn collect_from(
        &self,
        level: usize,
        partial: &[u64],
        scratch: &mut [Vec<u64>],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if level == self.levels.len() {
            out.push(prefix.clone());
            return;
        }
        let (head, tail) = scratch.split_at_mut(1);
        let next = &mut head[0];
        for v in 0..self.group.order() {
            if self.extend(level, v, partial, next) {
                prefix.push(v);
                self.collect_from(level + 1, next, tail, prefix, out);
                prefix.pop();
            }
        }
    }

    /// All satisfying assignments of the enumerated variables, in
    /// lexicographic order of element indices.
    pub(crate) fn assignments(&self) -> Vec<Vec<usize>> {
        if !self.settled_ok() {
            return Vec::new();
        }
        if self.levels.is_empty() {
            return vec![Vec::new()];
        }
        (0..self.group.order())
            .into_par_iter()
            .map_init(
                || self.scratch(),
                |scratch, v| {
                    let mut out = Vec::new();
                    let (head, tail) = scratch.split_at_mut(1);
                    if self.extend(0, v, &self.base, &mut head[0]) {
                        let mut prefix = vec![v];
                        self.collect_from(1, &head[0], tail, &mut prefix, &mut out);
                    }
                    out
                },
            )
            .flatten()
            .collect()
    }

    /// Tests a full assignment of the enumerated variables.
    fn satisfies(&self, values: &[usize], scratch: &mut [Vec<u64>]) -> bool {
        if !self.settled_ok() {
            return false;
        }
        let mut prev: &[u64] = &self.base;
        let mut rest = scratch;
        for (level, &v) in values.iter().enumerate() {
            let (head, tail) = rest.split_at_mut(1);
            if !self.extend(level, v, prev, &mut head[0]) {
                return false;
            }
            prev = &head[0];
            rest = tail;
        }
        true
    }
}

fn to_fixed_indices(group: &FiniteAbelianGroup, fixed: &[Option<GroupElement>]) -> Result<Vec<Option<usize>>> {
    fixed
        .iter()
        .map(|slot| match slot {
            Some(x) => {
                group.ensure_same(x.group())?;
                Ok(Some(x.index()))
            }
            None => Ok(None),
        })
        .collect()
}

fn density_from(plan: &Plan, config: &EvalConfig) -> Result<Rational> {
    plan.check_budget(config)?;
    let count = plan.count();
    let den = BigUint::from(plan.group.order()).pow(plan.levels.len() as u32);
    Ok(Rational::new(BigInt::from(count), BigInt::from(den)))
}

/// Exact `t(L, A)`: the fraction of `G^k` satisfying every form. The result
/// has denominator dividing `|G|^k`. Refuses with [`Error::WorkCap`] when
/// `|G|^k * |L|` exceeds the budget.
pub fn eval_density(system: &LinearSystem, subset: &GroupSubset, config: &EvalConfig) -> Result<Rational> {
    let fixed = vec![None; system.arity()];
    density_from(&Plan::new(system, subset, &fixed)?, config)
}

/// `t(L, A)` conditioned on the bound variables in `fixed`; the remaining
/// variables are uniform.
pub fn eval_density_fixed(
    system: &LinearSystem,
    subset: &GroupSubset,
    fixed: &[Option<GroupElement>],
    config: &EvalConfig,
) -> Result<Rational> {
    let fixed = to_fixed_indices(subset.group(), fixed)?;
    density_from(&Plan::new(system, subset, &fixed)?, config)
}

/// Index-level variant of [`eval_density_fixed`] returning the raw count of
/// satisfying assignments over the free variables (unused free variables
/// included) together with the number of free variables.
pub fn satisfying_count(
    system: &LinearSystem,
    subset: &GroupSubset,
    fixed: &[Option<usize>],
    config: &EvalConfig,
) -> Result<(BigUint, usize)> {
    let plan = Plan::new(system, subset, fixed)?;
    plan.check_budget(config)?;
    let n = BigUint::from(subset.group().order());
    let count = BigUint::from(plan.count()) * n.pow(plan.idle as u32);
    Ok((count, plan.levels.len() + plan.idle))
}

/// Every full assignment (as element indices) satisfying the system, with the
/// `fixed` variables held at their values. Free variables absent from all forms
/// are enumerated as well. Ordered lexicographically.
pub fn satisfying_assignments(
    system: &LinearSystem,
    subset: &GroupSubset,
    fixed: &[Option<usize>],
    config: &EvalConfig,
) -> Result<Vec<Vec<usize>>> {
    let plan = Plan::new(system, subset, fixed)?;
    let mut widened = plan.predicted_work();
    for _ in 0..plan.idle {
        widened = widened.saturating_mul(subset.group().order() as u128);
    }
    if widened > config.work_budget {
        return Err(Error::WorkCap {
            predicted: widened,
            budget: config.work_budget,
        });
    }
    let partial = plan.assignments();
    let n = subset.group().order();
    let idle_vars: Vec<usize> = (0..system.arity())
        .filter(|&v| fixed[v].is_none() && !plan.levels.contains(&v))
        .collect();
    let mut out = Vec::new();
    for values in partial {
        let mut full: Vec<usize> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
        for (l, &v) in plan.levels.iter().enumerate() {
            full[v] = values[l];
        }
        for code in 0..n.pow(idle_vars.len() as u32) {
            let mut rest = code;
            for &v in idle_vars.iter().rev() {
                full[v] = rest % n;
                rest /= n;
            }
            out.push(full.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Monte Carlo estimate of `t(L, A)` with a Hoeffding 99% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub radius: f64,
    pub hits: u64,
    pub samples: u64,
}

/// `sqrt(ln(200) / (2 n))`: the two-sided 99% Hoeffding half-width.
pub fn hoeffding_radius(samples: u64) -> f64 {
    (200f64.ln() / (2.0 * samples as f64)).sqrt()
}

const CHUNK: u64 = 1 << 12;

/// Uniform sampling of assignments. Chunk `c` of 4096 samples draws from a
/// ChaCha8 stream seeded by `seed` with stream id `c`, so results depend only on
/// `(samples, seed)` and not on thread count.
pub fn estimate_density(
    system: &LinearSystem,
    subset: &GroupSubset,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let fixed = vec![None; system.arity()];
    let plan = Plan::new(system, subset, &fixed)?;
    let n = subset.group().order();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let take = CHUNK.min(samples - c * CHUNK);
            let mut scratch = plan.scratch();
            let mut values = vec![0usize; plan.levels.len()];
            let mut hits = 0;
            for _ in 0..take {
                for v in values.iter_mut() {
                    *v = rng.gen_range(0..n);
                }
                if plan.satisfies(&values, &mut scratch) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(Estimate {
        estimate: hits as f64 / samples as f64,
        radius: hoeffding_radius(samples),
        hits,
        samples,
    })
}

/// `sum_terms c * prod_factors t(L, A)`, each factor on fresh variables.
pub fn eval_quantum(q: &QuantumSystem, subset: &GroupSubset, config: &EvalConfig) -> Result<Rational> {
    let mut cache: HashMap<&LinearSystem, Rational> = HashMap::new();
    let mut total = Rational::from_integer(0.into());
    for term in q.terms() {
        let mut product = Rational::from_integer(term.coefficient.clone());
        for factor in &term.factors {
            if !cache.contains_key(factor) {
                let d = eval_density(factor, subset, config)?;
                cache.insert(factor, d);
            }
            product *= &cache[factor];
        }
        total += product;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use proptest::prelude::*;

    fn cyc(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn set(g: &FiniteAbelianGroup, idx: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(g, idx).unwrap()
    }

    fn sys(s: &str) -> LinearSystem {
        s.parse().unwrap()
    }

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    /// Plain nested enumeration of `G^k`, no pruning.
    fn brute_density(system: &LinearSystem, a: &GroupSubset) -> Rational {
        let g = a.group();
        let n = g.order();
        let k = system.arity();
        let total = n.pow(k as u32);
        let mut hits = 0usize;
        for code in 0..total {
            let mut vals = Vec::with_capacity(k);
            let mut c = code;
            for _ in 0..k {
                vals.push(c % n);
                c /= n;
            }
            let ok = system.forms().iter().all(|f| {
                let mut acc = 0usize;
                for (&c, &x) in f.coefficients().iter().zip(&vals) {
                    acc = g.add_idx(acc, g.scale_idx(c, x));
                }
                a.contains_index(acc) != f.is_negated()
            });
            if ok {
                hits += 1;
            }
        }
        ratio(hits as i64, total as i64)
    }

    #[test]
    fn eval_form_examples() {
        let z9 = cyc(9);
        let f = LinearForm::from_terms(2, &[(1, 1), (0, -2)], false).unwrap();
        let x = [z9.element(&[1]).unwrap(), z9.element(&[2]).unwrap()];
        assert!(eval_form(&f, &x).unwrap().is_zero());
        let f = LinearForm::positive(vec![3, 0]).unwrap();
        let x = [z9.element(&[3]).unwrap(), z9.zero()];
        assert!(eval_form(&f, &x).unwrap().is_zero());
        let zero = LinearForm::positive(vec![0, 0]).unwrap();
        assert!(eval_form(&zero, &x).unwrap().is_zero());
        assert!(eval_form(&zero, &x[..1]).is_err());
    }

    #[test]
    fn density_examples() {
        let z4 = cyc(4);
        assert_eq!(eval_density(&sys("[g1]"), &set(&z4, &[0, 2]), &cfg()).unwrap(), ratio(1, 2));
        let z2 = cyc(2);
        assert_eq!(
            eval_density(&sys("[g1; g2; g1+g2]"), &set(&z2, &[0]), &cfg()).unwrap(),
            ratio(1, 4)
        );
        let energy = sys("[g1; g2; g3; g1+g2-g3]");
        assert_eq!(eval_density(&energy, &set(&z4, &[0, 1]), &cfg()).unwrap(), ratio(6, 64));
        assert_eq!(eval_density(&sys("[!g1]"), &set(&z2, &[0]), &cfg()).unwrap(), ratio(1, 2));
    }

    #[test]
    fn fixed_examples() {
        let z3 = cyc(3);
        let a = set(&z3, &[1]);
        let s = sys("[g1; g2]");
        let one = z3.element(&[1]).unwrap();
        let two = z3.element(&[2]).unwrap();
        let d = eval_density_fixed(&s, &a, &[Some(one.clone()), Some(one.clone())], &cfg()).unwrap();
        assert_eq!(d, ratio(1, 1));
        let d = eval_density_fixed(&s, &a, &[Some(one.clone()), Some(two)], &cfg()).unwrap();
        assert_eq!(d, ratio(0, 1));
        let d = eval_density_fixed(&s, &a, &[Some(one), None], &cfg()).unwrap();
        assert_eq!(d, ratio(1, 3));
    }

    #[test]
    fn work_cap_refuses() {
        let g = cyc(100);
        let a = set(&g, &[0]);
        let s = sys("[g1; g2; g3; g4; g5]");
        let err = eval_density(&s, &a, &cfg()).unwrap_err();
        assert!(matches!(err, Error::WorkCap { .. }));
        let small = EvalConfig { work_budget: 10 };
        assert!(eval_density(&sys("[g1; g2]"), &set(&cyc(4), &[0]), &small).is_err());
    }

    #[test]
    fn unused_variables_cancel() {
        let z5 = cyc(5);
        let a = set(&z5, &[0, 1]);
        let s = sys("[g1; 0g2 + g3]");
        assert_eq!(eval_density(&s, &a, &cfg()).unwrap(), ratio(4, 25));
        let (count, free) = satisfying_count(&s, &a, &[None, None, None], &cfg()).unwrap();
        assert_eq!((count, free), (BigUint::from(20u32), 3));
        let all = satisfying_assignments(&s, &a, &[None, None, None], &cfg()).unwrap();
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matches_brute_force_on_mixed_systems() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let systems = [
            "[g1; g2; g1+g2]",
            "[!(2g1); g2 - 2g1; 2g2 - 4g1]",
            "[g1 - g2; !g3; g1 + g2 + g3]",
            "[3g2; !g1; -g1 - g2]",
        ];
        for text in systems {
            let s = sys(text);
            for mask in (0..64u64).step_by(3) {
                let a = GroupSubset::from_mask(&g, mask).unwrap();
                assert_eq!(eval_density(&s, &a, &cfg()).unwrap(), brute_density(&s, &a), "{text} {a:?}");
            }
        }
    }

    #[test]
    fn product_consistency() {
        // [g1; g2; g1+g2] on (g1,g2) and [g3 - g4; g3] on (g3,g4)
        let left = sys("[g1; g2; g1+g2]");
        let right = sys("[g1 - g2; g1]");
        let joint = sys("[g1; g2; g1+g2; g3 - g4; g3]");
        for n in 2..=5 {
            let g = cyc(n);
            for mask in 0..1u64 << n {
                let a = GroupSubset::from_mask(&g, mask).unwrap();
                let l = eval_density(&left, &a, &cfg()).unwrap();
                let r = eval_density(&right, &a, &cfg()).unwrap();
                assert_eq!(eval_density(&joint, &a, &cfg()).unwrap(), l * r);
            }
        }
    }

    #[test]
    fn quantum_examples() {
        let z4 = cyc(4);
        let half = set(&z4, &[1, 3]);
        let q: QuantumSystem = "[g1]*[g1]".parse().unwrap();
        assert_eq!(eval_quantum(&q, &half, &cfg()).unwrap(), ratio(1, 4));
        let q: QuantumSystem = "2[g1] - [g1]".parse().unwrap();
        let a = set(&z4, &[0, 1, 2]);
        assert_eq!(eval_quantum(&q, &a, &cfg()).unwrap(), a.density());
        // pairs (0,0), (0,1), (1,0): sum of r_A over A is 1 + 2
        let q: QuantumSystem = "[g1; g2; g1+g2]".parse().unwrap();
        assert_eq!(eval_quantum(&q, &set(&z4, &[0, 1]), &cfg()).unwrap(), ratio(3, 16));
        let q: QuantumSystem = "7 - [g1]".parse().unwrap();
        assert_eq!(eval_quantum(&q, &GroupSubset::empty(&z4), &cfg()).unwrap(), ratio(7, 1));
    }

    #[test]
    fn estimate_examples() {
        let g = cyc(10);
        let s = sys("[g1]");
        let e = estimate_density(&s, &GroupSubset::full(&g), 1000, 1).unwrap();
        assert_eq!(e.estimate, 1.0);
        let e = estimate_density(&s, &GroupSubset::empty(&g), 1000, 1).unwrap();
        assert_eq!(e.estimate, 0.0);
        assert!(estimate_density(&s, &GroupSubset::full(&g), 0, 1).is_err());
        let a = set(&g, &[0, 1, 2]);
        let x = estimate_density(&s, &a, 10_000, 42).unwrap();
        assert_eq!(x, estimate_density(&s, &a, 10_000, 42).unwrap());
        assert!((x.estimate - 0.3).abs() <= x.radius);
        assert!((hoeffding_radius(100_000) - (200f64.ln() / 200_000.0).sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn negation_complements(coefs in prop::collection::vec(-4i64..5, 1..3), mask in 0u64..64) {
            let g = cyc(6);
            let a = GroupSubset::from_mask(&g, mask).unwrap();
            let f = LinearForm::positive(coefs).unwrap();
            let pos = LinearSystem::new(vec![f.clone()]).unwrap();
            let neg = LinearSystem::new(vec![f.negate()]).unwrap();
            let sum = eval_density(&pos, &a, &cfg()).unwrap() + eval_density(&neg, &a, &cfg()).unwrap();
            prop_assert_eq!(sum, ratio(1, 1));
        }

        #[test]
        fn denominator_divides_group_power(mask in 0u64..256, c in -3i64..4) {
            let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
            let a = GroupSubset::from_mask(&g, mask).unwrap();
            let s = LinearSystem::new(vec![
                LinearForm::positive(vec![1, c]).unwrap(),
                LinearForm::new(vec![c, 1], true).unwrap(),
            ]).unwrap();
            let d = eval_density(&s, &a, &cfg()).unwrap();
            let power = BigInt::from(64);
            prop_assert_eq!(&power % d.denom(), BigInt::from(0));
        }
    }
}
