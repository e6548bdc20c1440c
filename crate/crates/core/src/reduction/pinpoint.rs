//! Exhaustive check of the pinpointing property on `Z_{(k+1)^2}` with
//! `S = {0, ..., k}`: `L(g) ⊆ S` forces `g_j = j g_1` and `g_j != 0`, and
//! `M(g) ⊆ S` forces `g_j = j`.

use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

pub const DEFAULT_PINPOINT_MAX_K: usize = 4;

const MAX_EXAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinpointReport {
    pub k: usize,
    pub modulus: u64,
    pub checked: u64,
    pub l_satisfied: u64,
    pub m_satisfied: u64,
    pub m_solutions: Vec<Vec<u64>>,
    pub violations: u64,
    pub violation_examples: Vec<Vec<u64>>,
}

impl PinpointReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    l: u64,
    m: u64,
    m_solutions: Vec<Vec<u64>>,
    violations: u64,
    examples: Vec<Vec<u64>>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.l += other.l;
        self.m += other.m;
        self.m_solutions.extend(other.m_solutions);
        self.violations += other.violations;
        self.examples.extend(other.examples);
        self.examples.truncate(MAX_EXAMPLES);
        self
    }
}

pub fn verify_pinpoint(k: usize, max_k: usize) -> Result<PinpointReport> {
    if k < 1 {
        return Err(Error::InvalidArgument("pinpoint needs k >= 1".into()));
    }
    if k > max_k {
        return Err(Error::WorkCap {
            predicted: ((k as u128 + 1).pow(2)).saturating_pow(k as u32),
            budget: ((max_k as u128 + 1).pow(2)).saturating_pow(max_k as u32),
        });
    }
    let n = ((k + 1) * (k + 1)) as u64;
    let kk = k as u64;
    let in_s = |x: u64| x <= kk;
    let l_holds = |g: &[u64]| -> bool {
        if in_s((kk + 1) * g[0] % n) {
            return false;
        }
        (1..=kk + 2).all(|p| {
            (2..=k).all(|j| {
                let v = (g[j - 1] + n * n - (j as u64 * g[0]) % n) % n;
                in_s(p * v % n)
            })
        })
    };

    let tally = (0..n)
        .into_par_iter()
        .map(|g1| {
            let mut t = Tally::default();
            let mut g = vec![0u64; k];
            g[0] = g1;
            loop {
                t.checked += 1;
                if l_holds(&g) {
                    t.l += 1;
                    let mut ok = (1..=k).all(|j| g[j - 1] == (j as u64 * g[0]) % n && g[j - 1] != 0);
                    if g.iter().all(|&x| in_s(x)) {
                        t.m += 1;
                        t.m_solutions.push(g.clone());
                        ok &= (1..=k).all(|j| g[j - 1] == j as u64);
                    }
                    if !ok {
                        t.violations += 1;
                        if t.examples.len() < MAX_EXAMPLES {
                            t.examples.push(g.clone());
                        }
                    }
                }
                // odometer over g_2..g_k
                let mut pos = k;
                loop {
                    pos -= 1;
                    if pos == 0 {
                        return t;
                    }
                    g[pos] += 1;
                    if g[pos] < n {
                        break;
                    }
                    g[pos] = 0;
                }
            }
        })
        .reduce(Tally::default, Tally::merge);

    Ok(PinpointReport {
        k,
        modulus: n,
        checked: tally.checked,
        l_satisfied: tally.l,
        m_satisfied: tally.m,
        m_solutions: tally.m_solutions,
        violations: tally.violations,
        violation_examples: tally.examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{FiniteAbelianGroup, GroupSubset};
    use crate::linform::{satisfying_assignments, EvalConfig};
    use crate::reduction::{build_l, build_m};

    #[test]
    fn small_k() {
        for (k, checked) in [(1, 4), (2, 81), (3, 4096)] {
            let r = verify_pinpoint(k, DEFAULT_PINPOINT_MAX_K).unwrap();
            assert_eq!(r.checked, checked);
            assert!(r.passes());
            assert_eq!(r.m_solutions, vec![(1..=k as u64).collect::<Vec<_>>()]);
        }
        assert!(verify_pinpoint(5, DEFAULT_PINPOINT_MAX_K).is_err());
    }

    #[test]
    fn agrees_with_form_evaluator() {
        for k in 2..=3 {
            let n = ((k + 1) * (k + 1)) as u64;
            let g = FiniteAbelianGroup::cyclic(n).unwrap();
            let s = GroupSubset::from_predicate(&g, |i| i <= k);
            let cfg = EvalConfig::default();
            let l = satisfying_assignments(&build_l(k).unwrap(), &s, &vec![None; k], &cfg).unwrap();
            let m = satisfying_assignments(&build_m(k).unwrap(), &s, &vec![None; k], &cfg).unwrap();
            let r = verify_pinpoint(k, 4).unwrap();
            assert_eq!(r.l_satisfied, l.len() as u64);
            assert_eq!(r.m_satisfied, m.len() as u64);
        }
    }
}
