//! Random instances for the edge/triangle identity: uniform random subsets of
//! density about 1/2, each paired with a uniform `g` satisfying `M(g) ∈ A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graph::{verify_homdensity_identity_with, HomDensityReport};
use super::systems::ReductionSystems;
use crate::abelian::{FiniteAbelianGroup, GroupSubset};
use crate::linform::{satisfying_assignments, EvalConfig};
use crate::{Error, Result};

const MAX_RESAMPLES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomDensitySweep {
    pub group: String,
    pub k: usize,
    pub seed: u64,
    pub pairs: usize,
    /// Subsets drawn and discarded because no `g` had `M(g) ∈ A`.
    pub resampled: u64,
    pub mismatches: usize,
    pub reports: Vec<HomDensityReport>,
}

impl HomDensitySweep {
    pub fn passes(&self) -> bool {
        self.mismatches == 0 && self.reports.len() == self.pairs
    }
}

pub fn random_half_subset(group: &FiniteAbelianGroup, rng: &mut impl Rng) -> GroupSubset {
    GroupSubset::from_predicate(group, |_| rng.gen_bool(0.5))
}

pub fn verify_homdensity_random(
    group: &FiniteAbelianGroup,
    k: usize,
    pairs: usize,
    seed: u64,
    config: &EvalConfig,
) -> Result<HomDensitySweep> {
    let systems = ReductionSystems::build(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(pairs);
    let mut resampled = 0;
    while reports.len() < pairs {
        let a = random_half_subset(group, &mut rng);
        let good = satisfying_assignments(&systems.m, &a, &vec![None; k], config)?;
        if good.is_empty() {
            resampled += 1;
            if resampled > MAX_RESAMPLES {
                return Err(Error::InvalidArgument(format!(
                    "no subset with a solution of M(g) in A after {MAX_RESAMPLES} draws"
                )));
            }
            continue;
        }
        let g = &good[rng.gen_range(0..good.len())];
        let j = rng.gen_range(1..=k);
        reports.push(verify_homdensity_identity_with(&systems, &a, g, j, config)?);
    }
    Ok(HomDensitySweep {
        group: group.to_string(),
        k,
        seed,
        pairs,
        resampled,
        mismatches: reports.iter().filter(|r| !r.holds).count(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let g = FiniteAbelianGroup::new(&[9, 2]).unwrap();
        let r = verify_homdensity_random(&g, 2, 8, 7, &EvalConfig::default()).unwrap();
        assert!(r.passes());
        assert!(r.reports.iter().all(|x| !x.vacuous));
        let again = verify_homdensity_random(&g, 2, 8, 7, &EvalConfig::default()).unwrap();
        assert_eq!(r, again);
    }
}
