use std::fmt;

use rayon::prelude::*;

use super::{FiniteAbelianGroup, GroupElement};
use crate::{Error, Rational, Result};

/// An immutable subset of a group, stored as a bit vector over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSubset {
    group: FiniteAbelianGroup,
    bits: Vec<u64>,
    size: usize,
}

/// `r_A(x)` for every `x`, indexed by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationCounts {
    group: FiniteAbelianGroup,
    counts: Vec<u64>,
}

impl RepresentationCounts {
    pub fn get(&self, x: &GroupElement) -> u64 {
        self.counts[x.index()]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `sum_x r_A(x)^2`.
    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }
}

const WORD: usize = 64;

fn words_for(order: usize) -> usize {
    order.div_ceil(WORD)
}

impl GroupSubset {
    fn from_bits(group: FiniteAbelianGroup, bits: Vec<u64>) -> Self {
        let size = bits.iter().map(|w| w.count_ones() as usize).sum();
        GroupSubset { group, bits, size }
    }

    pub fn empty(group: &FiniteAbelianGroup) -> Self {
        Self::from_bits(group.clone(), vec![0; words_for(group.order())])
    }

    pub fn full(group: &FiniteAbelianGroup) -> Self {
        Self::from_predicate(group, |_| true)
    }

    pub fn singleton(x: &GroupElement) -> Self {
        Self::from_index_iter(x.group(), std::iter::once(x.index()))
    }

    pub fn from_predicate(group: &FiniteAbelianGroup, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut bits = vec![0u64; words_for(group.order())];
        for i in 0..group.order() {
            if keep(i) {
                bits[i / WORD] |= 1 << (i % WORD);
            }
        }
        Self::from_bits(group.clone(), bits)
    }

    /// Subset whose element indices are given; indices must be `< order`.
    pub fn from_indices(group: &FiniteAbelianGroup, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= group.order()) {
            return Err(Error::InvalidArgument(format!(
                "element index {bad} out of range for {group}"
            )));
        }
        Ok(Self::from_index_iter(group, indices.iter().copied()))
    }

    pub(crate) fn from_index_iter(
        group: &FiniteAbelianGroup,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut bits = vec![0u64; words_for(group.order())];
        for i in indices {
            bits[i / WORD] |= 1 << (i % WORD);
        }
        Self::from_bits(group.clone(), bits)
    }

    pub fn from_elements(group: &FiniteAbelianGroup, elements: &[GroupElement]) -> Result<Self> {
        for x in elements {
            group.ensure_same(x.group())?;
        }
        Ok(Self::from_index_iter(group, elements.iter().map(GroupElement::index)))
    }

    /// Subset encoded by the low `order` bits of `mask` (bit `i` is element `i`).
    /// Used to sweep all subsets of groups of order at most 64.
    pub fn from_mask(group: &FiniteAbelianGroup, mask: u64) -> Result<Self> {
        let order = group.order();
        if order > WORD {
            return Err(Error::InvalidArgument(format!(
                "mask subsets need order <= 64, got {order}"
            )));
        }
        let mask = if order == WORD { mask } else { mask & ((1u64 << order) - 1) };
        Ok(Self::from_bits(group.clone(), vec![mask]))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_full(&self) -> bool {
        self.size == self.group.order()
    }

    /// `|A| / |G|`, exact.
    pub fn density(&self) -> Rational {
        Rational::new(self.size.into(), self.group.order().into())
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        (self.bits[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.group() == &self.group && self.contains_index(x.index())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * WORD + bit)
            })
        })
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices().map(|i| self.group.element_at(i)).collect()
    }

    pub fn complement(&self) -> Self {
        Self::from_predicate(&self.group, |i| !self.contains_index(i))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(Self::from_bits(self.group.clone(), bits))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(Self::from_bits(self.group.clone(), bits))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect();
        Ok(Self::from_bits(self.group.clone(), bits))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.group == other.group && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `self + x`.
    pub fn translate_idx(&self, x: usize) -> Self {
        Self::from_index_iter(&self.group, self.indices().map(|a| self.group.add_idx(a, x)))
    }

    pub fn translate(&self, x: &GroupElement) -> Result<Self> {
        self.group.ensure_same(x.group())?;
        Ok(self.translate_idx(x.index()))
    }

    /// `-A`.
    pub fn negate(&self) -> Self {
        Self::from_index_iter(&self.group, self.indices().map(|a| self.group.neg_idx(a)))
    }

    /// The sumset `A + B`; empty when either operand is empty.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let g = &self.group;
        let mut bits = vec![0u64; self.bits.len()];
        let mut found = 0usize;
        'outer: for a in self.indices() {
            for b in other.indices() {
                let s = g.add_idx(a, b);
                let mask = 1u64 << (s % WORD);
                if bits[s / WORD] & mask == 0 {
                    bits[s / WORD] |= mask;
                    found += 1;
                    if found == g.order() {
                        break 'outer;
                    }
                }
            }
        }
        Ok(Self::from_bits(g.clone(), bits))
    }

    /// `rB - sB`: `r` copies of `B` added, `s` copies subtracted. Needs `r + s >= 1`.
    pub fn signed_iterated_sumset(&self, r: usize, s: usize) -> Result<Self> {
        if r + s == 0 {
            return Err(Error::InvalidArgument(
                "iterated sumset needs r + s >= 1".into(),
            ));
        }
        let negated = self.negate();
        let mut copies = std::iter::repeat_n(self, r).chain(std::iter::repeat_n(&negated, s));
        let mut acc = copies.next().expect("r + s >= 1").clone();
        for next in copies {
            acc = acc.sumset(next)?;
        }
        Ok(acc)
    }

    /// `{g : g + S = S}`. Every `g` fixes the empty set, so the empty set has
    /// stabilizer `G`.
    pub fn stabilizer(&self) -> Self {
        let g = &self.group;
        let Some(s0) = self.indices().next() else {
            return Self::full(g);
        };
        // a period g must map s0 into S, so g ranges over S - s0
        let candidates: Vec<usize> = self.indices().map(|s| g.sub_idx(s, s0)).collect();
        let periods = candidates
            .into_iter()
            .filter(|&p| self.indices().all(|s| self.contains_index(g.add_idx(s, p))));
        Self::from_index_iter(g, periods)
    }

    /// Closed under addition and negation, and contains zero.
    pub fn is_subgroup(&self) -> bool {
        let g = &self.group;
        self.contains_index(0)
            && self.indices().all(|a| {
                self.contains_index(g.neg_idx(a))
                    && self.indices().all(|b| self.contains_index(g.add_idx(a, b)))
            })
    }

    /// `r_A(x) = #{(a1, a2) in A^2 : a1 + a2 = x}` for all `x`.
    pub fn representation_counts(&self) -> RepresentationCounts {
        let g = &self.group;
        let members: Vec<usize> = self.indices().collect();
        let count_rows = |rows: &[usize]| {
            let mut counts = vec![0u64; g.order()];
            for &a in rows {
                for &b in &members {
                    counts[g.add_idx(a, b)] += 1;
                }
            }
            counts
        };
        let counts = if members.len() * members.len() < 1 << 18 {
            count_rows(&members)
        } else {
            members
                .par_chunks(64)
                .map(count_rows)
                .reduce(
                    || vec![0u64; g.order()],
                    |mut acc, part| {
                        acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                        acc
                    },
                )
        };
        RepresentationCounts {
            group: g.clone(),
            counts,
        }
    }

    /// Number of additive quadruples `a1 + a2 = a3 + a4` in `A^4`.
    pub fn additive_energy_raw(&self) -> u128 {
        self.representation_counts().sum_of_squares()
    }

    /// Additive energy normalised by `|G|^3`.
    pub fn additive_energy(&self) -> Rational {
        let n = self.group.order() as u128;
        Rational::new(self.additive_energy_raw().into(), (n * n * n).into())
    }

    /// `|A + A| / |A|`.
    pub fn doubling_constant(&self) -> Result<Rational> {
        if self.is_empty() {
            return Err(Error::EmptySet("doubling constant"));
        }
        let sum = self.sumset(self)?;
        Ok(Rational::new(sum.size().into(), self.size.into()))
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.group.element_at(i))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn cyc(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn set(g: &FiniteAbelianGroup, idx: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(g, idx).unwrap()
    }

    fn all_subsets(g: &FiniteAbelianGroup) -> impl Iterator<Item = GroupSubset> + '_ {
        (0..1u64 << g.order()).map(move |m| GroupSubset::from_mask(g, m).unwrap())
    }

    fn small_groups() -> Vec<FiniteAbelianGroup> {
        let mut out: Vec<_> = (1..=8).map(cyc).collect();
        out.push(FiniteAbelianGroup::new(&[2, 2]).unwrap());
        out.push(FiniteAbelianGroup::new(&[2, 4]).unwrap());
        out.push(FiniteAbelianGroup::new(&[3, 3]).unwrap());
        out.push(FiniteAbelianGroup::new(&[2, 2, 2]).unwrap());
        out
    }

    #[test]
    fn sumset_examples() {
        let z5 = cyc(5);
        let a = set(&z5, &[0, 1]);
        assert_eq!(a.sumset(&a).unwrap(), set(&z5, &[0, 1, 2]));

        let b = set(&z5, &[1, 3, 4]);
        assert_eq!(set(&z5, &[0]).sumset(&b).unwrap(), b);
        assert!(b.sumset(&GroupSubset::full(&z5)).unwrap().is_full());
        assert!(GroupSubset::empty(&z5).sumset(&b).unwrap().is_empty());
    }

    #[test]
    fn iterated_sumset_examples() {
        let z5 = cyc(5);
        let b = set(&z5, &[0, 1]);
        assert_eq!(b.signed_iterated_sumset(1, 1).unwrap(), set(&z5, &[4, 0, 1]));
        assert_eq!(b.signed_iterated_sumset(2, 0).unwrap(), b.sumset(&b).unwrap());
        let zero = set(&z5, &[0]);
        for (r, s) in [(1, 0), (0, 1), (3, 2)] {
            assert_eq!(zero.signed_iterated_sumset(r, s).unwrap(), zero);
        }
        assert!(b.signed_iterated_sumset(0, 0).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let z5 = cyc(5);
        assert_eq!(set(&z5, &[0, 1, 2]).stabilizer(), set(&z5, &[0]));
        let z4 = cyc(4);
        assert_eq!(set(&z4, &[0, 2]).stabilizer(), set(&z4, &[0, 2]));
        assert!(GroupSubset::full(&z4).stabilizer().is_full());
        assert!(GroupSubset::empty(&z4).stabilizer().is_full());
    }

    #[test]
    fn representation_count_examples() {
        let z4 = cyc(4);
        assert_eq!(set(&z4, &[0, 1]).representation_counts().as_slice(), &[1, 2, 1, 0]);
        assert_eq!(set(&z4, &[0, 2]).representation_counts().as_slice(), &[2, 0, 2, 0]);
        assert_eq!(GroupSubset::empty(&z4).representation_counts().as_slice(), &[0; 4]);
    }

    #[test]
    fn energy_examples() {
        for n in 1..=12u64 {
            let g = cyc(n);
            let e = set(&g, &[0]).additive_energy();
            assert_eq!(e, Rational::new(1.into(), (n * n * n).into()));
            assert_eq!(GroupSubset::full(&g).additive_energy(), ratio(1, 1));
        }
        let z4 = cyc(4);
        let a = set(&z4, &[0, 1]);
        assert_eq!(a.additive_energy_raw(), 6);
        assert_eq!(a.additive_energy(), ratio(6, 64));
    }

    #[test]
    fn energy_matches_quadruple_count() {
        for g in small_groups() {
            if g.order() > 6 {
                continue;
            }
            for a in all_subsets(&g) {
                let m: Vec<usize> = a.indices().collect();
                let mut quads = 0u128;
                for &a1 in &m {
                    for &a2 in &m {
                        for &a3 in &m {
                            for &a4 in &m {
                                if g.add_idx(a1, a2) == g.add_idx(a3, a4) {
                                    quads += 1;
                                }
                            }
                        }
                    }
                }
                assert_eq!(a.additive_energy_raw(), quads, "{a:?}");
            }
        }
    }

    #[test]
    fn doubling_examples() {
        let z5 = cyc(5);
        assert_eq!(set(&z5, &[0, 1]).doubling_constant().unwrap(), ratio(3, 2));
        let z6 = cyc(6);
        assert_eq!(set(&z6, &[0, 2, 4]).doubling_constant().unwrap(), ratio(1, 1));
        assert_eq!(GroupSubset::full(&z6).doubling_constant().unwrap(), ratio(1, 1));
        assert!(matches!(
            GroupSubset::empty(&z6).doubling_constant(),
            Err(Error::EmptySet(_))
        ));
    }

    #[test]
    fn invariants_exhaustive_small_groups() {
        for g in small_groups() {
            for a in all_subsets(&g) {
                let r = a.representation_counts();
                let size = a.size() as u128;
                assert_eq!(r.total(), size * size);
                let e = a.additive_energy_raw();
                if !a.is_empty() {
                    assert!(size * size <= e && e <= size * size * size);
                }
                let stab = a.stabilizer();
                assert!(stab.is_subgroup(), "{stab:?}");
                if !a.is_empty() {
                    assert_eq!(a.sumset(&stab).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn sumset_commutative_associative() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let subsets: Vec<_> = all_subsets(&g).step_by(5).collect();
        for a in &subsets {
            for b in &subsets {
                assert_eq!(a.sumset(b).unwrap(), b.sumset(a).unwrap());
                for c in subsets.iter().step_by(3) {
                    let left = a.sumset(b).unwrap().sumset(c).unwrap();
                    let right = a.sumset(&b.sumset(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn parallel_counts_match_serial() {
        let g = FiniteAbelianGroup::new(&[32, 32]).unwrap();
        let a = GroupSubset::from_predicate(&g, |i| (i * 7919) % 3 != 0);
        let counts = a.representation_counts();
        let mut serial = vec![0u64; g.order()];
        for x in a.indices() {
            for y in a.indices() {
                serial[g.add_idx(x, y)] += 1;
            }
        }
        assert_eq!(counts.as_slice(), serial.as_slice());
    }

    #[test]
    fn set_algebra() {
        let z6 = cyc(6);
        let a = set(&z6, &[0, 1, 2]);
        let b = set(&z6, &[2, 3]);
        assert_eq!(a.intersection(&b).unwrap(), set(&z6, &[2]));
        assert_eq!(a.union(&b).unwrap(), set(&z6, &[0, 1, 2, 3]));
        assert_eq!(a.difference(&b).unwrap(), set(&z6, &[0, 1]));
        assert_eq!(a.complement(), set(&z6, &[3, 4, 5]));
        assert_eq!(a.translate_idx(5), set(&z6, &[5, 0, 1]));
        assert_eq!(a.negate(), set(&z6, &[0, 5, 4]));
        assert_eq!(a.density(), ratio(1, 2));
        assert_eq!(a.to_string(), "{0,1,2}");
    }
}
