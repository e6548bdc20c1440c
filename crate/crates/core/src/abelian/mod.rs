//! Finite abelian groups presented as products of cyclic groups.
//!
//! Elements are addressed by a mixed-radix index: the residue tuple
//! `(r_1, ..., r_m)` of `Z_{n_1} x ... x Z_{n_m}` maps to
//! `r_1 * (n_2 ... n_m) + ... + r_m`, so the last factor varies fastest. All
//! bulk kernels (subsets, linear-form evaluation, Fourier) work on indices; the
//! [`GroupElement`] type is the checked, user-facing view.

mod io;
mod subset;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;

use crate::{Error, Result};

pub use io::{format_subset_file, parse_group, parse_subset_file, parse_subset_literal};
pub use subset::{GroupSubset, RepresentationCounts};

/// Default cap on the order of a constructed group.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

/// A direct product `Z_{n_1} x ... x Z_{n_m}`. Cloning is cheap (shared data).
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupData>,
}

struct GroupData {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
}

impl FiniteAbelianGroup {
    /// Builds the product of cyclic groups with the given moduli, refusing orders
    /// above [`DEFAULT_ORDER_CAP`].
    pub fn new(moduli: &[u64]) -> Result<Self> {
        Self::with_cap(moduli, DEFAULT_ORDER_CAP)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn with_cap(moduli: &[u64], cap: u64) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidArgument(
                "a group needs at least one cyclic factor".into(),
            ));
        }
        let mut order: u128 = 1;
        for &n in moduli {
            if n == 0 {
                return Err(Error::InvalidModulus(0));
            }
            order = order.saturating_mul(n as u128);
        }
        if order > cap as u128 {
            return Err(Error::OrderCap { order, cap });
        }
        let mut strides = vec![1u64; moduli.len()];
        for t in (0..moduli.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * moduli[t + 1];
        }
        Ok(FiniteAbelianGroup {
            inner: Arc::new(GroupData {
                moduli: moduli.to_vec(),
                strides,
                order: order as u64,
            }),
        })
    }

    pub fn order(&self) -> usize {
        self.inner.order as usize
    }

    pub fn moduli(&self) -> &[u64] {
        &self.inner.moduli
    }

    pub fn strides(&self) -> &[u64] {
        &self.inner.strides
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.inner.moduli.len()
    }

    /// Least common multiple of the moduli (the exponent of the group).
    pub fn exponent(&self) -> u64 {
        self.moduli().iter().fold(1u64, |acc, &n| acc.lcm(&n))
    }

    /// The direct product `self x other`, with `other`'s factors appended.
    pub fn product(&self, other: &FiniteAbelianGroup, cap: u64) -> Result<Self> {
        let moduli: Vec<u64> = self.moduli().iter().chain(other.moduli()).copied().collect();
        Self::with_cap(&moduli, cap)
    }

    pub fn ensure_same(&self, other: &FiniteAbelianGroup) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            residues: vec![0; self.rank()],
        }
    }

    /// Element from already-reduced residues; out-of-range residues are rejected.
    pub fn element(&self, residues: &[u64]) -> Result<GroupElement> {
        self.check_len(residues.len())?;
        for (&r, &n) in residues.iter().zip(self.moduli()) {
            if r >= n {
                return Err(Error::ResidueOutOfRange {
                    residue: r as i64,
                    modulus: n,
                });
            }
        }
        Ok(GroupElement {
            group: self.clone(),
            residues: residues.to_vec(),
        })
    }

    /// Element from arbitrary integers, each reduced modulo its factor.
    pub fn element_reduced(&self, values: &[i64]) -> Result<GroupElement> {
        self.check_len(values.len())?;
        let residues = values
            .iter()
            .zip(self.moduli())
            .map(|(&v, &n)| v.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            residues,
        })
    }

    /// The element at mixed-radix position `index`.
    ///
    /// Panics if `index >= order`.
    pub fn element_at(&self, index: usize) -> GroupElement {
        assert!(index < self.order(), "element index {index} out of range");
        GroupElement {
            group: self.clone(),
            residues: self.residues_of(index),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    pub fn residues_of(&self, index: usize) -> Vec<u64> {
        let index = index as u64;
        self.moduli()
            .iter()
            .zip(self.strides())
            .map(|(&n, &s)| (index / s) % n)
            .collect()
    }

    /// Residue of element `index` in factor `t`.
    #[inline]
    pub fn residue(&self, index: usize, t: usize) -> u64 {
        (index as u64 / self.inner.strides[t]) % self.inner.moduli[t]
    }

    pub fn index_of_residues(&self, residues: &[u64]) -> usize {
        residues
            .iter()
            .zip(self.strides())
            .map(|(&r, &s)| r * s)
            .sum::<u64>() as usize
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let d = &*self.inner;
        if d.moduli.len() == 1 {
            let n = d.order as usize;
            let s = a + b;
            return if s >= n { s - n } else { s };
        }
        let (a, b) = (a as u64, b as u64);
        let mut out = 0u64;
        for (&n, &s) in d.moduli.iter().zip(&d.strides) {
            let r = ((a / s) % n + (b / s) % n) % n;
            out += r * s;
        }
        out as usize
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let d = &*self.inner;
        if d.moduli.len() == 1 {
            return if a == 0 { 0 } else { d.order as usize - a };
        }
        let a = a as u64;
        let mut out = 0u64;
        for (&n, &s) in d.moduli.iter().zip(&d.strides) {
            let r = (a / s) % n;
            out += ((n - r) % n) * s;
        }
        out as usize
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// `c * a` for any integer `c`.
    pub fn scale_idx(&self, c: i64, a: usize) -> usize {
        let a = a as u64;
        let mut out = 0u64;
        for (&n, &s) in self.moduli().iter().zip(self.strides()) {
            let r = (a / s) % n;
            let c = c.rem_euclid(n as i64) as u128;
            out += ((c * r as u128) % n as u128) as u64 * s;
        }
        out as usize
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::ComponentMismatch {
                expected: self.rank(),
                got: len,
            })
        }
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.moduli() == other.moduli()
    }
}

impl Eq for FiniteAbelianGroup {}

impl Hash for FiniteAbelianGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.moduli().hash(state);
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, n) in self.moduli().iter().enumerate() {
            if t > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({self})")
    }
}

/// An element of a [`FiniteAbelianGroup`], stored as reduced residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn index(&self) -> usize {
        self.group.index_of_residues(&self.residues)
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// Componentwise `(a + b) mod n_t`.
    pub fn try_add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.ensure_same(&other.group)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(self.group.moduli())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            residues,
        })
    }

    pub fn try_sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(-1)
    }

    /// `c * self`, with negative `c` allowed.
    pub fn scale(&self, c: i64) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.group.moduli())
            .map(|(&r, &n)| {
                let c = c.rem_euclid(n as i64) as u128;
                ((c * r as u128) % n as u128) as u64
            })
            .collect();
        GroupElement {
            group: self.group.clone(),
            residues,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            return write!(f, "{}", self.residues[0]);
        }
        f.write_str("(")?;
        for (t, r) in self.residues.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &FiniteAbelianGroup, r: &[u64]) -> GroupElement {
        g.element(r).unwrap()
    }

    #[test]
    fn add_examples() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        assert_eq!(el(&z4, &[3]).try_add(&el(&z4, &[2])).unwrap(), el(&z4, &[1]));

        let g = FiniteAbelianGroup::new(&[9, 2]).unwrap();
        assert_eq!(
            el(&g, &[8, 1]).try_add(&el(&g, &[1, 1])).unwrap(),
            g.zero()
        );

        let z6 = FiniteAbelianGroup::cyclic(6).unwrap();
        for a in z6.elements() {
            assert_eq!(a.try_add(&z6.zero()).unwrap(), a);
        }
    }

    #[test]
    fn add_rejects_other_group() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
        let err = z4.zero().try_add(&z5.zero()).unwrap_err();
        assert!(matches!(err, Error::GroupMismatch { .. }));
    }

    #[test]
    fn scale_examples() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        assert_eq!(el(&z4, &[2]).scale(3), el(&z4, &[2]));
        let g = FiniteAbelianGroup::new(&[3, 2]).unwrap();
        assert_eq!(el(&g, &[1, 1]).scale(-1), el(&g, &[2, 1]));
        for a in g.elements() {
            assert!(a.scale(0).is_zero());
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            FiniteAbelianGroup::new(&[1 << 10, 1 << 11]),
            Err(Error::OrderCap { .. })
        ));
        assert!(FiniteAbelianGroup::with_cap(&[1 << 10, 1 << 11], 1 << 21).is_ok());
        assert!(FiniteAbelianGroup::new(&[0]).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = FiniteAbelianGroup::new(&[3, 4, 2]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.element_at(i).index(), i);
        }
        assert_eq!(g.element_at(1).residues(), &[0, 0, 1]);
    }

    #[test]
    fn index_kernels_match_elements() {
        let g = FiniteAbelianGroup::new(&[4, 6]).unwrap();
        for a in 0..g.order() {
            let ea = g.element_at(a);
            assert_eq!(g.neg_idx(a), ea.neg().index());
            for c in -7..7 {
                assert_eq!(g.scale_idx(c, a), ea.scale(c).index());
            }
            for b in 0..g.order() {
                let eb = g.element_at(b);
                assert_eq!(g.add_idx(a, b), ea.try_add(&eb).unwrap().index());
                assert_eq!(g.sub_idx(a, b), ea.try_sub(&eb).unwrap().index());
            }
        }
    }

    #[test]
    fn display() {
        let g = FiniteAbelianGroup::new(&[9, 2]).unwrap();
        assert_eq!(g.to_string(), "Z9 x Z2");
        assert_eq!(g.element(&[8, 1]).unwrap().to_string(), "(8,1)");
        assert_eq!(g.exponent(), 18);
    }
}
