//! Builders for the pinpointing systems `L`, `M` and the per-coordinate systems
//! `V_j`, `E_j`, `T_j`.
//!
//! Variable layout: `g_1..g_k` occupy indices `0..k`, followed by `z`, `z'`,
//! `z''` at `k`, `k+1`, `k+2` as far as the system needs them. In the DSL these
//! print as `g{k+1}`, `g{k+2}`, `g{k+3}`.

use crate::linform::{LinearForm, LinearSystem};
use crate::{Error, Result};

/// A linear expression over the layout variables, as a coefficient vector.
pub type Expr = Vec<i64>;

pub fn unit(arity: usize, var: usize) -> Expr {
    let mut e = vec![0; arity];
    e[var] = 1;
    e
}

fn combine(terms: &[(i64, &Expr)]) -> Expr {
    let arity = terms.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![0; arity];
    for (c, e) in terms {
        for (o, &x) in out.iter_mut().zip(e.iter()) {
            *o += c * x;
        }
    }
    out
}

/// Names of the layout variables for a system of the given arity.
pub fn layout_names(k: usize, arity: usize) -> Vec<String> {
    (0..arity)
        .map(|i| match i.checked_sub(k) {
            None => format!("g{}", i + 1),
            Some(0) => "z".into(),
            Some(1) => "z'".into(),
            Some(2) => "z''".into(),
            Some(_) => format!("g{}", i + 1),
        })
        .collect()
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("the reduction needs k >= 1".into()));
    }
    Ok(())
}

/// `L` with the slot of `g_i` filled by `slots[i - 1]`:
/// `!((k+1) s_1)` and `p (s_j - j s_1)` for `p = 1..k+2`, `j = 2..k`.
fn pinpoint_forms(k: usize, slots: &[Expr]) -> Vec<LinearForm> {
    let arity = slots[0].len();
    let mut forms = Vec::with_capacity(1 + (k + 2) * (k - 1));
    let first = combine(&[((k + 1) as i64, &slots[0])]);
    forms.push(LinearForm::new(first, true).expect("arity >= 1"));
    for p in 1..=(k as i64 + 2) {
        for j in 2..=k {
            let e = combine(&[(p, &slots[j - 1]), (-p * j as i64, &slots[0])]);
            debug_assert_eq!(e.len(), arity);
            forms.push(LinearForm::positive(e).expect("arity >= 1"));
        }
    }
    forms
}

fn identity_slots(k: usize, arity: usize) -> Vec<Expr> {
    (0..k).map(|i| unit(arity, i)).collect()
}

/// `L(g)`: one negated form and `(k+2)(k-1)` positive forms over `k` variables.
pub fn build_l(k: usize) -> Result<LinearSystem> {
    check_k(k)?;
    LinearSystem::new(pinpoint_forms(k, &identity_slots(k, k)))
}

/// `M(g) = L(g) + {g_1, ..., g_k}`.
pub fn build_m(k: usize) -> Result<LinearSystem> {
    check_k(k)?;
    let mut forms = pinpoint_forms(k, &identity_slots(k, k));
    forms.extend((0..k).map(|i| LinearForm::positive(unit(k, i)).expect("k >= 1")));
    LinearSystem::new(forms)
}

/// `L(g, j, w)`: `L` with `g_j` replaced by the expression `w` (whose length
/// fixes the arity, at least `k`).
pub fn build_l_sub(k: usize, j: usize, w: &Expr) -> Result<LinearSystem> {
    check_k(k)?;
    check_j(k, j)?;
    if w.len() < k {
        return Err(Error::ArityMismatch {
            expected: k,
            got: w.len(),
        });
    }
    let mut slots = identity_slots(k, w.len());
    slots[j - 1] = w.clone();
    LinearSystem::new(pinpoint_forms(k, &slots))
}

fn check_j(k: usize, j: usize) -> Result<()> {
    if j == 0 || j > k {
        return Err(Error::InvalidArgument(format!("j must lie in 1..={k}, got {j}")));
    }
    Ok(())
}

/// `g_j + a - b` over `arity` variables.
fn shifted(arity: usize, j: usize, a: usize, b: usize) -> Expr {
    combine(&[(1, &unit(arity, j - 1)), (1, &unit(arity, a)), (-1, &unit(arity, b))])
}

/// `V_j(g, z) = M(g) + L(g, j, z)` over `k + 1` variables.
pub fn build_v(k: usize, j: usize) -> Result<LinearSystem> {
    check_j(k, j)?;
    let arity = k + 1;
    let m = build_m(k)?.with_arity(arity);
    Ok(m.union(&build_l_sub(k, j, &unit(arity, k))?))
}

/// `E_j(g, z, z')`: `M`, `L(g,j,z)`, `L(g,j,z')`, `L(g,j,g_j+z-z')` and the
/// extra form `g_j + z - z'`, over `k + 2` variables.
pub fn build_e(k: usize, j: usize) -> Result<LinearSystem> {
    check_j(k, j)?;
    let arity = k + 2;
    let (z, z1) = (k, k + 1);
    let w = shifted(arity, j, z, z1);
    let mut s = build_m(k)?.with_arity(arity);
    s = s.union(&build_l_sub(k, j, &unit(arity, z))?);
    s = s.union(&build_l_sub(k, j, &unit(arity, z1))?);
    s = s.union(&build_l_sub(k, j, &w)?);
    Ok(s.union(&LinearSystem::new(vec![LinearForm::positive(w)?])?))
}

/// `T_j(g, z, z', z'')`: `M`, the three substituted copies of `L` at `z`,
/// `z'`, `z''`, and for each cyclic difference `w` in
/// `g_j + z - z'`, `g_j + z' - z''`, `g_j + z'' - z` both `L(g,j,w)` and `w`.
pub fn build_t(k: usize, j: usize) -> Result<LinearSystem> {
    check_j(k, j)?;
    let arity = k + 3;
    let (z, z1, z2) = (k, k + 1, k + 2);
    let mut s = build_m(k)?.with_arity(arity);
    for var in [z, z1, z2] {
        s = s.union(&build_l_sub(k, j, &unit(arity, var))?);
    }
    for (a, b) in [(z, z1), (z1, z2), (z2, z)] {
        let w = shifted(arity, j, a, b);
        s = s.union(&build_l_sub(k, j, &w)?);
        s = s.union(&LinearSystem::new(vec![LinearForm::positive(w)?])?);
    }
    Ok(s)
}

/// All systems of the reduction for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSystems {
    pub k: usize,
    pub l: LinearSystem,
    pub m: LinearSystem,
    pub v: Vec<LinearSystem>,
    pub e: Vec<LinearSystem>,
    pub t: Vec<LinearSystem>,
}

impl ReductionSystems {
    pub fn build(k: usize) -> Result<Self> {
        Ok(ReductionSystems {
            k,
            l: build_l(k)?,
            m: build_m(k)?,
            v: (1..=k).map(|j| build_v(k, j)).collect::<Result<_>>()?,
            e: (1..=k).map(|j| build_e(k, j)).collect::<Result<_>>()?,
            t: (1..=k).map(|j| build_t(k, j)).collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_for_k2() {
        let l = build_l(2).unwrap();
        assert_eq!(l.len(), 5);
        assert_eq!(l.to_string(), "[!(3g1); -2g1 + g2; -4g1 + 2g2; -6g1 + 3g2; -8g1 + 4g2]");
        assert_eq!(l.forms()[2].coefficients(), &[-4, 2]);
        assert_eq!(build_l(3).unwrap().len(), 11);
        assert_eq!(build_l(1).unwrap().len(), 1);
        assert!(build_l(0).is_err());
    }

    #[test]
    fn form_count_formulas() {
        for k in 2..=6 {
            let l = build_l(k).unwrap().len();
            assert_eq!(l, 1 + (k + 2) * (k - 1));
            let m = build_m(k).unwrap().len();
            assert_eq!(m, l + k);
            for j in 1..=k {
                let v = build_v(k, j).unwrap();
                let e = build_e(k, j).unwrap();
                let t = build_t(k, j).unwrap();
                assert_eq!((v.len(), v.arity()), (m + l, k + 1));
                assert_eq!((e.len(), e.arity()), (m + 3 * l + 1, k + 2));
                assert_eq!((t.len(), t.arity()), (m + 6 * l + 3, k + 3));
            }
        }
    }

    #[test]
    fn substitution_replaces_slot() {
        // k = 2, j = 1, w = z (index 2): !(3z), p(g2 - 2z)
        let s = build_l_sub(2, 1, &unit(3, 2)).unwrap();
        assert_eq!(s.forms()[0].coefficients(), &[0, 0, 3]);
        assert_eq!(s.forms()[1].coefficients(), &[0, 1, -2]);
        // j = 2: !(3g1), p(z - 2g1)
        let s = build_l_sub(2, 2, &unit(3, 2)).unwrap();
        assert_eq!(s.forms()[0].coefficients(), &[3, 0, 0]);
        assert_eq!(s.forms()[1].coefficients(), &[-2, 0, 1]);
        assert!(build_l_sub(2, 3, &unit(3, 2)).is_err());
    }

    #[test]
    fn e_has_shifted_form() {
        let e = build_e(2, 2).unwrap();
        let last = e.forms().last().unwrap();
        assert_eq!(last.coefficients(), &[0, 1, 1, -1]);
        assert!(!last.is_negated());
        assert_eq!(layout_names(2, 5), vec!["g1", "g2", "z", "z'", "z''"]);
    }
}
