//! Fourier analysis on `Z_{n_1} x ... x Z_{n_m}` with the expectation
//! normalisation `f^(xi) = E_x f(x) conj(chi_xi(x))`.
//!
//! Characters are evaluated through an integer phase: with `L = lcm(n_t)`,
//! `chi_xi(x) = w^(sum_t xi_t x_t L/n_t mod L)` where `w = exp(2 pi i / L)`, so
//! every character value comes from one table of `L` roots of unity. The direct
//! `O(|G|^2)` transform is used throughout; each frequency is summed in element
//! order so repeated runs are bit-identical regardless of thread count.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::abelian::{FiniteAbelianGroup, GroupElement, GroupSubset};
use crate::Result;

/// Fourier coefficients of a function on a group, indexed like its elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    group: FiniteAbelianGroup,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn at(&self, xi: &GroupElement) -> Complex64 {
        self.coefficients[xi.index()]
    }
}

/// Precomputed phase data for one group.
struct Phases {
    exponent: u64,
    weights: Vec<u64>,
    roots: Vec<Complex64>,
}

impl Phases {
    fn new(group: &FiniteAbelianGroup) -> Self {
        let exponent = group.exponent();
        let weights = group.moduli().iter().map(|&n| exponent / n).collect();
        let roots = (0..exponent)
            .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / exponent as f64))
            .collect();
        Phases {
            exponent,
            weights,
            roots,
        }
    }

    /// Integer phase of `<xi, x>` in units of `1/L`.
    fn phase(&self, group: &FiniteAbelianGroup, xi: usize, x: usize) -> usize {
        let mut acc: u128 = 0;
        for (t, &w) in self.weights.iter().enumerate() {
            acc += group.residue(xi, t) as u128 * group.residue(x, t) as u128 * w as u128;
        }
        (acc % self.exponent as u128) as usize
    }
}

/// `chi_xi(x) = exp(2 pi i sum_t xi_t x_t / n_t)`.
pub fn character(xi: &GroupElement, x: &GroupElement) -> Result<Complex64> {
    let group = xi.group();
    group.ensure_same(x.group())?;
    let phases = Phases::new(group);
    Ok(phases.roots[phases.phase(group, xi.index(), x.index())])
}

/// Indicator function of a subset as a real vector over element indices.
pub fn indicator(a: &GroupSubset) -> Vec<f64> {
    (0..a.group().order())
        .map(|i| if a.contains_index(i) { 1.0 } else { 0.0 })
        .collect()
}

/// `f^(xi) = E_x f(x) conj(chi_xi(x))` for every frequency.
///
/// Panics if `f.len()` differs from the group order.
pub fn fourier_transform(group: &FiniteAbelianGroup, f: &[f64]) -> Spectrum {
    assert_eq!(f.len(), group.order(), "function length must equal group order");
    let phases = Phases::new(group);
    let n = group.order();
    let scale = 1.0 / n as f64;
    let support: Vec<usize> = (0..n).filter(|&x| f[x] != 0.0).collect();
    let coefficients = (0..n)
        .into_par_iter()
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &x in &support {
                acc += phases.roots[phases.phase(group, xi, x)].conj() * f[x];
            }
            acc * scale
        })
        .collect();
    Spectrum {
        group: group.clone(),
        coefficients,
    }
}

pub fn subset_transform(a: &GroupSubset) -> Spectrum {
    fourier_transform(a.group(), &indicator(a))
}

/// `(f * g)(x) = E_y f(x - y) g(y)`.
///
/// Panics if either function's length differs from the group order.
pub fn convolve(group: &FiniteAbelianGroup, f: &[f64], g: &[f64]) -> Vec<f64> {
    let n = group.order();
    assert_eq!(f.len(), n, "function length must equal group order");
    assert_eq!(g.len(), n, "function length must equal group order");
    let scale = 1.0 / n as f64;
    (0..n)
        .into_par_iter()
        .map(|x| {
            let mut acc = 0.0;
            for (y, &gy) in g.iter().enumerate() {
                if gy != 0.0 {
                    acc += f[group.sub_idx(x, y)] * gy;
                }
            }
            acc * scale
        })
        .collect()
}

/// Normalised additive energy via `sum_xi |A^(xi)|^4`.
pub fn energy_fourier(a: &GroupSubset) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    subset_transform(a)
        .coefficients
        .iter()
        .map(|c| c.norm_sqr() * c.norm_sqr())
        .sum()
}

/// Both sides of Parseval: `(sum_xi |f^(xi)|^2, E_x |f(x)|^2)`.
pub fn parseval_check(group: &FiniteAbelianGroup, f: &[f64]) -> (f64, f64) {
    let spectrum = fourier_transform(group, f);
    let lhs = spectrum.coefficients.iter().map(Complex64::norm_sqr).sum();
    let rhs = f.iter().map(|v| v * v).sum::<f64>() / group.order() as f64;
    (lhs, rhs)
}
