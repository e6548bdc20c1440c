//! `ψ(q*)`: the quantum system obtained by substituting `V_j`, `E_j`, `T_j` for
//! `v_j`, `e_j`, `t_j` in `q*`, and its two evaluations.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::graph::{compute_b_c_with, DirectedCayleyGraph};
use super::systems::{layout_names, ReductionSystems};
use crate::abelian::GroupSubset;
use crate::linform::{
    eval_density, eval_quantum, satisfying_assignments, EvalConfig, LinearSystem, QuantumSystem,
    QuantumTerm,
};
use crate::polynomial::{transform_qstar, IntPolynomial};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionBundle {
    pub k: usize,
    pub q: IntPolynomial,
    pub qstar: IntPolynomial,
    pub systems: ReductionSystems,
    pub psi: QuantumSystem,
}

/// Expands `q*` over `(v_1..v_k, e_1..e_k, t_1..t_k)` into a quantum system.
/// Each monomial becomes one term whose factors are the `V`, then `E`, then
/// `T` systems with multiplicity given by the exponents.
pub fn build_psi(q: &IntPolynomial, k: usize) -> Result<ReductionBundle> {
    let qstar = transform_qstar(q, k)?;
    let systems = ReductionSystems::build(k)?;
    let families = [&systems.v, &systems.e, &systems.t];
    let mut psi = QuantumSystem::default();
    for (m, c) in qstar.terms() {
        let mut factors = Vec::new();
        for (f, family) in families.iter().enumerate() {
            for j in 0..k {
                for _ in 0..m.0[f * k + j] {
                    factors.push(family[j].clone());
                }
            }
        }
        psi.push(QuantumTerm::new(c.clone(), factors));
    }
    Ok(ReductionBundle {
        k,
        q: q.clone(),
        qstar,
        systems,
        psi,
    })
}

impl ReductionBundle {
    pub fn to_json(&self) -> Value {
        let s = &self.systems;
        let strings = |v: &[LinearSystem]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        json!({
            "k": self.k,
            "q": self.q.to_string(),
            "qstar": self.qstar.to_string(),
            "layout": layout_names(self.k, self.k + 3),
            "systems": {
                "L": s.l.to_string(),
                "M": s.m.to_string(),
                "V": strings(&s.v),
                "E": strings(&s.e),
                "T": strings(&s.t),
            },
            "psi": self.psi.to_string(),
        })
    }

    /// Reads a bundle written by [`ReductionBundle::to_json`].
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("bundle: missing or invalid `{what}`"));
        let text = |v: &Value, what: &str| v.as_str().map(str::to_owned).ok_or_else(|| bad(what));
        let k = value["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
        let q: IntPolynomial = text(&value["q"], "q")?.parse()?;
        let qstar: IntPolynomial = text(&value["qstar"], "qstar")?.parse()?;
        let sys = &value["systems"];
        let one = |key: &str, arity: usize| -> Result<LinearSystem> {
            Ok(text(&sys[key], key)?.parse::<LinearSystem>()?.with_arity(arity))
        };
        let list = |key: &str, arity: usize| -> Result<Vec<LinearSystem>> {
            sys[key]
                .as_array()
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|v| Ok(text(v, key)?.parse::<LinearSystem>()?.with_arity(arity)))
                .collect()
        };
        let systems = ReductionSystems {
            k,
            l: one("L", k)?,
            m: one("M", k)?,
            v: list("V", k + 1)?,
            e: list("E", k + 2)?,
            t: list("T", k + 3)?,
        };
        if [systems.v.len(), systems.e.len(), systems.t.len()] != [k; 3] {
            return Err(bad("systems"));
        }
        let psi: QuantumSystem = text(&value["psi"], "psi")?.parse()?;
        Ok(ReductionBundle {
            k,
            q,
            qstar,
            systems,
            psi,
        })
    }

    /// `(t(V_1), ..., t(V_k), t(E_1), ..., t(T_k))` in the variable order of `q*`.
    pub fn density_vector(&self, a: &GroupSubset, config: &EvalConfig) -> Result<Vec<Rational>> {
        let s = &self.systems;
        s.v.iter()
            .chain(&s.e)
            .chain(&s.t)
            .map(|sys| eval_density(sys, a, config))
            .collect()
    }

    /// `t(ψ(q*), A)` with every factor on independent variables.
    pub fn eval(&self, a: &GroupSubset, config: &EvalConfig) -> Result<Rational> {
        eval_quantum(&self.psi, a, config)
    }

    /// `E_g q*(t(V|g), t(E|g), t(T|g))`: the `g` variables shared by all factors
    /// of a term. Assignments with `M(g) ∉ A` contribute `q*(0)`.
    pub fn eval_shared_g(&self, a: &GroupSubset, config: &EvalConfig) -> Result<SharedGValue> {
        let k = self.k;
        let group = a.group();
        let n = group.order();
        let good = satisfying_assignments(&self.systems.m, a, &vec![None; k], config)?;
        let qstar = self.qstar.with_vars(&crate::polynomial::vet_vars(k))?;
        let values: Vec<Rational> = good
            .par_iter()
            .map(|g| {
                let mut point = vec![Rational::from_integer(0.into()); 3 * k];
                for j in 1..=k {
                    let (b, c) = compute_b_c_with(a, g, j, &self.systems.v[j - 1], config)?;
                    if b.is_empty() {
                        continue;
                    }
                    let d = DirectedCayleyGraph::new(b, c)?.densities()?;
                    let nn = n as u128;
                    let frac = |x: u128, den: u128| {
                        Rational::new(BigUint::from(x).into(), BigUint::from(den).into())
                    };
                    point[j - 1] = frac(d.vertices as u128, nn);
                    point[k + j - 1] = frac(d.edges, nn * nn);
                    point[2 * k + j - 1] = frac(d.triangles, nn * nn * nn);
                }
                qstar.eval(&point)
            })
            .collect::<Result<_>>()?;
        let total_g = BigUint::from(n).pow(k as u32);
        let bad = &total_g - BigUint::from(good.len());
        let at_zero = Rational::from_integer(qstar.constant_term());
        let mut sum = at_zero * Rational::from_integer(bad.into());
        for v in values {
            sum += v;
        }
        Ok(SharedGValue {
            value: sum / Rational::from_integer(total_g.into()),
            good_assignments: good.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedGValue {
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub value: Rational,
    pub good_assignments: usize,
}

/// `t(ψ(q*), A)` under independent-factor semantics.
pub fn eval_reduction(bundle: &ReductionBundle, a: &GroupSubset, config: &EvalConfig) -> Result<Rational> {
    bundle.eval(a, config)
}

/// The shared-`g` reading; see [`ReductionBundle::eval_shared_g`].
pub fn eval_reduction_shared_g(
    bundle: &ReductionBundle,
    a: &GroupSubset,
    config: &EvalConfig,
) -> Result<SharedGValue> {
    bundle.eval_shared_g(a, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::ratio;

    fn poly(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn factor_names(b: &ReductionBundle) -> Vec<(String, Vec<String>)> {
        let s = &b.systems;
        let name = |f: &LinearSystem| {
            for (tag, fam) in [("V", &s.v), ("E", &s.e), ("T", &s.t)] {
                if let Some(j) = fam.iter().position(|x| x == f) {
                    return format!("{tag}{}", j + 1);
                }
            }
            panic!("unknown factor")
        };
        b.psi
            .terms()
            .iter()
            .map(|t| {
                let mut f: Vec<String> = t.factors.iter().map(name).collect();
                f.sort();
                (t.coefficient.to_string(), f)
            })
            .collect()
    }

    #[test]
    fn psi_examples() {
        let b = build_psi(&poly("x1 - y1"), 1).unwrap();
        assert_eq!(
            factor_names(&b),
            vec![("1".into(), vec!["E1".into(), "V1".into()]), ("-1".into(), vec!["T1".into()])]
        );
        let b = build_psi(&poly("x1^2"), 1).unwrap();
        assert_eq!(factor_names(&b), vec![("1".into(), vec!["E1".into(), "E1".into(), "V1".into(), "V1".into()])]);
        let b = build_psi(&poly("7"), 2).unwrap();
        assert_eq!(factor_names(&b), vec![("7".into(), vec![])]);
    }

    #[test]
    fn evaluations() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let cfg = EvalConfig::default();
        let b = build_psi(&poly("x1 - y1"), 1).unwrap();
        assert_eq!(b.eval(&GroupSubset::full(&g), &cfg).unwrap(), ratio(0, 1));
        assert_eq!(b.eval(&GroupSubset::empty(&g), &cfg).unwrap(), ratio(0, 1));
        let b = build_psi(&poly("3"), 1).unwrap();
        assert_eq!(b.eval(&GroupSubset::empty(&g), &cfg).unwrap(), ratio(3, 1));
        assert_eq!(b.eval_shared_g(&GroupSubset::empty(&g), &cfg).unwrap().value, ratio(3, 1));
    }

    #[test]
    fn psi_matches_qstar_at_densities() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let cfg = EvalConfig::default();
        for q in ["x1 - y1", "2x1^2 - 3y1 + 1", "x1*y1 - x1"] {
            let b = build_psi(&poly(q), 1).unwrap();
            for mask in [0b0110u64, 0b1011, 0b0001, 0b1110] {
                let a = GroupSubset::from_mask(&g, mask).unwrap();
                let d = b.density_vector(&a, &cfg).unwrap();
                let qs = b.qstar.with_vars(&crate::polynomial::vet_vars(1)).unwrap();
                assert_eq!(b.eval(&a, &cfg).unwrap(), qs.eval(&d).unwrap());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let b = build_psi(&poly("x1*y2 - 2x2^2 + 1"), 2).unwrap();
        let v = b.to_json();
        assert_eq!(v["layout"], json!(["g1", "g2", "z", "z'", "z''"]));
        let back = ReductionBundle::from_json(&v).unwrap();
        assert_eq!(back, b);
    }
}
