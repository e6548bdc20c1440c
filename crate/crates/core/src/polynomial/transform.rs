//! The three polynomial transforms used by the reductions:
//!
//! - `q -> q*`: substitute `x_j = e_j / v_j^2`, `y_j = t_j / v_j^3` and clear
//!   denominators with `prod_j v_j^(3 deg q)`.
//! - `q -> p`: `p(x) = prod_i x_i^(deg q) * q(1/x_1, ..., 1/x_k)`, so that
//!   `p(1/n)` and `q(n)` have the same sign for positive integers `n`.
//! - `p -> q`: `q(x, y) = p(x) + M * sum_i (x_i^3 - y_i)` with
//!   `M = max(1, 30 B1, 3 B2)`, where `B1` and `B2` bound the first and pure second
//!   partial derivatives of `p` on `[0,1]^k`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{IntPolynomial, Monomial};
use crate::{Error, Rational, Result};

pub fn xy_vars(k: usize) -> Vec<String> {
    (1..=k)
        .map(|j| format!("x{j}"))
        .chain((1..=k).map(|j| format!("y{j}")))
        .collect()
}

pub fn vet_vars(k: usize) -> Vec<String> {
    ["v", "e", "t"]
        .iter()
        .flat_map(|f| (1..=k).map(move |j| format!("{f}{j}")))
        .collect()
}

/// Index `j` (1-based) of a name like `x3` in family `prefix`.
fn family_index(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok().filter(|&j| j >= 1)
}

/// `q*(v, e, t) = q(e_1/v_1^2, ..., t_k/v_k^3) * prod_j v_j^(3 deg q)`.
pub fn transform_qstar(q: &IntPolynomial, k: usize) -> Result<IntPolynomial> {
    let xy = xy_vars(k);
    let q = q.with_vars(&xy).map_err(|e| match e {
        Error::UnknownVariable(v) => Error::InvalidArgument(format!(
            "q* needs a polynomial in x1..x{k}, y1..y{k}; found `{v}`"
        )),
        other => other,
    })?;
    let three_d = 3 * q.degree();
    let mut out = IntPolynomial::zero(vet_vars(k));
    for (m, c) in &q.terms {
        let mut exps = vec![0u32; 3 * k];
        for j in 0..k {
            let (a, b) = (m.0[j], m.0[k + j]);
            exps[j] = three_d - 2 * a - 3 * b;
            exps[k + j] = a;
            exps[2 * k + j] = b;
        }
        out.add_term(Monomial(exps), c.clone());
    }
    Ok(out)
}

/// `p(x) = prod_i x_i^(deg q) * q(1/x_1, ..., 1/x_k)` over the variables of `q`.
pub fn transform_p_from_q(q: &IntPolynomial) -> IntPolynomial {
    let d = q.degree();
    let mut out = IntPolynomial::zero(q.vars.clone());
    for (m, c) in &q.terms {
        let exps = m.0.iter().map(|&a| d - a).collect();
        out.add_term(Monomial(exps), c.clone());
    }
    out
}

/// Result of [`transform_q_from_p`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFromP {
    pub q: IntPolynomial,
    /// `max(1, 30 B1, 3 B2)` from the certified coefficient-sum bounds.
    pub m: BigInt,
    /// `B1 = max_i sum |coeff(dp/dx_i)|`.
    pub first_derivative_bound: BigInt,
    /// `B2 = max_i sum |coeff(d2p/dx_i^2)|`.
    pub second_derivative_bound: BigInt,
    /// The same constant with `B1`, `B2` replaced by grid maxima of the
    /// derivatives on `[0,1]^k`; for comparison only.
    pub m_grid_estimate: Rational,
}

/// Number of `x` variables of `p`, which must be named `x1..xk`.
fn x_arity(p: &IntPolynomial) -> Result<usize> {
    let mut k = 0;
    for name in p.used_vars() {
        match family_index(&name, "x") {
            Some(j) => k = k.max(j),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "p must be a polynomial in x1..xk; found `{name}`"
                )))
            }
        }
    }
    Ok(k)
}

/// `q(x, y) = p(x) + M sum_i (x_i^3 - y_i)`.
pub fn transform_q_from_p(p: &IntPolynomial) -> Result<QFromP> {
    let k = x_arity(p)?;
    let xy = xy_vars(k);
    let p = p.with_vars(&xy)?;

    let mut b1 = BigInt::zero();
    let mut b2 = BigInt::zero();
    let mut g1 = Rational::zero();
    let mut g2 = Rational::zero();
    let px = p.with_vars(&xy[..k]).expect("p only uses x variables");
    for name in &xy[..k] {
        let d1 = px.partial_derivative(name)?;
        let d2 = d1.partial_derivative(name)?;
        b1 = b1.max(d1.sup_bound_unit_box());
        b2 = b2.max(d2.sup_bound_unit_box());
        g1 = g1.max(d1.grid_sup_estimate(20, 200_000));
        g2 = g2.max(d2.grid_sup_estimate(20, 200_000));
    }
    let m = BigInt::one()
        .max(BigInt::from(30) * &b1)
        .max(BigInt::from(3) * &b2);
    let m_grid_estimate = Rational::one()
        .max(Rational::from_integer(30.into()) * g1)
        .max(Rational::from_integer(3.into()) * g2);

    let mut penalty = IntPolynomial::zero(xy.clone());
    for j in 1..=k {
        let x = IntPolynomial::variable(xy.clone(), &format!("x{j}"))?;
        let y = IntPolynomial::variable(xy.clone(), &format!("y{j}"))?;
        penalty = &penalty + &(&x.pow(3) - &y);
    }
    let q = &p + &penalty.scale(&m);
    debug_assert!(!m.is_negative());
    Ok(QFromP {
        q,
        m,
        first_derivative_bound: b1,
        second_derivative_bound: b2,
        m_grid_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn poly(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    /// Evaluates `q(e/v^2, t/v^3) * prod v^(3 deg q)` directly in the rationals.
    fn qstar_oracle(q: &IntPolynomial, k: usize, v: &[Rational], e: &[Rational], t: &[Rational]) -> Rational {
        let q = q.with_vars(&xy_vars(k)).unwrap();
        let mut point: Vec<Rational> = (0..k).map(|j| &e[j] / (&v[j] * &v[j])).collect();
        point.extend((0..k).map(|j| &t[j] / (&v[j] * &v[j] * &v[j])));
        let mut scale = Rational::one();
        for vj in v {
            scale *= num_traits::pow(vj.clone(), 3 * q.degree() as usize);
        }
        q.eval(&point).unwrap() * scale
    }

    #[test]
    fn qstar_examples() {
        assert_eq!(transform_qstar(&poly("x1 - y1"), 1).unwrap(), poly("e1*v1 - t1"));
        assert_eq!(transform_qstar(&poly("x1^2"), 1).unwrap(), poly("e1^2*v1^2"));
        assert_eq!(transform_qstar(&poly("5"), 2).unwrap(), poly("5"));
        assert!(transform_qstar(&poly("x3"), 2).is_err());
        assert!(transform_qstar(&poly("z1"), 2).is_err());
    }

    #[test]
    fn qstar_matches_oracle() {
        let q = poly("3x1^2*y2 - x2*y1 + 2y1^2 - 7");
        let k = 2;
        let qs = transform_qstar(&q, k).unwrap();
        let pts = [ratio(1, 3), ratio(2, 1), ratio(-3, 2), ratio(5, 7)];
        for a in &pts {
            for b in &pts {
                let v = [a.clone(), b.clone()];
                let e = [b.clone(), ratio(1, 2)];
                let t = [a.clone(), ratio(-2, 5)];
                let mut point = v.to_vec();
                point.extend(e.iter().cloned());
                point.extend(t.iter().cloned());
                assert_eq!(qs.eval(&point).unwrap(), qstar_oracle(&q, k, &v, &e, &t));
            }
        }
    }

    #[test]
    fn p_from_q_examples() {
        assert_eq!(transform_p_from_q(&poly("x1 - 3")), poly("1 - 3x1"));
        assert_eq!(transform_p_from_q(&poly("x1*x2 - 3")), poly("x1*x2 - 3x1^2*x2^2"));
        assert_eq!(transform_p_from_q(&poly("4")), poly("4"));
    }

    #[test]
    fn p_from_q_scaling_identity() {
        let q = poly("x1^2*x2 - 4x1 + x2^3 - 2");
        let p = transform_p_from_q(&q);
        let d = q.degree() as usize;
        for n1 in 1..=5i64 {
            for n2 in 1..=5i64 {
                let lhs = p.eval(&[ratio(1, n1), ratio(1, n2)]).unwrap()
                    * num_traits::pow(ratio(n1 * n2, 1), d);
                assert_eq!(lhs, q.eval(&[ratio(n1, 1), ratio(n2, 1)]).unwrap());
            }
        }
    }

    #[test]
    fn q_from_p_examples() {
        let r = transform_q_from_p(&poly("x1")).unwrap();
        assert_eq!(r.m, BigInt::from(30));
        assert_eq!(r.q, poly("x1 + 30(x1^3 - y1)"));

        let r = transform_q_from_p(&poly("5")).unwrap();
        assert_eq!(r.m, BigInt::from(1));
        assert_eq!(r.q, poly("5"));

        let r = transform_q_from_p(&poly("x1^2")).unwrap();
        assert_eq!(r.first_derivative_bound, BigInt::from(2));
        assert_eq!(r.second_derivative_bound, BigInt::from(2));
        assert_eq!(r.m, BigInt::from(60));
        assert_eq!(r.q, poly("x1^2 + 60(x1^3 - y1)"));
        assert_eq!(r.m_grid_estimate, ratio(60, 1));

        assert!(transform_q_from_p(&poly("y1")).is_err());
    }

    #[test]
    fn certified_m_dominates_grid() {
        let r = transform_q_from_p(&poly("x1^2*x2 - 3x1*x2^2 + x2")).unwrap();
        assert!(Rational::from_integer(r.m.clone()) >= r.m_grid_estimate);
    }

    #[test]
    fn penalty_vanishes_on_cubic_curve() {
        let p = poly("2x1^2*x2 - x1 + 3");
        let r = transform_q_from_p(&p).unwrap();
        let x1 = IntPolynomial::variable(xy_vars(2), "x1").unwrap();
        let x2 = IntPolynomial::variable(xy_vars(2), "x2").unwrap();
        // substitute y_i = x_i^3 symbolically by evaluating at several points
        for a in [ratio(0, 1), ratio(1, 3), ratio(2, 1)] {
            for b in [ratio(-1, 2), ratio(3, 4)] {
                let y1 = x1.pow(3).eval(&[a.clone(), b.clone(), ratio(0, 1), ratio(0, 1)]).unwrap();
                let y2 = x2.pow(3).eval(&[a.clone(), b.clone(), ratio(0, 1), ratio(0, 1)]).unwrap();
                let qv = r.q.eval(&[a.clone(), b.clone(), y1, y2]).unwrap();
                assert_eq!(qv, p.eval(&[a.clone(), b.clone()]).unwrap());
            }
        }
    }
}
