//! Scalar bound functions and inequality checkers.
//!
//! Two piecewise families appear here. The triangle-density lower bound
//! [`bollobas_h`] lives on right-open intervals `[1 - 1/t, 1 - 1/(t+1))`.
//! The energy upper bound and the gap `δ = α^3 - energy_upper_bound(α)` live
//! on closed intervals `I_t = [1/(t+1), 1/t]`, where on `I_t`
//! `δ(α) = -t(t+1)α^4 + (2t+1)α^3 - α^2`. At shared endpoints the lower `t`
//! is returned.

mod checks;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::{ratio, Error, Rational, Result};

pub use checks::{
    check_energy_bound, check_energy_doubling, check_kneser, check_plunnecke_ruzsa,
    sweep_pairs, sweep_subsets, InequalityCheck, SweepReport,
};

fn r(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn check_unit(x: &Rational, what: &str) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::InvalidArgument(format!("{what} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Which interval family a [`PiecewiseRational`] is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    /// `[1 - 1/t, 1 - 1/(t+1))` for `t >= 1`, plus the point `1`.
    RightOpen,
    /// `[1/(t+1), 1/t]` for `t >= 1`, plus the point `0`.
    Reciprocal,
}

/// A function given by one rational expression per interval of a partition.
#[derive(Clone, Copy)]
pub struct PiecewiseRational {
    pub partition: Partition,
    piece: fn(u64, &Rational) -> Rational,
    /// Value at the point not covered by any interval (`1` resp. `0`).
    endpoint: fn() -> Rational,
}

impl std::fmt::Debug for PiecewiseRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PiecewiseRational").field("partition", &self.partition).finish()
    }
}

impl PiecewiseRational {
    pub fn interval(&self, t: u64) -> (Rational, Rational) {
        match self.partition {
            Partition::RightOpen => (ratio(1, 1) - ratio(1, t as i64), ratio(1, 1) - ratio(1, t as i64 + 1)),
            Partition::Reciprocal => (ratio(1, t as i64 + 1), ratio(1, t as i64)),
        }
    }

    /// Every `t` whose interval contains `x`, ascending. Empty at the
    /// uncovered endpoint.
    pub fn branches(&self, x: &Rational) -> Vec<u64> {
        match self.partition {
            Partition::RightOpen => {
                if *x >= Rational::one() {
                    return vec![];
                }
                let t = (Rational::one() / (Rational::one() - x)).floor();
                vec![t.to_integer().to_u64().expect("t fits")]
            }
            Partition::Reciprocal => {
                if x.is_zero() {
                    return vec![];
                }
                let inv = x.recip();
                let t = inv.floor().to_integer().to_u64().expect("t fits");
                if inv.is_integer() {
                    // x = 1/t lies in I_{t-1} and I_t
                    if t == 1 {
                        vec![1]
                    } else {
                        vec![t - 1, t]
                    }
                } else {
                    vec![t]
                }
            }
        }
    }

    pub fn eval_branch(&self, t: u64, x: &Rational) -> Rational {
        (self.piece)(t, x)
    }

    /// Value on the lowest branch containing `x`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        check_unit(x, "argument")?;
        Ok(match self.branches(x).first() {
            Some(&t) => self.eval_branch(t, x),
            None => (self.endpoint)(),
        })
    }

    /// Both one-sided values at the breakpoint shared by intervals `t` and
    /// `t + 1`, and whether they agree.
    pub fn continuity_at(&self, t: u64) -> (Rational, Rational, bool) {
        let x = match self.partition {
            Partition::RightOpen => self.interval(t).1,
            Partition::Reciprocal => self.interval(t).0,
        };
        let a = self.eval_branch(t, &x);
        let b = self.eval_branch(t + 1, &x);
        let same = a == b;
        (a, b, same)
    }
}

fn bollobas_piece(t: u64, x: &Rational) -> Rational {
    let t = r(t);
    let slope = (&t * &t * r(3) - &t - r(2)) / (&t * (&t + r(1)));
    let shift = (&t - r(1)) * r(2) / (&t + r(1));
    slope * x - shift
}

fn delta_piece(t: u64, a: &Rational) -> Rational {
    let t = r(t);
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    -(&t * (&t + r(1))) * a4 + (&t * r(2) + r(1)) * a3 - a2
}

fn delta_prime_piece(t: u64, a: &Rational) -> Rational {
    let t = r(t);
    let a2 = a * a;
    let a3 = &a2 * a;
    -(&t * (&t + r(1)) * r(4)) * a3 + (&t * r(2) + r(1)) * r(3) * a2 - a * r(2)
}

fn delta_double_prime_piece(t: u64, a: &Rational) -> Rational {
    let t = r(t);
    let a2 = a * a;
    -(&t * (&t + r(1)) * r(12)) * a2 + (&t * r(2) + r(1)) * r(6) * a - r(2)
}

pub const BOLLOBAS_H: PiecewiseRational = PiecewiseRational {
    partition: Partition::RightOpen,
    piece: bollobas_piece,
    endpoint: Rational::one,
};

pub const DELTA: PiecewiseRational = PiecewiseRational {
    partition: Partition::Reciprocal,
    piece: delta_piece,
    endpoint: Rational::zero,
};

pub const DELTA_PRIME: PiecewiseRational = PiecewiseRational {
    partition: Partition::Reciprocal,
    piece: delta_prime_piece,
    endpoint: Rational::zero,
};

pub const DELTA_DOUBLE_PRIME: PiecewiseRational = PiecewiseRational {
    partition: Partition::Reciprocal,
    piece: delta_double_prime_piece,
    endpoint: Rational::zero,
};

/// Lower bound on the triangle density of a graph with edge density `x`;
/// `h(1) = 1`.
pub fn bollobas_h(x: &Rational) -> Result<Rational> {
    BOLLOBAS_H.eval(x)
}

/// `y >= bollobas_h(x)` for `(x, y)` in the unit square.
pub fn in_region_graph(x: &Rational, y: &Rational) -> Result<bool> {
    check_unit(y, "y")?;
    Ok(*y >= bollobas_h(x)?)
}

/// Fractional part `x - floor(x)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// `α^3 - α^4 ({1/α} - {1/α}^2)`, and `0` at `α = 0`.
pub fn energy_upper_bound(alpha: &Rational) -> Result<Rational> {
    check_unit(alpha, "alpha")?;
    if alpha.is_zero() {
        return Ok(Rational::zero());
    }
    let f = frac(&alpha.recip());
    let a2 = alpha * alpha;
    let a3 = &a2 * alpha;
    let a4 = &a3 * alpha;
    Ok(&a3 - a4 * (&f - &f * &f))
}

/// `β <= energy_upper_bound(α)`.
pub fn in_region_energy(alpha: &Rational, beta: &Rational) -> Result<bool> {
    check_unit(beta, "beta")?;
    Ok(*beta <= energy_upper_bound(alpha)?)
}

pub fn delta(alpha: &Rational) -> Result<Rational> {
    DELTA.eval(alpha)
}

pub fn delta_prime(alpha: &Rational) -> Result<Rational> {
    DELTA_PRIME.eval(alpha)
}

pub fn delta_double_prime(alpha: &Rational) -> Result<Rational> {
    DELTA_DOUBLE_PRIME.eval(alpha)
}

/// Which derivative a claim bounds and in which direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// `δ'(α) >= bound`
    FirstAtLeast,
    /// `δ''(α) <= bound`
    SecondAtMost,
}

/// One interval component of a derivative claim, evaluated on branch `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimComponent {
    pub kind: ClaimKind,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub hi: Rational,
    pub branch: u64,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub bound: Rational,
    pub points: usize,
    /// The extreme value over the grid (minimum of `δ'`, maximum of `δ''`).
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub extreme: Rational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub extreme_at: Rational,
    #[serde(serialize_with = "crate::json::ser_rationals")]
    pub failures: Vec<Rational>,
    pub holds: bool,
}

/// Value of the neighbouring branch at an endpoint shared with another
/// interval; reported, not asserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointValue {
    pub kind: ClaimKind,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub alpha: Rational,
    pub branch: u64,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaClaimsReport {
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub step: Rational,
    pub max_t: u64,
    pub components: Vec<ClaimComponent>,
    pub other_branches: Vec<EndpointValue>,
    pub points: usize,
    pub holds: bool,
}

/// Grid points `lo, hi` and every multiple of `step` strictly between.
fn grid(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut pts = vec![lo.clone()];
    let mut m = (lo / step).floor() + Rational::one();
    loop {
        let x = &m * step;
        if x >= *hi {
            break;
        }
        if x > *lo {
            pts.push(x);
        }
        m += Rational::one();
    }
    if hi != lo {
        pts.push(hi.clone());
    }
    pts
}

/// Exact evaluation of the two derivative claims at grid points:
/// `δ' >= 1/20` on `[1/3, 2/5] ∪ [1/2, 7/10]` and `δ'' <= -1/2` on
/// `[2/5, 1/2] ∪ [7/10, 1] ∪ I_3 ∪ ... ∪ I_max_t`. Each component sits inside
/// one interval `I_t` and uses that branch. A grid check, not a proof.
pub fn verify_delta_derivative_claims(step: &Rational, max_t: u64) -> Result<DeltaClaimsReport> {
    if !step.is_positive() {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let first = ratio(1, 20);
    let second = ratio(-1, 2);
    let mut specs: Vec<(ClaimKind, Rational, Rational, u64)> = vec![
        (ClaimKind::FirstAtLeast, ratio(1, 3), ratio(2, 5), 2),
        (ClaimKind::FirstAtLeast, ratio(1, 2), ratio(7, 10), 1),
        (ClaimKind::SecondAtMost, ratio(2, 5), ratio(1, 2), 2),
        (ClaimKind::SecondAtMost, ratio(7, 10), ratio(1, 1), 1),
    ];
    for t in 3..=max_t {
        let (lo, hi) = DELTA.interval(t);
        specs.push((ClaimKind::SecondAtMost, lo, hi, t));
    }

    let mut components = Vec::new();
    let mut other_branches = Vec::new();
    for (kind, lo, hi, t) in specs {
        let (f, bound) = match kind {
            ClaimKind::FirstAtLeast => (&DELTA_PRIME, first.clone()),
            ClaimKind::SecondAtMost => (&DELTA_DOUBLE_PRIME, second.clone()),
        };
        let pts = grid(&lo, &hi, step);
        let mut extreme: Option<(Rational, Rational)> = None;
        let mut failures = Vec::new();
        for x in &pts {
            let v = f.eval_branch(t, x);
            let ok = match kind {
                ClaimKind::FirstAtLeast => v >= bound,
                ClaimKind::SecondAtMost => v <= bound,
            };
            if !ok {
                failures.push(x.clone());
            }
            let better = match (&extreme, kind) {
                (None, _) => true,
                (Some((e, _)), ClaimKind::FirstAtLeast) => v < *e,
                (Some((e, _)), ClaimKind::SecondAtMost) => v > *e,
            };
            if better {
                extreme = Some((v, x.clone()));
            }
        }
        for x in [&lo, &hi] {
            for b in f.branches(x) {
                if b != t {
                    other_branches.push(EndpointValue {
                        kind,
                        alpha: x.clone(),
                        branch: b,
                        value: f.eval_branch(b, x),
                    });
                }
            }
        }
        let (extreme, extreme_at) = extreme.expect("grid is nonempty");
        components.push(ClaimComponent {
            kind,
            holds: failures.is_empty(),
            lo,
            hi,
            branch: t,
            bound,
            points: pts.len(),
            extreme,
            extreme_at,
            failures,
        });
    }
    Ok(DeltaClaimsReport {
        step: step.clone(),
        max_t,
        points: components.iter().map(|c| c.points).sum(),
        holds: components.iter().all(|c| c.holds),
        components,
        other_branches,
    })
}

/// `h(1 - 1/t) = (t-1)(t-2)/t^2`.
pub fn bollobas_breakpoint_value(t: u64) -> Rational {
    let t = t as i64;
    ratio((t - 1) * (t - 2), t * t)
}

/// `x / y` for small integers as a [`Rational`] with `BigInt` parts; used by
/// sweeps that enumerate grids.
pub fn grid_point(num: u64, den: u64) -> Rational {
    let g = num.gcd(&den).max(1);
    Rational::new(BigInt::from(num / g), BigInt::from(den / g))
}
