//! JSON rendering of exact rationals: `{"num": .., "den": .., "decimal": ".."}`.
//! Numerators and denominators that fit in an `i64` are JSON numbers, larger
//! ones are decimal strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serializer;
use serde_json::{json, Value};

use crate::Rational;

const DECIMAL_PLACES: u32 = 12;

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

/// `r` rounded half away from zero to 12 places, trailing zeros trimmed.
pub fn decimal(r: &Rational) -> String {
    let scale: BigInt = num_traits::pow(BigInt::from(10u8), DECIMAL_PLACES as usize);
    let scaled: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let twice_den: BigInt = r.denom() * 2;
    let q = scaled.div_floor(&twice_den);
    let (int, frac) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() { "-" } else { "" };
    let frac = format!("{:0>width$}", frac.to_string(), width = DECIMAL_PLACES as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn rational(r: &Rational) -> Value {
    json!({
        "num": int_value(r.numer()),
        "den": int_value(r.denom()),
        "decimal": decimal(r),
    })
}

pub fn opt_rational(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, rational)
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational(r), s)
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&opt_rational(r.as_ref()), s)
}

pub fn ser_rationals<S: Serializer>(r: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Value> = r.iter().map(rational).collect();
    serde::Serialize::serialize(&v, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn renders_rationals() {
        assert_eq!(rational(&ratio(1, 2)), json!({"num": 1, "den": 2, "decimal": "0.5"}));
        assert_eq!(decimal(&ratio(-2, 3)), "-0.666666666667");
        assert_eq!(decimal(&ratio(7, 1)), "7");
        assert_eq!(decimal(&ratio(-1, 10_i64.pow(14))), "0");
        let big = Rational::from_integer(num_traits::pow(BigInt::from(10u8), 30));
        assert_eq!(rational(&big)["num"], json!("1000000000000000000000000000000"));
    }
}
