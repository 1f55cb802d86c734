//! Exact rational scalars and their JSON encoding.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integers that fit in an `i64` become JSON numbers, larger ones decimal strings.
pub fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("expected an integer, got {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("expected an integer, got {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

/// Writes `num` and `den` fields for `q` into a JSON object.
pub fn put_rational(obj: &mut serde_json::Map<String, Value>, q: &Rational) {
    obj.insert("num".into(), bigint_to_json(q.numer()));
    obj.insert("den".into(), bigint_to_json(q.denom()));
}

/// Reads `num`/`den` (default 1); rejects a zero denominator.
pub fn get_rational(obj: &serde_json::Map<String, Value>) -> Result<Rational> {
    let num = bigint_from_json(obj.get("num").ok_or_else(|| Error::Parse("missing `num`".into()))?)?;
    let den = match obj.get("den") {
        Some(v) => bigint_from_json(v)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

/// Formats a coefficient for text output: `3`, `-1/2`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
