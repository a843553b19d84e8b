//! Exact rationals for win probabilities and bound values.
//!
//! Serialized as `{"numerator", "denominator", "decimal"}`. The decimal is
//! presentation only and is ignored when reading.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Fraction = Ratio<u128>;

pub fn to_f64(r: &Fraction) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `ceil(r)` as an integer.
pub fn ceil_u128(r: &Fraction) -> u128 {
    r.ceil().to_integer()
}

#[derive(Serialize)]
struct Repr {
    numerator: u128,
    denominator: u128,
    decimal: f64,
}

#[derive(Deserialize)]
struct ReprIn {
    numerator: u128,
    denominator: u128,
}

pub(crate) fn serialize<S: Serializer>(r: &Fraction, s: S) -> Result<S::Ok, S::Error> {
    Repr {
        numerator: *r.numer(),
        denominator: *r.denom(),
        decimal: to_f64(r),
    }
    .serialize(s)
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fraction, D::Error> {
    let repr = ReprIn::deserialize(d)?;
    if repr.denominator == 0 {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Fraction::new(repr.numerator, repr.denominator))
}
