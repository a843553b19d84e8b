use thiserror::Error;

use crate::geometry::AmbiguityFlags;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is outside the supported range [2, 2^62)")]
    ModulusOutOfRange(u64),

    #[error("0 has no multiplicative inverse mod {0}")]
    NotInvertible(u64),

    #[error("value {value} is not a canonical residue mod {modulus}")]
    NonCanonical { value: u64, modulus: u64 },

    #[error("table length {len} does not match modulus {modulus}")]
    TableLength { len: usize, modulus: u64 },

    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error(
        "ambiguous point/line sets: {} duplicate x, {} duplicate slopes",
        .0.duplicate_x_count,
        .0.duplicate_slope_count
    )]
    Ambiguous(AmbiguityFlags),

    #[error("construction unsupported for p = {p} (p1 = {p1} < 2); use the trivial strategy")]
    ConstructionUnsupported { p: u64, p1: u64 },

    #[error("grid point (0, 0) has no image under the transformation")]
    ExcludedPoint,

    #[error("grid coordinate out of range: {0}")]
    GridRange(String),

    #[error("slope equation undefined for k = 0")]
    ZeroStep,

    #[error("q = {q} exceeds the oracle cap {cap} (~{estimated_steps:.3e} table steps)")]
    OracleCap { q: u64, cap: u64, estimated_steps: f64 },

    #[error("malformed document: {0}")]
    Document(String),
}
