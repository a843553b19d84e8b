//! Arithmetic in prime fields `F_p` with `p < 2^62`, plus the integer helpers
//! (primality, exact cube root) the rest of the crate builds on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Witnesses that make Miller-Rabin deterministic for every `n < 3.3 * 10^24`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `t` with `t^3 <= n`, by bisection on exact cubes.
pub fn icbrt(n: u64) -> u64 {
    // cbrt(2^64) < 2_642_246
    let (mut lo, mut hi) = (0u64, 2_642_246u64);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if (mid as u128).pow(3) <= n as u128 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// A validated prime modulus `2 <= p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

/// A canonical residue in `[0, p)`.
///
/// The modulus is not carried along; arithmetic goes through [`PrimeModulus`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<FieldElement> for u64 {
    fn from(e: FieldElement) -> u64 {
        e.0
    }
}

impl PrimeModulus {
    pub const LIMIT: u64 = 1 << 62;

    pub fn new(p: u64) -> Result<Self> {
        if !(2..Self::LIMIT).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn element(self, v: u64) -> FieldElement {
        FieldElement(v % self.0)
    }

    pub fn element_signed(self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.0 as i64) as u64)
    }

    /// Accepts `v` only if it is already canonical.
    pub fn canonical(self, v: u64) -> Result<FieldElement> {
        if v < self.0 {
            Ok(FieldElement(v))
        } else {
            Err(Error::NonCanonical {
                value: v,
                modulus: self.0,
            })
        }
    }

    pub fn contains(self, e: FieldElement) -> bool {
        e.0 < self.0
    }

    pub fn one(self) -> FieldElement {
        FieldElement(1)
    }

    /// Every residue `0, 1, ..., p - 1` in order.
    pub fn elements(self) -> impl DoubleEndedIterator<Item = FieldElement> + Clone {
        (0..self.0).map(FieldElement)
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.0 { s - self.0 } else { s })
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0 + self.0 - b.0)
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.0 - a.0)
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(mul_mod(a.0, b.0, self.0))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::NotInvertible(self.0));
        }
        let (mut r0, mut r1) = (self.0 as i128, a.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FieldElement(t0.rem_euclid(self.0 as i128) as u64))
    }

    pub fn div(self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
