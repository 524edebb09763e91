use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ln_bigint, AlgebraError};

/// A point `[a:b]` of the projective line over the rationals, kept in the
/// unique representative with `gcd(a, b) = 1` and either `b > 0` or `[1:0]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[String; 2]", try_from = "[String; 2]")]
pub struct ProjectivePointQ {
    a: BigInt,
    b: BigInt,
}

impl ProjectivePointQ {
    /// Normalizes integer coordinates.
    pub fn new(a: BigInt, b: BigInt) -> Result<Self, AlgebraError> {
        if a.is_zero() && b.is_zero() {
            return Err(AlgebraError::InvalidPoint);
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / &g, b / &g);
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
        }
        Ok(Self { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, AlgebraError> {
        Self::new(a.into(), b.into())
    }

    /// The affine point `x = [x:1]`.
    pub fn affine(x: i64) -> Self {
        Self { a: x.into(), b: BigInt::one() }
    }

    pub fn infinity() -> Self {
        Self { a: BigInt::one(), b: BigInt::zero() }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// `max(|a|, |b|)`.
    pub fn max_abs(&self) -> BigInt {
        self.a.abs().max(self.b.abs())
    }

    pub fn height(&self) -> f64 {
        weil_height(self)
    }
}

/// Clears denominators by their lcm, then reduces by the gcd.
pub fn normalize_point(a: &BigRational, b: &BigRational) -> Result<ProjectivePointQ, AlgebraError> {
    let l = a.denom().lcm(b.denom());
    let scale = BigRational::from_integer(l);
    let ai = (a * &scale).to_integer();
    let bi = (b * &scale).to_integer();
    ProjectivePointQ::new(ai, bi)
}

/// `log max(|a|, |b|)` in normalized coordinates.
pub fn weil_height(p: &ProjectivePointQ) -> f64 {
    ln_bigint(&p.max_abs())
}

impl fmt::Display for ProjectivePointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.a, self.b)
    }
}

impl fmt::Debug for ProjectivePointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<ProjectivePointQ> for [String; 2] {
    fn from(p: ProjectivePointQ) -> Self {
        [p.a.to_string(), p.b.to_string()]
    }
}

impl TryFrom<[String; 2]> for ProjectivePointQ {
    type Error = String;
    fn try_from(v: [String; 2]) -> Result<Self, Self::Error> {
        let a = BigInt::from_str(&v[0]).map_err(|e| e.to_string())?;
        let b = BigInt::from_str(&v[1]).map_err(|e| e.to_string())?;
        ProjectivePointQ::new(a, b).map_err(|e| e.to_string())
    }
}
