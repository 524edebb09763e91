//! Polynomials over `Q(sqrt(delta))`, enough to state and check Chebyshev
//! witnesses whose scaling constant is a square root.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::BigRationalPoly;

/// `a + b sqrt(delta)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad {
    pub re: BigRational,
    pub im: BigRational,
}

impl Quad {
    pub fn rational(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    fn mul(&self, other: &Quad, delta: &BigRational) -> Quad {
        Quad {
            re: &self.re * &other.re + &self.im * &other.im * delta,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn inv(&self, delta: &BigRational) -> Quad {
        let norm = &self.re * &self.re - &self.im * &self.im * delta;
        Quad { re: &self.re / &norm, im: -(&self.im / &norm) }
    }

    fn pow(&self, e: usize, delta: &BigRational) -> Quad {
        let mut out = Quad::rational(BigRational::one());
        for _ in 0..e {
            out = out.mul(self, delta);
        }
        out
    }
}

/// `re(x) + sqrt(delta) * im(x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadPoly {
    delta: BigInt,
    re: BigRationalPoly,
    im: BigRationalPoly,
}

impl QuadPoly {
    pub fn rational(delta: &BigInt, p: BigRationalPoly) -> Self {
        Self { delta: delta.clone(), re: p, im: BigRationalPoly::zero() }
    }

    pub fn constant(delta: &BigInt, c: &Quad) -> Self {
        Self {
            delta: delta.clone(),
            re: BigRationalPoly::constant(c.re.clone()),
            im: BigRationalPoly::constant(c.im.clone()),
        }
    }

    /// `a x + b`.
    pub fn linear(delta: &BigInt, a: &Quad, b: &Quad) -> Self {
        Self {
            delta: delta.clone(),
            re: BigRationalPoly::linear(a.re.clone(), b.re.clone()),
            im: BigRationalPoly::linear(a.im.clone(), b.im.clone()),
        }
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn degree(&self) -> usize {
        self.re.degree().max(self.im.degree())
    }

    /// Rational part.
    pub fn re(&self) -> &BigRationalPoly {
        &self.re
    }

    /// Coefficient of `sqrt(delta)`.
    pub fn im(&self) -> &BigRationalPoly {
        &self.im
    }

    /// The polynomial itself when its irrational part vanishes.
    pub fn as_rational(&self) -> Option<&BigRationalPoly> {
        self.im.is_zero().then_some(&self.re)
    }

    fn coeff(&self, i: usize) -> Quad {
        Quad { re: self.re.coeff(i), im: self.im.coeff(i) }
    }

    fn delta_q(&self) -> BigRational {
        BigRational::from_integer(self.delta.clone())
    }

    pub fn add(&self, other: &QuadPoly) -> QuadPoly {
        QuadPoly { delta: self.delta.clone(), re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn mul(&self, other: &QuadPoly) -> QuadPoly {
        let d = BigRationalPoly::constant(self.delta_q());
        QuadPoly {
            delta: self.delta.clone(),
            re: &(&self.re * &other.re) + &(&(&self.im * &other.im) * &d),
            im: &(&self.re * &other.im) + &(&self.im * &other.re),
        }
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &QuadPoly) -> QuadPoly {
        let mut out = QuadPoly::rational(&self.delta, BigRationalPoly::zero());
        for i in (0..=self.degree()).rev() {
            out = out.mul(inner).add(&QuadPoly::constant(&self.delta, &self.coeff(i)));
        }
        out
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "sqrt({})*({})", self.delta, self.im)
        } else {
            write!(f, "{} + sqrt({})*({})", self.re, self.delta, self.im)
        }
    }
}

impl fmt::Debug for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A square root of the rational `q`, as an element of `Q(sqrt(delta))`.
/// Returns `delta = 1` when `q` is a rational square.
pub fn sqrt_rational(q: &BigRational) -> (BigInt, Quad) {
    let n = q.numer() * q.denom();
    let den = q.denom().clone();
    if !n.is_negative() {
        let s = n.sqrt();
        if &s * &s == n {
            return (BigInt::one(), Quad::rational(BigRational::new(s, den)));
        }
    }
    (n, Quad { re: BigRational::zero(), im: BigRational::new(BigInt::one(), den) })
}

pub(crate) fn quad_pow(c: &Quad, e: usize, delta: &BigInt) -> Quad {
    c.pow(e, &BigRational::from_integer(delta.clone()))
}

pub(crate) fn quad_inv(c: &Quad, delta: &BigInt) -> Quad {
    c.inv(&BigRational::from_integer(delta.clone()))
}

pub(crate) fn quad_mul(a: &Quad, b: &Quad, delta: &BigInt) -> Quad {
    a.mul(b, &BigRational::from_integer(delta.clone()))
}
