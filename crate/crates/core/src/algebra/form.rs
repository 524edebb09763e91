use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{sylvester_resultant, AlgebraError, BigRationalPoly};

/// Integer binary form `c_0 X^d + c_1 X^{d-1} Z + ... + c_d Z^d`.
///
/// Coefficients are held exactly as given; [`BinaryFormZ::normalized`] divides
/// out the content and fixes the sign of the first nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryFormZ {
    coeffs: Vec<BigInt>,
}

impl BinaryFormZ {
    /// Builds a form of degree `coeffs.len() - 1` (must be at least 1).
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if coeffs.len() < 2 {
            return Err(AlgebraError::EmptyForm);
        }
        Ok(Self { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self, AlgebraError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Degree-`d` form of `x^d * p(X/Z)`-style homogenization of an ascending
    /// integer coefficient list, padded to degree `d`.
    pub fn homogenize(ascending: &[BigInt], d: usize) -> Result<Self, AlgebraError> {
        let mut c = vec![BigInt::zero(); d + 1];
        for (i, a) in ascending.iter().enumerate() {
            c[d - i] = a.clone();
        }
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `c_0..c_d`, `c_0` multiplying `X^d`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn normalized(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().map(|c| c / &g).collect();
        if coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
        }
        Self { coeffs }
    }

    /// `F(a, b)`.
    pub fn eval(&self, a: &BigInt, b: &BigInt) -> BigInt {
        // Horner in the ratio, homogenized: sum c_i a^{d-i} b^i
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        let d = self.degree();
        let mut apows = Vec::with_capacity(d + 1);
        let mut ap = BigInt::one();
        for _ in 0..=d {
            apows.push(ap.clone());
            ap *= a;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &apows[d - i] * &bpow;
            }
            bpow *= b;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Coefficient-wise `a*self + b*other` for forms of equal degree.
    pub fn combine(&self, a: &BigInt, other: &BinaryFormZ, b: &BigInt) -> Result<Self, AlgebraError> {
        if self.degree() != other.degree() {
            return Err(AlgebraError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Partial derivatives `(dF/dX, dF/dZ)`, both of degree `d - 1`.
    pub fn partials(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let d = self.degree();
        let dx = (0..d).map(|i| &self.coeffs[i] * BigInt::from(d - i)).collect();
        let dz = (1..=d).map(|i| &self.coeffs[i] * BigInt::from(i)).collect();
        (dx, dz)
    }

    /// Discriminant of the form, normalized so that for `aX^2 + bXZ + cZ^2`
    /// it equals `b^2 - 4ac`. Vanishes iff the form has a repeated projective
    /// root (including a repeated root at `[1:0]`).
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d == 1 {
            return BigInt::one();
        }
        let (dx, dz) = self.partials();
        // Res(F_X, F_Z) = (-1)^{d(d-1)/2} d^{d-2} Disc(F)
        let r = sylvester_resultant(&dx, &dz);
        let scale = num_traits::pow(BigInt::from(d), d - 2);
        let q = &r / &scale;
        debug_assert!((&q * &scale) == r);
        if (d * (d - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    /// Dehomogenized polynomial `F(x, 1)`, ascending coefficients.
    pub fn affine(&self) -> BigRationalPoly {
        let mut asc = self.coeffs.clone();
        asc.reverse();
        BigRationalPoly::from_bigints(&asc)
    }
}

/// Sylvester resultant of two binary forms of equal degree `d >= 1`.
///
/// Zero iff the forms share a projective root over the algebraic closure.
pub fn resultant(f: &BinaryFormZ, g: &BinaryFormZ) -> Result<BigInt, AlgebraError> {
    if f.degree() != g.degree() {
        return Err(AlgebraError::DegreeMismatch(f.degree(), g.degree()));
    }
    Ok(sylvester_resultant(&f.coeffs, &g.coeffs))
}

impl BinaryFormZ {
    pub fn resultant(&self, other: &BinaryFormZ) -> Result<BigInt, AlgebraError> {
        resultant(self, other)
    }
}

impl fmt::Debug for BinaryFormZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryFormZ{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}
