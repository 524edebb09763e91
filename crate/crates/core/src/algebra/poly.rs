use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// Univariate polynomial with exact rational coefficients.
///
/// Coefficients are stored in ascending order, `coeffs[i]` multiplies `x^i`.
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BigRationalPoly {
    coeffs: Vec<BigRational>,
}

impl BigRationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `a*x + b`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::new(vec![b, a])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `self(inner(x))`, by Horner's rule.
    pub fn compose(&self, inner: &BigRationalPoly) -> Self {
        let mut out = Self::zero();
        for c in self.coeffs.iter().rev() {
            out = &(&out * inner) + &Self::constant(c.clone());
        }
        out
    }

    /// `self(x + a)`.
    pub fn shift(&self, a: &BigRational) -> Self {
        self.compose(&Self::linear(BigRational::one(), a.clone()))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &BigRationalPoly) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &BigRationalPoly) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> Result<bool, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative()).is_constant())
    }

    /// Yun's squarefree decomposition: monic factors `a_i` with multiplicities `i`
    /// such that `self = lead * prod a_i^i`. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(BigRationalPoly, usize)>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let (mut b, _) = f.div_rem(&a);
        let (c, _) = df.div_rem(&a);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let ai = b.gcd(&d);
            let (nb, _) = b.div_rem(&ai);
            let (nc, _) = d.div_rem(&ai);
            if !ai.is_constant() {
                out.push((ai, i));
            }
            b = nb;
            d = &nc - &b.derivative();
            i += 1;
        }
        Ok(out)
    }

    /// Clears denominators: returns integer coefficients (ascending) of
    /// `m * self` where `m` is the lcm of the denominators.
    pub fn to_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect()
    }

    /// Resultant over the rationals, from the Sylvester matrix of the two
    /// polynomials at their actual degrees.
    pub fn resultant(&self, other: &BigRationalPoly) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let (m, n) = (self.degree(), other.degree());
        let lcm_a = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lcm_b = other.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut a = self.to_integer_coeffs();
        let mut b = other.to_integer_coeffs();
        a.reverse();
        b.reverse();
        let r = super::sylvester_resultant(&a, &b);
        // Res(la*A, lb*B) = la^n lb^m Res(A, B).
        let scale = num_traits::pow(lcm_a, n) * num_traits::pow(lcm_b, m);
        BigRational::new(r, scale)
    }

    /// Exact interpolation through `(x_i, y_i)` with distinct abscissae.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Self {
        // Newton divided differences.
        let n = points.len();
        let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &points[i].0 - &points[i - level].0;
                dd[i] = num / den;
            }
        }
        let mut out = Self::zero();
        for i in (0..n).rev() {
            let factor = Self::linear(BigRational::one(), -points[i].0.clone());
            out = &(&out * &factor) + &Self::constant(dd[i].clone());
        }
        out
    }
}

impl fmt::Debug for BigRationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BigRationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        if abs.is_integer() {
                            write!(f, "{abs}*")?;
                        } else {
                            write!(f, "({abs})*")?;
                        }
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &BigRationalPoly {
    type Output = BigRationalPoly;
    fn add(self, rhs: &BigRationalPoly) -> BigRationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BigRationalPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &BigRationalPoly {
    type Output = BigRationalPoly;
    fn sub(self, rhs: &BigRationalPoly) -> BigRationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BigRationalPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &BigRationalPoly {
    type Output = BigRationalPoly;
    fn mul(self, rhs: &BigRationalPoly) -> BigRationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return BigRationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BigRationalPoly::new(out)
    }
}

impl Neg for &BigRationalPoly {
    type Output = BigRationalPoly;
    fn neg(self) -> BigRationalPoly {
        BigRationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
