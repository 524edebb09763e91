use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::DynamicsError;
use crate::algebra::{BigRationalPoly, BinaryFormZ, ProjectivePointQ};

/// A degree-`d` self-map `[F(X,Z) : G(X,Z)]` of the projective line over the rationals.
///
/// The pair of forms is normalized jointly: the `2d + 2` coefficients have
/// content 1 and the first nonzero coefficient of `F` (or of `G` when `F` is
/// zero) is positive. The resultant is nonzero and cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMapQ {
    num: BinaryFormZ,
    den: BinaryFormZ,
    resultant: BigInt,
}

impl RationalMapQ {
    pub fn new(num: BinaryFormZ, den: BinaryFormZ) -> Result<Self, DynamicsError> {
        let resultant = num.resultant(&den)?;
        if resultant.is_zero() {
            return Err(DynamicsError::DegenerateMap);
        }
        let content = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let negative = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let k = if negative { -content } else { content };
        let num = BinaryFormZ::new(num.coeffs().iter().map(|c| c / &k).collect())?;
        let den = BinaryFormZ::new(den.coeffs().iter().map(|c| c / &k).collect())?;
        let resultant = num.resultant(&den)?;
        Ok(Self { num, den, resultant })
    }

    /// Map from integer coefficient lists `c_0..c_d` (leading `X^d` first).
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self, DynamicsError> {
        Self::new(BinaryFormZ::from_ints(num)?, BinaryFormZ::from_ints(den)?)
    }

    /// Map from rational coefficient lists `c_0..c_d`; denominators are cleared jointly.
    pub fn from_rational(num: &[BigRational], den: &[BigRational]) -> Result<Self, DynamicsError> {
        let l = num
            .iter()
            .chain(den)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lift = |v: &[BigRational]| -> Vec<BigInt> {
            v.iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        };
        Self::new(BinaryFormZ::new(lift(num))?, BinaryFormZ::new(lift(den))?)
    }

    /// The polynomial map `x -> p(x)` of degree `deg p`.
    pub fn from_poly(p: &BigRationalPoly) -> Result<Self, DynamicsError> {
        let d = p.degree();
        let mut num: Vec<BigRational> = p.coeffs().to_vec();
        num.reverse();
        let mut den = vec![BigRational::zero(); d + 1];
        den[d] = BigRational::one();
        Self::from_rational(&num, &den)
    }

    /// Polynomial map from ascending integer coefficients.
    pub fn poly(ascending: &[i64]) -> Result<Self, DynamicsError> {
        Self::from_poly(&BigRationalPoly::from_ints(ascending))
    }

    pub fn degree(&self) -> usize {
        self.num.degree()
    }

    pub fn num(&self) -> &BinaryFormZ {
        &self.num
    }

    pub fn den(&self) -> &BinaryFormZ {
        &self.den
    }

    pub fn resultant(&self) -> &BigInt {
        &self.resultant
    }

    /// Largest absolute coefficient over both forms.
    pub fn max_coeff(&self) -> BigInt {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// True when the denominator form is `c * Z^d`, i.e. the map is a polynomial in `x`.
    pub fn is_polynomial(&self) -> bool {
        let c = self.den.coeffs();
        c[..c.len() - 1].iter().all(Zero::is_zero)
    }

    /// The affine polynomial `F(x,1) / G(x,1)` when the map is a polynomial.
    pub fn as_polynomial(&self) -> Option<BigRationalPoly> {
        if !self.is_polynomial() {
            return None;
        }
        let c = BigRational::from_integer(self.den.coeffs()[self.degree()].clone());
        Some(self.num.affine().scale(&c.recip()))
    }

    /// `[F(a,b) : G(a,b)]`, normalized. Never degenerate since the resultant is nonzero.
    pub fn evaluate(&self, p: &ProjectivePointQ) -> ProjectivePointQ {
        let x = self.num.eval(p.a(), p.b());
        let z = self.den.eval(p.a(), p.b());
        ProjectivePointQ::new(x, z).expect("nonzero resultant rules out a common zero")
    }

    /// Canonical text used for hashing and reports.
    pub fn canonical(&self) -> String {
        let join = |f: &BinaryFormZ| {
            f.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        };
        format!("[{}]/[{}]", join(&self.num), join(&self.den))
    }
}

impl fmt::Display for RationalMapQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_polynomial() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num.affine(), self.den.affine()),
        }
    }
}

impl fmt::Debug for RationalMapQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMapQ({})", self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        let sq = RationalMapQ::poly(&[0, 0, 1]).unwrap();
        assert_eq!(sq.evaluate(&ProjectivePointQ::from_ints(3, 2).unwrap()).to_string(), "[9:4]");
        let f = RationalMapQ::poly(&[1, 0, 1]).unwrap();
        assert_eq!(f.evaluate(&ProjectivePointQ::affine(0)).to_string(), "[1:1]");
        // (x^2 + 2) / x
        let g = RationalMapQ::from_ints(&[1, 0, 2], &[0, 1, 0]).unwrap();
        assert_eq!(g.evaluate(&ProjectivePointQ::infinity()), ProjectivePointQ::infinity());
        assert_eq!(g.resultant().abs(), BigInt::from(2));
    }

    #[test]
    fn joint_normalization() {
        let f = RationalMapQ::from_ints(&[-4, 0, 2], &[0, 0, -2]).unwrap();
        assert_eq!(f.canonical(), "[2,0,-1]/[0,0,1]");
        assert!(f.is_polynomial());
        assert_eq!(f.as_polynomial().unwrap(), BigRationalPoly::from_ints(&[-1, 0, 2]));
        let h = RationalMapQ::from_rational(
            &[BigRational::new(1.into(), 2.into()), BigRational::zero(), BigRational::one()],
            &[BigRational::zero(), BigRational::zero(), BigRational::new(1.into(), 3.into())],
        )
        .unwrap();
        assert_eq!(h.canonical(), "[3,0,6]/[0,0,2]");
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        assert_eq!(RationalMapQ::from_ints(&[0, 1, 0], &[0, 1, 0]), Err(DynamicsError::DegenerateMap));
        assert!(matches!(
            RationalMapQ::from_ints(&[1, 0, 0], &[1, 0]),
            Err(DynamicsError::Algebra(_))
        ));
    }
}
