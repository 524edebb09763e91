//! Critical values through the pencil discriminant `D(w) = disc(F - w G)`.
//!
//! `ord_w D = sum (e_i - 1)` over the fiber of `w`, so the finite critical
//! values are the roots of `D`, and infinity carries the degree deficit
//! `2d - 2 - deg D`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::HypothesisError;
use crate::algebra::{BigRationalPoly, BinaryFormZ};
use crate::dynamics::RationalMapQ;

/// Random target coordinates are drawn with entries in `[-7, 7]`.
pub const MOBIUS_ENTRY_BOUND: i64 = 7;
pub const MOBIUS_TRIES: usize = 32;
const MOBIUS_SEED: u64 = 0x6372_6974;

/// Integer matrix `[[a, b], [c, d]]` acting on the target as `[aF + bG : cF + dG]`.
pub type Mobius = [[i64; 2]; 2];

pub const IDENTITY: Mobius = [[1, 0], [0, 1]];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalFactor {
    pub id: usize,
    #[serde(serialize_with = "super::display")]
    pub factor: BigRationalPoly,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalData {
    pub degree: usize,
    /// `D(w)` in the original coordinate.
    #[serde(serialize_with = "super::display")]
    pub finite_critical_value_poly: BigRationalPoly,
    /// Squarefree factors of `D(w)`: every root of `factor` is a critical value whose
    /// ramification indices satisfy `sum (e_i - 1) = multiplicity`.
    pub profile: Vec<CriticalFactor>,
    pub infinity_multiplicity: usize,
    pub infinity_is_critical_value: bool,
    /// A target coordinate in which infinity is not a critical value.
    pub chart: Mobius,
    #[serde(serialize_with = "super::display")]
    pub chart_poly: BigRationalPoly,
}

impl CriticalData {
    /// Total ramification counted through the critical values; always `2d - 2`.
    pub fn total_ramification(&self) -> usize {
        self.profile.iter().map(|f| f.factor.degree() * f.multiplicity).sum::<usize>() + self.infinity_multiplicity
    }
}

fn apply(m: &Mobius, f: &RationalMapQ) -> (BinaryFormZ, BinaryFormZ) {
    let b = |x: i64| BigInt::from(x);
    let num = f.num().combine(&b(m[0][0]), f.den(), &b(m[0][1])).expect("equal degrees");
    let den = f.num().combine(&b(m[1][0]), f.den(), &b(m[1][1])).expect("equal degrees");
    (num, den)
}

/// `disc(F - w G)` as a polynomial in `w`, by interpolation at `w = 0..=2d-2`.
pub fn pencil_discriminant(num: &BinaryFormZ, den: &BinaryFormZ) -> BigRationalPoly {
    let d = num.degree();
    let points: Vec<(BigRational, BigRational)> = (0..=(2 * d - 2) as i64)
        .map(|w| {
            let form = num.combine(&BigInt::one(), den, &BigInt::from(-w)).expect("equal degrees");
            (BigRational::from_integer(w.into()), BigRational::from_integer(form.discriminant()))
        })
        .collect();
    BigRationalPoly::interpolate(&points)
}

fn random_mobius(rng: &mut ChaCha8Rng) -> Mobius {
    loop {
        let mut e = || rng.gen_range(-MOBIUS_ENTRY_BOUND..=MOBIUS_ENTRY_BOUND);
        let m = [[e(), e()], [e(), e()]];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
            return m;
        }
    }
}

/// Target charts in a fixed order: the identity first, then seeded random ones.
fn charts() -> impl Iterator<Item = Mobius> {
    let mut rng = ChaCha8Rng::seed_from_u64(MOBIUS_SEED);
    std::iter::once(IDENTITY).chain((0..MOBIUS_TRIES).map(move |_| random_mobius(&mut rng)))
}

fn full_degree(d: usize, p: &BigRationalPoly) -> bool {
    !p.is_zero() && p.degree() == 2 * d - 2
}

pub fn critical_values(f: &RationalMapQ) -> Result<CriticalData, HypothesisError> {
    let d = f.degree();
    if d < 2 {
        return Err(HypothesisError::DegreeTooSmall { degree: d, required: 2 });
    }
    let disc = pencil_discriminant(f.num(), f.den());
    let infinity_multiplicity = 2 * d - 2 - if disc.is_zero() { 0 } else { disc.degree() };
    let profile = disc
        .squarefree_decomposition()?
        .into_iter()
        .enumerate()
        .map(|(id, (factor, multiplicity))| CriticalFactor { id, factor, multiplicity })
        .collect();
    let (chart, chart_poly) = charts()
        .map(|m| {
            let (n, g) = apply(&m, f);
            (m, pencil_discriminant(&n, &g))
        })
        .find(|(_, p)| full_degree(d, p))
        .ok_or_else(|| HypothesisError::Internal("no target chart with infinity non-critical".into()))?;
    Ok(CriticalData {
        degree: d,
        finite_critical_value_poly: disc,
        profile,
        infinity_multiplicity,
        infinity_is_critical_value: infinity_multiplicity > 0,
        chart,
        chart_poly,
    })
}

/// Every critical value has a fiber of `d - 1` points.
pub fn is_critically_simple(f: &RationalMapQ) -> Result<bool, HypothesisError> {
    let data = critical_values(f)?;
    Ok(data.chart_poly.is_squarefree()?)
}

/// The two maps share no critical value.
pub fn are_critically_separated(f: &RationalMapQ, g: &RationalMapQ) -> Result<bool, HypothesisError> {
    for h in [f, g] {
        if h.degree() < 2 {
            return Err(HypothesisError::DegreeTooSmall { degree: h.degree(), required: 2 });
        }
    }
    for m in charts() {
        let (fn_, fd) = apply(&m, f);
        let (gn, gd) = apply(&m, g);
        let df = pencil_discriminant(&fn_, &fd);
        let dg = pencil_discriminant(&gn, &gd);
        if full_degree(f.degree(), &df) && full_degree(g.degree(), &dg) {
            return Ok(!df.resultant(&dg).is_zero());
        }
    }
    Err(HypothesisError::Internal("no common target chart with infinity non-critical".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::chebyshev;

    fn poly(c: &[i64]) -> RationalMapQ {
        RationalMapQ::poly(c).unwrap()
    }

    fn roots_of(data: &CriticalData) -> Vec<BigRationalPoly> {
        data.profile.iter().map(|f| f.factor.clone()).collect()
    }

    #[test]
    fn square_map() {
        let data = critical_values(&poly(&[0, 0, 1])).unwrap();
        assert!(data.infinity_is_critical_value);
        assert_eq!(data.infinity_multiplicity, 1);
        assert_eq!(roots_of(&data), vec![BigRationalPoly::x()]);
        assert_eq!(data.total_ramification(), 2);
    }

    #[test]
    fn rational_quadratic() {
        let f = RationalMapQ::from_ints(&[1, 0, 1], &[1, 0, -1]).unwrap();
        let data = critical_values(&f).unwrap();
        assert!(!data.infinity_is_critical_value);
        assert_eq!(roots_of(&data), vec![BigRationalPoly::from_ints(&[-1, 0, 1])]);
        assert!(is_critically_simple(&f).unwrap());
    }

    #[test]
    fn chebyshev_four() {
        let t4 = RationalMapQ::from_poly(&chebyshev(4)).unwrap();
        let data = critical_values(&t4).unwrap();
        assert_eq!(data.infinity_multiplicity, 3);
        // -1 carries two simple ramification points, 1 carries one
        let mult: Vec<(BigRationalPoly, usize)> =
            data.profile.iter().map(|f| (f.factor.clone(), f.multiplicity)).collect();
        assert_eq!(
            mult,
            vec![(BigRationalPoly::from_ints(&[-1, 1]), 1), (BigRationalPoly::from_ints(&[1, 1]), 2)]
        );
        assert_eq!(data.total_ramification(), 6);
        assert!(!is_critically_simple(&t4).unwrap());
    }

    #[test]
    fn power_maps_and_polynomials_are_not_simple() {
        for n in 3..7 {
            let mut c = vec![0; n + 1];
            c[n] = 1;
            assert!(!is_critically_simple(&poly(&c)).unwrap());
        }
        assert!(!is_critically_simple(&poly(&[1, 2, -3, 1])).unwrap());
        assert!(is_critically_simple(&poly(&[1, 2, 1])).unwrap());
    }

    #[test]
    fn separation_examples() {
        let sq = poly(&[0, 0, 1]);
        let g = RationalMapQ::from_ints(&[1, 0, 1], &[1, 0, -1]).unwrap();
        assert!(are_critically_separated(&sq, &g).unwrap());
        assert!(are_critically_separated(&g, &sq).unwrap());
        assert!(!are_critically_separated(&sq, &poly(&[1, 0, 1])).unwrap());
        assert!(!are_critically_separated(&g, &g).unwrap());
    }

    #[test]
    fn linear_maps_are_rejected() {
        let f = RationalMapQ::from_ints(&[1, 0], &[0, 1]).unwrap();
        assert!(matches!(critical_values(&f), Err(HypothesisError::DegreeTooSmall { .. })));
    }
}
