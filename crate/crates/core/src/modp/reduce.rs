use num_traits::Zero;

use super::{Modulus, ModpError};
use crate::algebra::ProjectivePointQ;
use crate::dynamics::{RationalMapQ, SemigroupSystem};

/// True iff `f` reduces to a degree-`d` morphism mod `p`, i.e. `p` does not
/// divide the resultant of its defining forms.
pub fn good_reduction(f: &RationalMapQ, p: u64) -> bool {
    !(f.resultant() % p).is_zero()
}

/// Residue of a point of the projective line: `x` for `[x:1]`, and `p` for infinity.
pub fn reduce_point(point: &ProjectivePointQ, modulus: &Modulus) -> u64 {
    let p = modulus.p();
    let b = modulus.from_bigint(point.b());
    if b == 0 {
        return p;
    }
    modulus.mul(modulus.from_bigint(point.a()), modulus.inv(b))
}

#[derive(Clone, Debug)]
enum Kind {
    /// `x -> h(x)`, descending coefficients of `h`; infinity is fixed.
    Poly { coeffs: Vec<u64> },
    /// General `[F:G]`; `at_infinity` is the image of infinity.
    Rational { num: Vec<u64>, den: Vec<u64>, at_infinity: u64 },
}

/// A map of good reduction over `F_p`.
#[derive(Clone, Debug)]
pub struct ReducedMap {
    kind: Kind,
}

impl ReducedMap {
    fn new(f: &RationalMapQ, m: &Modulus) -> Self {
        let num: Vec<u64> = f.num().coeffs().iter().map(|c| m.from_bigint(c)).collect();
        let den: Vec<u64> = f.den().coeffs().iter().map(|c| m.from_bigint(c)).collect();
        let d = f.degree();
        if den[..d].iter().all(|&c| c == 0) {
            let s = m.inv(den[d]);
            return Self { kind: Kind::Poly { coeffs: num.iter().map(|&c| m.mul(c, s)).collect() } };
        }
        let at_infinity = if den[0] == 0 { m.p() } else { m.mul(num[0], m.inv(den[0])) };
        Self { kind: Kind::Rational { num, den, at_infinity } }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, Kind::Poly { .. })
    }

    pub fn eval(&self, m: &Modulus, x: u64) -> u64 {
        let p = m.p();
        match &self.kind {
            Kind::Poly { coeffs } => {
                if x == p {
                    p
                } else {
                    m.horner(coeffs, x)
                }
            }
            Kind::Rational { num, den, at_infinity } => {
                if x == p {
                    return *at_infinity;
                }
                let z = m.horner(den, x);
                if z == 0 {
                    p
                } else {
                    m.mul(m.horner(num, x), m.inv(z))
                }
            }
        }
    }

    /// Images of a batch of points, one modular inversion per call.
    pub fn eval_batch(&self, m: &Modulus, xs: &[u32], out: &mut Vec<u32>, scratch: &mut EvalScratch) {
        let p = m.p();
        out.clear();
        match &self.kind {
            Kind::Poly { coeffs } => {
                if let [a, b, c] = coeffs[..] {
                    out.extend(xs.iter().map(|&x| {
                        let x = x as u64;
                        if x == p {
                            p as u32
                        } else {
                            m.add(m.mul(m.add(m.mul(a, x), b), x), c) as u32
                        }
                    }));
                } else {
                    out.extend(xs.iter().map(|&x| if x as u64 == p { p as u32 } else { m.horner(coeffs, x as u64) as u32 }));
                }
            }
            Kind::Rational { num, den, at_infinity } => {
                let dens = &mut scratch.dens;
                dens.clear();
                dens.extend(xs.iter().map(|&x| if x as u64 == p { 0 } else { m.horner(den, x as u64) }));
                m.batch_invert(dens, &mut scratch.prefix);
                out.extend(xs.iter().zip(dens.iter()).map(|(&x, &zi)| {
                    let x = x as u64;
                    let y = if x == p {
                        *at_infinity
                    } else if zi == 0 {
                        p
                    } else {
                        m.mul(m.horner(num, x), zi)
                    };
                    y as u32
                }));
            }
        }
    }
}

/// Reusable buffers for [`ReducedMap::eval_batch`].
#[derive(Default)]
pub struct EvalScratch {
    dens: Vec<u64>,
    prefix: Vec<u64>,
}

/// A system and base point reduced modulo a prime of good reduction for every map.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    modulus: Modulus,
    maps: Vec<ReducedMap>,
    point: u64,
}

impl ReducedSystem {
    /// Fails with [`ModpError::BadReduction`] naming the first map with `p | Res`.
    pub fn new(system: &SemigroupSystem, point: &ProjectivePointQ, p: u64) -> Result<Self, ModpError> {
        if !(2..=Modulus::MAX).contains(&p) {
            return Err(ModpError::PrimeOutOfRange(p));
        }
        let modulus = Modulus::new(p);
        let mut maps = Vec::with_capacity(system.rank());
        for (i, f) in system.maps().iter().enumerate() {
            if !good_reduction(f, p) {
                return Err(ModpError::BadReduction { p, map: i + 1 });
            }
            maps.push(ReducedMap::new(f, &modulus));
        }
        Ok(Self { modulus, maps, point: reduce_point(point, &modulus) })
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn maps(&self) -> &[ReducedMap] {
        &self.maps
    }

    pub fn point(&self) -> u64 {
        self.point
    }

    /// `f_{index}` (0-based) applied to a residue.
    pub fn apply(&self, index: usize, x: u64) -> u64 {
        self.maps[index].eval(&self.modulus, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn good_reduction_examples() {
        let f = RationalMapQ::poly(&[1, 0, 1]).unwrap();
        assert!([2, 3, 5, 7, 101].iter().all(|&p| good_reduction(&f, p)));
        let g = RationalMapQ::from_ints(&[1, 0, 2], &[0, 1, 0]).unwrap();
        assert!(!good_reduction(&g, 2));
        assert!(good_reduction(&g, 5));
        let s = SemigroupSystem::new(vec![f, g]).unwrap();
        assert!(matches!(
            ReducedSystem::new(&s, &ProjectivePointQ::affine(0), 2),
            Err(ModpError::BadReduction { p: 2, map: 2 })
        ));
    }

    #[test]
    fn point_reduction() {
        let m = Modulus::new(7);
        assert_eq!(reduce_point(&ProjectivePointQ::infinity(), &m), 7);
        assert_eq!(reduce_point(&ProjectivePointQ::from_ints(1, 7).unwrap(), &m), 7);
        assert_eq!(reduce_point(&ProjectivePointQ::from_ints(3, 2).unwrap(), &m), 5);
        assert_eq!(reduce_point(&ProjectivePointQ::affine(-1), &m), 6);
    }

    #[test]
    fn rational_evaluation_handles_poles_and_infinity() {
        // (x^2 + 2) / x mod 5: 0 -> inf, inf -> inf, 1 -> 3
        let f = RationalMapQ::from_ints(&[1, 0, 2], &[0, 1, 0]).unwrap();
        let s = SemigroupSystem::new(vec![f]).unwrap();
        let r = ReducedSystem::new(&s, &ProjectivePointQ::affine(0), 5).unwrap();
        assert_eq!(r.apply(0, 0), 5);
        assert_eq!(r.apply(0, 5), 5);
        assert_eq!(r.apply(0, 1), 3);
        // (x^2 + 1) / (x^2 - 1) mod 7: inf -> 1, 1 -> inf
        let g = RationalMapQ::from_ints(&[1, 0, 1], &[1, 0, -1]).unwrap();
        let s = SemigroupSystem::new(vec![g]).unwrap();
        let r = ReducedSystem::new(&s, &ProjectivePointQ::affine(0), 7).unwrap();
        assert_eq!(r.apply(0, 7), 1);
        assert_eq!(r.apply(0, 1), 7);
        let mut out = Vec::new();
        r.maps()[0].eval_batch(r.modulus(), &[0, 1, 2, 7, 6], &mut out, &mut EvalScratch::default());
        let single: Vec<u32> = [0, 1, 2, 7, 6].iter().map(|&x| r.apply(0, x) as u32).collect();
        assert_eq!(out, single);
    }
}
