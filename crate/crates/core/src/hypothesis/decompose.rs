//! Right decomposition factors, power-like detection and left compositional
//! factors of rational polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::quadratic::{quad_inv, quad_mul, quad_pow, sqrt_rational, Quad, QuadPoly};
use crate::algebra::BigRationalPoly;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Chebyshev polynomial `T_n` with `T_n(cos t) = cos(n t)`.
pub fn chebyshev(n: usize) -> BigRationalPoly {
    let mut prev = BigRationalPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = BigRationalPoly::x();
    let two_x = BigRationalPoly::from_ints(&[0, 2]);
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `f = g o h` with `h` monic, `h(0) = 0` and `deg h = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightFactor {
    pub outer: BigRationalPoly,
    pub inner: BigRationalPoly,
}

/// The unique normalized right factor of degree `n`, if `f` has one.
///
/// The top `n - 1` coefficients of `h` are forced by those of `f`; `g` then
/// comes from the `h`-adic expansion of `f`, whose digits must be constants.
pub fn right_factor(f: &BigRationalPoly, n: usize) -> Option<RightFactor> {
    let deg = f.degree();
    if n == 0 || f.is_zero() || !deg.is_multiple_of(n) {
        return None;
    }
    let m = deg / n;
    let target = f.scale(&f.leading().recip());
    let mut h = vec![BigRational::zero(); n + 1];
    h[n] = BigRational::one();
    for k in 1..n {
        let hp = BigRationalPoly::new(h.clone()).pow(m);
        let idx = n * m - k;
        h[n - k] = (target.coeff(idx) - hp.coeff(idx)) / rat(m as i64);
    }
    let inner = BigRationalPoly::new(h);
    let mut digits = Vec::with_capacity(m + 1);
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&inner);
        if !r.is_constant() {
            return None;
        }
        digits.push(r.coeff(0));
        rest = q;
    }
    let outer = BigRationalPoly::new(digits);
    (outer.compose(&inner) == *f).then_some(RightFactor { outer, inner })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum InnerKind {
    Power(usize),
    Chebyshev(usize),
}

impl InnerKind {
    pub fn polynomial(&self) -> BigRationalPoly {
        match *self {
            InnerKind::Power(n) => BigRationalPoly::x().pow(n),
            InnerKind::Chebyshev(n) => chebyshev(n),
        }
    }
}

/// `f = R o C o L` over `Q(sqrt(delta))`; `delta = 1` means rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerLikeWitness {
    #[serde(serialize_with = "display")]
    pub r: QuadPoly,
    pub c: InnerKind,
    #[serde(serialize_with = "display")]
    pub l: QuadPoly,
}

pub(super) fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl PowerLikeWitness {
    pub fn recompose(&self) -> QuadPoly {
        let c = QuadPoly::rational(self.r.delta(), self.c.polynomial());
        self.r.compose(&c.compose(&self.l))
    }

    /// Exact coefficient identity `R o C o L = f`.
    pub fn verifies(&self, f: &BigRationalPoly) -> bool {
        self.l.degree() == 1 && self.recompose().as_rational() == Some(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerLikeVerdict {
    pub is_power_like: bool,
    pub witness: Option<PowerLikeWitness>,
}

/// Searches divisors `n >= 2` of `deg f`, largest first, for a right factor of
/// the form `x^n` or `T_n` up to affine changes on both sides.
pub fn is_power_like(f: &BigRationalPoly) -> PowerLikeVerdict {
    let d = f.degree();
    for n in (2..=d).rev().filter(|&n| d.is_multiple_of(n)) {
        let Some(rf) = right_factor(f, n) else { continue };
        let witness = power_kind(&rf, n).or_else(|| if n >= 3 { chebyshev_kind(&rf, n) } else { None });
        if let Some(w) = witness.filter(|w| w.verifies(f)) {
            return PowerLikeVerdict { is_power_like: true, witness: Some(w) };
        }
    }
    PowerLikeVerdict { is_power_like: false, witness: None }
}

fn power_kind(rf: &RightFactor, n: usize) -> Option<PowerLikeWitness> {
    let h = &rf.inner;
    let t = -(h.coeff(n - 1) / rat(n as i64));
    let base = BigRationalPoly::linear(BigRational::one(), -t.clone()).pow(n);
    let e = h - &base;
    if !e.is_constant() {
        return None;
    }
    let e = e.coeff(0);
    // L = c (x - t) with integral coefficients; R(y) = g(y / c^n + e)
    let c = BigRational::from_integer(t.denom().clone());
    let cn = num_traits::pow(c.clone(), n);
    let one = BigInt::one();
    let r = rf.outer.compose(&BigRationalPoly::linear(cn.recip(), e));
    let l = BigRationalPoly::linear(c.clone(), -(&c * &t));
    Some(PowerLikeWitness {
        r: QuadPoly::rational(&one, r),
        c: InnerKind::Power(n),
        l: QuadPoly::rational(&one, l),
    })
}

fn chebyshev_kind(rf: &RightFactor, n: usize) -> Option<PowerLikeWitness> {
    let u = rf.inner.coeff(n - 1) / rat(n as i64);
    // depressed: h(x) = ht(x + u)
    let ht = rf.inner.shift(&-u.clone());
    let sub = ht.coeff(n - 2);
    if sub.is_zero() {
        return None;
    }
    let c2 = -rat(n as i64) / (rat(4) * sub);
    let t = chebyshev(n);
    let two_pow = num_traits::pow(rat(2), n - 1);
    for k in 1..=n {
        let expected = if (n - k).is_multiple_of(2) {
            t.coeff(k) / (&two_pow * num_traits::pow(c2.clone(), (n - k) / 2))
        } else {
            BigRational::zero()
        };
        if ht.coeff(k) != expected {
            return None;
        }
    }
    let (delta, c) = sqrt_rational(&c2);
    let a = quad_inv(&quad_mul(&Quad::rational(two_pow), &quad_pow(&c, n, &delta), &delta), &delta);
    let b = Quad {
        re: ht.coeff(0) - &a.re * t.coeff(0),
        im: -(&a.im * t.coeff(0)),
    };
    let outer = QuadPoly::rational(&delta, rf.outer.clone());
    let r = outer.compose(&QuadPoly::linear(&delta, &a, &b));
    let cu = quad_mul(&c, &Quad::rational(u), &delta);
    let l = QuadPoly::linear(&delta, &c, &cu);
    Some(PowerLikeWitness { r, c: InnerKind::Chebyshev(n), l })
}

/// `g = lambda * inner - shift` with `lambda^e = lambda_pow`, so that
/// `f1 = f2 o g`. `lambda` is algebraic in general; `rational` holds `g`
/// when some `e`-th root of `lambda_pow` is rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftFactor {
    #[serde(serialize_with = "display")]
    pub inner: BigRationalPoly,
    pub e: usize,
    #[serde(serialize_with = "display")]
    pub lambda_pow: BigRational,
    #[serde(serialize_with = "display")]
    pub shift: BigRational,
    #[serde(serialize_with = "display_opt")]
    pub rational: Option<BigRationalPoly>,
}

fn display_opt<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

impl fmt::Display for LeftFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "a*({}) - {} where a^{} = {}", self.inner, self.shift, self.e, self.lambda_pow),
        }
    }
}

/// Finds `g` over the algebraic closure with `deg g >= 2` and `f1 = f2 o g`.
///
/// The right factor `h` of `f1` of degree `deg f1 / deg f2` fixes `g` up to
/// `g = lambda h + mu`. After depressing both outer polynomials the match
/// reduces to `lambda^k = r_k` on the support of `f2`, solved through a Bezout
/// combination of the exponents and then verified exactly.
pub fn left_compositional_factor(f1: &BigRationalPoly, f2: &BigRationalPoly) -> Option<LeftFactor> {
    let (big, k0) = (f1.degree(), f2.degree());
    if k0 < 1 || big % k0 != 0 || big / k0 < 2 {
        return None;
    }
    let rf = right_factor(f1, big / k0)?;
    let g1 = &rf.outer;
    let depress = |p: &BigRationalPoly| p.coeff(k0 - 1) / (rat(k0 as i64) * p.leading());
    let (u1, u2) = (depress(g1), depress(f2));
    let g1t = g1.shift(&-u1.clone());
    let f2t = f2.shift(&-u2.clone());
    let support: Vec<usize> = (1..=k0).filter(|&k| !f2t.coeff(k).is_zero()).collect();
    let mut ratios = Vec::with_capacity(support.len());
    for &k in &support {
        let r = g1t.coeff(k) / f2t.coeff(k);
        if r.is_zero() {
            return None;
        }
        ratios.push(r);
    }
    // e = gcd(support) = sum a_k k
    let mut e = 0i64;
    let mut coef: Vec<i64> = Vec::new();
    for &k in &support {
        let g = e.extended_gcd(&(k as i64));
        coef.iter_mut().for_each(|c| *c *= g.x);
        coef.push(g.y);
        e = g.gcd;
    }
    let mut mu = BigRational::one();
    for (r, &a) in ratios.iter().zip(&coef) {
        let p = num_traits::pow(r.clone(), a.unsigned_abs() as usize);
        mu = if a >= 0 { mu * p } else { mu / p };
    }
    let e = e as usize;
    let inner = &rf.inner + &BigRationalPoly::constant(u1);
    let mut composed = BigRationalPoly::constant(f2t.coeff(0));
    for &k in &support {
        let lk = num_traits::pow(mu.clone(), k / e);
        composed = &composed + &inner.pow(k).scale(&(f2t.coeff(k) * lk));
    }
    if composed != *f1 {
        return None;
    }
    let rational = rational_root(&mu, e).map(|lambda| {
        let g = &inner.scale(&lambda) - &BigRationalPoly::constant(u2.clone());
        debug_assert!(f2.compose(&g) == *f1);
        g
    });
    Some(LeftFactor { inner, e, lambda_pow: mu, shift: u2, rational })
}

fn rational_root(q: &BigRational, e: usize) -> Option<BigRational> {
    let e32 = e as u32;
    if q.is_negative() && e.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(e32);
        (num_traits::pow(r.clone(), e) == n.abs()).then_some(if n.is_negative() { -r } else { r })
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}
