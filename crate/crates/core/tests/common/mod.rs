//! Numeric fiber-counting oracle for critical simplicity, in double-double
//! complex arithmetic.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use semiorbit::algebra::BigRationalPoly;
use semiorbit::dynamics::RationalMapQ;

type C = Complex<TwoFloat>;

const CLUSTER_TOL: f64 = 1e-8;

fn tf(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn cabs(z: C) -> f64 {
    let h = (z.re * z.re + z.im * z.im).hi();
    h.sqrt()
}

fn horner(p: &[C], z: C) -> (C, C) {
    let mut v = C::new(tf(0.0), tf(0.0));
    let mut dv = v;
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// All complex roots of `p` (ascending, nonzero leading coefficient) by Aberth iteration.
fn aberth(p: &[C]) -> Vec<C> {
    let n = p.len() - 1;
    let lead = cabs(p[n]);
    let radius = 1.0 + p[..n].iter().map(|&c| cabs(c) / lead).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            C::new(tf(radius * t.cos()), tf(radius * t.sin()))
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, dv) = horner(p, z[k]);
            if cabs(v) == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = C::new(tf(0.0), tf(0.0));
            for j in 0..n {
                if j != k {
                    s += C::new(tf(1.0), tf(0.0)) / (z[k] - z[j]);
                }
            }
            let step = ratio / (C::new(tf(1.0), tf(0.0)) - ratio * s);
            z[k] -= step;
            moved = moved.max(cabs(step) / (1.0 + cabs(z[k])));
        }
        if moved < 1e-30 {
            break;
        }
    }
    z
}

fn distinct(roots: &[C]) -> usize {
    let mut reps: Vec<C> = Vec::new();
    for &r in roots {
        if !reps.iter().any(|&q| cabs(r - q) < CLUSTER_TOL * (1.0 + cabs(q))) {
            reps.push(r);
        }
    }
    reps.len()
}

fn to_c(q: &BigRational) -> C {
    // numerator and denominator stay small here
    let x = TwoFloat::from(q.numer().to_f64().unwrap()) / TwoFloat::from(q.denom().to_f64().unwrap());
    C::new(x, tf(0.0))
}

fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `F(aX + bZ, cX + dZ)` for a descending form `F`.
fn substitute(f: &[BigInt], s: [[i64; 2]; 2]) -> Vec<BigInt> {
    let d = f.len() - 1;
    let l1 = [BigInt::from(s[0][0]), BigInt::from(s[0][1])];
    let l2 = [BigInt::from(s[1][0]), BigInt::from(s[1][1])];
    let mut out = vec![BigInt::zero(); d + 1];
    for (i, c) in f.iter().enumerate() {
        let mut t = vec![c.clone()];
        for _ in 0..d - i {
            t = mul(&t, &l1);
        }
        for _ in 0..i {
            t = mul(&t, &l2);
        }
        for (k, v) in t.into_iter().enumerate() {
            out[k] += v;
        }
    }
    out
}

fn affine(desc: &[BigInt]) -> BigRationalPoly {
    let mut asc = desc.to_vec();
    asc.reverse();
    BigRationalPoly::from_bigints(&asc)
}

/// Fiber-counting oracle: every critical value has exactly `d - 1` preimages.
///
/// Source and target coordinates are changed at random until infinity is
/// neither a critical point, nor in a critical fiber, nor a critical value.
pub fn simple_by_fiber_count(f: &RationalMapQ, rng: &mut ChaCha8Rng) -> bool {
    let d = f.degree();
    for _ in 0..64 {
        let mut e = || rng.gen_range(-3i64..=3);
        let s = [[e(), e()], [e(), e()]];
        let t = [[e(), e()], [e(), e()]];
        if s[0][0] * s[1][1] - s[0][1] * s[1][0] == 0 || t[0][0] * t[1][1] - t[0][1] * t[1][0] == 0 {
            continue;
        }
        let fs = substitute(f.num().coeffs(), s);
        let gs = substitute(f.den().coeffs(), s);
        let comb = |a: i64, b: i64| -> Vec<BigInt> {
            fs.iter().zip(&gs).map(|(x, y)| x * BigInt::from(a) + y * BigInt::from(b)).collect()
        };
        let (num, den) = (affine(&comb(t[0][0], t[0][1])), affine(&comb(t[1][0], t[1][1])));
        let wr = &(&num.derivative() * &den) - &(&num * &den.derivative());
        if wr.is_zero() || wr.degree() != 2 * d - 2 || num.degree() != d || den.degree() != d {
            continue;
        }
        let at_inf = to_c(&num.leading()) / to_c(&den.leading());
        let crit = aberth(&wr.coeffs().iter().map(to_c).collect::<Vec<_>>());
        let nc: Vec<C> = (0..=d).map(|i| to_c(&num.coeff(i))).collect();
        let dc: Vec<C> = (0..=d).map(|i| to_c(&den.coeff(i))).collect();
        let mut ok = true;
        let mut simple = true;
        for &c in &crit {
            let (gv, _) = horner(&dc, c);
            let (fv, _) = horner(&nc, c);
            if cabs(gv) < 1e-6 * (1.0 + cabs(fv)) {
                ok = false;
                break;
            }
            let w = fv / gv;
            if cabs(w - at_inf) < 1e-6 * (1.0 + cabs(w)) {
                ok = false;
                break;
            }
            // G(c) F - F(c) G avoids a quotient: the division here is only double-precision accurate
            let pw: Vec<C> = nc.iter().zip(&dc).map(|(&a, &b)| gv * a - fv * b).collect();
            if distinct(&aberth(&pw)) != d - 1 {
                simple = false;
            }
        }
        if ok {
            return simple;
        }
    }
    panic!("no usable coordinates for {f}");
}
