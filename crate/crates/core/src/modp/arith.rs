use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Arithmetic modulo an odd or even prime `p < 2^32` with Barrett reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    p: u64,
    m: u64,
}

impl Modulus {
    pub const MAX: u64 = u32::MAX as u64;

    pub fn new(p: u64) -> Self {
        assert!((2..=Self::MAX).contains(&p), "modulus {p} outside 2..2^32");
        Self { p, m: u64::MAX / p }
    }

    #[inline(always)]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `x mod p` for any `x < 2^64`.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        if r >= self.p {
            r -= self.p;
        }
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }

    /// Horner evaluation of descending coefficients at `x`.
    #[inline(always)]
    pub fn horner(&self, coeffs: &[u64], x: u64) -> u64 {
        let mut acc = coeffs[0];
        for &c in &coeffs[1..] {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// Replaces each nonzero entry by its inverse using one modular inversion.
    /// Zero entries are left untouched.
    pub fn batch_invert(&self, values: &mut [u64], scratch: &mut Vec<u64>) {
        scratch.clear();
        let mut acc = 1u64;
        for &v in values.iter() {
            scratch.push(acc);
            if v != 0 {
                acc = self.mul(acc, v);
            }
        }
        let mut inv = self.inv(acc);
        for i in (0..values.len()).rev() {
            let v = values[i];
            if v != 0 {
                values[i] = self.mul(inv, scratch[i]);
                inv = self.mul(inv, v);
            }
        }
    }
}
