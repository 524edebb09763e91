//! Difference ideals `B(i, j)` and their product `D'(m)` over all pairs of
//! words of the pigeonhole length `k(m)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::tree::OrbitTable;
use super::{word_evaluate, DynamicsError, SemigroupSystem, Word};
use crate::algebra::{ln_bigint, ProjectivePointQ};

/// `|a b' - b a'|` for normalized `[a:b]`, `[a':b']`; zero iff the points agree.
pub fn cross_difference(p: &ProjectivePointQ, q: &ProjectivePointQ) -> BigInt {
    (p.a() * q.b() - p.b() * q.a()).abs()
}

/// Generator of the difference ideal `B(i, j)` for `f_i(P)` and `f_j(P)`.
pub fn difference_ideal(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    i: &Word,
    j: &Word,
) -> Result<BigInt, DynamicsError> {
    if i == j {
        return Err(DynamicsError::InvalidArgument(format!("difference ideal needs distinct words, got {i} twice")));
    }
    let pi = word_evaluate(system, i, point)?;
    let pj = word_evaluate(system, j, point)?;
    Ok(cross_difference(&pi, &pj))
}

/// Smallest `k` with `r^k >= m + 1`, i.e. `ceil(log(m+1) / log r)`.
pub fn pigeonhole_length(m: u64, r: usize) -> usize {
    assert!(r >= 2, "pigeonhole length needs at least two maps");
    let target = m as u128 + 1;
    let mut k = 0;
    let mut pow: u128 = 1;
    while pow < target {
        pow *= r as u128;
        k += 1;
    }
    k
}

#[derive(Clone, Debug)]
pub struct DPrimeOptions {
    /// Cap on the number of unordered word pairs.
    pub pair_budget: usize,
}

impl Default for DPrimeOptions {
    fn default() -> Self {
        Self { pair_budget: 1 << 16 }
    }
}

/// `D'(m)` for a system and base point, kept as its factors `B(i, j)` over
/// unordered pairs `i < j` of words of length `k(m)`. The ordered product is
/// the square of their product.
#[derive(Clone, Debug)]
pub struct DPrime {
    pub m: u64,
    pub k: usize,
    /// `B(i, j)` for `i < j`, in the order `(0,1), (0,2), (1,2), (0,3), ...` of word ranks.
    pub pair_values: Vec<BigInt>,
    /// First pair of words of length `k` with equal global values; `D'(m) = 0` then.
    pub collision: Option<(Word, Word)>,
}

impl DPrime {
    pub fn is_zero(&self) -> bool {
        self.collision.is_some()
    }

    /// `log D'(m)`; `None` when it vanishes.
    pub fn log_value(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        Some(2.0 * self.pair_values.iter().map(ln_bigint).sum::<f64>())
    }

    /// Product over unordered pairs.
    pub fn unordered(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        product_tree(&self.pair_values)
    }

    /// `D'(m)` itself.
    pub fn value(&self) -> BigInt {
        let u = self.unordered();
        &u * &u
    }

    /// Whether `p` divides `D'(m)`, decided factor by factor.
    pub fn divisible_by(&self, p: u64) -> bool {
        self.is_zero() || self.pair_values.iter().any(|b| (b % p).is_zero())
    }

    /// Exponents of the primes up to `bound` in `D'(m)`, and the remaining cofactor.
    pub fn factor_small(&self, bound: u64) -> (BTreeMap<u64, u64>, BigInt) {
        let mut exps = BTreeMap::new();
        if self.is_zero() {
            return (exps, BigInt::zero());
        }
        let primes: Vec<u64> = primal::Primes::all().take_while(|&p| p as u64 <= bound).map(|p| p as u64).collect();
        let mut rest = Vec::with_capacity(self.pair_values.len());
        for b in &self.pair_values {
            let mut b = b.clone();
            for &p in &primes {
                let mut e = 0;
                while (&b % p).is_zero() {
                    b /= p;
                    e += 1;
                }
                if e > 0 {
                    *exps.entry(p).or_insert(0) += 2 * e;
                }
            }
            rest.push(b);
        }
        let c = product_tree(&rest);
        (exps, &c * &c)
    }
}

fn product_tree(v: &[BigInt]) -> BigInt {
    match v.len() {
        0 => BigInt::one(),
        1 => v[0].clone(),
        n => product_tree(&v[..n / 2]) * product_tree(&v[n / 2..]),
    }
}

/// Computes the factors of `D'(m) = prod_{i != j in [r]^k} B(i, j)` with `k = k(m)`.
pub fn dprime(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    m: u64,
    options: &DPrimeOptions,
) -> Result<DPrime, DynamicsError> {
    let r = system.rank();
    if r < 2 {
        return Err(DynamicsError::InvalidArgument("D'(m) needs at least two maps".into()));
    }
    if m < 1 {
        return Err(DynamicsError::InvalidArgument("D'(m) needs m >= 1".into()));
    }
    let k = pigeonhole_length(m, r);
    let words = r.checked_pow(k as u32).ok_or(DynamicsError::BudgetExceeded { budget: options.pair_budget })?;
    if words * (words - 1) / 2 > options.pair_budget {
        return Err(DynamicsError::BudgetExceeded { budget: options.pair_budget });
    }
    let mut table = OrbitTable::new(system, usize::MAX);
    let mut level = vec![table.intern(point.clone())];
    for _ in 0..k {
        level = table.next_level(&level)?;
    }
    let values: Vec<&ProjectivePointQ> = level.iter().map(|&id| table.point(id)).collect();
    let mut pair_values = Vec::with_capacity(words * (words - 1) / 2);
    for j in 1..values.len() {
        for i in 0..j {
            let b = cross_difference(values[i], values[j]);
            if b.is_zero() {
                let collision = Some((Word::from_rank(i, k, r), Word::from_rank(j, k, r)));
                return Ok(DPrime { m, k, pair_values: Vec::new(), collision });
            }
            pair_values.push(b);
        }
    }
    Ok(DPrime { m, k, pair_values, collision: None })
}
