//! Finite-depth freeness check: distinct words must give distinct maps.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::HypothesisError;
use crate::dynamics::{SemigroupSystem, Word};

/// Default cap on `depth * (max degree)^depth`.
pub const DEFAULT_FREENESS_BUDGET: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreenessReport {
    DistinctUpToDepth { depth: usize },
    EqualWords { word_i: Word, word_j: Word },
}

impl FreenessReport {
    pub fn is_clean(&self) -> bool {
        matches!(self, Self::DistinctUpToDepth { .. })
    }
}

type Form = Vec<BigInt>;

fn mul(a: &[BigInt], b: &[BigInt]) -> Form {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `F(A, B)` for a form `F` (descending coefficients) and forms `A`, `B` of equal degree.
fn substitute(f: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Form {
    let d = f.len() - 1;
    let mut apow = vec![vec![BigInt::one()]];
    let mut bpow = vec![vec![BigInt::one()]];
    for i in 0..d {
        apow.push(mul(&apow[i], a));
        bpow.push(mul(&bpow[i], b));
    }
    let mut out = vec![BigInt::zero(); d * (a.len() - 1) + 1];
    for (i, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (k, t) in mul(&apow[d - i], &bpow[i]).into_iter().enumerate() {
            out[k] += c * t;
        }
    }
    out
}

fn normalize(mut num: Form, mut den: Form) -> (Form, Form) {
    let g = num.iter().chain(&den).fold(BigInt::zero(), |g, c| g.gcd(c));
    let neg = num.iter().chain(&den).find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let k = if neg { -g } else { g };
    num.iter_mut().chain(den.iter_mut()).for_each(|c| *c = &*c / &k);
    (num, den)
}

/// Composes every word of length `1..=depth` and reports the first pair of
/// distinct words giving the same map, in length-then-lex order.
pub fn free_semigroup_finite_check(
    system: &SemigroupSystem,
    depth: usize,
    budget: u64,
) -> Result<FreenessReport, HypothesisError> {
    if depth == 0 {
        return Err(HypothesisError::InvalidArgument("depth must be at least 1".into()));
    }
    let dmax = system.degrees().into_iter().max().unwrap_or(1) as u64;
    let cost = (dmax as f64).powi(depth as i32) * depth as f64;
    if cost > budget as f64 {
        return Err(HypothesisError::BudgetExceeded { budget, required: cost.min(u64::MAX as f64) as u64 });
    }
    let r = system.rank();
    let gens: Vec<(Form, Form)> =
        system.maps().iter().map(|f| (f.num().coeffs().to_vec(), f.den().coeffs().to_vec())).collect();
    let mut seen: HashMap<(Form, Form), (usize, usize)> = HashMap::new();
    let mut level: Vec<(Form, Form)> = vec![(vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()])];
    for len in 1..=depth {
        let mut next = Vec::with_capacity(level.len() * r);
        for (f, g) in &gens {
            for (a, b) in &level {
                next.push(normalize(substitute(f, a, b), substitute(g, a, b)));
            }
        }
        for (pos, pair) in next.iter().enumerate() {
            if let Some(&(l0, p0)) = seen.get(pair) {
                return Ok(FreenessReport::EqualWords {
                    word_i: Word::from_rank(p0, l0, r),
                    word_j: Word::from_rank(pos, len, r),
                });
            }
            seen.insert(pair.clone(), (len, pos));
        }
        level = next;
    }
    Ok(FreenessReport::DistinctUpToDepth { depth })
}
