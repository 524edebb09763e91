//! Finite-depth certificates for wandering and preperiodicity.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::tree::OrbitTable;
use super::{DynamicsError, SemigroupSystem, Word};
use crate::algebra::{weil_height, ProjectivePointQ};

/// Default cap on map applications for tree searches.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

/// Two distinct words sending the base point to the same value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionWitness {
    pub word_i: Word,
    pub word_j: Word,
    pub value: ProjectivePointQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WanderingCertificate {
    /// All words of length `1..=depth` give pairwise distinct points.
    NoCollisionUpToDepth { depth: usize },
    Collision(CollisionWitness),
}

impl WanderingCertificate {
    pub fn is_clean(&self) -> bool {
        matches!(self, Self::NoCollisionUpToDepth { .. })
    }
}

/// Compares the values of all words of length `1..=depth`, in length-then-lex
/// order, and returns the first repeat: the earliest word with that value and
/// the word that repeats it.
pub fn wandering_certificate(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    depth: usize,
    budget: usize,
) -> Result<WanderingCertificate, DynamicsError> {
    if depth == 0 {
        return Err(DynamicsError::InvalidArgument("depth must be at least 1".into()));
    }
    let r = system.rank();
    let mut table = OrbitTable::new(system, budget);
    let mut level = vec![table.intern(point.clone())];
    let mut first_seen: HashMap<usize, (usize, usize)> = HashMap::new();
    for len in 1..=depth {
        level = table.next_level(&level)?;
        for (pos, &id) in level.iter().enumerate() {
            if let Some(&(l0, p0)) = first_seen.get(&id) {
                return Ok(WanderingCertificate::Collision(CollisionWitness {
                    word_i: Word::from_rank(p0, l0, r),
                    word_j: Word::from_rank(pos, len, r),
                    value: table.point(id).clone(),
                }));
            }
            first_seen.insert(id, (len, pos));
        }
    }
    Ok(WanderingCertificate::NoCollisionUpToDepth { depth })
}

/// Words `f`, `g` with `g(f(P)) = f(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreperiodicWitness {
    pub f: Word,
    pub g: Word,
    pub point: ProjectivePointQ,
}

/// First `(f, g)` with `1 <= |f|, |g| <= depth` and `g o f (P) = f(P)`, scanning
/// `f` then `g` in length-then-lex order.
pub fn moderately_preperiodic_search(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    depth: usize,
    budget: usize,
) -> Result<Option<PreperiodicWitness>, DynamicsError> {
    if depth == 0 {
        return Err(DynamicsError::InvalidArgument("depth must be at least 1".into()));
    }
    let r = system.rank();
    let mut table = OrbitTable::new(system, budget);
    let mut f_level = vec![table.intern(point.clone())];
    let mut tried = HashSet::new();
    for f_len in 1..=depth {
        f_level = table.next_level(&f_level)?;
        for (f_pos, &q) in f_level.clone().iter().enumerate() {
            if !tried.insert(q) {
                continue;
            }
            let mut g_level = vec![q];
            for g_len in 1..=depth {
                g_level = table.next_level(&g_level)?;
                if let Some(g_pos) = g_level.iter().position(|&v| v == q) {
                    return Ok(Some(PreperiodicWitness {
                        f: Word::from_rank(f_pos, f_len, r),
                        g: Word::from_rank(g_pos, g_len, r),
                        point: table.point(q).clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Breadth-first search of the orbit (starting with `P` itself) for the first
/// point whose height exceeds `threshold`.
pub fn height_escape_point(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    threshold: f64,
    budget: usize,
) -> Result<ProjectivePointQ, DynamicsError> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(DynamicsError::InvalidArgument("height threshold must be nonnegative".into()));
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(point.clone());
    queue.push_back(point.clone());
    while let Some(q) = queue.pop_front() {
        if weil_height(&q) > threshold {
            return Ok(q);
        }
        for f in system.maps() {
            if seen.len() >= budget {
                return Err(DynamicsError::EscapeNotFound { explored: seen.len(), orbit_closed: false });
            }
            let next = f.evaluate(&q);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Err(DynamicsError::EscapeNotFound { explored: seen.len(), orbit_closed: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{word_evaluate, RationalMapQ};

    fn sys(polys: &[&[i64]]) -> SemigroupSystem {
        SemigroupSystem::new(polys.iter().map(|p| RationalMapQ::poly(p).unwrap()).collect()).unwrap()
    }

    fn w(v: &[usize]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn wandering_examples() {
        let s = sys(&[&[1, 0, 1], &[-1, 0, 1]]);
        let c = wandering_certificate(&s, &ProjectivePointQ::affine(0), 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(
            c,
            WanderingCertificate::Collision(CollisionWitness {
                word_i: w(&[1, 1]),
                word_j: w(&[1, 2]),
                value: ProjectivePointQ::affine(2),
            })
        );
        let sq = sys(&[&[0, 0, 1]]);
        let c = wandering_certificate(&sq, &ProjectivePointQ::affine(2), 4, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(c, WanderingCertificate::NoCollisionUpToDepth { depth: 4 });
        // the fixed point 1 repeats as soon as words of length 2 are compared
        let one = ProjectivePointQ::affine(1);
        let c = wandering_certificate(&sq, &one, 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(
            c,
            WanderingCertificate::Collision(CollisionWitness { word_i: w(&[1]), word_j: w(&[1, 1]), value: one.clone() })
        );
        assert!(wandering_certificate(&sq, &one, 1, DEFAULT_NODE_BUDGET).unwrap().is_clean());
    }

    #[test]
    fn wandering_budget_is_an_error_not_a_verdict() {
        let s = sys(&[&[1, 0, 1], &[3, 0, 1], &[5, 0, 1]]);
        assert_eq!(
            wandering_certificate(&s, &ProjectivePointQ::affine(1), 6, 100),
            Err(DynamicsError::BudgetExceeded { budget: 100 })
        );
    }

    /// Flat-table oracle: evaluate every word independently and compare all pairs.
    fn brute_force_first_collision(s: &SemigroupSystem, p: &ProjectivePointQ, depth: usize) -> Option<(Word, Word)> {
        let r = s.rank();
        let mut words = Vec::new();
        for len in 1..=depth {
            for pos in 0..r.pow(len as u32) {
                words.push(Word::from_rank(pos, len, r));
            }
        }
        let values: Vec<_> = words.iter().map(|wd| word_evaluate(s, wd, p).unwrap()).collect();
        for j in 0..words.len() {
            for i in 0..j {
                if values[i] == values[j] {
                    return Some((words[i].clone(), words[j].clone()));
                }
            }
        }
        None
    }

    #[test]
    fn wandering_agrees_with_flat_table() {
        let systems = [
            sys(&[&[1, 0, 1], &[-1, 0, 1]]),
            sys(&[&[0, 0, 1], &[0, 0, 0, 1]]),
            sys(&[&[-2, 0, 1], &[0, 0, 1]]),
            sys(&[&[0, 1, 1], &[-1, 0, 1], &[2, 0, -1]]),
        ];
        for s in &systems {
            for a in -2..=2 {
                let p = ProjectivePointQ::affine(a);
                let cert = wandering_certificate(s, &p, 3, DEFAULT_NODE_BUDGET).unwrap();
                let oracle = brute_force_first_collision(s, &p, 3);
                match (cert, oracle) {
                    (WanderingCertificate::NoCollisionUpToDepth { .. }, None) => {}
                    (WanderingCertificate::Collision(c), Some((i, j))) => {
                        assert_eq!((c.word_i, c.word_j), (i, j));
                    }
                    (c, o) => panic!("disagreement at {p}: {c:?} vs {o:?}"),
                }
            }
        }
    }

    #[test]
    fn preperiodic_examples() {
        let sq = sys(&[&[0, 0, 1]]);
        let wit = moderately_preperiodic_search(&sq, &ProjectivePointQ::affine(1), 1, DEFAULT_NODE_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!((wit.f, wit.g), (w(&[1]), w(&[1])));
        assert_eq!(
            moderately_preperiodic_search(&sq, &ProjectivePointQ::affine(2), 3, DEFAULT_NODE_BUDGET).unwrap(),
            None
        );
        let s = sys(&[&[-1, 0, 1], &[1, 0, 1]]);
        let wit = moderately_preperiodic_search(&s, &ProjectivePointQ::affine(0), 2, DEFAULT_NODE_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!((wit.f, wit.g, wit.point), (w(&[1]), w(&[1, 1]), ProjectivePointQ::affine(-1)));
    }

    #[test]
    fn height_escape_examples() {
        let sq = sys(&[&[0, 0, 1]]);
        let q = height_escape_point(&sq, &ProjectivePointQ::affine(2), 10f64.ln(), 1000).unwrap();
        assert_eq!(q, ProjectivePointQ::affine(16));
        assert_eq!(
            height_escape_point(&sq, &ProjectivePointQ::affine(1), 1.0, 100),
            Err(DynamicsError::EscapeNotFound { explored: 1, orbit_closed: true })
        );
        let q = height_escape_point(&sq, &ProjectivePointQ::affine(2), 0.0, 10).unwrap();
        assert_eq!(q, ProjectivePointQ::affine(2));
    }
}
