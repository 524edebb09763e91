use std::collections::HashMap;

use super::{DynamicsError, SemigroupSystem};
use crate::algebra::ProjectivePointQ;

/// Hash-consed value table for orbit trees: every distinct point gets an id and
/// each `(map, point)` application is evaluated at most once.
pub(crate) struct OrbitTable<'a> {
    system: &'a SemigroupSystem,
    points: Vec<ProjectivePointQ>,
    ids: HashMap<ProjectivePointQ, usize>,
    memo: HashMap<(usize, usize), usize>,
    applications: usize,
    budget: usize,
}

impl<'a> OrbitTable<'a> {
    pub fn new(system: &'a SemigroupSystem, budget: usize) -> Self {
        Self {
            system,
            points: Vec::new(),
            ids: HashMap::new(),
            memo: HashMap::new(),
            applications: 0,
            budget,
        }
    }

    pub fn intern(&mut self, p: ProjectivePointQ) -> usize {
        if let Some(&id) = self.ids.get(&p) {
            return id;
        }
        let id = self.points.len();
        self.ids.insert(p.clone(), id);
        self.points.push(p);
        id
    }

    pub fn point(&self, id: usize) -> &ProjectivePointQ {
        &self.points[id]
    }

    /// `f_{map+1}` applied to the point with the given id (0-based map index).
    pub fn apply(&mut self, map: usize, id: usize) -> usize {
        if let Some(&out) = self.memo.get(&(map, id)) {
            return out;
        }
        let q = self.system.maps()[map].evaluate(&self.points[id]);
        let out = self.intern(q);
        self.memo.insert((map, id), out);
        out
    }

    /// Values of the words `i . v` for `i` in `1..=r` and `v` ranging over `prev`,
    /// listed lexicographically when `prev` is.
    pub fn next_level(&mut self, prev: &[usize]) -> Result<Vec<usize>, DynamicsError> {
        let r = self.system.rank();
        self.applications += r * prev.len();
        if self.applications > self.budget {
            return Err(DynamicsError::BudgetExceeded { budget: self.budget });
        }
        let mut out = Vec::with_capacity(r * prev.len());
        for i in 0..r {
            for &v in prev {
                out.push(self.apply(i, v));
            }
        }
        Ok(out)
    }
}
