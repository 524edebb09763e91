//! Decision procedures for the map hypotheses: critical values, critical
//! simplicity and separation, power-like polynomials, compositional left
//! factors, finite-depth freeness, and a sampler for good pairs.

mod critical;
mod decompose;
mod freeness;
mod quadratic;
mod sampler;
mod verify;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use critical::{
    are_critically_separated, critical_values, is_critically_simple, pencil_discriminant, CriticalData,
    CriticalFactor, Mobius, IDENTITY, MOBIUS_ENTRY_BOUND, MOBIUS_TRIES,
};
pub use decompose::{
    chebyshev, is_power_like, left_compositional_factor, right_factor, InnerKind, LeftFactor, PowerLikeVerdict,
    PowerLikeWitness, RightFactor,
};
pub use freeness::{free_semigroup_finite_check, FreenessReport, DEFAULT_FREENESS_BUDGET};
pub use quadratic::{sqrt_rational, Quad, QuadPoly};
pub use sampler::{attempt_rng, random_map, sample_good_family, FailureStats, SampleReport, SampledFamily};
pub use verify::{verify, Certificates, MapVerdict, PairVerdict, Route, VerifyOptions, VerifyReport};

use crate::algebra::AlgebraError;
use crate::dynamics::DynamicsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("degree {degree} is below the required {required}")]
    DegreeTooSmall { degree: usize, required: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("composition budget {budget} exceeded (needs {required})")]
    BudgetExceeded { budget: u64, required: u64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

pub(crate) fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Genera of the curves `f_i(x) = f_i(y)` minus the diagonal, and of `f_1(x) = f_2(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusConstants {
    pub diagonal: [u64; 2],
    pub cross: u64,
    pub all_at_least_two: bool,
}

impl GenusConstants {
    /// `(g_diag, g_cross)`, with `g_diag` the smaller diagonal genus.
    pub fn pair(&self) -> (u64, u64) {
        (self.diagonal[0].min(self.diagonal[1]), self.cross)
    }
}

/// `(d_i - 2)^2` for each map and `(d_1 - 1)(d_2 - 1)`.
pub fn genus_constants(d1: usize, d2: usize) -> GenusConstants {
    let diag = |d: usize| (d.saturating_sub(2) as u64).pow(2);
    let diagonal = [diag(d1), diag(d2)];
    let cross = (d1.saturating_sub(1) * d2.saturating_sub(1)) as u64;
    GenusConstants { diagonal, cross, all_at_least_two: diagonal.iter().all(|&g| g >= 2) && cross >= 2 }
}
