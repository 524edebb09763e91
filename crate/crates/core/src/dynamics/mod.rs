//! Characteristic-zero dynamics of a finite set of rational maps: exact
//! evaluation, word composition, wandering and preperiodicity certificates,
//! and the difference-ideal products behind the pigeonhole bound.

mod certificates;
mod file;
mod ideals;
mod map;
mod system;
mod tree;

pub use certificates::{
    height_escape_point, moderately_preperiodic_search, wandering_certificate, CollisionWitness,
    PreperiodicWitness, WanderingCertificate, DEFAULT_NODE_BUDGET,
};
pub use file::{load_system, Coefficient, MapSpec, SystemFile};
pub use ideals::{cross_difference, difference_ideal, dprime, pigeonhole_length, DPrime, DPrimeOptions};
pub use map::RationalMapQ;
pub use system::{word_evaluate, SemigroupSystem, Word};

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("numerator and denominator share a root: the pair does not define a morphism")]
    DegenerateMap,
    #[error("a system needs at least one map")]
    EmptySystem,
    #[error("map {index} has degree {degree}; degree at least 2 is required")]
    DegreeTooSmall { index: usize, degree: usize },
    #[error("maps {first} and {second} are identical")]
    DuplicateMap { first: usize, second: usize },
    #[error("word index {index} is outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("search exceeded its budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("no point above the height threshold after exploring {explored} orbit points (orbit closed: {orbit_closed})")]
    EscapeNotFound { explored: usize, orbit_closed: bool },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("malformed system file at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("map {index}: {message}")]
    Map { index: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}
