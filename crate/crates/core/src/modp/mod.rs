//! Reduction modulo primes and semigroup orbits over `P^1(F_p)`.
//!
//! Points of `P^1(F_p)` are single residues `0..p`, with `p` standing for infinity.

mod arith;
mod orbit;
mod reduce;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use arith::Modulus;
pub use orbit::{
    orbit_size_mod_p, orbit_size_mod_p_capped, reduced_orbit_size, OrbitRecord, OrbitSize, BITSET_THRESHOLD,
};
pub use reduce::{good_reduction, reduce_point, EvalScratch, ReducedMap, ReducedSystem};
pub use sweep::{
    cache_file, cached_records, format_record, load_cache, primes_up_to, sweep, truncate_cache, SweepConfig,
    SweepOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModpError {
    #[error("map {map} has bad reduction at p = {p}")]
    BadReduction { p: u64, map: usize },
    #[error("prime {0} is outside the supported range 2..2^32")]
    PrimeOutOfRange(u64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("cache integrity error in {} at line {line}: {message}", path.display())]
    Integrity { path: PathBuf, line: usize, message: String },
    #[error("cache covers primes up to {covered} but {missing} primes up to {bound} are missing; run a sweep first")]
    CacheIncomplete { covered: u64, bound: u64, missing: usize },
    #[error("sweep interrupted after {completed} of {total} primes")]
    Interrupted { completed: usize, total: usize },
}
