use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::reduce::EvalScratch;
use super::{ModpError, ReducedSystem};
use crate::algebra::ProjectivePointQ;
use crate::dynamics::SemigroupSystem;

/// Primes below this bound use a flat bitset for the visited set.
pub const BITSET_THRESHOLD: u64 = 1 << 25;

/// `m_p`: an orbit size, or infinity at a prime of bad reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitSize {
    Finite(u64),
    Infinite,
}

impl OrbitSize {
    pub fn finite(self) -> Option<u64> {
        match self {
            Self::Finite(m) => Some(m),
            Self::Infinite => None,
        }
    }
}

impl Serialize for OrbitSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(m) => s.serialize_u64(*m),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for OrbitSize {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(m) => Ok(Self::Finite(m)),
            Raw::Text(s) if s == "inf" => Ok(Self::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected an integer or \"inf\", got {s:?}"))),
        }
    }
}

/// One prime's result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub p: u64,
    pub good: bool,
    pub m: OrbitSize,
    /// Set when a visited-set cap stopped the search early; `m` is then a lower bound.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub visited_cap_hit: bool,
    pub t_ms: f64,
}

impl OrbitRecord {
    pub fn m_finite(&self) -> Option<u64> {
        self.m.finite()
    }

    /// Checks the record invariants: bad primes carry infinity, good ones `1 <= m <= p + 1`.
    pub fn validate(&self) -> Result<(), String> {
        match (self.good, self.m) {
            (false, OrbitSize::Infinite) => Ok(()),
            (false, OrbitSize::Finite(m)) => Err(format!("bad prime {} has finite m = {m}", self.p)),
            (true, OrbitSize::Infinite) => Err(format!("good prime {} has m = inf", self.p)),
            (true, OrbitSize::Finite(m)) if m >= 1 && m <= self.p + 1 => Ok(()),
            (true, OrbitSize::Finite(m)) => Err(format!("m = {m} outside 1..={} at p = {}", self.p + 1, self.p)),
        }
    }
}

/// Points per evaluation batch; keeps the working buffers cache-resident.
const CHUNK: usize = 4096;

/// Closure of the reduced point under all reduced maps, breadth first and one
/// level at a time. Returns the orbit size and whether `cap` stopped the search.
pub fn reduced_orbit_size(system: &ReducedSystem, cap: Option<u64>) -> (u64, bool) {
    let cap = cap.unwrap_or(u64::MAX);
    if system.p() < BITSET_THRESHOLD {
        bitset_closure(system, cap)
    } else {
        hashed_closure(system, cap)
    }
}

/// Every visited point sits once in `queue`; level `k` is a contiguous slice.
/// Appends are branchless: each image is written at the tail and the tail only
/// advances when the image is new.
fn bitset_closure(system: &ReducedSystem, cap: u64) -> (u64, bool) {
    let m = system.modulus();
    let n = m.p() as usize + 1;
    let mut bits = vec![0u64; n / 64 + 1];
    let mut queue = vec![0u32; n + 1];
    let start = system.point() as u32;
    bits[start as usize >> 6] |= 1 << (start & 63);
    queue[0] = start;
    let (mut lo, mut hi, mut tail) = (0usize, 1usize, 1usize);
    let mut images = Vec::with_capacity(CHUNK);
    let mut scratch = EvalScratch::default();
    while lo < hi {
        for chunk_lo in (lo..hi).step_by(CHUNK) {
            let chunk_hi = (chunk_lo + CHUNK).min(hi);
            for f in system.maps() {
                f.eval_batch(m, &queue[chunk_lo..chunk_hi], &mut images, &mut scratch);
                for &y in &images {
                    let (w, b) = (y as usize >> 6, y & 63);
                    let fresh = (!bits[w] >> b) & 1;
                    bits[w] |= 1 << b;
                    queue[tail] = y;
                    tail += fresh as usize;
                }
                if tail as u64 >= cap {
                    return (cap, true);
                }
            }
        }
        (lo, hi) = (hi, tail);
    }
    (tail as u64, false)
}

fn hashed_closure(system: &ReducedSystem, cap: u64) -> (u64, bool) {
    let m = system.modulus();
    let mut visited = HashSet::new();
    visited.insert(system.point() as u32);
    let mut frontier = vec![system.point() as u32];
    let mut next = Vec::new();
    let mut images = Vec::with_capacity(CHUNK);
    let mut scratch = EvalScratch::default();
    while !frontier.is_empty() {
        next.clear();
        for chunk in frontier.chunks(CHUNK) {
            for f in system.maps() {
                f.eval_batch(m, chunk, &mut images, &mut scratch);
                next.extend(images.iter().filter(|&&y| visited.insert(y)));
                if visited.len() as u64 >= cap {
                    return (cap, true);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    (visited.len() as u64, false)
}

/// `m_p(S, P)`: the orbit size of the reduced point, or infinity when some map
/// has bad reduction at `p`.
pub fn orbit_size_mod_p(system: &SemigroupSystem, point: &ProjectivePointQ, p: u64) -> Result<OrbitRecord, ModpError> {
    orbit_size_mod_p_capped(system, point, p, None)
}

/// As [`orbit_size_mod_p`], stopping once `cap` points have been reached.
pub fn orbit_size_mod_p_capped(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    p: u64,
    cap: Option<u64>,
) -> Result<OrbitRecord, ModpError> {
    let start = Instant::now();
    let (good, m, visited_cap_hit) = match ReducedSystem::new(system, point, p) {
        Ok(reduced) => {
            let (m, hit) = reduced_orbit_size(&reduced, cap);
            (true, OrbitSize::Finite(m), hit)
        }
        Err(ModpError::BadReduction { .. }) => (false, OrbitSize::Infinite, false),
        Err(e) => return Err(e),
    };
    Ok(OrbitRecord { p, good, m, visited_cap_hit, t_ms: start.elapsed().as_secs_f64() * 1e3 })
}
