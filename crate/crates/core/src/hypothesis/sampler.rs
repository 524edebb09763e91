//! Random search for pairs that are critically simple and critically separated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{are_critically_separated, is_critically_simple, HypothesisError};
use crate::algebra::BinaryFormZ;
use crate::dynamics::RationalMapQ;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledFamily {
    pub attempt: usize,
    pub maps: Vec<String>,
    #[serde(skip)]
    pub rational_maps: Vec<RationalMapQ>,
    pub critically_simple: [bool; 2],
    pub critically_separated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureStats {
    pub degenerate: usize,
    pub not_simple: usize,
    pub not_separated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub degrees: Vec<usize>,
    pub height: u64,
    pub seed: u64,
    pub attempts_used: usize,
    pub found: Option<SampledFamily>,
    pub failures: FailureStats,
}

enum Outcome {
    Degenerate,
    Checked(SampledFamily),
}

/// Random degree-`d` map with coefficients in `[-height, height]`; `None` if degenerate.
pub fn random_map(rng: &mut impl Rng, d: usize, height: u64) -> Option<RationalMapQ> {
    let h = height as i64;
    let mut coeffs = || (0..=d).map(|_| rng.gen_range(-h..=h)).collect::<Vec<i64>>();
    let (num, den) = (coeffs(), coeffs());
    let num = BinaryFormZ::from_ints(&num).ok()?;
    let den = BinaryFormZ::from_ints(&den).ok()?;
    RationalMapQ::new(num, den).ok()
}

/// Generator for attempt `i`: stream `i` of the ChaCha generator keyed by `seed`.
pub fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

fn run_attempt(degrees: &[usize], height: u64, seed: u64, attempt: usize) -> Result<Outcome, HypothesisError> {
    let mut rng = attempt_rng(seed, attempt);
    let mut maps = Vec::with_capacity(degrees.len());
    for &d in degrees {
        match random_map(&mut rng, d, height) {
            Some(f) => maps.push(f),
            None => return Ok(Outcome::Degenerate),
        }
    }
    let simple = [is_critically_simple(&maps[0])?, is_critically_simple(&maps[1])?];
    let separated = simple[0] && simple[1] && are_critically_separated(&maps[0], &maps[1])?;
    Ok(Outcome::Checked(SampledFamily {
        attempt,
        maps: maps.iter().map(RationalMapQ::canonical).collect(),
        rational_maps: maps,
        critically_simple: simple,
        critically_separated: separated,
    }))
}

/// Draws up to `attempts` tuples and returns the first whose first two maps
/// are critically simple and critically separated. Attempts are evaluated in
/// parallel but scanned in order, so the result depends only on `seed`.
pub fn sample_good_family(
    degrees: &[usize],
    attempts: usize,
    height: u64,
    seed: u64,
) -> Result<SampleReport, HypothesisError> {
    if degrees.len() < 2 || degrees[0] < 4 || degrees[1] < 4 {
        return Err(HypothesisError::InvalidArgument("the first two degrees must be at least 4".into()));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 2) {
        return Err(HypothesisError::DegreeTooSmall { degree: d, required: 2 });
    }
    if height == 0 {
        return Err(HypothesisError::InvalidArgument("coefficient height must be positive".into()));
    }
    let chunk = 4 * rayon::current_num_threads();
    let mut failures = FailureStats::default();
    let mut start = 0;
    while start < attempts {
        let end = (start + chunk).min(attempts);
        let outcomes: Vec<Outcome> = (start..end)
            .into_par_iter()
            .map(|i| run_attempt(degrees, height, seed, i))
            .collect::<Result<_, _>>()?;
        for o in outcomes {
            match o {
                Outcome::Degenerate => failures.degenerate += 1,
                Outcome::Checked(s) if s.critically_separated => {
                    return Ok(SampleReport {
                        degrees: degrees.to_vec(),
                        height,
                        seed,
                        attempts_used: s.attempt + 1,
                        found: Some(s),
                        failures,
                    });
                }
                Outcome::Checked(s) if !(s.critically_simple[0] && s.critically_simple[1]) => failures.not_simple += 1,
                Outcome::Checked(_) => failures.not_separated += 1,
            }
        }
        start = end;
    }
    Ok(SampleReport { degrees: degrees.to_vec(), height, seed, attempts_used: attempts, found: None, failures })
}
