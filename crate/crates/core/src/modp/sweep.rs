//! Parallel sweeps over all primes up to a bound, backed by an append-only
//! JSONL cache with one file per `(S, P)` content hash.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use super::{orbit_size_mod_p, reduce::good_reduction, ModpError, Modulus, OrbitRecord};
use crate::algebra::ProjectivePointQ;
use crate::dynamics::SemigroupSystem;

/// All primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    primal::Primes::all().take_while(|&p| p as u64 <= bound).map(|p| p as u64).collect()
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub prime_bound: u64,
    pub workers: usize,
    /// Cache directory; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    /// Primes per work unit.
    pub block_size: usize,
}

impl SweepConfig {
    pub fn new(prime_bound: u64) -> Self {
        Self { prime_bound, workers: 1, cache_dir: None, block_size: 64 }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    /// One record per prime up to the bound, ascending.
    pub records: Vec<OrbitRecord>,
    pub cache_hits: usize,
    pub computed: usize,
}

/// Path of the cache file for a system and base point.
pub fn cache_file(dir: &Path, system: &SemigroupSystem, point: &ProjectivePointQ) -> PathBuf {
    dir.join(format!("{}.jsonl", system.content_hash(point)))
}

/// One cache line, exactly `{"p":..,"good":..,"m":..,"t_ms":..}`.
pub fn format_record(rec: &OrbitRecord) -> String {
    let t = (rec.t_ms * 1e3).round() / 1e3;
    let m = match rec.m.finite() {
        Some(m) => m.to_string(),
        None => "\"inf\"".to_string(),
    };
    format!("{{\"p\":{},\"good\":{},\"m\":{},\"t_ms\":{}}}", rec.p, rec.good, m, t)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheLine {
    p: u64,
    good: bool,
    m: super::OrbitSize,
    t_ms: f64,
}

/// Reads and validates a cache file. A trailing line without a newline is the
/// residue of an interrupted write and is cut off; anything else that is not a
/// valid record for the next prime in sequence is an integrity error.
pub fn load_cache(
    path: &Path,
    system: &SemigroupSystem,
) -> Result<Vec<OrbitRecord>, ModpError> {
    let io = |e: std::io::Error| ModpError::Io(format!("{}: {e}", path.display()));
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io(e)),
    };
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(io)?;
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        file.set_len(complete as u64).map_err(io)?;
    }
    let body = &text[..complete];
    let mut records = Vec::new();
    let mut primes = primal::Primes::all().map(|p| p as u64);
    for (i, line) in body.lines().enumerate() {
        let lineno = i + 1;
        let bad = |message: String| ModpError::Integrity { path: path.to_path_buf(), line: lineno, message };
        let raw: CacheLine = serde_json::from_str(line).map_err(|e| bad(format!("unparseable record: {e}")))?;
        let expected = primes.next().expect("infinitely many primes");
        if raw.p != expected {
            return Err(bad(format!("expected p = {expected}, found p = {}", raw.p)));
        }
        let rec = OrbitRecord { p: raw.p, good: raw.good, m: raw.m, visited_cap_hit: false, t_ms: raw.t_ms };
        rec.validate().map_err(bad)?;
        if rec.p <= Modulus::MAX && rec.good != system.maps().iter().all(|f| good_reduction(f, rec.p)) {
            return Err(bad(format!("good-reduction flag disagrees with the system at p = {}", rec.p)));
        }
        records.push(rec);
    }
    Ok(records)
}

/// Computes `m_p` for every prime up to the bound, serving cached records and
/// appending fresh ones to the cache in ascending order. `sink` sees every
/// record in order with a flag telling whether it came from the cache.
///
/// Setting `cancel` stops the workers; completed records already written stay
/// valid and the call returns [`ModpError::Interrupted`].
pub fn sweep(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    config: &SweepConfig,
    cancel: &AtomicBool,
    mut sink: impl FnMut(&OrbitRecord, bool),
) -> Result<SweepOutcome, ModpError> {
    if config.prime_bound < 2 {
        return Err(ModpError::InvalidArgument(format!("prime bound must be at least 2, got {}", config.prime_bound)));
    }
    if config.prime_bound > Modulus::MAX {
        return Err(ModpError::PrimeOutOfRange(config.prime_bound));
    }
    let primes = primes_up_to(config.prime_bound);
    let mut outcome = SweepOutcome::default();

    let (path, cached) = match &config.cache_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| ModpError::Io(format!("{}: {e}", dir.display())))?;
            let path = cache_file(dir, system, point);
            let cached = load_cache(&path, system)?;
            (Some(path), cached)
        }
        None => (None, Vec::new()),
    };
    for rec in cached.into_iter().take_while(|r| r.p <= config.prime_bound) {
        sink(&rec, true);
        outcome.records.push(rec);
    }
    outcome.cache_hits = outcome.records.len();

    let pending = &primes[outcome.records.len()..];
    if pending.is_empty() {
        return Ok(outcome);
    }
    let mut writer = match &path {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| ModpError::Io(format!("{}: {e}", path.display())))?;
            Some((BufWriter::new(file), path.clone()))
        }
        None => None,
    };

    let blocks: Vec<&[u64]> = pending.chunks(config.block_size.max(1)).collect();
    let next_block = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let halted = || cancel.load(Ordering::Relaxed) || stop.load(Ordering::Relaxed);
    let (tx, rx) = mpsc::channel::<(usize, Result<Vec<OrbitRecord>, ModpError>)>();
    let mut failure = None;
    std::thread::scope(|scope| {
        for _ in 0..config.workers.max(1).min(blocks.len()) {
            let tx = tx.clone();
            let (blocks, next_block, halted) = (&blocks, &next_block, &halted);
            scope.spawn(move || loop {
                let b = next_block.fetch_add(1, Ordering::Relaxed);
                if b >= blocks.len() || halted() {
                    break;
                }
                let mut out = Vec::with_capacity(blocks[b].len());
                for &p in blocks[b] {
                    if halted() {
                        return;
                    }
                    match orbit_size_mod_p(system, point, p) {
                        Ok(rec) => out.push(rec),
                        Err(e) => {
                            let _ = tx.send((b, Err(e)));
                            return;
                        }
                    }
                }
                if tx.send((b, Ok(out))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut buffer: BTreeMap<usize, Vec<OrbitRecord>> = BTreeMap::new();
        let mut next_to_write = 0;
        for (b, result) in rx {
            match result {
                Ok(recs) => {
                    buffer.insert(b, recs);
                }
                Err(e) => {
                    stop.store(true, Ordering::Relaxed);
                    failure.get_or_insert(e);
                    continue;
                }
            }
            while let Some(recs) = buffer.remove(&next_to_write) {
                if failure.is_none() {
                    if let Some((w, path)) = writer.as_mut() {
                        let res = recs
                            .iter()
                            .try_for_each(|r| writeln!(w, "{}", format_record(r)))
                            .and_then(|_| w.flush());
                        if let Err(e) = res {
                            stop.store(true, Ordering::Relaxed);
                            failure = Some(ModpError::Io(format!("{}: {e}", path.display())));
                        }
                    }
                }
                for r in recs {
                    sink(&r, false);
                    outcome.records.push(r);
                    outcome.computed += 1;
                }
                next_to_write += 1;
            }
        }
    });
    if let Some((mut w, _)) = writer {
        let _ = w.flush();
        let _ = w.get_mut().sync_data();
    }
    if let Some(e) = failure {
        return Err(e);
    }
    if outcome.records.len() < primes.len() {
        return Err(ModpError::Interrupted { completed: outcome.records.len(), total: primes.len() });
    }
    Ok(outcome)
}

/// Reads the cached records for primes up to `bound` without computing any.
/// Fails with [`ModpError::CacheIncomplete`] if the cache stops short.
pub fn cached_records(
    dir: &Path,
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    bound: u64,
) -> Result<Vec<OrbitRecord>, ModpError> {
    let records: Vec<OrbitRecord> =
        load_cache(&cache_file(dir, system, point), system)?.into_iter().take_while(|r| r.p <= bound).collect();
    let needed = primes_up_to(bound).len();
    if records.len() < needed {
        let covered = records.last().map_or(0, |r| r.p);
        return Err(ModpError::CacheIncomplete { covered, bound, missing: needed - records.len() });
    }
    Ok(records)
}

/// Truncates a cache file to its first `keep` complete lines.
pub fn truncate_cache(path: &Path, keep: usize) -> std::io::Result<()> {
    let text = std::fs::read_to_string(path)?;
    let cut = match keep {
        0 => 0,
        k => text.match_indices('\n').nth(k - 1).map_or(text.len(), |(i, _)| i + 1),
    };
    OpenOptions::new().write(true).open(path)?.set_len(cut as u64)
}
