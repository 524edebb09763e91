use std::fs;
use std::sync::atomic::AtomicBool;

use semiorbit::algebra::ProjectivePointQ;
use semiorbit::dynamics::{RationalMapQ, SemigroupSystem};
use semiorbit::modp::{
    cache_file, cached_records, format_record, sweep, truncate_cache, ModpError, OrbitRecord, OrbitSize, SweepConfig,
};

fn pm() -> SemigroupSystem {
    SemigroupSystem::new(vec![RationalMapQ::poly(&[1, 0, 1]).unwrap(), RationalMapQ::poly(&[-1, 0, 1]).unwrap()])
        .unwrap()
}

fn with_pole() -> SemigroupSystem {
    SemigroupSystem::new(vec![
        RationalMapQ::poly(&[1, 0, 1]).unwrap(),
        RationalMapQ::from_ints(&[1, 0, 2], &[0, 1, 0]).unwrap(),
    ])
    .unwrap()
}

fn run(s: &SemigroupSystem, config: SweepConfig) -> Result<semiorbit::modp::SweepOutcome, ModpError> {
    sweep(s, &ProjectivePointQ::affine(0), &config, &AtomicBool::new(false), |_, _| {})
}

fn strip(recs: &[OrbitRecord]) -> Vec<(u64, bool, OrbitSize)> {
    recs.iter().map(|r| (r.p, r.good, r.m)).collect()
}

#[test]
fn small_sweep_records() {
    let out = run(&pm(), SweepConfig::new(10)).unwrap();
    assert_eq!(out.records.iter().map(|r| r.p).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
    assert!(out.records.iter().all(|r| r.good));
    assert_eq!(out.records[1].m, OrbitSize::Finite(3));
    assert_eq!(out.records[2].m, OrbitSize::Finite(5));

    let out = run(&with_pole(), SweepConfig::new(10)).unwrap();
    assert_eq!((out.records[0].p, out.records[0].good, out.records[0].m), (2, false, OrbitSize::Infinite));
    assert!(out.records[1..].iter().all(|r| r.good));
}

#[test]
fn second_run_is_served_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::new(100).cache_dir(dir.path());
    let first = run(&pm(), config.clone()).unwrap();
    assert_eq!((first.computed, first.cache_hits), (25, 0));
    let second = run(&pm(), config).unwrap();
    assert_eq!((second.computed, second.cache_hits), (0, 25));
    assert_eq!(strip(&first.records), strip(&second.records));

    // extending the bound only computes the new primes
    let third = run(&pm(), SweepConfig::new(200).cache_dir(dir.path())).unwrap();
    assert_eq!((third.computed, third.cache_hits), (21, 25));
}

#[test]
fn cache_lines_have_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    run(&with_pole(), SweepConfig::new(10).cache_dir(dir.path())).unwrap();
    let text = fs::read_to_string(cache_file(dir.path(), &with_pole(), &ProjectivePointQ::affine(0))).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with(r#"{"p":2,"good":false,"m":"inf","t_ms":"#), "{}", lines[0]);
    assert!(lines[1].starts_with(r#"{"p":3,"good":true,"m":"#), "{}", lines[1]);
    let rec = OrbitRecord { p: 5, good: true, m: OrbitSize::Finite(5), visited_cap_hit: false, t_ms: 0.01 };
    assert_eq!(format_record(&rec), r#"{"p":5,"good":true,"m":5,"t_ms":0.01}"#);
}

#[test]
fn worker_count_does_not_change_results() {
    let a = run(&with_pole(), SweepConfig { block_size: 7, ..SweepConfig::new(3000) }).unwrap();
    let b = run(&with_pole(), SweepConfig { block_size: 7, ..SweepConfig::new(3000).workers(4) }).unwrap();
    assert_eq!(strip(&a.records), strip(&b.records));
    assert!(b.records.windows(2).all(|w| w[0].p < w[1].p));
}

#[test]
fn corrupted_lines_are_reported_by_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::new(30).cache_dir(dir.path());
    run(&pm(), config.clone()).unwrap();
    let path = cache_file(dir.path(), &pm(), &ProjectivePointQ::affine(0));
    let text = fs::read_to_string(&path).unwrap();

    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[3] = "{\"p\":7,\"good\":true,\"m\":oops}".into();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    match run(&pm(), config.clone()) {
        Err(ModpError::Integrity { line: 4, .. }) => {}
        other => panic!("expected integrity error at line 4, got {other:?}"),
    }

    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines.swap(1, 2);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(matches!(run(&pm(), config.clone()), Err(ModpError::Integrity { line: 2, .. })));

    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[2] = r#"{"p":5,"good":true,"m":9,"t_ms":0.0}"#.into();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(matches!(run(&pm(), config), Err(ModpError::Integrity { line: 3, .. })));
}

#[test]
fn interrupted_writes_resume() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::new(50).cache_dir(dir.path());
    let full = run(&pm(), config.clone()).unwrap();
    let path = cache_file(dir.path(), &pm(), &ProjectivePointQ::affine(0));

    truncate_cache(&path, 5).unwrap();
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str(r#"{"p":13,"go"#);
    fs::write(&path, text).unwrap();
    let resumed = run(&pm(), config.clone()).unwrap();
    assert_eq!((resumed.cache_hits, resumed.computed), (5, 10));
    assert_eq!(strip(&resumed.records), strip(&full.records));
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 15);
}

#[test]
fn cancellation_and_missing_cache() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::new(100).cache_dir(dir.path());
    let cancelled = sweep(&pm(), &ProjectivePointQ::affine(0), &config, &AtomicBool::new(true), |_, _| {});
    assert!(matches!(cancelled, Err(ModpError::Interrupted { completed: 0, total: 25 })));
    assert!(matches!(
        cached_records(dir.path(), &pm(), &ProjectivePointQ::affine(0), 100),
        Err(ModpError::CacheIncomplete { missing: 25, .. })
    ));
    run(&pm(), config).unwrap();
    assert_eq!(cached_records(dir.path(), &pm(), &ProjectivePointQ::affine(0), 60).unwrap().len(), 17);
    assert!(matches!(run(&pm(), SweepConfig::new(1)), Err(ModpError::InvalidArgument(_))));
}
