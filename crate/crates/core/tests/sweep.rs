use std::path::PathBuf;

use bellccp::polytope::{classical_vertices, VertexSet};
use bellccp::quantum::{born_behavior, Behavior, DensityMatrix, MeasurementSet};
use bellccp::sweep::{
    count_distinct, merge_shards, sweep_simulability, Shard, StrategySpace, SweepConfig,
};
use bellccp::Error;

/// 2⁴ encoders × 2⁸ decoders.
fn space() -> StrategySpace {
    StrategySpace {
        outcomes_a: 2,
        outcomes_b: 2,
        shift: 1,
        settings_a: 2,
        settings_b: 2,
        messages: 2,
        guesses: 2,
    }
}

/// A partially entangled state with generic measurements, so that the 2¹²
/// strategies induce many distinct behaviors.
fn behavior() -> Behavior {
    let c = 0.3f64;
    let rho = DensityMatrix::pure_real(&[c.cos(), 0.0, 0.0, c.sin()]).unwrap();
    let a = MeasurementSet::qubit_projective(&[[0.0, 0.0, 1.0], [0.8, 0.0, 0.6]]).unwrap();
    let b = MeasurementSet::qubit_projective(&[[0.6, 0.0, 0.8], [-0.28, 0.0, 0.96]]).unwrap();
    born_behavior(&rho, &a, &b).unwrap()
}

fn vertices() -> VertexSet {
    classical_vertices(2, 2, 2, 2).unwrap()
}

fn config(chunk: usize) -> SweepConfig {
    SweepConfig {
        chunk_size: chunk,
        checkpoint_every: 1,
        ..SweepConfig::full("test", space())
    }
}

fn ck(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn shards_merge_to_the_single_shard_result() {
    let p = behavior();
    let v = vertices();
    let whole = sweep_simulability(&p, &v, &config(500)).unwrap();
    assert_eq!(whole.strategies_visited, 4096);
    assert!(whole.distinct_behaviors > 100);
    let dir = tempfile::tempdir().unwrap();
    for n in [2, 3, 5] {
        let paths: Vec<PathBuf> = (0..n).map(|i| ck(&dir, &format!("s{i}of{n}"))).collect();
        for (i, path) in paths.iter().enumerate() {
            let mut cfg = config(500);
            cfg.shard = Shard::new(i, n).unwrap();
            cfg.checkpoint = Some(path.clone());
            sweep_simulability(&p, &v, &cfg).unwrap();
        }
        let merged = merge_shards(&paths).unwrap();
        assert_eq!(merged.distinct_behaviors, whole.distinct_behaviors);
        assert_eq!(merged.strategies_visited, whole.strategies_visited);
        assert_eq!(merged.min_v_star, whole.min_v_star);
        assert_eq!(merged.argmin, whole.argmin);
        assert_eq!(merged.review, whole.review);
        assert_eq!(merged.shards.len(), n);
    }
}

#[test]
fn merge_rejects_missing_or_foreign_shards() {
    let p = behavior();
    let dir = tempfile::tempdir().unwrap();
    let a = ck(&dir, "a");
    let mut cfg = config(1000);
    cfg.shard = Shard::new(0, 2).unwrap();
    cfg.checkpoint = Some(a.clone());
    count_distinct(&p, &cfg).unwrap();
    assert!(merge_shards(&[&a]).is_err());

    let b = ck(&dir, "b");
    cfg.shard = Shard::new(1, 2).unwrap();
    cfg.checkpoint = Some(b.clone());
    cfg.dedup_tolerance = 1e-11;
    count_distinct(&p, &cfg).unwrap();
    assert!(matches!(merge_shards(&[&a, &b]), Err(Error::Checkpoint(_))));
}

#[test]
fn interrupted_run_resumes_to_an_identical_report() {
    let p = behavior();
    let v = vertices();
    let reference = sweep_simulability(&p, &v, &config(256)).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = ck(&dir, "resume.ck");
    let mut cfg = config(256);
    cfg.checkpoint = Some(path.clone());
    cfg.stop_after_chunks = Some(8);
    let partial = sweep_simulability(&p, &v, &cfg).unwrap();
    assert!(!partial.complete);
    assert_eq!(partial.strategies_visited, 2048);

    cfg.stop_after_chunks = None;
    let resumed = sweep_simulability(&p, &v, &cfg).unwrap();
    assert!(resumed.complete);
    assert_eq!(resumed.to_json(), reference.to_json());
    assert_eq!(resumed.to_csv(), reference.to_csv());

    // A finished checkpoint replays the same report without new work.
    assert_eq!(sweep_simulability(&p, &v, &cfg).unwrap().to_json(), reference.to_json());
}

#[test]
fn empty_checkpoint_file_starts_a_full_run() {
    let p = behavior();
    let dir = tempfile::tempdir().unwrap();
    let path = ck(&dir, "empty.ck");
    std::fs::write(&path, b"").unwrap();
    let mut cfg = config(1024);
    cfg.checkpoint = Some(path.clone());
    let r = count_distinct(&p, &cfg).unwrap();
    assert_eq!(r.strategies_visited, 4096);
    assert!(std::fs::metadata(&path).unwrap().len() > 0);
}

#[test]
fn corrupted_or_mismatched_checkpoints_are_refused() {
    let p = behavior();
    let dir = tempfile::tempdir().unwrap();
    let path = ck(&dir, "c.ck");
    let mut cfg = config(512);
    cfg.checkpoint = Some(path.clone());
    cfg.stop_after_chunks = Some(2);
    count_distinct(&p, &cfg).unwrap();

    let good = std::fs::read(&path).unwrap();
    std::fs::write(&path, &good[..good.len() - 40]).unwrap();
    assert!(matches!(count_distinct(&p, &cfg), Err(Error::Checkpoint(_))));

    let mut flipped = good.clone();
    let mid = flipped.len() / 2;
    flipped[mid] ^= 0x10;
    std::fs::write(&path, &flipped).unwrap();
    assert!(matches!(count_distinct(&p, &cfg), Err(Error::Checkpoint(_))));

    std::fs::write(&path, &good).unwrap();
    let mut other = cfg.clone();
    other.chunk_size = 256;
    assert!(matches!(count_distinct(&p, &other), Err(Error::Checkpoint(_))));
    let mut other = cfg.clone();
    other.shard = Shard::new(0, 2).unwrap();
    assert!(matches!(count_distinct(&p, &other), Err(Error::Checkpoint(_))));
}

#[test]
fn sampled_runs_are_deterministic_and_shardable() {
    let p = behavior();
    let v = vertices();
    let mut cfg = SweepConfig::sampled("test", space(), 1500, 11);
    cfg.chunk_size = 200;
    let a = sweep_simulability(&p, &v, &cfg).unwrap();
    let b = sweep_simulability(&p, &v, &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.strategies_visited, 1500);

    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..3).map(|i| ck(&dir, &format!("{i}"))).collect();
    for (i, path) in paths.iter().enumerate() {
        let mut c = cfg.clone();
        c.shard = Shard::new(i, 3).unwrap();
        c.checkpoint = Some(path.clone());
        sweep_simulability(&p, &v, &c).unwrap();
    }
    let merged = merge_shards(&paths).unwrap();
    assert_eq!(merged.distinct_behaviors, a.distinct_behaviors);
    assert_eq!(merged.min_v_star, a.min_v_star);

    cfg.sample.as_mut().unwrap().seed = 12;
    let c = sweep_simulability(&p, &v, &cfg).unwrap();
    assert_ne!(c.to_json(), a.to_json());
}

#[test]
fn vertex_set_must_match_the_space() {
    let p = behavior();
    let wrong = classical_vertices(3, 2, 2, 2).unwrap();
    assert!(matches!(
        sweep_simulability(&p, &wrong, &config(1000)),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
#[ignore = "dedup pass over all 2^24 strategies"]
fn full_candidate_dedup_count() {
    let p = bellccp::quantum::candidate_realization().unwrap().behavior().unwrap();
    let r = count_distinct(&p, &SweepConfig::full("candidate", StrategySpace::i3322())).unwrap();
    assert_eq!(r.distinct_behaviors, 8_192_992);
}
