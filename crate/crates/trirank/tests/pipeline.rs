//! End-to-end library flows: generate, persist, reload, decompose, persist
//! the certificate, reload it, and re-verify against the original tensor.

use trirank::files::{load_decomposition, load_tensor, save_decomposition, save_tensor};
use trirank::pencil::{decompose_generic, default_budget, GenericOutcome, Verdict};
use trirank::rng::GaussianStream;
use trirank::tensor::{canonical_tensor, relative_residual};
use trirank::{gallery, tall, tol, Mat, Tensor3};

fn random_invertible(side: usize, g: &mut GaussianStream) -> Mat {
    loop {
        let m = Mat::from_fn(side, side, |_, _| g.next());
        if m.inverse().is_ok() {
            return m;
        }
    }
}

#[test]
fn generic_flow_survives_the_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5u64 {
        let t = Tensor3::random_gaussian(3, 6, 3, 9000 + seed);
        let tensor_path = dir.path().join(format!("tensor-{seed}.json"));
        save_tensor(&tensor_path, &t).unwrap();
        let loaded = load_tensor(&tensor_path).unwrap();
        assert_eq!(loaded, t, "tensor JSON must round-trip bit-exactly");

        let outcome = decompose_generic(&loaded, default_budget(6), seed, tol::REC).unwrap();
        let GenericOutcome::RankP { decomposition, residual } = outcome else {
            panic!("seed {seed}: generic 3x6x3 tensor should decompose at rank 6");
        };
        assert_eq!(decomposition.rank_bound(), 6);

        let decomp_path = dir.path().join(format!("decomp-{seed}.json"));
        save_decomposition(&decomp_path, &decomposition).unwrap();
        let reloaded = load_decomposition(&decomp_path).unwrap();
        assert_eq!(reloaded, decomposition, "decomposition JSON must round-trip bit-exactly");

        // Independent verification after the round trip reproduces the
        // reported residual exactly, not merely within tolerance.
        let recheck = relative_residual(&t, &reloaded).unwrap();
        assert_eq!(recheck, residual);
        assert!(recheck <= tol::REC);
    }
}

#[test]
fn tall_flow_survives_the_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5u64 {
        // 3x7x3 sits strictly between (m-1)n = 6 and mn = 9: rank 7.
        let t = Tensor3::random_gaussian(3, 7, 3, 400 + seed);
        let d = tall::decompose(&t).unwrap();
        assert_eq!(d.rank_bound(), 7);

        let path = dir.path().join(format!("tall-{seed}.json"));
        save_decomposition(&path, &d).unwrap();
        let reloaded = load_decomposition(&path).unwrap();
        let residual = relative_residual(&t, &reloaded).unwrap();
        assert!(residual <= tol::REC, "seed {seed}: residual {residual}");
    }
}

#[test]
fn canonical_witness_flow_survives_the_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let shape = tall::TallShape::new(3, 3, 7).unwrap();
    let witness = tall::canonical_witness(&shape);
    let path = dir.path().join("witness.json");
    save_tensor(&path, &witness).unwrap();
    let loaded = load_tensor(&path).unwrap();
    let d = tall::decompose(&loaded).unwrap();
    let residual = relative_residual(&witness, &d).unwrap();
    assert!(residual <= 1e-10, "witness residual {residual}");
}

#[test]
fn gl_equivalent_tensors_agree_on_rank() {
    let mut g = GaussianStream::new(31_337);
    for seed in 0..5u64 {
        let base = Tensor3::random_gaussian(3, 6, 3, 500 + seed);
        let p = random_invertible(3, &mut g);
        let q = random_invertible(6, &mut g);
        let r = random_invertible(3, &mut g);
        let moved = base.gl_action(&p, &q, &r).unwrap();

        let for_base = decompose_generic(&base, default_budget(6), seed, tol::REC).unwrap();
        let for_moved = decompose_generic(&moved, default_budget(6), seed, tol::REC).unwrap();
        match (for_base, for_moved) {
            (
                GenericOutcome::RankP { decomposition: a, .. },
                GenericOutcome::RankP { decomposition: b, .. },
            ) => assert_eq!(a.rank_bound(), b.rank_bound()),
            other => panic!("seed {seed}: expected rank-p on both sides, got {other:?}"),
        }
    }
}

#[test]
fn rank_excess_verdict_survives_the_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let t = canonical_tensor(&gallery::absolutely_nonsingular_4x4()).unwrap();
    let path = dir.path().join("quaternion.json");
    save_tensor(&path, &t).unwrap();
    let loaded = load_tensor(&path).unwrap();
    match decompose_generic(&loaded, 256, 0, tol::REC).unwrap() {
        GenericOutcome::RankExceedsP(c) => {
            assert!(matches!(c.verdict, Verdict::NoRealPointFound));
            assert_eq!(c.directions_tried, 256);
        }
        GenericOutcome::RankP { .. } => panic!("quaternion tensor has rank > p"),
    }
}
