mod common;

use common::*;
use dynlz::engine::Engine;
use dynlz::index::{FastIndex, NaiveIndex, SnapshotIndex, StringIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scripts<I: StringIndex>(seed: u64, count: usize, max_n: usize, steps: usize, debug: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..count {
        let sigma = rng.gen_range(1..=4);
        let n0 = rng.gen_range(0..=max_n);
        let edge = rng.gen_bool(0.3);
        let init = random_string(&mut rng, n0, sigma);
        let mut e: Engine<I> = Engine::preprocess(&init, cfg(seed ^ t as u64, debug)).unwrap();
        compare(&mut e, true).unwrap();
        let mut cur = init.clone();
        for step in 0..steps {
            let op = random_op(&mut rng, cur.len(), sigma, edge, max_n);
            let before = cur.clone();
            op.apply_to_vec(&mut cur);
            if let Err(err) = e.update(&op).map(|_| ()).map_err(|x| x.to_string()).and_then(|_| compare(&mut e, true)) {
                panic!("script {t} step {step}: {before:?} then {op:?}: {err}");
            }
        }
    }
}

#[test]
fn naive_small_scripts() {
    scripts::<NaiveIndex>(1, 400, 30, 10, true);
}

#[test]
fn fast_small_scripts() {
    scripts::<FastIndex>(2, 200, 40, 8, false);
}

#[test]
fn snapshot_small_scripts() {
    scripts::<SnapshotIndex>(3, 200, 40, 8, false);
}

#[test]
fn naive_medium_scripts() {
    scripts::<NaiveIndex>(4, 60, 120, 6, true);
}

#[test]
fn every_active_index_is_classified() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3000 {
        let sigma = rng.gen_range(1..=3);
        let n = rng.gen_range(0..=40);
        let s = random_string(&mut rng, n, sigma);
        let edge = rng.gen_bool(0.3);
        let op = random_op(&mut rng, n, sigma, edge, 60);
        let cls = dynlz::engine::classify(&s, &op).unwrap();
        if let Some(c) = cls.iter().find(|c| !c.covered()) {
            panic!("{s:?} with {op:?}: index {} is active but unclassified", c.pos);
        }
    }
}
