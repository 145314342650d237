mod common;

use common::cfg;
use dynlz::engine::Engine;
use dynlz::gadgets::{dot, solve_ov, Gadgets, OvInstance};
use dynlz::index::{FastIndex, NaiveIndex, SnapshotIndex, StringIndex};
use dynlz::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance<R: Rng>(rng: &mut R, n: usize, d: usize, nb: usize) -> OvInstance {
    let vec = |rng: &mut R| (0..d).map(|_| rng.gen_bool(0.5)).collect::<Vec<bool>>();
    let a = (0..n).map(|_| vec(rng)).collect();
    let b = (0..nb).map(|_| vec(rng)).collect();
    OvInstance::new(a, b).unwrap()
}

fn check_instance<I: StringIndex>(inst: &OvInstance) {
    let (n, d) = (inst.n(), inst.d());
    let rep = solve_ov(inst, |s| Engine::<I>::preprocess(s, cfg(7, false))).unwrap();
    for (u, r) in inst.b.iter().zip(&rep.per_b) {
        for (v, &c) in inst.a.iter().zip(&r.per_a) {
            assert_eq!(c, d + 1 + dot(u, v) as usize, "u={u:?} v={v:?}");
        }
        let all_hit = inst.a.iter().all(|v| dot(u, v));
        assert_eq!(r.difference == (d + 2) * n, all_hit);
    }
    assert_eq!(rep.has_orthogonal, inst.brute_force());
}

#[test]
fn phrase_counts_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, d) in [(4, 2), (4, 3), (9, 2)] {
        let inst = random_instance(&mut rng, n, d, 3);
        let g = Gadgets::for_instance(&inst).unwrap();
        for u in &inst.b {
            let s = g.build_s(u, &inst.a);
            let sp = g.build_s_prime(u);
            let diff = oracle::lz77_brute(&s.symbols).len() - oracle::lz77_brute(&sp.symbols).len();
            let want: usize = inst.a.iter().map(|v| d + 1 + dot(u, v) as usize).sum();
            assert_eq!(diff, want);
        }
        check_instance::<NaiveIndex>(&inst);
    }
}

#[test]
fn all_ones_has_no_orthogonal_pair() {
    let inst = OvInstance::new(vec![vec![true; 3]; 4], vec![vec![true; 3]; 4]).unwrap();
    let rep = solve_ov(&inst, |s| Engine::<FastIndex>::preprocess(s, cfg(1, false))).unwrap();
    assert!(!rep.has_orthogonal);
    assert!(rep.per_b.iter().all(|r| r.difference == 5 * 4));
}

#[test]
fn non_square_is_rejected() {
    assert!(OvInstance::new(vec![vec![true]; 5], vec![]).is_err());
}

#[test]
fn largest_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let inst = random_instance(&mut rng, 16, 6, 8);
    check_instance::<SnapshotIndex>(&inst);
}
