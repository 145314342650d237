mod common;

use common::*;
use dynlz::engine::{critical_sequence, Side};
use dynlz::index::{IndexConfig, NaiveIndex, SnapshotIndex, StringIndex};
use dynlz::oracle;
use proptest::prelude::*;

#[test]
fn examples() {
    let s = NaiveIndex::build(&bytes("aaaaaa"), &IndexConfig::default()).unwrap();
    let c = critical_sequence(&s, 5, 5, Side::Old).unwrap();
    assert_eq!(c.indices(), vec![5, 2]);
    let s = NaiveIndex::build(&bytes("aabaab"), &IndexConfig::default()).unwrap();
    let t = oracle::lpf_table_brute(&bytes("aabaab"));
    for i in 1..=6 {
        for j in i..=6 {
            let c = critical_sequence(&s, i, j, Side::New).unwrap();
            assert_eq!(c.critical, oracle::critical_brute(&t, i, j), "i={i} j={j}");
        }
    }
    assert!(critical_sequence(&s, 4, 3, Side::New).is_err());
}

proptest! {
    #[test]
    fn matches_definition(s in prop::collection::vec(0u32..3, 1..120), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let n = s.len();
        let i = a.index(n) + 1;
        let j = i + b.index(n + 1 - i);
        let idx = SnapshotIndex::build(&s, &IndexConfig::default()).unwrap();
        let c = critical_sequence(&idx, i, j, Side::Old).unwrap();
        let t = oracle::lpf_table_brute(&s);
        prop_assert_eq!(&c.critical, &oracle::critical_brute(&t, i, j));
        for (lo, hi) in c.partition() {
            prop_assert!((lo..=hi).all(|x| t.reach(x) == t.reach(lo)));
        }
        prop_assert!(oracle::critical_vs_nd_check(&s, i, j));
    }
}
