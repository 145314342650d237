mod common;

use common::*;
use dynlz::engine::PhraseKind;
use dynlz::oracle::*;
use proptest::prelude::*;

#[test]
fn examples() {
    assert_eq!(lpf_table_brute(&bytes("abab")).lpf, vec![0, 0, 2, 1]);
    assert_eq!(lpf_table_brute(&bytes("abcd")).lpf, vec![0; 4]);
    assert_eq!(lpf_table_brute(&bytes("aaaa")).lpf, vec![0, 3, 2, 1]);
    assert_eq!(lz77_brute(&bytes("a")).len(), 1);
    assert_eq!(lz77_brute(&bytes("aaaa")).len(), 2);
    let f = lz77_brute(&bytes("abcabcabc"));
    assert_eq!(f.len(), 4);
    assert_eq!((f[3].start, f[3].end, f[3].kind, f[3].source), (4, 9, PhraseKind::Copy, Some(1)));
    assert!(lpf_tree_brute(&[]).is_empty());
    assert_eq!(nd_extension_sum(&bytes("abcabc"), &[]), 0);
    assert_eq!(nd_extension_sum(&bytes("abcabc"), &[3]), 0);
    assert_eq!(nd_extension_sum(&bytes("xaby xab"), &[2, 7]), 1);
}

#[test]
fn greedy_is_optimal_on_small_ternary_strings() {
    for n in 0..=9u32 {
        for code in 0..3u32.pow(n) {
            let s: Vec<u32> = (0..n).map(|k| code / 3u32.pow(k) % 3).collect();
            assert_eq!(lz77_brute(&s).len(), lz77_like_min_enumerated(&s), "{s:?}");
        }
    }
}

proptest! {
    #[test]
    fn suffix_array_table_matches(s in prop::collection::vec(0u32..3, 0..200)) {
        prop_assert_eq!(lpf_table_sa(&s), lpf_table_brute(&s).lpf);
    }

    #[test]
    fn phrases_tile(s in prop::collection::vec(0u32..3, 0..100)) {
        let f = lz77_brute(&s);
        let mut at = 1;
        for p in &f {
            prop_assert_eq!(p.start, at);
            if p.kind == PhraseKind::FreshChar {
                prop_assert!(p.len() == 1 && !s[..p.start - 1].contains(&s[p.start - 1]));
            } else {
                let src = p.source.unwrap();
                prop_assert!(src < p.start && lcp_brute(&s, src, p.start) >= p.len());
            }
            at = p.end + 1;
        }
        prop_assert_eq!(at, s.len() + 1);
    }

    #[test]
    fn nd_cardinality_bound(s in prop::collection::vec(0u32..2, 1..150), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..20)) {
        let set: Vec<usize> = picks.iter().map(|p| p.index(s.len()) + 1).collect();
        let mut uniq = set.clone();
        uniq.sort_unstable();
        uniq.dedup();
        prop_assert!(nd_extension_sum(&s, &set) <= uniq.len() * uniq.len());
    }
}
