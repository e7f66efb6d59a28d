//! Jaro-Winkler against hand-derived match/transposition/prefix counts.

mod support;

use proptest::prelude::*;
use swmention_core::jaro::{jaro, jaro_winkler};
use swmention_core::mention::MentionTable;
use swmention_core::synonyms::all_pairs_similarity;
use support::{from_counts, REFERENCE};

#[test]
fn reference_suite() {
    for (a, b, m, t, p) in REFERENCE {
        let expected = from_counts(a, b, m, t, p);
        let got = jaro_winkler(a, b);
        assert!((got - expected).abs() < 1e-9, "{a:?} vs {b:?}: {got} != {expected}");
        assert!((jaro_winkler(b, a) - expected).abs() < 1e-9);
    }
    assert!((jaro_winkler("MARTHA", "MARHTA") - 0.961_111_111).abs() < 1e-9);
}

fn exhaustive(names: &[String], threshold: f64) -> Vec<(u32, u32, f64)> {
    let table = MentionTable::assign(names.iter());
    let mut out = Vec::new();
    for (i, a) in table.iter() {
        for (j, b) in table.iter() {
            if i < j {
                let s = jaro_winkler(a, b);
                if s >= threshold {
                    out.push((i.0, j.0, s));
                }
            }
        }
    }
    out
}

#[test]
fn all_pairs_equals_double_loop_on_random_strings() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let alphabet: Vec<char> = "abcde ABJ-".chars().collect();
    // short strings over a small alphabet so that plenty of pairs clear 0.9
    let names: Vec<String> = (0..200)
        .map(|_| {
            let len = rng.gen_range(1..12);
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        })
        .collect();
    let table = MentionTable::assign(names.iter());
    for threshold in [0.8, 0.9, 0.97] {
        let fast: Vec<(u32, u32, f64)> = all_pairs_similarity(&table, threshold)
            .unwrap()
            .into_iter()
            .map(|p| (p.a.0, p.b.0, p.confidence))
            .collect();
        let slow = exhaustive(&names, threshold);
        assert_eq!(fast, slow, "threshold {threshold}");
        if threshold == 0.9 {
            assert!(!slow.is_empty());
        }
    }
}

proptest! {
    #[test]
    fn symmetric(a in "\\PC{0,12}", b in "\\PC{0,12}") {
        prop_assert_eq!(jaro_winkler(&a, &b), jaro_winkler(&b, &a));
    }

    #[test]
    fn identity(a in "\\PC{0,16}") {
        prop_assert_eq!(jaro_winkler(&a, &a), 1.0);
    }

    #[test]
    fn boost_bounded(a in "[a-dA-D ]{0,10}", b in "[a-dA-D ]{0,10}") {
        let j = jaro(&a, &b);
        let jw = jaro_winkler(&a, &b);
        prop_assert!(jw >= j);
        prop_assert!(jw <= 1.0);
        prop_assert!(j >= 0.0);
    }
}
