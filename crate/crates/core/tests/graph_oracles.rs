mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{bfs_components, dbscan_oracle, random_similarities};
use swmention_core::dbscan::{dbscan, to_distance};
use swmention_core::graph::{SimilarityGraph, Stoplist};
use swmention_core::mention::{MentionId, MentionTable};
use swmention_core::synonyms::{SynonymPair, SynonymSource};

fn graph_from(n: usize, sims: &[(usize, usize, f64)]) -> SimilarityGraph {
    let pairs: Vec<SynonymPair> = sims
        .iter()
        .filter_map(|&(i, j, v)| SynonymPair::new(MentionId(i as u32), MentionId(j as u32), v, SynonymSource::StringSimilarity))
        .collect();
    SimilarityGraph::build(&pairs, n, 0.9).unwrap()
}

#[test]
fn components_match_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..80);
        let density = rng.gen_range(0.0..0.1);
        let sims = random_similarities(&mut rng, n, density);
        let g = graph_from(n, &sims);
        let got: Vec<Vec<usize>> = g
            .connected_components()
            .into_iter()
            .map(|c| c.members.iter().map(|m| m.index()).collect())
            .collect();
        let edges: Vec<(usize, usize)> = sims.iter().map(|&(i, j, _)| (i, j)).collect();
        assert_eq!(got, bfs_components(n, &edges));
    }
}

#[test]
fn dbscan_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..150 {
        let n = rng.gen_range(1..40);
        let density = rng.gen_range(0.05..0.4);
        let sims = random_similarities(&mut rng, n, density);
        let d = to_distance(&sims);
        for eps in [0.01, 0.02, 0.03] {
            for min_pts in [1, 2, 3, 4] {
                let got = dbscan(n, &d, eps, min_pts).unwrap();
                let want = dbscan_oracle(n, &d, eps, min_pts);
                assert_eq!(got.core, want.core);
                assert_eq!(got.clusters, want.clusters, "n={n} eps={eps} min_pts={min_pts}");
                assert_eq!(got.noise, want.noise);
            }
        }
    }
}

#[test]
fn dbscan_partitions_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.gen_range(1..50);
        let d = to_distance(&random_similarities(&mut rng, n, 0.2));
        let out = dbscan(n, &d, 0.03, 2).unwrap();
        let mut all: Vec<usize> = out.clusters.iter().flatten().chain(&out.noise).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
        // every cluster holds at least one core point
        assert!(out.clusters.iter().all(|c| c.iter().any(|&p| out.core[p])));
    }
}

fn word() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("R package".to_string()),
        Just("interface".to_string()),
        "[A-Ca-c]{1,3}",
        "[A-Ca-c]{1,3} [A-Ca-c]{1,3}",
        "[A-Ca-c]{1,3}[0-9(),.-]{0,2}",
    ]
}

proptest! {
    #[test]
    fn post_process_is_idempotent_and_never_adds(
        names in prop::collection::btree_set(word(), 2..12),
        picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0.97f64..=1.0), 0..30),
    ) {
        let table = MentionTable::assign(&names);
        let n = table.len();
        let sims: Vec<(usize, usize, f64)> = picks.iter().map(|(a, b, v)| (a.index(n), b.index(n), *v)).collect();
        let g = graph_from(n, &sims);
        let stop = Stoplist::default();
        let once = g.post_process(&table, &stop);
        let twice = once.post_process(&table, &stop);
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.edge_count() <= g.edge_count());
        for ((a, b), e) in once.edges() {
            prop_assert!(g.get(a, b).is_some());
            prop_assert!(e.value >= g.get(a, b).unwrap().value);
            prop_assert!(!stop.contains(table.name(a).unwrap()) && !stop.contains(table.name(b).unwrap()));
        }
    }

    #[test]
    fn matrix_law(
        triples in prop::collection::vec((0u32..6, 0u32..6, 0.5f64..=1.0, 0u8..3), 0..40),
    ) {
        use swmention_core::synonyms::Registry;
        let pairs: Vec<SynonymPair> = triples
            .iter()
            .filter_map(|&(a, b, v, s)| {
                let (v, src) = match s {
                    0 => (1.0, SynonymSource::KnowledgeBase),
                    1 => (0.99, SynonymSource::KeywordIndex(Registry::Cran)),
                    _ => (v, SynonymSource::StringSimilarity),
                };
                SynonymPair::new(MentionId(a), MentionId(b), v, src)
            })
            .collect();
        let g = SimilarityGraph::build(&pairs, 6, 0.97).unwrap();
        for a in 0..6u32 {
            for b in a + 1..6 {
                let here: Vec<&SynonymPair> = pairs.iter().filter(|p| p.key() == (MentionId(a), MentionId(b))).collect();
                let want = if here.iter().any(|p| p.source == SynonymSource::KnowledgeBase) {
                    Some(1.0)
                } else if here.iter().any(|p| matches!(p.source, SynonymSource::KeywordIndex(_))) {
                    Some(0.99)
                } else {
                    here.iter().map(|p| p.confidence).filter(|&c| c >= 0.97).fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))))
                };
                prop_assert_eq!(g.get(MentionId(a), MentionId(b)).map(|e| e.value), want);
                prop_assert_eq!(g.get(MentionId(b), MentionId(a)).map(|e| e.value), want);
            }
        }
    }
}
