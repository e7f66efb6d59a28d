//! Brute-force oracles and random instance generators shared by the
//! property tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;

/// Breadth-first components over the vertices touched by `edges`, each
/// sorted, ordered by smallest member.
pub fn bfs_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    q.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// What DBSCAN must return, computed from a dense matrix: core points by
/// counting, clusters as the transitive closure of core-core adjacency, and
/// each border point given to the adjacent cluster with the smallest seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbscanOracle {
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    pub core: Vec<bool>,
}

#[allow(clippy::needless_range_loop)]
pub fn dbscan_oracle(n: usize, distances: &[(usize, usize, f64)], eps: f64, min_pts: usize) -> DbscanOracle {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for &(i, j, x) in distances {
        if i != j {
            d[i][j] = d[i][j].min(x);
            d[j][i] = d[j][i].min(x);
        }
    }
    let near = |i: usize, j: usize| i != j && d[i][j] <= eps + 1e-9;
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| near(i, j)).count() + 1 >= min_pts).collect();

    // reach[i][j]: j is density-reachable from i through core points only
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = core[i];
        for j in 0..n {
            if core[i] && core[j] && near(i, j) {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seeds: Vec<usize> = Vec::new();
    let mut seed_of = vec![usize::MAX; n];
    for i in (0..n).filter(|&i| core[i]) {
        let seed = (0..n).find(|&s| reach[s][i]).unwrap();
        seed_of[i] = seed;
        if seed == i {
            seeds.push(i);
        }
    }
    let mut clusters: BTreeMap<usize, BTreeSet<usize>> = seeds.iter().map(|&s| (s, BTreeSet::new())).collect();
    let mut noise = Vec::new();
    for p in 0..n {
        let seed = if core[p] {
            Some(seed_of[p])
        } else {
            (0..n).filter(|&c| core[c] && near(p, c)).map(|c| seed_of[c]).min()
        };
        match seed {
            Some(s) => {
                clusters.get_mut(&s).unwrap().insert(p);
            }
            None => noise.push(p),
        }
    }
    DbscanOracle { clusters: clusters.into_values().map(|c| c.into_iter().collect()).collect(), noise, core }
}

/// Random sparse similarity graph; values are drawn so that many land on or
/// near the 0.97 / 0.98 / 0.99 boundaries.
pub fn random_similarities<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize, f64)> {
    const SNAP: [f64; 6] = [0.96, 0.97, 0.98, 0.99, 1.0, 0.975];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let v = if rng.gen_bool(0.5) { SNAP[rng.gen_range(0..SNAP.len())] } else { rng.gen_range(0.9..=1.0) };
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Sum of agreeing ordered rater pairs over all pairs, per item, averaged:
/// the observed-agreement term of Fleiss computed from raw labels.
pub fn fleiss_from_labels<T: Ord + Clone>(items: &[Vec<T>]) -> f64 {
    let n = items[0].len();
    let mut p_bar = 0.0;
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for labels in items {
        assert_eq!(labels.len(), n);
        let mut agree = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i != j && labels[i] == labels[j] {
                    agree += 1;
                }
            }
            *counts.entry(labels[i].clone()).or_default() += 1;
        }
        p_bar += agree as f64 / (n * (n - 1)) as f64;
    }
    p_bar /= items.len() as f64;
    let total = (items.len() * n) as f64;
    let p_e: f64 = counts.values().map(|&c| (c as f64 / total).powi(2)).sum();
    (p_bar - p_e) / (1.0 - p_e)
}

/// Krippendorff's nominal alpha in pairwise form: disagreeing within-unit
/// pairs over disagreeing pairs drawn from the pooled values.
pub fn krippendorff_pairwise<T: Ord + Clone>(ratings: &[Vec<Option<T>>]) -> f64 {
    let units = ratings.iter().map(Vec::len).max().unwrap_or(0);
    let mut d_o = 0.0;
    let mut pooled: Vec<T> = Vec::new();
    for u in 0..units {
        let v: Vec<T> = ratings.iter().filter_map(|r| r.get(u).cloned().flatten()).collect();
        if v.len() < 2 {
            continue;
        }
        let mut dis = 0usize;
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i != j && v[i] != v[j] {
                    dis += 1;
                }
            }
        }
        d_o += dis as f64 / (v.len() - 1) as f64;
        pooled.extend(v);
    }
    let n = pooled.len() as f64;
    d_o /= n;
    let mut dis = 0usize;
    for i in 0..pooled.len() {
        for j in 0..pooled.len() {
            if i != j && pooled[i] != pooled[j] {
                dis += 1;
            }
        }
    }
    let d_e = dis as f64 / (n * (n - 1.0));
    1.0 - d_o / d_e
}

/// `(a, b, matches, transpositions, common prefix up to 4)`.
pub const REFERENCE: [(&str, &str, usize, usize, usize); 20] = [
    ("MARTHA", "MARHTA", 6, 1, 3),
    ("DWAYNE", "DUANE", 4, 0, 1),
    ("DIXON", "DICKSONX", 4, 0, 2),
    ("JELLYFISH", "SMELLYFISH", 8, 0, 0),
    ("ImageJ", "Image J", 6, 0, 4),
    ("BLAST", "BLAST)", 5, 0, 4),
    ("BLAST", "BLAST engine", 5, 0, 4),
    ("limma", "LIMMA", 0, 0, 0),
    ("SPSS", "SPSS15", 4, 0, 4),
    ("scikit-learn", "scikit learn", 11, 0, 4),
    ("scikit-learn", "sklearn", 7, 0, 1),
    ("GraphPad Prism", "GraphPad prism", 13, 0, 4),
    ("CRATE", "TRACE", 3, 0, 0),
    ("abcdef", "fedcba", 2, 1, 0),
    ("a", "a", 1, 0, 1),
    ("ab", "ba", 0, 0, 0),
    ("Matlab", "MATLAB", 1, 0, 1),
    ("Image J", "image J", 6, 0, 0),
    ("ImageJ2", "ImageJ", 6, 0, 4),
    ("café", "cafe", 3, 0, 3),
];

/// Jaro-Winkler from hand-counted matches, transpositions and prefix.
pub fn from_counts(a: &str, b: &str, m: usize, t: usize, prefix: usize) -> f64 {
    let (la, lb) = (a.chars().count() as f64, b.chars().count() as f64);
    let j = if m == 0 { 0.0 } else { (m as f64 / la + m as f64 / lb + (m - t) as f64 / m as f64) / 3.0 };
    j + prefix as f64 * 0.1 * (1.0 - j)
}

/// Ten small rating sets: items x raters, every rater rating every item.
pub fn agreement_fixtures() -> Vec<Vec<Vec<u8>>> {
    vec![
        vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 1, 0], vec![1, 1, 0]],
        vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 0], vec![1, 1]],
        vec![vec![0, 1, 2], vec![2, 2, 2], vec![1, 1, 2], vec![0, 0, 0], vec![1, 2, 1]],
        vec![vec![0, 0, 0, 1], vec![1, 1, 1, 1], vec![2, 2, 1, 1], vec![0, 2, 2, 2]],
        vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]],
        vec![vec![3, 3, 3], vec![0, 1, 2], vec![3, 2, 3], vec![1, 1, 1], vec![0, 0, 3], vec![2, 2, 2]],
        vec![vec![0, 0, 1, 1, 1], vec![0, 0, 0, 0, 0], vec![1, 1, 1, 1, 0]],
        vec![vec![4, 4], vec![0, 4], vec![1, 1], vec![2, 3], vec![3, 3], vec![0, 0]],
        vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0], vec![1, 1, 1]],
        vec![vec![2, 1, 2, 2], vec![1, 1, 1, 0], vec![0, 0, 2, 0], vec![2, 2, 2, 2], vec![1, 0, 1, 1]],
    ]
}
