//! DBSCAN over a sparse precomputed distance matrix.
//!
//! Pairs absent from the matrix are infinitely far apart. A point is core
//! when at least `min_pts` points, itself included, lie within `eps`.
//! Clusters are seeded from core points in ascending index order; a border
//! point joins the first cluster that reaches it, which is the cluster with
//! the smallest seed among those of its core neighbours.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Slack for `distance <= eps`, so that `1 - 0.97` (which is slightly above
/// 0.03 in binary floating point) counts as within `eps = 0.03`.
pub const EPS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DbscanOutput {
    /// Clusters in seed order, each with ascending members.
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    /// Cluster index per point, `None` for noise.
    pub labels: Vec<Option<usize>>,
    pub core: Vec<bool>,
}

/// Converts similarities to distances, `1 - s`.
pub fn to_distance(edges: &[(usize, usize, f64)]) -> Vec<(usize, usize, f64)> {
    edges.iter().map(|&(i, j, s)| (i, j, 1.0 - s)).collect()
}

/// Neighbour lists (excluding self) for points within `eps`.
pub fn neighbourhoods(n: usize, distances: &[(usize, usize, f64)], eps: f64) -> Vec<Vec<usize>> {
    let mut nb = vec![Vec::new(); n];
    for &(i, j, d) in distances {
        if i != j && d <= eps + EPS_TOLERANCE {
            nb[i].push(j);
            nb[j].push(i);
        }
    }
    for list in &mut nb {
        list.sort_unstable();
        list.dedup();
    }
    nb
}

pub fn dbscan(n: usize, distances: &[(usize, usize, f64)], eps: f64, min_pts: usize) -> Result<DbscanOutput> {
    if eps.is_nan() || eps <= 0.0 || eps.is_infinite() {
        return Err(Error::invalid("eps", "must be a positive finite number"));
    }
    if min_pts < 1 {
        return Err(Error::invalid("min_pts", "must be at least 1"));
    }
    if let Some(&(i, j, _)) = distances.iter().find(|(i, j, _)| *i >= n || *j >= n) {
        return Err(Error::invalid("distances", alloc::format!("index ({i}, {j}) out of range for {n} points")));
    }
    let nb = neighbourhoods(n, distances, eps);
    let core: Vec<bool> = nb.iter().map(|l| l.len() + 1 >= min_pts).collect();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..n {
        if !core[seed] || labels[seed].is_some() {
            continue;
        }
        let cid = clusters.len();
        let mut members = vec![seed];
        labels[seed] = Some(cid);
        queue.push_back(seed);
        while let Some(p) = queue.pop_front() {
            for &q in &nb[p] {
                if labels[q].is_none() {
                    labels[q] = Some(cid);
                    members.push(q);
                    if core[q] {
                        queue.push_back(q);
                    }
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    let noise = (0..n).filter(|&i| labels[i].is_none()).collect();
    Ok(DbscanOutput { clusters, noise, labels, core })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_is_one_cluster() {
        let d = [(0, 1, 0.01), (0, 2, 0.01), (1, 2, 0.01)];
        let out = dbscan(3, &d, 0.03, 2).unwrap();
        assert_eq!(out.clusters, [vec![0, 1, 2]]);
        assert!(out.noise.is_empty());
    }

    #[test]
    fn isolated_point_is_noise() {
        let out = dbscan(3, &[(0, 1, 0.0)], 0.03, 2).unwrap();
        assert_eq!(out.clusters, [vec![0, 1]]);
        assert_eq!(out.noise, [2]);
    }

    #[test]
    fn min_pts_one_makes_everything_core() {
        let out = dbscan(3, &[(0, 1, 0.5)], 0.03, 1).unwrap();
        assert_eq!(out.clusters, [vec![0], vec![1], vec![2]]);
        assert!(out.noise.is_empty());
    }

    #[test]
    fn threshold_edge_is_within_eps() {
        let d = to_distance(&[(0, 1, 0.97)]);
        assert!(d[0].2 > 0.03);
        let out = dbscan(2, &d, 0.03, 2).unwrap();
        assert_eq!(out.clusters, [vec![0, 1]]);
    }

    #[test]
    fn border_goes_to_smallest_seed() {
        // cliques {0,1,5,7} and {3,4,6,8}; 2 touches 1 and 3 only
        let mut d = Vec::new();
        for c in [[0, 1, 5, 7], [3, 4, 6, 8]] {
            for x in 0..4 {
                for y in x + 1..4 {
                    d.push((c[x], c[y], 0.0));
                }
            }
        }
        d.push((1, 2, 0.0));
        d.push((2, 3, 0.0));
        let out = dbscan(9, &d, 0.01, 4).unwrap();
        assert!(!out.core[2]);
        assert_eq!(out.labels[2], out.labels[0]);
        assert_eq!(out.clusters, [vec![0, 1, 2, 5, 7], vec![3, 4, 6, 8]]);
    }

    #[test]
    fn distances_convert() {
        let d = to_distance(&[(0, 1, 1.0), (0, 2, 0.99)]);
        assert_eq!(d[0].2, 0.0);
        assert!((d[1].2 - 0.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(dbscan(1, &[], 0.0, 2).is_err());
        assert!(dbscan(1, &[], 0.1, 0).is_err());
        assert!(dbscan(1, &[(0, 3, 0.0)], 0.1, 1).is_err());
    }
}
