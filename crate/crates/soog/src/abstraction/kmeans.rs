//! Deterministic weighted k-means with a pluggable distance.
//!
//! Initialization is seeded: the first center is drawn from the seed's RNG,
//! the rest by greedy farthest-point (ties to the lowest index). Assignment
//! ties break to the lowest cluster id, so runs are reproducible and equal
//! points always land in the same cluster.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_ITERS: usize = 100;
const REL_TOL: f64 = 1e-9;

pub struct KmeansResult {
    /// Cluster id per input point, dense in `[0, k)`.
    pub assignment: Vec<u32>,
    /// One centroid per cluster (componentwise weighted mean of members).
    pub centroids: Vec<Vec<f64>>,
}

pub fn weighted_kmeans<D: Fn(&[f64], &[f64]) -> f64>(
    points: &[Vec<f64>],
    weights: &[f64],
    k: usize,
    seed: u64,
    dist: D,
) -> KmeansResult {
    assert!(!points.is_empty() && points.len() == weights.len() && k >= 1);
    let n = points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..n);

    // Greedy farthest-point init; stops early if every remaining point
    // coincides with a chosen center.
    let mut centers: Vec<usize> = vec![first];
    let mut min_dist: Vec<f64> = points.iter().map(|p| dist(p, &points[first])).collect();
    while centers.len() < k.min(n) {
        let (mut best_i, mut best_d) = (usize::MAX, 0.0);
        for i in 0..n {
            if min_dist[i] > best_d {
                best_d = min_dist[i];
                best_i = i;
            }
        }
        if best_i == usize::MAX {
            break;
        }
        centers.push(best_i);
        for i in 0..n {
            let d = dist(&points[i], &points[best_i]);
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }
    let mut centroids: Vec<Vec<f64>> = centers.iter().map(|&i| points[i].clone()).collect();
    let kk = centroids.len();

    let mut assignment = vec![0u32; n];
    let mut prev_inertia = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        // Assign.
        let mut inertia = 0.0;
        for i in 0..n {
            let mut best = 0u32;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = dist(&points[i], centroid);
                if d < best_d {
                    best_d = d;
                    best = c as u32;
                }
            }
            assignment[i] = best;
            inertia += weights[i] * best_d;
        }
        // Update.
        let dim = points[0].len();
        let mut sums = vec![vec![0.0f64; dim]; kk];
        let mut mass = vec![0.0f64; kk];
        for i in 0..n {
            let c = assignment[i] as usize;
            mass[c] += weights[i];
            for (s, &x) in sums[c].iter_mut().zip(&points[i]) {
                *s += weights[i] * x;
            }
        }
        for c in 0..kk {
            if mass[c] > 0.0 {
                for s in sums[c].iter_mut() {
                    *s /= mass[c];
                }
                centroids[c] = sums[c].clone();
            }
            // Empty clusters keep their previous centroid.
        }
        if (prev_inertia - inertia).abs() <= REL_TOL * prev_inertia.max(1e-30) {
            break;
        }
        prev_inertia = inertia;
    }

    // Drop empty clusters and renumber.
    let mut used = vec![false; kk];
    for &a in &assignment {
        used[a as usize] = true;
    }
    let mut remap = vec![0u32; kk];
    let mut kept = Vec::new();
    let mut next = 0u32;
    for c in 0..kk {
        if used[c] {
            remap[c] = next;
            next += 1;
            kept.push(centroids[c].clone());
        }
    }
    for a in assignment.iter_mut() {
        *a = remap[*a as usize];
    }
    KmeansResult {
        assignment,
        centroids: kept,
    }
}

/// Squared Euclidean distance.
pub fn sq_l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_obvious_clusters() {
        let points: Vec<Vec<f64>> = [0.0, 0.1, 0.2, 5.0, 5.1, 5.2]
            .iter()
            .map(|&x| vec![x])
            .collect();
        let w = vec![1.0; 6];
        let r = weighted_kmeans(&points, &w, 2, 7, sq_l2);
        assert_eq!(r.centroids.len(), 2);
        assert_eq!(r.assignment[0], r.assignment[1]);
        assert_eq!(r.assignment[1], r.assignment[2]);
        assert_eq!(r.assignment[3], r.assignment[4]);
        assert_ne!(r.assignment[0], r.assignment[3]);
    }

    #[test]
    fn equal_points_share_a_cluster() {
        let points: Vec<Vec<f64>> = vec![vec![1.0], vec![2.0], vec![1.0], vec![3.0]];
        let w = vec![1.0; 4];
        for seed in 0..10 {
            let r = weighted_kmeans(&points, &w, 3, seed, sq_l2);
            assert_eq!(r.assignment[0], r.assignment[2]);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let points: Vec<Vec<f64>> = (0..50).map(|i| vec![(i * 7 % 13) as f64]).collect();
        let w: Vec<f64> = (0..50).map(|i| 1.0 + (i % 3) as f64).collect();
        let a = weighted_kmeans(&points, &w, 5, 42, sq_l2);
        let b = weighted_kmeans(&points, &w, 5, 42, sq_l2);
        assert_eq!(a.assignment, b.assignment);
    }

    #[test]
    fn more_clusters_than_distinct_points_collapses() {
        let points = vec![vec![0.0], vec![0.0], vec![1.0]];
        let w = vec![1.0; 3];
        let r = weighted_kmeans(&points, &w, 5, 0, sq_l2);
        assert_eq!(r.centroids.len(), 2);
    }

    #[test]
    fn weights_pull_centroids() {
        let points = vec![vec![0.0], vec![10.0]];
        let w = vec![9.0, 1.0];
        let r = weighted_kmeans(&points, &w, 1, 0, sq_l2);
        assert!((r.centroids[0][0] - 1.0).abs() < 1e-12);
    }
}
