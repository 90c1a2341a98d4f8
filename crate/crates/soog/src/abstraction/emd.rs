//! Earth mover's distance between histograms.

use crate::error::{Result, SoogError};

const EPS: f64 = 1e-12;

/// Minimal transport cost between two equal-mass histograms under an
/// arbitrary nonnegative ground-distance matrix, via successive shortest
/// augmenting paths. Small inputs only (the clustering hot path uses
/// [`emd_line`]).
pub fn emd_1d(a: &[f64], b: &[f64], ground: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    if b.len() != n || ground.len() != n || ground.iter().any(|row| row.len() != n) {
        return Err(SoogError::Parameter("EMD dimension mismatch".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let (ta, tb) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
    if (ta - tb).abs() > 1e-9 {
        return Err(SoogError::Parameter(format!(
            "EMD mass mismatch: {ta} vs {tb}"
        )));
    }

    // Min-cost flow from sources (supplies a) to sinks (demands b) on the
    // complete bipartite graph. Nodes: 0..n sources, n..2n sinks.
    let mut supply = a.to_vec();
    let mut demand = b.to_vec();
    let mut flow = vec![vec![0.0f64; n]; n];
    let mut phi = vec![0.0f64; 2 * n]; // potentials
    let mut cost = 0.0f64;

    while supply.iter().any(|&s| s > EPS) {
        // Dijkstra over reduced costs from all positive-supply sources.
        let mut dist = vec![f64::INFINITY; 2 * n];
        let mut prev = vec![usize::MAX; 2 * n];
        let mut done = vec![false; 2 * n];
        for i in 0..n {
            if supply[i] > EPS {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..2 * n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < n {
                let i = u;
                for j in 0..n {
                    let rc = ground[i][j] + phi[i] - phi[n + j];
                    debug_assert!(rc > -1e-6);
                    let nd = dist[u] + rc.max(0.0);
                    if nd + EPS < dist[n + j] {
                        dist[n + j] = nd;
                        prev[n + j] = u;
                    }
                }
            } else {
                let j = u - n;
                for i in 0..n {
                    if flow[i][j] > EPS {
                        let rc = -ground[i][j] + phi[n + j] - phi[i];
                        let nd = dist[u] + rc.max(0.0);
                        if nd + EPS < dist[i] {
                            dist[i] = nd;
                            prev[i] = u;
                        }
                    }
                }
            }
        }
        // Closest sink with unmet demand.
        let mut sink = usize::MAX;
        let mut best = f64::INFINITY;
        for j in 0..n {
            if demand[j] > EPS && dist[n + j] < best {
                best = dist[n + j];
                sink = n + j;
            }
        }
        if sink == usize::MAX {
            return Err(SoogError::Parameter("EMD: no augmenting path".into()));
        }
        // Bottleneck along the path.
        let mut amount = demand[sink - n];
        let mut v = sink;
        while prev[v] != usize::MAX {
            let u = prev[v];
            if u >= n {
                // Backward edge sink u -> source v.
                amount = amount.min(flow[v][u - n]);
            }
            v = u;
        }
        amount = amount.min(supply[v]);
        // Apply.
        let src = v;
        let mut v = sink;
        while prev[v] != usize::MAX {
            let u = prev[v];
            if u < n {
                flow[u][v - n] += amount;
                cost += amount * ground[u][v - n];
            } else {
                flow[v][u - n] -= amount;
                cost -= amount * ground[v][u - n];
            }
            v = u;
        }
        supply[src] -= amount;
        demand[sink - n] -= amount;
        for v in 0..2 * n {
            if dist[v].is_finite() {
                phi[v] += dist[v];
            }
        }
    }
    Ok(cost.max(0.0))
}

/// EMD when the ground distance comes from scalar positions on a line
/// (sorted ascending): the cumulative-difference formula.
pub fn emd_line(a: &[f64], b: &[f64], positions: &[f64]) -> f64 {
    debug_assert!(a.len() == b.len() && b.len() == positions.len());
    debug_assert!(positions.windows(2).all(|w| w[0] <= w[1]));
    let mut total = 0.0;
    let mut cum = 0.0;
    for j in 0..a.len() - 1 {
        cum += a[j] - b[j];
        total += cum.abs() * (positions[j + 1] - positions[j]);
    }
    total
}
