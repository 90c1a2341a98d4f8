//! Abstraction builders: LI, PAOI, k-ROI/FROI, EHS, PAAEMD.

use num_rational::Ratio;

use crate::canonical::Indexer;
use crate::error::{Result, SoogError};
use crate::model::CanonicalIndex;

use super::emd::{emd_1d, emd_line};
use super::features::{transition_histogram, FeatureContext};
use super::kmeans::{sq_l2, weighted_kmeans};
use super::{AbstractionMap, PhaseMap};

/// Lossless isomorphism: one bucket per canonical class.
pub fn build_li(ix: &Indexer) -> AbstractionMap {
    AbstractionMap {
        game_id: ix.game.id.clone(),
        phases: (1..=ix.enumerable_phases())
            .map(|p| PhaseMap::lossless(ix.count(p)))
            .collect(),
    }
}

/// Potential-aware outcome isomorphism: the final phase groups classes by
/// exact (loss, tie, win) counts; each earlier phase groups by the exact
/// histogram of next-phase PAOI classes over its one-step extensions.
pub fn build_paoi(ctx: &FeatureContext) -> AbstractionMap {
    let ix = ctx.ix;
    let phases = ix.game.phases();
    let mut maps: Vec<PhaseMap> = vec![PhaseMap::lossless(0); phases];

    let (wo, _) = ctx.wo_table();
    maps[phases - 1] = PhaseMap::from_keys(wo);

    for phase in (1..phases).rev() {
        let next = &maps[phase];
        let succ = ctx.successors(phase);
        let keys: Vec<Vec<u64>> = (0..ix.count(phase))
            .map(|i| {
                let mut counts = vec![0u64; next.n_buckets as usize];
                for &s in &succ[i] {
                    counts[next.buckets[s as usize] as usize] += 1;
                }
                counts
            })
            .collect();
        maps[phase - 1] = PhaseMap::from_keys(&keys);
    }
    AbstractionMap {
        game_id: ix.game.id.clone(),
        phases: maps,
    }
}

/// k-recall outcome isomorphism: phase-r classes group by the tuple of PAOI
/// labels of the current observation and its `k[r-1]` phase predecessors.
/// `k = 0` everywhere reproduces PAOI; `k = r-1` is full recall (FROI).
pub fn build_kroi(ctx: &FeatureContext, paoi: &AbstractionMap, k: &[usize]) -> Result<AbstractionMap> {
    let ix = ctx.ix;
    let phases = ix.game.phases();
    if k.len() != phases {
        return Err(SoogError::Parameter(format!(
            "k has {} entries, game has {phases} phases",
            k.len()
        )));
    }
    let mut maps = Vec::with_capacity(phases);
    for phase in 1..=phases {
        let kr = k[phase - 1];
        if kr > phase - 1 {
            return Err(SoogError::Parameter(format!(
                "phase {phase}: recall {kr} exceeds {} available predecessors",
                phase - 1
            )));
        }
        let keys: Vec<Vec<u32>> = (0..ix.count(phase) as u32)
            .map(|index| {
                let idx = CanonicalIndex { phase, index };
                let mut tuple = vec![paoi.bucket(idx)];
                let rep = ix.representative(idx);
                for back in 1..=kr {
                    let pred_phase = phase - back;
                    let mut pred = rep.clone();
                    pred.board.truncate(pred_phase - 1);
                    pred.phase = pred_phase;
                    let pred_idx = ix.canonical_index(&pred).unwrap();
                    tuple.push(paoi.bucket(pred_idx));
                }
                tuple
            })
            .collect();
        maps.push(PhaseMap::from_keys(&keys));
    }
    Ok(AbstractionMap {
        game_id: ix.game.id.clone(),
        phases: maps,
    })
}

/// Full-recall outcome isomorphism.
pub fn build_froi(ctx: &FeatureContext, paoi: &AbstractionMap) -> Result<AbstractionMap> {
    let ks: Vec<usize> = (0..ctx.ix.game.phases()).collect();
    build_kroi(ctx, paoi, &ks)
}

/// Expected-hand-strength bucketing: phase r splits `[0,1]` into `n`
/// contiguous equity ranges `((m-1)/n, m/n]`, the lowest closed at 0.
/// `None` keeps the phase lossless. Bucket ids are dense, ordered by equity
/// range; empty ranges are skipped.
pub fn build_ehs(ctx: &FeatureContext, n: &[Option<u32>]) -> Result<AbstractionMap> {
    let ix = ctx.ix;
    let phases = ix.game.phases();
    if n.len() != phases {
        return Err(SoogError::Parameter(format!(
            "n has {} entries, game has {phases} phases",
            n.len()
        )));
    }
    let mut maps = Vec::with_capacity(phases);
    for phase in 1..=phases {
        match n[phase - 1] {
            None => maps.push(PhaseMap::lossless(ix.count(phase))),
            Some(0) => {
                return Err(SoogError::Parameter("EHS bucket count must be >= 1".into()))
            }
            Some(nb) => {
                let eq = ctx.equity_table(phase);
                let keys: Vec<u64> = eq
                    .iter()
                    .map(|&e| {
                        let scaled = e * Ratio::from_integer(nb as u64);
                        scaled.ceil().to_integer().max(1)
                    })
                    .collect();
                maps.push(PhaseMap::from_keys(&keys));
            }
        }
    }
    Ok(AbstractionMap {
        game_id: ix.game.id.clone(),
        phases: maps,
    })
}

/// Potential-aware EMD clustering: the final phase k-means its equities under
/// squared L2; each earlier phase k-means its transition histograms into the
/// next phase's clusters under EMD, with ground distances derived from the
/// next phase's cluster centroids. `None` keeps a phase lossless.
/// Deterministic given the seed; classes with exactly equal features always
/// share a cluster.
pub fn build_paaemd(
    ctx: &FeatureContext,
    m: &[Option<usize>],
    seed: u64,
) -> Result<AbstractionMap> {
    let ix = ctx.ix;
    let phases = ix.game.phases();
    if m.len() != phases {
        return Err(SoogError::Parameter(format!(
            "m has {} entries, game has {phases} phases",
            m.len()
        )));
    }
    let mut maps: Vec<PhaseMap> = vec![PhaseMap::lossless(0); phases];

    // Ground-distance description for the clusters of the phase just
    // processed (one below: phase+1).
    enum Ground {
        /// Scalar positions per cluster, ascending.
        Line(Vec<f64>),
        /// Full pairwise distance matrix.
        Matrix(Vec<Vec<f64>>),
    }

    // --- Final phase: cluster on equity. ---
    let final_phase = phases;
    let eq: Vec<f64> = ctx
        .equity_table(final_phase)
        .iter()
        .map(|e| *e.numer() as f64 / *e.denom() as f64)
        .collect();
    let (map, positions) = match m[final_phase - 1] {
        None => {
            // Lossless, but relabelled in equity order so the positions are
            // ascending.
            let keys: Vec<(Ratio<u64>, u32)> = ctx
                .equity_table(final_phase)
                .iter()
                .zip(0u32..)
                .map(|(&e, i)| (e, i))
                .collect();
            let pm = PhaseMap::from_keys(&keys);
            let mut pos = vec![0.0f64; pm.n_buckets as usize];
            for (i, &b) in pm.buckets.iter().enumerate() {
                pos[b as usize] = eq[i];
            }
            (pm, pos)
        }
        Some(mb) => {
            let (pm, centroids) = cluster_phase(
                ix,
                final_phase,
                &eq.iter().map(|&e| vec![e]).collect::<Vec<_>>(),
                exact_keys_equity(ctx, final_phase),
                mb,
                phase_seed(seed, final_phase),
                sq_l2,
            );
            // Relabel by centroid so positions ascend.
            let mut order: Vec<usize> = (0..centroids.len()).collect();
            order.sort_by(|&a, &b| centroids[a][0].total_cmp(&centroids[b][0]).then(a.cmp(&b)));
            let mut remap = vec![0u32; centroids.len()];
            for (new, &old) in order.iter().enumerate() {
                remap[old] = new as u32;
            }
            let buckets = pm.buckets.iter().map(|&b| remap[b as usize]).collect();
            let pos: Vec<f64> = order.iter().map(|&c| centroids[c][0]).collect();
            (
                PhaseMap {
                    n_buckets: pm.n_buckets,
                    buckets,
                },
                pos,
            )
        }
    };
    maps[final_phase - 1] = map;
    let mut ground = Ground::Line(positions);

    // --- Earlier phases, top down. ---
    for phase in (1..final_phase).rev() {
        let next = maps[phase].clone();
        let hists: Vec<Vec<f64>> = (0..ix.count(phase) as u32)
            .map(|index| {
                transition_histogram(ctx, CanonicalIndex { phase, index }, &next)
                    .unwrap()
                    .to_f64()
            })
            .collect();
        let (pm, centroids) = match m[phase - 1] {
            None => {
                let keys: Vec<Vec<u64>> = (0..ix.count(phase) as u32)
                    .map(|index| {
                        transition_histogram(ctx, CanonicalIndex { phase, index }, &next)
                            .unwrap()
                            .counts
                    })
                    .collect();
                let pm = PhaseMap::from_keys(&keys);
                let mut cents = vec![Vec::new(); pm.n_buckets as usize];
                for (i, &b) in pm.buckets.iter().enumerate() {
                    cents[b as usize] = hists[i].clone();
                }
                (pm, cents)
            }
            Some(mb) => {
                let exact: Vec<Vec<u64>> = (0..ix.count(phase) as u32)
                    .map(|index| {
                        transition_histogram(ctx, CanonicalIndex { phase, index }, &next)
                            .unwrap()
                            .counts
                    })
                    .collect();
                let dist = |a: &[f64], b: &[f64]| match &ground {
                    Ground::Line(pos) => emd_line(a, b, pos),
                    Ground::Matrix(g) => emd_1d(a, b, g).unwrap(),
                };
                cluster_phase(ix, phase, &hists, exact, mb, phase_seed(seed, phase), dist)
            }
        };
        maps[phase - 1] = pm;
        if phase > 1 {
            // Ground for the phase below: pairwise EMD between this phase's
            // cluster centroids.
            let kk = centroids.len();
            let mut g = vec![vec![0.0f64; kk]; kk];
            for a in 0..kk {
                for b in a + 1..kk {
                    let d = match &ground {
                        Ground::Line(pos) => emd_line(&centroids[a], &centroids[b], pos),
                        Ground::Matrix(gm) => emd_1d(&centroids[a], &centroids[b], gm)?,
                    };
                    g[a][b] = d;
                    g[b][a] = d;
                }
            }
            ground = Ground::Matrix(g);
        }
    }
    Ok(AbstractionMap {
        game_id: ix.game.id.clone(),
        phases: maps,
    })
}

fn phase_seed(seed: u64, phase: usize) -> u64 {
    seed.wrapping_add(phase as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn exact_keys_equity(ctx: &FeatureContext, phase: usize) -> Vec<Ratio<u64>> {
    ctx.equity_table(phase).clone()
}

/// Dedupes points by exact feature key (so exactly equal features provably
/// share a cluster), weights by raw-orbit multiplicity, runs k-means, and
/// broadcasts the assignment back to all classes.
fn cluster_phase<K: Ord + Clone + std::hash::Hash, D: Fn(&[f64], &[f64]) -> f64>(
    ix: &Indexer,
    phase: usize,
    points: &[Vec<f64>],
    exact_keys: Vec<K>,
    m: usize,
    seed: u64,
    dist: D,
) -> (PhaseMap, Vec<Vec<f64>>) {
    use std::collections::HashMap;
    let mut groups: HashMap<&K, usize> = HashMap::new();
    let mut uniq_points: Vec<Vec<f64>> = Vec::new();
    let mut uniq_weights: Vec<f64> = Vec::new();
    let mut member_of: Vec<usize> = Vec::with_capacity(points.len());
    for (i, key) in exact_keys.iter().enumerate() {
        let g = *groups.entry(key).or_insert_with(|| {
            uniq_points.push(points[i].clone());
            uniq_weights.push(0.0);
            uniq_points.len() - 1
        });
        uniq_weights[g] += ix.orbit_size(CanonicalIndex {
            phase,
            index: i as u32,
        }) as f64;
        member_of.push(g);
    }
    let distinct = uniq_points.len();
    let k = if m > distinct {
        eprintln!(
            "warning: phase {phase}: {m} clusters requested but only {distinct} distinct \
             features; reducing"
        );
        distinct
    } else {
        m
    };
    let r = weighted_kmeans(&uniq_points, &uniq_weights, k, seed, dist);
    let buckets: Vec<u32> = member_of.iter().map(|&g| r.assignment[g]).collect();
    (
        PhaseMap {
            n_buckets: r.centroids.len() as u32,
            buckets,
        },
        r.centroids,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::check_refinement;
    use crate::games::GameSpec;

    fn leduc() -> (Indexer, GameSpec) {
        let g = GameSpec::leduc();
        (Indexer::build(&g), g)
    }

    #[test]
    fn leduc_li_and_paoi_counts() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        assert_eq!(build_li(&ix).bucket_counts(), vec![3, 9]);
        assert_eq!(build_paoi(&ctx).bucket_counts(), vec![3, 3]);
    }

    #[test]
    fn leduc_phase1_paof_histograms() {
        // Hand J sees (1,0,4) over the phase-2 classes (sorted by feature
        // key), Q sees (1,2,2), K sees (1,4,0): three distinct classes.
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        let paoi = build_paoi(&ctx);
        let mut hists = Vec::new();
        for index in 0..3u32 {
            let h = super::super::features::paof(
                &ctx,
                CanonicalIndex { phase: 1, index },
                &paoi.phases[1],
            )
            .unwrap();
            assert_eq!(h.denom, 5);
            assert_eq!(h.counts.iter().sum::<u64>(), 5);
            hists.push(h.counts);
        }
        hists.sort();
        hists.dedup();
        assert_eq!(hists.len(), 3);
    }

    #[test]
    fn kroi_zero_recall_is_paoi_and_full_recall_refines() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        let paoi = build_paoi(&ctx);
        let k0 = build_kroi(&ctx, &paoi, &[0, 0]).unwrap();
        assert_eq!(k0.bucket_counts(), paoi.bucket_counts());
        assert_eq!(
            check_refinement(&k0, &paoi).unwrap(),
            vec![true, true],
            "zero recall must reproduce the PAOI partition"
        );
        let froi = build_froi(&ctx, &paoi).unwrap();
        assert_eq!(froi.bucket_counts(), vec![3, 7]);
        assert_eq!(check_refinement(&froi, &paoi).unwrap(), vec![true, true]);
        // Recall beyond the available phases is a parameter error.
        assert!(build_kroi(&ctx, &paoi, &[1, 1]).is_err());
    }

    #[test]
    fn li_refines_paoi_on_leduc() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        let li = build_li(&ix);
        let paoi = build_paoi(&ctx);
        assert_eq!(check_refinement(&li, &paoi).unwrap(), vec![true, true]);
    }

    #[test]
    fn ehs_single_range_collapses() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        let m = build_ehs(&ctx, &[Some(1), Some(1)]).unwrap();
        assert_eq!(m.bucket_counts(), vec![1, 1]);
    }

    #[test]
    fn ehs_four_ranges_separate_extremes() {
        let (ix, g) = leduc();
        let ctx = FeatureContext::new(&ix);
        let m = build_ehs(&ctx, &[None, Some(4)]).unwrap();
        let c = |s: &str| g.deck.parse_card(s).unwrap();
        let top = ix
            .canonical_index(&crate::model::ObservationInfoset {
                owner: 0,
                own: vec![c("Kh")],
                board: vec![vec![c("Ks")]],
                phase: 2,
            })
            .unwrap();
        let bottom = ix
            .canonical_index(&crate::model::ObservationInfoset {
                owner: 0,
                own: vec![c("Jh")],
                board: vec![vec![c("Qs")]],
                phase: 2,
            })
            .unwrap();
        let pm = &m.phases[1];
        // Equity 1 lands in the top range, 1/8 in the bottom one.
        assert_eq!(m.bucket(top), pm.n_buckets - 1);
        assert_eq!(m.bucket(bottom), 0);
    }

    #[test]
    fn paaemd_trivial_and_deterministic() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        let one = build_paaemd(&ctx, &[Some(1), Some(1)], 3).unwrap();
        assert_eq!(one.bucket_counts(), vec![1, 1]);
        let a = build_paaemd(&ctx, &[Some(2), Some(3)], 11).unwrap();
        let b = build_paaemd(&ctx, &[Some(2), Some(3)], 11).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
    }

    #[test]
    fn paaemd_reduces_oversized_cluster_counts() {
        let (ix, _) = leduc();
        let ctx = FeatureContext::new(&ix);
        // Leduc has 3 phase-1 hands; asking for 50 clusters must reduce.
        let m = build_paaemd(&ctx, &[Some(50), Some(50)], 0).unwrap();
        assert!(m.phases[0].n_buckets <= 3);
        assert!(m.phases[1].n_buckets <= 9);
        m.validate().unwrap();
    }
}
