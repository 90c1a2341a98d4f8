//! Hand abstractions over signal observation infosets.
//!
//! An [`AbstractionMap`] assigns every canonical observation of every phase a
//! bucket id. Builders produce the lossless isomorphism (LI), outcome
//! isomorphisms (PAOI and k-recall variants), equity bucketing (EHS) and
//! EMD-based clustering (PAAEMD).

pub mod builders;
pub mod emd;
pub mod features;
pub mod io;
pub mod kmeans;

pub use builders::{build_ehs, build_froi, build_kroi, build_li, build_paaemd, build_paoi};
pub use emd::emd_1d;
pub use features::{
    ehs_equity, paof, transition_histogram, winrate_outcome_feature, ExtendedSignalSet,
    FeatureContext, OutcomeFeature, TransitionHistogram,
};

use crate::error::{Result, SoogError};
use crate::model::CanonicalIndex;

/// One phase of an abstraction: a total map canonical index → bucket id,
/// with bucket ids dense in `[0, n_buckets)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseMap {
    pub n_buckets: u32,
    pub buckets: Vec<u32>,
}

impl PhaseMap {
    /// The finest map: every index its own bucket.
    pub fn lossless(n: usize) -> PhaseMap {
        PhaseMap {
            n_buckets: n as u32,
            buckets: (0..n as u32).collect(),
        }
    }

    /// Renumbers arbitrary group keys into dense bucket ids ordered by key.
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> PhaseMap {
        let mut sorted: Vec<K> = keys.to_vec();
        sorted.sort();
        sorted.dedup();
        let buckets = keys
            .iter()
            .map(|k| sorted.binary_search(k).unwrap() as u32)
            .collect();
        PhaseMap {
            n_buckets: sorted.len() as u32,
            buckets,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbstractionMap {
    pub game_id: String,
    pub phases: Vec<PhaseMap>,
}

impl AbstractionMap {
    pub fn bucket(&self, idx: CanonicalIndex) -> u32 {
        self.phases[idx.phase - 1].buckets[idx.index as usize]
    }

    pub fn bucket_counts(&self) -> Vec<u32> {
        self.phases.iter().map(|p| p.n_buckets).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.phases.iter().enumerate() {
            let mut seen = vec![false; p.n_buckets as usize];
            for &b in &p.buckets {
                if b >= p.n_buckets {
                    return Err(SoogError::Domain(format!(
                        "phase {}: bucket {b} out of range",
                        i + 1
                    )));
                }
                seen[b as usize] = true;
            }
            if !seen.iter().all(|&s| s) {
                return Err(SoogError::Domain(format!(
                    "phase {}: bucket ids not dense",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// True per phase iff `a` refines `b`: every `b`-bucket is a disjoint union
/// of `a`-buckets.
pub fn check_refinement(a: &AbstractionMap, b: &AbstractionMap) -> Result<Vec<bool>> {
    if a.game_id != b.game_id {
        return Err(SoogError::Domain(format!(
            "refinement check across games {:?} vs {:?}",
            a.game_id, b.game_id
        )));
    }
    if a.phases.len() != b.phases.len() {
        return Err(SoogError::Domain("phase counts differ".into()));
    }
    let mut out = Vec::new();
    for (pa, pb) in a.phases.iter().zip(&b.phases) {
        if pa.buckets.len() != pb.buckets.len() {
            return Err(SoogError::Domain("index counts differ".into()));
        }
        let mut image: Vec<Option<u32>> = vec![None; pa.n_buckets as usize];
        let mut refines = true;
        for (&ba, &bb) in pa.buckets.iter().zip(&pb.buckets) {
            match image[ba as usize] {
                None => image[ba as usize] = Some(bb),
                Some(prev) if prev != bb => {
                    refines = false;
                    break;
                }
                _ => {}
            }
        }
        out.push(refines);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(game: &str, phases: Vec<Vec<u32>>) -> AbstractionMap {
        AbstractionMap {
            game_id: game.into(),
            phases: phases
                .into_iter()
                .map(|buckets| PhaseMap {
                    n_buckets: buckets.iter().max().map_or(0, |m| m + 1),
                    buckets,
                })
                .collect(),
        }
    }

    #[test]
    fn self_refinement_holds() {
        let m = map("leduc", vec![vec![0, 1, 2], vec![0, 0, 1, 1]]);
        assert_eq!(check_refinement(&m, &m).unwrap(), vec![true, true]);
    }

    #[test]
    fn crossing_partitions_do_not_refine() {
        let a = map("leduc", vec![vec![0, 0, 1, 1]]);
        let b = map("leduc", vec![vec![0, 1, 0, 1]]);
        assert_eq!(check_refinement(&a, &b).unwrap(), vec![false]);
        assert_eq!(check_refinement(&b, &a).unwrap(), vec![false]);
        // But the lossless map refines both.
        let fine = map("leduc", vec![vec![0, 1, 2, 3]]);
        assert_eq!(check_refinement(&fine, &a).unwrap(), vec![true]);
        assert_eq!(check_refinement(&fine, &b).unwrap(), vec![true]);
    }

    #[test]
    fn refinement_rejects_different_games() {
        let a = map("leduc", vec![vec![0]]);
        let b = map("numeral211", vec![vec![0]]);
        assert!(check_refinement(&a, &b).is_err());
    }

    #[test]
    fn from_keys_orders_buckets_by_key() {
        let p = PhaseMap::from_keys(&["c", "a", "c", "b"]);
        assert_eq!(p.n_buckets, 3);
        assert_eq!(p.buckets, vec![2, 0, 2, 1]);
    }

    #[test]
    fn validate_catches_gaps() {
        let m = map("leduc", vec![vec![0, 2, 2]]);
        assert!(m.validate().is_err());
        let ok = map("leduc", vec![vec![0, 1, 1]]);
        assert!(ok.validate().is_ok());
    }
}
