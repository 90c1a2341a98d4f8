//! Exact outcome features: winrate outcomes, potential-aware outcome
//! histograms (PAOF), transition histograms, and showdown equity.
//!
//! Every game deals uniformly, so chance-weighted fractions are plain counts
//! over enumerations; all features are exact integers or rationals and are
//! grouped by exact equality, never by float tolerance. Features are computed
//! per canonical index and broadcast to raw observations, which is sound
//! because every feature is invariant under the deck automorphisms.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::canonical::Indexer;
use crate::cards::Card;
use crate::error::{Result, SoogError};
use crate::games::engine::combinations;
use crate::games::evaluate_hand;
use crate::model::CanonicalIndex;

use super::PhaseMap;

/// Exact count vector with a shared denominator: the (loss, tie, win)
/// winrate outcome at the final phase, or a PAOF histogram earlier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OutcomeFeature {
    pub phase: usize,
    pub counts: Vec<u64>,
    pub denom: u64,
}

/// Transition probabilities into next-phase clusters, as exact counts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TransitionHistogram {
    pub phase: usize,
    pub counts: Vec<u64>,
    pub denom: u64,
}

impl TransitionHistogram {
    pub fn to_f64(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.denom as f64)
            .collect()
    }
}

/// The set of phase-r′ signals extending an infoset's signals, represented
/// by their canonical observation indices (with multiplicity).
#[derive(Clone, Debug)]
pub struct ExtendedSignalSet {
    pub source: CanonicalIndex,
    pub target_phase: usize,
    pub members: Vec<u32>,
}

/// Memoized per-game feature tables.
pub struct FeatureContext<'a> {
    pub ix: &'a Indexer,
    /// Per final-phase canonical index: (loss, tie, win) counts.
    wo: OnceLock<(Vec<(u64, u64, u64)>, u64)>,
    /// Per phase (index 0 = phase 1): successor canonical indices per class.
    succ: Vec<OnceLock<Vec<Vec<u32>>>>,
    /// Per phase: exact equity per class.
    equity: Vec<OnceLock<Vec<Ratio<u64>>>>,
}

impl<'a> FeatureContext<'a> {
    pub fn new(ix: &'a Indexer) -> Self {
        let phases = ix.game.phases();
        assert!(
            ix.enumerable_phases() == phases,
            "feature computation needs all phases enumerable"
        );
        FeatureContext {
            ix,
            wo: OnceLock::new(),
            succ: (0..phases).map(|_| OnceLock::new()).collect(),
            equity: (0..phases).map(|_| OnceLock::new()).collect(),
        }
    }

    fn final_phase(&self) -> usize {
        self.ix.game.phases()
    }

    fn unseen(&self, rep_cards: &[Card]) -> Vec<Card> {
        self.ix
            .game
            .deck
            .cards()
            .filter(|c| !rep_cards.contains(c))
            .collect()
    }

    /// (loss, tie, win) counts over opponent hole completions, per
    /// final-phase class, plus the shared denominator.
    pub fn wo_table(&self) -> &(Vec<(u64, u64, u64)>, u64) {
        self.wo.get_or_init(|| {
            let game = &self.ix.game;
            let phase = self.final_phase();
            let holes = game.holes;
            let mut table = Vec::with_capacity(self.ix.count(phase));
            let mut denom = 0u64;
            for index in 0..self.ix.count(phase) as u32 {
                let rep = self.ix.representative(CanonicalIndex { phase, index });
                let board: Vec<Card> = rep.board.iter().flatten().copied().collect();
                let own_key = evaluate_hand(&rep.own, &board, game).unwrap().key();
                let unseen = self.unseen(&rep.all_cards());
                let (mut loss, mut tie, mut win) = (0u64, 0u64, 0u64);
                let mut n = 0u64;
                for opp in combinations(&unseen, holes) {
                    let opp_key = evaluate_hand(&opp, &board, game).unwrap().key();
                    match own_key.cmp(&opp_key) {
                        std::cmp::Ordering::Less => loss += 1,
                        std::cmp::Ordering::Equal => tie += 1,
                        std::cmp::Ordering::Greater => win += 1,
                    }
                    n += 1;
                }
                denom = n;
                table.push((loss, tie, win));
            }
            (table, denom)
        })
    }

    /// Successor class indices (one per next-board combination) for every
    /// class of `phase`.
    pub fn successors(&self, phase: usize) -> &Vec<Vec<u32>> {
        assert!(phase < self.final_phase());
        self.succ[phase - 1].get_or_init(|| {
            let game = &self.ix.game;
            let b = game.board_per_phase[phase - 1];
            let mut out = Vec::with_capacity(self.ix.count(phase));
            for index in 0..self.ix.count(phase) as u32 {
                let rep = self.ix.representative(CanonicalIndex { phase, index });
                let unseen = self.unseen(&rep.all_cards());
                let mut succs = Vec::with_capacity(crate::canonical::binom(
                    unseen.len() as u64,
                    b as u64,
                ) as usize);
                for group in combinations(&unseen, b) {
                    let mut obs = rep.clone();
                    obs.board.push(group);
                    obs.phase = phase + 1;
                    succs.push(self.ix.canonical_index(&obs).unwrap().index);
                }
                out.push(succs);
            }
            out
        })
    }

    /// Exact equity (w + t/2) for every class of `phase`, over all
    /// final-phase extensions.
    pub fn equity_table(&self, phase: usize) -> &Vec<Ratio<u64>> {
        self.equity[phase - 1].get_or_init(|| {
            if phase == self.final_phase() {
                let (wo, denom) = self.wo_table();
                wo.iter()
                    .map(|&(_, t, w)| Ratio::new(2 * w + t, 2 * denom))
                    .collect()
            } else {
                // Board deals are uniform, so equity is the unweighted mean
                // of the successors' equities.
                let next = self.equity_table(phase + 1).clone();
                self.successors(phase)
                    .iter()
                    .map(|succs| {
                        let sum: Ratio<u64> =
                            succs.iter().map(|&s| next[s as usize]).sum();
                        sum / Ratio::from_integer(succs.len() as u64)
                    })
                    .collect()
            }
        })
    }

    /// All final-phase (or other target-phase) extensions of a class.
    pub fn extended_signals(
        &self,
        idx: CanonicalIndex,
        target_phase: usize,
    ) -> Result<ExtendedSignalSet> {
        if target_phase < idx.phase || target_phase > self.final_phase() {
            return Err(SoogError::Phase(format!(
                "target phase {target_phase} out of range for phase {}",
                idx.phase
            )));
        }
        let mut members = vec![idx.index];
        for phase in idx.phase..target_phase {
            let succ = self.successors(phase);
            members = members
                .iter()
                .flat_map(|&m| succ[m as usize].iter().copied())
                .collect();
        }
        Ok(ExtendedSignalSet {
            source: idx,
            target_phase,
            members,
        })
    }
}

/// The (loss, tie, win) feature of a final-phase class.
pub fn winrate_outcome_feature(
    ctx: &FeatureContext,
    idx: CanonicalIndex,
) -> Result<OutcomeFeature> {
    if idx.phase != ctx.final_phase() {
        return Err(SoogError::Phase(format!(
            "winrate outcome needs the final phase, got {}",
            idx.phase
        )));
    }
    let (wo, denom) = ctx.wo_table();
    let (l, t, w) = wo[idx.index as usize];
    Ok(OutcomeFeature {
        phase: idx.phase,
        counts: vec![l, t, w],
        denom: *denom,
    })
}

/// Histogram of next-phase PAOI classes over the one-step extensions.
pub fn paof(
    ctx: &FeatureContext,
    idx: CanonicalIndex,
    next_paoi: &PhaseMap,
) -> Result<OutcomeFeature> {
    let h = histogram(ctx, idx, next_paoi)?;
    Ok(OutcomeFeature {
        phase: idx.phase,
        counts: h.counts,
        denom: h.denom,
    })
}

/// Histogram of next-phase clusters over the one-step extensions; identical
/// to `paof` except for the clustering it maps into.
pub fn transition_histogram(
    ctx: &FeatureContext,
    idx: CanonicalIndex,
    next_clusters: &PhaseMap,
) -> Result<TransitionHistogram> {
    histogram(ctx, idx, next_clusters)
}

fn histogram(
    ctx: &FeatureContext,
    idx: CanonicalIndex,
    next: &PhaseMap,
) -> Result<TransitionHistogram> {
    if idx.phase >= ctx.final_phase() {
        return Err(SoogError::Phase(format!(
            "phase {} has no next-phase histogram",
            idx.phase
        )));
    }
    if next.buckets.len() != ctx.ix.count(idx.phase + 1) {
        return Err(SoogError::Dependency(format!(
            "next-phase map covers {} classes, expected {}",
            next.buckets.len(),
            ctx.ix.count(idx.phase + 1)
        )));
    }
    let succs = &ctx.successors(idx.phase)[idx.index as usize];
    let mut counts = vec![0u64; next.n_buckets as usize];
    for &s in succs {
        counts[next.buckets[s as usize] as usize] += 1;
    }
    Ok(TransitionHistogram {
        phase: idx.phase,
        counts,
        denom: succs.len() as u64,
    })
}

/// Exact showdown equity of a class.
pub fn ehs_equity(ctx: &FeatureContext, idx: CanonicalIndex) -> Ratio<u64> {
    ctx.equity_table(idx.phase)[idx.index as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameSpec;
    use crate::model::ObservationInfoset;

    fn leduc_ctx() -> (Indexer, GameSpec) {
        let g = GameSpec::leduc();
        (Indexer::build(&g), g)
    }

    fn obs(g: &GameSpec, own: &str, board: Option<&str>) -> ObservationInfoset {
        ObservationInfoset {
            owner: 0,
            own: vec![g.deck.parse_card(own).unwrap()],
            board: board
                .map(|b| vec![vec![g.deck.parse_card(b).unwrap()]])
                .unwrap_or_default(),
            phase: 1 + usize::from(board.is_some()),
        }
    }

    #[test]
    fn leduc_winrate_outcomes() {
        let (ix, g) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        // Kh on a Ks board wins against all 4 opponent cards.
        let kk = ix.canonical_index(&obs(&g, "Kh", Some("Ks"))).unwrap();
        let f = winrate_outcome_feature(&ctx, kk).unwrap();
        assert_eq!((f.counts.as_slice(), f.denom), ([0, 0, 4].as_slice(), 4));
        // Jh on a Qs board loses to Js pairing... no: opponent holds one of
        // {Js, Qh, Kh, Ks}: J ties, Q pairs the board, K outkicks: (3,1,0).
        let jq = ix.canonical_index(&obs(&g, "Jh", Some("Qs"))).unwrap();
        let f = winrate_outcome_feature(&ctx, jq).unwrap();
        assert_eq!((f.counts.as_slice(), f.denom), ([3, 1, 0].as_slice(), 4));
    }

    #[test]
    fn winrate_outcome_rejects_nonfinal_phase() {
        let (ix, g) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        let j = ix.canonical_index(&obs(&g, "Jh", None)).unwrap();
        assert!(winrate_outcome_feature(&ctx, j).is_err());
    }

    #[test]
    fn leduc_equities() {
        let (ix, g) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        let kk = ix.canonical_index(&obs(&g, "Kh", Some("Ks"))).unwrap();
        assert_eq!(ehs_equity(&ctx, kk), Ratio::from_integer(1));
        let jq = ix.canonical_index(&obs(&g, "Jh", Some("Qs"))).unwrap();
        assert_eq!(ehs_equity(&ctx, jq), Ratio::new(1, 8));
        // Phase-1 K: mean over 5 boards x 4 opponents.
        let k1 = ix.canonical_index(&obs(&g, "Kh", None)).unwrap();
        let mut total = Ratio::new(0u64, 1);
        let mut n = 0u64;
        for b in g.deck.cards() {
            if b == g.deck.parse_card("Kh").unwrap() {
                continue;
            }
            let o = ObservationInfoset {
                owner: 0,
                own: vec![g.deck.parse_card("Kh").unwrap()],
                board: vec![vec![b]],
                phase: 2,
            };
            total += ehs_equity(&ctx, ix.canonical_index(&o).unwrap());
            n += 1;
        }
        assert_eq!(ehs_equity(&ctx, k1), total / Ratio::from_integer(n));
    }

    #[test]
    fn features_sum_to_denominator() {
        let (ix, _) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        for index in 0..ix.count(2) as u32 {
            let f =
                winrate_outcome_feature(&ctx, CanonicalIndex { phase: 2, index }).unwrap();
            assert_eq!(f.counts.iter().sum::<u64>(), f.denom);
        }
    }

    #[test]
    fn single_bucket_histogram_is_degenerate() {
        let (ix, _) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        let one = PhaseMap {
            n_buckets: 1,
            buckets: vec![0; ix.count(2)],
        };
        let h = transition_histogram(&ctx, CanonicalIndex { phase: 1, index: 0 }, &one).unwrap();
        assert_eq!(h.counts, vec![h.denom]);
    }

    #[test]
    fn extended_signals_cover_all_extensions() {
        let (ix, _) = leduc_ctx();
        let ctx = FeatureContext::new(&ix);
        let idx = CanonicalIndex { phase: 1, index: 0 };
        let s = ctx.extended_signals(idx, 2).unwrap();
        assert_eq!(s.members.len(), 5); // 5 possible board cards
        let same = ctx.extended_signals(idx, 1).unwrap();
        assert_eq!(same.members, vec![0]);
        assert!(ctx.extended_signals(idx, 3).is_err());
    }
}
