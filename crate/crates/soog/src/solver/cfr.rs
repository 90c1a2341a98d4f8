//! Counterfactual regret minimization over an abstracted public game.
//!
//! The traversal is vectorized over private hands: reach probabilities are
//! carried per valid hand of the current board node, both players' regrets
//! are updated in one simultaneous pass, and chance appears only as scalar
//! weights (board-orbit multiplicity times the uniform deal probability).
//! The two players may use different abstraction maps, which is how the
//! asymmetric experiments are solved.

use crate::abstraction::AbstractionMap;
use crate::error::{Result, SoogError};
use crate::solver::public::{BetEdge, PublicGame};
use crate::solver::strategy::StrategyProfile;
use crate::solver::values::{disjoint_reach_pair, showdown_values_pair};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CfrVariant {
    /// Simultaneous-update vanilla CFR with uniform strategy averaging.
    Vanilla,
    /// CFR+: regrets floored at zero, linearly weighted averaging.
    Plus,
}

pub struct CfrSolver<'a> {
    pub pg: &'a PublicGame,
    pub variant: CfrVariant,
    maps: [AbstractionMap; 2],
    /// Whether each player's average strategy is accumulated (skipping the
    /// discarded side of an asymmetric solve saves its table).
    track_avg: [bool; 2],
    /// Per betting node: offset into the acting player's tables.
    offsets: Vec<usize>,
    regrets: [Vec<f64>; 2],
    avg: [Vec<f64>; 2],
    /// Per board node and player: bucket of each local canonical class, in
    /// the solver-internal renumbering.
    buckets: Vec<[Vec<u32>; 2]>,
    /// Per player and phase: map bucket id → internal row id.
    perm: [Vec<Vec<u32>>; 2],
    pub iterations: u64,
}

impl<'a> CfrSolver<'a> {
    pub fn new(
        pg: &'a PublicGame,
        maps: [&AbstractionMap; 2],
        variant: CfrVariant,
        track_avg: [bool; 2],
    ) -> Result<CfrSolver<'a>> {
        for m in maps {
            if m.game_id != pg.game.id {
                return Err(SoogError::Dependency(format!(
                    "abstraction for game {:?}, expected {:?}",
                    m.game_id, pg.game.id
                )));
            }
        }
        let mut offsets = vec![usize::MAX; pg.bet_nodes.len()];
        let mut lens = [0usize; 2];
        for (i, n) in pg.bet_nodes.iter().enumerate() {
            let p = n.player as usize;
            offsets[i] = lens[p];
            lens[p] += n.actions.len() * maps[p].phases[n.phase - 1].n_buckets as usize;
        }
        // Solver-internal bucket renumbering: buckets are re-ordered by first
        // appearance over the board tree, so that the classes of one board
        // occupy (mostly) contiguous regret rows. Canonical indices interleave
        // boards, which would otherwise scatter every lookup across the whole
        // phase table.
        let mut perm: [Vec<Vec<u32>>; 2] = [0, 1].map(|p: usize| {
            maps[p]
                .phases
                .iter()
                .map(|pm| vec![u32::MAX; pm.n_buckets as usize])
                .collect()
        });
        let mut next: [Vec<u32>; 2] =
            [0, 1].map(|p: usize| vec![0; maps[p].phases.len()]);
        let mut buckets: Vec<[Vec<u32>; 2]> = Vec::with_capacity(pg.board_nodes.len());
        for b in &pg.board_nodes {
            buckets.push([0, 1].map(|p| {
                let phase_map = &maps[p].phases[b.phase - 1];
                b.class_canon
                    .iter()
                    .map(|&c| {
                        let old = phase_map.buckets[c as usize] as usize;
                        let slot = &mut perm[p][b.phase - 1][old];
                        if *slot == u32::MAX {
                            *slot = next[p][b.phase - 1];
                            next[p][b.phase - 1] += 1;
                        }
                        *slot
                    })
                    .collect()
            }));
        }
        for (p, phases) in perm.iter().enumerate() {
            for (ph, table) in phases.iter().enumerate() {
                debug_assert_eq!(next[p][ph] as usize, table.len());
            }
        }
        Ok(CfrSolver {
            pg,
            variant,
            maps: [maps[0].clone(), maps[1].clone()],
            track_avg,
            offsets,
            regrets: [vec![0.0; lens[0]], vec![0.0; lens[1]]],
            avg: [
                vec![0.0; if track_avg[0] { lens[0] } else { 0 }],
                vec![0.0; if track_avg[1] { lens[1] } else { 0 }],
            ],
            buckets,
            perm,
            iterations: 0,
        })
    }

    /// Runs one simultaneous CFR iteration over the whole public tree.
    pub fn iterate(&mut self) {
        self.iterations += 1;
        let pg = self.pg;
        let root = &pg.board_nodes[pg.board_root];
        let r0 = vec![pg.root_reach[0]; root.valid.len()];
        let r1 = vec![pg.root_reach[1]; root.valid.len()];
        self.walk(pg.bet_root, pg.board_root, 1.0, &r0, &r1);
    }

    pub fn run(&mut self, iterations: u64) {
        for _ in 0..iterations {
            self.iterate();
        }
    }

    /// Per-hand expected values for both players, weighted by the opponent's
    /// reach under the current strategies.
    fn walk(
        &mut self,
        bn: usize,
        bd: usize,
        w: f64,
        r0: &[f64],
        r1: &[f64],
    ) -> (Vec<f64>, Vec<f64>) {
        let pg = self.pg;
        let node = &pg.bet_nodes[bn];
        let p = node.player as usize;
        let na = node.actions.len();
        let board = &pg.board_nodes[bd];
        let n = board.valid.len();
        let class_of = &board.class_of;
        let nc = board.class_canon.len();
        let bucket = self.buckets[bd][p].clone();

        // Current strategy per local canonical class by regret matching
        // (buckets, and hence strategies, are constant on classes).
        let base = self.offsets[bn];
        let mut sigma = vec![0.0f64; nc * na];
        {
            let regrets = &self.regrets[p];
            for c in 0..nc {
                let row = base + bucket[c] as usize * na;
                let slot = &mut sigma[c * na..(c + 1) * na];
                let mut total = 0.0;
                for a in 0..na {
                    let r = regrets[row + a].max(0.0);
                    slot[a] = r;
                    total += r;
                }
                if total > 0.0 {
                    for v in slot.iter_mut() {
                        *v /= total;
                    }
                } else {
                    slot.fill(1.0 / na as f64);
                }
            }
        }

        let my_reach: &[f64] = if p == 0 { r0 } else { r1 };
        let mut child_reach = vec![0.0f64; n];
        let mut u_me = vec![0.0f64; n];
        let mut u_opp = vec![0.0f64; n];
        // Counterfactual action values aggregated per class.
        let mut cf = vec![0.0f64; nc * na];
        for (a, &(_, edge)) in node.actions.iter().enumerate() {
            for h in 0..n {
                child_reach[h] = my_reach[h] * sigma[class_of[h] as usize * na + a];
            }
            let (c0, c1): (&[f64], &[f64]) = if p == 0 {
                (&child_reach, r1)
            } else {
                (r0, &child_reach)
            };
            let (ua_me, ua_opp) = match edge {
                BetEdge::To(next) => {
                    let (u0, u1) = self.walk(next, bd, w, c0, c1);
                    if p == 0 {
                        (u0, u1)
                    } else {
                        (u1, u0)
                    }
                }
                BetEdge::NextPhase(next) => {
                    let (u0, u1) = self.deal(next, bd, w, c0, c1);
                    if p == 0 {
                        (u0, u1)
                    } else {
                        (u1, u0)
                    }
                }
                BetEdge::Fold { folder, amount } => {
                    let (u0, u1) = fold_values(pg, bd, folder, amount as f64 * w, c0, c1);
                    if p == 0 {
                        (u0, u1)
                    } else {
                        (u1, u0)
                    }
                }
                BetEdge::Showdown { pot } => {
                    let (u0, u1) = showdown_pair(pg, bd, pot as f64 * w, c0, c1);
                    if p == 0 {
                        (u0, u1)
                    } else {
                        (u1, u0)
                    }
                }
            };
            for h in 0..n {
                let c = class_of[h] as usize;
                u_me[h] += sigma[c * na + a] * ua_me[h];
                u_opp[h] += ua_opp[h];
                cf[c * na + a] += ua_me[h];
            }
        }

        // Regret and average-strategy updates for the acting player, per
        // class: counterfactual values aggregate exactly because the
        // strategy is constant on each class.
        let plus = self.variant == CfrVariant::Plus;
        let avg_w = if plus { self.iterations as f64 } else { 1.0 };
        let track = self.track_avg[p];
        let mut reach_sum = vec![0.0f64; nc];
        if track {
            for h in 0..n {
                reach_sum[class_of[h] as usize] += my_reach[h];
            }
        }
        let regrets = &mut self.regrets[p];
        let avg = &mut self.avg[p];
        for c in 0..nc {
            let row = base + bucket[c] as usize * na;
            let mut ev = 0.0;
            for a in 0..na {
                ev += sigma[c * na + a] * cf[c * na + a];
            }
            for a in 0..na {
                let slot = &mut regrets[row + a];
                *slot += cf[c * na + a] - ev;
                if plus && *slot < 0.0 {
                    *slot = 0.0;
                }
                if track {
                    avg[row + a] += avg_w * reach_sum[c] * sigma[c * na + a];
                }
            }
        }

        if p == 0 {
            (u_me, u_opp)
        } else {
            (u_opp, u_me)
        }
    }

    /// Chance expansion: recurse into each board orbit, scaling the scalar
    /// weight by orbit multiplicity and the uniform deal probability.
    fn deal(
        &mut self,
        next_bn: usize,
        bd: usize,
        w: f64,
        r0: &[f64],
        r1: &[f64],
    ) -> (Vec<f64>, Vec<f64>) {
        let pg = self.pg;
        let parent = &pg.board_nodes[bd];
        let xi = pg.xi[parent.phase - 1];
        let n = parent.valid.len();
        let mut u0 = vec![0.0f64; n];
        let mut u1 = vec![0.0f64; n];
        let children = parent.children.clone();
        for child_id in children {
            let child = &pg.board_nodes[child_id];
            let cw = w * child.weight * xi;
            let m = child.valid.len();
            let mut c0 = vec![0.0f64; m];
            let mut c1 = vec![0.0f64; m];
            for j in 0..m {
                let slot = child.parent_slot[j] as usize;
                c0[j] = r0[slot];
                c1[j] = r1[slot];
            }
            let (v0, v1) = self.walk(next_bn, child_id, cw, &c0, &c1);
            let child = &pg.board_nodes[child_id];
            for j in 0..m {
                let slot = child.parent_slot[j] as usize;
                u0[slot] += v0[j];
                u1[slot] += v1[j];
            }
        }
        (u0, u1)
    }

    /// The accumulated average strategy of one player.
    pub fn average_strategy(&self, player: u8) -> StrategyProfile {
        assert!(
            self.track_avg[player as usize],
            "average strategy was not tracked for player {}",
            player + 1
        );
        let mut out = StrategyProfile::zeroed(self.pg, player, &self.maps[player as usize]);
        for (i, node) in self.pg.bet_nodes.iter().enumerate() {
            if node.player != player {
                continue;
            }
            let na = node.actions.len();
            let nb = self.maps[player as usize].phases[node.phase - 1].n_buckets as usize;
            let perm = &self.perm[player as usize][node.phase - 1];
            let avg = &self.avg[player as usize];
            for old in 0..nb {
                let row = self.offsets[i] + perm[old] as usize * na;
                let dst = out.offsets[i] + old * na;
                out.probs[dst..dst + na].copy_from_slice(&avg[row..row + na]);
            }
        }
        out
    }
}

fn fold_values(
    pg: &PublicGame,
    bd: usize,
    folder: u8,
    amount: f64,
    r0: &[f64],
    r1: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let board = &pg.board_nodes[bd];
    let (mut u0, mut u1) =
        disjoint_reach_pair(&board.cards, pg.game.holes, r0, r1, pg.game.deck.size());
    let sign = |p: u8| if p == folder { -amount } else { amount };
    for v in u0.iter_mut() {
        *v *= sign(0);
    }
    for v in u1.iter_mut() {
        *v *= sign(1);
    }
    (u0, u1)
}

fn showdown_pair(
    pg: &PublicGame,
    bd: usize,
    pot: f64,
    r0: &[f64],
    r1: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let board = &pg.board_nodes[bd];
    let table = board.showdown.as_ref().expect("showdown at non-final board");
    showdown_values_pair(
        table,
        &board.cards,
        pg.game.holes,
        r0,
        r1,
        pg.game.deck.size(),
        pot,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::build_li;
    use crate::canonical::Indexer;
    use crate::games::GameSpec;

    #[test]
    fn leduc_strategies_normalize_after_iterations() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = crate::solver::PublicGame::build(&ix);
        let li = build_li(&ix);
        let mut solver = CfrSolver::new(&pg, [&li, &li], CfrVariant::Vanilla, [true, true]).unwrap();
        solver.run(10);
        for player in 0..2u8 {
            let s = solver.average_strategy(player);
            for (i, node) in pg.bet_nodes.iter().enumerate() {
                if node.player != player {
                    continue;
                }
                for bucket in 0..li.phases[node.phase - 1].n_buckets {
                    let probs = s.action_probs(&pg, i, bucket);
                    let total: f64 = probs.iter().sum();
                    assert!((total - 1.0).abs() < 1e-12);
                    assert!(probs.iter().all(|&p| p >= 0.0));
                }
            }
        }
    }

    #[test]
    fn plus_variant_keeps_regrets_nonnegative() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = crate::solver::PublicGame::build(&ix);
        let li = build_li(&ix);
        let mut solver = CfrSolver::new(&pg, [&li, &li], CfrVariant::Plus, [true, true]).unwrap();
        solver.run(25);
        for p in 0..2 {
            assert!(solver.regrets[p].iter().all(|&r| r >= 0.0));
        }
    }

    #[test]
    fn mismatched_game_ids_are_rejected() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = crate::solver::PublicGame::build(&ix);
        let other = Indexer::build(&GameSpec::numeral211());
        let wrong = build_li(&other);
        assert!(CfrSolver::new(&pg, [&wrong, &wrong], CfrVariant::Vanilla, [true, true]).is_err());
    }
}
