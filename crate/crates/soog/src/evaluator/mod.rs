//! Exact best response and exploitability in the original game.
//!
//! A lifted abstracted strategy is evaluated by computing, for each side, the
//! value a best responder earns against it over the full (unabstracted) deal
//! distribution. The responder maximizes per raw hand at every public state,
//! which is exactly a best response because hands are the only private
//! information.

pub mod experiments;
pub mod naive;

use crate::error::{Result, SoogError};
use crate::solver::public::{BetEdge, PublicGame};
use crate::solver::strategy::StrategyProfile;
use crate::solver::values::{disjoint_reach, showdown_values};

/// Exploitability of a strategy pair.
#[derive(Clone, Copy, Debug)]
pub struct ExploitabilityReport {
    /// `br[i]`: chips a best responder earns per hand playing seat `i+1`
    /// against the other seat's submitted strategy. The game value cancels in
    /// the mean, so `eps = (br[0] + br[1]) / 2` is the distance to
    /// equilibrium.
    pub br: [f64; 2],
    pub eps_chips: f64,
}

impl ExploitabilityReport {
    pub fn eps_milliante(&self, ante: u32) -> f64 {
        self.eps_chips / ante as f64 * 1000.0
    }
}

/// Value of the best response by seat `1 - opp.player` against `opp`.
pub fn best_response_value(pg: &PublicGame, opp: &StrategyProfile) -> Result<f64> {
    Ok(best_response_root(pg, opp)?.iter().sum())
}

/// Per-hand best-response values at the root (summing to the best-response
/// value).
pub fn best_response_root(pg: &PublicGame, opp: &StrategyProfile) -> Result<Vec<f64>> {
    if opp.game_id != pg.game.id {
        return Err(SoogError::Dependency(format!(
            "strategy for game {:?}, expected {:?}",
            opp.game_id, pg.game.id
        )));
    }
    let responder = 1 - opp.player;
    // Normalize all strategy rows once (uniform on unvisited rows).
    let mut sigma = opp.probs.clone();
    for (i, node) in pg.bet_nodes.iter().enumerate() {
        if node.player != opp.player {
            continue;
        }
        let na = node.actions.len();
        let nb = opp.map.phases[node.phase - 1].n_buckets as usize;
        for b in 0..nb {
            let row = opp.offsets[i] + b * na;
            let total: f64 = sigma[row..row + na].iter().sum();
            if total > 0.0 {
                for v in &mut sigma[row..row + na] {
                    *v /= total;
                }
            } else {
                sigma[row..row + na].fill(1.0 / na as f64);
            }
        }
    }
    let buckets: Vec<Vec<u32>> = pg
        .board_nodes
        .iter()
        .map(|b| {
            let pm = &opp.map.phases[b.phase - 1];
            b.class_canon
                .iter()
                .map(|&c| pm.buckets[c as usize])
                .collect()
        })
        .collect();
    let br = Responder {
        pg,
        responder,
        sigma: &sigma,
        offsets: &opp.offsets,
        buckets: &buckets,
    };
    let root = &pg.board_nodes[pg.board_root];
    let joint = pg.root_reach[0] * pg.root_reach[1];
    let r_opp = vec![joint; root.valid.len()];
    Ok(br.walk(pg.bet_root, pg.board_root, 1.0, &r_opp))
}

/// Exploitability of the pair `(s0, s1)` (seat-1 and seat-2 strategies).
pub fn exploitability(
    pg: &PublicGame,
    s0: &StrategyProfile,
    s1: &StrategyProfile,
) -> Result<ExploitabilityReport> {
    if s0.player != 0 || s1.player != 1 {
        return Err(SoogError::Domain(
            "exploitability needs a seat-1 and a seat-2 strategy".into(),
        ));
    }
    // br[0] responds to s1; br[1] responds to s0.
    let br = [best_response_value(pg, s1)?, best_response_value(pg, s0)?];
    Ok(ExploitabilityReport {
        br,
        eps_chips: (br[0] + br[1]) / 2.0,
    })
}

struct Responder<'a> {
    pg: &'a PublicGame,
    responder: u8,
    sigma: &'a [f64],
    offsets: &'a [usize],
    buckets: &'a [Vec<u32>],
}

impl Responder<'_> {
    /// Responder's per-hand best-response value, weighted by the opponent's
    /// reach (joint deal probability included).
    fn walk(&self, bn: usize, bd: usize, w: f64, r_opp: &[f64]) -> Vec<f64> {
        let pg = self.pg;
        let node = &pg.bet_nodes[bn];
        let n = pg.board_nodes[bd].valid.len();
        let na = node.actions.len();
        let board = &pg.board_nodes[bd];
        let class_of = &board.class_of;
        if node.player == self.responder {
            // Board orbits are collapsed to representatives, which preserves
            // value sums over canonical hand classes but not individual raw
            // hands. A best response is therefore maximized per canonical
            // class (an optimal response exists that is constant on classes,
            // since the opponent's lifted strategy is).
            let nc = board.class_canon.len();
            let us: Vec<Vec<f64>> = node
                .actions
                .iter()
                .map(|&(_, edge)| self.edge_value(edge, bd, w, r_opp))
                .collect();
            let mut best_action = vec![0usize; nc];
            let mut best_sum = vec![f64::NEG_INFINITY; nc];
            for (a, u) in us.iter().enumerate() {
                let mut sums = vec![0.0f64; nc];
                for h in 0..n {
                    sums[class_of[h] as usize] += u[h];
                }
                for (c, &s) in sums.iter().enumerate() {
                    if s > best_sum[c] {
                        best_sum[c] = s;
                        best_action[c] = a;
                    }
                }
            }
            (0..n)
                .map(|h| us[best_action[class_of[h] as usize]][h])
                .collect()
        } else {
            let bucket = &self.buckets[bd];
            let base = self.offsets[bn];
            let mut total = vec![0.0f64; n];
            let mut child = vec![0.0f64; n];
            for (a, &(_, edge)) in node.actions.iter().enumerate() {
                for h in 0..n {
                    child[h] =
                        r_opp[h] * self.sigma[base + bucket[class_of[h] as usize] as usize * na + a];
                }
                let u = self.edge_value(edge, bd, w, &child);
                for h in 0..n {
                    total[h] += u[h];
                }
            }
            total
        }
    }

    fn edge_value(&self, edge: BetEdge, bd: usize, w: f64, r_opp: &[f64]) -> Vec<f64> {
        let pg = self.pg;
        let board = &pg.board_nodes[bd];
        let deck = pg.game.deck.size();
        match edge {
            BetEdge::To(next) => self.walk(next, bd, w, r_opp),
            BetEdge::NextPhase(next) => {
                let xi = pg.xi[board.phase - 1];
                let mut out = vec![0.0f64; board.valid.len()];
                for &child_id in &board.children {
                    let child = &pg.board_nodes[child_id];
                    let m = child.valid.len();
                    let mut c = vec![0.0f64; m];
                    for j in 0..m {
                        c[j] = r_opp[child.parent_slot[j] as usize];
                    }
                    let u = self.walk(next, child_id, w * child.weight * xi, &c);
                    for j in 0..m {
                        out[child.parent_slot[j] as usize] += u[j];
                    }
                }
                out
            }
            BetEdge::Fold { folder, amount } => {
                let sign = if folder == self.responder { -1.0 } else { 1.0 };
                disjoint_reach(&board.cards, pg.game.holes, r_opp, deck)
                    .into_iter()
                    .map(|v| v * sign * amount as f64 * w)
                    .collect()
            }
            BetEdge::Showdown { pot } => showdown_values(
                board.showdown.as_ref().expect("showdown at non-final board"),
                &board.cards,
                pg.game.holes,
                r_opp,
                deck,
                pot as f64 * w,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::build_li;
    use crate::canonical::Indexer;
    use crate::games::GameSpec;
    use crate::solver::{CfrSolver, CfrVariant};

    #[test]
    fn uniform_is_more_exploitable_than_solved() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = PublicGame::build(&ix);
        let li = build_li(&ix);
        let uniform0 = {
            let mut s = StrategyProfile::zeroed(&pg, 0, &li);
            s.probs.fill(1.0);
            s
        };
        let uniform1 = {
            let mut s = StrategyProfile::zeroed(&pg, 1, &li);
            s.probs.fill(1.0);
            s
        };
        let rough = exploitability(&pg, &uniform0, &uniform1).unwrap();
        let mut solver =
            CfrSolver::new(&pg, [&li, &li], CfrVariant::Vanilla, [true, true]).unwrap();
        solver.run(1000);
        let solved = exploitability(
            &pg,
            &solver.average_strategy(0),
            &solver.average_strategy(1),
        )
        .unwrap();
        assert!(rough.eps_chips > 0.0);
        assert!(solved.eps_chips >= -1e-9);
        assert!(solved.eps_chips < rough.eps_chips / 5.0);
    }

    #[test]
    fn exploitability_decreases_with_more_iterations() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = PublicGame::build(&ix);
        let li = build_li(&ix);
        let mut solver =
            CfrSolver::new(&pg, [&li, &li], CfrVariant::Plus, [true, true]).unwrap();
        solver.run(20);
        let early = exploitability(
            &pg,
            &solver.average_strategy(0),
            &solver.average_strategy(1),
        )
        .unwrap();
        solver.run(480);
        let late = exploitability(
            &pg,
            &solver.average_strategy(0),
            &solver.average_strategy(1),
        )
        .unwrap();
        assert!(late.eps_chips < early.eps_chips);
    }
}
