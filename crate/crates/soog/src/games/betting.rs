//! Limit betting rounds shared by Leduc and Numeral211.
//!
//! Both games are heads-up limit games: player 1 (index 0) acts first in
//! every phase, a phase allows a bounded number of bets-plus-raises, and a
//! call or a second check closes the phase.

use crate::error::{Result, SoogError};
use crate::games::spec::GameSpec;
use crate::model::BetToken;

/// Betting state within one phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BetState {
    pub phase: usize,
    pub to_act: u8,
    /// Chips committed by each player over the whole hand, antes included.
    pub committed: [u32; 2],
    /// What the player to act must add to continue.
    pub owed: u32,
    /// Bets plus raises so far this phase.
    pub aggro: u32,
    /// Consecutive checks this phase.
    pub checks: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BetStep {
    Continue(BetState),
    /// The betting round closed with both players still in.
    PhaseEnd(BetState),
    Fold { folder: u8, committed: [u32; 2] },
}

impl BetState {
    /// Fresh state at the start of phase 1 (both antes posted).
    pub fn opening(game: &GameSpec) -> BetState {
        BetState {
            phase: 1,
            to_act: 0,
            committed: [game.ante, game.ante],
            owed: 0,
            aggro: 0,
            checks: 0,
        }
    }

    /// Carries the pot into the next phase's betting round.
    pub fn next_phase(&self) -> BetState {
        BetState {
            phase: self.phase + 1,
            to_act: 0,
            committed: self.committed,
            owed: 0,
            aggro: 0,
            checks: 0,
        }
    }

    /// Legal tokens in a fixed deterministic order.
    pub fn legal_tokens(&self, game: &GameSpec) -> Vec<BetToken> {
        let cap = game.max_raises[self.phase - 1];
        let mut out = Vec::with_capacity(3);
        if self.owed > 0 {
            out.push(BetToken::Fold);
            out.push(BetToken::Call);
            if self.aggro < cap {
                out.push(BetToken::Raise);
            }
        } else {
            out.push(BetToken::Check);
            if self.aggro < cap {
                out.push(BetToken::Bet);
            }
        }
        out
    }

    pub fn step(&self, token: BetToken, game: &GameSpec) -> Result<BetStep> {
        if !self.legal_tokens(game).contains(&token) {
            return Err(SoogError::Rule(format!(
                "token {token:?} illegal in state {self:?}"
            )));
        }
        let p = self.to_act as usize;
        let bet = game.bet_size[self.phase - 1];
        let mut s = *self;
        s.to_act ^= 1;
        Ok(match token {
            BetToken::Fold => BetStep::Fold {
                folder: self.to_act,
                committed: self.committed,
            },
            BetToken::Check => {
                s.checks += 1;
                if s.checks == 2 {
                    BetStep::PhaseEnd(s)
                } else {
                    BetStep::Continue(s)
                }
            }
            BetToken::Call => {
                s.committed[p] += self.owed;
                s.owed = 0;
                BetStep::PhaseEnd(s)
            }
            BetToken::Bet => {
                s.committed[p] += bet;
                s.owed = bet;
                s.aggro += 1;
                s.checks = 0;
                BetStep::Continue(s)
            }
            BetToken::Raise => {
                s.committed[p] += self.owed + bet;
                s.owed = bet;
                s.aggro += 1;
                BetStep::Continue(s)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::spec::GameSpec;

    fn run(game: &GameSpec, tokens: &[BetToken]) -> BetStep {
        let mut s = BetState::opening(game);
        for (i, &t) in tokens.iter().enumerate() {
            match s.step(t, game).unwrap() {
                BetStep::Continue(next) => s = next,
                done => {
                    assert_eq!(i, tokens.len() - 1, "round ended early");
                    return done;
                }
            }
        }
        panic!("round did not end");
    }

    #[test]
    fn leduc_bet_fold_pot() {
        let g = GameSpec::leduc();
        match run(&g, &[BetToken::Bet, BetToken::Fold]) {
            BetStep::Fold { folder, committed } => {
                assert_eq!(folder, 1);
                assert_eq!(committed, [3, 1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn check_check_closes_round() {
        let g = GameSpec::leduc();
        match run(&g, &[BetToken::Check, BetToken::Check]) {
            BetStep::PhaseEnd(s) => assert_eq!(s.committed, [1, 1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bet_raise_call_commits_evenly() {
        let g = GameSpec::leduc();
        match run(&g, &[BetToken::Bet, BetToken::Raise, BetToken::Call]) {
            BetStep::PhaseEnd(s) => {
                assert_eq!(s.committed, [5, 5]);
                assert_eq!(s.aggro, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn leduc_caps_at_one_bet_one_raise() {
        let g = GameSpec::leduc();
        let mut s = BetState::opening(&g);
        for t in [BetToken::Bet, BetToken::Raise] {
            s = match s.step(t, &g).unwrap() {
                BetStep::Continue(next) => next,
                other => panic!("unexpected {other:?}"),
            };
        }
        assert_eq!(s.legal_tokens(&g), vec![BetToken::Fold, BetToken::Call]);
    }

    #[test]
    fn numeral211_allows_four_aggressive_actions() {
        let g = GameSpec::numeral211();
        let mut s = BetState::opening(&g);
        for t in [BetToken::Bet, BetToken::Raise, BetToken::Raise, BetToken::Raise] {
            s = match s.step(t, &g).unwrap() {
                BetStep::Continue(next) => next,
                other => panic!("unexpected {other:?}"),
            };
        }
        // Fifth aggressive action is illegal.
        assert_eq!(s.legal_tokens(&g), vec![BetToken::Fold, BetToken::Call]);
        assert!(s.step(BetToken::Raise, &g).is_err());
        // phase-1 pot after b,r,r,r,call: 5 + 10*4 committed each.
        match s.step(BetToken::Call, &g).unwrap() {
            BetStep::PhaseEnd(e) => assert_eq!(e.committed, [45, 45]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn check_then_bet_line() {
        let g = GameSpec::numeral211();
        match run(&g, &[BetToken::Check, BetToken::Bet, BetToken::Call]) {
            BetStep::PhaseEnd(s) => assert_eq!(s.committed, [15, 15]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
