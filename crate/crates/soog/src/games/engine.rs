//! History-level game engine: dealing, betting, terminals and showdowns.

use crate::cards::Card;
use crate::error::{Result, SoogError};
use crate::games::betting::{BetState, BetStep};
use crate::games::eval::{evaluate_hand, HandRank};
use crate::games::spec::GameSpec;
use crate::model::{Action, History, Payload, Signal};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TerminalPayoff {
    /// Net chips won/lost per player; zero-sum.
    pub utilities: [i64; 2],
    /// 1 while the player never folded.
    pub survival: [u8; 2],
}

/// The showdown total order over players for a final-phase signal:
/// `i ⪯ j` iff player j's best hand is at least as strong as player i's.
#[derive(Clone, Debug)]
pub struct ShowdownOrder {
    pub ranks: [HandRank; 2],
}

impl ShowdownOrder {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.ranks[i] <= self.ranks[j]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NextActor {
    Chance,
    Player(u8),
    Done,
}

/// State derived by replaying a history.
#[derive(Clone, Debug)]
pub struct GameState {
    pub bet: BetState,
    pub next: NextActor,
    /// Set when the history is terminal.
    pub payoff: Option<TerminalPayoff>,
}

pub enum StepResult {
    Ongoing(History),
    Terminal(History, TerminalPayoff),
}

pub fn showdown_order(theta: &Signal, game: &GameSpec) -> Result<ShowdownOrder> {
    if theta.phase() != game.phases() {
        return Err(SoogError::Phase(format!(
            "showdown order needs a final-phase signal, got phase {}",
            theta.phase()
        )));
    }
    let board: Vec<Card> = theta.board().iter().flatten().copied().collect();
    let r0 = evaluate_hand(theta.holes(0, game.holes), &board, game)?;
    let r1 = evaluate_hand(theta.holes(1, game.holes), &board, game)?;
    Ok(ShowdownOrder { ranks: [r0, r1] })
}

/// Replays a history from the root, validating every action.
pub fn state_of(h: &History, game: &GameSpec) -> Result<GameState> {
    let mut bet = BetState::opening(game);
    let mut next = NextActor::Chance;
    let mut payoff = None;
    let mut dealt: Vec<Card> = Vec::new();
    let mut phase_dealt = 0usize; // number of deals applied so far

    for (pos, a) in h.actions.iter().enumerate() {
        match (&a.payload, next) {
            (Payload::Deal(cards), NextActor::Chance) => {
                let expected = if phase_dealt == 0 {
                    2 * game.holes
                } else {
                    game.board_per_phase[phase_dealt - 1]
                };
                if cards.len() != expected {
                    return Err(SoogError::Rule(format!(
                        "deal {} has {} cards, expected {expected}",
                        phase_dealt + 1,
                        cards.len()
                    )));
                }
                for &c in cards {
                    if !game.deck.contains(c) || dealt.contains(&c) {
                        return Err(SoogError::Rule(format!("card {c} unavailable")));
                    }
                    dealt.push(c);
                }
                if phase_dealt > 0 {
                    bet = bet.next_phase();
                }
                phase_dealt += 1;
                next = NextActor::Player(0);
            }
            (Payload::Token(t), NextActor::Player(p)) => {
                if bet.to_act != p {
                    return Err(SoogError::Rule(format!("player {p} acted out of turn")));
                }
                match bet.step(*t, game)? {
                    BetStep::Continue(s) => {
                        bet = s;
                        next = NextActor::Player(s.to_act);
                    }
                    BetStep::PhaseEnd(s) => {
                        bet = s;
                        if s.phase == game.phases() {
                            let order = showdown_order(&h_signal_prefix(h, phase_dealt), game)?;
                            payoff = Some(showdown_payoff(&order, s.committed));
                            next = NextActor::Done;
                        } else {
                            next = NextActor::Chance;
                        }
                    }
                    BetStep::Fold { folder, committed } => {
                        payoff = Some(fold_payoff(folder, committed));
                        next = NextActor::Done;
                    }
                }
            }
            _ => {
                return Err(SoogError::Rule(format!(
                    "action {a:?} does not match expected actor {next:?}"
                )))
            }
        }
        if payoff.is_some() && pos + 1 != h.actions.len() {
            return Err(SoogError::Rule("actions after terminal".into()));
        }
    }
    Ok(GameState { bet, next, payoff })
}

fn h_signal_prefix(h: &History, deals: usize) -> Signal {
    let mut sig = h.signal();
    sig.deals.truncate(deals);
    sig
}

pub fn fold_payoff(folder: u8, committed: [u32; 2]) -> TerminalPayoff {
    let f = folder as usize;
    let w = 1 - f;
    let mut utilities = [0i64; 2];
    utilities[f] = -(committed[f] as i64);
    utilities[w] = committed[f] as i64;
    let mut survival = [1u8; 2];
    survival[f] = 0;
    TerminalPayoff {
        utilities,
        survival,
    }
}

pub fn showdown_payoff(order: &ShowdownOrder, committed: [u32; 2]) -> TerminalPayoff {
    debug_assert_eq!(committed[0], committed[1]);
    let c = committed[0] as i64;
    let utilities = match order.ranks[0].cmp(&order.ranks[1]) {
        std::cmp::Ordering::Greater => [c, -c],
        std::cmp::Ordering::Less => [-c, c],
        std::cmp::Ordering::Equal => [0, 0],
    };
    TerminalPayoff {
        utilities,
        survival: [1, 1],
    }
}

/// Appends one legal action, returning the extended history or the terminal
/// payoff.
pub fn game_step(h: &History, a: Action, game: &GameSpec) -> Result<StepResult> {
    let mut next = h.clone();
    next.actions.push(a);
    let state = state_of(&next, game)?;
    next.phase = phase_of(&next, &state);
    match state.payoff {
        Some(p) => Ok(StepResult::Terminal(next, p)),
        None => Ok(StepResult::Ongoing(next)),
    }
}

/// Phase counts chance histories along the prefix chain: the number of deals
/// so far, plus one if chance is next to act (the empty history counts as a
/// chance history).
fn phase_of(h: &History, state: &GameState) -> usize {
    let deals = h.actions.iter().filter(|a| a.is_chance()).count();
    match state.next {
        NextActor::Chance => deals + 1,
        _ => deals,
    }
}

/// All legal actions at `h`: either every possible deal or the legal betting
/// tokens.
pub fn legal_actions(h: &History, game: &GameSpec) -> Result<Vec<Action>> {
    let state = state_of(h, game)?;
    match state.next {
        NextActor::Done => Ok(Vec::new()),
        NextActor::Player(p) => Ok(state
            .bet
            .legal_tokens(game)
            .into_iter()
            .map(|t| Action::token(p, t))
            .collect()),
        NextActor::Chance => {
            let used: Vec<Card> = h.signal().all_cards();
            let avail: Vec<Card> = game.deck.cards().filter(|c| !used.contains(c)).collect();
            let deals = h.actions.iter().filter(|a| a.is_chance()).count();
            if deals == 0 {
                let mut out = Vec::new();
                for h1 in combinations(&avail, game.holes) {
                    let rest: Vec<Card> =
                        avail.iter().filter(|c| !h1.contains(c)).copied().collect();
                    for h2 in combinations(&rest, game.holes) {
                        let mut joint = h1.clone();
                        joint.extend_from_slice(&h2);
                        out.push(Action::deal(joint));
                    }
                }
                Ok(out)
            } else {
                let k = game.board_per_phase[deals - 1];
                Ok(combinations(&avail, k).into_iter().map(Action::deal).collect())
            }
        }
    }
}

/// k-combinations in lexicographic order, each sorted ascending.
pub fn combinations(items: &[Card], k: usize) -> Vec<Vec<Card>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[Card], k: usize, start: usize, cur: &mut Vec<Card>, out: &mut Vec<Vec<Card>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}
