//! The core game model: histories, traces, signals and observations.
//!
//! Histories interleave chance actions (card deals) with player actions
//! (betting tokens). The trace operators project a history onto a subset of
//! actors, leaving owner-tagged wildcards in the other positions, and
//! `splice` recombines two complementary traces back into the history.

use crate::cards::Card;
use crate::error::{Result, SoogError};

/// Who takes an action.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Actor {
    Chance,
    Player(u8),
}

/// Betting tokens shared by all games. `Bet` and `Raise` are distinct tokens
/// even when the chip amounts coincide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BetToken {
    Fold,
    Check,
    Call,
    Bet,
    Raise,
}

impl BetToken {
    pub fn letter(self) -> char {
        match self {
            BetToken::Fold => 'f',
            BetToken::Check => 'k',
            BetToken::Call => 'c',
            BetToken::Bet => 'b',
            BetToken::Raise => 'r',
        }
    }
}

/// One phase's deal is a single composite chance action (e.g. both players'
/// hole cards together at phase 1).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Payload {
    Deal(Vec<Card>),
    Token(BetToken),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Action {
    pub actor: Actor,
    pub payload: Payload,
}

impl Action {
    pub fn deal(cards: Vec<Card>) -> Self {
        Action {
            actor: Actor::Chance,
            payload: Payload::Deal(cards),
        }
    }

    pub fn token(player: u8, t: BetToken) -> Self {
        Action {
            actor: Actor::Player(player),
            payload: Payload::Token(t),
        }
    }

    pub fn is_chance(&self) -> bool {
        self.actor == Actor::Chance
    }
}

/// An action sequence together with its phase. The phase counts chance
/// histories along the prefix chain: the empty history has phase 1, and the
/// phase steps up as soon as a betting round closes (i.e. when chance is next
/// to act). The game engine maintains the field on append.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct History {
    pub actions: Vec<Action>,
    pub phase: usize,
}

impl History {
    pub fn empty() -> Self {
        History {
            actions: Vec::new(),
            phase: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// The chance actions of this history, i.e. the signal revealed so far.
    pub fn signal(&self) -> Signal {
        Signal {
            deals: self
                .actions
                .iter()
                .filter_map(|a| match &a.payload {
                    Payload::Deal(cs) => Some(cs.clone()),
                    _ => None,
                })
                .collect(),
        }
    }
}

/// Selects which actors' actions a trace keeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Keep {
    Only(Actor),
    AllExcept(Actor),
    Chance,
    NonChance,
}

impl Keep {
    pub fn keeps(self, actor: Actor) -> bool {
        match self {
            Keep::Only(a) => actor == a,
            Keep::AllExcept(a) => actor != a,
            Keep::Chance => actor == Actor::Chance,
            Keep::NonChance => actor != Actor::Chance,
        }
    }

    pub fn complement(self) -> Keep {
        match self {
            Keep::Only(a) => Keep::AllExcept(a),
            Keep::AllExcept(a) => Keep::Only(a),
            Keep::Chance => Keep::NonChance,
            Keep::NonChance => Keep::Chance,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Slot {
    Concrete(Action),
    /// A removed action, tagged with the actor it belonged to.
    Wildcard(Actor),
}

/// A position-indexed projection of a history.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub slots: Vec<Slot>,
    pub phase: usize,
}

/// Replaces the non-selected actors' actions with their wildcards.
pub fn extract_trace(h: &History, keep: Keep) -> Trace {
    Trace {
        slots: h
            .actions
            .iter()
            .map(|a| {
                if keep.keeps(a.actor) {
                    Slot::Concrete(a.clone())
                } else {
                    Slot::Wildcard(a.actor)
                }
            })
            .collect(),
        phase: h.phase,
    }
}

/// The wildcard-free form of `extract_trace`: just the kept actions in order.
pub fn extract_sequence(h: &History, keep: Keep) -> Vec<Action> {
    h.actions
        .iter()
        .filter(|a| keep.keeps(a.actor))
        .cloned()
        .collect()
}

/// Recombines two complementary traces, taking the concrete action at each
/// position. Errors unless at every position exactly one side is concrete and
/// the wildcard's owner matches the concrete action's actor.
pub fn splice(t1: &Trace, t2: &Trace) -> Result<History> {
    if t1.slots.len() != t2.slots.len() {
        return Err(SoogError::Complementarity(format!(
            "trace lengths differ: {} vs {}",
            t1.slots.len(),
            t2.slots.len()
        )));
    }
    if t1.phase != t2.phase {
        return Err(SoogError::Complementarity(format!(
            "trace phases differ: {} vs {}",
            t1.phase, t2.phase
        )));
    }
    let mut actions = Vec::with_capacity(t1.slots.len());
    for (pos, (s1, s2)) in t1.slots.iter().zip(&t2.slots).enumerate() {
        let a = match (s1, s2) {
            (Slot::Concrete(a), Slot::Wildcard(w)) | (Slot::Wildcard(w), Slot::Concrete(a)) => {
                if a.actor != *w {
                    return Err(SoogError::Complementarity(format!(
                        "wildcard owner {w:?} does not match actor {:?} at position {pos}",
                        a.actor
                    )));
                }
                a.clone()
            }
            (Slot::Concrete(_), Slot::Concrete(_)) => {
                return Err(SoogError::Complementarity(format!(
                    "both traces concrete at position {pos}"
                )))
            }
            (Slot::Wildcard(_), Slot::Wildcard(_)) => {
                return Err(SoogError::Complementarity(format!(
                    "both traces wildcard at position {pos}"
                )))
            }
        };
        actions.push(a);
    }
    Ok(History {
        actions,
        phase: t1.phase,
    })
}

/// A chance action sequence: the cards dealt so far, one composite deal per
/// phase. `deals[0]` is the joint hole deal (player 1's holes then player
/// 2's); later entries are board deals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Signal {
    pub deals: Vec<Vec<Card>>,
}

impl Signal {
    pub fn phase(&self) -> usize {
        self.deals.len()
    }

    pub fn all_cards(&self) -> Vec<Card> {
        self.deals.iter().flatten().copied().collect()
    }

    /// Player `p`'s hole cards (holes-per-player taken from the joint deal).
    pub fn holes(&self, p: u8, holes_per_player: usize) -> &[Card] {
        let start = p as usize * holes_per_player;
        &self.deals[0][start..start + holes_per_player]
    }

    /// Board deals (everything after the hole deal).
    pub fn board(&self) -> &[Vec<Card>] {
        &self.deals[1..]
    }
}

/// One player's view of a signal: own cards plus the public board.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ObservationInfoset {
    pub owner: u8,
    pub own: Vec<Card>,
    pub board: Vec<Vec<Card>>,
    pub phase: usize,
}

impl ObservationInfoset {
    pub fn from_signal(theta: &Signal, owner: u8, holes_per_player: usize) -> Self {
        ObservationInfoset {
            owner,
            own: theta.holes(owner, holes_per_player).to_vec(),
            board: theta.board().to_vec(),
            phase: theta.phase(),
        }
    }

    pub fn all_cards(&self) -> Vec<Card> {
        self.own
            .iter()
            .chain(self.board.iter().flatten())
            .copied()
            .collect()
    }
}

/// Dense key for a suit-canonicalized observation of one phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalIndex {
    pub phase: usize,
    pub index: u32,
}
