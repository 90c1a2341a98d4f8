//! Hand evaluation for all three games.
//!
//! Ranks are compared as (category, tiebreak) pairs; tiebreak lists have a
//! fixed length per category so lexicographic comparison is well defined.

use crate::cards::{Card, Deck};
use crate::error::{Result, SoogError};
use crate::games::spec::{EvalRule, GameSpec};

/// A comparable hand strength. Higher is better.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HandRank {
    pub category: u8,
    pub tiebreak: Vec<u8>,
}

impl HandRank {
    /// Packs the rank into a single integer whose numeric order matches the
    /// struct order (tiebreak entries fit a nibble in every game; at most 5).
    pub fn key(&self) -> u32 {
        debug_assert!(self.tiebreak.len() <= 5 && self.tiebreak.iter().all(|&t| t < 16));
        let mut k = (self.category as u32) << 20;
        for (i, &t) in self.tiebreak.iter().enumerate() {
            k |= (t as u32) << (16 - 4 * i);
        }
        k
    }
}

/// Leduc categories.
pub mod leduc_cat {
    pub const HIGH_CARD: u8 = 0;
    pub const PAIR: u8 = 1;
}

/// Numeral211 categories, ordered per its published ranking: straight flush
/// beats three of a kind beats straight beats flush beats pair beats high
/// card.
pub mod n211_cat {
    pub const HIGH_CARD: u8 = 0;
    pub const PAIR: u8 = 1;
    pub const FLUSH: u8 = 2;
    pub const STRAIGHT: u8 = 3;
    pub const THREE_OF_A_KIND: u8 = 4;
    pub const STRAIGHT_FLUSH: u8 = 5;
}

/// Standard poker categories (HULH).
pub mod hulh_cat {
    pub const HIGH_CARD: u8 = 0;
    pub const PAIR: u8 = 1;
    pub const TWO_PAIR: u8 = 2;
    pub const THREE_OF_A_KIND: u8 = 3;
    pub const STRAIGHT: u8 = 4;
    pub const FLUSH: u8 = 5;
    pub const FULL_HOUSE: u8 = 6;
    pub const FOUR_OF_A_KIND: u8 = 7;
    pub const STRAIGHT_FLUSH: u8 = 8;
}

/// Evaluates a player's best hand from their own cards plus the board.
pub fn evaluate_hand(own: &[Card], board: &[Card], game: &GameSpec) -> Result<HandRank> {
    let deck = &game.deck;
    check_cards(own, board, deck)?;
    match game.eval {
        EvalRule::LeducPair => {
            if own.len() != 1 || board.len() != 1 {
                return Err(SoogError::Domain(
                    "Leduc evaluation needs 1 hole card and 1 board card".into(),
                ));
            }
            Ok(leduc_rank(deck.rank(own[0]), deck.rank(board[0])))
        }
        EvalRule::BestThreeOfFour => {
            let cards: Vec<Card> = own.iter().chain(board).copied().collect();
            if cards.len() != 4 {
                return Err(SoogError::Domain(format!(
                    "Numeral211 evaluation needs 4 cards, got {}",
                    cards.len()
                )));
            }
            Ok(best_subset_rank(&cards, 3, deck, three_card_rank))
        }
        EvalRule::BestFiveOfSeven => {
            let cards: Vec<Card> = own.iter().chain(board).copied().collect();
            if cards.len() != 7 {
                return Err(SoogError::Domain(format!(
                    "evaluation needs 7 cards, got {}",
                    cards.len()
                )));
            }
            Ok(best_subset_rank(&cards, 5, deck, five_card_rank))
        }
    }
}

fn check_cards(own: &[Card], board: &[Card], deck: &Deck) -> Result<()> {
    let mut seen = vec![false; deck.size()];
    for &c in own.iter().chain(board) {
        if !deck.contains(c) {
            return Err(SoogError::Domain(format!("card {c} outside deck")));
        }
        if seen[c.id()] {
            return Err(SoogError::Domain(format!("duplicate card {c}")));
        }
        seen[c.id()] = true;
    }
    Ok(())
}

pub fn leduc_rank(own_rank: u8, board_rank: u8) -> HandRank {
    if own_rank == board_rank {
        HandRank {
            category: leduc_cat::PAIR,
            tiebreak: vec![own_rank],
        }
    } else {
        HandRank {
            category: leduc_cat::HIGH_CARD,
            tiebreak: vec![own_rank],
        }
    }
}

fn best_subset_rank(
    cards: &[Card],
    k: usize,
    deck: &Deck,
    rank_fn: fn(&[u8], &[u8]) -> HandRank,
) -> HandRank {
    let mut best: Option<HandRank> = None;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let ranks: Vec<u8> = idx.iter().map(|&i| deck.rank(cards[i])).collect();
        let suits: Vec<u8> = idx.iter().map(|&i| deck.suit(cards[i])).collect();
        let r = rank_fn(&ranks, &suits);
        if best.as_ref().map_or(true, |b| r > *b) {
            best = Some(r);
        }
        // Next k-combination of indices.
        let n = cards.len();
        let mut i = k;
        loop {
            if i == 0 {
                return best.unwrap();
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Ranks a 3-card Numeral211 hand. Rank indices are positions in the ladder
/// 2..9,T,A — T and A are consecutive because J/Q/K are absent — with no
/// wraparound straight.
pub fn three_card_rank(ranks: &[u8], suits: &[u8]) -> HandRank {
    let mut r = ranks.to_vec();
    r.sort_unstable_by(|a, b| b.cmp(a));
    let flush = suits[0] == suits[1] && suits[1] == suits[2];
    let straight = r[0] == r[1] + 1 && r[1] == r[2] + 1;
    if straight && flush {
        return HandRank {
            category: n211_cat::STRAIGHT_FLUSH,
            tiebreak: vec![r[0]],
        };
    }
    if r[0] == r[2] {
        return HandRank {
            category: n211_cat::THREE_OF_A_KIND,
            tiebreak: vec![r[0]],
        };
    }
    if straight {
        return HandRank {
            category: n211_cat::STRAIGHT,
            tiebreak: vec![r[0]],
        };
    }
    if flush {
        return HandRank {
            category: n211_cat::FLUSH,
            tiebreak: r,
        };
    }
    if r[0] == r[1] || r[1] == r[2] {
        let (pair, kicker) = if r[0] == r[1] { (r[0], r[2]) } else { (r[1], r[0]) };
        return HandRank {
            category: n211_cat::PAIR,
            tiebreak: vec![pair, kicker],
        };
    }
    HandRank {
        category: n211_cat::HIGH_CARD,
        tiebreak: r,
    }
}

/// Ranks a 5-card standard poker hand (rank 12 is the ace; the wheel
/// A-2-3-4-5 is a 5-high straight).
pub fn five_card_rank(ranks: &[u8], suits: &[u8]) -> HandRank {
    let mut counts = [0u8; 13];
    for &r in ranks {
        counts[r as usize] += 1;
    }
    // Rank values sorted by (multiplicity, rank) descending.
    let mut groups: Vec<(u8, u8)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(r, &c)| (c, r as u8))
        .collect();
    groups.sort_unstable_by(|a, b| b.cmp(a));
    let flush = suits.iter().all(|&s| s == suits[0]);
    let straight_high = if groups.len() == 5 {
        let mut r: Vec<u8> = ranks.to_vec();
        r.sort_unstable();
        if r[4] == r[0] + 4 {
            Some(r[4])
        } else if r == [0, 1, 2, 3, 12] {
            Some(3) // wheel: five-high
        } else {
            None
        }
    } else {
        None
    };
    let tiebreak: Vec<u8> = groups
        .iter()
        .flat_map(|&(c, r)| std::iter::repeat(r).take(c as usize))
        .collect();
    let shape: Vec<u8> = groups.iter().map(|&(c, _)| c).collect();
    match (flush, straight_high, shape.as_slice()) {
        (true, Some(h), _) => HandRank {
            category: hulh_cat::STRAIGHT_FLUSH,
            tiebreak: vec![h],
        },
        (_, _, [4, 1]) => HandRank {
            category: hulh_cat::FOUR_OF_A_KIND,
            tiebreak,
        },
        (_, _, [3, 2]) => HandRank {
            category: hulh_cat::FULL_HOUSE,
            tiebreak,
        },
        (true, None, _) => HandRank {
            category: hulh_cat::FLUSH,
            tiebreak,
        },
        (false, Some(h), _) => HandRank {
            category: hulh_cat::STRAIGHT,
            tiebreak: vec![h],
        },
        (_, _, [3, 1, 1]) => HandRank {
            category: hulh_cat::THREE_OF_A_KIND,
            tiebreak,
        },
        (_, _, [2, 2, 1]) => HandRank {
            category: hulh_cat::TWO_PAIR,
            tiebreak,
        },
        (_, _, [2, 1, 1, 1]) => HandRank {
            category: hulh_cat::PAIR,
            tiebreak,
        },
        _ => HandRank {
            category: hulh_cat::HIGH_CARD,
            tiebreak,
        },
    }
}
