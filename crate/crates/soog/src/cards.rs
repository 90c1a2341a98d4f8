//! Cards and decks.
//!
//! A card is a dense id `rank * n_suits + suit` into the game's deck, so the
//! same `Card` type serves the 6-card Leduc deck, the 40-card Numeral211 deck
//! and the standard 52-card deck. Rank 0 is the lowest rank of the deck.

use std::fmt;

use crate::error::{Result, SoogError};

/// A card identified by its dense index within a particular deck.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Card(pub u8);

impl Card {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

/// Deck shape plus display characters.
#[derive(Clone, Debug)]
pub struct Deck {
    pub n_ranks: u8,
    pub n_suits: u8,
    /// Rank characters from lowest to highest.
    pub rank_chars: Vec<char>,
    /// Suit characters (c, d, h, s order for 4-suit decks).
    pub suit_chars: Vec<char>,
}

impl Deck {
    pub fn new(rank_chars: &str, suit_chars: &str) -> Self {
        let rank_chars: Vec<char> = rank_chars.chars().collect();
        let suit_chars: Vec<char> = suit_chars.chars().collect();
        Deck {
            n_ranks: rank_chars.len() as u8,
            n_suits: suit_chars.len() as u8,
            rank_chars,
            suit_chars,
        }
    }

    pub fn size(&self) -> usize {
        self.n_ranks as usize * self.n_suits as usize
    }

    pub fn card(&self, rank: u8, suit: u8) -> Card {
        debug_assert!(rank < self.n_ranks && suit < self.n_suits);
        Card(rank * self.n_suits + suit)
    }

    pub fn rank(&self, c: Card) -> u8 {
        c.0 / self.n_suits
    }

    pub fn suit(&self, c: Card) -> u8 {
        c.0 % self.n_suits
    }

    pub fn contains(&self, c: Card) -> bool {
        c.id() < self.size()
    }

    pub fn cards(&self) -> impl Iterator<Item = Card> + '_ {
        (0..self.size() as u8).map(Card)
    }

    pub fn show(&self, c: Card) -> String {
        let mut s = String::with_capacity(2);
        s.push(self.rank_chars[self.rank(c) as usize]);
        s.push(self.suit_chars[self.suit(c) as usize]);
        s
    }

    pub fn parse_card(&self, s: &str) -> Result<Card> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 2 {
            return Err(SoogError::Domain(format!("bad card literal {s:?}")));
        }
        let rank = self
            .rank_chars
            .iter()
            .position(|&r| r == chars[0])
            .ok_or_else(|| SoogError::Domain(format!("unknown rank in {s:?}")))?;
        let suit = self
            .suit_chars
            .iter()
            .position(|&x| x == chars[1])
            .ok_or_else(|| SoogError::Domain(format!("unknown suit in {s:?}")))?;
        Ok(self.card(rank as u8, suit as u8))
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn card_round_trips_through_text() {
        let deck = Deck::new("23456789TA", "cdhs");
        assert_eq!(deck.size(), 40);
        for c in deck.cards() {
            let s = deck.show(c);
            assert_eq!(deck.parse_card(&s).unwrap(), c);
        }
        let ts = deck.parse_card("Ts").unwrap();
        assert_eq!(deck.rank(ts), 8);
        assert_eq!(deck.suit(ts), 3);
    }

    #[test]
    fn leduc_deck_shape() {
        let deck = Deck::new("JQK", "hs");
        assert_eq!(deck.size(), 6);
        assert_eq!(deck.show(Card(0)), "Jh");
        assert_eq!(deck.show(Card(5)), "Ks");
    }
}
