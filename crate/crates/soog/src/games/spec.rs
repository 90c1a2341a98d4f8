//! Game definitions and the string-id registry.

use crate::cards::Deck;
use crate::error::{Result, SoogError};

/// Which hand-evaluation rule the game uses at showdown.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvalRule {
    /// Leduc: pair with the board beats high card; otherwise the hole card
    /// rank decides.
    LeducPair,
    /// Numeral211: best 3-card hand out of the 4 available cards.
    BestThreeOfFour,
    /// Standard poker: best 5-card hand out of the 7 available cards.
    BestFiveOfSeven,
}

/// The deck automorphism group defining lossless isomorphism. Games with
/// flushes only admit global suit permutations; fully suit-blind evaluation
/// (Leduc) additionally admits independent suit swaps per rank.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsoGroup {
    GlobalSuit,
    PerRankSuit,
}

#[derive(Clone, Debug)]
pub struct GameSpec {
    pub id: String,
    pub deck: Deck,
    /// Hole cards per player.
    pub holes: usize,
    /// Board cards revealed at the start of phases 2..=Γ.
    pub board_per_phase: Vec<usize>,
    pub ante: u32,
    /// Bet/raise size per phase.
    pub bet_size: Vec<u32>,
    /// Maximum bets-plus-raises per phase.
    pub max_raises: Vec<u32>,
    pub eval: EvalRule,
    pub iso: IsoGroup,
    /// Highest phase for which exhaustive canonical enumeration is feasible.
    pub enumerable_phases: usize,
}

impl GameSpec {
    /// Total number of phases Γ.
    pub fn phases(&self) -> usize {
        self.board_per_phase.len() + 1
    }

    /// Board cards dealt before phase `r` starts (cumulative sizes).
    pub fn board_sizes_at(&self, phase: usize) -> &[usize] {
        &self.board_per_phase[..phase - 1]
    }

    pub fn leduc() -> Self {
        GameSpec {
            id: "leduc".into(),
            deck: Deck::new("JQK", "hs"),
            holes: 1,
            board_per_phase: vec![1],
            ante: 1,
            bet_size: vec![2, 2],
            max_raises: vec![2, 2],
            eval: EvalRule::LeducPair,
            iso: IsoGroup::PerRankSuit,
            enumerable_phases: 2,
        }
    }

    pub fn numeral211() -> Self {
        GameSpec {
            id: "numeral211".into(),
            deck: Deck::new("23456789TA", "cdhs"),
            holes: 2,
            board_per_phase: vec![1, 1],
            ante: 5,
            bet_size: vec![10, 20, 20],
            max_raises: vec![4, 4, 4],
            eval: EvalRule::BestThreeOfFour,
            iso: IsoGroup::GlobalSuit,
            enumerable_phases: 3,
        }
    }

    /// The HULH card/deck layer: deal structure and evaluator only. The full
    /// betting tree is out of scope; nominal limit sizes are supplied so the
    /// spec is well-formed.
    pub fn hulh_cards() -> Self {
        GameSpec {
            id: "hulh-cards".into(),
            deck: Deck::new("23456789TJQKA", "cdhs"),
            holes: 2,
            board_per_phase: vec![3, 1, 1],
            ante: 1,
            bet_size: vec![2, 2, 4, 4],
            max_raises: vec![4, 4, 4, 4],
            eval: EvalRule::BestFiveOfSeven,
            iso: IsoGroup::GlobalSuit,
            enumerable_phases: 1,
        }
    }

    pub fn by_id(id: &str) -> Result<GameSpec> {
        match id {
            "leduc" => Ok(Self::leduc()),
            "numeral211" => Ok(Self::numeral211()),
            "hulh-cards" => Ok(Self::hulh_cards()),
            _ => Err(SoogError::Domain(format!("unknown game id {id:?}"))),
        }
    }

    /// Applies flat `key=value` overrides. Unknown keys are errors.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_kv(text)? {
            match key.as_str() {
                "holes" => self.holes = parse_num(&key, &value)? as usize,
                "ante" => self.ante = parse_num(&key, &value)?,
                "bet.phase1" => self.bet_size[0] = parse_num(&key, &value)?,
                "bet.postflop" => {
                    let v = parse_num(&key, &value)?;
                    for b in self.bet_size.iter_mut().skip(1) {
                        *b = v;
                    }
                }
                "max_raises" => {
                    let v = parse_num(&key, &value)?;
                    for m in self.max_raises.iter_mut() {
                        *m = v;
                    }
                }
                _ => {
                    return Err(SoogError::Parameter(format!(
                        "unknown game config key {key:?}"
                    )))
                }
            }
        }
        let dealt = 2 * self.holes + self.board_per_phase.iter().sum::<usize>();
        if dealt > self.deck.size() {
            return Err(SoogError::Parameter(format!(
                "{} cards dealt exceeds deck size {}",
                dealt,
                self.deck.size()
            )));
        }
        Ok(())
    }

    /// The deck automorphism group as card-id permutation arrays:
    /// `map[card.id()]` is the image card id.
    pub fn iso_maps(&self) -> Vec<Vec<u8>> {
        let nr = self.deck.n_ranks as usize;
        let ns = self.deck.n_suits as usize;
        let suit_perms = permutations(ns);
        match self.iso {
            IsoGroup::GlobalSuit => suit_perms
                .iter()
                .map(|perm| {
                    (0..nr * ns)
                        .map(|c| (c / ns * ns + perm[c % ns]) as u8)
                        .collect()
                })
                .collect(),
            IsoGroup::PerRankSuit => {
                // Cartesian product of one suit permutation per rank.
                let mut maps: Vec<Vec<u8>> = vec![Vec::new()];
                for _rank in 0..nr {
                    let mut next = Vec::with_capacity(maps.len() * suit_perms.len());
                    for prefix in &maps {
                        for perm in &suit_perms {
                            let mut m = prefix.clone();
                            let base = m.len();
                            m.extend(perm.iter().map(|&s| (base + s) as u8));
                            next.push(m);
                        }
                    }
                    maps = next;
                    assert!(maps.len() <= 1 << 20, "per-rank group too large");
                }
                maps
            }
        }
    }
}

/// All permutations of 0..n in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..remaining.len() {
            let v = remaining.remove(i);
            prefix.push(v);
            rec(remaining, prefix, out);
            prefix.pop();
            remaining.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Parses flat `key=value` text: one pair per line, `#` comments, blank lines
/// ignored.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            SoogError::Parameter(format!("line {}: expected key=value", lineno + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num(key: &str, value: &str) -> Result<u32> {
    value
        .parse()
        .map_err(|_| SoogError::Parameter(format!("key {key:?}: bad number {value:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_knows_all_games() {
        for id in ["leduc", "numeral211", "hulh-cards"] {
            assert_eq!(GameSpec::by_id(id).unwrap().id, id);
        }
        assert!(GameSpec::by_id("omaha").is_err());
    }

    #[test]
    fn iso_group_orders() {
        assert_eq!(GameSpec::leduc().iso_maps().len(), 8);
        assert_eq!(GameSpec::numeral211().iso_maps().len(), 24);
        assert_eq!(GameSpec::hulh_cards().iso_maps().len(), 24);
    }

    #[test]
    fn iso_maps_are_permutations_preserving_rank() {
        for game in [GameSpec::leduc(), GameSpec::numeral211()] {
            for m in game.iso_maps() {
                let mut seen = vec![false; game.deck.size()];
                for (c, &img) in m.iter().enumerate() {
                    assert!(!seen[img as usize]);
                    seen[img as usize] = true;
                    assert_eq!(c / game.deck.n_suits as usize, (img / game.deck.n_suits) as usize);
                }
            }
        }
    }

    #[test]
    fn config_overrides_apply() {
        let mut g = GameSpec::numeral211();
        g.apply_config("holes=2\nante=5\nbet.phase1=10\nbet.postflop=20\nmax_raises=4\n")
            .unwrap();
        assert_eq!(g.bet_size, vec![10, 20, 20]);
        assert!(g.apply_config("stack=200").is_err());
        assert!(g.apply_config("holes=30").is_err());
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(2), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(permutations(4).len(), 24);
    }
}
