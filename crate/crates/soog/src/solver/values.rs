//! Terminal value vectors with card-removal corrections.
//!
//! Given opponent reach vectors over the valid hands of a board node, these
//! helpers compute, for every hand, the reach-weighted value against all
//! *disjoint* opponent hands in O(hands + deck) by inclusion-exclusion over
//! shared cards (hole sizes 1 and 2 are supported). `cards` is the board
//! node's flat card-id array (stride `holes`).

use crate::solver::public::ShowdownTable;

/// For each valid hand `v`: the sum of `reach` over valid hands sharing no
/// card with `v`.
pub fn disjoint_reach(cards: &[u8], holes: usize, reach: &[f64], deck_size: usize) -> Vec<f64> {
    let n = reach.len();
    let mut per_card = vec![0.0f64; deck_size];
    let mut total = 0.0f64;
    for v in 0..n {
        total += reach[v];
        for &c in &cards[v * holes..(v + 1) * holes] {
            per_card[c as usize] += reach[v];
        }
    }
    (0..n)
        .map(|v| match holes {
            1 => total - per_card[cards[v] as usize],
            2 => {
                total - per_card[cards[2 * v] as usize] - per_card[cards[2 * v + 1] as usize]
                    + reach[v]
            }
            _ => unreachable!("hole sizes above 2 are not enumerated"),
        })
        .collect()
}

/// [`disjoint_reach`] for both players in one pass: returns
/// `(values against r1, values against r0)`.
pub fn disjoint_reach_pair(
    cards: &[u8],
    holes: usize,
    r0: &[f64],
    r1: &[f64],
    deck_size: usize,
) -> (Vec<f64>, Vec<f64>) {
    (
        disjoint_reach(cards, holes, r1, deck_size),
        disjoint_reach(cards, holes, r0, deck_size),
    )
}

/// Showdown values: for each valid hand, `pot * (beaten - beating)` where
/// `beaten`/`beating` are reach sums over disjoint opponent hands the hand
/// beats / loses to. A single sweep over the strength-sorted order maintains
/// running totals below the current tie group.
pub fn showdown_values(
    table: &ShowdownTable,
    cards: &[u8],
    holes: usize,
    reach_opp: &[f64],
    deck_size: usize,
    pot: f64,
) -> Vec<f64> {
    let (out, _) = showdown_sweep(table, cards, holes, reach_opp, None, deck_size, pot);
    out
}

/// [`showdown_values`] for both players in one shared sweep: returns
/// `(values against r1, values against r0)`.
pub fn showdown_values_pair(
    table: &ShowdownTable,
    cards: &[u8],
    holes: usize,
    r0: &[f64],
    r1: &[f64],
    deck_size: usize,
    pot: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (u0, u1) = showdown_sweep(table, cards, holes, r1, Some(r0), deck_size, pot);
    (u0, u1.unwrap())
}

#[allow(clippy::type_complexity)]
fn showdown_sweep(
    table: &ShowdownTable,
    cards: &[u8],
    holes: usize,
    ra: &[f64],
    rb: Option<&[f64]>,
    deck_size: usize,
    pot: f64,
) -> (Vec<f64>, Option<Vec<f64>>) {
    let n = ra.len();
    let mut out_a = vec![0.0f64; n];
    let mut out_b = rb.map(|_| vec![0.0f64; n]);
    // Per-card and total sums: all hands, hands strictly below the current
    // tie group, and the current tie group (cleared incrementally).
    let mut acc_a = Sweep::new(ra, cards, holes, deck_size);
    let mut acc_b = rb.map(|r| Sweep::new(r, cards, holes, deck_size));
    for bounds in table.group_starts.windows(2) {
        let (start, end) = (bounds[0] as usize, bounds[1] as usize);
        let group = &table.order[start..end];
        acc_a.enter_group(group, cards, holes);
        if let Some(b) = acc_b.as_mut() {
            b.enter_group(group, cards, holes);
        }
        for &p in group {
            let v = p as usize;
            out_a[v] = pot * acc_a.net(v, cards, holes);
            if let (Some(b), Some(out)) = (acc_b.as_ref(), out_b.as_mut()) {
                out[v] = pot * b.net(v, cards, holes);
            }
        }
        acc_a.leave_group(group, cards, holes);
        if let Some(b) = acc_b.as_mut() {
            b.leave_group(group, cards, holes);
        }
    }
    (out_a, out_b)
}

struct Sweep<'a> {
    reach: &'a [f64],
    all_card: Vec<f64>,
    all_total: f64,
    lo_card: Vec<f64>,
    lo_total: f64,
    g_card: Vec<f64>,
    g_total: f64,
}

impl<'a> Sweep<'a> {
    fn new(reach: &'a [f64], cards: &[u8], holes: usize, deck_size: usize) -> Sweep<'a> {
        let mut all_card = vec![0.0f64; deck_size];
        let mut all_total = 0.0f64;
        for (v, &r) in reach.iter().enumerate() {
            all_total += r;
            for &c in &cards[v * holes..(v + 1) * holes] {
                all_card[c as usize] += r;
            }
        }
        Sweep {
            reach,
            all_card,
            all_total,
            lo_card: vec![0.0f64; deck_size],
            lo_total: 0.0,
            g_card: vec![0.0f64; deck_size],
            g_total: 0.0,
        }
    }

    fn enter_group(&mut self, group: &[u32], cards: &[u8], holes: usize) {
        self.g_total = 0.0;
        for &p in group {
            let v = p as usize;
            self.g_total += self.reach[v];
            for &c in &cards[v * holes..(v + 1) * holes] {
                self.g_card[c as usize] += self.reach[v];
            }
        }
    }

    fn leave_group(&mut self, group: &[u32], cards: &[u8], holes: usize) {
        self.lo_total += self.g_total;
        for &p in group {
            let v = p as usize;
            for &c in &cards[v * holes..(v + 1) * holes] {
                self.lo_card[c as usize] += self.reach[v];
                self.g_card[c as usize] = 0.0;
            }
        }
    }

    /// `beaten - beating` for hand `v` in the current tie group.
    fn net(&self, v: usize, cards: &[u8], holes: usize) -> f64 {
        let (win, tie, avail) = match holes {
            1 => {
                let c0 = cards[v] as usize;
                (
                    self.lo_total - self.lo_card[c0],
                    self.g_total - self.g_card[c0],
                    self.all_total - self.all_card[c0],
                )
            }
            2 => {
                let (c0, c1) = (cards[2 * v] as usize, cards[2 * v + 1] as usize);
                let me = self.reach[v];
                (
                    self.lo_total - self.lo_card[c0] - self.lo_card[c1],
                    self.g_total - self.g_card[c0] - self.g_card[c1] + me,
                    self.all_total - self.all_card[c0] - self.all_card[c1] + me,
                )
            }
            _ => unreachable!("hole sizes above 2 are not enumerated"),
        };
        let lose = avail - win - tie;
        win - lose
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Indexer;
    use crate::games::evaluate_hand;
    use crate::games::GameSpec;
    use crate::solver::public::PublicGame;

    /// Brute-force cross-check on the first showdown node of Leduc and
    /// Numeral211.
    #[test]
    fn matches_naive_pairwise_sums() {
        for game in [GameSpec::leduc(), GameSpec::numeral211()] {
            let ix = Indexer::build(&game);
            let pg = PublicGame::build(&ix);
            let node = pg
                .board_nodes
                .iter()
                .find(|n| n.showdown.is_some())
                .unwrap();
            let valid = &node.valid;
            let r0: Vec<f64> = (0..valid.len()).map(|i| 0.01 + i as f64 * 0.003).collect();
            let r1: Vec<f64> = (0..valid.len()).map(|i| 0.02 + i as f64 * 0.001).collect();
            let board: Vec<_> = node.board.iter().flatten().copied().collect();
            let deck = game.deck.size();
            let holes = game.holes;
            let table = node.showdown.as_ref().unwrap();
            let (u0, u1) = showdown_values_pair(table, &node.cards, holes, &r0, &r1, deck, 2.0);
            assert_eq!(u0, showdown_values(table, &node.cards, holes, &r1, deck, 2.0));
            assert_eq!(u1, showdown_values(table, &node.cards, holes, &r0, deck, 2.0));
            let disj = disjoint_reach(&node.cards, holes, &r1, deck);
            for (v, &h) in valid.iter().enumerate() {
                let my = evaluate_hand(&pg.hands[h as usize], &board, &game).unwrap();
                let mut expect = 0.0;
                let mut expect_disj = 0.0;
                for (u, &h2) in valid.iter().enumerate() {
                    if pg.hands[h as usize]
                        .iter()
                        .any(|c| pg.hands[h2 as usize].contains(c))
                    {
                        continue;
                    }
                    expect_disj += r1[u];
                    let other = evaluate_hand(&pg.hands[h2 as usize], &board, &game).unwrap();
                    expect += 2.0
                        * r1[u]
                        * match my.cmp(&other) {
                            std::cmp::Ordering::Greater => 1.0,
                            std::cmp::Ordering::Equal => 0.0,
                            std::cmp::Ordering::Less => -1.0,
                        };
                }
                assert!((u0[v] - expect).abs() < 1e-9, "{} hand {h}", game.id);
                assert!((disj[v] - expect_disj).abs() < 1e-9);
            }
        }
    }
}
