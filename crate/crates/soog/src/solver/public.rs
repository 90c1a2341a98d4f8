//! The public view of a game, precomputed for vectorized traversal.
//!
//! Two trees are built once per game:
//!
//! * a betting tree over all phases (no cards), whose nodes are the public
//!   betting lines — an infoset is a (betting node, bucket) pair;
//! * a board tree of one representative per board orbit under the deck
//!   automorphism group, with multiplicity weights. Strategies factor through
//!   suit-canonical buckets on both sides, so traversing one representative
//!   per orbit is exact.
//!
//! Reach probabilities are carried per private hand; hands overlapping the
//! board are dropped from each board node's `valid` list, and overlap between
//! the two players' hands is handled by card-removal corrections at the
//! terminals.

use crate::canonical::Indexer;
use crate::cards::Card;
use crate::games::betting::{BetState, BetStep};
use crate::games::engine::combinations;
use crate::games::evaluate_hand;
use crate::games::spec::GameSpec;
use crate::model::BetToken;

#[derive(Clone, Copy, Debug)]
pub enum BetEdge {
    /// Next decision node within the same phase.
    To(usize),
    /// Terminal: `folder` loses `amount` (their committed chips).
    Fold { folder: u8, amount: i64 },
    /// Terminal showdown; winner nets `pot` (the per-player committed).
    Showdown { pot: i64 },
    /// Betting round closed; play continues at the next phase's root node
    /// after a board deal.
    NextPhase(usize),
}

#[derive(Clone, Debug)]
pub struct BetNode {
    pub phase: usize,
    pub player: u8,
    /// Full betting line, phases separated by '/'.
    pub seq: String,
    pub actions: Vec<(BetToken, BetEdge)>,
}

/// Showdown evaluation order for one final board: positions into the board
/// node's `valid` list, sorted by ascending hand strength, with tie-group
/// boundaries.
#[derive(Clone, Debug)]
pub struct ShowdownTable {
    pub order: Vec<u32>,
    pub group_starts: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct BoardNode {
    pub phase: usize,
    pub board: Vec<Vec<Card>>,
    /// Orbit multiplicity relative to siblings.
    pub weight: f64,
    /// Hand ids compatible with this board, ascending.
    pub valid: Vec<u32>,
    /// Card ids of each valid hand, flattened with stride `holes` (hot-path
    /// copy avoiding pointer chasing through the hand list).
    pub cards: Vec<u8>,
    /// Position of each valid hand in the parent's valid list.
    pub parent_slot: Vec<u32>,
    /// Canonical observation index (hand + board) per valid hand.
    pub canon: Vec<u32>,
    /// Dense local id of each valid hand's canonical class. All strategy and
    /// reach quantities are constant on these classes, so per-class work
    /// suffices at decision nodes.
    pub class_of: Vec<u32>,
    /// Global canonical index per local class.
    pub class_canon: Vec<u32>,
    /// Valid hands per local class.
    pub class_count: Vec<u32>,
    pub children: Vec<usize>,
    pub showdown: Option<ShowdownTable>,
}

impl BoardNode {
    fn fill_cards(&mut self, hands: &[Vec<Card>]) {
        self.cards = self
            .valid
            .iter()
            .flat_map(|&h| hands[h as usize].iter().map(|c| c.0))
            .collect();
    }

    fn fill_classes(&mut self) {
        let mut uniq = self.canon.clone();
        uniq.sort_unstable();
        uniq.dedup();
        self.class_of = self
            .canon
            .iter()
            .map(|c| uniq.binary_search(c).unwrap() as u32)
            .collect();
        self.class_count = vec![0; uniq.len()];
        for &c in &self.class_of {
            self.class_count[c as usize] += 1;
        }
        self.class_canon = uniq;
    }
}

pub struct PublicGame {
    pub game: GameSpec,
    pub hands: Vec<Vec<Card>>,
    pub bet_nodes: Vec<BetNode>,
    pub bet_root: usize,
    pub board_nodes: Vec<BoardNode>,
    pub board_root: usize,
    /// 1 / (cards unseen by the full signal) per board-dealing phase
    /// (index 0 = the deal entering phase 2).
    pub xi: Vec<f64>,
    /// Root reach weight per player (joint hole-deal probability factors).
    pub root_reach: [f64; 2],
}

impl PublicGame {
    pub fn build(ix: &Indexer) -> PublicGame {
        let game = ix.game.clone();
        assert!(
            ix.enumerable_phases() == game.phases(),
            "public game needs all phases enumerable"
        );
        let deck: Vec<Card> = game.deck.cards().collect();
        let hands = combinations(&deck, game.holes);
        let mut bet_nodes = Vec::new();
        let bet_root = build_bet_tree(&game, BetState::opening(&game), String::new(), &mut bet_nodes);

        let iso = game.iso_maps();
        let all_maps: Vec<usize> = (0..iso.len()).collect();
        let mut board_nodes = Vec::new();
        let root_valid: Vec<u32> = (0..hands.len() as u32).collect();
        let root_canon: Vec<u32> = hands
            .iter()
            .map(|h| canon_of(ix, h, &[], 1))
            .collect();
        let mut root = BoardNode {
            phase: 1,
            board: Vec::new(),
            weight: 1.0,
            valid: root_valid,
            cards: Vec::new(),
            parent_slot: Vec::new(),
            canon: root_canon,
            class_of: Vec::new(),
            class_canon: Vec::new(),
            class_count: Vec::new(),
            children: Vec::new(),
            showdown: None,
        };
        root.fill_cards(&hands);
        root.fill_classes();
        board_nodes.push(root);
        expand_boards(ix, &iso, &all_maps, &hands, 0, &mut board_nodes);

        let d = game.deck.size() as u64;
        let h = game.holes as u64;
        let mut dealt = 2 * h;
        let mut xi = Vec::new();
        for &b in &game.board_per_phase {
            xi.push(1.0 / (d - dealt) as f64);
            dealt += b as u64;
        }
        let n1 = crate::canonical::binom(d, h) as f64;
        let n2 = crate::canonical::binom(d - h, h) as f64;
        PublicGame {
            game,
            hands,
            bet_nodes,
            bet_root,
            board_nodes,
            board_root: 0,
            xi,
            root_reach: [1.0 / n1, 1.0 / n2],
        }
    }

    /// Decision nodes where `player` acts.
    pub fn nodes_of(&self, player: u8) -> impl Iterator<Item = usize> + '_ {
        self.bet_nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.player == player)
            .map(|(i, _)| i)
    }
}

fn canon_of(ix: &Indexer, hand: &[Card], board: &[Vec<Card>], phase: usize) -> u32 {
    ix.canonical_index(&crate::model::ObservationInfoset {
        owner: 0,
        own: hand.to_vec(),
        board: board.to_vec(),
        phase,
    })
    .unwrap()
    .index
}

fn build_bet_tree(
    game: &GameSpec,
    state: BetState,
    seq: String,
    nodes: &mut Vec<BetNode>,
) -> usize {
    let id = nodes.len();
    nodes.push(BetNode {
        phase: state.phase,
        player: state.to_act,
        seq: seq.clone(),
        actions: Vec::new(),
    });
    let mut actions = Vec::new();
    for token in state.legal_tokens(game) {
        let mut child_seq = seq.clone();
        child_seq.push(token.letter());
        let edge = match state.step(token, game).unwrap() {
            BetStep::Continue(next) => BetEdge::To(build_bet_tree(game, next, child_seq, nodes)),
            BetStep::Fold { folder, committed } => BetEdge::Fold {
                folder,
                amount: committed[folder as usize] as i64,
            },
            BetStep::PhaseEnd(next) => {
                if state.phase == game.phases() {
                    BetEdge::Showdown {
                        pot: next.committed[0] as i64,
                    }
                } else {
                    let mut ns = child_seq;
                    ns.push('/');
                    BetEdge::NextPhase(build_bet_tree(game, next.next_phase(), ns, nodes))
                }
            }
        };
        actions.push((token, edge));
    }
    nodes[id].actions = actions;
    id
}

/// Encodes a board (groups of sorted cards) for orbit comparison.
fn encode_board(board: &[Vec<Card>]) -> Vec<u8> {
    let mut out = Vec::new();
    for g in board {
        out.extend(g.iter().map(|c| c.0));
        out.push(0xFE);
    }
    out
}

fn apply_map(board: &[Vec<Card>], m: &[u8]) -> Vec<Vec<Card>> {
    board
        .iter()
        .map(|g| {
            let mut mapped: Vec<Card> = g.iter().map(|c| Card(m[c.id()])).collect();
            mapped.sort_unstable();
            mapped
        })
        .collect()
}

fn expand_boards(
    ix: &Indexer,
    iso: &[Vec<u8>],
    stab: &[usize],
    hands: &[Vec<Card>],
    node: usize,
    nodes: &mut Vec<BoardNode>,
) {
    let game = ix.game.clone();
    let phase = nodes[node].phase;
    if phase == game.phases() {
        // Final phase: precompute the showdown order.
        let board_flat: Vec<Card> = nodes[node].board.iter().flatten().copied().collect();
        let keys: Vec<u32> = nodes[node]
            .valid
            .iter()
            .map(|&h| {
                evaluate_hand(&hands[h as usize], &board_flat, &game)
                    .unwrap()
                    .key()
            })
            .collect();
        let mut order: Vec<u32> = (0..keys.len() as u32).collect();
        order.sort_by_key(|&p| keys[p as usize]);
        let mut group_starts = vec![0u32];
        for i in 1..order.len() {
            if keys[order[i] as usize] != keys[order[i - 1] as usize] {
                group_starts.push(i as u32);
            }
        }
        group_starts.push(order.len() as u32);
        nodes[node].showdown = Some(ShowdownTable {
            order,
            group_starts,
        });
        return;
    }

    // Enumerate next-board orbits under the current stabilizer.
    let used: Vec<Card> = nodes[node].board.iter().flatten().copied().collect();
    let remaining: Vec<Card> = game.deck.cards().filter(|c| !used.contains(c)).collect();
    let b = game.board_per_phase[phase - 1];
    let mut orbits: Vec<(Vec<u8>, Vec<Vec<Card>>, u32)> = Vec::new(); // (canon key, rep board, size)
    for group in combinations(&remaining, b) {
        let mut child_board = nodes[node].board.clone();
        child_board.push(group);
        let mut best: Option<(Vec<u8>, Vec<Vec<Card>>)> = None;
        for &mi in stab {
            let mapped = apply_map(&child_board, &iso[mi]);
            let key = encode_board(&mapped);
            if best.as_ref().map_or(true, |(bk, _)| key < *bk) {
                best = Some((key, mapped));
            }
        }
        let (key, rep) = best.unwrap();
        match orbits.iter_mut().find(|(k, _, _)| *k == key) {
            Some((_, _, n)) => *n += 1,
            None => orbits.push((key, rep, 1)),
        }
    }

    for (key, rep_board, size) in orbits {
        let new_group = rep_board.last().unwrap().clone();
        let child_stab: Vec<usize> = stab
            .iter()
            .copied()
            .filter(|&mi| encode_board(&apply_map(&rep_board, &iso[mi])) == key)
            .collect();
        let parent_valid = nodes[node].valid.clone();
        let mut valid = Vec::new();
        let mut parent_slot = Vec::new();
        for (slot, &h) in parent_valid.iter().enumerate() {
            if hands[h as usize].iter().all(|c| !new_group.contains(c)) {
                valid.push(h);
                parent_slot.push(slot as u32);
            }
        }
        let canon: Vec<u32> = valid
            .iter()
            .map(|&h| canon_of(ix, &hands[h as usize], &rep_board, phase + 1))
            .collect();
        let mut child = BoardNode {
            phase: phase + 1,
            board: rep_board,
            weight: size as f64,
            valid,
            cards: Vec::new(),
            parent_slot,
            canon,
            class_of: Vec::new(),
            class_canon: Vec::new(),
            class_count: Vec::new(),
            children: Vec::new(),
            showdown: None,
        };
        child.fill_cards(hands);
        child.fill_classes();
        let child_id = nodes.len();
        nodes.push(child);
        nodes[node].children.push(child_id);
        expand_boards(ix, iso, &child_stab, hands, child_id, nodes);
    }
}
