//! Canonical indexing of observation infosets.
//!
//! Two observations are equivalent when some deck automorphism maps one onto
//! the other. The class representative is the lexicographically least encoded
//! observation over the group, and indices are assigned by sorting the
//! representative keys, so they are stable across runs.

use std::collections::HashMap;

use crate::cards::Card;
use crate::error::{Result, SoogError};
use crate::games::spec::GameSpec;
use crate::model::{CanonicalIndex, ObservationInfoset};

/// Packed observation key: card ids and group separators, most significant
/// byte first, so numeric order equals lexicographic order (all observations
/// of one phase encode to the same length).
type ObsKey = u64;

const SEP: u8 = 0xFE;

struct PhaseTable {
    /// Sorted canonical keys; position = canonical index.
    reps: Vec<ObsKey>,
    lookup: HashMap<ObsKey, u32>,
    /// Raw observations per class.
    orbit_sizes: Vec<u32>,
    raw_count: u64,
}

/// Canonical index tables for one game, built by exhaustive enumeration of
/// the enumerable phases.
pub struct Indexer {
    pub game: GameSpec,
    iso_maps: Vec<Vec<u8>>,
    phases: Vec<PhaseTable>,
}

fn encode(own: &[Card], board: &[Vec<Card>]) -> ObsKey {
    let mut key: u64 = 0;
    let mut bytes = 0;
    let push = |b: u8, key: &mut u64, bytes: &mut u32| {
        *key = (*key << 8) | b as u64;
        *bytes += 1;
        assert!(*bytes <= 8, "observation too large for packed key");
    };
    for &c in own {
        push(c.0, &mut key, &mut bytes);
    }
    for group in board {
        push(SEP, &mut key, &mut bytes);
        for &c in group {
            push(c.0, &mut key, &mut bytes);
        }
    }
    key
}

/// The least key over the automorphism group.
fn canonical_key(own: &[Card], board: &[Vec<Card>], iso_maps: &[Vec<u8>]) -> ObsKey {
    let mut best = ObsKey::MAX;
    let mut own_m: Vec<Card> = own.to_vec();
    let mut board_m: Vec<Vec<Card>> = board.to_vec();
    for m in iso_maps {
        for (dst, src) in own_m.iter_mut().zip(own) {
            *dst = Card(m[src.id()]);
        }
        own_m.sort_unstable();
        for (dst_g, src_g) in board_m.iter_mut().zip(board) {
            for (dst, src) in dst_g.iter_mut().zip(src_g) {
                *dst = Card(m[src.id()]);
            }
            dst_g.sort_unstable();
        }
        let k = encode(&own_m, &board_m);
        if k < best {
            best = k;
        }
    }
    best
}

impl Indexer {
    /// Builds tables for phases `1..=game.enumerable_phases`.
    pub fn build(game: &GameSpec) -> Indexer {
        let iso_maps = game.iso_maps();
        let mut phases = Vec::new();
        for phase in 1..=game.enumerable_phases {
            phases.push(build_phase(game, phase, &iso_maps));
        }
        Indexer {
            game: game.clone(),
            iso_maps,
            phases,
        }
    }

    pub fn enumerable_phases(&self) -> usize {
        self.phases.len()
    }

    /// Number of canonical classes in a phase.
    pub fn count(&self, phase: usize) -> usize {
        self.phases[phase - 1].reps.len()
    }

    /// Number of raw observations in a phase.
    pub fn raw_count(&self, phase: usize) -> u64 {
        self.phases[phase - 1].raw_count
    }

    /// Raw observations mapping to a class.
    pub fn orbit_size(&self, idx: CanonicalIndex) -> u32 {
        self.phases[idx.phase - 1].orbit_sizes[idx.index as usize]
    }

    pub fn canonical_index(&self, obs: &ObservationInfoset) -> Result<CanonicalIndex> {
        let phase = obs.phase;
        if phase == 0 || phase > self.phases.len() {
            return Err(SoogError::Phase(format!(
                "phase {phase} has no canonical table"
            )));
        }
        for &c in obs.all_cards().iter() {
            if !self.game.deck.contains(c) {
                return Err(SoogError::Domain(format!("card {c} outside deck")));
            }
        }
        let key = canonical_key(&obs.own, &obs.board, &self.iso_maps);
        let index = *self.phases[phase - 1]
            .lookup
            .get(&key)
            .ok_or_else(|| SoogError::Domain("observation not in enumeration".into()))?;
        Ok(CanonicalIndex { phase, index })
    }

    /// Decodes the class representative back into an observation.
    pub fn representative(&self, idx: CanonicalIndex) -> ObservationInfoset {
        let key = self.phases[idx.phase - 1].reps[idx.index as usize];
        let group_sizes = self.game.board_sizes_at(idx.phase);
        let n_bytes = self.game.holes + group_sizes.iter().map(|g| g + 1).sum::<usize>();
        let bytes: Vec<u8> = (0..n_bytes)
            .rev()
            .map(|i| ((key >> (8 * i)) & 0xFF) as u8)
            .collect();
        let own: Vec<Card> = bytes[..self.game.holes].iter().map(|&b| Card(b)).collect();
        let mut board = Vec::new();
        let mut pos = self.game.holes;
        for &g in group_sizes {
            debug_assert_eq!(bytes[pos], SEP);
            pos += 1;
            board.push(bytes[pos..pos + g].iter().map(|&b| Card(b)).collect());
            pos += g;
        }
        ObservationInfoset {
            owner: 0,
            own,
            board,
            phase: idx.phase,
        }
    }
}

fn build_phase(game: &GameSpec, phase: usize, iso_maps: &[Vec<u8>]) -> PhaseTable {
    let mut counts: HashMap<ObsKey, u32> = HashMap::new();
    let mut raw_count = 0u64;
    for_each_observation(game, phase, |own, board| {
        raw_count += 1;
        *counts.entry(canonical_key(own, board, iso_maps)).or_insert(0) += 1;
    });
    let mut reps: Vec<ObsKey> = counts.keys().copied().collect();
    reps.sort_unstable();
    let lookup: HashMap<ObsKey, u32> = reps
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();
    let orbit_sizes: Vec<u32> = reps.iter().map(|k| counts[k]).collect();
    PhaseTable {
        reps,
        lookup,
        orbit_sizes,
        raw_count,
    }
}

/// Visits every raw observation (own cards sorted, each board group sorted)
/// of one phase exactly once.
pub fn for_each_observation<F: FnMut(&[Card], &[Vec<Card>])>(
    game: &GameSpec,
    phase: usize,
    mut f: F,
) {
    let deck: Vec<Card> = game.deck.cards().collect();
    let group_sizes: Vec<usize> = game.board_sizes_at(phase).to_vec();
    let own_combos = crate::games::engine::combinations(&deck, game.holes);
    let mut board: Vec<Vec<Card>> = Vec::new();
    for own in &own_combos {
        fill_board(&deck, own, &group_sizes, 0, &mut board, &mut f);
    }
}

fn fill_board<F: FnMut(&[Card], &[Vec<Card>])>(
    deck: &[Card],
    own: &[Card],
    group_sizes: &[usize],
    depth: usize,
    board: &mut Vec<Vec<Card>>,
    f: &mut F,
) {
    if depth == group_sizes.len() {
        f(own, board);
        return;
    }
    let used: Vec<Card> = own.iter().chain(board.iter().flatten()).copied().collect();
    let avail: Vec<Card> = deck.iter().filter(|c| !used.contains(c)).copied().collect();
    for group in crate::games::engine::combinations(&avail, group_sizes[depth]) {
        board.push(group);
        fill_board(deck, own, group_sizes, depth + 1, board, f);
        board.pop();
    }
}

/// Raw and (where enumerable) canonical infoset counts for one phase.
pub fn infoset_counts(indexer: &Indexer, phase: usize) -> Result<(u64, Option<u64>)> {
    let game = &indexer.game;
    if phase == 0 || phase > game.phases() {
        return Err(SoogError::Phase(format!("phase {phase} out of range")));
    }
    let mut raw: u64 = binom(game.deck.size() as u64, game.holes as u64);
    let mut remaining = game.deck.size() as u64 - game.holes as u64;
    for &g in game.board_sizes_at(phase) {
        raw *= binom(remaining, g as u64);
        remaining -= g as u64;
    }
    let canon = if phase <= indexer.enumerable_phases() {
        debug_assert_eq!(indexer.raw_count(phase), raw);
        Some(indexer.count(phase) as u64)
    } else {
        None
    };
    Ok((raw, canon))
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
