//! Behavior strategies over abstracted infosets, lifting, and persistence.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::abstraction::AbstractionMap;
use crate::canonical::Indexer;
use crate::error::{Result, SoogError};
use crate::model::ObservationInfoset;
use crate::solver::public::PublicGame;

/// One player's behavior strategy on the abstracted game: an action
/// distribution per (betting node, bucket) infoset. Lifting to the original
/// game is by composition — a raw observation is canonicalized, bucketed, and
/// looked up.
#[derive(Clone, Debug)]
pub struct StrategyProfile {
    pub game_id: String,
    pub player: u8,
    pub map: AbstractionMap,
    /// Per betting node: offset into `probs`, or `usize::MAX` where this
    /// player does not act. Row `offset + bucket * n_actions` holds the
    /// distribution.
    pub offsets: Vec<usize>,
    pub probs: Vec<f64>,
}

impl StrategyProfile {
    /// Layout matching `pg` for the acting nodes of `player` under `map`.
    pub fn zeroed(pg: &PublicGame, player: u8, map: &AbstractionMap) -> StrategyProfile {
        let mut offsets = vec![usize::MAX; pg.bet_nodes.len()];
        let mut len = 0usize;
        for (i, n) in pg.bet_nodes.iter().enumerate() {
            if n.player == player {
                offsets[i] = len;
                len += n.actions.len() * map.phases[n.phase - 1].n_buckets as usize;
            }
        }
        StrategyProfile {
            game_id: pg.game.id.clone(),
            player,
            map: map.clone(),
            offsets,
            probs: vec![0.0; len],
        }
    }

    /// The (normalized) action distribution at a node for a bucket. Rows with
    /// no accumulated weight fall back to uniform.
    pub fn action_probs(&self, pg: &PublicGame, node: usize, bucket: u32) -> Vec<f64> {
        let na = pg.bet_nodes[node].actions.len();
        let row = self.offsets[node] + bucket as usize * na;
        let slice = &self.probs[row..row + na];
        let total: f64 = slice.iter().sum();
        if total > 0.0 {
            slice.iter().map(|v| v / total).collect()
        } else {
            vec![1.0 / na as f64; na]
        }
    }

    /// Lifts the abstracted strategy to a raw observation: canonicalize,
    /// bucket, look up. `node` identifies the public betting line.
    pub fn lifted_probs(
        &self,
        pg: &PublicGame,
        ix: &Indexer,
        node: usize,
        obs: &ObservationInfoset,
    ) -> Result<Vec<f64>> {
        if pg.bet_nodes[node].player != self.player {
            return Err(SoogError::Domain(format!(
                "node {node} is not a player-{} decision",
                self.player + 1
            )));
        }
        if obs.phase != pg.bet_nodes[node].phase {
            return Err(SoogError::Phase(format!(
                "observation phase {} vs node phase {}",
                obs.phase, pg.bet_nodes[node].phase
            )));
        }
        let idx = ix.canonical_index(obs)?;
        Ok(self.action_probs(pg, node, self.map.bucket(idx)))
    }

    pub fn save(&self, pg: &PublicGame, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(SoogError::Io)?;
        let mut w = BufWriter::new(file);
        write_profile(self, pg, &mut w)
    }

    pub fn load(pg: &PublicGame, path: &Path) -> Result<StrategyProfile> {
        let file = File::open(path).map_err(SoogError::Io)?;
        read_profile(pg, &mut BufReader::new(file))
    }

    /// CSV mirror: `node_seq,bucket,action,prob` (normalized rows).
    pub fn save_csv(&self, pg: &PublicGame, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(SoogError::Io)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "node_seq,bucket,action,prob").map_err(SoogError::Io)?;
        for (node, bet) in pg.bet_nodes.iter().enumerate() {
            if bet.player != self.player {
                continue;
            }
            let nb = self.map.phases[bet.phase - 1].n_buckets;
            for bucket in 0..nb {
                let probs = self.action_probs(pg, node, bucket);
                for (a, p) in probs.iter().enumerate() {
                    writeln!(
                        w,
                        "{},{},{},{}",
                        bet.seq,
                        bucket,
                        bet.actions[a].0.letter(),
                        p
                    )
                    .map_err(SoogError::Io)?;
                }
            }
        }
        Ok(())
    }
}

const MAGIC: &[u8; 4] = b"SOST";
const VERSION: u16 = 1;

fn write_profile<W: Write>(s: &StrategyProfile, pg: &PublicGame, w: &mut W) -> Result<()> {
    let io = |e| SoogError::Io(e);
    w.write_all(MAGIC).map_err(io)?;
    w.write_all(&VERSION.to_le_bytes()).map_err(io)?;
    let id = s.game_id.as_bytes();
    w.write_all(&(id.len() as u16).to_le_bytes()).map_err(io)?;
    w.write_all(id).map_err(io)?;
    w.write_all(&[s.player]).map_err(io)?;
    w.write_all(&(s.map.phases.len() as u8).to_le_bytes())
        .map_err(io)?;
    for p in &s.map.phases {
        w.write_all(&p.n_buckets.to_le_bytes()).map_err(io)?;
        w.write_all(&(p.buckets.len() as u32).to_le_bytes())
            .map_err(io)?;
        for &b in &p.buckets {
            w.write_all(&b.to_le_bytes()).map_err(io)?;
        }
    }
    // Probability rows in the deterministic node layout of the public tree.
    debug_assert_eq!(s.offsets.len(), pg.bet_nodes.len());
    w.write_all(&(s.probs.len() as u64).to_le_bytes()).map_err(io)?;
    for &p in &s.probs {
        w.write_all(&p.to_le_bytes()).map_err(io)?;
    }
    Ok(())
}

fn read_profile<R: Read>(pg: &PublicGame, r: &mut R) -> Result<StrategyProfile> {
    fn take<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        r.read_exact(&mut buf).map_err(SoogError::Io)?;
        Ok(buf)
    }
    if &take::<_, 4>(r)? != MAGIC {
        return Err(SoogError::Format("bad strategy magic".into()));
    }
    let version = u16::from_le_bytes(take::<_, 2>(r)?);
    if version != VERSION {
        return Err(SoogError::Format(format!(
            "unsupported strategy version {version}"
        )));
    }
    let id_len = u16::from_le_bytes(take::<_, 2>(r)?) as usize;
    let mut id = vec![0u8; id_len];
    r.read_exact(&mut id).map_err(SoogError::Io)?;
    let game_id = String::from_utf8(id).map_err(|_| SoogError::Format("bad game id".into()))?;
    if game_id != pg.game.id {
        return Err(SoogError::Dependency(format!(
            "strategy for game {game_id:?}, expected {:?}",
            pg.game.id
        )));
    }
    let player = take::<_, 1>(r)?[0];
    if player > 1 {
        return Err(SoogError::Format(format!("bad player {player}")));
    }
    let n_phases = take::<_, 1>(r)?[0] as usize;
    let mut phases = Vec::with_capacity(n_phases);
    for _ in 0..n_phases {
        let n_buckets = u32::from_le_bytes(take::<_, 4>(r)?);
        let count = u32::from_le_bytes(take::<_, 4>(r)?) as usize;
        let mut buckets = Vec::with_capacity(count);
        for _ in 0..count {
            buckets.push(u32::from_le_bytes(take::<_, 4>(r)?));
        }
        phases.push(crate::abstraction::PhaseMap { n_buckets, buckets });
    }
    let map = AbstractionMap {
        game_id: game_id.clone(),
        phases,
    };
    map.validate()?;
    let mut out = StrategyProfile::zeroed(pg, player, &map);
    let n_probs = u64::from_le_bytes(take::<_, 8>(r)?) as usize;
    if n_probs != out.probs.len() {
        return Err(SoogError::Format(format!(
            "probability table length {n_probs}, expected {}",
            out.probs.len()
        )));
    }
    for p in out.probs.iter_mut() {
        *p = f64::from_le_bytes(take::<_, 8>(r)?);
    }
    out.game_id = game_id;
    Ok(out)
}
