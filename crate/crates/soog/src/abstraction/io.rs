//! AbstractionMap persistence.
//!
//! Binary format (little-endian): magic `SOAB`, format version u16, game id
//! as u16 length + UTF-8 bytes, phase count u8, then per phase: bucket count
//! u32, entry count u32, and one u32 bucket id per canonical index. A CSV
//! mirror (`phase,index,bucket`) exists for debugging.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Result, SoogError};

use super::{AbstractionMap, PhaseMap};

const MAGIC: &[u8; 4] = b"SOAB";
const VERSION: u16 = 1;

pub fn write_map<W: Write>(map: &AbstractionMap, w: &mut W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let id = map.game_id.as_bytes();
    w.write_all(&(id.len() as u16).to_le_bytes())?;
    w.write_all(id)?;
    w.write_all(&[map.phases.len() as u8])?;
    for p in &map.phases {
        w.write_all(&p.n_buckets.to_le_bytes())?;
        w.write_all(&(p.buckets.len() as u32).to_le_bytes())?;
        for &b in &p.buckets {
            w.write_all(&b.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_map<R: Read>(r: &mut R) -> Result<AbstractionMap> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SoogError::Format("bad abstraction-map magic".into()));
    }
    let version = u16::from_le_bytes(read_n(r)?);
    if version != VERSION {
        return Err(SoogError::Format(format!(
            "unsupported abstraction-map version {version}"
        )));
    }
    let id_len = u16::from_le_bytes(read_n(r)?) as usize;
    let mut id = vec![0u8; id_len];
    r.read_exact(&mut id)?;
    let game_id = String::from_utf8(id)
        .map_err(|_| SoogError::Format("game id is not UTF-8".into()))?;
    let n_phases = u8::from_le_bytes(read_n(r)?) as usize;
    let mut phases = Vec::with_capacity(n_phases);
    for _ in 0..n_phases {
        let n_buckets = u32::from_le_bytes(read_n(r)?);
        let n_entries = u32::from_le_bytes(read_n(r)?) as usize;
        let mut buckets = Vec::with_capacity(n_entries);
        for _ in 0..n_entries {
            buckets.push(u32::from_le_bytes(read_n(r)?));
        }
        phases.push(PhaseMap { n_buckets, buckets });
    }
    let map = AbstractionMap { game_id, phases };
    map.validate()?;
    Ok(map)
}

fn read_n<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

pub fn save_map(map: &AbstractionMap, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_map(map, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_map(path: &Path) -> Result<AbstractionMap> {
    read_map(&mut BufReader::new(File::open(path).map_err(|e| {
        SoogError::Dependency(format!("abstraction map {}: {e}", path.display()))
    })?))
}

pub fn write_map_csv<W: Write>(map: &AbstractionMap, w: &mut W) -> Result<()> {
    writeln!(w, "phase,index,bucket")?;
    for (pi, p) in map.phases.iter().enumerate() {
        for (i, &b) in p.buckets.iter().enumerate() {
            writeln!(w, "{},{},{}", pi + 1, i, b)?;
        }
    }
    Ok(())
}

pub fn save_map_csv(map: &AbstractionMap, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_map_csv(map, &mut w)?;
    w.flush()?;
    Ok(())
}
