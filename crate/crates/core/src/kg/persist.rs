//! Binary persistence for [`KnowledgeIndex`].
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "MCQAKGv1"
//! u32 len, language bytes
//! u32 node count,     then per node:     u32 len, UTF-8 term
//! u32 relation count, then per relation: u32 len, UTF-8 name
//! u64 adjacency entries
//! (node count + 1) x u64 offsets
//! entries x (u32 neighbour, u32 relation, f32 weight)
//! ```

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::index::{Edge, KnowledgeIndex, NodeId};
use super::KgError;

pub const MAGIC: &[u8; 8] = b"MCQAKGv1";

impl KnowledgeIndex {
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        write_str(&mut w, &self.language)?;
        w.write_all(&(self.terms.len() as u32).to_le_bytes())?;
        for t in &self.terms {
            write_str(&mut w, t)?;
        }
        w.write_all(&(self.relations.len() as u32).to_le_bytes())?;
        for r in &self.relations {
            write_str(&mut w, r)?;
        }
        w.write_all(&(self.edges.len() as u64).to_le_bytes())?;
        for o in &self.offsets {
            w.write_all(&o.to_le_bytes())?;
        }
        for e in &self.edges {
            w.write_all(&e.neighbor.0.to_le_bytes())?;
            w.write_all(&e.relation.to_le_bytes())?;
            w.write_all(&e.weight.to_le_bytes())?;
        }
        w.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        buf
    }

    pub fn save(&self, path: &Path) -> Result<(), KgError> {
        let file = File::create(path).map_err(|e| KgError::io(path, e))?;
        self.write_to(BufWriter::new(file)).map_err(|e| KgError::io(path, e))
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, KgError> {
        let corrupt = |msg: &str| KgError::Corrupt(msg.to_owned());
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(|_| corrupt("missing header"))?;
        if &magic != MAGIC {
            return Err(corrupt("bad magic header"));
        }
        let language = read_str(&mut r)?;
        let n = read_u32(&mut r)? as usize;
        let mut terms = Vec::with_capacity(n.min(1 << 24));
        let mut term_map = HashMap::with_capacity(n.min(1 << 24));
        for i in 0..n {
            let t = read_str(&mut r)?;
            if term_map.insert(t.clone(), NodeId(i as u32)).is_some() {
                return Err(KgError::Corrupt(format!("duplicate term `{t}`")));
            }
            terms.push(t);
        }
        let nr = read_u32(&mut r)? as usize;
        let mut relations = Vec::with_capacity(nr.min(1 << 16));
        for _ in 0..nr {
            relations.push(read_str(&mut r)?);
        }
        let entries = read_u64(&mut r)?;
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(read_u64(&mut r)?);
        }
        if offsets.first() != Some(&0)
            || offsets.last() != Some(&entries)
            || offsets.windows(2).any(|w| w[0] > w[1])
        {
            return Err(corrupt("inconsistent offsets"));
        }
        let mut edges = Vec::with_capacity((entries as usize).min(1 << 28));
        for _ in 0..entries {
            let neighbor = read_u32(&mut r)?;
            let relation = read_u32(&mut r)?;
            let weight = f32::from_bits(read_u32(&mut r)?);
            if neighbor as usize >= n || relation as usize >= nr || !weight.is_finite() || weight <= 0.0 {
                return Err(corrupt("edge out of range"));
            }
            edges.push(Edge { neighbor: NodeId(neighbor), relation, weight });
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest).map_err(|_| corrupt("read error"))? != 0 {
            return Err(corrupt("trailing bytes"));
        }
        Ok(KnowledgeIndex { language, terms, term_map, relations, offsets, edges })
    }

    pub fn load(path: &Path) -> Result<Self, KgError> {
        let file = File::open(path).map_err(|e| KgError::io(path, e))?;
        Self::read_from(BufReader::with_capacity(1 << 20, file))
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, KgError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(|_| KgError::Corrupt("truncated file".into()))?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, KgError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(|_| KgError::Corrupt("truncated file".into()))?;
    Ok(u64::from_le_bytes(b))
}

fn read_str<R: Read>(r: &mut R) -> Result<String, KgError> {
    let len = read_u32(r)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(|_| KgError::Corrupt("truncated string".into()))?;
    String::from_utf8(buf).map_err(|_| KgError::Corrupt("invalid UTF-8 string".into()))
}
