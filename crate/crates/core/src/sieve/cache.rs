//! Binary cache of residue classes, keyed by `(b, c, p, q)`.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "LPSV1"                      5-byte magic
//! count: u64                   number of entries
//! entries, sorted by key:
//!   b: i64, c: i64, p: u64, q: u64
//!   period: u64
//!   len: u64                   bitmap length in bytes, ceil(period / 8)
//!   bitmap: [u8; len]          bit r (LSB first) set iff r is a residue
//! ```

use std::collections::BTreeMap;
use std::io::ErrorKind;
use std::path::Path;

use super::SievePrime;
use crate::error::{Error, Result};

const MAGIC: &[u8; 5] = b"LPSV1";

type Key = (i64, i64, u64, u64);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SieveCache {
    entries: BTreeMap<Key, SievePrime>,
}

fn to_bitmap(period: u64, residues: &[u64]) -> Vec<u8> {
    let mut bits = vec![0u8; period.div_ceil(8) as usize];
    for &r in residues {
        bits[(r / 8) as usize] |= 1 << (r % 8);
    }
    bits
}

fn from_bitmap(period: u64, bits: &[u8]) -> Vec<u64> {
    (0..period)
        .filter(|&r| bits[(r / 8) as usize] >> (r % 8) & 1 == 1)
        .collect()
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.bytes.len() < n {
            return Err(Error::Cache("truncated file".into()));
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }
}

impl SieveCache {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, b: i64, c: i64, p: u64, q: u64) -> Option<&SievePrime> {
        self.entries.get(&(b, c, p, q))
    }

    pub fn insert(&mut self, b: i64, c: i64, p: u64, sp: SievePrime) {
        self.entries.insert((b, c, p, sp.q), sp);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.extend((self.entries.len() as u64).to_le_bytes());
        for (&(b, c, p, q), sp) in &self.entries {
            let bits = to_bitmap(sp.period, &sp.residues);
            out.extend(b.to_le_bytes());
            out.extend(c.to_le_bytes());
            out.extend(p.to_le_bytes());
            out.extend(q.to_le_bytes());
            out.extend(sp.period.to_le_bytes());
            out.extend((bits.len() as u64).to_le_bytes());
            out.extend(bits);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader { bytes };
        if rd.take(MAGIC.len())? != MAGIC {
            return Err(Error::Cache("bad magic, expected LPSV1".into()));
        }
        let count = rd.u64()?;
        let mut entries = BTreeMap::new();
        for _ in 0..count {
            let key = (rd.i64()?, rd.i64()?, rd.u64()?, rd.u64()?);
            let period = rd.u64()?;
            let len = rd.u64()?;
            if period == 0 || len != period.div_ceil(8) {
                return Err(Error::Cache(format!(
                    "bitmap length {len} does not match period {period}"
                )));
            }
            let bits = rd.take(len as usize)?.to_vec();
            if period % 8 != 0 && bits[bits.len() - 1] >> (period % 8) != 0 {
                return Err(Error::Cache("residue beyond the period".into()));
            }
            let sp = SievePrime::from_residues(key.3, period, from_bitmap(period, &bits));
            entries.insert(key, sp);
        }
        if !rd.bytes.is_empty() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        Ok(Self { entries })
    }

    /// Reads the file; a missing file gives an empty cache.
    pub fn load_or_empty(path: &Path) -> Result<Self> {
        match std::fs::read(path) {
            Ok(bytes) => Self::from_bytes(&bytes),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(Error::Cache(e.to_string())),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::Cache(e.to_string()))
    }
}
