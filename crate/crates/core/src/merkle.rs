//! Keyed hash family with local opening: a binary Merkle tree over byte
//! chunks with per-index membership proofs.
//!
//! Domain separation: leaf = H(key || 0x00 || index || chunk),
//! node = H(key || 0x01 || left || right), empty leaf = H(key || 0x02).
//! Trees are padded to a power of two with at least two leaves.

use rand::Rng;
use sha2::{Digest as _, Sha256};
use thiserror::Error;

pub type Digest = [u8; 32];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HashKey(pub [u8; 32]);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MerkleError {
    #[error("chunk index {index} out of range for {count} chunks")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("no chunks to hash")]
    Empty,
    #[error("malformed proof encoding")]
    Malformed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerkleProof {
    pub index: u64,
    pub chunk: Vec<u8>,
    /// Sibling digests, leaf level first.
    pub siblings: Vec<Digest>,
}

pub fn hgen<R: Rng + ?Sized>(rng: &mut R) -> HashKey {
    let mut k = [0u8; 32];
    rng.fill(&mut k);
    HashKey(k)
}

fn leaf_digest(hk: &HashKey, index: u64, chunk: &[u8]) -> Digest {
    let mut h = Sha256::new();
    h.update(hk.0);
    h.update([0x00]);
    h.update(index.to_le_bytes());
    h.update(chunk);
    h.finalize().into()
}

fn node_digest(hk: &HashKey, left: &Digest, right: &Digest) -> Digest {
    let mut h = Sha256::new();
    h.update(hk.0);
    h.update([0x01]);
    h.update(left);
    h.update(right);
    h.finalize().into()
}

fn empty_digest(hk: &HashKey) -> Digest {
    let mut h = Sha256::new();
    h.update(hk.0);
    h.update([0x02]);
    h.finalize().into()
}

fn leaf_count(chunks: usize) -> usize {
    chunks.next_power_of_two().max(2)
}

fn build_levels(hk: &HashKey, chunks: &[Vec<u8>]) -> Vec<Vec<Digest>> {
    let n = leaf_count(chunks.len());
    let empty = empty_digest(hk);
    let mut level: Vec<Digest> = (0..n)
        .map(|i| match chunks.get(i) {
            Some(c) => leaf_digest(hk, i as u64, c),
            None => empty,
        })
        .collect();
    let mut levels = vec![level.clone()];
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| node_digest(hk, &pair[0], &pair[1]))
            .collect();
        levels.push(level.clone());
    }
    levels
}

/// Hash root over the chunk sequence.
pub fn heval(hk: &HashKey, chunks: &[Vec<u8>]) -> Result<Digest, MerkleError> {
    if chunks.is_empty() {
        return Err(MerkleError::Empty);
    }
    Ok(*build_levels(hk, chunks).last().unwrap().first().unwrap())
}

/// Open chunk i: the chunk plus its authentication path.
pub fn hopen(hk: &HashKey, chunks: &[Vec<u8>], i: usize) -> Result<MerkleProof, MerkleError> {
    if chunks.is_empty() {
        return Err(MerkleError::Empty);
    }
    if i >= chunks.len() {
        return Err(MerkleError::IndexOutOfRange {
            index: i,
            count: chunks.len(),
        });
    }
    let levels = build_levels(hk, chunks);
    let mut siblings = Vec::with_capacity(levels.len() - 1);
    let mut pos = i;
    for level in &levels[..levels.len() - 1] {
        siblings.push(level[pos ^ 1]);
        pos >>= 1;
    }
    Ok(MerkleProof {
        index: i as u64,
        chunk: chunks[i].clone(),
        siblings,
    })
}

/// Verify a local opening against the root.
pub fn hver(hk: &HashKey, root: &Digest, i: usize, chunk: &[u8], proof: &MerkleProof) -> bool {
    if proof.index != i as u64 || proof.chunk != chunk {
        return false;
    }
    let mut acc = leaf_digest(hk, i as u64, chunk);
    let mut pos = i;
    for sib in &proof.siblings {
        acc = if pos & 1 == 0 {
            node_digest(hk, &acc, sib)
        } else {
            node_digest(hk, sib, &acc)
        };
        pos >>= 1;
    }
    pos == 0 && acc == *root
}

impl MerkleProof {
    /// Wire format: index (u64 LE), chunk length (u32 LE), chunk bytes,
    /// depth (u8), depth x 32-byte digests.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(13 + self.chunk.len() + 32 * self.siblings.len());
        out.extend_from_slice(&self.index.to_le_bytes());
        out.extend_from_slice(&(self.chunk.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.chunk);
        out.push(self.siblings.len() as u8);
        for s in &self.siblings {
            out.extend_from_slice(s);
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<MerkleProof, MerkleError> {
        if bytes.len() < 13 {
            return Err(MerkleError::Malformed);
        }
        let index = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let clen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        if bytes.len() < 12 + clen + 1 {
            return Err(MerkleError::Malformed);
        }
        let chunk = bytes[12..12 + clen].to_vec();
        let depth = bytes[12 + clen] as usize;
        let rest = &bytes[13 + clen..];
        if rest.len() != depth * 32 {
            return Err(MerkleError::Malformed);
        }
        let siblings = rest
            .chunks(32)
            .map(|c| <Digest>::try_from(c).unwrap())
            .collect();
        Ok(MerkleProof {
            index,
            chunk,
            siblings,
        })
    }
}
