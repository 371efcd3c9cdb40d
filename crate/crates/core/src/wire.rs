//! Bit-exact binary encodings for keys, commitments, openings, prover
//! state, and framed protocol messages.
//!
//! Conventions: integers little-endian; bit strings packed LSB-first within
//! bytes; matrices and vectors carry a (q, rows, cols) header of 64-bit
//! little-endian words followed by row-major 64-bit entries. A vector is a
//! (len x 1) matrix.

use crate::bitstring::BitString;
use crate::lattice::{GadgetTrapdoor, ZqMatrix, ZqVector};
use crate::ntcf::{Claw, NtcfKeyPair, NtcfPublicKey, NtcfSecretKey};
use crate::params::LatticeParams;
use crate::qsim::{
    CommittedState, HadamardOpening, LogicalState, QubitTable, StandardOpening, WeakCommitRecord,
};
use crate::scheme::{CommitmentString1, Opening1, SchemeKeys1};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("truncated input")]
    Truncated,
    #[error("malformed field: {0}")]
    Malformed(&'static str),
    #[error("value out of range: {0}")]
    OutOfRange(&'static str),
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Reader<'a> {
        Reader { buf, pos: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.pos == self.buf.len()
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.pos + n > self.buf.len() {
            return Err(WireError::Truncated);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64, WireError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn finish(self) -> Result<(), WireError> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(WireError::Malformed("trailing bytes"))
        }
    }
}

pub fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

// --- lattice objects ---

pub fn encode_vector(out: &mut Vec<u8>, v: &ZqVector) {
    put_u64(out, v.q);
    put_u64(out, v.len() as u64);
    put_u64(out, 1);
    for &e in &v.entries {
        put_u64(out, e);
    }
}

pub fn decode_vector(r: &mut Reader) -> Result<ZqVector, WireError> {
    let q = r.u64()?;
    let rows = r.u64()? as usize;
    let cols = r.u64()? as usize;
    if cols != 1 {
        return Err(WireError::Malformed("vector column count"));
    }
    let mut entries = Vec::with_capacity(rows);
    for _ in 0..rows {
        let e = r.u64()?;
        if e >= q {
            return Err(WireError::OutOfRange("vector entry"));
        }
        entries.push(e);
    }
    Ok(ZqVector { q, entries })
}

pub fn encode_matrix(out: &mut Vec<u8>, m: &ZqMatrix) {
    put_u64(out, m.q);
    put_u64(out, m.rows as u64);
    put_u64(out, m.cols as u64);
    for &e in &m.entries {
        put_u64(out, e as u64);
    }
}

pub fn decode_matrix(r: &mut Reader) -> Result<ZqMatrix, WireError> {
    let q = r.u64()?;
    if q >= 1 << 30 {
        return Err(WireError::OutOfRange("modulus"));
    }
    let rows = r.u64()? as usize;
    let cols = r.u64()? as usize;
    if rows.saturating_mul(cols) > 1 << 28 {
        return Err(WireError::OutOfRange("matrix size"));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let e = r.u64()?;
        if e >= q {
            return Err(WireError::OutOfRange("matrix entry"));
        }
        entries.push(e as u32);
    }
    Ok(ZqMatrix {
        q,
        rows,
        cols,
        entries,
    })
}

pub fn encode_bits(out: &mut Vec<u8>, b: &BitString) {
    put_u32(out, b.len() as u32);
    out.extend_from_slice(&b.to_bytes());
}

pub fn decode_bits(r: &mut Reader) -> Result<BitString, WireError> {
    let len = r.u32()? as usize;
    if len > 1 << 24 {
        return Err(WireError::OutOfRange("bitstring length"));
    }
    let bytes = r.take(len.div_ceil(8))?;
    BitString::from_bytes(bytes, len).ok_or(WireError::Malformed("bitstring padding"))
}

// --- parameters and keys ---

pub fn encode_params(out: &mut Vec<u8>, p: &LatticeParams) {
    put_u64(out, p.q);
    put_u64(out, p.n as u64);
    put_u64(out, p.m as u64);
    put_u64(out, p.b_noise);
    put_u64(out, p.b_eval);
}

pub fn decode_params(r: &mut Reader) -> Result<LatticeParams, WireError> {
    let p = LatticeParams::new(
        r.u64()?,
        r.u64()? as usize,
        r.u64()? as usize,
        r.u64()?,
        r.u64()?,
    );
    p.validate().map_err(|_| WireError::Malformed("parameters"))?;
    Ok(p)
}

pub fn encode_public_key(out: &mut Vec<u8>, pk: &NtcfPublicKey) {
    encode_matrix(out, &pk.a);
    encode_vector(out, &pk.u);
}

pub fn decode_public_key(r: &mut Reader) -> Result<NtcfPublicKey, WireError> {
    let a = decode_matrix(r)?;
    let u = decode_vector(r)?;
    if u.len() != a.rows || u.q != a.q {
        return Err(WireError::Malformed("public key dimensions"));
    }
    Ok(NtcfPublicKey { a, u })
}

/// Secret key: the public part, the unstructured rows, the tag matrix
/// (entries -1, 0, 1 stored as q-1, 0, 1), and the shift bits. The key
/// noise is recomputed as u - A*s.
pub fn encode_secret_key(out: &mut Vec<u8>, sk: &NtcfSecretKey) {
    encode_public_key(out, &sk.pk);
    encode_matrix(out, &sk.trapdoor.a_bar);
    let pad = sk.trapdoor.a_bar.rows;
    let nk = if pad == 0 { 0 } else { sk.trapdoor.r.len() / pad };
    let q = sk.pk.a.q;
    let r_entries: Vec<u32> = sk
        .trapdoor
        .r
        .iter()
        .map(|&v| if v < 0 { (q - 1) as u32 } else { v as u32 })
        .collect();
    encode_matrix(
        out,
        &ZqMatrix {
            q,
            rows: nk,
            cols: pad,
            entries: r_entries,
        },
    );
    encode_bits(out, &sk.s);
}

pub fn decode_secret_key(params: &LatticeParams, r: &mut Reader) -> Result<NtcfSecretKey, WireError> {
    let pk = decode_public_key(r)?;
    let a_bar = decode_matrix(r)?;
    let r_mat = decode_matrix(r)?;
    let q = params.q;
    let rr: Result<Vec<i8>, WireError> = r_mat
        .entries
        .iter()
        .map(|&v| match v as u64 {
            0 => Ok(0i8),
            1 => Ok(1),
            x if x == q - 1 => Ok(-1),
            _ => Err(WireError::OutOfRange("trapdoor entry")),
        })
        .collect();
    let s = decode_bits(r)?;
    if s.len() != params.n {
        return Err(WireError::Malformed("secret shift length"));
    }
    let s_vec = crate::ntcf::bits_to_vector(q, &s);
    let noise = pk.u.sub(&pk.a.mul_vec(&s_vec));
    Ok(NtcfSecretKey {
        trapdoor: GadgetTrapdoor {
            a_bar,
            r: rr?,
            a: pk.a.clone(),
        },
        pk,
        s,
        s_vec,
        noise,
    })
}

pub fn encode_scheme_public(out: &mut Vec<u8>, keys: &SchemeKeys1) {
    encode_params(out, &keys.params);
    put_u32(out, keys.pairs.len() as u32);
    for pair in &keys.pairs {
        encode_public_key(out, &pair.pk);
    }
}

pub fn decode_scheme_public(
    r: &mut Reader,
) -> Result<(LatticeParams, Vec<NtcfPublicKey>), WireError> {
    let params = decode_params(r)?;
    let count = r.u32()? as usize;
    if count != params.w() + 2 {
        return Err(WireError::Malformed("public key count"));
    }
    let pks = (0..count)
        .map(|_| decode_public_key(r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((params, pks))
}

pub fn encode_scheme_keys(out: &mut Vec<u8>, keys: &SchemeKeys1) {
    encode_params(out, &keys.params);
    put_u32(out, keys.pairs.len() as u32);
    for pair in &keys.pairs {
        encode_secret_key(out, &pair.sk);
    }
}

pub fn decode_scheme_keys(r: &mut Reader) -> Result<SchemeKeys1, WireError> {
    let params = decode_params(r)?;
    let count = r.u32()? as usize;
    if count != params.w() + 2 {
        return Err(WireError::Malformed("key count"));
    }
    let pairs = (0..count)
        .map(|_| {
            let sk = decode_secret_key(&params, r)?;
            Ok(NtcfKeyPair {
                pk: sk.pk.clone(),
                sk,
            })
        })
        .collect::<Result<Vec<_>, WireError>>()?;
    Ok(SchemeKeys1 { params, pairs })
}

// --- commitments and openings ---

pub fn encode_commitment1(out: &mut Vec<u8>, ys: &CommitmentString1) {
    put_u32(out, ys.ys.len() as u32);
    for y in &ys.ys {
        encode_vector(out, y);
    }
}

pub fn decode_commitment1(r: &mut Reader) -> Result<CommitmentString1, WireError> {
    let count = r.u32()? as usize;
    if count > 1 << 16 {
        return Err(WireError::OutOfRange("commitment length"));
    }
    let ys = (0..count)
        .map(|_| decode_vector(r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CommitmentString1 { ys })
}

/// Opening payload: basis byte, then the packed measurement bits. A
/// Hadamard opening interleaves (d_i, x'_i); a standard opening
/// concatenates the per-register strings.
pub fn encode_opening1(out: &mut Vec<u8>, opening: &Opening1) {
    match opening {
        Opening1::Hadamard(h) => {
            out.push(1);
            let w1 = h.d.len();
            let w = w1 - 1;
            let mut bits = BitString::zeros(w1 * (1 + w));
            for i in 0..w1 {
                bits.set(i * (1 + w), h.d.get(i));
                for t in 0..w {
                    if h.xs[i].get(t) {
                        bits.set(i * (1 + w) + 1 + t, true);
                    }
                }
            }
            encode_bits(out, &bits);
        }
        Opening1::Standard(s) => {
            out.push(0);
            let w1 = s.zs.len();
            let mut bits = BitString::zeros(w1 * w1);
            for (i, z) in s.zs.iter().enumerate() {
                for t in 0..w1 {
                    if z.get(t) {
                        bits.set(i * w1 + t, true);
                    }
                }
            }
            encode_bits(out, &bits);
        }
    }
}

pub fn decode_opening1(params: &LatticeParams, r: &mut Reader) -> Result<Opening1, WireError> {
    let basis = r.u8()?;
    let w1 = params.w() + 1;
    let w = params.w();
    let bits = decode_bits(r)?;
    match basis {
        1 => {
            if bits.len() != w1 * (1 + w) {
                return Err(WireError::Malformed("hadamard opening length"));
            }
            let mut d = BitString::zeros(w1);
            let mut xs = Vec::with_capacity(w1);
            for i in 0..w1 {
                d.set(i, bits.get(i * (1 + w)));
                xs.push(bits.slice(i * (1 + w) + 1, w));
            }
            Ok(Opening1::Hadamard(HadamardOpening { d, xs }))
        }
        0 => {
            if bits.len() != w1 * w1 {
                return Err(WireError::Malformed("standard opening length"));
            }
            let zs = (0..w1).map(|i| bits.slice(i * w1, w1)).collect();
            Ok(Opening1::Standard(StandardOpening { zs }))
        }
        _ => Err(WireError::Malformed("basis byte")),
    }
}

/// Batched openings: count-prefixed (qubit index u32, opening) records.
pub fn encode_opening_batch(out: &mut Vec<u8>, batch: &[(usize, Opening1)]) {
    put_u32(out, batch.len() as u32);
    for (j, opening) in batch {
        put_u32(out, *j as u32);
        encode_opening1(out, opening);
    }
}

pub fn decode_opening_batch(
    params: &LatticeParams,
    r: &mut Reader,
) -> Result<Vec<(usize, Opening1)>, WireError> {
    let count = r.u32()? as usize;
    if count > 1 << 16 {
        return Err(WireError::OutOfRange("batch size"));
    }
    (0..count)
        .map(|_| {
            let j = r.u32()? as usize;
            let o = decode_opening1(params, r)?;
            Ok((j, o))
        })
        .collect()
}

// --- prover state (between commit and open on the command line) ---

fn encode_record(out: &mut Vec<u8>, rec: &WeakCommitRecord) {
    encode_vector(out, &rec.y);
    encode_vector(out, &rec.claw.x0_vec);
    out.push(match rec.fixed {
        None => 2,
        Some(false) => 0,
        Some(true) => 1,
    });
}

fn decode_record(
    params: &LatticeParams,
    s_vec: &ZqVector,
    r: &mut Reader,
) -> Result<WeakCommitRecord, WireError> {
    let y = decode_vector(r)?;
    let x0_vec = decode_vector(r)?;
    if y.len() != params.m || x0_vec.len() != params.n {
        return Err(WireError::Malformed("record dimensions"));
    }
    let fixed = match r.u8()? {
        0 => Some(false),
        1 => Some(true),
        2 => None,
        _ => return Err(WireError::Malformed("fixed flag")),
    };
    Ok(WeakCommitRecord {
        y,
        claw: Claw::from_x0(params, x0_vec, s_vec),
        fixed,
    })
}

/// Serialize the structured prover state. The claw tables reference the key
/// shifts, so decoding needs the same secret keys.
pub fn encode_committed_state(out: &mut Vec<u8>, cs: &CommittedState) {
    encode_params(out, &cs.params);
    put_u32(out, cs.ell() as u32);
    for a in cs.logical.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    for (j, table) in cs.tables.iter().enumerate() {
        encode_record(out, &table.layer1);
        for reg in &table.regs {
            encode_record(out, reg);
        }
        out.push(match table.decoupled {
            None => 2,
            Some(false) => 0,
            Some(true) => 1,
        });
        out.push(match cs.opened[j] {
            None => 2,
            Some(false) => 0,
            Some(true) => 1,
        });
    }
    put_u64(out, cs.lopsided_events as u64);
}

pub fn decode_committed_state(
    keys: &SchemeKeys1,
    r: &mut Reader,
) -> Result<CommittedState, WireError> {
    let params = decode_params(r)?;
    let ell = r.u32()? as usize;
    if ell > 24 {
        return Err(WireError::OutOfRange("qubit count"));
    }
    let dim = 1usize << ell;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re = r.f64()?;
        let im = r.f64()?;
        amps.push(Complex64::new(re, im));
    }
    let logical = LogicalState::from_amplitudes(ell, amps);
    let w1 = params.w() + 1;
    let mut tables = Vec::with_capacity(ell);
    let mut opened = Vec::with_capacity(ell);
    for _ in 0..ell {
        let layer1 = decode_record(&params, &keys.layer1().sk.s_vec, r)?;
        let regs = (0..w1)
            .map(|i| decode_record(&params, &keys.layer2(i).sk.s_vec, r))
            .collect::<Result<Vec<_>, _>>()?;
        let decoupled = match r.u8()? {
            0 => Some(false),
            1 => Some(true),
            2 => None,
            _ => return Err(WireError::Malformed("decoupled flag")),
        };
        opened.push(match r.u8()? {
            0 => Some(false),
            1 => Some(true),
            2 => None,
            _ => return Err(WireError::Malformed("opened flag")),
        });
        let parity_mask = layer1.claw.parity_vector().clone();
        tables.push(QubitTable {
            layer1,
            regs,
            parity_mask,
            decoupled,
        });
    }
    let lopsided_events = r.u64()? as usize;
    Ok(CommittedState {
        params,
        logical,
        tables,
        opened,
        lopsided_events,
    })
}

// --- framed protocol messages ---

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireMessage {
    pub phase: u8,
    pub msg_type: u8,
    pub payload: Vec<u8>,
}

impl WireMessage {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(6 + self.payload.len());
        out.push(self.phase);
        out.push(self.msg_type);
        put_u32(&mut out, self.payload.len() as u32);
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<WireMessage, WireError> {
        let mut r = Reader::new(bytes);
        let phase = r.u8()?;
        let msg_type = r.u8()?;
        let len = r.u32()? as usize;
        let payload = r.take(len)?.to_vec();
        r.finish()?;
        Ok(WireMessage {
            phase,
            msg_type,
            payload,
        })
    }
}
