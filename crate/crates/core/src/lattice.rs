//! Arithmetic over Z_q, bit (de)composition, bounded noise, and a
//! gadget-based trapdoor that inverts y = A*x + e.

use crate::bitstring::BitString;
use crate::params::LatticeParams;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gadget decoding failed: residual outside the rounding margin")]
    DecodingFailure,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZqVector {
    pub q: u64,
    pub entries: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZqMatrix {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, each reduced mod q. Stored as u32 (the modulus is
    /// capped below 2^30) so row dot products vectorize.
    pub entries: Vec<u32>,
}

/// Centered representative in (-q/2, q/2].
#[inline]
pub fn centered(v: u64, q: u64) -> i64 {
    if v > q / 2 {
        v as i64 - q as i64
    } else {
        v as i64
    }
}

/// Barrett reduction context: one division at construction, multiply-shift
/// per reduction. Exact for inputs below 2^63.
#[derive(Clone, Copy, Debug)]
pub struct Reducer {
    pub q: u64,
    magic: u64,
}

impl Reducer {
    pub fn new(q: u64) -> Reducer {
        Reducer {
            q,
            magic: ((1u128 << 64) / q as u128) as u64,
        }
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        debug_assert!(a < 1 << 63);
        let qhat = ((a as u128 * self.magic as u128) >> 64) as u64;
        let r = a.wrapping_sub(qhat.wrapping_mul(self.q));
        if r >= self.q {
            r - self.q
        } else {
            r
        }
    }
}

impl ZqVector {
    pub fn zeros(q: u64, len: usize) -> Self {
        ZqVector {
            q,
            entries: vec![0; len],
        }
    }

    pub fn uniform<R: Rng + ?Sized>(q: u64, len: usize, rng: &mut R) -> Self {
        let dist = rand::distributions::Uniform::new(0, q as u32);
        let entries = (0..len).map(|_| rng.sample(dist) as u64).collect();
        ZqVector { q, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &ZqVector) -> ZqVector {
        debug_assert_eq!(self.q, other.q);
        debug_assert_eq!(self.len(), other.len());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + b) % self.q)
            .collect();
        ZqVector { q: self.q, entries }
    }

    pub fn sub(&self, other: &ZqVector) -> ZqVector {
        debug_assert_eq!(self.q, other.q);
        debug_assert_eq!(self.len(), other.len());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + self.q - b) % self.q)
            .collect();
        ZqVector { q: self.q, entries }
    }

    /// Squared Euclidean norm of the centered representatives.
    pub fn norm_sq_centered(&self) -> u128 {
        self.entries
            .iter()
            .map(|&v| {
                let c = centered(v, self.q).unsigned_abs() as u128;
                c * c
            })
            .sum()
    }

    /// Largest centered coordinate in absolute value.
    pub fn linf_centered(&self) -> u64 {
        self.entries
            .iter()
            .map(|&v| centered(v, self.q).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

impl ZqMatrix {
    pub fn zeros(q: u64, rows: usize, cols: usize) -> Self {
        debug_assert!(q < 1 << 30);
        ZqMatrix {
            q,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn uniform<R: Rng + ?Sized>(q: u64, rows: usize, cols: usize, rng: &mut R) -> Self {
        let dist = rand::distributions::Uniform::new(0, q as u32);
        let entries = (0..rows * cols).map(|_| rng.sample(dist)).collect();
        ZqMatrix {
            q,
            rows,
            cols,
            entries,
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c] as u64
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product mod q. Row dot products accumulate in u64,
    /// which is exact because cols * (q-1)^2 < 2^64 for every supported
    /// modulus and dimension.
    pub fn mul_vec(&self, x: &ZqVector) -> ZqVector {
        debug_assert_eq!(self.cols, x.len());
        debug_assert!((self.cols as u128) * ((self.q - 1) as u128).pow(2) < (1u128 << 64));
        let q = self.q;
        let x32: Vec<u32> = x.entries.iter().map(|&v| v as u32).collect();
        let entries = (0..self.rows)
            .map(|r| {
                let mut acc: u64 = 0;
                for (a, b) in self.row(r).iter().zip(&x32) {
                    acc += *a as u64 * *b as u64;
                }
                acc % q
            })
            .collect();
        ZqVector {
            q: self.q,
            entries,
        }
    }

    /// Vertical stack [self; other].
    pub fn vstack(&self, other: &ZqMatrix) -> ZqMatrix {
        debug_assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ZqMatrix {
            q: self.q,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }
}

/// Trapdoor in gadget form: A = [Abar ; G_n + R*Abar] where
/// G_n = I_n (x) (1, 2, ..., 2^(k-1))^T and R has entries in {-1, 0, 1}.
#[derive(Clone, Debug)]
pub struct GadgetTrapdoor {
    pub a_bar: ZqMatrix,
    /// (n*k) x pad matrix with entries in {-1, 0, 1}.
    pub r: Vec<i8>,
    pub a: ZqMatrix,
}

/// The gadget block G_n as an m' x n matrix (m' = n*k).
pub fn gadget_matrix(params: &LatticeParams) -> ZqMatrix {
    let k = params.k();
    let n = params.n;
    let mut g = ZqMatrix::zeros(params.q, n * k, n);
    for i in 0..n {
        let mut pow = 1u64;
        for t in 0..k {
            g.entries[(i * k + t) * n + i] = pow as u32;
            pow = pow * 2 % params.q;
        }
    }
    g
}

pub fn trapgen<R: Rng + ?Sized>(params: &LatticeParams, rng: &mut R) -> GadgetTrapdoor {
    let n = params.n;
    let nk = params.w();
    let pad = params.pad();
    let q = params.q;
    let a_bar = ZqMatrix::uniform(q, pad, n, rng);
    let r: Vec<i8> = (0..nk * pad).map(|_| rng.gen_range(-1i8..=1)).collect();

    // bottom = G + R * Abar
    let g = gadget_matrix(params);
    let mut bottom = ZqMatrix::zeros(q, nk, n);
    for i in 0..nk {
        for c in 0..n {
            let mut acc: i64 = g.at(i, c) as i64;
            for j in 0..pad {
                let rij = r[i * pad + j] as i64;
                acc += rij * a_bar.at(j, c) as i64;
            }
            bottom.entries[i * n + c] = acc.rem_euclid(q as i64) as u32;
        }
    }
    let a = a_bar.vstack(&bottom);
    GadgetTrapdoor { a_bar, r, a }
}

#[inline]
fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

#[inline]
fn div_ceil_i(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Decode x in [0, q) from a noisy gadget block c_t = x * 2^t + v_t (mod q),
/// |v_t| <= margin, by successive interval refinement. Coordinates are
/// consumed with geometrically growing strides (each processed coordinate
/// shrinks the interval by its power of two), and every candidate is
/// re-verified against all coordinates at the end. Returns None when no
/// unique consistent value exists.
///
/// All magnitudes stay below 2^t * (q + margin) <= 2^k * 2q < 2^60 for the
/// moduli this crate supports, so i64 arithmetic suffices.
fn decode_gadget_block(
    block: &[u64],
    q: u64,
    margin: u64,
    pow_table: &[u64],
    red: &Reducer,
) -> Option<u64> {
    const MAX_CANDIDATES: usize = 32;
    let k = block.len();
    let qi = q as i64;
    let e = margin as i64;
    let c0 = centered(block[0], q);
    let mut cur = [(0i64, 0i64); MAX_CANDIDATES];
    let mut next = [(0i64, 0i64); MAX_CANDIDATES];
    cur[0] = (c0 - e, c0 + e);
    let mut cur_len = 1usize;

    let mut t = 0usize;
    while t + 1 < k {
        // Widest current interval decides how far we can jump: coordinate t'
        // keeps candidate counts small as long as 2^t' * width <= 2q.
        let width = cur[..cur_len]
            .iter()
            .map(|&(lo, hi)| hi - lo)
            .max()
            .unwrap()
            .max(1) as u64;
        let allowed = 63 - (2 * q / width).max(2).leading_zeros() as usize;
        t = allowed.clamp(t + 1, k - 1);

        let p = 1i64 << t;
        let ct = block[t] as i64;
        let mut next_len = 0usize;
        for &(lo, hi) in &cur[..cur_len] {
            let j_lo = div_ceil_i(p * lo - e - ct, qi);
            let j_hi = div_floor(p * hi + e - ct, qi);
            let mut j = j_lo;
            while j <= j_hi {
                let rep = ct + j * qi;
                let xlo = div_ceil_i(rep - e, p).max(lo);
                let xhi = div_floor(rep + e, p).min(hi);
                if xlo <= xhi {
                    if next_len == MAX_CANDIDATES {
                        return None;
                    }
                    next[next_len] = (xlo, xhi);
                    next_len += 1;
                }
                j += 1;
            }
        }
        if next_len == 0 {
            return None;
        }
        cur[..next_len].copy_from_slice(&next[..next_len]);
        cur_len = next_len;
    }

    let mut result: Option<u64> = None;
    let mut count: usize = 0;
    for &(lo, hi) in &cur[..cur_len] {
        let mut x = lo;
        while x <= hi {
            count += 1;
            if count > MAX_CANDIDATES {
                return None;
            }
            let xq = x.rem_euclid(qi) as u64;
            // Re-verify every coordinate, including the skipped ones.
            let mut consistent = true;
            for (&ct, &pow) in block.iter().zip(pow_table) {
                let pred = red.reduce(pow * xq);
                let resid = (ct + q - pred) % q;
                if centered(resid, q).unsigned_abs() > margin {
                    consistent = false;
                    break;
                }
            }
            if consistent {
                match result {
                    None => result = Some(xq),
                    Some(prev) if prev == xq => {}
                    Some(_) => return None,
                }
            }
            x += 1;
        }
    }
    result
}

/// Recover x from y = A*x + e using the trapdoor: compute
/// c = y_bottom - R*y_top = G*x + (e_bottom - R*e_top) and decode each
/// length-k block.
pub fn lattice_invert(
    params: &LatticeParams,
    td: &GadgetTrapdoor,
    y: &ZqVector,
) -> Result<ZqVector, LatticeError> {
    lattice_invert_with_residual(params, td, y).map(|(x, _)| x)
}

/// Like [`lattice_invert`] but also returns the residual y - A*x, assembled
/// from the gadget residuals instead of a fresh matrix product:
/// e_top = y_top - Abar*x and e_bottom = (c - G*x) + R*e_top.
pub fn lattice_invert_with_residual(
    params: &LatticeParams,
    td: &GadgetTrapdoor,
    y: &ZqVector,
) -> Result<(ZqVector, ZqVector), LatticeError> {
    if y.len() != params.m {
        return Err(LatticeError::DimensionMismatch("invert input length"));
    }
    let pad = params.pad();
    let k = params.k();
    let q = params.q;
    let y_top = &y.entries[..pad];
    let y_bottom = &y.entries[pad..];

    let red = Reducer::new(q);
    let mut pow_table = vec![0u64; k];
    let mut pow = 1u64;
    for p in pow_table.iter_mut() {
        *p = pow;
        pow = pow * 2 % q;
    }

    let mut x = ZqVector::zeros(q, params.n);
    let margin = params.decode_margin();
    let mut c = vec![0u64; params.w()];
    let mut block = vec![0u64; k];
    for i in 0..params.n {
        for t in 0..k {
            let row = i * k + t;
            // c_row = y_bottom[row] - sum_j R[row][j] * y_top[j]
            let mut acc: i64 = y_bottom[row] as i64;
            for (j, &yt) in y_top.iter().enumerate() {
                acc -= td.r[row * pad + j] as i64 * yt as i64;
            }
            let v = acc.rem_euclid(q as i64) as u64;
            c[row] = v;
            block[t] = v;
        }
        x.entries[i] = decode_gadget_block(&block, q, margin, &pow_table, &red)
            .ok_or(LatticeError::DecodingFailure)?;
    }

    let mut resid = ZqVector::zeros(q, params.m);
    let e_top = &mut resid.entries[..pad];
    for (j, et) in e_top.iter_mut().enumerate() {
        let mut acc: u64 = 0;
        for (col, &xv) in x.entries.iter().enumerate() {
            acc += td.a_bar.at(j, col) * xv;
        }
        *et = (y_top[j] + q - red.reduce(acc)) % q;
    }
    let e_top_copy: Vec<i64> = resid.entries[..pad].iter().map(|&v| v as i64).collect();
    for i in 0..params.n {
        for t in 0..k {
            let row = i * k + t;
            let gx = red.reduce(pow_table[t] * x.entries[i]);
            let mut acc: i64 = ((c[row] + q - gx) % q) as i64;
            for (j, &et) in e_top_copy.iter().enumerate() {
                acc += td.r[row * pad + j] as i64 * et;
            }
            resid.entries[pad + row] = acc.rem_euclid(q as i64) as u64;
        }
    }
    Ok((x, resid))
}

/// Bit decomposition: each Z_q entry becomes k bits, least significant first.
pub fn bit_decompose(params: &LatticeParams, x: &ZqVector) -> BitString {
    let k = params.k();
    let mut out = BitString::zeros(x.len() * k);
    for (i, &v) in x.entries.iter().enumerate() {
        out.write_window(i * k, k, v);
    }
    out
}

/// Inverse of the bit decomposition; total on all bit strings by reducing
/// each block mod q.
pub fn bit_compose(params: &LatticeParams, bits: &BitString) -> ZqVector {
    let k = params.k();
    debug_assert_eq!(bits.len() % k, 0);
    let n = bits.len() / k;
    let entries = (0..n)
        .map(|i| bits.extract_window(i * k, k) % params.q)
        .collect();
    ZqVector {
        q: params.q,
        entries,
    }
}

/// Noise vector with entries i.i.d. uniform on [-bound, bound], reduced mod q.
pub fn sample_noise<R: Rng + ?Sized>(bound: u64, len: usize, q: u64, rng: &mut R) -> ZqVector {
    debug_assert!(2 * bound + 1 < q);
    let dist = rand::distributions::Uniform::new_inclusive(0u32, 2 * bound as u32);
    let entries = (0..len)
        .map(|_| {
            let v = rng.sample(dist) as i64 - bound as i64;
            v.rem_euclid(q as i64) as u64
        })
        .collect();
    ZqVector { q, entries }
}
