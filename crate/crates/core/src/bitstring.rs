//! Packed bit strings, LSB-first within 64-bit words.
//!
//! All protocol-level binary strings (bit decompositions, opening vectors,
//! parity masks) use this representation so that dot products and xors run
//! on whole words.

use rand::Rng;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitString(")?;
        for i in 0..self.len.min(64) {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > 64 {
            write!(f, "..[{}]", self.len)?;
        }
        write!(f, ")")
    }
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut words = vec![0u64; word_count(len)];
        for w in words.iter_mut() {
            *w = rng.gen();
        }
        let mut s = BitString { len, words };
        s.mask_tail();
        s
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        BitString {
            len: self.len,
            words,
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitString) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal lengths");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Copy of bits `[start, start+len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitString {
        assert!(start + len <= self.len);
        let mut out = BitString::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits `[start, start+len)` as a u64 (len <= 64), LSB = bit `start`.
    #[inline]
    pub fn extract_window(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && start + len <= self.len);
        if len == 0 {
            return 0;
        }
        let wi = start / 64;
        let off = start % 64;
        let mut v = self.words[wi] >> off;
        if off + len > 64 {
            v |= self.words[wi + 1] << (64 - off);
        }
        if len < 64 {
            v &= (1u64 << len) - 1;
        }
        v
    }

    /// Write the low `len` bits of `value` (len <= 64) at `start`.
    #[inline]
    pub fn write_window(&mut self, start: usize, len: usize, value: u64) {
        debug_assert!(len <= 64 && start + len <= self.len);
        if len == 0 {
            return;
        }
        let value = if len < 64 {
            value & ((1u64 << len) - 1)
        } else {
            value
        };
        let wi = start / 64;
        let off = start % 64;
        let low_mask = if len == 64 && off == 0 {
            u64::MAX
        } else {
            ((1u64 << (len.min(64 - off))) - 1) << off
        };
        self.words[wi] = (self.words[wi] & !low_mask) | ((value << off) & low_mask);
        if off + len > 64 {
            let hi_len = off + len - 64;
            let hi_mask = (1u64 << hi_len) - 1;
            self.words[wi + 1] = (self.words[wi + 1] & !hi_mask) | ((value >> (64 - off)) & hi_mask);
        }
    }

    /// Packed bytes, LSB-first within each byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            if self.get(i) {
                out[i / 8] |= 1 << (i % 8);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<BitString> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut s = BitString::zeros(len);
        for i in 0..len {
            if (bytes[i / 8] >> (i % 8)) & 1 == 1 {
                s.set(i, true);
            }
        }
        // Reject nonzero padding bits so decoding is injective.
        for i in len..bytes.len() * 8 {
            if (bytes[i / 8] >> (i % 8)) & 1 == 1 {
                return None;
            }
        }
        Some(s)
    }
}
