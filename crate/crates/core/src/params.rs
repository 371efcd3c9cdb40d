//! Parameter sets for the lattice function family.
//!
//! All sets here are toy-scale: they make the claw structure, decoding
//! margins and statistical tests work at desk scale. None of them offers
//! any cryptographic security.

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeParams {
    /// Prime modulus q.
    pub q: u64,
    /// Secret dimension n.
    pub n: usize,
    /// Row dimension m (>= n * k).
    pub m: usize,
    /// Small-noise bound B: keygen noise is uniform on [-B, B].
    pub b_noise: u64,
    /// Large-noise bound B': evaluation noise is uniform on [-B', B'].
    pub b_eval: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus must exceed 2")]
    ModulusTooSmall,
    #[error("modulus must stay below 2^30 (decoder arithmetic bound)")]
    ModulusTooLarge,
    #[error("m = {m} must be at least n*k = {nk}")]
    RowsTooFew { m: usize, nk: usize },
    #[error("noise bounds must satisfy 1 <= B and 4*B <= B'")]
    BadNoiseBounds,
    #[error("noise bound 2B'+1 must be smaller than q")]
    NoiseExceedsModulus,
    #[error("check margin violated: need 2*sqrt(m)*B' < q/4")]
    CheckMarginTooWide,
    #[error("gadget decode margin violated: need (1 + m - n*k)*(B + B') < q/6")]
    DecodeMarginTooWide,
}

fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v % 2 == 0 {
        return v == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= v {
        if v % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl LatticeParams {
    pub const fn new(q: u64, n: usize, m: usize, b_noise: u64, b_eval: u64) -> Self {
        LatticeParams {
            q,
            n,
            m,
            b_noise,
            b_eval,
        }
    }

    /// Bits per Z_q element: k = ceil(log2 q).
    pub fn k(&self) -> usize {
        64 - (self.q - 1).leading_zeros() as usize
    }

    /// Preimage bit length w = n * k.
    pub fn w(&self) -> usize {
        self.n * self.k()
    }

    /// Number of unstructured rows above the gadget block.
    pub fn pad(&self) -> usize {
        self.m - self.w()
    }

    /// Squared norm bound used by the preimage check: (2*sqrt(m)*B')^2.
    pub fn check_norm_sq_bound(&self) -> u128 {
        4u128 * self.m as u128 * (self.b_eval as u128) * (self.b_eval as u128)
    }

    /// Largest per-coordinate gadget residual the decoder tolerates: the
    /// worst case over honest evaluations, (1 + pad) * (B + B'). Keeping it
    /// below (q-1)/6 guarantees a unique decoding.
    pub fn decode_margin(&self) -> u64 {
        let worst = (1 + self.pad() as u64) * (self.b_noise + self.b_eval);
        worst.min((self.q - 1) / 6)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.q <= 2 {
            return Err(ParamError::ModulusTooSmall);
        }
        if self.q >= 1 << 30 {
            return Err(ParamError::ModulusTooLarge);
        }
        if !is_prime(self.q) {
            return Err(ParamError::NotPrime(self.q));
        }
        if self.m < self.w() {
            return Err(ParamError::RowsTooFew {
                m: self.m,
                nk: self.w(),
            });
        }
        if self.b_noise < 1 || self.b_eval < 4 * self.b_noise {
            return Err(ParamError::BadNoiseBounds);
        }
        if 2 * self.b_eval + 1 >= self.q {
            return Err(ParamError::NoiseExceedsModulus);
        }
        // 2*sqrt(m)*B' < q/4  <=>  64*m*B'^2 < q^2
        let lhs = 64u128 * self.m as u128 * (self.b_eval as u128).pow(2);
        if lhs >= (self.q as u128).pow(2) {
            return Err(ParamError::CheckMarginTooWide);
        }
        // Worst-case gadget residual: every trapdoor row contributes at most
        // (B + B') per +-1 entry, plus the direct noise coordinate. Unique
        // decoding needs this below q/6.
        let worst = (1 + self.pad() as u128) * (self.b_noise as u128 + self.b_eval as u128);
        if worst >= ((self.q - 1) / 6) as u128 {
            return Err(ParamError::DecodeMarginTooWide);
        }
        Ok(())
    }
}

/// Smallest set: w = 9, so a committed qubit spans 10 effective registers
/// and exhaustive state-vector checks stay cheap. Used by the oracle
/// equivalence and extraction-identity tests.
pub const MICRO: LatticeParams = LatticeParams::new(509, 1, 12, 1, 16);

/// Statistical set: large enough modulus that honest sessions are accepted
/// with rate ~0.6 in the standard basis and ~1 in the Hadamard basis.
pub const SMALL: LatticeParams = LatticeParams::new(67_108_859, 9, 238, 1, 262_144);

/// Sub-micro set (w = 7) for two-qubit dense extraction tests.
pub const TINY: LatticeParams = LatticeParams::new(127, 1, 8, 1, 5);

pub fn by_name(name: &str) -> Option<LatticeParams> {
    match name.to_ascii_uppercase().as_str() {
        "MICRO" => Some(MICRO),
        "SMALL" => Some(SMALL),
        "TINY" => Some(TINY),
        _ => None,
    }
}
