//! Noisy trapdoor claw-free function family over Z_q: key generation,
//! evaluation, trapdoor inversion, preimage checking and the decoding map
//! from Hadamard-measurement strings to equations on the secret.

use crate::bitstring::BitString;
use crate::lattice::{
    bit_compose, bit_decompose, lattice_invert, lattice_invert_with_residual, sample_noise,
    trapgen, GadgetTrapdoor, ZqMatrix, ZqVector,
};
use crate::params::LatticeParams;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NtcfError {
    #[error("key generation failed to produce an invertible key")]
    KeyGenFailed,
    #[error("conditioned sampling accepted too few draws (rate below 1e-4)")]
    RejectionTimeout,
    #[error("direction vectors must be distinct and nonzero")]
    BadDirections,
}

#[derive(Clone, Debug)]
pub struct NtcfPublicKey {
    pub a: ZqMatrix,
    pub u: ZqVector,
}

#[derive(Clone, Debug)]
pub struct NtcfSecretKey {
    pub pk: NtcfPublicKey,
    pub trapdoor: GadgetTrapdoor,
    /// The claw shift s as bits (this is also the preimage-shift key sk_pre).
    pub s: BitString,
    /// s embedded in Z_q^n.
    pub s_vec: ZqVector,
    /// The key noise e with u = A*s + e.
    pub noise: ZqVector,
}

#[derive(Clone, Debug)]
pub struct NtcfKeyPair {
    pub pk: NtcfPublicKey,
    pub sk: NtcfSecretKey,
}

/// One of the two preimages behind an image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub bit: bool,
    pub x: BitString,
}

/// The two matched preimages of an image: x0 - x1 = s componentwise mod q.
#[derive(Clone, Debug)]
pub struct Claw {
    pub x0_vec: ZqVector,
    pub x1_vec: ZqVector,
    pub x0: BitString,
    pub x1: BitString,
    parity: BitString,
}

impl Claw {
    pub fn from_x0(params: &LatticeParams, x0_vec: ZqVector, s_vec: &ZqVector) -> Claw {
        let x1_vec = x0_vec.sub(s_vec);
        let x0 = bit_decompose(params, &x0_vec);
        let x1 = bit_decompose(params, &x1_vec);
        let delta = x0.xor(&x1);
        let w = x0.len();
        let mut parity = BitString::zeros(w + 1);
        parity.set(0, true);
        let mut pos = 0;
        while pos < w {
            let chunk = (w - pos).min(64);
            parity.write_window(1 + pos, chunk, delta.extract_window(pos, chunk));
            pos += chunk;
        }
        Claw {
            x0_vec,
            x1_vec,
            x0,
            x1,
            parity,
        }
    }

    pub fn preimage(&self, bit: bool) -> Preimage {
        Preimage {
            bit,
            x: if bit { self.x1.clone() } else { self.x0.clone() },
        }
    }

    pub fn x_vec(&self, bit: bool) -> &ZqVector {
        if bit {
            &self.x1_vec
        } else {
            &self.x0_vec
        }
    }

    pub fn x_bits(&self, bit: bool) -> &BitString {
        if bit {
            &self.x1
        } else {
            &self.x0
        }
    }

    /// The vector (1, x0 xor x1) of length w+1; its inner product with a
    /// Hadamard-measurement string d is the decoded bit.
    pub fn parity_vector(&self) -> &BitString {
        &self.parity
    }
}

/// Embed a bit string into Z_q^n with 0/1 entries.
pub fn bits_to_vector(q: u64, bits: &BitString) -> ZqVector {
    ZqVector {
        q,
        entries: bits.iter().map(u64::from).collect(),
    }
}

pub fn ntcf_gen<R: Rng + ?Sized>(params: &LatticeParams, rng: &mut R) -> NtcfKeyPair {
    for _ in 0..32 {
        let trapdoor = trapgen(params, rng);
        let s = BitString::random(params.n, rng);
        let s_vec = bits_to_vector(params.q, &s);
        let e = sample_noise(params.b_noise, params.m, params.q, rng);
        let u = trapdoor.a.mul_vec(&s_vec).add(&e);
        // Regenerate in the (rare) case the trapdoor cannot recover s from u.
        match lattice_invert(params, &trapdoor, &u) {
            Ok(x) if x == s_vec => {
                let pk = NtcfPublicKey {
                    a: trapdoor.a.clone(),
                    u,
                };
                let sk = NtcfSecretKey {
                    pk: pk.clone(),
                    trapdoor,
                    s,
                    s_vec,
                    noise: e,
                };
                return NtcfKeyPair { pk, sk };
            }
            _ => continue,
        }
    }
    // With validated parameters a single attempt succeeds; 32 retries means
    // the parameters are broken.
    panic!("ntcf_gen: could not generate an invertible key");
}

/// y = A * x + b * u + e' with e' fresh from the evaluation noise.
pub fn ntcf_eval<R: Rng + ?Sized>(
    params: &LatticeParams,
    pk: &NtcfPublicKey,
    b: bool,
    x: &BitString,
    rng: &mut R,
) -> ZqVector {
    let e = sample_noise(params.b_eval, params.m, params.q, rng);
    ntcf_eval_with_noise(params, pk, b, x, &e)
}

/// Deterministic evaluation with caller-supplied noise (test hook).
pub fn ntcf_eval_with_noise(
    params: &LatticeParams,
    pk: &NtcfPublicKey,
    b: bool,
    x: &BitString,
    noise: &ZqVector,
) -> ZqVector {
    debug_assert_eq!(x.len(), params.w());
    let xv = bit_compose(params, x);
    let mut y = pk.a.mul_vec(&xv);
    if b {
        y = y.add(&pk.u);
    }
    y.add(noise)
}

/// 1 iff the centered residual y - A*x - b*u has Euclidean norm at most
/// 2*sqrt(m)*B'.
pub fn ntcf_check(
    params: &LatticeParams,
    pk: &NtcfPublicKey,
    b: bool,
    x: &BitString,
    y: &ZqVector,
) -> bool {
    if x.len() != params.w() || y.len() != params.m {
        return false;
    }
    let q = params.q;
    let red = crate::lattice::Reducer::new(q);
    let xv = bit_compose(params, x);
    // Centered entries stay below 2^29, so the squared norm of m of them
    // fits u64 comfortably.
    let bound = u64::try_from(params.check_norm_sq_bound()).expect("bound fits u64");
    let mut norm: u64 = 0;
    for r in 0..params.m {
        let mut acc: u64 = 0;
        for (a, v) in pk.a.row(r).iter().zip(&xv.entries) {
            acc += *a as u64 * *v;
        }
        let mut pred = red.reduce(acc);
        if b {
            pred += pk.u.entries[r];
            if pred >= q {
                pred -= q;
            }
        }
        let resid = (y.entries[r] + q - pred) % q;
        let c = crate::lattice::centered(resid, q).unsigned_abs();
        norm = norm.saturating_add(c * c);
        if norm > bound {
            return false;
        }
    }
    true
}

/// Recover the claw behind y, or None when y is not close to the image of
/// either branch.
pub fn ntcf_invert(params: &LatticeParams, sk: &NtcfSecretKey, y: &ZqVector) -> Option<Claw> {
    let (x, resid) = lattice_invert_with_residual(params, &sk.trapdoor, y).ok()?;
    let bound = params.check_norm_sq_bound();
    if resid.norm_sq_centered() <= bound {
        // y ~ A*x, so x is the branch-0 preimage.
        return Some(Claw::from_x0(params, x, &sk.s_vec));
    }
    // y - A*(x+s) = (y - A*x) - (u - e).
    let resid1 = resid.sub(&sk.pk.u).add(&sk.noise);
    if resid1.norm_sq_centered() <= bound {
        return Some(Claw::from_x0(params, x.add(&sk.s_vec), &sk.s_vec));
    }
    None
}

/// Decode a Hadamard-measurement string d of length w+1 into the vector
/// d' in {0,1}^n with d . (1, x0 xor x1) = d_0 xor d'. s (mod 2).
/// The first bit of d is ignored.
pub fn ntcf_good(params: &LatticeParams, x0: &BitString, _x1: &BitString, d: &BitString) -> BitString {
    ntcf_good_vec(params, &bit_compose(params, x0), d)
}

/// [`ntcf_good`] with the branch-0 preimage already composed.
pub fn ntcf_good_vec(params: &LatticeParams, x0_vec: &ZqVector, d: &BitString) -> BitString {
    let k = params.k();
    let n = params.n;
    debug_assert_eq!(d.len(), params.w() + 1);
    let mut out = BitString::zeros(n);
    for i in 0..n {
        let v = x0_vec.entries[i];
        let v_minus = (v + params.q - 1) % params.q;
        // mask = bits(v) xor bits(v - 1): never zero because v != v-1 mod q.
        let mask = v ^ v_minus;
        let window = d.extract_window(1 + i * k, k);
        out.set(i, (window & mask).count_ones() & 1 == 1);
    }
    out
}

/// Membership in the good set: the decoded vector is nonzero.
pub fn good_is_member(params: &LatticeParams, x0: &BitString, x1: &BitString, d: &BitString) -> bool {
    !ntcf_good(params, x0, x1, d).is_zero()
}

/// Membership test on an already-inverted claw.
pub fn good_is_member_claw(params: &LatticeParams, claw: &Claw, d: &BitString) -> bool {
    !ntcf_good_vec(params, &claw.x0_vec, d).is_zero()
}

/// Decoded bit d . (1, x0 xor x1) for the claw behind y.
pub fn claw_parity(
    params: &LatticeParams,
    sk: &NtcfSecretKey,
    y: &ZqVector,
    d: &BitString,
) -> Option<bool> {
    let claw = ntcf_invert(params, sk, y)?;
    Some(d.dot(claw.parity_vector()))
}

/// Empirical total-variation distance of (d1 . s, d2 . s) from uniform on
/// {0,1}^2, where s is uniform on {0,1}^n conditioned on C*s = v for a
/// uniformly random C in Z_q^{ell x n} (rejection-sampled).
pub fn coset_uniformity_test<R: Rng + ?Sized>(
    q: u64,
    n: usize,
    ell: usize,
    d1: &BitString,
    d2: &BitString,
    accepted_target: usize,
    rng: &mut R,
) -> Result<f64, NtcfError> {
    if d1 == d2 || d1.is_zero() || d2.is_zero() {
        return Err(NtcfError::BadDirections);
    }
    let c = ZqMatrix::uniform(q, ell, n, rng);
    let s_star = BitString::random(n, rng);
    let v = c.mul_vec(&bits_to_vector(q, &s_star));

    let mut counts = [0u64; 4];
    let mut accepted = 0usize;
    let max_attempts = accepted_target.saturating_mul(10_000).max(1_000_000);
    let mut attempts = 0usize;
    while accepted < accepted_target {
        attempts += 1;
        if attempts > max_attempts {
            return Err(NtcfError::RejectionTimeout);
        }
        let s = BitString::random(n, rng);
        if ell > 0 && c.mul_vec(&bits_to_vector(q, &s)) != v {
            continue;
        }
        accepted += 1;
        let b1 = d1.dot(&s) as usize;
        let b2 = d2.dot(&s) as usize;
        counts[2 * b1 + b2] += 1;
    }
    let total = accepted as f64;
    let tvd = counts
        .iter()
        .map(|&c| (c as f64 / total - 0.25).abs())
        .sum::<f64>()
        / 2.0;
    Ok(tvd)
}
