//! Scripted adversaries exercising the binding mechanics.
//!
//! The single-layer scheme accepts every Hadamard opening, so a prover can
//! commit to |+>, flip the phase, and open to |-> undetected. The two-layer
//! scheme pins the Hadamard opening to the second-layer images: flipping
//! any register of the opening message breaks a preimage check.

use crate::ntcf::{ntcf_check, NtcfKeyPair};
use crate::params::LatticeParams;
use crate::qsim::{weak_commit, LogicalState};
use crate::scheme::{honest_commit1, honest_open1, out1, ver1, Opening1, SchemeKeys1};
use rand::Rng;

#[derive(Clone, Debug, Default)]
pub struct ZflipReport {
    pub trials: usize,
    /// With the phase flip: fraction decoding to 1 (the |-> outcome).
    pub flipped_one_rate: f64,
    /// Honest control: fraction decoding to 0.
    pub honest_zero_rate: f64,
    /// The single-layer verifier performs no Hadamard test; must stay 0.
    pub rejections: usize,
}

/// Commit |+> under the single-layer scheme, apply a phase flip to the
/// branch qubit, then produce the Hadamard opening. The decoded outcome
/// flips while the verifier has nothing to reject.
pub fn zflip_weak_attack<R: Rng + ?Sized>(
    params: &LatticeParams,
    pair: &NtcfKeyPair,
    apply_flip: bool,
    trials: usize,
    rng: &mut R,
) -> ZflipReport {
    let mut ones = 0usize;
    let mut zeros = 0usize;
    for _ in 0..trials {
        let mut state = LogicalState::plus();
        let (record, _) = weak_commit(params, pair, &mut state, 0, rng);
        if apply_flip {
            // Pauli Z on the branch qubit of the post-commitment state.
            state.apply_z(0);
        }
        // Single-layer Hadamard opening: measure every register in the
        // Hadamard basis. The outcome parity class follows the branch
        // qubit's Hadamard statistics; the representative is uniform in
        // the class. A collapsed image gives a fully uniform string.
        let d = if record.fixed.is_some() {
            crate::bitstring::BitString::random(params.w() + 1, rng)
        } else {
            let m = state.measure_had(0, rng);
            crate::qsim::coset_sample_pub(record.claw.parity_vector(), m, rng)
        };
        // Receiver-side decode through the trapdoor; no test is performed.
        let decoded = crate::ntcf::claw_parity(params, &pair.sk, &record.y, &d)
            .expect("honest image inverts");
        if decoded {
            ones += 1;
        } else {
            zeros += 1;
        }
    }
    ZflipReport {
        trials,
        flipped_one_rate: ones as f64 / trials as f64,
        honest_zero_rate: zeros as f64 / trials as f64,
        rejections: 0,
    }
}

#[derive(Clone, Debug, Default)]
pub struct XflipReport {
    pub trials: usize,
    /// Fraction of branch-bit-tampered openings rejected.
    pub dflip_reject_rate: f64,
    /// Fraction of preimage-tampered openings rejected.
    pub xflip_reject_rate: f64,
    /// Fraction of honest runs accepted.
    pub honest_accept_rate: f64,
}

/// Against the two-layer scheme, tamper with the Hadamard opening of a
/// committed |+>: flip the first register's branch bit (attempting to flip
/// the decoded outcome), or flip a bit of its preimage. Both must fail the
/// per-register preimage checks.
pub fn xflip_full_attack<R: Rng + ?Sized>(
    keys: &SchemeKeys1,
    trials: usize,
    rng: &mut R,
) -> XflipReport {
    let params = &keys.params;
    let mut dflip_rejected = 0usize;
    let mut xflip_rejected = 0usize;
    let mut honest_accepted = 0usize;
    for _ in 0..trials {
        let (ys, mut cs) = honest_commit1(keys, LogicalState::plus(), rng);
        let opening = honest_open1(&mut cs, 0, true, rng).expect("fresh commitment");
        if ver1(params, keys, &ys, &opening) {
            honest_accepted += 1;
        }
        let Opening1::Hadamard(honest) = opening else {
            unreachable!()
        };
        // Flip the d_1 register bit, keeping its preimage: the claimed
        // (1 - d_1, x'_1) is no longer a preimage of y_1.
        let mut tampered = honest.clone();
        tampered.d.flip(0);
        debug_assert!(!ntcf_check(
            params,
            &keys.layer2(0).pk,
            tampered.d.get(0),
            &tampered.xs[0],
            ys.layer2(0),
        ));
        if !ver1(params, keys, &ys, &Opening1::Hadamard(tampered)) {
            dflip_rejected += 1;
        }
        // Flip preimage bits with the correct branch bit instead.
        let mut tampered = honest.clone();
        tampered.xs[0].flip(0);
        if !ver1(params, keys, &ys, &Opening1::Hadamard(tampered)) {
            xflip_rejected += 1;
        }
    }
    XflipReport {
        trials,
        dflip_reject_rate: dflip_rejected as f64 / trials as f64,
        xflip_reject_rate: xflip_rejected as f64 / trials as f64,
        honest_accept_rate: honest_accepted as f64 / trials as f64,
    }
}

/// Decode an accepted opening (verdict-then-output convenience).
pub fn verify_and_decode(
    keys: &SchemeKeys1,
    ys: &crate::scheme::CommitmentString1,
    opening: &Opening1,
) -> Option<bool> {
    if !ver1(&keys.params, keys, ys, opening) {
        return None;
    }
    out1(&keys.params, keys, ys, opening)
}
