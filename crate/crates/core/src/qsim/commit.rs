//! Commit pipelines: exact sampling of image measurements.
//!
//! An image measurement y draws a branch t with the Born weight of that
//! branch, samples the preimage and noise for t, and then checks whether
//! the other branch could also have produced y (noise within the evaluation
//! support). If it could, the superposition is preserved; if not, the state
//! collapses onto branch t.

use super::{CommittedState, LogicalState, QubitTable, WeakCommitRecord};
use crate::lattice::{centered, Reducer, ZqVector};
use crate::ntcf::{Claw, NtcfKeyPair};
use crate::params::LatticeParams;
use rand::Rng;

/// Test hook: pretend the image noise of selected records fell outside the
/// opposite branch's support.
#[derive(Clone, Debug, Default)]
pub struct LopsidedForcing {
    pub layer1: bool,
    pub regs: Vec<usize>,
}

struct SampledImage {
    y: ZqVector,
    claw: Claw,
    lopsided: bool,
}

/// Sample one image measurement: branch t was drawn by the caller from the
/// Born weights; x_t and the noise are uniform.
fn sample_image<R: Rng + ?Sized>(
    params: &LatticeParams,
    pair: &NtcfKeyPair,
    t: bool,
    force_lopsided: bool,
    rng: &mut R,
) -> SampledImage {
    let q = params.q;
    let red = Reducer::new(q);
    let x_t = ZqVector::uniform(q, params.n, rng);
    let noise_dist = rand::distributions::Uniform::new_inclusive(0u32, 2 * params.b_eval as u32);
    let mut y = ZqVector::zeros(q, params.m);
    let mut max_resid = 0u64;
    for r in 0..params.m {
        let mut acc: u64 = 0;
        for (a, xv) in pair.pk.a.row(r).iter().zip(&x_t.entries) {
            acc += *a as u64 * *xv;
        }
        let mut base = red.reduce(acc);
        if t {
            base += pair.pk.u.entries[r];
            if base >= q {
                base -= q;
            }
        }
        let e_prime = rng.sample(noise_dist) as i64 - params.b_eval as i64;
        y.entries[r] = (base as i64 + e_prime).rem_euclid(q as i64) as u64;
        // Support check for the opposite branch: y - A*x_other - other*u
        // stays inside the evaluation noise cube iff |e' -+ e| does, where
        // e is the key noise (u = A*s + e).
        let e_key = centered(pair.sk.noise.entries[r], q);
        let resid = if t { e_prime + e_key } else { e_prime - e_key };
        max_resid = max_resid.max(resid.unsigned_abs());
    }
    let x0_vec = if t { x_t.add(&pair.sk.s_vec) } else { x_t };
    let claw = Claw::from_x0(params, x0_vec, &pair.sk.s_vec);
    let lopsided = force_lopsided || max_resid > params.b_eval;
    SampledImage { y, claw, lopsided }
}

/// Single-layer (weak) commitment of logical qubit j. Returns the record and
/// whether the image collapsed the qubit (in which case the logical state
/// has been projected onto the surviving branch).
pub fn weak_commit<R: Rng + ?Sized>(
    params: &LatticeParams,
    pair: &NtcfKeyPair,
    state: &mut LogicalState,
    j: usize,
    rng: &mut R,
) -> (WeakCommitRecord, bool) {
    weak_commit_inner(params, pair, state, j, false, rng)
}

fn weak_commit_inner<R: Rng + ?Sized>(
    params: &LatticeParams,
    pair: &NtcfKeyPair,
    state: &mut LogicalState,
    j: usize,
    force_lopsided: bool,
    rng: &mut R,
) -> (WeakCommitRecord, bool) {
    let p1 = state.prob_one(j).clamp(0.0, 1.0);
    let t = rng.gen_bool(p1);
    let img = sample_image(params, pair, t, force_lopsided, rng);
    if img.lopsided {
        state.project_std(j, t);
    }
    (
        WeakCommitRecord {
            y: img.y,
            claw: img.claw,
            fixed: img.lopsided.then_some(t),
        },
        img.lopsided,
    )
}

/// Two-layer commitment of logical qubit j against one single-qubit key set
/// (w+2 function keys). Mutates the shared logical state and returns the
/// claw tables.
pub fn commit_qubit<R: Rng + ?Sized>(
    params: &LatticeParams,
    keys: &[NtcfKeyPair],
    state: &mut LogicalState,
    j: usize,
    rng: &mut R,
) -> (QubitTable, usize) {
    commit_qubit_forced(params, keys, state, j, &LopsidedForcing::default(), rng)
}

/// Like [`commit_qubit`] but with forced lopsided events (test hook).
pub fn commit_qubit_forced<R: Rng + ?Sized>(
    params: &LatticeParams,
    keys: &[NtcfKeyPair],
    state: &mut LogicalState,
    j: usize,
    force: &LopsidedForcing,
    rng: &mut R,
) -> (QubitTable, usize) {
    let w1 = params.w() + 1;
    assert_eq!(keys.len(), w1 + 1, "need w+2 function keys per qubit");
    let mut lopsided_events = 0usize;

    // Layer 1: commit the logical qubit itself.
    let (layer1, lop1) = weak_commit_inner(params, &keys[0], state, j, force.layer1, rng);
    if lop1 {
        lopsided_events += 1;
    }
    let parity_mask = layer1.claw.parity_vector().clone();

    // Layer 2: commit each of the w+1 registers of the Hadamard-transformed
    // post-commitment state.
    let mut regs: Vec<WeakCommitRecord> = Vec::with_capacity(w1);
    let mut decoupled: Option<bool> = None;
    let mut fixed_parity = false;
    for i in 0..w1 {
        // Registers not yet committed count as free carriers of the parity.
        let later_free_carrier = (i + 1..w1).any(|i2| parity_mask.get(i2));
        let earlier_free_carrier = regs
            .iter()
            .enumerate()
            .any(|(i2, r)| parity_mask.get(i2) && r.fixed.is_none());
        let last_carrier =
            parity_mask.get(i) && !later_free_carrier && !earlier_free_carrier;

        // Branch weight of this register qubit: uniform, except for the last
        // free parity carrier, whose value is tied to the qubit's Hadamard
        // observable.
        let p1 = if decoupled.is_some() || !last_carrier {
            0.5
        } else {
            state.had_prob(j, !fixed_parity).clamp(0.0, 1.0)
        };
        let t = rng.gen_bool(p1);
        let img = sample_image(params, &keys[1 + i], t, force.regs.contains(&i), rng);
        if img.lopsided {
            lopsided_events += 1;
            if parity_mask.get(i) && t {
                fixed_parity = !fixed_parity;
            }
            if decoupled.is_none() && last_carrier {
                // The qubit just lost its last parity carrier: its Hadamard
                // value is now pinned to the total fixed parity.
                state.project_had(j, fixed_parity);
                decoupled = Some(fixed_parity);
            }
        }
        regs.push(WeakCommitRecord {
            y: img.y,
            claw: img.claw,
            fixed: img.lopsided.then_some(t),
        });
    }

    (
        QubitTable {
            layer1,
            regs,
            parity_mask,
            decoupled,
        },
        lopsided_events,
    )
}

/// Commit an entire logical state qubit-by-qubit with a single key set
/// (the semi-succinct arrangement). The logical amplitudes stay attached to
/// the tables for lazy opening.
pub fn full_commit<R: Rng + ?Sized>(
    params: &LatticeParams,
    keys: &[NtcfKeyPair],
    state: LogicalState,
    rng: &mut R,
) -> CommittedState {
    let ell = state.ell;
    let mut cs = CommittedState {
        params: *params,
        logical: state,
        tables: Vec::with_capacity(ell),
        opened: vec![None; ell],
        lopsided_events: 0,
    };
    for j in 0..ell {
        let (table, lops) = commit_qubit(params, keys, &mut cs.logical, j, rng);
        cs.tables.push(table);
        cs.lopsided_events += lops;
    }
    cs
}
