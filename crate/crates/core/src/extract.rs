//! Extraction of a state from the prover's opening machinery.
//!
//! The operational observables of a committed qubit are defined by running
//! the opening algorithm coherently and reading off the decoded bit: the
//! standard-basis observable opens everything in the standard basis and
//! decodes register 0, the Hadamard-basis observable opens in the Hadamard
//! basis and decodes against the first-layer claw.
//!
//! Two implementations of the extractor are provided. The dense path runs
//! the teleportation-style coin-register circuit literally on the
//! materialized state vector. The structured path runs the operationally
//! equivalent procedure (standard-observable measurements on one subset, a
//! random sign twirl followed by Hadamard-observable measurements on the
//! complement), which stays tractable for any number of qubits.

use crate::qsim::{
    sample_open_hadamard, sample_open_standard, CommittedState, DenseOracle, LogicalState,
};
use crate::scheme::{
    commit_multi, open_batch, out1_hadamard, out1_standard, out_multi, ver_multi,
    CommitmentString1, SchemeKeysN,
};
use crate::stats::{counts_from_samples, empirical_tvd};
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The standard-basis operational observable applied as a unitary: on the
/// claw subspace it flips register 0's branch bit, which acts as a logical
/// Z on the committed qubit.
pub fn apply_pz_unitary(cs: &mut CommittedState, j: usize) {
    cs.logical.apply_z(j);
    let table = &mut cs.tables[j];
    if let Some(t) = table.regs[0].fixed {
        table.regs[0].fixed = Some(!t);
    }
    if let Some(h) = table.decoupled {
        table.decoupled = Some(!h);
    }
}

/// Measure the extracted state in the given bases via the operational
/// procedure: standard-observable outcomes on the standard subset, then a
/// uniform sign twirl and Hadamard-observable outcomes on the complement.
/// Consumes the committed state. Returns None if a decode fails (does not
/// happen on honest commitments).
pub fn ideal_measure<R: Rng + ?Sized>(
    keys: &SchemeKeysN,
    mut cs: CommittedState,
    basis: &[bool],
    rng: &mut R,
) -> Option<Vec<bool>> {
    let params = *keys.params();
    let ell = cs.ell();
    assert_eq!(basis.len(), ell);
    let mut out = vec![false; ell];
    for i in 0..ell {
        if !basis[i] {
            let y1 = cs.tables[i].regs[0].y.clone();
            let z = sample_open_standard(&mut cs, i, rng).expect("fresh commitment");
            let sk1 = &keys.keyset(i).layer2(0).sk;
            out[i] = out1_standard(&params, sk1, &y1, &z)?;
        }
    }
    for j in 0..ell {
        if basis[j] {
            let s_twirl: bool = rng.gen();
            if s_twirl {
                apply_pz_unitary(&mut cs, j);
            }
            let y0 = cs.tables[j].layer1.y.clone();
            let z = sample_open_hadamard(&mut cs, j, rng).expect("fresh commitment");
            let sk0 = &keys.keyset(j).layer1().sk;
            let u = out1_hadamard(&params, sk0, &y0, &z)?;
            out[j] = u ^ s_twirl;
        }
    }
    Some(out)
}

/// Extraction output on the dense path: the (purified) extracted state over
/// [branch registers][candidate qubits][twirl record].
pub struct DenseExtraction {
    pub ell: usize,
    pub w1: usize,
    /// Amplitudes over branch bits (low), the extracted qubits, and the
    /// residual twirl register (high).
    pub amp: Vec<Complex64>,
}

fn parity_masks(oracle: &DenseOracle) -> Vec<u64> {
    (0..oracle.ell)
        .map(|j| {
            let mask = &oracle.table(j).parity_mask;
            let mut m = 0u64;
            for i in 0..oracle.w1 {
                if mask.get(i) {
                    m |= 1 << i;
                }
            }
            m
        })
        .collect()
}

/// P_Z as a permutation of branch configurations: flip register 0 of qubit i.
fn pz_flip(idx: usize, i: usize, w1: usize) -> usize {
    idx ^ (1usize << (i * w1))
}

/// P_X as a diagonal sign: the decoded parity of qubit i's branch block.
fn px_sign(idx: usize, i: usize, w1: usize, masks: &[u64]) -> bool {
    let block = (idx as u64 >> (i * w1)) & ((1u64 << w1) - 1);
    (block & masks[i]).count_ones() & 1 == 1
}

/// Run the extraction circuit literally: coin registers, controlled Pauli
/// and observable applications, coin Hadamards, the corrective Paulis, and
/// the contraction of the spent coin half.
pub fn extract_dense(oracle: &DenseOracle) -> DenseExtraction {
    let ell = oracle.ell;
    let w1 = oracle.w1;
    let masks = parity_masks(oracle);
    let b_bits = ell * w1;
    let dim_b = 1usize << b_bits;
    let total_bits = b_bits + 3 * ell; // branch | a | s | r
    let dim = 1usize << total_bits;
    let a_shift = b_bits;
    let s_shift = b_bits + ell;
    let r_shift = b_bits + 2 * ell;

    // Step 1-2: uniform coins, a = 0, branch register carries the state.
    let mut amp = vec![Complex64::ZERO; dim];
    let coin_norm = 1.0 / (1u64 << ell) as f64;
    for rs in 0..1usize << (2 * ell) {
        let s = rs & ((1 << ell) - 1);
        let r = rs >> ell;
        let base = (r << r_shift) | (s << s_shift);
        for d in 0..dim_b {
            amp[base | d] = oracle.amp[d] * coin_norm;
        }
    }

    // Step 3: controlled on (r, s): Z^s X^r on the a register and
    // P_X^r P_Z^s on the branch register.
    let mut next = vec![Complex64::ZERO; dim];
    for (idx, &a) in amp.iter().enumerate() {
        if a == Complex64::ZERO {
            continue;
        }
        let d = idx & (dim_b - 1);
        let areg = (idx >> a_shift) & ((1 << ell) - 1);
        let s = (idx >> s_shift) & ((1 << ell) - 1);
        let r = (idx >> r_shift) & ((1 << ell) - 1);
        // P_Z^s first (branch flips), then P_X^r (diagonal signs).
        let mut d2 = d;
        for i in 0..ell {
            if (s >> i) & 1 == 1 {
                d2 = pz_flip(d2, i, w1);
            }
        }
        let mut sign = false;
        for i in 0..ell {
            if (r >> i) & 1 == 1 && px_sign(d2, i, w1, &masks) {
                sign = !sign;
            }
        }
        // Z^s X^r on a: new a = a xor r, phase s . (a xor r).
        let a2 = areg ^ r;
        if (s & a2).count_ones() & 1 == 1 {
            sign = !sign;
        }
        let out_idx = (r << r_shift) | (s << s_shift) | (a2 << a_shift) | d2;
        next[out_idx] += if sign { -a } else { a };
    }
    amp = next;

    // Step 4: Hadamard every coin bit.
    for bit in s_shift..total_bits {
        fwht_bit(&mut amp, bit);
    }

    // Step 5: controlled on the transformed coins (r', s'):
    // X^{s'} Z^{r'} on the a register.
    let mut next = vec![Complex64::ZERO; dim];
    for (idx, &a) in amp.iter().enumerate() {
        if a == Complex64::ZERO {
            continue;
        }
        let areg = (idx >> a_shift) & ((1 << ell) - 1);
        let sp = (idx >> s_shift) & ((1 << ell) - 1);
        let rp = (idx >> r_shift) & ((1 << ell) - 1);
        let sign = (rp & areg).count_ones() & 1 == 1;
        let a2 = areg ^ sp;
        let out_idx = (idx & !(((1 << ell) - 1) << a_shift)) | (a2 << a_shift);
        next[out_idx] += if sign { -a } else { a };
    }
    amp = next;

    // Step 6: the r' half is now uniform; contract it against the flat
    // state. The norm check certifies the factorization.
    let contracted_bits = b_bits + 2 * ell;
    let mut out = vec![Complex64::ZERO; 1 << contracted_bits];
    let scale = (1.0 / (1u64 << ell) as f64).sqrt();
    for (idx, &a) in amp.iter().enumerate() {
        out[idx & ((1 << contracted_bits) - 1)] += a * scale;
    }
    let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    assert!(
        (norm - 1.0).abs() < 1e-9,
        "coin register failed to factor out (norm {norm})"
    );
    DenseExtraction {
        ell,
        w1,
        amp: out,
    }
}

fn fwht_bit(amp: &mut [Complex64], bit: usize) {
    let b = 1usize << bit;
    for i in 0..amp.len() {
        if i & b == 0 {
            let a0 = amp[i];
            let a1 = amp[i | b];
            amp[i] = (a0 + a1) * SQRT_HALF;
            amp[i | b] = (a0 - a1) * SQRT_HALF;
        }
    }
}

impl DenseExtraction {
    /// Exact probabilities of measuring the extracted qubits in the given
    /// bases, marginalizing everything else.
    pub fn measurement_distribution(&self, basis: &[bool]) -> Vec<f64> {
        assert_eq!(basis.len(), self.ell);
        let a_shift = self.ell * self.w1;
        let mut work = self.amp.clone();
        for (j, &b) in basis.iter().enumerate() {
            if b {
                fwht_bit(&mut work, a_shift + j);
            }
        }
        let mut probs = vec![0.0; 1 << self.ell];
        for (idx, a) in work.iter().enumerate() {
            probs[(idx >> a_shift) & ((1 << self.ell) - 1)] += a.norm_sqr();
        }
        probs
    }
}

/// The projector-form probability of outcomes in mixed bases, computed
/// directly on the committed state vector: standard-subset outcomes project
/// with (I +- P_Z)/2, Hadamard-subset outcomes follow the twirled
/// (I +- P_X)/2 average.
pub fn projector_distribution(oracle: &DenseOracle, basis: &[bool]) -> Vec<f64> {
    let ell = oracle.ell;
    let w1 = oracle.w1;
    let masks = parity_masks(oracle);
    let i_set: Vec<usize> = (0..ell).filter(|&i| !basis[i]).collect();
    let j_set: Vec<usize> = (0..ell).filter(|&i| basis[i]).collect();
    let mut probs = vec![0.0; 1 << ell];
    for (slot, p) in probs.iter_mut().enumerate() {
        let a_of = |i: usize| (slot >> i) & 1 == 1;
        // Project onto the standard-subset outcome.
        let mut psi = oracle.amp.clone();
        for &i in &i_set {
            let mut next = vec![Complex64::ZERO; psi.len()];
            for (idx, &v) in psi.iter().enumerate() {
                if v == Complex64::ZERO {
                    continue;
                }
                let flipped = pz_flip(idx, i, w1);
                let half = v * 0.5;
                next[idx] += half;
                if a_of(i) {
                    next[flipped] -= half;
                } else {
                    next[flipped] += half;
                }
            }
            psi = next;
        }
        if j_set.is_empty() {
            *p = psi.iter().map(|v| v.norm_sqr()).sum();
            continue;
        }
        // Average over the sign twirl on the Hadamard subset.
        let mut total = 0.0;
        for twirl in 0..1usize << j_set.len() {
            let mut phi = psi.clone();
            // Apply P_Z^{s_J}.
            let mut perm_mask = 0usize;
            for (b, &j) in j_set.iter().enumerate() {
                if (twirl >> b) & 1 == 1 {
                    perm_mask ^= 1usize << (j * w1);
                }
            }
            if perm_mask != 0 {
                let mut next = vec![Complex64::ZERO; phi.len()];
                for (idx, &v) in phi.iter().enumerate() {
                    next[idx ^ perm_mask] = v;
                }
                phi = next;
            }
            // Project onto (I +- P_X_j)/2 with target u_j = a_j xor s_j.
            // P_X is diagonal with eigenvalue (-1)^{decoded parity}, so the
            // projector keeps exactly the components whose parity equals u.
            for (b, &j) in j_set.iter().enumerate() {
                let u = a_of(j) ^ ((twirl >> b) & 1 == 1);
                for (idx, v) in phi.iter_mut().enumerate() {
                    if px_sign(idx, j, w1, &masks) != u {
                        *v = Complex64::ZERO;
                    }
                }
            }
            total += phi.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        *p = total / (1u64 << j_set.len()) as f64;
    }
    probs
}

/// Report from running the Real and Ideal experiments side by side.
#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub trials: usize,
    /// TVD between decoded Real outputs (conditioned on acceptance) and
    /// Ideal outputs.
    pub tvd_conditioned: f64,
    /// Rejection rate of the Real experiment at the requested basis.
    pub reject_rate: f64,
    /// Worst rejection rate over the requested, all-standard and
    /// all-Hadamard bases (the delta of the binding experiments).
    pub delta_hat: f64,
    pub real_counts: BTreeMap<Vec<bool>, u64>,
    pub ideal_counts: BTreeMap<Vec<bool>, u64>,
}

/// Run Real (commit/open/verify/decode) and Ideal (commit/extract/measure)
/// for an honest prover and report the distance between them.
pub fn real_vs_ideal<R: Rng + ?Sized, F: FnMut() -> LogicalState>(
    keys: &SchemeKeysN,
    mut make_state: F,
    basis: &[bool],
    trials: usize,
    rng: &mut R,
) -> HarnessReport {
    let mut real = Vec::new();
    let mut rejects = 0usize;
    for _ in 0..trials {
        match real_experiment(keys, make_state(), basis, rng) {
            Some(m) => real.push(m),
            None => rejects += 1,
        }
    }
    let mut ideal = Vec::new();
    for _ in 0..trials {
        let (_, cs) = commit_multi(keys, make_state(), rng);
        if let Some(m) = ideal_measure(keys, cs, basis, rng) {
            ideal.push(m);
        }
    }
    // Rejection rates on the two uniform bases, for the delta estimate.
    let mut delta_hat = rejects as f64 / trials as f64;
    for uniform in [vec![false; basis.len()], vec![true; basis.len()]] {
        if uniform == basis {
            continue;
        }
        let side = (trials / 2).max(1);
        let mut r = 0usize;
        for _ in 0..side {
            if real_experiment(keys, make_state(), &uniform, rng).is_none() {
                r += 1;
            }
        }
        delta_hat = delta_hat.max(r as f64 / side as f64);
    }
    let real_counts = counts_from_samples(real);
    let ideal_counts = counts_from_samples(ideal);
    HarnessReport {
        trials,
        tvd_conditioned: empirical_tvd(&real_counts, &ideal_counts),
        reject_rate: rejects as f64 / trials as f64,
        delta_hat,
        real_counts,
        ideal_counts,
    }
}

/// One Real run: commit, open in the basis, verify everything, decode.
pub fn real_experiment<R: Rng + ?Sized>(
    keys: &SchemeKeysN,
    state: LogicalState,
    basis: &[bool],
    rng: &mut R,
) -> Option<Vec<bool>> {
    let (ys, mut cs) = commit_multi(keys, state, rng);
    let schedule: Vec<(usize, bool)> = basis.iter().copied().enumerate().collect();
    let openings = open_batch(&mut cs, &schedule, rng).expect("fresh commitment");
    let mut out = vec![false; basis.len()];
    for (j, opening) in &openings {
        if !ver_multi(keys, &ys, *j, opening) {
            return None;
        }
        out[*j] = out_multi(keys, &ys, *j, opening)?;
    }
    Some(out)
}

/// Commitment strings are needed by callers that drive Real manually.
pub fn commitment_strings(cs: &CommittedState) -> Vec<CommitmentString1> {
    (0..cs.ell())
        .map(|j| CommitmentString1::from_committed(cs, j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{MICRO, TINY};
    use crate::scheme::{gen_multi, KeyMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// The extraction circuit's measurement statistics must equal the
    /// projector expressions exactly, for every basis.
    #[test]
    fn dense_extraction_matches_projector_formula() {
        let mut rng = ChaCha12Rng::seed_from_u64(500);
        let keys = gen_multi(&MICRO, 1, KeyMode::SemiSuccinct, &mut rng);
        for state in [
            LogicalState::zero(),
            LogicalState::plus(),
            LogicalState::plus_i(),
            LogicalState::random(1, &mut rng),
        ] {
            let (_, cs) = commit_multi(&keys, state, &mut rng);
            let oracle = DenseOracle::from_committed(&cs).unwrap();
            let ext = extract_dense(&oracle);
            for basis in [[false], [true]] {
                let circuit = ext.measurement_distribution(&basis);
                let formula = projector_distribution(&oracle, &basis);
                let d = max_abs_diff(&circuit, &formula);
                assert!(d < 1e-9, "basis {basis:?}: circuit vs formula diff {d}");
            }
        }
    }

    #[test]
    fn dense_extraction_two_qubits_mixed_bases() {
        let mut rng = ChaCha12Rng::seed_from_u64(501);
        let keys = gen_multi(&TINY, 2, KeyMode::SemiSuccinct, &mut rng);
        for state in [LogicalState::bell(), LogicalState::random(2, &mut rng)] {
            let (_, cs) = commit_multi(&keys, state, &mut rng);
            let oracle = DenseOracle::from_committed(&cs).unwrap();
            let ext = extract_dense(&oracle);
            for basis in [
                [false, false],
                [true, true],
                [false, true],
                [true, false],
            ] {
                let circuit = ext.measurement_distribution(&basis);
                let formula = projector_distribution(&oracle, &basis);
                let d = max_abs_diff(&circuit, &formula);
                assert!(d < 1e-9, "basis {basis:?}: diff {d}");
            }
        }
    }

    /// On clean commitments the extracted state reproduces the logical
    /// state's statistics exactly; the structured procedure must agree with
    /// the dense circuit.
    #[test]
    fn extraction_matches_direct_measurement_when_clean() {
        let mut rng = ChaCha12Rng::seed_from_u64(502);
        let keys = gen_multi(&MICRO, 1, KeyMode::SemiSuccinct, &mut rng);
        let mut done = 0;
        while done < 5 {
            let state = LogicalState::random(1, &mut rng);
            let reference = state.basis_distribution(&[true]);
            let (_, cs) = commit_multi(&keys, state, &mut rng);
            if cs.lopsided_events > 0 {
                continue;
            }
            done += 1;
            let oracle = DenseOracle::from_committed(&cs).unwrap();
            let ext = extract_dense(&oracle);
            let d = max_abs_diff(&ext.measurement_distribution(&[true]), &reference);
            assert!(d < 1e-9, "clean extraction drifts from the state: {d}");
        }
    }

    /// The structured operational procedure agrees with the dense circuit
    /// as a distribution over outcomes.
    #[test]
    fn structured_ideal_matches_dense_distribution() {
        let mut rng = ChaCha12Rng::seed_from_u64(503);
        let keys = gen_multi(&TINY, 2, KeyMode::SemiSuccinct, &mut rng);
        let basis = [true, false];
        // One committed instance; compare observed frequencies on the
        // structured sampler against the dense circuit's exact numbers.
        let (_, cs) = commit_multi(&keys, LogicalState::bell(), &mut rng);
        let oracle = DenseOracle::from_committed(&cs).unwrap();
        let exact = extract_dense(&oracle).measurement_distribution(&basis);
        let trials = 4000;
        let mut counts = vec![0u64; 4];
        for _ in 0..trials {
            let m = ideal_measure(&keys, cs.clone(), &basis, &mut rng).unwrap();
            let idx = (m[0] as usize) | ((m[1] as usize) << 1);
            counts[idx] += 1;
        }
        let tvd: f64 = exact
            .iter()
            .enumerate()
            .map(|(i, &p)| (p - counts[i] as f64 / trials as f64).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tvd < 0.04, "structured vs dense extraction tvd {tvd}");
    }

    #[test]
    fn harness_zero_state() {
        let mut rng = ChaCha12Rng::seed_from_u64(504);
        let keys = gen_multi(&crate::params::SMALL, 1, KeyMode::SemiSuccinct, &mut rng);
        let report = real_vs_ideal(&keys, LogicalState::zero, &[false], 300, &mut rng);
        assert!(report.tvd_conditioned < 0.1, "tvd {}", report.tvd_conditioned);
        assert!(report.delta_hat >= report.reject_rate);
    }
}
