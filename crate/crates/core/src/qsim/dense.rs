//! Brute-force oracle: the post-commitment state as an explicit amplitude
//! vector over the claw-collapsed registers.
//!
//! Physically, each committed register pair is confined by its image
//! measurement to a two-valued subspace (the claw branches), so the exact
//! post-commitment state of ell qubits lives on ell*(w+1) effective branch
//! qubits. The oracle materializes that vector directly from the logical
//! amplitudes and the claw phase structure -- independently of the closed
//! forms used by the lazy samplers -- and measures it literally.

use super::open::{coset_sample, HadamardOpening, StandardOpening};
use super::{CommittedState, QsimError, QubitTable};
use crate::bitstring::BitString;
use crate::params::LatticeParams;
use num_complex::Complex64;
use rand::Rng;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Largest number of simulated qubits (branch registers plus extraction
/// ancillas) the dense path accepts.
pub const DENSE_QUBIT_BUDGET: usize = 26;

#[derive(Clone)]
pub struct DenseOracle {
    pub params: LatticeParams,
    pub ell: usize,
    /// Registers per qubit: w + 1.
    pub w1: usize,
    /// Amplitudes over ell*w1 branch bits; bit j*w1 + i is register i of
    /// qubit j.
    pub amp: Vec<Complex64>,
    tables: Vec<QubitTable>,
    opened: Vec<Option<bool>>,
}

impl DenseOracle {
    /// Materialize the post-commitment state vector of a committed state.
    pub fn from_committed(cs: &CommittedState) -> Result<DenseOracle, QsimError> {
        let w1 = cs.params.w() + 1;
        let ell = cs.ell();
        let total_bits = ell * w1;
        if total_bits + 3 * ell > DENSE_QUBIT_BUDGET {
            return Err(QsimError::TooLarge(total_bits + 3 * ell));
        }
        assert!(
            cs.opened.iter().all(|o| o.is_none()),
            "dense oracle wants a fresh commitment"
        );

        // Per qubit: preimage masks for both branches, and the support
        // constraint from collapsed registers.
        let mut pre_mask = vec![[0u64; 2]; ell];
        let mut fixed_mask = vec![0u64; ell];
        let mut fixed_val = vec![0u64; ell];
        for (j, table) in cs.tables.iter().enumerate() {
            for b in [false, true] {
                let p = table.preimage_string(b);
                let mut m = 0u64;
                for i in 0..w1 {
                    if p.get(i) {
                        m |= 1 << i;
                    }
                }
                pre_mask[j][b as usize] = m;
            }
            for (i, reg) in table.regs.iter().enumerate() {
                if let Some(t) = reg.fixed {
                    fixed_mask[j] |= 1 << i;
                    if t {
                        fixed_val[j] |= 1 << i;
                    }
                }
            }
        }

        let logical = cs.logical.amplitudes();
        let dim = 1usize << total_bits;
        let mut amp = vec![Complex64::ZERO; dim];
        let block_mask = (1u64 << w1) - 1;
        for (idx, slot) in amp.iter_mut().enumerate() {
            // Support check against collapsed registers.
            let mut ok = true;
            for j in 0..ell {
                let d = (idx as u64 >> (j * w1)) & block_mask;
                if d & fixed_mask[j] != fixed_val[j] {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut acc = Complex64::ZERO;
            for (s, &a) in logical.iter().enumerate() {
                if a == Complex64::ZERO {
                    continue;
                }
                let mut parity = 0u32;
                for j in 0..ell {
                    let d = (idx as u64 >> (j * w1)) & block_mask;
                    let mask = pre_mask[j][(s >> j) & 1];
                    parity ^= (d & mask).count_ones() & 1;
                }
                acc += if parity & 1 == 1 { -a } else { a };
            }
            *slot = acc;
        }
        let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "materialized state has zero norm");
        for a in &mut amp {
            *a /= norm;
        }
        Ok(DenseOracle {
            params: cs.params,
            ell,
            w1,
            amp,
            tables: cs.tables.clone(),
            opened: cs.opened.clone(),
        })
    }

    pub fn table(&self, j: usize) -> &QubitTable {
        &self.tables[j]
    }

    fn check_unopened(&self, j: usize) -> Result<(), QsimError> {
        if j >= self.ell {
            return Err(QsimError::BadQubit(j));
        }
        if self.opened[j].is_some() {
            return Err(QsimError::AlreadyOpened(j));
        }
        Ok(())
    }

    fn block_of(&self, idx: usize, j: usize) -> u64 {
        (idx as u64 >> (j * self.w1)) & ((1u64 << self.w1) - 1)
    }

    /// Marginal probabilities of qubit j's register block in the standard
    /// basis (the Hadamard-opening measurement).
    pub fn hadamard_block_distribution(&self, j: usize) -> Vec<f64> {
        let mut probs = vec![0.0; 1usize << self.w1];
        for (idx, a) in self.amp.iter().enumerate() {
            probs[self.block_of(idx, j) as usize] += a.norm_sqr();
        }
        probs
    }

    /// Marginal probabilities of qubit j's register block in the Hadamard
    /// basis (the standard-opening measurement).
    pub fn standard_block_distribution(&self, j: usize) -> Vec<f64> {
        let mut work = self.amp.clone();
        for i in 0..self.w1 {
            fwht_bit(&mut work, j * self.w1 + i);
        }
        let mut probs = vec![0.0; 1usize << self.w1];
        for (idx, a) in work.iter().enumerate() {
            probs[self.block_of(idx, j) as usize] += a.norm_sqr();
        }
        probs
    }

    fn project_block(&mut self, j: usize, val: u64) {
        for (idx, a) in self.amp.iter_mut().enumerate() {
            if (idx as u64 >> (j * self.w1)) & ((1u64 << self.w1) - 1) != val {
                *a = Complex64::ZERO;
            }
        }
        let norm: f64 = self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12);
        for a in &mut self.amp {
            *a /= norm;
        }
    }

    pub fn apply_hadamard_outcome(&mut self, j: usize, val: u64) {
        self.project_block(j, val);
        self.opened[j] = Some(true);
    }

    pub fn apply_standard_outcome(&mut self, j: usize, val: u64) {
        for i in 0..self.w1 {
            fwht_bit(&mut self.amp, j * self.w1 + i);
        }
        self.project_block(j, val);
        self.opened[j] = Some(false);
    }

    /// Literal standard-basis measurement of qubit j's registers.
    pub fn open_hadamard<R: Rng + ?Sized>(
        &mut self,
        j: usize,
        rng: &mut R,
    ) -> Result<HadamardOpening, QsimError> {
        self.check_unopened(j)?;
        let probs = self.hadamard_block_distribution(j);
        let val = sample_index(&probs, rng) as u64;
        self.apply_hadamard_outcome(j, val);
        let table = &self.tables[j];
        let mut d = BitString::zeros(self.w1);
        for i in 0..self.w1 {
            d.set(i, (val >> i) & 1 == 1);
        }
        let xs = (0..self.w1)
            .map(|i| table.regs[i].claw.x_bits(d.get(i)).clone())
            .collect();
        Ok(HadamardOpening { d, xs })
    }

    /// Literal Hadamard-basis measurement of qubit j's registers. The
    /// per-register measurement string z_i is uniform on the coset selected
    /// by the measured parity bit.
    pub fn open_standard<R: Rng + ?Sized>(
        &mut self,
        j: usize,
        rng: &mut R,
    ) -> Result<StandardOpening, QsimError> {
        self.check_unopened(j)?;
        let probs = self.standard_block_distribution(j);
        let val = sample_index(&probs, rng) as u64;
        self.apply_standard_outcome(j, val);
        let table = &self.tables[j];
        let zs = (0..self.w1)
            .map(|i| {
                coset_sample(
                    table.regs[i].claw.parity_vector(),
                    (val >> i) & 1 == 1,
                    rng,
                )
            })
            .collect();
        Ok(StandardOpening { zs })
    }
}

pub(crate) fn fwht_bit(amp: &mut [Complex64], bit: usize) {
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

pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut target = rng.gen_range(0.0..total.max(f64::MIN_POSITIVE));
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            if target < p {
                return i;
            }
            target -= p;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).expect("empty distribution")
}
