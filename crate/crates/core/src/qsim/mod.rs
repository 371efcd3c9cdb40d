//! Exact simulation of the honest quantum prover.
//!
//! The post-commitment state of one committed qubit lives on w+1 register
//! pairs, each collapsed by the image measurement onto a two-valued claw
//! subspace. The simulator therefore tracks, per qubit, the logical
//! amplitudes plus one claw table per register, and samples openings from
//! closed-form conditional distributions instead of a 2^((w+1)^2) state
//! vector. Image measurements whose noise falls outside the evaluation
//! support collapse a single branch ("lopsided" events); these are simulated
//! faithfully, including the rare cascade where a qubit loses its last
//! parity-carrying register and its Hadamard value becomes pinned.

mod commit;
mod dense;
mod logical;
mod open;
#[cfg(test)]
mod tests;

pub use commit::{commit_qubit, commit_qubit_forced, full_commit, weak_commit, LopsidedForcing};
pub use dense::DenseOracle;
pub use logical::LogicalState;
pub use open::{
    apply_hadamard_outcome, apply_standard_outcome, hadamard_opening_distribution,
    sample_open_hadamard, sample_open_standard, standard_outcome_distribution, HadamardOpening,
    StandardOpening,
};

/// Uniform sample from the parity coset (exposed for the scripted
/// single-layer adversaries).
pub fn coset_sample_pub<R: rand::Rng + ?Sized>(
    parity: &crate::bitstring::BitString,
    target: bool,
    rng: &mut R,
) -> crate::bitstring::BitString {
    open::coset_sample(parity, target, rng)
}

use crate::bitstring::BitString;
use crate::lattice::ZqVector;
use crate::ntcf::Claw;
use crate::params::LatticeParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QsimError {
    #[error("qubit {0} was already opened")]
    AlreadyOpened(usize),
    #[error("qubit index {0} out of range")]
    BadQubit(usize),
    #[error("state too large for dense simulation ({0} effective qubits)")]
    TooLarge(usize),
}

/// One weak (single-layer) commitment: the image, the claw behind it, and
/// whether the image measurement collapsed the superposition onto a single
/// branch.
#[derive(Clone, Debug)]
pub struct WeakCommitRecord {
    pub y: ZqVector,
    pub claw: Claw,
    /// Some(t): only branch t survived (lopsided image).
    pub fixed: Option<bool>,
}

/// Full two-layer commitment of one logical qubit.
#[derive(Clone, Debug)]
pub struct QubitTable {
    pub layer1: WeakCommitRecord,
    /// w+1 second-layer records; register 0 carries the branch qubit of the
    /// first layer, registers 1..w carry its preimage bits.
    pub regs: Vec<WeakCommitRecord>,
    /// Parity mask v = (1, x0 xor x1) of the first-layer claw (w+1 bits).
    /// The inner product d . v is the decoded Hadamard-basis bit.
    pub parity_mask: BitString,
    /// Set when every register with a set parity-mask bit has collapsed:
    /// the qubit's Hadamard value is pinned to this bit from commit time on.
    pub decoupled: Option<bool>,
}

impl QubitTable {
    /// Layer-1 preimage string (b, J(x_b)) of length w+1.
    pub fn preimage_string(&self, b: bool) -> BitString {
        let mut s = BitString::zeros(self.parity_mask.len());
        s.set(0, b);
        let xb = self.layer1.claw.x_bits(b);
        for i in 0..xb.len() {
            if xb.get(i) {
                s.set(i + 1, true);
            }
        }
        s
    }

    /// XOR of the fixed-register branch bits weighted by the parity mask.
    pub fn fixed_parity(&self) -> bool {
        let mut p = false;
        for (i, reg) in self.regs.iter().enumerate() {
            if let Some(t) = reg.fixed {
                if t && self.parity_mask.get(i) {
                    p = !p;
                }
            }
        }
        p
    }

    /// Index of a register that still carries the qubit's parity, if any.
    pub fn free_parity_register(&self) -> Option<usize> {
        (0..self.regs.len())
            .find(|&i| self.parity_mask.get(i) && self.regs[i].fixed.is_none())
    }

    /// The full commitment string for this qubit: (y_0, y_1, ..., y_{w+1}).
    pub fn commitment_ys(&self) -> Vec<ZqVector> {
        let mut ys = Vec::with_capacity(1 + self.regs.len());
        ys.push(self.layer1.y.clone());
        ys.extend(self.regs.iter().map(|r| r.y.clone()));
        ys
    }
}

/// Structured (lazy) representation of the prover's post-commitment state.
#[derive(Clone, Debug)]
pub struct CommittedState {
    pub params: LatticeParams,
    pub logical: LogicalState,
    pub tables: Vec<QubitTable>,
    /// Per-qubit opened status: None, or the basis it was opened in
    /// (false = standard, true = Hadamard).
    pub opened: Vec<Option<bool>>,
    /// Count of single-branch image measurements across all layers.
    pub lopsided_events: usize,
}

impl CommittedState {
    pub fn ell(&self) -> usize {
        self.tables.len()
    }

    pub fn check_unopened(&self, j: usize) -> Result<(), QsimError> {
        if j >= self.tables.len() {
            return Err(QsimError::BadQubit(j));
        }
        if self.opened[j].is_some() {
            return Err(QsimError::AlreadyOpened(j));
        }
        Ok(())
    }

    pub fn commitment_string(&self, j: usize) -> Vec<ZqVector> {
        self.tables[j].commitment_ys()
    }
}
