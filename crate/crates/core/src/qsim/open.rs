//! Lazy opening samplers for the structured committed state, plus exact
//! per-commitment outcome distributions used to cross-check the dense
//! oracle.

use super::{CommittedState, QsimError};
use crate::bitstring::BitString;
use rand::Rng;

/// Opening message for basis 1 (Hadamard): the standard-basis measurement
/// of the committed registers, interleaved as (d_i, x'_{i,d_i}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardOpening {
    pub d: BitString,
    pub xs: Vec<BitString>,
}

/// Opening message for basis 0 (standard): the Hadamard-basis measurement
/// of the committed registers, one (w+1)-bit string per register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardOpening {
    pub zs: Vec<BitString>,
}

/// Uniform sample from {z : z . parity = target}. The first component of
/// every claw parity vector is 1, so flipping bit 0 fixes the parity.
pub fn coset_sample<R: Rng + ?Sized>(
    parity: &BitString,
    target: bool,
    rng: &mut R,
) -> BitString {
    debug_assert!(parity.get(0));
    let mut z = BitString::random(parity.len(), rng);
    if z.dot(parity) != target {
        z.flip(0);
    }
    z
}

pub fn sample_open_hadamard<R: Rng + ?Sized>(
    cs: &mut CommittedState,
    j: usize,
    rng: &mut R,
) -> Result<HadamardOpening, QsimError> {
    cs.check_unopened(j)?;
    let w1 = cs.params.w() + 1;
    let table = &cs.tables[j];
    let mut d = BitString::zeros(w1);
    for (i, reg) in table.regs.iter().enumerate() {
        match reg.fixed {
            Some(t) => d.set(i, t),
            None => d.set(i, rng.gen()),
        }
    }
    if table.decoupled.is_none() {
        // Measure the qubit in the Hadamard basis and condition the free
        // parity carriers on the outcome.
        let m = cs.logical.measure_had(j, rng);
        let target_free = m ^ table.fixed_parity();
        let mut cur = false;
        for i in 0..w1 {
            if table.parity_mask.get(i) && table.regs[i].fixed.is_none() && d.get(i) {
                cur = !cur;
            }
        }
        if cur != target_free {
            let i0 = table
                .free_parity_register()
                .expect("non-decoupled qubit keeps a free parity carrier");
            d.flip(i0);
        }
    }
    let xs = (0..w1)
        .map(|i| table.regs[i].claw.x_bits(d.get(i)).clone())
        .collect();
    cs.opened[j] = Some(true);
    Ok(HadamardOpening { d, xs })
}

pub fn sample_open_standard<R: Rng + ?Sized>(
    cs: &mut CommittedState,
    j: usize,
    rng: &mut R,
) -> Result<StandardOpening, QsimError> {
    cs.check_unopened(j)?;
    let w1 = cs.params.w() + 1;
    let table = &cs.tables[j];
    let base = if table.decoupled.is_some() {
        // Free registers carry no branch information; their target bits
        // agree across both branches.
        table.preimage_string(false)
    } else {
        let b = cs.logical.measure_std(j, rng);
        cs.tables[j].preimage_string(b)
    };
    let table = &cs.tables[j];
    let zs = (0..w1)
        .map(|i| match table.regs[i].fixed {
            // A collapsed register measures to a fully uniform string.
            Some(_) => BitString::random(w1, rng),
            None => coset_sample(table.regs[i].claw.parity_vector(), base.get(i), rng),
        })
        .collect();
    cs.opened[j] = Some(false);
    Ok(StandardOpening { zs })
}

/// Exact distribution of the Hadamard-opening register measurement, indexed
/// by the (w+1)-bit value of d (bit i of the index is d_i).
pub fn hadamard_opening_distribution(cs: &CommittedState, j: usize) -> Vec<f64> {
    let w1 = cs.params.w() + 1;
    let table = &cs.tables[j];
    let free: Vec<usize> = (0..w1).filter(|&i| table.regs[i].fixed.is_none()).collect();
    let n_free = free.len();
    let mut out = vec![0.0; 1usize << w1];
    let p_had = [
        cs.logical.had_prob(j, false),
        cs.logical.had_prob(j, true),
    ];
    for (val, slot) in out.iter_mut().enumerate() {
        // Support: fixed registers must match.
        let mut ok = true;
        let mut parity = false;
        for i in 0..w1 {
            let bit = (val >> i) & 1 == 1;
            if let Some(t) = table.regs[i].fixed {
                if bit != t {
                    ok = false;
                    break;
                }
            }
            if bit && table.parity_mask.get(i) {
                parity = !parity;
            }
        }
        if !ok {
            continue;
        }
        *slot = if table.decoupled.is_some() {
            1.0 / (1u64 << n_free) as f64
        } else {
            p_had[parity as usize] / (1u64 << (n_free - 1)) as f64
        };
    }
    out
}

/// Collapse matching an observed Hadamard-opening measurement d.
pub fn apply_hadamard_outcome(cs: &mut CommittedState, j: usize, d: &BitString) {
    let table = &cs.tables[j];
    if table.decoupled.is_none() {
        let m = d.dot(&table.parity_mask);
        cs.logical.project_had(j, m);
    }
    cs.opened[j] = Some(true);
}

/// Exact distribution of the decoded register parities (m_1, ..., m_{w+1})
/// of a standard opening, indexed by the (w+1)-bit pattern.
pub fn standard_outcome_distribution(cs: &CommittedState, j: usize) -> Vec<f64> {
    let w1 = cs.params.w() + 1;
    let table = &cs.tables[j];
    let n_fixed = (0..w1).filter(|&i| table.regs[i].fixed.is_some()).count();
    let coin_weight = 1.0 / (1u64 << n_fixed) as f64;
    let mut out = vec![0.0; 1usize << w1];
    let branches: Vec<(bool, f64)> = if table.decoupled.is_some() {
        vec![(false, 1.0)]
    } else {
        let p1 = cs.logical.prob_one(j);
        vec![(false, 1.0 - p1), (true, p1)]
    };
    for (b, pb) in branches {
        if pb <= 0.0 {
            continue;
        }
        let pattern = table.preimage_string(b);
        // Free components are pinned to the branch pattern; fixed components
        // are fair coins.
        let free_template: Vec<(usize, bool)> = (0..w1)
            .filter(|&i| table.regs[i].fixed.is_none())
            .map(|i| (i, pattern.get(i)))
            .collect();
        let fixed_idx: Vec<usize> = (0..w1)
            .filter(|&i| table.regs[i].fixed.is_some())
            .collect();
        for coins in 0..(1usize << n_fixed) {
            let mut val = 0usize;
            for &(i, bit) in &free_template {
                if bit {
                    val |= 1 << i;
                }
            }
            for (c, &i) in fixed_idx.iter().enumerate() {
                if (coins >> c) & 1 == 1 {
                    val |= 1 << i;
                }
            }
            out[val] += pb * coin_weight;
        }
    }
    out
}

/// Collapse matching an observed standard-opening decoded pattern.
pub fn apply_standard_outcome(cs: &mut CommittedState, j: usize, m: &BitString) {
    let table = &cs.tables[j];
    if table.decoupled.is_none() {
        let i0 = table
            .free_parity_register()
            .expect("non-decoupled qubit keeps a free parity carrier");
        let b = m.get(i0) ^ table.preimage_string(false).get(i0);
        cs.logical.project_std(j, b);
    }
    cs.opened[j] = Some(false);
}
