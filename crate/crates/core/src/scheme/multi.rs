//! Multi-qubit schemes: independent keys per qubit, a single shared key,
//! and the repetition wrapper.

use super::single::{gen1, out1, ver1, CommitmentString1, Opening1, SchemeKeys1};
use crate::params::LatticeParams;
use crate::qsim::{
    commit_qubit, sample_open_hadamard, sample_open_standard, CommittedState, LogicalState,
    QsimError,
};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyMode {
    /// One independent single-qubit key set per committed qubit.
    NonSuccinct,
    /// One single-qubit key set shared by every committed qubit.
    SemiSuccinct,
}

#[derive(Clone, Debug)]
pub struct SchemeKeysN {
    pub mode: KeyMode,
    pub ell: usize,
    keysets: Vec<SchemeKeys1>,
}

impl SchemeKeysN {
    pub fn keyset(&self, j: usize) -> &SchemeKeys1 {
        match self.mode {
            KeyMode::NonSuccinct => &self.keysets[j],
            KeyMode::SemiSuccinct => &self.keysets[0],
        }
    }

    pub fn params(&self) -> &LatticeParams {
        &self.keysets[0].params
    }

    /// Wrap an existing single-qubit key set as a shared-key multi scheme.
    pub fn semi_succinct(keys: SchemeKeys1, ell: usize) -> SchemeKeysN {
        SchemeKeysN {
            mode: KeyMode::SemiSuccinct,
            ell,
            keysets: vec![keys],
        }
    }
}

pub fn gen_multi<R: Rng + ?Sized>(
    params: &LatticeParams,
    ell: usize,
    mode: KeyMode,
    rng: &mut R,
) -> SchemeKeysN {
    assert!(ell >= 1);
    let count = match mode {
        KeyMode::NonSuccinct => ell,
        KeyMode::SemiSuccinct => 1,
    };
    let keysets = (0..count).map(|_| gen1(params, rng)).collect();
    SchemeKeysN { mode, ell, keysets }
}

/// Commit an ell-qubit state qubit-by-qubit.
pub fn commit_multi<R: Rng + ?Sized>(
    keys: &SchemeKeysN,
    state: LogicalState,
    rng: &mut R,
) -> (Vec<CommitmentString1>, CommittedState) {
    assert_eq!(state.ell, keys.ell);
    let params = *keys.params();
    let ell = state.ell;
    let mut cs = CommittedState {
        params,
        logical: state,
        tables: Vec::with_capacity(ell),
        opened: vec![None; ell],
        lopsided_events: 0,
    };
    for j in 0..ell {
        let (table, lops) = commit_qubit(&params, &keys.keyset(j).pairs, &mut cs.logical, j, rng);
        cs.tables.push(table);
        cs.lopsided_events += lops;
    }
    let ys = (0..ell)
        .map(|j| CommitmentString1::from_committed(&cs, j))
        .collect();
    (ys, cs)
}

pub fn open_multi<R: Rng + ?Sized>(
    cs: &mut CommittedState,
    j: usize,
    basis: bool,
    rng: &mut R,
) -> Result<Opening1, QsimError> {
    if basis {
        Ok(Opening1::Hadamard(sample_open_hadamard(cs, j, rng)?))
    } else {
        Ok(Opening1::Standard(sample_open_standard(cs, j, rng)?))
    }
}

pub fn ver_multi(
    keys: &SchemeKeysN,
    ys: &[CommitmentString1],
    j: usize,
    opening: &Opening1,
) -> bool {
    ver1(keys.params(), keys.keyset(j), &ys[j], opening)
}

pub fn out_multi(
    keys: &SchemeKeysN,
    ys: &[CommitmentString1],
    j: usize,
    opening: &Opening1,
) -> Option<bool> {
    out1(keys.params(), keys.keyset(j), &ys[j], opening)
}

/// Open a batch of qubits: standard-basis qubits first, then Hadamard-basis
/// qubits, matching the extraction order.
pub fn open_batch<R: Rng + ?Sized>(
    cs: &mut CommittedState,
    schedule: &[(usize, bool)],
    rng: &mut R,
) -> Result<Vec<(usize, Opening1)>, QsimError> {
    let mut out = Vec::with_capacity(schedule.len());
    for &(j, b) in schedule.iter().filter(|&&(_, b)| !b) {
        out.push((j, open_multi(cs, j, b, rng)?));
    }
    for &(j, b) in schedule.iter().filter(|&&(_, b)| b) {
        out.push((j, open_multi(cs, j, b, rng)?));
    }
    Ok(out)
}

/// Full honest experiment over a basis string: commit, open every qubit,
/// verify every opening, decode. None when any opening is rejected.
pub fn real_multi<R: Rng + ?Sized>(
    keys: &SchemeKeysN,
    state: LogicalState,
    basis: &[bool],
    rng: &mut R,
) -> Option<Vec<bool>> {
    assert_eq!(basis.len(), keys.ell);
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyClass {
    AllStandard,
    AllHadamard,
    Target,
}

/// Repetition schedule: one third of the copies in each class, rounded.
#[derive(Clone, Debug)]
pub struct RepetitionSchedule {
    pub classes: Vec<CopyClass>,
}

impl RepetitionSchedule {
    pub fn new(copies: usize) -> RepetitionSchedule {
        assert!(copies >= 3, "need at least one copy per class");
        let classes = (0..copies)
            .map(|i| match i % 3 {
                0 => CopyClass::AllStandard,
                1 => CopyClass::AllHadamard,
                _ => CopyClass::Target,
            })
            .collect();
        RepetitionSchedule { classes }
    }

    pub fn copies(&self) -> usize {
        self.classes.len()
    }
}

/// Commit to fresh copies of the state, open each copy per its class, and
/// output the decoded vector of one uniformly chosen target-basis copy.
/// Any rejected copy aborts the whole session.
pub fn run_repetition<R: Rng + ?Sized, F: FnMut() -> LogicalState>(
    keys: &SchemeKeysN,
    mut state_factory: F,
    basis: &[bool],
    copies: usize,
    rng: &mut R,
) -> Option<Vec<bool>> {
    let schedule = RepetitionSchedule::new(copies);
    let mut target_outputs: Vec<Vec<bool>> = Vec::new();
    for class in &schedule.classes {
        let copy_basis: Vec<bool> = match class {
            CopyClass::AllStandard => vec![false; keys.ell],
            CopyClass::AllHadamard => vec![true; keys.ell],
            CopyClass::Target => basis.to_vec(),
        };
        let out = real_multi(keys, state_factory(), &copy_basis, rng)?;
        if *class == CopyClass::Target {
            target_outputs.push(out);
        }
    }
    let pick = rng.gen_range(0..target_outputs.len());
    Some(target_outputs.swap_remove(pick))
}
