//! The commitment schemes built over the function family and the simulator.

pub mod multi;
pub mod single;

pub use multi::{
    commit_multi, gen_multi, open_batch, open_multi, out_multi, real_multi, run_repetition,
    ver_multi, CopyClass, KeyMode, RepetitionSchedule, SchemeKeysN,
};
pub use single::{
    gen1, honest_commit1, honest_open1, out1, out1_hadamard, out1_standard, real_single, ver1,
    ver1_hadamard, ver1_standard, CommitmentString1, Opening1, SchemeKeys1,
};
