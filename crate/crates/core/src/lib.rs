//! Classical commitments to quantum states at desk scale.
//!
//! Building blocks: modular lattice arithmetic with a gadget trapdoor, a
//! noisy trapdoor claw-free function family, an exact structured simulator
//! for the honest quantum prover, single- and multi-qubit two-layer
//! commitment schemes, a Merkle hash with local openings, a succinct
//! commitment protocol with a pluggable argument-of-knowledge, observable
//! extraction, scripted adversaries, and a two-party session driver.

pub mod attacks;
pub mod bitstring;
pub mod extract;
pub mod lattice;
pub mod merkle;
pub mod ntcf;
pub mod params;
pub mod pcp;
pub mod qsim;
pub mod scheme;
pub mod session;
pub mod stats;
pub mod succinct;
pub mod wire;

pub use bitstring::BitString;
pub use params::LatticeParams;
