//! Compiling a quantum proof that is verified by a few standard- or
//! Hadamard-basis measurements into an interactive argument: the prover
//! commits to the proof state under the shared-key scheme, and the verifier
//! either runs a full-basis test round or opens the sampled query locations
//! and applies the proof predicate to the decoded bits.

use crate::qsim::LogicalState;
use crate::scheme::{commit_multi, open_batch, out_multi, ver_multi, SchemeKeysN};
use rand::Rng;

/// A toy proof system: the proof state together with the verifier's query
/// sampler and acceptance predicate.
#[derive(Clone, Debug)]
pub struct XzPcp {
    pub ell: usize,
    /// Number of query locations (distinct indices).
    pub queries: usize,
    /// Basis per query (true = Hadamard).
    pub query_basis: bool,
    /// Accept iff every decoded query bit equals this value.
    pub expected: bool,
}

impl XzPcp {
    /// The shipped toy proof: every qubit is |+>, queried in the Hadamard
    /// basis, and all decoded bits must be 0.
    pub fn all_plus(ell: usize, queries: usize) -> XzPcp {
        assert!(queries <= ell);
        XzPcp {
            ell,
            queries,
            query_basis: true,
            expected: false,
        }
    }

    pub fn honest_proof_state(&self) -> LogicalState {
        LogicalState::plus_product(self.ell)
    }

    /// Sample distinct query locations and their bases.
    pub fn sample_queries<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(usize, bool)> {
        let mut indices: Vec<usize> = (0..self.ell).collect();
        for i in 0..self.queries {
            let j = rng.gen_range(i..self.ell);
            indices.swap(i, j);
        }
        indices[..self.queries]
            .iter()
            .map(|&i| (i, self.query_basis))
            .collect()
    }

    pub fn accepts(&self, outcomes: &[bool]) -> bool {
        outcomes.iter().all(|&m| m == self.expected)
    }
}

#[derive(Clone, Debug)]
pub struct PcpVerdict {
    pub accepted: bool,
    /// false = full-basis test round, true = proof-query round.
    pub query_round: bool,
    pub queried: Vec<(usize, bool)>,
    pub decoded: Vec<bool>,
}

/// One run of the compiled argument with a prover holding `proof_state`.
pub fn xz_pcp_argument<R: Rng + ?Sized>(
    keys: &SchemeKeysN,
    pcp: &XzPcp,
    proof_state: LogicalState,
    rng: &mut R,
) -> PcpVerdict {
    assert_eq!(proof_state.ell, pcp.ell);
    let (ys, mut cs) = commit_multi(keys, proof_state, rng);
    let query_round: bool = rng.gen();
    if !query_round {
        // Test round: a uniform common basis, all qubits opened and
        // verified; no predicate is applied.
        let h: bool = rng.gen();
        let schedule: Vec<(usize, bool)> = (0..pcp.ell).map(|j| (j, h)).collect();
        let openings = open_batch(&mut cs, &schedule, rng).expect("fresh commitment");
        let accepted = openings
            .iter()
            .all(|(j, opening)| ver_multi(keys, &ys, *j, opening));
        return PcpVerdict {
            accepted,
            query_round,
            queried: schedule,
            decoded: Vec::new(),
        };
    }
    // Query round: open the sampled locations, verify, decode, and apply
    // the proof predicate.
    let queried = pcp.sample_queries(rng);
    let openings = open_batch(&mut cs, &queried, rng).expect("fresh commitment");
    let mut decoded = Vec::with_capacity(openings.len());
    for (j, opening) in &openings {
        if !ver_multi(keys, &ys, *j, opening) {
            return PcpVerdict {
                accepted: false,
                query_round,
                queried,
                decoded,
            };
        }
        match out_multi(keys, &ys, *j, opening) {
            Some(bit) => decoded.push(bit),
            None => {
                return PcpVerdict {
                    accepted: false,
                    query_round,
                    queried,
                    decoded,
                }
            }
        }
    }
    // Restore query order: the batch opener groups standard-basis openings
    // first.
    let mut by_index = std::collections::BTreeMap::new();
    for ((j, _), bit) in openings.iter().zip(&decoded) {
        by_index.insert(*j, *bit);
    }
    let ordered: Vec<bool> = queried.iter().map(|(j, _)| by_index[j]).collect();
    PcpVerdict {
        accepted: pcp.accepts(&ordered),
        query_round,
        queried,
        decoded: ordered,
    }
}
