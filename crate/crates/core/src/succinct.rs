//! Succinct commitments: a hash root over the per-qubit commitment strings,
//! an interactive commitment check, a state-consuming test protocol, and
//! per-qubit local openings.
//!
//! The interactive checks run over a pluggable argument-of-knowledge
//! interface. The shipped instantiation is a transparent reveal: the prover
//! sends the witness and the verifier re-checks the relation. It is
//! functionally correct but neither succinct nor hiding, and the session
//! accounting reports its payloads separately so that the remaining
//! messages can be checked for size independence from the state length.

use crate::merkle::{heval, hgen, hopen, hver, Digest, HashKey, MerkleProof};
use crate::params::LatticeParams;
use crate::qsim::{CommittedState, QsimError};
use crate::scheme::{
    commit_multi, gen1, open_multi, out1, ver1, CommitmentString1, Opening1, SchemeKeys1,
    SchemeKeysN,
};
use crate::wire;
use rand::Rng;

/// Key material: one shared single-qubit key set plus a hash key. Neither
/// part depends on the number of committed qubits.
#[derive(Clone, Debug)]
pub struct SuccinctKeys {
    pub keys1: SchemeKeys1,
    pub hk: HashKey,
}

pub fn sgen<R: Rng + ?Sized>(params: &LatticeParams, rng: &mut R) -> SuccinctKeys {
    SuccinctKeys {
        keys1: gen1(params, rng),
        hk: hgen(rng),
    }
}

/// Prover-side output of the commitment phase: the root (sent), the full
/// commitment strings and the residual state (kept).
#[derive(Clone, Debug)]
pub struct SuccinctCommitment {
    pub rt: Digest,
    pub ys: Vec<CommitmentString1>,
    pub cs: CommittedState,
}

/// One chunk per qubit: the serialized commitment string.
pub fn y_chunks(ys: &[CommitmentString1]) -> Vec<Vec<u8>> {
    ys.iter()
        .map(|y| {
            let mut buf = Vec::new();
            wire::encode_commitment1(&mut buf, y);
            buf
        })
        .collect()
}

/// One chunk per qubit: the serialized opening.
pub fn z_chunks(zs: &[Opening1]) -> Vec<Vec<u8>> {
    zs.iter()
        .map(|z| {
            let mut buf = Vec::new();
            wire::encode_opening1(&mut buf, z);
            buf
        })
        .collect()
}

pub fn scommit<R: Rng + ?Sized>(
    keys: &SuccinctKeys,
    state: crate::qsim::LogicalState,
    rng: &mut R,
) -> SuccinctCommitment {
    let ell = state.ell;
    let shared = SchemeKeysN::semi_succinct(keys.keys1.clone(), ell);
    let (ys, cs) = commit_multi(&shared, state, rng);
    let rt = heval(&keys.hk, &y_chunks(&ys)).expect("at least one qubit");
    SuccinctCommitment { rt, ys, cs }
}

// --- argument-of-knowledge interface ---

#[derive(Clone, Debug)]
pub enum AokStatement {
    /// Knowledge of chunks hashing to the root.
    ChunksHashTo { hk: HashKey, rt: Digest },
    /// Knowledge of a commitment string and a full uniform-basis opening
    /// that the scheme verifier accepts, consistent with both roots.
    ValidFullOpening {
        hk: HashKey,
        rt: Digest,
        rt_open: Digest,
        basis: bool,
    },
}

#[derive(Clone, Debug)]
pub struct AokWitness {
    pub y_chunks: Vec<Vec<u8>>,
    pub z_chunks: Vec<Vec<u8>>,
}

#[derive(Clone, Debug)]
pub struct AokProof {
    pub bytes: Vec<u8>,
}

pub struct AokVerifierContext<'a> {
    pub keys: &'a SchemeKeys1,
}

pub trait ArgumentOfKnowledge {
    fn prove(&self, statement: &AokStatement, witness: &AokWitness) -> AokProof;
    fn verify(&self, statement: &AokStatement, proof: &AokProof, ctx: &AokVerifierContext)
        -> bool;
    /// Whether proofs are short (poly in the security parameter only). The
    /// reveal instantiation is not; sessions account for it separately.
    fn is_succinct(&self) -> bool;
    fn name(&self) -> &'static str;
}

/// Check the underlying relation directly (shared by the reveal prover and
/// verifier).
fn relation_holds(
    statement: &AokStatement,
    witness: &AokWitness,
    keys: &SchemeKeys1,
) -> bool {
    match statement {
        AokStatement::ChunksHashTo { hk, rt } => {
            let chunks = if witness.z_chunks.is_empty() {
                &witness.y_chunks
            } else {
                &witness.z_chunks
            };
            !chunks.is_empty() && heval(hk, chunks) == Ok(*rt)
        }
        AokStatement::ValidFullOpening {
            hk,
            rt,
            rt_open,
            basis,
        } => {
            if witness.y_chunks.is_empty()
                || witness.y_chunks.len() != witness.z_chunks.len()
                || heval(hk, &witness.y_chunks) != Ok(*rt)
                || heval(hk, &witness.z_chunks) != Ok(*rt_open)
            {
                return false;
            }
            let params = keys.params;
            for (ybuf, zbuf) in witness.y_chunks.iter().zip(&witness.z_chunks) {
                let mut r = wire::Reader::new(ybuf);
                let Ok(ys) = wire::decode_commitment1(&mut r) else {
                    return false;
                };
                if r.finish().is_err() {
                    return false;
                }
                let mut r = wire::Reader::new(zbuf);
                let Ok(opening) = wire::decode_opening1(&params, &mut r) else {
                    return false;
                };
                if r.finish().is_err() || opening.basis() != *basis {
                    return false;
                }
                if !ver1(&params, keys, &ys, &opening) {
                    return false;
                }
            }
            true
        }
    }
}

/// Transparent-reveal instantiation: the "proof" is the witness itself.
/// Correct, not succinct, not hiding; it stands in for a real succinct
/// argument behind the same interface.
pub struct TransparentReveal;

fn encode_chunk_list(out: &mut Vec<u8>, chunks: &[Vec<u8>]) {
    wire::put_u32(out, chunks.len() as u32);
    for c in chunks {
        wire::put_u32(out, c.len() as u32);
        out.extend_from_slice(c);
    }
}

fn decode_chunk_list(r: &mut wire::Reader) -> Result<Vec<Vec<u8>>, wire::WireError> {
    let count = r.u32()? as usize;
    if count > 1 << 16 {
        return Err(wire::WireError::OutOfRange("chunk count"));
    }
    (0..count)
        .map(|_| {
            let len = r.u32()? as usize;
            Ok(r.take(len)?.to_vec())
        })
        .collect()
}

impl ArgumentOfKnowledge for TransparentReveal {
    fn prove(&self, _statement: &AokStatement, witness: &AokWitness) -> AokProof {
        let mut bytes = Vec::new();
        encode_chunk_list(&mut bytes, &witness.y_chunks);
        encode_chunk_list(&mut bytes, &witness.z_chunks);
        AokProof { bytes }
    }

    fn verify(
        &self,
        statement: &AokStatement,
        proof: &AokProof,
        ctx: &AokVerifierContext,
    ) -> bool {
        let mut r = wire::Reader::new(&proof.bytes);
        let Ok(y_chunks) = decode_chunk_list(&mut r) else {
            return false;
        };
        let Ok(z_chunks) = decode_chunk_list(&mut r) else {
            return false;
        };
        if r.finish().is_err() {
            return false;
        }
        relation_holds(statement, &AokWitness { y_chunks, z_chunks }, ctx.keys)
    }

    fn is_succinct(&self) -> bool {
        false
    }

    fn name(&self) -> &'static str {
        "transparent-reveal"
    }
}

// --- the interactive phases ---

/// The commitment-check protocol: the prover argues knowledge of the
/// preimage chunks behind the root. With the reveal instantiation the
/// verifier recomputes the root from the revealed chunks.
pub fn ver_commit_protocol(
    keys: &SuccinctKeys,
    rt: &Digest,
    ys: &[CommitmentString1],
    aok: &dyn ArgumentOfKnowledge,
) -> bool {
    let statement = AokStatement::ChunksHashTo {
        hk: keys.hk,
        rt: *rt,
    };
    let witness = AokWitness {
        y_chunks: y_chunks(ys),
        z_chunks: Vec::new(),
    };
    let proof = aok.prove(&statement, &witness);
    aok.verify(
        &statement,
        &proof,
        &AokVerifierContext { keys: &keys.keys1 },
    )
}

#[derive(Clone, Debug)]
pub struct TestOutcome {
    pub basis: bool,
    pub rt_open: Digest,
    pub opening_aok_ok: bool,
    pub consistency_aok_ok: bool,
    pub accepted: bool,
}

/// The state-consuming test: a random common basis, a full opening hashed
/// into a second root, an argument of knowledge for the opening, the key
/// reveal, and an argument that the opening verifies against both roots.
pub fn test_protocol<R: Rng + ?Sized>(
    keys: &SuccinctKeys,
    commitment: &mut SuccinctCommitment,
    aok: &dyn ArgumentOfKnowledge,
    rng: &mut R,
) -> Result<TestOutcome, QsimError> {
    let ell = commitment.cs.ell();
    // Step 1: the verifier's basis challenge.
    let basis: bool = rng.gen();
    // Step 2: the prover opens every qubit in that basis and hashes the
    // openings.
    let mut zs = Vec::with_capacity(ell);
    for j in 0..ell {
        zs.push(open_multi(&mut commitment.cs, j, basis, rng)?);
    }
    let zc = z_chunks(&zs);
    let rt_open = heval(&keys.hk, &zc).expect("at least one qubit");
    // Step 3: argument of knowledge for the opening preimage. The prover
    // does not know the scheme secret at this point.
    let st1 = AokStatement::ChunksHashTo {
        hk: keys.hk,
        rt: rt_open,
    };
    let w1 = AokWitness {
        y_chunks: Vec::new(),
        z_chunks: zc.clone(),
    };
    let proof1 = aok.prove(&st1, &w1);
    let opening_aok_ok = aok.verify(
        &st1,
        &proof1,
        &AokVerifierContext { keys: &keys.keys1 },
    );
    // Step 4: the verifier reveals the scheme secret key (modeled by the
    // prover now building the second witness). Step 5: argument that the
    // openings verify against both roots in the challenged basis.
    let st2 = AokStatement::ValidFullOpening {
        hk: keys.hk,
        rt: commitment.rt,
        rt_open,
        basis,
    };
    let w2 = AokWitness {
        y_chunks: y_chunks(&commitment.ys),
        z_chunks: zc,
    };
    let proof2 = aok.prove(&st2, &w2);
    let consistency_aok_ok = aok.verify(
        &st2,
        &proof2,
        &AokVerifierContext { keys: &keys.keys1 },
    );
    Ok(TestOutcome {
        basis,
        rt_open,
        opening_aok_ok,
        consistency_aok_ok,
        accepted: opening_aok_ok && consistency_aok_ok,
    })
}

/// Per-qubit succinct opening: the chunk, its membership proof, and the
/// scheme opening.
#[derive(Clone, Debug)]
pub struct SuccinctOpening {
    pub y_chunk: Vec<u8>,
    pub proof: MerkleProof,
    pub opening: Opening1,
}

pub fn sopen<R: Rng + ?Sized>(
    keys: &SuccinctKeys,
    commitment: &mut SuccinctCommitment,
    j: usize,
    basis: bool,
    rng: &mut R,
) -> Result<SuccinctOpening, QsimError> {
    let chunks = y_chunks(&commitment.ys);
    let proof = hopen(&keys.hk, &chunks, j).map_err(|_| QsimError::BadQubit(j))?;
    let opening = open_multi(&mut commitment.cs, j, basis, rng)?;
    Ok(SuccinctOpening {
        y_chunk: chunks[j].clone(),
        proof,
        opening,
    })
}

pub fn sver(keys: &SuccinctKeys, rt: &Digest, j: usize, so: &SuccinctOpening) -> bool {
    if !hver(&keys.hk, rt, j, &so.y_chunk, &so.proof) {
        return false;
    }
    let mut r = wire::Reader::new(&so.y_chunk);
    let Ok(ys) = wire::decode_commitment1(&mut r) else {
        return false;
    };
    if r.finish().is_err() {
        return false;
    }
    ver1(&keys.keys1.params, &keys.keys1, &ys, &so.opening)
}

pub fn sout(keys: &SuccinctKeys, so: &SuccinctOpening) -> Option<bool> {
    let mut r = wire::Reader::new(&so.y_chunk);
    let ys = wire::decode_commitment1(&mut r).ok()?;
    r.finish().ok()?;
    out1(&keys.keys1.params, &keys.keys1, &ys, &so.opening)
}

#[derive(Debug)]
pub enum CheckOutcome {
    /// The coin chose the test branch; the state is consumed.
    Tested(TestOutcome),
    /// The coin chose the opening branch; the state remains openable.
    ProceedToOpen,
}

/// The check phase: run the commitment-check protocol, then a fair coin
/// routes the session to the test protocol (consuming the state) or on to
/// the opening phase.
pub fn run_check_phase<R: Rng + ?Sized>(
    keys: &SuccinctKeys,
    commitment: &mut SuccinctCommitment,
    aok: &dyn ArgumentOfKnowledge,
    rng: &mut R,
) -> Result<Option<CheckOutcome>, QsimError> {
    if !ver_commit_protocol(keys, &commitment.rt, &commitment.ys, aok) {
        return Ok(None);
    }
    let c: bool = rng.gen();
    if c {
        let outcome = test_protocol(keys, commitment, aok, rng)?;
        Ok(Some(CheckOutcome::Tested(outcome)))
    } else {
        Ok(Some(CheckOutcome::ProceedToOpen))
    }
}
