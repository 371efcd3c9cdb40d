//! Two-party session driver: the verifier and prover run as independent
//! tasks exchanging framed messages over an in-process duplex channel,
//! with transcript logging and per-message size accounting.
//!
//! Message framing is phase tag, type tag, length, payload (see the wire
//! module). Every byte on the wire is a deterministic function of the
//! session seed and configuration.

use crate::merkle::{Digest, MerkleProof};
use crate::params::LatticeParams;
use crate::qsim::LogicalState;
use crate::scheme::{
    open_batch, out_multi, ver_multi, CommitmentString1, KeyMode, SchemeKeysN,
};
use crate::succinct::{
    scommit, sout, sver, ArgumentOfKnowledge, SuccinctKeys, SuccinctOpening, TransparentReveal,
};
use crate::wire::{self, Reader, WireMessage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::mpsc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    /// One qubit, dedicated keys.
    Single,
    /// Independent keys per qubit.
    Multi,
    /// One shared key set.
    Semi,
    /// Shared keys plus hash root and interactive check phase.
    Succinct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSpec {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    Bell,
    Ghz(usize),
    PlusProduct(usize),
}

impl StateSpec {
    pub fn ell(&self) -> usize {
        match self {
            StateSpec::Zero | StateSpec::One | StateSpec::Plus | StateSpec::Minus
            | StateSpec::PlusI => 1,
            StateSpec::Bell => 2,
            StateSpec::Ghz(l) | StateSpec::PlusProduct(l) => *l,
        }
    }

    pub fn build(&self) -> LogicalState {
        match self {
            StateSpec::Zero => LogicalState::zero(),
            StateSpec::One => LogicalState::one(),
            StateSpec::Plus => LogicalState::plus(),
            StateSpec::Minus => LogicalState::minus(),
            StateSpec::PlusI => LogicalState::plus_i(),
            StateSpec::Bell => LogicalState::bell(),
            StateSpec::Ghz(l) => LogicalState::ghz(*l),
            StateSpec::PlusProduct(l) => LogicalState::plus_product(*l),
        }
    }

    pub fn parse(name: &str, ell: usize) -> Option<StateSpec> {
        match name {
            "zero" => Some(StateSpec::Zero),
            "one" => Some(StateSpec::One),
            "plus" => Some(StateSpec::Plus),
            "minus" => Some(StateSpec::Minus),
            "plus-i" => Some(StateSpec::PlusI),
            "bell" => Some(StateSpec::Bell),
            "ghz" => Some(StateSpec::Ghz(ell)),
            "plus-product" => Some(StateSpec::PlusProduct(ell)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub scheme: SchemeKind,
    pub params: LatticeParams,
    pub state: StateSpec,
    /// Opening request: qubit indices and bases (ignored when the check
    /// phase routes to the test protocol).
    pub open_request: Vec<(usize, bool)>,
    /// Record payload hex in the transcript (lengths are always recorded).
    pub record_payloads: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptRecord {
    pub direction: &'static str,
    pub phase: u8,
    pub msg_type: u8,
    pub len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload_hex: Option<String>,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("protocol violation: {0}")]
    Violation(&'static str),
    #[error("malformed message: {0}")]
    Wire(#[from] wire::WireError),
    #[error("channel closed")]
    ChannelClosed,
}

#[derive(Clone, Debug)]
pub struct SessionOutcome {
    /// Per-request verdicts and decoded bits (opening branch), or the test
    /// verdict (test branch).
    pub accepted: bool,
    pub decoded: Option<Vec<bool>>,
    pub check_coin: Option<bool>,
    pub test_verdict: Option<bool>,
    pub transcript: Vec<TranscriptRecord>,
}

// Phase tags.
pub const PHASE_COMMIT: u8 = 0;
pub const PHASE_CHECK: u8 = 1;
pub const PHASE_TEST: u8 = 2;
pub const PHASE_OPEN: u8 = 3;

struct Channel {
    tx: mpsc::Sender<Vec<u8>>,
    rx: mpsc::Receiver<Vec<u8>>,
}

impl Channel {
    fn pair() -> (Channel, Channel) {
        let (tx_a, rx_b) = mpsc::channel();
        let (tx_b, rx_a) = mpsc::channel();
        (Channel { tx: tx_a, rx: rx_a }, Channel { tx: tx_b, rx: rx_b })
    }

    fn send(&self, msg: &WireMessage) -> Result<(), SessionError> {
        self.tx
            .send(msg.encode())
            .map_err(|_| SessionError::ChannelClosed)
    }

    fn recv(&self) -> Result<WireMessage, SessionError> {
        let bytes = self.rx.recv().map_err(|_| SessionError::ChannelClosed)?;
        Ok(WireMessage::decode(&bytes)?)
    }
}

fn msg(phase: u8, msg_type: u8, payload: Vec<u8>) -> WireMessage {
    WireMessage {
        phase,
        msg_type,
        payload,
    }
}

/// The prover task: commits to the configured state and answers opening,
/// check and test messages. The structured simulator tracks claw tables,
/// so the task also holds the key material that the simulation needs; the
/// messages it emits depend only on its random tape and the wire traffic.
fn prover_task(
    config: &SessionConfig,
    keys: ProverKeys,
    chan: &Channel,
    seed: u64,
) -> Result<(), SessionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = config.params;

    // COMMIT: receive the public key, commit, reply.
    let m = chan.recv()?;
    if (m.phase, m.msg_type) != (PHASE_COMMIT, 0) {
        return Err(SessionError::Violation("expected public key"));
    }
    match keys {
        ProverKeys::Plain(keys_n) => {
            let (ys, mut cs) = crate::scheme::commit_multi(&keys_n, config.state.build(), &mut rng);
            let mut payload = Vec::new();
            wire::put_u32(&mut payload, ys.len() as u32);
            for y in &ys {
                wire::encode_commitment1(&mut payload, y);
            }
            chan.send(&msg(PHASE_COMMIT, 1, payload))?;

            let m = chan.recv()?;
            if (m.phase, m.msg_type) != (PHASE_OPEN, 0) {
                return Err(SessionError::Violation("expected open request"));
            }
            let request = decode_open_request(&m.payload)?;
            let openings = open_batch(&mut cs, &request, &mut rng)
                .map_err(|_| SessionError::Violation("bad open request"))?;
            let mut payload = Vec::new();
            wire::encode_opening_batch(&mut payload, &openings);
            chan.send(&msg(PHASE_OPEN, 1, payload))?;
        }
        ProverKeys::Succinct(skeys) => {
            let mut commitment = scommit(&skeys, config.state.build(), &mut rng);
            chan.send(&msg(PHASE_COMMIT, 1, commitment.rt.to_vec()))?;

            // CHECK: send the commitment-knowledge proof, then follow the
            // verifier's coin.
            let aok = TransparentReveal;
            let st = crate::succinct::AokStatement::ChunksHashTo {
                hk: skeys.hk,
                rt: commitment.rt,
            };
            let witness = crate::succinct::AokWitness {
                y_chunks: crate::succinct::y_chunks(&commitment.ys),
                z_chunks: Vec::new(),
            };
            let proof = aok.prove(&st, &witness);
            chan.send(&msg(PHASE_CHECK, 0, proof.bytes))?;

            let m = chan.recv()?;
            if (m.phase, m.msg_type) != (PHASE_CHECK, 1) || m.payload.len() != 1 {
                return Err(SessionError::Violation("expected check coin"));
            }
            if m.payload[0] == 1 {
                run_test_prover(&skeys, &mut commitment, chan, &mut rng)?;
            } else {
                let m = chan.recv()?;
                if (m.phase, m.msg_type) != (PHASE_OPEN, 0) {
                    return Err(SessionError::Violation("expected open request"));
                }
                let request = decode_open_request(&m.payload)?;
                let mut payload = Vec::new();
                wire::put_u32(&mut payload, request.len() as u32);
                for (j, basis) in request {
                    let so = crate::succinct::sopen(&skeys, &mut commitment, j, basis, &mut rng)
                        .map_err(|_| SessionError::Violation("bad open request"))?;
                    wire::put_u32(&mut payload, j as u32);
                    encode_succinct_opening(&mut payload, &so);
                }
                chan.send(&msg(PHASE_OPEN, 1, payload))?;
            }
        }
    }
    let _ = params;
    Ok(())
}

/// Prover side of the test protocol over the wire.
fn run_test_prover(
    skeys: &SuccinctKeys,
    commitment: &mut crate::succinct::SuccinctCommitment,
    chan: &Channel,
    rng: &mut ChaCha8Rng,
) -> Result<(), SessionError> {
    let m = chan.recv()?;
    if (m.phase, m.msg_type) != (PHASE_TEST, 0) || m.payload.len() != 1 {
        return Err(SessionError::Violation("expected test basis"));
    }
    let basis = m.payload[0] == 1;
    let ell = commitment.cs.ell();
    let mut zs = Vec::with_capacity(ell);
    for j in 0..ell {
        zs.push(
            crate::scheme::open_multi(&mut commitment.cs, j, basis, rng)
                .map_err(|_| SessionError::Violation("state already consumed"))?,
        );
    }
    let zc = crate::succinct::z_chunks(&zs);
    let rt_open = crate::merkle::heval(&skeys.hk, &zc).expect("nonempty");
    chan.send(&msg(PHASE_TEST, 1, rt_open.to_vec()))?;

    let aok = TransparentReveal;
    let st1 = crate::succinct::AokStatement::ChunksHashTo {
        hk: skeys.hk,
        rt: rt_open,
    };
    let proof1 = aok.prove(
        &st1,
        &crate::succinct::AokWitness {
            y_chunks: Vec::new(),
            z_chunks: zc.clone(),
        },
    );
    chan.send(&msg(PHASE_TEST, 2, proof1.bytes))?;

    // The verifier reveals its scheme key; the prover can now argue
    // consistency of both roots.
    let m = chan.recv()?;
    if (m.phase, m.msg_type) != (PHASE_TEST, 3) {
        return Err(SessionError::Violation("expected key reveal"));
    }
    let mut r = Reader::new(&m.payload);
    let revealed = wire::decode_scheme_keys(&mut r)?;
    r.finish()?;
    let st2 = crate::succinct::AokStatement::ValidFullOpening {
        hk: skeys.hk,
        rt: commitment.rt,
        rt_open,
        basis,
    };
    let proof2 = aok.prove(
        &st2,
        &crate::succinct::AokWitness {
            y_chunks: crate::succinct::y_chunks(&commitment.ys),
            z_chunks: zc,
        },
    );
    let _ = revealed;
    chan.send(&msg(PHASE_TEST, 4, proof2.bytes))?;
    Ok(())
}

enum ProverKeys {
    Plain(SchemeKeysN),
    Succinct(SuccinctKeys),
}

fn decode_open_request(payload: &[u8]) -> Result<Vec<(usize, bool)>, SessionError> {
    let mut r = Reader::new(payload);
    let count = r.u32()? as usize;
    if count > 1 << 12 {
        return Err(SessionError::Violation("oversized open request"));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let j = r.u32()? as usize;
        let b = match r.u8()? {
            0 => false,
            1 => true,
            _ => return Err(SessionError::Violation("bad basis byte")),
        };
        out.push((j, b));
    }
    r.finish()?;
    Ok(out)
}

fn encode_open_request(request: &[(usize, bool)]) -> Vec<u8> {
    let mut out = Vec::new();
    wire::put_u32(&mut out, request.len() as u32);
    for &(j, b) in request {
        wire::put_u32(&mut out, j as u32);
        out.push(u8::from(b));
    }
    out
}

fn encode_succinct_opening(out: &mut Vec<u8>, so: &SuccinctOpening) {
    wire::put_u32(out, so.y_chunk.len() as u32);
    out.extend_from_slice(&so.y_chunk);
    let proof = so.proof.encode();
    wire::put_u32(out, proof.len() as u32);
    out.extend_from_slice(&proof);
    wire::encode_opening1(out, &so.opening);
}

fn decode_succinct_opening(
    params: &LatticeParams,
    r: &mut Reader,
) -> Result<SuccinctOpening, SessionError> {
    let ylen = r.u32()? as usize;
    let y_chunk = r.take(ylen)?.to_vec();
    let plen = r.u32()? as usize;
    let proof = MerkleProof::decode(r.take(plen)?)
        .map_err(|_| SessionError::Violation("bad membership proof"))?;
    let opening = wire::decode_opening1(params, r)?;
    Ok(SuccinctOpening {
        y_chunk,
        proof,
        opening,
    })
}

/// Run one full session. The verifier drives the choreography, records the
/// transcript in both directions and produces the outcome; the prover runs
/// as its own task on the other end of the channel.
pub fn run_session(
    config: &SessionConfig,
    keys: &SessionKeys,
    seed: u64,
) -> Result<SessionOutcome, SessionError> {
    let (v_chan, p_chan) = Channel::pair();
    let prover_keys = match keys {
        SessionKeys::Plain(k) => ProverKeys::Plain(k.clone()),
        SessionKeys::Succinct(k) => ProverKeys::Succinct(k.clone()),
    };
    let p_config = config.clone();
    let prover = std::thread::spawn(move || prover_task(&p_config, prover_keys, &p_chan, seed ^ 1));

    let result = verifier_task(config, keys, &v_chan, seed);
    let prover_result = prover.join().map_err(|_| SessionError::ChannelClosed)?;
    // The verifier outcome decides; a prover error only matters if the
    // verifier also failed.
    match (result, prover_result) {
        (Ok(outcome), _) => Ok(outcome),
        (Err(e), _) => Err(e),
    }
}

pub enum SessionKeys {
    Plain(SchemeKeysN),
    Succinct(SuccinctKeys),
}

impl SessionKeys {
    pub fn generate<R: Rng + ?Sized>(
        scheme: SchemeKind,
        params: &LatticeParams,
        ell: usize,
        rng: &mut R,
    ) -> SessionKeys {
        match scheme {
            SchemeKind::Single => SessionKeys::Plain(crate::scheme::gen_multi(
                params,
                1,
                KeyMode::NonSuccinct,
                rng,
            )),
            SchemeKind::Multi => SessionKeys::Plain(crate::scheme::gen_multi(
                params,
                ell,
                KeyMode::NonSuccinct,
                rng,
            )),
            SchemeKind::Semi => SessionKeys::Plain(crate::scheme::gen_multi(
                params,
                ell,
                KeyMode::SemiSuccinct,
                rng,
            )),
            SchemeKind::Succinct => SessionKeys::Succinct(crate::succinct::sgen(params, rng)),
        }
    }
}

struct TranscriptSink {
    records: Vec<TranscriptRecord>,
    record_payloads: bool,
}

impl TranscriptSink {
    fn log(&mut self, direction: &'static str, m: &WireMessage) {
        self.records.push(TranscriptRecord {
            direction,
            phase: m.phase,
            msg_type: m.msg_type,
            len: m.payload.len(),
            payload_hex: self.record_payloads.then(|| hex::encode(&m.payload)),
        });
    }
}

fn verifier_task(
    config: &SessionConfig,
    keys: &SessionKeys,
    chan: &Channel,
    seed: u64,
) -> Result<SessionOutcome, SessionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let mut sink = TranscriptSink {
        records: Vec::new(),
        record_payloads: config.record_payloads,
    };
    let params = config.params;

    let send = |m: WireMessage, sink: &mut TranscriptSink| -> Result<(), SessionError> {
        sink.log("V->P", &m);
        chan.send(&m)
    };
    let recv = |sink: &mut TranscriptSink| -> Result<WireMessage, SessionError> {
        let m = chan.recv()?;
        sink.log("P->V", &m);
        Ok(m)
    };

    match keys {
        SessionKeys::Plain(keys_n) => {
            // COMMIT.
            let mut payload = Vec::new();
            match keys_n.mode {
                KeyMode::NonSuccinct => {
                    wire::put_u32(&mut payload, keys_n.ell as u32);
                    for j in 0..keys_n.ell {
                        wire::encode_scheme_public(&mut payload, keys_n.keyset(j));
                    }
                }
                KeyMode::SemiSuccinct => {
                    wire::put_u32(&mut payload, 1);
                    wire::encode_scheme_public(&mut payload, keys_n.keyset(0));
                }
            }
            send(msg(PHASE_COMMIT, 0, payload), &mut sink)?;
            let m = recv(&mut sink)?;
            if (m.phase, m.msg_type) != (PHASE_COMMIT, 1) {
                return Err(SessionError::Violation("expected commitment"));
            }
            let mut r = Reader::new(&m.payload);
            let count = r.u32()? as usize;
            if count != config.state.ell() {
                return Err(SessionError::Violation("commitment count"));
            }
            let ys: Vec<CommitmentString1> = (0..count)
                .map(|_| wire::decode_commitment1(&mut r))
                .collect::<Result<_, _>>()?;
            r.finish()?;

            // OPEN.
            send(
                msg(PHASE_OPEN, 0, encode_open_request(&config.open_request)),
                &mut sink,
            )?;
            let m = recv(&mut sink)?;
            if (m.phase, m.msg_type) != (PHASE_OPEN, 1) {
                return Err(SessionError::Violation("expected openings"));
            }
            let mut r = Reader::new(&m.payload);
            let openings = wire::decode_opening_batch(&params, &mut r)?;
            r.finish()?;
            if openings.len() != config.open_request.len() {
                return Err(SessionError::Violation("opening count"));
            }

            let mut accepted = true;
            let mut decoded = Vec::new();
            for ((j_req, b_req), (j, opening)) in config.open_request.iter().zip(&openings) {
                if j_req != j || opening.basis() != *b_req {
                    return Err(SessionError::Violation("opening does not match request"));
                }
                if !ver_multi(keys_n, &ys, *j, opening) {
                    accepted = false;
                    break;
                }
                match out_multi(keys_n, &ys, *j, opening) {
                    Some(bit) => decoded.push(bit),
                    None => {
                        accepted = false;
                        break;
                    }
                }
            }
            Ok(SessionOutcome {
                accepted,
                decoded: accepted.then_some(decoded),
                check_coin: None,
                test_verdict: None,
                transcript: sink.records,
            })
        }
        SessionKeys::Succinct(skeys) => {
            // COMMIT: scheme public keys plus the hash key.
            let mut payload = Vec::new();
            wire::encode_scheme_public(&mut payload, &skeys.keys1);
            payload.extend_from_slice(&skeys.hk.0);
            send(msg(PHASE_COMMIT, 0, payload), &mut sink)?;
            let m = recv(&mut sink)?;
            if (m.phase, m.msg_type) != (PHASE_COMMIT, 1) || m.payload.len() != 32 {
                return Err(SessionError::Violation("expected root"));
            }
            let rt: Digest = m.payload.as_slice().try_into().unwrap();

            // CHECK: the commitment-knowledge argument.
            let m = recv(&mut sink)?;
            if (m.phase, m.msg_type) != (PHASE_CHECK, 0) {
                return Err(SessionError::Violation("expected commitment argument"));
            }
            let aok = TransparentReveal;
            let st = crate::succinct::AokStatement::ChunksHashTo { hk: skeys.hk, rt };
            let ok = aok.verify(
                &st,
                &crate::succinct::AokProof {
                    bytes: m.payload.clone(),
                },
                &crate::succinct::AokVerifierContext { keys: &skeys.keys1 },
            );
            if !ok {
                return Ok(SessionOutcome {
                    accepted: false,
                    decoded: None,
                    check_coin: None,
                    test_verdict: None,
                    transcript: sink.records,
                });
            }
            let coin: bool = rng.gen();
            send(msg(PHASE_CHECK, 1, vec![u8::from(coin)]), &mut sink)?;

            if coin {
                let outcome = verifier_test(skeys, rt, chan, &mut rng, &mut sink)?;
                Ok(SessionOutcome {
                    accepted: outcome,
                    decoded: None,
                    check_coin: Some(true),
                    test_verdict: Some(outcome),
                    transcript: sink.records,
                })
            } else {
                send(
                    msg(PHASE_OPEN, 0, encode_open_request(&config.open_request)),
                    &mut sink,
                )?;
                let m = recv(&mut sink)?;
                if (m.phase, m.msg_type) != (PHASE_OPEN, 1) {
                    return Err(SessionError::Violation("expected openings"));
                }
                let mut r = Reader::new(&m.payload);
                let count = r.u32()? as usize;
                if count != config.open_request.len() {
                    return Err(SessionError::Violation("opening count"));
                }
                let mut accepted = true;
                let mut decoded = Vec::new();
                for &(j_req, b_req) in &config.open_request {
                    let j = r.u32()? as usize;
                    let so = decode_succinct_opening(&params, &mut r)?;
                    if j != j_req || so.opening.basis() != b_req {
                        return Err(SessionError::Violation("opening does not match request"));
                    }
                    if !sver(skeys, &rt, j, &so) {
                        accepted = false;
                        break;
                    }
                    match sout(skeys, &so) {
                        Some(bit) => decoded.push(bit),
                        None => {
                            accepted = false;
                            break;
                        }
                    }
                }
                if accepted {
                    r.finish()?;
                }
                Ok(SessionOutcome {
                    accepted,
                    decoded: accepted.then_some(decoded),
                    check_coin: Some(false),
                    test_verdict: None,
                    transcript: sink.records,
                })
            }
        }
    }
}

fn verifier_test(
    skeys: &SuccinctKeys,
    rt: Digest,
    chan: &Channel,
    rng: &mut ChaCha8Rng,
    sink: &mut TranscriptSink,
) -> Result<bool, SessionError> {
    let basis: bool = rng.gen();
    let m = msg(PHASE_TEST, 0, vec![u8::from(basis)]);
    sink.log("V->P", &m);
    chan.send(&m)?;

    let m1 = chan.recv()?;
    sink.log("P->V", &m1);
    if (m1.phase, m1.msg_type) != (PHASE_TEST, 1) || m1.payload.len() != 32 {
        return Err(SessionError::Violation("expected opening root"));
    }
    let rt_open: Digest = m1.payload.as_slice().try_into().unwrap();

    let m2 = chan.recv()?;
    sink.log("P->V", &m2);
    if (m2.phase, m2.msg_type) != (PHASE_TEST, 2) {
        return Err(SessionError::Violation("expected opening argument"));
    }
    let aok = TransparentReveal;
    let ok1 = aok.verify(
        &crate::succinct::AokStatement::ChunksHashTo {
            hk: skeys.hk,
            rt: rt_open,
        },
        &crate::succinct::AokProof {
            bytes: m2.payload.clone(),
        },
        &crate::succinct::AokVerifierContext { keys: &skeys.keys1 },
    );

    // Reveal the scheme key.
    let mut payload = Vec::new();
    wire::encode_scheme_keys(&mut payload, &skeys.keys1);
    let m3 = msg(PHASE_TEST, 3, payload);
    sink.log("V->P", &m3);
    chan.send(&m3)?;

    let m4 = chan.recv()?;
    sink.log("P->V", &m4);
    if (m4.phase, m4.msg_type) != (PHASE_TEST, 4) {
        return Err(SessionError::Violation("expected consistency argument"));
    }
    let ok2 = aok.verify(
        &crate::succinct::AokStatement::ValidFullOpening {
            hk: skeys.hk,
            rt,
            rt_open,
            basis,
        },
        &crate::succinct::AokProof {
            bytes: m4.payload.clone(),
        },
        &crate::succinct::AokVerifierContext { keys: &skeys.keys1 },
    );
    Ok(ok1 && ok2)
}

/// Serialize a transcript as newline-delimited records.
pub fn transcript_jsonl(records: &[TranscriptRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("serializable record"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Message size classes for the communication accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SizeClass {
    /// Size depends only on the parameter set (and at most logarithmically
    /// on the state length through membership-proof depth).
    Succinct,
    /// The transparent-reveal argument payloads: declared non-succinct.
    RevealAok,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedMessage {
    pub direction: &'static str,
    pub phase: u8,
    pub msg_type: u8,
    pub label: &'static str,
    pub bytes: usize,
    pub class: SizeClass,
}

fn matrix_bytes(rows: usize, cols: usize) -> usize {
    24 + 8 * rows * cols
}

fn vector_bytes(len: usize) -> usize {
    24 + 8 * len
}

fn public_key_bytes(p: &LatticeParams) -> usize {
    matrix_bytes(p.m, p.n) + vector_bytes(p.m)
}

fn secret_key_bytes(p: &LatticeParams) -> usize {
    public_key_bytes(p)
        + matrix_bytes(p.pad(), p.n)
        + matrix_bytes(p.w(), p.pad())
        + 4
        + p.n.div_ceil(8)
}

fn scheme_public_bytes(p: &LatticeParams) -> usize {
    40 + 4 + (p.w() + 2) * public_key_bytes(p)
}

fn scheme_keys_bytes(p: &LatticeParams) -> usize {
    40 + 4 + (p.w() + 2) * secret_key_bytes(p)
}

pub fn commitment1_bytes(p: &LatticeParams) -> usize {
    4 + (p.w() + 2) * vector_bytes(p.m)
}

pub fn opening1_bytes(p: &LatticeParams) -> usize {
    let w1 = p.w() + 1;
    // basis byte + bit count + packed bits (both bases pack w1*(w1) bits).
    1 + 4 + (w1 * w1).div_ceil(8)
}

fn chunk_list_bytes(chunks: usize, each: usize) -> usize {
    4 + chunks * (4 + each)
}

fn merkle_proof_bytes(chunk_len: usize, depth: usize) -> usize {
    8 + 4 + chunk_len + 1 + 32 * depth
}

/// Exact predicted sizes for a succinct session (opening branch with the
/// given request, or the test branch).
pub fn predicted_succinct_sizes(
    params: &LatticeParams,
    ell: usize,
    open_request: usize,
    test_branch: bool,
) -> Vec<PredictedMessage> {
    let p = params;
    let ybytes = commitment1_bytes(p);
    let zbytes = opening1_bytes(p);
    let depth = ell.next_power_of_two().max(2).trailing_zeros() as usize;
    let mut out = vec![
        PredictedMessage {
            direction: "V->P",
            phase: PHASE_COMMIT,
            msg_type: 0,
            label: "public-key",
            bytes: scheme_public_bytes(p) + 32,
            class: SizeClass::Succinct,
        },
        PredictedMessage {
            direction: "P->V",
            phase: PHASE_COMMIT,
            msg_type: 1,
            label: "root",
            bytes: 32,
            class: SizeClass::Succinct,
        },
        PredictedMessage {
            direction: "P->V",
            phase: PHASE_CHECK,
            msg_type: 0,
            label: "commitment-argument",
            bytes: chunk_list_bytes(ell, ybytes) + 4,
            class: SizeClass::RevealAok,
        },
        PredictedMessage {
            direction: "V->P",
            phase: PHASE_CHECK,
            msg_type: 1,
            label: "check-coin",
            bytes: 1,
            class: SizeClass::Succinct,
        },
    ];
    if test_branch {
        out.push(PredictedMessage {
            direction: "V->P",
            phase: PHASE_TEST,
            msg_type: 0,
            label: "test-basis",
            bytes: 1,
            class: SizeClass::Succinct,
        });
        out.push(PredictedMessage {
            direction: "P->V",
            phase: PHASE_TEST,
            msg_type: 1,
            label: "opening-root",
            bytes: 32,
            class: SizeClass::Succinct,
        });
        out.push(PredictedMessage {
            direction: "P->V",
            phase: PHASE_TEST,
            msg_type: 2,
            label: "opening-argument",
            bytes: 4 + chunk_list_bytes(ell, zbytes),
            class: SizeClass::RevealAok,
        });
        out.push(PredictedMessage {
            direction: "V->P",
            phase: PHASE_TEST,
            msg_type: 3,
            label: "key-reveal",
            bytes: scheme_keys_bytes(p),
            class: SizeClass::Succinct,
        });
        out.push(PredictedMessage {
            direction: "P->V",
            phase: PHASE_TEST,
            msg_type: 4,
            label: "consistency-argument",
            bytes: chunk_list_bytes(ell, ybytes) + chunk_list_bytes(ell, zbytes),
            class: SizeClass::RevealAok,
        });
    } else {
        out.push(PredictedMessage {
            direction: "V->P",
            phase: PHASE_OPEN,
            msg_type: 0,
            label: "open-request",
            bytes: 4 + 5 * open_request,
            class: SizeClass::Succinct,
        });
        out.push(PredictedMessage {
            direction: "P->V",
            phase: PHASE_OPEN,
            msg_type: 1,
            label: "openings",
            bytes: 4
                + open_request
                    * (4 + 4 + ybytes + 4 + merkle_proof_bytes(ybytes, depth) + zbytes),
            class: SizeClass::Succinct,
        });
    }
    out
}
