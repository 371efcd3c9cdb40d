//! Command-line driver: key generation, file-based commit/open/verify,
//! bulk protocol sessions with CSV summaries, the scripted attacks, the
//! extraction harness, the statistics helpers, and the proof-compiler demo.

use clap::{Args, Parser, Subcommand};
use qcommit_core::extract::real_vs_ideal;
use qcommit_core::attacks::{xflip_full_attack, zflip_weak_attack};
use qcommit_core::ntcf::ntcf_gen;
use qcommit_core::params::{self, LatticeParams};
use qcommit_core::pcp::{xz_pcp_argument, XzPcp};
use qcommit_core::qsim::LogicalState;
use qcommit_core::scheme::{gen_multi, KeyMode, Opening1, SchemeKeysN};
use qcommit_core::session::{
    predicted_succinct_sizes, run_session, transcript_jsonl, SchemeKind, SessionConfig,
    SessionKeys, StateSpec,
};
use qcommit_core::stats::{chi_square, counts_from_samples, tvd_vs_reference};
use qcommit_core::wire::{self, Reader};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qcommit",
    about = "Classical commitments to quantum states, at desk scale",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Parameter set: MICRO, SMALL, or TINY.
    #[arg(long, default_value = "SMALL")]
    params: String,
    /// Seed for every random choice in the command.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate commitment keys and write them to files.
    Keygen {
        #[command(flatten)]
        common: CommonArgs,
        /// Public-key output path.
        #[arg(long, default_value = "pk.bin")]
        pk_out: PathBuf,
        /// Secret-key output path.
        #[arg(long, default_value = "sk.bin")]
        sk_out: PathBuf,
    },
    /// Commit to a named state; writes the commitment and the prover state.
    Commit {
        #[command(flatten)]
        common: CommonArgs,
        /// Secret-key file (the prover simulator tracks claw tables).
        #[arg(long, default_value = "sk.bin")]
        keys: PathBuf,
        /// State name: zero|one|plus|minus|plus-i|bell|ghz|plus-product.
        #[arg(long, default_value = "plus")]
        state: String,
        /// Qubit count for ghz / plus-product.
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value = "commitment.bin")]
        commitment_out: PathBuf,
        #[arg(long, default_value = "prover_state.bin")]
        state_out: PathBuf,
    },
    /// Open one qubit of a committed state.
    Open {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "sk.bin")]
        keys: PathBuf,
        #[arg(long, default_value = "prover_state.bin")]
        state_in: PathBuf,
        /// Qubit index to open.
        #[arg(long, default_value_t = 0)]
        qubit: usize,
        /// Basis: standard or hadamard.
        #[arg(long, default_value = "hadamard")]
        basis: String,
        #[arg(long, default_value = "opening.bin")]
        opening_out: PathBuf,
    },
    /// Verify an opening and decode the measurement bit.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "sk.bin")]
        keys: PathBuf,
        #[arg(long, default_value = "commitment.bin")]
        commitment: PathBuf,
        #[arg(long, default_value = "opening.bin")]
        opening: PathBuf,
        #[arg(long, default_value_t = 0)]
        qubit: usize,
    },
    /// Run full two-party sessions and print a CSV summary.
    Session {
        #[command(flatten)]
        common: CommonArgs,
        /// Scheme: single|multi|semi|succinct.
        #[arg(long, default_value = "succinct")]
        scheme: String,
        #[arg(long, default_value = "bell")]
        state: String,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// Basis string for the opening request, e.g. "01" (0 = standard).
        #[arg(long, default_value = "00")]
        basis: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Write the first session transcript (JSON lines) here.
        #[arg(long)]
        transcript_out: Option<PathBuf>,
        /// Write the CSV summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Demonstrate the phase-flip attack on the single-layer scheme and its
    /// failure against the two-layer scheme.
    AttackDemo {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Real-vs-Ideal extraction harness and print a CSV table.
    ExtractorDemo {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Statistics of an outcome file against a reference distribution.
    Stats {
        /// Input: one outcome per line (arbitrary token).
        #[arg(long)]
        input: PathBuf,
        /// Reference: "uniform" or a comma-separated token=prob list.
        #[arg(long, default_value = "uniform")]
        reference: String,
    },
    /// Compile the toy all-plus proof into an interactive argument.
    PcpDemo {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        queries: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Run the cheating all-zeros prover instead of the honest one.
        #[arg(long, default_value_t = false)]
        cheat: bool,
    },
}

fn parse_params(name: &str) -> Result<LatticeParams, String> {
    let p = params::by_name(name).ok_or_else(|| format!("unknown parameter set {name}"))?;
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn parse_state(name: &str, ell: usize) -> Result<StateSpec, String> {
    StateSpec::parse(name, ell).ok_or_else(|| format!("unknown state {name}"))
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| e.to_string()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Keygen {
            common,
            pk_out,
            sk_out,
        } => {
            let params = parse_params(&common.params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let keys = qcommit_core::scheme::gen1(&params, &mut rng);
            let mut pk_buf = Vec::new();
            wire::encode_scheme_public(&mut pk_buf, &keys);
            fs::write(&pk_out, &pk_buf).map_err(|e| e.to_string())?;
            let mut sk_buf = Vec::new();
            wire::encode_scheme_keys(&mut sk_buf, &keys);
            fs::write(&sk_out, &sk_buf).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} bytes) and {} ({} bytes)",
                pk_out.display(),
                pk_buf.len(),
                sk_out.display(),
                sk_buf.len()
            );
            Ok(())
        }
        Command::Commit {
            common,
            keys,
            state,
            ell,
            commitment_out,
            state_out,
        } => {
            let params = parse_params(&common.params)?;
            let keys = load_keys(&keys)?;
            if keys.params != params {
                return Err("key file was generated under different parameters".into());
            }
            let spec = parse_state(&state, ell)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let shared = SchemeKeysN::semi_succinct(keys.clone(), spec.ell());
            let (ys, cs) = qcommit_core::scheme::commit_multi(&shared, spec.build(), &mut rng);
            let mut cbuf = Vec::new();
            wire::put_u32(&mut cbuf, ys.len() as u32);
            for y in &ys {
                wire::encode_commitment1(&mut cbuf, y);
            }
            fs::write(&commitment_out, &cbuf).map_err(|e| e.to_string())?;
            let mut sbuf = Vec::new();
            wire::encode_committed_state(&mut sbuf, &cs);
            fs::write(&state_out, &sbuf).map_err(|e| e.to_string())?;
            println!(
                "committed {} qubit(s); commitment {} bytes, prover state {} bytes, lopsided events {}",
                spec.ell(),
                cbuf.len(),
                sbuf.len(),
                cs.lopsided_events
            );
            Ok(())
        }
        Command::Open {
            common,
            keys,
            state_in,
            qubit,
            basis,
            opening_out,
        } => {
            let keys = load_keys(&keys)?;
            let basis = match basis.as_str() {
                "standard" => false,
                "hadamard" => true,
                _ => return Err("basis must be standard or hadamard".into()),
            };
            let bytes = fs::read(&state_in).map_err(|e| e.to_string())?;
            let mut r = Reader::new(&bytes);
            let mut cs =
                wire::decode_committed_state(&keys, &mut r).map_err(|e| e.to_string())?;
            r.finish().map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let opening = qcommit_core::scheme::open_multi(&mut cs, qubit, basis, &mut rng)
                .map_err(|e| e.to_string())?;
            let mut obuf = Vec::new();
            wire::encode_opening1(&mut obuf, &opening);
            fs::write(&opening_out, &obuf).map_err(|e| e.to_string())?;
            // Persist the collapsed state so further qubits can be opened.
            let mut sbuf = Vec::new();
            wire::encode_committed_state(&mut sbuf, &cs);
            fs::write(&state_in, &sbuf).map_err(|e| e.to_string())?;
            println!(
                "opened qubit {qubit} in the {} basis ({} bytes)",
                if basis { "hadamard" } else { "standard" },
                obuf.len()
            );
            Ok(())
        }
        Command::Verify {
            common,
            keys,
            commitment,
            opening,
            qubit,
        } => {
            let params = parse_params(&common.params)?;
            let keys = load_keys(&keys)?;
            let cbytes = fs::read(&commitment).map_err(|e| e.to_string())?;
            let mut r = Reader::new(&cbytes);
            let count = r.u32().map_err(|e| e.to_string())? as usize;
            let mut ys = Vec::with_capacity(count);
            for _ in 0..count {
                ys.push(wire::decode_commitment1(&mut r).map_err(|e| e.to_string())?);
            }
            r.finish().map_err(|e| e.to_string())?;
            if qubit >= ys.len() {
                return Err(format!("qubit {qubit} out of range ({count} committed)"));
            }
            let obytes = fs::read(&opening).map_err(|e| e.to_string())?;
            let mut r = Reader::new(&obytes);
            let opening: Opening1 =
                wire::decode_opening1(&params, &mut r).map_err(|e| e.to_string())?;
            r.finish().map_err(|e| e.to_string())?;
            let ok = qcommit_core::scheme::ver1(&params, &keys, &ys[qubit], &opening);
            if ok {
                let m = qcommit_core::scheme::out1(&params, &keys, &ys[qubit], &opening)
                    .ok_or("decode failed")?;
                println!("accepted; decoded bit = {}", u8::from(m));
                Ok(())
            } else {
                println!("rejected");
                Ok(())
            }
        }
        Command::Session {
            common,
            scheme,
            state,
            ell,
            basis,
            trials,
            transcript_out,
            out,
        } => {
            let params = parse_params(&common.params)?;
            let scheme = match scheme.as_str() {
                "single" => SchemeKind::Single,
                "multi" => SchemeKind::Multi,
                "semi" => SchemeKind::Semi,
                "succinct" => SchemeKind::Succinct,
                other => return Err(format!("unknown scheme {other}")),
            };
            let spec = parse_state(&state, ell)?;
            let basis_bits: Vec<bool> = basis
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err("basis string must be 0s and 1s".to_string()),
                })
                .collect::<Result<_, _>>()?;
            if basis_bits.len() != spec.ell() {
                return Err(format!(
                    "basis length {} does not match state qubits {}",
                    basis_bits.len(),
                    spec.ell()
                ));
            }
            let open_request: Vec<(usize, bool)> =
                basis_bits.iter().copied().enumerate().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let keys = SessionKeys::generate(scheme, &params, spec.ell(), &mut rng);
            let config = SessionConfig {
                scheme,
                params,
                state: spec,
                open_request,
                record_payloads: transcript_out.is_some(),
            };
            let mut csv = String::from("trial,accepted,branch,decoded\n");
            let mut accepted = 0usize;
            for t in 0..trials {
                let outcome =
                    run_session(&config, &keys, common.seed.wrapping_add(t as u64))
                        .map_err(|e| e.to_string())?;
                if t == 0 {
                    if let Some(path) = &transcript_out {
                        fs::write(path, transcript_jsonl(&outcome.transcript) + "\n")
                            .map_err(|e| e.to_string())?;
                    }
                }
                if outcome.accepted {
                    accepted += 1;
                }
                let branch = match outcome.check_coin {
                    Some(true) => "test",
                    Some(false) => "open",
                    None => "open",
                };
                let decoded = outcome
                    .decoded
                    .map(|bits| bits.iter().map(|&b| char::from(b'0' + b as u8)).collect())
                    .unwrap_or_else(|| "-".to_string());
                csv.push_str(&format!(
                    "{t},{},{branch},{decoded}\n",
                    u8::from(outcome.accepted)
                ));
            }
            csv.push_str(&format!(
                "# accept_rate,{:.4}\n",
                accepted as f64 / trials as f64
            ));
            if scheme == SchemeKind::Succinct {
                csv.push_str("# predicted succinct message sizes (open branch):\n");
                for p in predicted_succinct_sizes(&params, spec.ell(), spec.ell(), false) {
                    csv.push_str(&format!(
                        "# {},{},{:?},{} bytes\n",
                        p.direction, p.label, p.class, p.bytes
                    ));
                }
            }
            write_or_print(&out, &csv)?;
            Ok(())
        }
        Command::AttackDemo {
            common,
            trials,
            out,
        } => {
            let params = parse_params(&common.params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let pair = ntcf_gen(&params, &mut rng);
            let flipped = zflip_weak_attack(&params, &pair, true, trials, &mut rng);
            let honest = zflip_weak_attack(&params, &pair, false, trials, &mut rng);
            let keys = qcommit_core::scheme::gen1(&params, &mut rng);
            let full = xflip_full_attack(&keys, trials.min(200), &mut rng);
            let mut s = String::from("scheme,case,trials,rate\n");
            s.push_str(&format!(
                "single-layer,phase-flip decodes 1,{},{:.4}\n",
                flipped.trials, flipped.flipped_one_rate
            ));
            s.push_str(&format!(
                "single-layer,honest decodes 0,{},{:.4}\n",
                honest.trials, honest.honest_zero_rate
            ));
            s.push_str(&format!(
                "single-layer,rejections,{},{}\n",
                flipped.trials, flipped.rejections
            ));
            s.push_str(&format!(
                "two-layer,branch-bit tamper rejected,{},{:.4}\n",
                full.trials, full.dflip_reject_rate
            ));
            s.push_str(&format!(
                "two-layer,preimage tamper rejected,{},{:.4}\n",
                full.trials, full.xflip_reject_rate
            ));
            s.push_str(&format!(
                "two-layer,honest accepted,{},{:.4}\n",
                full.trials, full.honest_accept_rate
            ));
            write_or_print(&out, &s)?;
            Ok(())
        }
        Command::ExtractorDemo {
            common,
            trials,
            out,
        } => {
            let params = parse_params(&common.params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let mut s = String::from("state,basis,trials,tvd,delta,accept_rate\n");
            let cases: Vec<(&str, StateSpec, Vec<bool>)> = vec![
                ("zero", StateSpec::Zero, vec![false]),
                ("plus", StateSpec::Plus, vec![true]),
                ("bell", StateSpec::Bell, vec![true, true]),
            ];
            for (name, spec, basis) in cases {
                let keys = gen_multi(&params, spec.ell(), KeyMode::SemiSuccinct, &mut rng);
                let report = real_vs_ideal(&keys, || spec.build(), &basis, trials, &mut rng);
                let basis_str: String = basis
                    .iter()
                    .map(|&b| char::from(b'0' + b as u8))
                    .collect();
                s.push_str(&format!(
                    "{name},{basis_str},{},{:.4},{:.4},{:.4}\n",
                    report.trials,
                    report.tvd_conditioned,
                    report.delta_hat,
                    1.0 - report.reject_rate
                ));
            }
            write_or_print(&out, &s)?;
            Ok(())
        }
        Command::Stats { input, reference } => {
            let content = fs::read_to_string(&input).map_err(|e| e.to_string())?;
            let samples: Vec<String> = content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_string)
                .collect();
            if samples.len() < 100 {
                return Err("need at least 100 samples".into());
            }
            let counts = counts_from_samples(samples);
            let (tvd, stat, p) = match reference.as_str() {
                "uniform" => {
                    let k = counts.len();
                    let probs: BTreeMap<String, f64> = counts
                        .keys()
                        .map(|key| (key.clone(), 1.0 / k as f64))
                        .collect();
                    let tvd = tvd_vs_reference(&counts, &probs);
                    let observed: Vec<u64> = counts.values().copied().collect();
                    let (stat, p) = chi_square(&observed, &vec![1.0 / k as f64; k]);
                    (tvd, stat, p)
                }
                spec => {
                    let mut probs = BTreeMap::new();
                    for part in spec.split(',') {
                        let (tok, pr) = part
                            .split_once('=')
                            .ok_or("reference format: token=prob,...")?;
                        probs.insert(tok.to_string(), pr.parse::<f64>().map_err(|e| e.to_string())?);
                    }
                    let tvd = tvd_vs_reference(&counts, &probs);
                    let keys: Vec<String> = probs.keys().cloned().collect();
                    let observed: Vec<u64> =
                        keys.iter().map(|k| *counts.get(k).unwrap_or(&0)).collect();
                    let ps: Vec<f64> = keys.iter().map(|k| probs[k]).collect();
                    let (stat, p) = chi_square(&observed, &ps);
                    (tvd, stat, p)
                }
            };
            println!("samples,{}", counts.values().sum::<u64>());
            println!("tvd,{tvd:.6}");
            println!("chi_square,{stat:.6}");
            println!("p_value,{p:.6}");
            Ok(())
        }
        Command::PcpDemo {
            common,
            ell,
            queries,
            trials,
            cheat,
        } => {
            let params = parse_params(&common.params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let pcp = XzPcp::all_plus(ell, queries);
            let keys = gen_multi(&params, ell, KeyMode::SemiSuccinct, &mut rng);
            let mut accepted = 0usize;
            let mut query_rounds = 0usize;
            let mut query_accepts = 0usize;
            for _ in 0..trials {
                let state = if cheat {
                    LogicalState::computational(ell, 0)
                } else {
                    pcp.honest_proof_state()
                };
                let v = xz_pcp_argument(&keys, &pcp, state, &mut rng);
                if v.accepted {
                    accepted += 1;
                }
                if v.query_round {
                    query_rounds += 1;
                    if v.accepted {
                        query_accepts += 1;
                    }
                }
            }
            println!("prover,{}", if cheat { "all-zeros" } else { "honest" });
            println!("trials,{trials}");
            println!("accept_rate,{:.4}", accepted as f64 / trials as f64);
            if query_rounds > 0 {
                println!(
                    "query_round_accept_rate,{:.4}",
                    query_accepts as f64 / query_rounds as f64
                );
            }
            Ok(())
        }
    }
}

fn load_keys(path: &PathBuf) -> Result<qcommit_core::scheme::SchemeKeys1, String> {
    let bytes = fs::read(path).map_err(|e| e.to_string())?;
    let mut r = Reader::new(&bytes);
    let keys = wire::decode_scheme_keys(&mut r).map_err(|e| e.to_string())?;
    r.finish().map_err(|e| e.to_string())?;
    Ok(keys)
}
