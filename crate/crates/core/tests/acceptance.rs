//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Run with `cargo test --release --test acceptance
//! -- --nocapture` to see the report.

use qcommit_core::attacks::{xflip_full_attack, zflip_weak_attack};
use qcommit_core::bitstring::BitString;
use qcommit_core::extract::{extract_dense, projector_distribution, real_vs_ideal};
use qcommit_core::lattice::{lattice_invert, sample_noise, trapgen, ZqVector};
use qcommit_core::ntcf::{
    coset_uniformity_test, ntcf_check, ntcf_eval, ntcf_gen, ntcf_good, ntcf_invert,
};
use qcommit_core::params::{LatticeParams, MICRO, SMALL, TINY};
use qcommit_core::pcp::{xz_pcp_argument, XzPcp};
use qcommit_core::qsim::{
    full_commit, hadamard_opening_distribution, sample_open_hadamard, sample_open_standard,
    standard_outcome_distribution, DenseOracle, LogicalState,
};
use qcommit_core::scheme::{gen1, gen_multi, real_multi, run_repetition, KeyMode};
use qcommit_core::session::{
    predicted_succinct_sizes, run_session, SchemeKind, SessionConfig, SessionKeys, StateSpec,
};
use qcommit_core::succinct::{scommit, sgen, sopen, sout, sver, test_protocol, TransparentReveal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// TVD between empirical counts over bit vectors and exact probabilities.
fn tvd_counts_vs_probs(counts: &BTreeMap<Vec<bool>, u64>, probs: &[(Vec<bool>, f64)]) -> f64 {
    let n: u64 = counts.values().sum();
    assert!(n > 0, "no accepted samples");
    let mut acc = 0.0;
    let mut seen: BTreeMap<&Vec<bool>, f64> = BTreeMap::new();
    for (k, p) in probs {
        seen.insert(k, *p);
        let emp = *counts.get(k).unwrap_or(&0) as f64 / n as f64;
        acc += (emp - p).abs();
    }
    for (k, &c) in counts {
        if !seen.contains_key(k) {
            acc += c as f64 / n as f64;
        }
    }
    acc / 2.0
}

/// Exact outcome distribution of measuring `state` in `basis`.
fn reference_distribution(state: &LogicalState, basis: &[bool]) -> Vec<(Vec<bool>, f64)> {
    let probs = state.basis_distribution(basis);
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-15)
        .map(|(idx, &p)| {
            let bits: Vec<bool> = (0..basis.len()).map(|j| (idx >> j) & 1 == 1).collect();
            (bits, p)
        })
        .collect()
}

/// Spec budget for the single-qubit acceptance rate.
fn accept_budget(p: &LatticeParams) -> f64 {
    let w2 = (p.w() + 2) as f64;
    w2 * 0.5f64.powi(p.n as i32) + w2 * p.m as f64 * p.b_noise as f64 / p.b_eval as f64 + 0.01
}

#[test]
fn criterion_01_trapdoor_correctness() {
    let start = Instant::now();
    let mut rng = seeded(0xC1);
    let td = trapgen(&SMALL, &mut rng);
    let trials = 1000;
    let mut failures = 0;
    for _ in 0..trials {
        let x = ZqVector::uniform(SMALL.q, SMALL.n, &mut rng);
        let e = sample_noise(SMALL.b_noise, SMALL.m, SMALL.q, &mut rng);
        let y = td.a.mul_vec(&x).add(&e);
        if lattice_invert(&SMALL, &td, &y) != Ok(x) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(failures, 0, "criterion 1: {failures} inversion failures");
    assert!(elapsed.as_secs() < 10, "criterion 1: took {elapsed:?}");
    println!(
        "[PASS] criterion 1: trapdoor correctness, {trials} noisy inversions, 0 failures, {elapsed:?}"
    );
}

#[test]
fn criterion_02_ntcf_completeness() {
    let mut rng = seeded(0xC2);
    let pair = ntcf_gen(&SMALL, &mut rng);
    let trials = 1000;
    for b in [false, true] {
        for _ in 0..trials {
            let x = BitString::random(SMALL.w(), &mut rng);
            let y = ntcf_eval(&SMALL, &pair.pk, b, &x, &mut rng);
            // 1(c): honest evaluations always pass the preimage check.
            assert!(ntcf_check(&SMALL, &pair.pk, b, &x, &y), "check failed");
            // 1(a): inversion returns the claw containing x on branch b.
            let claw = ntcf_invert(&SMALL, &pair.sk, &y).expect("inversion");
            assert_eq!(claw.x_bits(b), &x, "claw does not contain the preimage");
            // 1(b): both claw members pass the check on their branches.
            assert!(ntcf_check(&SMALL, &pair.pk, false, &claw.x0, &y));
            assert!(ntcf_check(&SMALL, &pair.pk, true, &claw.x1, &y));
        }
    }
    // 1(d): the nonzero-decoding set has density 1 - 2^-n over uniform d.
    let x = BitString::random(SMALL.w(), &mut rng);
    let y = ntcf_eval(&SMALL, &pair.pk, false, &x, &mut rng);
    let claw = ntcf_invert(&SMALL, &pair.sk, &y).unwrap();
    let samples = 400_000u64;
    let mut zero = 0u64;
    for _ in 0..samples {
        let d = BitString::random(SMALL.w() + 1, &mut rng);
        if ntcf_good(&SMALL, &claw.x0, &claw.x1, &d).is_zero() {
            zero += 1;
        }
    }
    let p = 0.5f64.powi(SMALL.n as i32);
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    let emp = zero as f64 / samples as f64;
    assert!(
        (emp - p).abs() <= 3.0 * sigma,
        "criterion 2: zero-decode density {emp} vs {p} (3 sigma = {})",
        3.0 * sigma
    );
    println!(
        "[PASS] criterion 2: completeness over {trials} roundtrips per branch; zero-decode density {emp:.6} vs 2^-n = {p:.6}"
    );
}

#[test]
fn criterion_03_parity_identity() {
    let mut rng = seeded(0xC3);
    let pair = ntcf_gen(&SMALL, &mut rng);
    let x = BitString::random(SMALL.w(), &mut rng);
    let y = ntcf_eval(&SMALL, &pair.pk, true, &x, &mut rng);
    let claw = ntcf_invert(&SMALL, &pair.sk, &y).unwrap();
    let v = claw.parity_vector();
    let trials = 10_000;
    for _ in 0..trials {
        let d = BitString::random(SMALL.w() + 1, &mut rng);
        let lhs = d.dot(v);
        let dprime = ntcf_good(&SMALL, &claw.x0, &claw.x1, &d);
        let rhs = d.get(0) ^ dprime.dot(&pair.sk.s);
        assert_eq!(lhs, rhs, "criterion 3: identity failed");
    }
    println!("[PASS] criterion 3: decoding identity exact on {trials} random strings");
}

#[test]
fn criterion_04_single_qubit_correctness() {
    let start = Instant::now();
    let mut rng = seeded(0xC4);
    let trials = 10_000;
    let budget = accept_budget(&SMALL);
    let states: Vec<(&str, LogicalState)> = vec![
        ("zero", LogicalState::zero()),
        ("one", LogicalState::one()),
        ("plus", LogicalState::plus()),
        ("minus", LogicalState::minus()),
        ("plus-i", LogicalState::plus_i()),
    ];
    for (name, state) in &states {
        for basis in [false, true] {
            let keys = gen_multi(&SMALL, 1, KeyMode::NonSuccinct, &mut rng);
            let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
            let mut accepted = 0u64;
            for _ in 0..trials {
                if let Some(out) = real_multi(&keys, state.clone(), &[basis], &mut rng) {
                    accepted += 1;
                    *counts.entry(out).or_insert(0) += 1;
                }
            }
            let accept_rate = accepted as f64 / trials as f64;
            assert!(
                accept_rate >= 1.0 - budget,
                "criterion 4: {name}/{basis}: accept rate {accept_rate} below 1 - {budget}"
            );
            let reference = reference_distribution(state, &[basis]);
            let tvd = tvd_counts_vs_probs(&counts, &reference);
            assert!(
                tvd <= 0.05,
                "criterion 4: {name}/{}: conditioned TVD {tvd}",
                u8::from(basis)
            );
            println!(
                "  criterion 4: state {name} basis {}: accept {accept_rate:.4}, tvd {tvd:.4}",
                u8::from(basis)
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "criterion 4: runtime {elapsed:?} exceeds 5 minutes"
    );
    println!(
        "[PASS] criterion 4: five states x two bases at {trials} sessions, accept-rate budget {budget:.3}, {elapsed:?}"
    );
}

#[test]
fn criterion_05_multi_qubit_correctness() {
    let mut rng = seeded(0xC5);
    let trials = 10_000;
    let cases: Vec<(&str, LogicalState, Vec<bool>)> = vec![
        ("bell", LogicalState::bell(), vec![false, false]),
        ("bell", LogicalState::bell(), vec![true, true]),
        ("bell", LogicalState::bell(), vec![false, true]),
        ("ghz4", LogicalState::ghz(4), vec![false; 4]),
        ("ghz4", LogicalState::ghz(4), vec![true; 4]),
        (
            "ghz4",
            LogicalState::ghz(4),
            vec![false, true, true, false],
        ),
    ];
    for (name, state, basis) in &cases {
        let keys = gen_multi(&SMALL, state.ell, KeyMode::NonSuccinct, &mut rng);
        let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
        for _ in 0..trials {
            if let Some(out) = real_multi(&keys, state.clone(), basis, &mut rng) {
                *counts.entry(out).or_insert(0) += 1;
            }
        }
        let reference = reference_distribution(state, basis);
        let tvd = tvd_counts_vs_probs(&counts, &reference);
        let basis_str: String = basis.iter().map(|&b| char::from(b'0' + b as u8)).collect();
        assert!(
            tvd <= 0.05,
            "criterion 5: {name}/{basis_str}: TVD {tvd} above 0.05"
        );
        println!("  criterion 5: {name} basis {basis_str}: tvd {tvd:.4}");
    }

    // Shared-key and independent-key modes must induce the same honest
    // output distribution.
    let basis = vec![true, true];
    let mut dists: Vec<BTreeMap<Vec<bool>, u64>> = Vec::new();
    for mode in [KeyMode::NonSuccinct, KeyMode::SemiSuccinct] {
        let keys = gen_multi(&SMALL, 2, KeyMode::SemiSuccinct, &mut rng);
        let keys = match mode {
            KeyMode::SemiSuccinct => keys,
            KeyMode::NonSuccinct => gen_multi(&SMALL, 2, KeyMode::NonSuccinct, &mut rng),
        };
        let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
        for _ in 0..trials {
            if let Some(out) = real_multi(&keys, LogicalState::bell(), &basis, &mut rng) {
                *counts.entry(out).or_insert(0) += 1;
            }
        }
        dists.push(counts);
    }
    let tvd = qcommit_core::stats::empirical_tvd(&dists[0], &dists[1]);
    assert!(tvd <= 0.05, "criterion 5: mode TVD {tvd} above 0.05");
    println!("[PASS] criterion 5: entangled schedules within 0.05; key-mode TVD {tvd:.4}");
}

#[test]
fn criterion_06_oracle_equivalence() {
    let mut rng = seeded(0xC6);
    let keys = gen1(&MICRO, &mut rng);
    // Exact per-commitment equality of the opening distributions (stronger
    // than the sampled bound).
    let mut worst: f64 = 0.0;
    for _ in 0..60 {
        let state = LogicalState::random(1, &mut rng);
        let cs = full_commit(&MICRO, &keys.pairs, state, &mut rng);
        let oracle = DenseOracle::from_committed(&cs).unwrap();
        for j in 0..cs.ell() {
            let lazy_h = hadamard_opening_distribution(&cs, j);
            let dense_h = oracle.hadamard_block_distribution(j);
            let lazy_s = standard_outcome_distribution(&cs, j);
            let dense_s = oracle.standard_block_distribution(j);
            for (a, b) in lazy_h.iter().zip(&dense_h) {
                worst = worst.max((a - b).abs());
            }
            for (a, b) in lazy_s.iter().zip(&dense_s) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    assert!(worst < 1e-9, "criterion 6: exact distribution gap {worst}");

    // Sampled joint (message statistic, outcome) comparison at 10^4 trials.
    let trials = 10_000;
    let mut lazy_counts: BTreeMap<(bool, bool, Option<bool>, bool), u64> = BTreeMap::new();
    let mut dense_counts: BTreeMap<(bool, bool, Option<bool>, bool), u64> = BTreeMap::new();
    for t in 0..trials {
        let basis = t % 2 == 1;
        let state = if t % 4 < 2 {
            LogicalState::plus()
        } else {
            LogicalState::plus_i()
        };
        let cs = full_commit(&MICRO, &keys.pairs, state, &mut rng);
        let ys = qcommit_core::scheme::CommitmentString1::from_committed(&cs, 0);
        // Structured sampler.
        {
            let mut cs = cs.clone();
            let opening = if basis {
                qcommit_core::scheme::Opening1::Hadamard(
                    sample_open_hadamard(&mut cs, 0, &mut rng).unwrap(),
                )
            } else {
                qcommit_core::scheme::Opening1::Standard(
                    sample_open_standard(&mut cs, 0, &mut rng).unwrap(),
                )
            };
            let verdict = qcommit_core::scheme::ver1(&MICRO, &keys, &ys, &opening);
            let decoded = qcommit_core::scheme::out1(&MICRO, &keys, &ys, &opening);
            let parity = message_parity(&opening);
            *lazy_counts.entry((basis, verdict, decoded, parity)).or_insert(0) += 1;
        }
        // Literal state-vector measurement.
        {
            let mut oracle = DenseOracle::from_committed(&cs).unwrap();
            let opening = if basis {
                qcommit_core::scheme::Opening1::Hadamard(oracle.open_hadamard(0, &mut rng).unwrap())
            } else {
                qcommit_core::scheme::Opening1::Standard(oracle.open_standard(0, &mut rng).unwrap())
            };
            let verdict = qcommit_core::scheme::ver1(&MICRO, &keys, &ys, &opening);
            let decoded = qcommit_core::scheme::out1(&MICRO, &keys, &ys, &opening);
            let parity = message_parity(&opening);
            *dense_counts.entry((basis, verdict, decoded, parity)).or_insert(0) += 1;
        }
    }
    let tvd = qcommit_core::stats::empirical_tvd(&lazy_counts, &dense_counts);
    assert!(tvd <= 0.05, "criterion 6: joint TVD {tvd} above 0.05");
    println!(
        "[PASS] criterion 6: exact distribution gap {worst:.2e}; sampled joint TVD {tvd:.4} at {trials} trials"
    );
}

fn message_parity(opening: &qcommit_core::scheme::Opening1) -> bool {
    match opening {
        qcommit_core::scheme::Opening1::Hadamard(h) => h.d.count_ones() % 2 == 1,
        qcommit_core::scheme::Opening1::Standard(s) => {
            s.zs.iter().map(|z| z.count_ones()).sum::<usize>() % 2 == 1
        }
    }
}

#[test]
fn criterion_07_weak_attack_and_full_rejection() {
    let mut rng = seeded(0xC7);
    let pair = ntcf_gen(&SMALL, &mut rng);
    let trials = 1000;
    let flipped = zflip_weak_attack(&SMALL, &pair, true, trials, &mut rng);
    assert!(
        flipped.flipped_one_rate >= 0.99,
        "criterion 7: flip decode rate {}",
        flipped.flipped_one_rate
    );
    assert_eq!(flipped.rejections, 0, "criterion 7: weak verifier rejected");
    let honest = zflip_weak_attack(&SMALL, &pair, false, trials, &mut rng);
    assert!(
        honest.honest_zero_rate >= 0.99,
        "criterion 7: honest decode rate {}",
        honest.honest_zero_rate
    );
    let keys = gen1(&SMALL, &mut rng);
    let full = xflip_full_attack(&keys, 300, &mut rng);
    assert!(
        full.dflip_reject_rate >= 0.99 && full.xflip_reject_rate >= 0.99,
        "criterion 7: tamper reject rates {full:?}"
    );
    println!(
        "[PASS] criterion 7: phase flip decodes 1 at {:.4} with 0 rejections; register tampering rejected at {:.4}/{:.4}",
        flipped.flipped_one_rate, full.dflip_reject_rate, full.xflip_reject_rate
    );
}

#[test]
fn criterion_08_extractor_fidelity() {
    let mut rng = seeded(0xC8);
    // Dense-path identity at MICRO: the circuit's outcome distribution
    // equals the projector expression to 1e-9, including the standard-basis
    // case and the twirled Hadamard case.
    let keys = gen_multi(&MICRO, 1, KeyMode::SemiSuccinct, &mut rng);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let state = match i % 4 {
            0 => LogicalState::zero(),
            1 => LogicalState::plus(),
            2 => LogicalState::plus_i(),
            _ => LogicalState::random(1, &mut rng),
        };
        let (_, cs) = qcommit_core::scheme::commit_multi(&keys, state, &mut rng);
        let oracle = DenseOracle::from_committed(&cs).unwrap();
        let ext = extract_dense(&oracle);
        for basis in [[false], [true]] {
            let circuit = ext.measurement_distribution(&basis);
            let formula = projector_distribution(&oracle, &basis);
            for (a, b) in circuit.iter().zip(&formula) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    // Mixed bases on two qubits at the sub-micro set.
    let keys2 = gen_multi(&TINY, 2, KeyMode::SemiSuccinct, &mut rng);
    let (_, cs) = qcommit_core::scheme::commit_multi(&keys2, LogicalState::bell(), &mut rng);
    let oracle = DenseOracle::from_committed(&cs).unwrap();
    let ext = extract_dense(&oracle);
    for basis in [[false, true], [true, true], [false, false]] {
        let circuit = ext.measurement_distribution(&basis);
        let formula = projector_distribution(&oracle, &basis);
        for (a, b) in circuit.iter().zip(&formula) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-9, "criterion 8: identity error {worst}");

    // Real-vs-Ideal at the statistical set, conditioned on acceptance; the
    // rejection rates are reported alongside.
    let trials = 10_000;
    let cases: Vec<(&str, StateSpec, Vec<bool>)> = vec![
        ("zero", StateSpec::Zero, vec![false]),
        ("plus", StateSpec::Plus, vec![true]),
        ("bell", StateSpec::Bell, vec![true, true]),
    ];
    for (name, spec, basis) in cases {
        let keys = gen_multi(&SMALL, spec.ell(), KeyMode::SemiSuccinct, &mut rng);
        let report = real_vs_ideal(&keys, || spec.build(), &basis, trials, &mut rng);
        assert!(
            report.tvd_conditioned <= 0.05,
            "criterion 8: {name}: Real-vs-Ideal TVD {}",
            report.tvd_conditioned
        );
        println!(
            "  criterion 8: {name}: tvd {:.4}, delta {:.4}, accept {:.4}",
            report.tvd_conditioned,
            report.delta_hat,
            1.0 - report.reject_rate
        );
    }
    println!(
        "[PASS] criterion 8: projector identity error {worst:.2e}; Real-vs-Ideal within 0.05 at {trials} samples"
    );
}

#[test]
fn criterion_09_succinct_protocol() {
    let mut rng = seeded(0xC9);
    let ell = 4;
    let keys = sgen(&SMALL, &mut rng);

    // Honest test-phase accept rate over 10^3 sessions against the budget.
    let sessions = 1000;
    let mut accepted = 0;
    for _ in 0..sessions {
        let mut c = scommit(&keys, LogicalState::ghz(ell), &mut rng);
        let out = test_protocol(&keys, &mut c, &TransparentReveal, &mut rng).unwrap();
        if out.accepted {
            accepted += 1;
        }
    }
    let test_rate = accepted as f64 / sessions as f64;
    let budget = (ell as f64) * accept_budget(&SMALL);
    assert!(
        test_rate >= 1.0 - budget,
        "criterion 9: test accept {test_rate} below 1 - {budget}"
    );

    // Per-qubit succinct open/verify/decode against the state's marginals.
    let trials = 10_000;
    let subset = [(1usize, false), (3usize, true)];
    let state = LogicalState::ghz(ell);
    let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for _ in 0..trials {
        let mut c = scommit(&keys, state.clone(), &mut rng);
        let rt = c.rt;
        let mut out = Vec::new();
        let mut ok = true;
        for &(j, b) in &subset {
            let so = sopen(&keys, &mut c, j, b, &mut rng).unwrap();
            if !sver(&keys, &rt, j, &so) {
                ok = false;
                break;
            }
            match sout(&keys, &so) {
                Some(bit) => out.push(bit),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            *counts.entry(out).or_insert(0) += 1;
        }
    }
    // Reference: measure the requested qubits of the state (marginal over
    // the rest, with untouched qubits measured in an arbitrary basis).
    let mut full_basis = vec![false; ell];
    for &(j, b) in &subset {
        full_basis[j] = b;
    }
    let full = state.basis_distribution(&full_basis);
    let mut reference: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
    for (idx, &p) in full.iter().enumerate() {
        let key: Vec<bool> = subset.iter().map(|&(j, _)| (idx >> j) & 1 == 1).collect();
        *reference.entry(key).or_insert(0.0) += p;
    }
    let reference: Vec<(Vec<bool>, f64)> = reference.into_iter().collect();
    let tvd = tvd_counts_vs_probs(&counts, &reference);
    assert!(tvd <= 0.05, "criterion 9: subset opening TVD {tvd}");

    // Communication accounting: measured bytes match the prediction exactly
    // on both branches, and the succinct-class messages do not grow with
    // the state length (beyond membership-proof depth).
    let mut krng = seeded(0xC91);
    for ell_i in [2usize, 8] {
        let skeys = SessionKeys::generate(SchemeKind::Succinct, &TINY, ell_i, &mut krng);
        let config = SessionConfig {
            scheme: SchemeKind::Succinct,
            params: TINY,
            state: StateSpec::PlusProduct(ell_i),
            open_request: vec![(0, false)],
            record_payloads: false,
        };
        let mut seen = [false, false];
        let mut seed = 0u64;
        while !(seen[0] && seen[1]) {
            let out = run_session(&config, &skeys, seed).unwrap();
            seed += 1;
            let test_branch = out.check_coin == Some(true);
            if seen[usize::from(test_branch)] {
                continue;
            }
            seen[usize::from(test_branch)] = true;
            let predicted = predicted_succinct_sizes(&TINY, ell_i, 1, test_branch);
            assert_eq!(out.transcript.len(), predicted.len());
            for (rec, pred) in out.transcript.iter().zip(&predicted) {
                assert_eq!(
                    (rec.direction, rec.phase, rec.msg_type, rec.len),
                    (pred.direction, pred.phase, pred.msg_type, pred.bytes),
                    "criterion 9: size mismatch at ell={ell_i} for {}",
                    pred.label
                );
            }
        }
    }
    // Succinct-class sizes at ell=2 vs ell=8: identical except the
    // membership-proof depth inside per-qubit openings.
    for test_branch in [false, true] {
        let p2 = predicted_succinct_sizes(&TINY, 2, 1, test_branch);
        let p8 = predicted_succinct_sizes(&TINY, 8, 1, test_branch);
        for (a, b) in p2.iter().zip(&p8) {
            if a.class == qcommit_core::session::SizeClass::Succinct {
                let allowed = if a.label == "openings" { 2 * 32 } else { 0 };
                assert_eq!(
                    a.bytes + allowed,
                    b.bytes,
                    "criterion 9: succinct-class message {} grew with the state length",
                    a.label
                );
            }
        }
    }
    println!(
        "[PASS] criterion 9: test accept {test_rate:.4} (budget bound {:.3}), subset TVD {tvd:.4}, byte accounting exact",
        1.0 - budget
    );
}

#[test]
fn criterion_10_coset_uniformity() {
    let mut rng = seeded(0xCA);
    let n = 64;
    let mut d1 = BitString::zeros(n);
    let mut d2 = BitString::zeros(n);
    for i in 0..n {
        d1.set(i, rng.gen());
        d2.set(i, rng.gen());
    }
    d1.set(0, true);
    d2.set(0, false);
    d2.set(1, true);
    let tvd = coset_uniformity_test(257, n, 1, &d1, &d2, 10_000, &mut rng).unwrap();
    assert!(tvd <= 0.05, "criterion 10: conditioned TVD {tvd}");
    println!("[PASS] criterion 10: conditioned inner-product TVD {tvd:.4} at 10^4 accepted samples");
}

#[test]
fn criterion_11_pcp_compiler() {
    let mut rng = seeded(0xCB);
    let ell = 4;
    let pcp = XzPcp::all_plus(ell, 2);
    let keys = gen_multi(&SMALL, ell, KeyMode::SemiSuccinct, &mut rng);

    let trials = 4000;
    let mut honest_accepted = 0usize;
    for _ in 0..trials {
        if xz_pcp_argument(&keys, &pcp, pcp.honest_proof_state(), &mut rng).accepted {
            honest_accepted += 1;
        }
    }
    let honest_rate = honest_accepted as f64 / trials as f64;
    let budget = (ell as f64) * accept_budget(&SMALL);
    assert!(
        honest_rate >= 1.0 - budget,
        "criterion 11: honest accept {honest_rate} below 1 - {budget}"
    );

    // The all-zeros prover: each queried qubit decodes a fair coin in the
    // Hadamard basis, so a query round accepts with probability ~1/4 times
    // the two verification rates.
    let mut query_rounds = 0usize;
    let mut query_accepts = 0usize;
    for _ in 0..trials {
        let v = xz_pcp_argument(&keys, &pcp, LogicalState::computational(ell, 0), &mut rng);
        if v.query_round {
            query_rounds += 1;
            if v.accepted {
                query_accepts += 1;
            }
        }
    }
    let per_qubit_ver = 1.0 - 0.5f64.powi(SMALL.n as i32);
    let analytic = 0.25 * per_qubit_ver * per_qubit_ver;
    let emp = query_accepts as f64 / query_rounds as f64;
    let sigma = (analytic * (1.0 - analytic) / query_rounds as f64).sqrt();
    assert!(
        (emp - analytic).abs() <= 3.0 * sigma + 0.01,
        "criterion 11: cheating query-round accept {emp} vs analytic {analytic} (3 sigma = {})",
        3.0 * sigma
    );
    println!(
        "[PASS] criterion 11: honest proof accepted at {honest_rate:.4}; cheating query rounds accepted at {emp:.4} vs analytic {analytic:.4}"
    );
}

#[test]
fn repetition_wrapper_smoke() {
    // Not a numbered criterion by itself, but the repetition schedule is
    // part of the multi-qubit contract: an honest all-zeros state survives
    // the three-way schedule and decodes to zeros.
    let mut rng = seeded(0xCC);
    let keys = gen_multi(&SMALL, 2, KeyMode::SemiSuccinct, &mut rng);
    let mut successes = 0;
    let mut zeros = 0;
    let trials = 60;
    for _ in 0..trials {
        match run_repetition(
            &keys,
            || LogicalState::computational(2, 0),
            &[false, false],
            9,
            &mut rng,
        ) {
            Some(out) => {
                successes += 1;
                if out == vec![false, false] {
                    zeros += 1;
                }
            }
            None => {}
        }
    }
    assert!(successes > 0, "no repetition session survived");
    assert_eq!(zeros, successes, "accepted sessions must decode zeros");
    println!("  repetition wrapper: {successes}/{trials} sessions accepted, all decoded 0s");
}
