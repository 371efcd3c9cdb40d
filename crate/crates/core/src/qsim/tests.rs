//! Cross-validation of the lazy samplers against the brute-force oracle.

use super::*;
use crate::ntcf::{ntcf_gen, NtcfKeyPair};
use crate::params::{LatticeParams, MICRO, TINY};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn gen_keys<R: Rng + ?Sized>(params: &LatticeParams, rng: &mut R) -> Vec<NtcfKeyPair> {
    (0..params.w() + 2).map(|_| ntcf_gen(params, rng)).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Both paths must induce identical per-commitment outcome distributions.
fn check_distributions(cs: &CommittedState, tol: f64) {
    let dense = DenseOracle::from_committed(cs).unwrap();
    for j in 0..cs.ell() {
        let lazy_h = hadamard_opening_distribution(cs, j);
        let dense_h = dense.hadamard_block_distribution(j);
        let dh = max_abs_diff(&lazy_h, &dense_h);
        assert!(dh < tol, "hadamard-opening mismatch {dh} on qubit {j}");
        let lazy_s = standard_outcome_distribution(cs, j);
        let dense_s = dense.standard_block_distribution(j);
        let ds = max_abs_diff(&lazy_s, &dense_s);
        assert!(ds < tol, "standard-opening mismatch {ds} on qubit {j}");
    }
}

fn named_states() -> Vec<LogicalState> {
    vec![
        LogicalState::zero(),
        LogicalState::one(),
        LogicalState::plus(),
        LogicalState::minus(),
        LogicalState::plus_i(),
    ]
}

#[test]
fn lazy_matches_dense_single_qubit() {
    let mut rng = ChaCha12Rng::seed_from_u64(100);
    let keys = gen_keys(&MICRO, &mut rng);
    for state in named_states() {
        for _ in 0..5 {
            let cs = full_commit(&MICRO, &keys, state.clone(), &mut rng);
            check_distributions(&cs, 1e-9);
        }
    }
    for _ in 0..10 {
        let state = LogicalState::random(1, &mut rng);
        let cs = full_commit(&MICRO, &keys, state, &mut rng);
        check_distributions(&cs, 1e-9);
    }
}

#[test]
fn lazy_matches_dense_under_forced_collapse() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let keys = gen_keys(&MICRO, &mut rng);
    let w1 = MICRO.w() + 1;
    let forcings = vec![
        LopsidedForcing {
            layer1: true,
            regs: vec![],
        },
        LopsidedForcing {
            layer1: false,
            regs: vec![0],
        },
        LopsidedForcing {
            layer1: false,
            regs: vec![3, 7],
        },
        // Collapse every register: full decoupling, whatever the claw masks.
        LopsidedForcing {
            layer1: false,
            regs: (0..w1).collect(),
        },
        LopsidedForcing {
            layer1: true,
            regs: (0..w1).collect(),
        },
    ];
    for force in &forcings {
        for state in named_states() {
            for _ in 0..3 {
                let mut logical = state.clone();
                let (table, lops) =
                    commit_qubit_forced(&MICRO, &keys, &mut logical, 0, force, &mut rng);
                let cs = CommittedState {
                    params: MICRO,
                    logical,
                    tables: vec![table],
                    opened: vec![None],
                    lopsided_events: lops,
                };
                check_distributions(&cs, 1e-9);
            }
        }
    }
}

#[test]
fn lazy_matches_dense_two_qubit_sequential() {
    let mut rng = ChaCha12Rng::seed_from_u64(102);
    let keys = gen_keys(&TINY, &mut rng);
    let states = vec![
        LogicalState::bell(),
        LogicalState::ghz(2),
        LogicalState::random(2, &mut rng),
        LogicalState::random(2, &mut rng),
    ];
    for state in states {
        let cs = full_commit(&TINY, &keys, state, &mut rng);
        check_distributions(&cs, 1e-9);

        // Condition both paths on the same qubit-0 outcome, then compare the
        // conditional qubit-1 distributions (residual-state correctness).
        let probs = hadamard_opening_distribution(&cs, 0);
        let pick = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-12)
            .map(|(i, _)| i)
            .last()
            .unwrap();
        let mut lazy = cs.clone();
        let mut d = crate::bitstring::BitString::zeros(TINY.w() + 1);
        for i in 0..TINY.w() + 1 {
            d.set(i, (pick >> i) & 1 == 1);
        }
        apply_hadamard_outcome(&mut lazy, 0, &d);
        let mut dense = DenseOracle::from_committed(&cs).unwrap();
        dense.apply_hadamard_outcome(0, pick as u64);
        let l1 = hadamard_opening_distribution(&lazy, 1);
        let d1 = dense.hadamard_block_distribution(1);
        assert!(max_abs_diff(&l1, &d1) < 1e-9, "conditional hadamard mismatch");
        let ls = standard_outcome_distribution(&lazy, 1);
        let dsd = dense.standard_block_distribution(1);
        assert!(max_abs_diff(&ls, &dsd) < 1e-9, "conditional standard mismatch");

        // Same for a standard-basis first opening.
        let sprobs = standard_outcome_distribution(&cs, 0);
        let spick = sprobs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-12)
            .map(|(i, _)| i)
            .next()
            .unwrap();
        let mut lazy = cs.clone();
        let mut mstr = crate::bitstring::BitString::zeros(TINY.w() + 1);
        for i in 0..TINY.w() + 1 {
            mstr.set(i, (spick >> i) & 1 == 1);
        }
        apply_standard_outcome(&mut lazy, 0, &mstr);
        let mut dense = DenseOracle::from_committed(&cs).unwrap();
        dense.apply_standard_outcome(0, spick as u64);
        let l1 = hadamard_opening_distribution(&lazy, 1);
        let d1 = dense.hadamard_block_distribution(1);
        assert!(max_abs_diff(&l1, &d1) < 1e-9, "post-standard conditional mismatch");
    }
}

#[test]
fn plus_state_survives_forced_decoupling() {
    // A qubit committed as |+> keeps decoding 0 in the Hadamard basis even
    // when every register image collapses: the pinned value must match the
    // deterministic Hadamard observable.
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    let keys = gen_keys(&MICRO, &mut rng);
    let w1 = MICRO.w() + 1;
    let mut clean = 0;
    while clean < 20 {
        let mut logical = LogicalState::plus();
        let force = LopsidedForcing {
            layer1: false,
            regs: (0..w1).collect(),
        };
        let (table, lops) = commit_qubit_forced(&MICRO, &keys, &mut logical, 0, &force, &mut rng);
        if table.layer1.fixed.is_some() {
            // Layer-1 went lopsided on its own: the qubit collapsed in the
            // standard basis and its Hadamard value is legitimately a coin.
            continue;
        }
        clean += 1;
        assert_eq!(table.decoupled, Some(false), "plus must pin Hadamard value 0");
        let mut cs = CommittedState {
            params: MICRO,
            logical,
            tables: vec![table],
            opened: vec![None],
            lopsided_events: lops,
        };
        let opening = sample_open_hadamard(&mut cs, 0, &mut rng).unwrap();
        let decoded = opening.d.dot(&cs.tables[0].parity_mask);
        assert!(!decoded, "decoded Hadamard bit must stay 0 for |+>");
    }
}

#[test]
fn bell_pair_matched_basis_correlations() {
    // On lopsided-free commits, matched-basis openings of a Bell pair
    // correlate exactly (lopsided images corrupt single qubits and are
    // budgeted separately).
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    let keys = gen_keys(&MICRO, &mut rng);
    let mut clean = 0;
    while clean < 30 {
        let cs = full_commit(&MICRO, &keys, LogicalState::bell(), &mut rng);
        if cs.lopsided_events > 0 {
            continue;
        }
        clean += 1;
        // Standard/standard: the projected logical bits agree.
        let mut s = cs.clone();
        sample_open_standard(&mut s, 0, &mut rng).unwrap();
        sample_open_standard(&mut s, 1, &mut rng).unwrap();
        assert!((s.logical.prob_one(0) - s.logical.prob_one(1)).abs() < 1e-9);
        // Hadamard/Hadamard: decoded parities agree (X(x)X = +1 on the pair).
        let mut h = cs;
        let o0 = sample_open_hadamard(&mut h, 0, &mut rng).unwrap();
        let o1 = sample_open_hadamard(&mut h, 1, &mut rng).unwrap();
        let m0 = o0.d.dot(&h.tables[0].parity_mask);
        let m1 = o1.d.dot(&h.tables[1].parity_mask);
        assert_eq!(m0, m1, "Bell Hadamard outcomes must agree");
    }
}

#[test]
fn opening_twice_rejected() {
    let mut rng = ChaCha12Rng::seed_from_u64(105);
    let keys = gen_keys(&TINY, &mut rng);
    let mut cs = full_commit(&TINY, &keys, LogicalState::plus(), &mut rng);
    sample_open_hadamard(&mut cs, 0, &mut rng).unwrap();
    assert_eq!(
        sample_open_standard(&mut cs, 0, &mut rng),
        Err(QsimError::AlreadyOpened(0))
    );
    assert_eq!(
        sample_open_hadamard(&mut cs, 9, &mut rng),
        Err(QsimError::BadQubit(9))
    );
}

#[test]
fn dense_refuses_large_states() {
    let mut rng = ChaCha12Rng::seed_from_u64(106);
    let keys = gen_keys(&MICRO, &mut rng);
    let cs = full_commit(&MICRO, &keys, LogicalState::ghz(3), &mut rng);
    assert!(matches!(
        DenseOracle::from_committed(&cs),
        Err(QsimError::TooLarge(_))
    ));
}

#[test]
fn lopsided_rate_within_budget() {
    let mut rng = ChaCha12Rng::seed_from_u64(107);
    let keys = gen_keys(&MICRO, &mut rng);
    let trials = 300;
    let mut events = 0usize;
    for _ in 0..trials {
        let cs = full_commit(&MICRO, &keys, LogicalState::plus(), &mut rng);
        events += cs.lopsided_events;
    }
    // Budget: (w+2) commits, each lopsided with probability <= m*B/B'.
    let per_commit = MICRO.m as f64 * MICRO.b_noise as f64 / MICRO.b_eval as f64;
    let bound = 2.0 * (MICRO.w() as f64 + 2.0) * per_commit;
    let rate = events as f64 / trials as f64;
    assert!(rate <= bound, "lopsided rate {rate} above budget {bound}");
    // At these parameters lopsided events are common; the simulator should
    // actually see some.
    assert!(events > 0);
}

#[test]
fn commitment_string_shape() {
    let mut rng = ChaCha12Rng::seed_from_u64(108);
    let keys = gen_keys(&TINY, &mut rng);
    let cs = full_commit(&TINY, &keys, LogicalState::plus(), &mut rng);
    let ys = cs.commitment_string(0);
    assert_eq!(ys.len(), TINY.w() + 2);
    assert!(ys.iter().all(|y| y.len() == TINY.m));
}

#[test]
fn logical_amplitudes_untouched_by_coherent_commit() {
    // When no lopsided event fires, committing is an isometry on the logical
    // state: the amplitudes must be exactly preserved.
    let mut rng = ChaCha12Rng::seed_from_u64(109);
    let keys = gen_keys(&MICRO, &mut rng);
    loop {
        let state = LogicalState::plus_i();
        let before: Vec<Complex64> = state.amplitudes().to_vec();
        let cs = full_commit(&MICRO, &keys, state, &mut rng);
        if cs.lopsided_events > 0 {
            continue;
        }
        assert_eq!(cs.logical.amplitudes(), &before[..]);
        break;
    }
}
