use qcommit_core::ntcf::{ntcf_eval, ntcf_invert};
use qcommit_core::params::SMALL;
use qcommit_core::qsim::{full_commit, sample_open_hadamard, sample_open_standard, LogicalState};
use qcommit_core::scheme::{gen1, real_single, ver1, CommitmentString1, Opening1};
use qcommit_core::BitString;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t0 = Instant::now();
    let keys = gen1(&SMALL, &mut rng);
    println!("keygen: {:?}", t0.elapsed());

    let n = 100u32;
    let t = Instant::now();
    for _ in 0..n {
        let _ = full_commit(&SMALL, &keys.pairs, LogicalState::zero(), &mut rng);
    }
    println!("commit: {:?}", t.elapsed() / n);

    let mut css: Vec<_> = (0..n)
        .map(|_| full_commit(&SMALL, &keys.pairs, LogicalState::zero(), &mut rng))
        .collect();
    let t = Instant::now();
    let openings: Vec<_> = css
        .iter_mut()
        .map(|cs| {
            (
                CommitmentString1::from_committed(cs, 0),
                sample_open_standard(cs, 0, &mut rng).unwrap(),
            )
        })
        .collect();
    println!("open_std: {:?}", t.elapsed() / n);

    let t = Instant::now();
    let mut acc = 0;
    for (ys, o) in &openings {
        if ver1(&SMALL, &keys, ys, &Opening1::Standard(o.clone())) {
            acc += 1;
        }
    }
    println!("ver_std: {:?} (accept {acc}/{n})", t.elapsed() / n);

    let mut css: Vec<_> = (0..n)
        .map(|_| full_commit(&SMALL, &keys.pairs, LogicalState::zero(), &mut rng))
        .collect();
    let t = Instant::now();
    let openings: Vec<_> = css
        .iter_mut()
        .map(|cs| {
            (
                CommitmentString1::from_committed(cs, 0),
                sample_open_hadamard(cs, 0, &mut rng).unwrap(),
            )
        })
        .collect();
    println!("open_had: {:?}", t.elapsed() / n);

    let t = Instant::now();
    let mut acc = 0;
    for (ys, o) in &openings {
        if ver1(&SMALL, &keys, ys, &Opening1::Hadamard(o.clone())) {
            acc += 1;
        }
    }
    println!("ver_had: {:?} (accept {acc}/{n})", t.elapsed() / n);

    // Microbenchmarks.
    let pair = &keys.pairs[0];
    let x = BitString::random(SMALL.w(), &mut rng);
    let t = Instant::now();
    let m = 10_000u32;
    let mut sink = 0u64;
    for _ in 0..m {
        let y = ntcf_eval(&SMALL, &pair.pk, false, &x, &mut rng);
        sink ^= y.entries[0];
    }
    println!("eval: {:?} (sink {sink})", t.elapsed() / m);

    let y = ntcf_eval(&SMALL, &pair.pk, false, &x, &mut rng);
    let t = Instant::now();
    for _ in 0..m {
        let c = ntcf_invert(&SMALL, &pair.sk, &y).unwrap();
        sink ^= c.x0_vec.entries[0];
    }
    println!("invert: {:?} (sink {sink})", t.elapsed() / m);

    let t = Instant::now();
    for basis in [false, true] {
        for _ in 0..50 {
            let _ = real_single(&keys, LogicalState::zero(), basis, &mut rng);
        }
    }
    println!("full session avg: {:?}", t.elapsed() / 100);
}

#[allow(dead_code)]
fn extra() {}
