use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qcommit_core::bitstring::BitString;
use qcommit_core::ntcf::{ntcf_eval, ntcf_gen, ntcf_invert};
use qcommit_core::params::{MICRO, SMALL};
use qcommit_core::qsim::{full_commit, sample_open_standard, LogicalState};
use qcommit_core::scheme::{gen1, honest_open1, real_single, ver1, CommitmentString1, Opening1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_ntcf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pair = ntcf_gen(&SMALL, &mut rng);
    let x = BitString::random(SMALL.w(), &mut rng);
    c.bench_function("ntcf_eval_small", |b| {
        b.iter(|| ntcf_eval(&SMALL, &pair.pk, false, &x, &mut rng))
    });
    let y = ntcf_eval(&SMALL, &pair.pk, false, &x, &mut rng);
    c.bench_function("ntcf_invert_small", |b| {
        b.iter(|| ntcf_invert(&SMALL, &pair.sk, &y).unwrap())
    });
}

fn bench_commit(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let keys = gen1(&SMALL, &mut rng);
    c.bench_function("commit_qubit_small", |b| {
        b.iter(|| full_commit(&SMALL, &keys.pairs, LogicalState::plus(), &mut rng))
    });
    c.bench_function("open_and_verify_standard_small", |b| {
        b.iter_batched(
            || {
                let cs = full_commit(&SMALL, &keys.pairs, LogicalState::zero(), &mut rng);
                let ys = CommitmentString1::from_committed(&cs, 0);
                (cs, ys)
            },
            |(mut cs, ys)| {
                let z = sample_open_standard(&mut cs, 0, &mut ChaCha8Rng::seed_from_u64(3))
                    .unwrap();
                ver1(&SMALL, &keys, &ys, &Opening1::Standard(z))
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("session_hadamard_small", |b| {
        b.iter(|| real_single(&keys, LogicalState::plus(), true, &mut rng))
    });
}

fn bench_micro_dense(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let keys = gen1(&MICRO, &mut rng);
    c.bench_function("dense_oracle_micro", |b| {
        b.iter_batched(
            || full_commit(&MICRO, &keys.pairs, LogicalState::plus(), &mut rng),
            |cs| qcommit_core::qsim::DenseOracle::from_committed(&cs).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let keys_open = keys.clone();
    c.bench_function("open_hadamard_micro", |b| {
        b.iter_batched(
            || full_commit(&MICRO, &keys_open.pairs, LogicalState::plus(), &mut rng),
            |mut cs| honest_open1(&mut cs, 0, true, &mut ChaCha8Rng::seed_from_u64(5)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, bench_ntcf, bench_commit, bench_micro_dense);
criterion_main!(benches);
