use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parity_core::circuit::{Circuit, Gate};
use parity_core::decoder::DecoderTable;
use parity_core::gf2::rref;
use parity_core::testkit::{random_code, CodeGeneratorSpec};
use parity_core::{BitMatrix, BitVector, PauliString, Simulator, StabilizerTableau, StateVector};

fn gf2(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (rows, cols) = (500, 1000);
    let m = BitMatrix::from_rows(
        (0..rows)
            .map(|_| BitVector::from_bools(&(0..cols).map(|_| rng.gen()).collect::<Vec<bool>>()))
            .collect(),
        cols,
    )
    .unwrap();
    c.bench_function("rref 500x1000", |b| b.iter(|| rref(&m)));
}

fn tableau(c: &mut Criterion) {
    let n = 1000;
    let mut start = StabilizerTableau::new(n);
    for q in 0..n {
        start.h(q);
    }
    for q in 0..n - 1 {
        start.cnot(q, q + 1);
    }
    let zs: Vec<PauliString> = (0..n).map(|q| PauliString::z_on(n, &[q])).collect();
    let mut group = c.benchmark_group("tableau");
    group.sample_size(10);
    group.bench_function("10k single-qubit measurements, n = 1000", |b| {
        b.iter_batched(
            || (start.clone(), ChaCha8Rng::seed_from_u64(2)),
            |(mut t, mut rng)| {
                for i in 0..10_000 {
                    t.measure(&zs[i % n], None, &mut rng).unwrap();
                }
                t
            },
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn statevector(c: &mut Criterion) {
    let n = 14;
    let mut layer = Circuit::new(n);
    for q in 0..n {
        layer.push(Gate::h(q)).unwrap();
    }
    for q in 0..n - 1 {
        layer.push(Gate::cnot(q, q + 1)).unwrap();
    }
    layer.push(Gate::rz(0.3, n - 1)).unwrap();
    let mut sv = StateVector::new(n).unwrap();
    c.bench_function("statevector layer, n = 14", |b| b.iter(|| sv.apply_unitary_circuit(&layer).unwrap()));
}

fn decoder(c: &mut Criterion) {
    let spec = CodeGeneratorSpec::new((16, 16), (2, 2));
    let (code, _) = random_code(&spec, &mut spec.rng()).unwrap();
    c.bench_function("decoder table, n = 16", |b| b.iter(|| DecoderTable::build(&code).unwrap()));
}

criterion_group!(benches, gf2, tableau, statevector, decoder);
criterion_main!(benches);
