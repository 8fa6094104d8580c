use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tsd_core::{
    ensemble_populations, run_sequence, stationary_distribution, systems, transition_matrix,
    Execution, FinderConfig, HamiltonianOperator, MixtureBasis, Schedule, StateVector,
};

fn chain_hamiltonian(d: usize) -> HamiltonianOperator {
    let mut entries = vec![0.0; d * d];
    for i in 0..d {
        entries[i * d + i] = (i % 3) as f64;
        if i + 1 < d {
            entries[i * d + i + 1] = 0.3;
            entries[(i + 1) * d + i] = 0.3;
        }
    }
    HamiltonianOperator::from_real(d, &entries).unwrap()
}

fn propagator(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagator");
    for d in [2, 8, 32, 64] {
        let h = chain_hamiltonian(d);
        h.eigen();
        group.bench_with_input(BenchmarkId::new("cached_eigen", d), &h, |b, h| {
            b.iter(|| h.propagator(black_box(1.3)))
        });
    }
    group.finish();
}

fn finder(c: &mut Criterion) {
    let sys = systems::Demo3::default();
    let h = sys.hamiltonian();
    let basis = MixtureBasis::standard(3);
    let psi = sys.initial_state();
    c.bench_function("demo3_sequence_k5", |b| {
        b.iter(|| run_sequence(&psi, &h, &basis, 5, &FinderConfig::default()).unwrap())
    });
}

fn markov(c: &mut Criterion) {
    let mut group = c.benchmark_group("stationary");
    for d in [4, 16, 64] {
        let t = transition_matrix(&chain_hamiltonian(d), &MixtureBasis::standard(d), 0.7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &t, |b, t| {
            b.iter(|| stationary_distribution(t, 1e-13, 1_000_000).unwrap())
        });
    }
    group.finish();
}

fn ensemble(c: &mut Criterion) {
    let h = systems::rabi_hamiltonian(1.0);
    let basis = MixtureBasis::standard(2);
    let psi = StateVector::basis(2, 0);
    let schedule = Schedule::Fixed(2.0 * std::f64::consts::PI * 0.43);
    let mut group = c.benchmark_group("ensemble_10k");
    group.sample_size(10);
    for (name, exec) in [
        ("serial", Execution::Serial),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                ensemble_populations(&psi, &h, &basis, &schedule, 10, 10_000, 7, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, propagator, finder, markov, ensemble);
criterion_main!(benches);
