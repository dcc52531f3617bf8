use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibqca::harness::sweep_all_configs;
use fibqca::{Execution, Propagator, StepParams};

fn sweep_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for n in [10, 12] {
        let prop = Propagator::for_size(n).unwrap();
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, _| {
                b.iter(|| sweep_all_configs(&prop, 0.01, 60, exec))
            });
        }
    }
    group.finish();
}

fn single_trajectory(c: &mut Criterion) {
    let prop = Propagator::for_size(18).unwrap();
    let basis = prop.basis().clone();
    c.bench_function("step N=18", |b| {
        let mut psi = fibqca::StateVector::basis_state(basis.clone(), 0);
        b.iter(|| prop.step(&mut psi, StepParams::from_epsilon(0.01)))
    });
}

criterion_group!(benches, sweep_modes, single_trajectory);
criterion_main!(benches);
