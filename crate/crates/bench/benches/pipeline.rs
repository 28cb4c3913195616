use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use suzuki_core::cohomology::Cohomology;
use suzuki_core::EModule;

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("operators");
    for m in [1, 2] {
        let coh = Cohomology::new(m).unwrap();
        group.bench_function(format!("frobenius m={m}"), |b| b.iter(|| black_box(coh.frobenius_matrix().unwrap())));
        group.bench_function(format!("verschiebung m={m}"), |b| {
            b.iter(|| black_box(coh.verschiebung_matrix().unwrap()))
        });
    }
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let mut group = c.benchmark_group("analysis");
    group.sample_size(10);
    for m in [1, 2] {
        let coh = Cohomology::new(m).unwrap();
        let module = EModule::from_cohomology(&coh).unwrap();
        group.bench_function(format!("analyze m={m}"), |b| {
            b.iter_batched(|| module.clone(), |x| black_box(x.analyze().unwrap()), BatchSize::LargeInput)
        });
        group.bench_function(format!("tau split m={m}"), |b| b.iter(|| black_box(module.tau_split().unwrap())));
    }
    group.finish();
}

criterion_group!(benches, operators, analysis);
criterion_main!(benches);
