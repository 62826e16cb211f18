use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lyzero_bench::chain_instance;
use lyzero_core::{
    chain_transfer_partition, classify, find_zeros_with, Precision, RootFindOptions,
    DEFAULT_CIRCLE_TOL,
};

fn bench_root_finding(c: &mut Criterion) {
    let mut group = c.benchmark_group("zeros");
    for n in [5usize, 10, 20] {
        let p = chain_transfer_partition(&chain_instance(n, 1.2), false).unwrap();
        for (label, precision) in [
            ("double", Precision::Double),
            ("extended", Precision::Extended),
        ] {
            let opts = RootFindOptions {
                precision,
                ..Default::default()
            };
            group.bench_with_input(
                BenchmarkId::new(label, 2 * n),
                &(p.clone(), opts),
                |b, (p, opts)| {
                    b.iter(|| {
                        let zs = find_zeros_with(p, opts).unwrap();
                        classify(&zs, p, DEFAULT_CIRCLE_TOL)
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_root_finding);
criterion_main!(benches);
