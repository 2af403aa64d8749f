use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use diskgrowth::bessel::bessel_j;
use diskgrowth::growth::Explorer;
use diskgrowth::{BoundaryCondition, DiskModes, EvalRegime, ModeIndex, Order, ZeroFinder};

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_j");
    for (name, n, x) in [
        ("series", 3u32, 2.5),
        ("transition", 200, 201.0),
        ("hankel", 10, 5000.0),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| bessel_j(Order(n), black_box(x), EvalRegime::Reference).unwrap())
        });
    }
    g.finish();
}

fn zeros(c: &mut Criterion) {
    c.bench_function("find_zero n=500 m=40 cold", |b| {
        b.iter_batched(
            ZeroFinder::default,
            |f| {
                f.find_zero(Order(500), 40, BoundaryCondition::Neumann)
                    .unwrap()
            },
            BatchSize::SmallInput,
        )
    });
}

fn modes(c: &mut Criterion) {
    let f = ZeroFinder::default();
    let dm = DiskModes::new(&f);
    let mode = ModeIndex::new(100, 30, BoundaryCondition::Dirichlet);
    dm.profile(mode).unwrap();
    c.bench_function("sup_norm n=100 m=30", |b| {
        b.iter(|| dm.sup_norm(black_box(mode)).unwrap())
    });
}

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("growth");
    g.sample_size(10);
    g.bench_function("dirichlet table n_max=400", |b| {
        b.iter_batched(
            ZeroFinder::default,
            |f| {
                Explorer::new(&f)
                    .reproduce_table(BoundaryCondition::Dirichlet, 400)
                    .unwrap()
            },
            BatchSize::PerIteration,
        )
    });
    g.finish();
}

criterion_group!(benches, bessel, zeros, modes, table);
criterion_main!(benches);
