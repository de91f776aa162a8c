use criterion::{criterion_group, criterion_main, Criterion};
use ellcoh::{Curve, Direction, Window};

fn window(dirs: &[(i64, i64)], n: usize) -> Window {
    let dirs: Vec<Direction> = dirs
        .iter()
        .map(|&(a, b)| Direction::new(a, b).unwrap())
        .collect();
    Window::new(Curve::from_ints([0, 0, 0, -1, 1]).unwrap(), &dirs, 2, n).unwrap()
}

fn exactness(c: &mut Criterion) {
    let mut g = c.benchmark_group("cousin");
    g.sample_size(10);
    // fresh windows each time: chart construction is part of the cost
    g.bench_function("exactness/2dirs", |b| {
        b.iter(|| window(&[(1, 0), (0, 1)], 8).exactness_report().unwrap())
    });
    g.bench_function("exactness/3dirs", |b| {
        b.iter(|| {
            window(&[(1, 1), (-1, 1), (1, 0)], 10)
                .exactness_report()
                .unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, exactness);
criterion_main!(benches);
