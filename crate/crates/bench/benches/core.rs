use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use obstree_core::blend::{blend_metric, certify_rtree, lambda_grid};
use obstree_core::boundary::BoundaryPoint;
use obstree_core::gen::{random_pair, random_table, random_tree};
use obstree_core::observers::{converges_obs, subbasis_from_sample, Multipod, PodPoint, PointSequence, TreeOracle};
use obstree_core::qmap::{q_fiber_check, qmap_estimate, small_words_search, IsometricAction, LineAction};
use obstree_core::{check_hyperbolic, reconstruct_tree, Quadratic, Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trees(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let tables: Vec<_> = (0..32).map(|_| random_tree(&mut rng, 12).metric_table()).collect();
    c.bench_function("four_point_12_points", |b| {
        b.iter(|| tables.iter().filter(|t| check_hyperbolic(t, &Rational::zero()).passes).count())
    });
    let small: Vec<_> = (0..32).map(|_| random_table(&mut rng, 10)).collect();
    c.bench_function("reconstruct_10_points", |b| b.iter(|| small.iter().filter(|t| reconstruct_tree(t).is_ok()).count()));
}

fn observers(c: &mut Criterion) {
    let m = Multipod::<Rational>::new(100);
    let probes = subbasis_from_sample(&m, (0..).map(|i| m.sample_point(i)), 8).unwrap();
    c.bench_function("multipod_turning_depth_100", |b| {
        b.iter(|| {
            let seq = PointSequence::from_fn(|k| Some(m.point((k - 1) % 100, Rational::one())));
            converges_obs(&m, &seq, &PodPoint::Hub, &probes, 100).unwrap()
        })
    });
}

fn qmap(c: &mut Criterion) {
    let act = LineAction::new(vec![Quadratic::from_i128(1), Quadratic::sqrt(2)]).unwrap();
    c.bench_function("small_words_len_12", |b| b.iter(|| small_words_search(&act, &Quadratic::from_i128(1), 12).len()));
    let x = BoundaryPoint::parse(";abAB").unwrap();
    let p = act.basepoint();
    c.bench_function("qmap_estimate_depth_1000", |b| b.iter(|| qmap_estimate(&act, &x, &p, 1000).unwrap()));
    let y = BoundaryPoint::parse(";aaaBB").unwrap();
    let tol = Quadratic::from_ratio(1, 1_000_000);
    c.bench_function("fiber_check_depth_1000", |b| b.iter(|| q_fiber_check(&act, &x, &y, 1000, &tol).unwrap()));
}

fn blend(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grid = lambda_grid::<Rational>(10);
    c.bench_function("blend_certify_grid", |b| {
        b.iter_batched(
            || random_pair(&mut rng, 10),
            |p| grid.iter().filter(|l| certify_rtree(&blend_metric(&p, l).unwrap().metric_table()).passes()).count(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, trees, observers, qmap, blend);
criterion_main!(benches);
