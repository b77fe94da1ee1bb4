use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use shiftrecon_bench::relabeled_pair;
use shiftrecon_core::random::{random_observed, random_systems, rng};
use shiftrecon_core::{
    consistency_check, data_functor, find_conjugacy, reconstruct, DiagramArrow, DynDiagram, DynMorphism, FiniteDynSys,
    SubshiftPresentation,
};

fn words(c: &mut Criterion) {
    let p = SubshiftPresentation::golden_mean();
    let mut g = c.benchmark_group("golden_mean_words");
    for depth in [8, 12, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| b.iter(|| black_box(p.words_up_to(d))));
    }
    g.finish();
}

fn colimit(c: &mut Criterion) {
    // coequalizer of the identity and the rotation on a long cycle
    let cyc = FiniteDynSys::cycle(64);
    let rot = DynMorphism::new(cyc.clone(), cyc.clone(), cyc.step_map());
    let d = DynDiagram::new(
        vec![cyc.clone(), cyc.clone()],
        vec![
            DiagramArrow { from: 0, to: 1, map: DynMorphism::identity(&cyc).map },
            DiagramArrow { from: 0, to: 1, map: rot.map },
        ],
    )
    .unwrap();
    c.bench_function("colimit_coequalizer_c64", |b| b.iter(|| black_box(d.colimit().unwrap())));
}

fn consistency(c: &mut Criterion) {
    let systems = random_systems(7, 200, 8);
    c.bench_function("consistency_200_random", |b| {
        b.iter(|| systems.iter().filter(|s| consistency_check(s).unwrap().consistent).count())
    });
}

fn conjugacy(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_conjugacy");
    for n in [16, 64, 256] {
        let (a, b2) = relabeled_pair(n, 11);
        assert!(find_conjugacy(&a, &b2).is_some());
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| black_box(find_conjugacy(&a, &b2))));
    }
    g.finish();
}

fn reconstruction(c: &mut Criterion) {
    let x = random_observed(&mut rng(5), 40, 3);
    let data = data_functor(&x, 1, 6).unwrap();
    c.bench_function("reconstruct_order_4", |b| b.iter(|| black_box(reconstruct(&data, Some(4)).unwrap())));
}

criterion_group!(benches, words, colimit, consistency, conjugacy, reconstruction);
criterion_main!(benches);
