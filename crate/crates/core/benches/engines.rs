//! Classical crystal generation and the affinization check, run on a one-thread pool and on
//! the full pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ls_crystal::affinization::Affinization;
use ls_crystal::crystal_graph::{generate_closure, ClPathCrystal, DEFAULT_CAP};
use ls_crystal::weights::from_shape;
use ls_crystal::{AffineCartanDatum, ClPath, DominantShape};
use ls_crystal::ls_crystal::LsCrystal;

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let full = std::thread::available_parallelism().map_or(1, |n| n.get());
    [("sequential".to_string(), 1), (format!("parallel-{full}"), full)]
        .into_iter()
        .map(|(name, n)| (name, rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()))
        .collect()
}

fn generation(c: &mut Criterion) {
    let d = AffineCartanDatum::from_label("C2~1").unwrap();
    let shape: DominantShape = "1,2".parse().unwrap();
    let seed = ClPath::straight(from_shape(&d, &shape).cl());
    let mut group = c.benchmark_group("classical crystal C2~1 (1,2)");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            b.iter(|| pool.install(|| generate_closure(&ClPathCrystal { datum: &d }, seed.clone(), DEFAULT_CAP).unwrap()))
        });
    }
    group.finish();
}

fn affinization(c: &mut Criterion) {
    let d = AffineCartanDatum::from_label("A2~1").unwrap();
    let ls = LsCrystal::new(&d, &"2,1".parse().unwrap()).unwrap();
    let mut group = c.benchmark_group("affinization A2~1 (2,1)");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            b.iter(|| pool.install(|| Affinization::new(&ls).unwrap().verify_theta(2)))
        });
    }
    group.finish();
}

criterion_group!(benches, generation, affinization);
criterion_main!(benches);
