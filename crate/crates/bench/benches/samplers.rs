use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use heavytail_bench::{degrees, power_p, theta};
use heavytail_core::dynamic::{critical_time, run_dynamic, simulate_mc};
use heavytail_core::graph::{components_and_stats, explore_degrees, sample_cm, ComponentOptions, StartRule};
use heavytail_core::limit::{excursions_and_marks, simulate_thinned_levy};
use heavytail_core::rank_one::{sample_ptree, Route, TiltedSampler};
use heavytail_core::rng::seeded;

fn graph(c: &mut Criterion) {
    let mut g = c.benchmark_group("graph");
    g.sample_size(10);
    for n in [10_000usize, 100_000] {
        let d = degrees(n);
        g.bench_with_input(BenchmarkId::new("sample_cm", n), &d, |b, d| {
            let mut r = seeded(1);
            b.iter(|| sample_cm(d, &mut r).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("explore_degrees", n), &d, |b, d| {
            let mut r = seeded(2);
            b.iter(|| explore_degrees(d, None, StartRule::SizeBiased, &mut r).unwrap())
        });
        let cm = sample_cm(&d, &mut seeded(3)).unwrap();
        g.bench_with_input(BenchmarkId::new("components", n), &cm, |b, cm| {
            let mut r = seeded(4);
            b.iter(|| components_and_stats(cm, None, &ComponentOptions::sizes_only(), &mut r).unwrap())
        });
    }
    g.finish();
}

fn dynamic(c: &mut Criterion) {
    let mut g = c.benchmark_group("dynamic");
    g.sample_size(10);
    let d = degrees(100_000);
    let eta = heavytail_core::degrees::exponents(heavytail_bench::TAU).unwrap().eta;
    let tc = critical_time(&d, 0.0, eta).unwrap();
    g.bench_function("pairing_to_critical_time_1e5", |b| {
        let mut r = seeded(5);
        b.iter(|| run_dynamic(&d, tc, &mut r).unwrap())
    });
    let x: Vec<f64> = (1..=2000).map(|i| (i as f64).powf(-0.4)).collect();
    g.bench_function("coalescent_2000_masses", |b| {
        let mut r = seeded(6);
        b.iter(|| simulate_mc(&x, 0.5, &mut r).unwrap())
    });
    g.finish();
}

fn rank_one(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_one");
    for m in [100usize, 1000] {
        let p = power_p(m);
        g.bench_with_input(BenchmarkId::new("ptree", m), &p, |b, p| {
            let mut r = seeded(7);
            b.iter(|| sample_ptree(p, &mut r))
        });
        g.bench_with_input(BenchmarkId::new("tilted_a1", m), &p, |b, p| {
            let mut r = seeded(8);
            b.iter_batched(
                || TiltedSampler::new(p.clone(), 1.0, Route::Lemma45).unwrap(),
                |mut s| s.sample(&mut r).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

fn limit(c: &mut Criterion) {
    let mut g = c.benchmark_group("limit");
    for k in [100usize, 1000] {
        let th = theta(k);
        g.bench_with_input(BenchmarkId::new("levy_excursions", k), &th, |b, th| {
            let mut r = seeded(9);
            b.iter(|| {
                let p = simulate_thinned_levy(th, 0.0, 50.0, &mut r).unwrap();
                excursions_and_marks(&p, &mut r)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, graph, dynamic, rank_one, limit);
criterion_main!(benches);
