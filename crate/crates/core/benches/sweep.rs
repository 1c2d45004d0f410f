use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locdim::generators::labeled_graphs;
use locdim::oracle::local_metric_dimension_with;
use locdim::*;

fn corpus() -> Vec<Graph> {
    labeled_graphs(6).filter(|g| g.is_connected() && !g.has_k4()).step_by(7).collect()
}

fn exact_dimension(c: &mut Criterion) {
    let graphs: Vec<Graph> = (0..4).map(|s| random_k4_free(14, 0.35, s).unwrap()).collect();
    let mut group = c.benchmark_group("exact_dimension_n14");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &graphs, |b, gs| {
            b.iter(|| gs.iter().map(|g| local_metric_dimension_with(g, 16, exec).unwrap().0).sum::<usize>())
        });
    }
    group.finish();
}

fn corpus_sweep(c: &mut Criterion) {
    let graphs = corpus();
    let opts = ConstructOptions::default();
    let mut group = c.benchmark_group("construct_sweep_n6");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &graphs, |b, gs| {
            b.iter(|| exec.map(gs, |g| construct_certificate(g, &opts).unwrap().w.len()).into_iter().sum::<usize>())
        });
    }
    group.finish();
}

fn batch_jobs(c: &mut Criterion) {
    let stream: String = corpus().iter().map(|g| g.to_graph6().unwrap() + "\n").collect();
    let mut group = c.benchmark_group("batch_n6");
    group.sample_size(10);
    for jobs in [1, 4] {
        group.bench_with_input(BenchmarkId::new("jobs", jobs), &stream, |b, s| {
            b.iter(|| run_batch(s, &BatchConfig { jobs, ..BatchConfig::default() }).summary.graphs)
        });
    }
    group.finish();
}

criterion_group!(benches, exact_dimension, corpus_sweep, batch_jobs);
criterion_main!(benches);
