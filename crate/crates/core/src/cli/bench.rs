//! Build and query timings over a dataset.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Axis, Point, Rect};
use crate::random::rng;
use crate::unified::UnifiedSegmentTree;

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub kind: &'static str,
    pub n: usize,
    pub nodes: usize,
    pub lx: u32,
    pub ly: u32,
    pub node_bound: u64,
    pub queries: usize,
    pub seed: u64,
    pub build_micros: f64,
    pub stab_mean_micros: f64,
    pub stab_p99_micros: f64,
    pub rectq_mean_micros: f64,
    pub rectq_p99_micros: f64,
    /// Mean output size of the rectangle queries.
    pub rectq_mean_k: f64,
}

/// `16 n (2 Lx)(2 Ly)` with each factor at least one.
pub fn node_bound(n: usize, lx: u32, ly: u32) -> u64 {
    16 * n as u64 * (2 * lx as u64).max(1) * (2 * ly as u64).max(1)
}

/// The query workload for a seed: probe points over the grid's bounding box and stored
/// rectangles reused as query rectangles.
pub fn bench_queries(
    tree: &UnifiedSegmentTree<i64>,
    count: usize,
    seed: u64,
) -> (Vec<Point<i64>>, Vec<Rect<i64>>) {
    let mut rng = rng(seed);
    let xs = tree.map().endpoints(Axis::X);
    let ys = tree.map().endpoints(Axis::Y);
    let stored: Vec<&Rect<i64>> = tree.rects().collect();
    if stored.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let points = (0..count)
        .map(|_| Point::new(rng.gen_range(xs[0]..=xs[xs.len() - 1]), rng.gen_range(ys[0]..=ys[ys.len() - 1])))
        .collect();
    let rects = (0..count).map(|_| **stored.choose(&mut rng).unwrap()).collect();
    (points, rects)
}

fn micros(d: Duration) -> f64 {
    d.as_secs_f64() * 1e6
}

fn mean_p99(samples: &mut [f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    samples.sort_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let idx = ((samples.len() as f64 * 0.99).ceil() as usize).clamp(1, samples.len()) - 1;
    (mean, samples[idx])
}

pub fn run_bench(rects: &[Rect<i64>], queries: usize, seed: u64) -> Result<BenchReport> {
    let start = Instant::now();
    let tree = UnifiedSegmentTree::build(rects)?;
    let build = start.elapsed();

    let (points, qrects) = bench_queries(&tree, queries, seed);
    let mut stab_times = Vec::with_capacity(points.len());
    for p in &points {
        let t = Instant::now();
        std::hint::black_box(tree.stab(*p));
        stab_times.push(micros(t.elapsed()));
    }
    let mut rectq_times = Vec::with_capacity(qrects.len());
    let mut total_k = 0usize;
    for q in &qrects {
        let t = Instant::now();
        let ids = tree.intersect_query(q)?;
        rectq_times.push(micros(t.elapsed()));
        total_k += ids.len();
    }
    let (stab_mean, stab_p99) = mean_p99(&mut stab_times);
    let (rectq_mean, rectq_p99) = mean_p99(&mut rectq_times);
    let levels = tree.levels();
    Ok(BenchReport {
        kind: "bench",
        n: tree.len(),
        nodes: tree.node_count(),
        lx: levels.x,
        ly: levels.y,
        node_bound: node_bound(tree.len(), levels.x, levels.y),
        queries,
        seed,
        build_micros: micros(build),
        stab_mean_micros: stab_mean,
        stab_p99_micros: stab_p99,
        rectq_mean_micros: rectq_mean,
        rectq_p99_micros: rectq_p99,
        rectq_mean_k: if qrects.is_empty() { 0.0 } else { total_k as f64 / qrects.len() as f64 },
    })
}
