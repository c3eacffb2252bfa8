use curvlab::curvature::{node_curvatures, CurvatureOptions};
use curvlab::geometry::Manifold;
use curvlab::harness::epsilon_schedule;
use curvlab::rgg::build_rgg;
use std::time::Instant;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8000);
    let units: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(8);
    let sphere = Manifold::sphere(2).unwrap();
    let eps = epsilon_schedule(2, n, 50.0, 1000, &sphere).unwrap();
    let pts = sphere.sample_uniform(n, 7);
    let g = build_rgg(pts, eps, &sphere, Some(7)).unwrap();
    println!("N={n} eps={eps:.3} edges={} mean_deg={:.0}", g.edge_count(), 2.0 * g.edge_count() as f64 / n as f64);
    let nodes: Vec<usize> = (0..units).collect();
    let t = Instant::now();
    let report = node_curvatures(&g, &nodes, &CurvatureOptions::default()).unwrap();
    let elapsed = t.elapsed();
    let edges = report.edges.len();
    println!("{units} units, {edges} edges: {elapsed:?} total, {:?}/edge", elapsed / edges as u32);
    let mean: f64 = report.nodes.iter().map(|c| c.scaled_sorc).sum::<f64>() / units as f64;
    println!("mean scaled sorc over {units} nodes: {mean:.3}");
}
