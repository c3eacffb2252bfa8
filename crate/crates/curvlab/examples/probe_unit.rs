// Phase timing for one batch work unit on a sweep-sized graph.
use curvlab::geometry::Manifold;
use curvlab::harness::epsilon_schedule;
use curvlab::rgg::{build_rgg, neighborhood_measure, truncated_shortest_paths, DiscreteMeasure};
use curvlab::transport::{w1_exact, TransportProblem};
use std::time::Instant;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let sphere = Manifold::sphere(2).unwrap();
    let eps = epsilon_schedule(2, n, 50.0, 1000, &sphere).unwrap();
    let pts = sphere.sample_uniform(n, 7);
    let t0 = Instant::now();
    let g = build_rgg(pts, eps, &sphere, Some(7)).unwrap();
    println!("build N={n} eps={eps:.3} edges={} in {:?}", g.edge_count(), t0.elapsed());

    let x = (0..n).max_by_key(|&i| g.degree(i)).unwrap();
    let deg = g.degree(x);
    println!("unit node {x}, degree {deg}");

    let sources: Vec<usize> = g.neighbors(x).iter().map(|&(u, _)| u as usize).collect();
    let t1 = Instant::now();
    let table = truncated_shortest_paths(&g, &sources, 4.0 * eps);
    println!("dijkstra {} sources: {:?}", sources.len(), t1.elapsed());

    let mu = neighborhood_measure(&g, x).unwrap();
    let mut lp_time = std::time::Duration::ZERO;
    let mut asm_time = std::time::Duration::ZERO;
    let mut total_mn = 0usize;
    for &(y, w) in g.neighbors(x) {
        let t2 = Instant::now();
        let nu = neighborhood_measure(&g, y as usize).unwrap();
        let cost: Vec<Vec<f64>> = (0..mu.len())
            .map(|i| nu.support().iter().map(|&v| table.distance(i, v)).collect())
            .collect();
        asm_time += t2.elapsed();
        let t3 = Instant::now();
        let p = TransportProblem::new(mu.clone(), nu.clone(), cost).unwrap();
        let (w1, _) = w1_exact(&p);
        lp_time += t3.elapsed();
        total_mn += mu.len() * nu.len();
        let _ = 1.0 - w1 / w;
    }
    println!(
        "{} edges: assemble {:?}, full LP {:?} ({:?}/edge, avg {}x{})",
        deg, asm_time, lp_time, lp_time / deg as u32, mu.len(), total_mn / deg / mu.len()
    );
}
