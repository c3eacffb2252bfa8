use curvlab::geometry::Manifold;
use curvlab::rgg::{build_rgg, DiscreteMeasure};
use curvlab::transport::{w1_exact, TransportProblem};
use curvlab::curvature::{node_curvatures, CurvatureOptions};
use curvlab::harness::epsilon_schedule;
use std::time::Instant;

fn random_cloud_problem(m: usize, seed: u64) -> TransportProblem {
    // Two point clouds in the unit square, Euclidean costs.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<(f64, f64)> = (0..m).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let ys: Vec<(f64, f64)> = (0..m).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let cost = xs.iter().map(|&(a, b)| ys.iter().map(|&(c, d)| ((a - c).powi(2) + (b - d).powi(2)).sqrt()).collect()).collect();
    TransportProblem::new(
        DiscreteMeasure::uniform((0..m).collect()).unwrap(),
        DiscreteMeasure::uniform((0..m).collect()).unwrap(),
        cost,
    ).unwrap()
}

fn main() {
    for &m in &[50usize, 100, 200, 283, 400, 800] {
        let p = random_cloud_problem(m, m as u64);
        let t = Instant::now();
        let (v, _) = w1_exact(&p);
        println!("assignment {m}x{m}: {:?} (value {v:.4})", t.elapsed());
    }

    // Real sweep-like workload: sphere n=2, N=2000, degree-50 schedule.
    let sphere = Manifold::sphere(2).unwrap();
    for &n in &[1000usize, 2000] {
        let eps = epsilon_schedule(2, n, 50.0, 1000, &sphere).unwrap();
        let pts = sphere.sample_uniform(n, 7);
        let g = build_rgg(pts, eps, &sphere, Some(7)).unwrap();
        let mean_deg = 2.0 * g.edge_count() as f64 / n as f64;
        let nodes: Vec<usize> = (0..20).collect();
        let t = Instant::now();
        let report = node_curvatures(&g, &nodes, &CurvatureOptions::default()).unwrap();
        let n_edges: usize = report.edges.len();
        println!(
            "sphere N={n} deg~{mean_deg:.0}: 20 nodes, {n_edges} edges in {:?} ({:?}/edge)",
            t.elapsed(),
            t.elapsed() / n_edges as u32
        );
    }
}
