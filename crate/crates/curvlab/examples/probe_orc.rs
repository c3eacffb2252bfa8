use curvlab::curvature::estimate_manifold_orc;
use curvlab::geometry::{Manifold, Point, TangentVector};

fn main() {
    let sphere = Manifold::sphere(2).unwrap();
    let torus = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
    let x_s = Point(vec![0.0, 0.0, 1.0]);
    let v = TangentVector { base: x_s.clone(), components: vec![0.04, 0.0, 0.0], norm: 0.04 };
    let y_s = sphere.exp_map(&v);
    let x_t = Point(vec![0.5, 0.5]);
    let y_t = Point(vec![0.54, 0.5]);
    let eps = 0.05;
    let m: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let reps: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut ds = Vec::new();
    let (mut ssum, mut tsum) = (0.0, 0.0);
    for r in 0..reps {
        let ks = estimate_manifold_orc(&sphere, &x_s, &y_s, eps, m, 1700 + r).unwrap();
        let kt = estimate_manifold_orc(&torus, &x_t, &y_t, eps, m, 9900 + r).unwrap();
        ds.push((ks - kt) / (eps * eps));
        ssum += ks / (eps * eps);
        tsum += kt / (eps * eps);
    }
    let n = reps as f64;
    let mean: f64 = ds.iter().sum::<f64>() / n;
    let var: f64 = ds.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    println!("m={m} reps={reps}");
    println!("sphere mean k/e2 = {:.4}", ssum / n);
    println!("torus  mean k/e2 = {:.4}", tsum / n);
    println!("diff   mean k/e2 = {:.4}  sd = {:.4}  se = {:.4}", mean, var.sqrt(), (var / n).sqrt());
}
