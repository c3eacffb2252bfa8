// Reconstruct the residual transport instance of real ORC edges at N=8000
// and report SSP statistics on them.
use curvlab::geometry::Manifold;
use curvlab::harness::epsilon_schedule;
use curvlab::rgg::{build_rgg, neighborhood_measure, truncated_shortest_paths, DiscreteMeasure};
use curvlab::transport::TransportProblem;
use std::time::Instant;

fn gcd(a: u64, b: u64) -> u64 { if b == 0 { a } else { gcd(b, a % b) } }

fn main() {
    let n: usize = 8000;
    let sphere = Manifold::sphere(2).unwrap();
    let eps = epsilon_schedule(2, n, 50.0, 1000, &sphere).unwrap();
    let pts = sphere.sample_uniform(n, 7);
    let g = build_rgg(pts, eps, &sphere, Some(7)).unwrap();

    let x = 0usize;
    let sources: Vec<usize> = g.neighbors(x).iter().map(|&(u, _)| u as usize).collect();
    let table = truncated_shortest_paths(&g, &sources, 4.0 * eps);
    let mu = neighborhood_measure(&g, x).unwrap();

    for &(y, _w) in g.neighbors(x).iter().take(3) {
        let nu = neighborhood_measure(&g, y as usize).unwrap();
        let (m, nn) = (mu.len(), nu.len());
        let dmu = mu.denominator();
        let dnu = nu.denominator();
        let scale = dmu / gcd(dmu, dnu) * dnu;
        let (mu_unit, nu_unit) = (scale / dmu, scale / dnu);
        let sup_mu = mu.support();
        let sup_nu = nu.support();
        let mut res_mu: Vec<(usize, u64)> = Vec::new();
        let mut res_nu: Vec<(usize, u64)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < m || j < nn {
            if j == nn || (i < m && sup_mu[i] < sup_nu[j]) { res_mu.push((i, mu_unit)); i += 1; }
            else if i == m || sup_nu[j] < sup_mu[i] { res_nu.push((j, nu_unit)); j += 1; }
            else {
                let matched = mu_unit.min(nu_unit);
                if mu_unit > matched { res_mu.push((i, mu_unit - matched)); }
                if nu_unit > matched { res_nu.push((j, nu_unit - matched)); }
                i += 1; j += 1;
            }
        }
        let residual: u64 = res_mu.iter().map(|&(_, u)| u).sum();
        println!("deg x={m} deg y={nn} scale={scale} residual_atoms {}x{} residual_units={residual}", res_mu.len(), res_nu.len());

        let mu_r = DiscreteMeasure::from_rationals(res_mu.iter().map(|&(a, _)| sup_mu[a]).collect(), res_mu.iter().map(|&(_, u)| u).collect(), residual).unwrap();
        let nu_r = DiscreteMeasure::from_rationals(res_nu.iter().map(|&(a, _)| sup_nu[a]).collect(), res_nu.iter().map(|&(_, u)| u).collect(), residual).unwrap();
        let cost: Vec<Vec<f64>> = res_mu.iter().map(|&(a, _)| {
            let row_idx = a; // mu support index == source index in table
            res_nu.iter().map(|&(b, _)| table.distance(row_idx, sup_nu[b])).collect()
        }).collect();
        let p = TransportProblem::new(mu_r, nu_r, cost).unwrap();
        let t = Instant::now();
        let (v, _plan) = curvlab::transport::w1_exact(&p);
        println!("  residual LP solved in {:?} (value {v:.5})", t.elapsed());
    }
}
