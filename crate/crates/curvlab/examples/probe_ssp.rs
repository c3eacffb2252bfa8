// Instrumented mirror of w1_exact to count augmentations and settles.
use curvlab::rgg::DiscreteMeasure;
use curvlab::transport::TransportProblem;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

fn solve_instrumented(p: &TransportProblem) -> (f64, usize, usize, usize) {
    let m = p.mu.len();
    let n = p.nu.len();
    let scale = 1u64; // uniform same-size measures in this probe
    let mut excess: Vec<u64> = p.mu.numerators().to_vec();
    let mut deficit: Vec<u64> = p.nu.numerators().to_vec();
    let _ = scale;
    let cost: Vec<f64> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| p.cost(i, j)).collect();
    let mut flow: Vec<u64> = vec![0; m * n];
    let mut h: Vec<f64> = vec![0.0; m + n];
    for j in 0..n {
        let mut lo = f64::INFINITY;
        for i in 0..m { lo = lo.min(cost[i * n + j]); }
        h[m + j] = lo;
    }
    for i in 0..m {
        let mut lo = f64::INFINITY;
        for j in 0..n { lo = lo.min(cost[i * n + j] - h[m + j]); }
        h[i] = -lo;
        if excess[i] == 0 { continue; }
        for j in 0..n {
            if deficit[j] == 0 { continue; }
            if cost[i * n + j] - h[m + j] == lo {
                let push = excess[i].min(deficit[j]);
                flow[i * n + j] += push; excess[i] -= push; deficit[j] -= push;
                if excess[i] == 0 { break; }
            }
        }
    }
    let (mut augs, mut settles, mut pushes) = (0usize, 0usize, 0usize);
    let mut dist = vec![f64::INFINITY; m + n];
    let mut settled = vec![false; m + n];
    let mut parent = vec![u32::MAX; m + n];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    let mut remaining: u64 = excess.iter().sum();
    println!("  after warm start: remaining {remaining} of {}", p.mu.numerators().iter().sum::<u64>());
    while remaining > 0 {
        augs += 1;
        for v in 0..m + n { dist[v] = f64::INFINITY; settled[v] = false; parent[v] = u32::MAX; }
        heap.clear();
        for i in 0..m { if excess[i] > 0 { dist[i] = 0.0; heap.push(Reverse((0u64, i as u32))); } }
        let mut target = usize::MAX; let mut target_dist = f64::INFINITY;
        while let Some(Reverse((dbits, u))) = heap.pop() {
            let u = u as usize; let d = f64::from_bits(dbits);
            if settled[u] || d > dist[u] { continue; }
            settled[u] = true; settles += 1;
            if u >= m && deficit[u - m] > 0 { target = u - m; target_dist = d; break; }
            if u < m {
                let hu = h[u]; let row = &cost[u * n..(u + 1) * n];
                for (j, &c) in row.iter().enumerate() {
                    let v = m + j;
                    if dist[v] <= d { continue; }
                    let rc = (c + hu - h[v]).max(0.0); let nd = d + rc;
                    if nd < dist[v] { dist[v] = nd; parent[v] = u as u32; heap.push(Reverse((nd.to_bits(), v as u32))); pushes += 1; }
                }
            } else {
                let j = u - m;
                for i in 0..m {
                    if flow[i * n + j] == 0 || dist[i] <= d { continue; }
                    let rc = (h[u] - h[i] - cost[i * n + j]).max(0.0); let nd = d + rc;
                    if nd < dist[i] { dist[i] = nd; parent[i] = u as u32; heap.push(Reverse((nd.to_bits(), i as u32))); pushes += 1; }
                }
            }
        }
        for v in 0..m + n {
            h[v] += if settled[v] && dist[v] <= target_dist { dist[v] } else { target_dist };
        }
        let mut amount = deficit[target];
        let mut v = m + target;
        loop {
            let pr = parent[v] as usize;
            if v >= m { if parent[pr] == u32::MAX { amount = amount.min(excess[pr]); break; } }
            else { amount = amount.min(flow[v * n + (pr - m)]); }
            v = pr;
        }
        let mut v = m + target;
        loop {
            let pr = parent[v] as usize;
            if v >= m { flow[pr * n + (v - m)] += amount; if parent[pr] == u32::MAX { excess[pr] -= amount; break; } }
            else { flow[v * n + (pr - m)] -= amount; }
            v = pr;
        }
        deficit[target] -= amount;
        remaining -= amount;
    }
    let mut obj = 0.0;
    for i in 0..m { for j in 0..n { if flow[i*n+j] > 0 { obj += flow[i*n+j] as f64 * cost[i*n+j]; } } }
    (obj / p.mu.denominator() as f64, augs, settles, pushes)
}

fn main() {
    use rand::{Rng, SeedableRng};
    for &m in &[283usize, 400] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(m as u64);
        let xs: Vec<(f64, f64)> = (0..m).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let ys: Vec<(f64, f64)> = (0..m).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let cost = xs.iter().map(|&(a, b)| ys.iter().map(|&(c, d)| ((a - c).powi(2) + (b - d).powi(2)).sqrt()).collect()).collect();
        let p = TransportProblem::new(
            DiscreteMeasure::uniform((0..m).collect()).unwrap(),
            DiscreteMeasure::uniform((0..m).collect()).unwrap(),
            cost,
        ).unwrap();
        let t = Instant::now();
        let (v, augs, settles, pushes) = solve_instrumented(&p);
        println!("{m}x{m}: {:?} value {v:.4} augs {augs} settles {settles} ({}) pushes {pushes}", t.elapsed(), settles / augs.max(1));
    }
}
