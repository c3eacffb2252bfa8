//! Exact 1-Wasserstein distance between finitely supported measures with
//! nonnegative costs.
//!
//! Masses are scaled to integers at the lcm of the two denominators, so
//! the min-cost flow terminates with a plan whose marginals are exact.
//! The production solver is successive shortest augmenting paths with
//! node potentials on the bipartite supply/demand network; an independent
//! brute-force enumerator over integral flows serves as the oracle in
//! tests and the validation battery. No approximation is used anywhere.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::CurvError;
use crate::rgg::DiscreteMeasure;

/// A balanced transportation problem: two unit-mass measures and a
/// `|mu| x |nu|` matrix of nonnegative finite costs.
#[derive(Debug, Clone)]
pub struct TransportProblem {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    cost: Vec<f64>,
}

impl TransportProblem {
    pub fn new(
        mu: DiscreteMeasure,
        nu: DiscreteMeasure,
        cost: Vec<Vec<f64>>,
    ) -> Result<Self, CurvError> {
        if cost.len() != mu.len() || cost.iter().any(|row| row.len() != nu.len()) {
            return Err(CurvError::MassImbalance(format!(
                "cost matrix shape does not match supports {}x{}",
                mu.len(),
                nu.len()
            )));
        }
        if cost
            .iter()
            .flatten()
            .any(|&c| !(c >= 0.0) || !c.is_finite())
        {
            return Err(CurvError::MassImbalance(
                "costs must be finite and nonnegative".into(),
            ));
        }
        // DiscreteMeasure already guarantees unit mass; re-check the stored
        // numerators so a violated precondition surfaces here, not deep in
        // the solver.
        for m in [&mu, &nu] {
            if m.numerators().iter().sum::<u64>() != m.denominator() {
                return Err(CurvError::MassImbalance("measure mass is not 1".into()));
            }
        }
        let flat = cost.into_iter().flatten().collect();
        Ok(TransportProblem { mu, nu, cost: flat })
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.nu.len() + j]
    }
}

/// An optimal coupling: integral flows at the common denominator
/// `lcm(den(mu), den(nu))`, plus the objective value.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// Sparse (i, j, units) entries with positive units.
    pub flows: Vec<(usize, usize, u64)>,
    /// Denominator of the flow masses: each entry moves `units/denominator`.
    pub denominator: u64,
    pub objective: f64,
}

impl TransportPlan {
    /// Mass moved by flow entry `k`, as a float.
    pub fn mass_f64(&self, k: usize) -> f64 {
        self.flows[k].2 as f64 / self.denominator as f64
    }

    /// Row sums in units of `1/denominator`, indexed by mu atom.
    pub fn row_sums(&self, m: usize) -> Vec<u64> {
        let mut sums = vec![0u64; m];
        for &(i, _, f) in &self.flows {
            sums[i] += f;
        }
        sums
    }

    /// Column sums in units of `1/denominator`, indexed by nu atom.
    pub fn col_sums(&self, n: usize) -> Vec<u64> {
        let mut sums = vec![0u64; n];
        for &(_, j, f) in &self.flows {
            sums[j] += f;
        }
        sums
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Exact optimum of the transportation LP by successive shortest
/// augmenting paths with node potentials, after scaling both measures to
/// integers at the lcm of their denominators.
pub fn w1_exact(problem: &TransportProblem) -> (f64, TransportPlan) {
    let m = problem.mu.len();
    let n = problem.nu.len();
    let scale = lcm(problem.mu.denominator(), problem.nu.denominator());
    let mu_unit = scale / problem.mu.denominator();
    let nu_unit = scale / problem.nu.denominator();
    let mut excess: Vec<u64> = problem
        .mu
        .numerators()
        .iter()
        .map(|&x| x * mu_unit)
        .collect();
    let mut deficit: Vec<u64> = problem
        .nu
        .numerators()
        .iter()
        .map(|&x| x * nu_unit)
        .collect();

    let cost = &problem.cost;
    let mut flow: Vec<u64> = vec![0; m * n];
    // Johnson potentials: reduced forward cost is
    // c[ij] + h[i] - h[m + j], clamped at zero against rounding; backward
    // arcs (flow > 0) carry the negated reduced cost.
    let mut h: Vec<f64> = vec![0.0; m + n];

    // Greedy dual initialization (column minima, then row minima of the
    // reduced costs) and a greedy flow over the tight arcs. Flow only
    // lands where the reduced cost is exactly zero, so complementary
    // slackness holds and the augmenting phase starts from a small
    // remainder instead of from scratch.
    for j in 0..n {
        let mut lo = f64::INFINITY;
        for i in 0..m {
            lo = lo.min(cost[i * n + j]);
        }
        h[m + j] = lo;
    }
    for i in 0..m {
        let mut lo = f64::INFINITY;
        for j in 0..n {
            lo = lo.min(cost[i * n + j] - h[m + j]);
        }
        h[i] = -lo;
        if excess[i] == 0 {
            continue;
        }
        for j in 0..n {
            if deficit[j] == 0 {
                continue;
            }
            if cost[i * n + j] - h[m + j] == lo {
                let push = excess[i].min(deficit[j]);
                flow[i * n + j] += push;
                excess[i] -= push;
                deficit[j] -= push;
                if excess[i] == 0 {
                    break;
                }
            }
        }
    }

    let mut dist: Vec<f64> = vec![f64::INFINITY; m + n];
    let mut settled: Vec<bool> = vec![false; m + n];
    let mut parent: Vec<u32> = vec![u32::MAX; m + n];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();

    let mut remaining: u64 = excess.iter().sum();
    while remaining > 0 {
        for v in 0..m + n {
            dist[v] = f64::INFINITY;
            settled[v] = false;
            parent[v] = u32::MAX;
        }
        heap.clear();
        for i in 0..m {
            if excess[i] > 0 {
                dist[i] = 0.0;
                heap.push(Reverse((0u64, i as u32)));
            }
        }

        let mut target = usize::MAX;
        let mut target_dist = f64::INFINITY;
        while let Some(Reverse((dbits, u))) = heap.pop() {
            let u = u as usize;
            let d = f64::from_bits(dbits);
            if settled[u] || d > dist[u] {
                continue;
            }
            settled[u] = true;
            if u >= m && deficit[u - m] > 0 {
                target = u - m;
                target_dist = d;
                break;
            }
            if u < m {
                // Forward arcs u -> every nu atom. Reduced costs are
                // nonnegative, so nodes at or below the current label
                // cannot improve and are skipped before any arithmetic.
                let hu = h[u];
                let row = &cost[u * n..(u + 1) * n];
                for (j, &c) in row.iter().enumerate() {
                    let v = m + j;
                    if dist[v] <= d {
                        continue;
                    }
                    let rc = (c + hu - h[v]).max(0.0);
                    let nd = d + rc;
                    if nd < dist[v] {
                        dist[v] = nd;
                        parent[v] = u as u32;
                        heap.push(Reverse((nd.to_bits(), v as u32)));
                    }
                }
            } else {
                // Backward arcs along existing flow.
                let j = u - m;
                for i in 0..m {
                    if flow[i * n + j] == 0 || dist[i] <= d {
                        continue;
                    }
                    let rc = (h[u] - h[i] - cost[i * n + j]).max(0.0);
                    let nd = d + rc;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = u as u32;
                        heap.push(Reverse((nd.to_bits(), i as u32)));
                    }
                }
            }
        }
        debug_assert!(
            target != usize::MAX,
            "bipartite network is complete; a deficit node must be reachable"
        );

        // Potential update: settled nodes by their label, the rest by the
        // target distance, preserving nonnegative reduced costs.
        for v in 0..m + n {
            h[v] += if settled[v] && dist[v] <= target_dist {
                dist[v]
            } else {
                target_dist
            };
        }

        // Bottleneck along the augmenting path.
        let mut amount = deficit[target];
        let mut v = m + target;
        loop {
            let p = parent[v] as usize;
            if v >= m {
                if parent[p] == u32::MAX {
                    amount = amount.min(excess[p]);
                    break;
                }
            } else {
                amount = amount.min(flow[v * n + (p - m)]);
            }
            v = p;
        }
        debug_assert!(amount > 0);

        // Apply the push.
        let mut v = m + target;
        loop {
            let p = parent[v] as usize;
            if v >= m {
                flow[p * n + (v - m)] += amount;
                if parent[p] == u32::MAX {
                    excess[p] -= amount;
                    break;
                }
            } else {
                flow[v * n + (p - m)] -= amount;
            }
            v = p;
        }
        deficit[target] -= amount;
        remaining -= amount;
    }

    let mut flows = Vec::new();
    let mut objective = 0.0;
    for i in 0..m {
        for j in 0..n {
            let f = flow[i * n + j];
            if f > 0 {
                flows.push((i, j, f));
                objective += f as f64 / scale as f64 * cost[i * n + j];
            }
        }
    }
    let plan = TransportPlan {
        flows,
        denominator: scale,
        objective,
    };
    (objective, plan)
}

/// Brute-force oracle: exhaustive enumeration of integral flows at the
/// product denominator, with cost pruning. Only for supports of size at
/// most 4; used in tests and the validation battery, never in production
/// paths.
pub fn w1_bruteforce(problem: &TransportProblem) -> Result<f64, CurvError> {
    const LIMIT: usize = 4;
    let m = problem.mu.len();
    let n = problem.nu.len();
    if m > LIMIT || n > LIMIT {
        return Err(CurvError::SupportTooLarge {
            limit: LIMIT,
            got: m.max(n),
        });
    }
    let scale = problem.mu.denominator() * problem.nu.denominator();
    let supply: Vec<u64> = problem
        .mu
        .numerators()
        .iter()
        .map(|&x| x * problem.nu.denominator())
        .collect();
    let demand: Vec<u64> = problem
        .nu
        .numerators()
        .iter()
        .map(|&x| x * problem.mu.denominator())
        .collect();

    let mut best = f64::INFINITY;
    let mut col_left = demand.clone();
    recurse(
        problem,
        &supply,
        &mut col_left,
        0,
        0,
        supply[0],
        0.0,
        &mut best,
    );
    Ok(best / scale as f64)
}

/// Fill cells in row-major order; `row_left` is the unassigned supply of
/// row `i`. At the final column the flow is forced, which keeps the
/// enumeration tight.
#[allow(clippy::too_many_arguments)]
fn recurse(
    problem: &TransportProblem,
    supply: &[u64],
    col_left: &mut [u64],
    i: usize,
    j: usize,
    row_left: u64,
    partial: f64,
    best: &mut f64,
) {
    let m = problem.mu.len();
    let n = problem.nu.len();
    if partial >= *best {
        return;
    }
    if i == m {
        *best = partial;
        return;
    }
    if j == n - 1 {
        // Forced assignment.
        if row_left > col_left[j] {
            return;
        }
        col_left[j] -= row_left;
        let cost = partial + row_left as f64 * problem.cost(i, j);
        let next_row = if i + 1 < m { supply[i + 1] } else { 0 };
        recurse(problem, supply, col_left, i + 1, 0, next_row, cost, best);
        col_left[j] += row_left;
        return;
    }
    let max_f = row_left.min(col_left[j]);
    for f in 0..=max_f {
        col_left[j] -= f;
        let cost = partial + f as f64 * problem.cost(i, j);
        recurse(
            problem,
            supply,
            col_left,
            i,
            j + 1,
            row_left - f,
            cost,
            best,
        );
        col_left[j] += f;
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    //! Randomized instance generation shared by the module tests; the
    //! acceptance suite carries its own copy so the oracle run stays
    //! independent of library internals.

    use super::*;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    pub fn random_measure(rng: &mut ChaCha8Rng, max_support: usize) -> DiscreteMeasure {
        let k = rng.gen_range(1..=max_support);
        let den = loop {
            let d = rng.gen_range(1..=6u64);
            if d >= k as u64 {
                break d;
            }
        };
        // Split `den` into k positive parts.
        let mut cuts: Vec<u64> = (1..den).collect();
        for i in (1..cuts.len()).rev() {
            let j = rng.gen_range(0..=i);
            cuts.swap(i, j);
        }
        let mut chosen: Vec<u64> = cuts.into_iter().take(k - 1).collect();
        chosen.push(0);
        chosen.push(den);
        chosen.sort_unstable();
        let numerators: Vec<u64> = chosen.windows(2).map(|w| w[1] - w[0]).collect();
        DiscreteMeasure::from_rationals((0..k).collect(), numerators, den).unwrap()
    }

    pub fn random_problem(rng: &mut ChaCha8Rng, max_support: usize) -> TransportProblem {
        let mu = random_measure(rng, max_support);
        let nu = random_measure(rng, max_support);
        let cost = (0..mu.len())
            .map(|_| (0..nu.len()).map(|_| rng.gen_range(0.0..10.0)).collect())
            .collect();
        TransportProblem::new(mu, nu, cost).unwrap()
    }

    /// Random finite metric: shortest-path closure of a random symmetric
    /// weight matrix over `g` ground points.
    pub fn random_metric(rng: &mut ChaCha8Rng, g: usize) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0f64; g]; g];
        for i in 0..g {
            for j in (i + 1)..g {
                let w = rng.gen_range(0.1..5.0);
                d[i][j] = w;
                d[j][i] = w;
            }
        }
        for k in 0..g {
            for i in 0..g {
                for j in 0..g {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    /// Measure over a random subset of `0..g` with random rational masses.
    pub fn random_measure_on_ground(rng: &mut ChaCha8Rng, g: usize) -> DiscreteMeasure {
        let base = random_measure(rng, 4.min(g));
        let mut labels: Vec<usize> = (0..g).collect();
        for i in (1..g).rev() {
            let j = rng.gen_range(0..=i);
            labels.swap(i, j);
        }
        let support = labels.into_iter().take(base.len()).collect();
        DiscreteMeasure::from_rationals(support, base.numerators().to_vec(), base.denominator())
            .unwrap()
    }

    pub fn metric_problem(
        metric: &[Vec<f64>],
        mu: &DiscreteMeasure,
        nu: &DiscreteMeasure,
    ) -> TransportProblem {
        let cost = mu
            .support()
            .iter()
            .map(|&u| nu.support().iter().map(|&v| metric[u][v]).collect())
            .collect();
        TransportProblem::new(mu.clone(), nu.clone(), cost).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::rng::seeded_rng;

    fn uniform_on(ids: Vec<usize>) -> DiscreteMeasure {
        DiscreteMeasure::uniform(ids).unwrap()
    }

    #[test]
    fn identical_measures_zero_diagonal_cost() {
        let mu = uniform_on(vec![0, 1, 2]);
        let cost = vec![
            vec![0.0, 3.0, 4.0],
            vec![3.0, 0.0, 5.0],
            vec![4.0, 5.0, 0.0],
        ];
        let p = TransportProblem::new(mu.clone(), mu, cost).unwrap();
        let (v, plan) = w1_exact(&p);
        assert_eq!(v, 0.0);
        assert_eq!(plan.flows.len(), 3);
    }

    #[test]
    fn point_mass_to_point_mass() {
        let mu = uniform_on(vec![0]);
        let nu = uniform_on(vec![1]);
        let p = TransportProblem::new(mu, nu, vec![vec![2.5]]).unwrap();
        let (v, _) = w1_exact(&p);
        assert!((v - 2.5).abs() < 1e-15);
        let pb = w1_bruteforce(&p).unwrap();
        assert!((pb - 2.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_neighborhoods() {
        // K3 on {x, y, z}: mu uniform on {y, z}, nu uniform on {x, z},
        // unit shortest-path costs. Expected value 1/2, frozen from the
        // brute-force oracle.
        let mu = uniform_on(vec![1, 2]);
        let nu = uniform_on(vec![0, 2]);
        let cost = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let p = TransportProblem::new(mu, nu, cost).unwrap();
        let oracle = w1_bruteforce(&p).unwrap();
        assert!((oracle - 0.5).abs() < 1e-12);
        let (v, _) = w1_exact(&p);
        assert!((v - oracle).abs() < 1e-12);
    }

    #[test]
    fn bruteforce_rejects_large_supports() {
        let mu = uniform_on(vec![0, 1, 2, 3, 4]);
        let nu = uniform_on(vec![0]);
        let cost = vec![vec![1.0]; 5];
        let p = TransportProblem::new(mu, nu, cost).unwrap();
        assert!(matches!(
            w1_bruteforce(&p),
            Err(CurvError::SupportTooLarge { .. })
        ));
    }

    #[test]
    fn bruteforce_symmetric_under_swap() {
        let mut rng = seeded_rng(77);
        for _ in 0..50 {
            let mu = random_measure(&mut rng, 3);
            let nu = random_measure(&mut rng, 3);
            let mut cost = vec![vec![0.0; nu.len()]; mu.len()];
            let shared = random_metric(&mut rng, 4);
            for (i, row) in cost.iter_mut().enumerate() {
                for (j, c) in row.iter_mut().enumerate() {
                    *c = shared[i][j];
                }
            }
            let fwd = TransportProblem::new(mu.clone(), nu.clone(), cost.clone()).unwrap();
            let transposed = (0..nu.len())
                .map(|j| (0..mu.len()).map(|i| cost[i][j]).collect())
                .collect();
            let rev = TransportProblem::new(nu, mu, transposed).unwrap();
            let a = w1_bruteforce(&fwd).unwrap();
            let b = w1_bruteforce(&rev).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_matches_bruteforce_on_random_instances() {
        let mut rng = seeded_rng(2024);
        for trial in 0..200 {
            let p = random_problem(&mut rng, 4);
            let oracle = w1_bruteforce(&p).unwrap();
            let (v, _) = w1_exact(&p);
            assert!(
                (v - oracle).abs() < 1e-9,
                "trial {trial}: exact {v} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn plan_marginals_are_exact() {
        let mut rng = seeded_rng(55);
        for _ in 0..100 {
            let p = random_problem(&mut rng, 4);
            let (v, plan) = w1_exact(&p);
            let mu_unit = plan.denominator / p.mu.denominator();
            let nu_unit = plan.denominator / p.nu.denominator();
            assert_eq!(
                plan.row_sums(p.mu.len()),
                p.mu
                    .numerators()
                    .iter()
                    .map(|&x| x * mu_unit)
                    .collect::<Vec<_>>()
            );
            assert_eq!(
                plan.col_sums(p.nu.len()),
                p.nu
                    .numerators()
                    .iter()
                    .map(|&x| x * nu_unit)
                    .collect::<Vec<_>>()
            );
            // Objective consistent with a recomputation from the flows.
            let recomputed: f64 = plan
                .flows
                .iter()
                .map(|&(i, j, f)| f as f64 / plan.denominator as f64 * p.cost(i, j))
                .sum();
            assert!((recomputed - v).abs() <= 1e-12 * v.abs().max(1.0));
        }
    }

    #[test]
    fn metric_axioms_on_measures() {
        let mut rng = seeded_rng(123);
        for _ in 0..60 {
            let g = 6;
            let metric = random_metric(&mut rng, g);
            let a = random_measure_on_ground(&mut rng, g);
            let b = random_measure_on_ground(&mut rng, g);
            let c = random_measure_on_ground(&mut rng, g);

            let (w_aa, _) = w1_exact(&metric_problem(&metric, &a, &a));
            assert!(w_aa.abs() < 1e-12);

            let (w_ab, _) = w1_exact(&metric_problem(&metric, &a, &b));
            let (w_ba, _) = w1_exact(&metric_problem(&metric, &b, &a));
            assert!((w_ab - w_ba).abs() < 1e-9);

            let (w_ac, _) = w1_exact(&metric_problem(&metric, &a, &c));
            let (w_cb, _) = w1_exact(&metric_problem(&metric, &c, &b));
            assert!(w_ab <= w_ac + w_cb + 1e-9);
        }
    }

    #[test]
    fn kantorovich_lower_bound() {
        // f(v) = dist(v, anchor) is 1-Lipschitz with respect to the
        // metric, so |<f, mu> - <f, nu>| lower-bounds the W1 value.
        let mut rng = seeded_rng(321);
        for _ in 0..60 {
            let g = 6;
            let metric = random_metric(&mut rng, g);
            let a = random_measure_on_ground(&mut rng, g);
            let b = random_measure_on_ground(&mut rng, g);
            let (w, _) = w1_exact(&metric_problem(&metric, &a, &b));
            for anchor in 0..g {
                let int_a: f64 = (0..a.len())
                    .map(|i| a.mass_f64(i) * metric[a.support()[i]][anchor])
                    .sum();
                let int_b: f64 = (0..b.len())
                    .map(|j| b.mass_f64(j) * metric[b.support()[j]][anchor])
                    .sum();
                assert!((int_a - int_b).abs() <= w + 1e-9);
            }
        }
    }

    #[test]
    fn rejects_shape_mismatch_and_bad_costs() {
        let mu = uniform_on(vec![0, 1]);
        let nu = uniform_on(vec![0]);
        assert!(TransportProblem::new(mu.clone(), nu.clone(), vec![vec![1.0]]).is_err());
        assert!(
            TransportProblem::new(mu.clone(), nu.clone(), vec![vec![-1.0], vec![1.0]]).is_err()
        );
        assert!(TransportProblem::new(mu, nu, vec![vec![f64::NAN], vec![1.0]]).is_err());
    }
}
