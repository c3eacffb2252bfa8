//! Experiment orchestration: epsilon schedules, convergence sweeps over
//! the node count, edge-ratio statistics, and ball-moment validation
//! checks. CSV emission lives here too; all output is byte-deterministic
//! for a fixed configuration, independent of the thread count.

use std::io::Write;
use std::time::Instant;

use rand::Rng;

use crate::curvature::{node_curvatures, CurvatureOptions};
use crate::error::CurvError;
use crate::exec;
use crate::geometry::{unit_ball_volume, Manifold, Point};
use crate::graph_io::fmt_g17;
use crate::rgg::{build_rgg, GeometricGraph};
use crate::rng::{derive_seed, seeded_rng};

/// The schedule exponent `alpha_n = 1 / (6.01 n)`, strictly inside the
/// admissible range `(0, 1/(6n))`.
pub fn schedule_alpha(n: usize) -> f64 {
    1.0 / (6.01 * n as f64)
}

/// Connectivity threshold for a sweep point: `C_n N^{-alpha_n}`, with
/// `C_n` anchored so that the expected average degree at `N_ref` equals
/// `k_ref` via `k = N v_n eps^n / vol(M)`.
pub fn epsilon_schedule(
    n: usize,
    node_count: usize,
    k_ref: f64,
    n_ref: usize,
    manifold: &Manifold,
) -> Result<f64, CurvError> {
    if !(k_ref > 0.0) || node_count == 0 {
        return Err(CurvError::InvalidConfig(format!(
            "need k_ref > 0 and N >= 1, got k_ref={k_ref}, N={node_count}"
        )));
    }
    let vn = unit_ball_volume(n);
    let eps_ref =
        (k_ref * manifold.total_volume() / (n_ref as f64 * vn)).powf(1.0 / n as f64);
    let alpha = schedule_alpha(n);
    let c_n = eps_ref * (n_ref as f64).powf(alpha);
    let eps = c_n * (node_count as f64).powf(-alpha);
    if eps >= manifold.injectivity_radius() {
        return Err(CurvError::EpsilonTooLarge {
            epsilon: eps,
            injectivity_radius: manifold.injectivity_radius(),
        });
    }
    Ok(eps)
}

/// Which manifolds a sweep runs over.
#[derive(Debug, Clone)]
pub enum SweepManifold {
    /// Unit spheres, one per entry of `dims`.
    Spheres { dims: Vec<usize> },
    /// One flat torus.
    Torus { sides: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub manifold: SweepManifold,
    pub node_counts: Vec<usize>,
    /// Target average degree at the reference node count.
    pub avg_degree_ref: f64,
    pub ref_node_count: usize,
    pub seeds: Vec<u64>,
    /// Number of nodes whose SORC is computed per graph; `None` means all.
    pub node_sample: Option<usize>,
}

impl SweepConfig {
    pub fn manifolds(&self) -> Result<Vec<Manifold>, CurvError> {
        match &self.manifold {
            SweepManifold::Spheres { dims } => {
                dims.iter().map(|&n| Manifold::sphere(n)).collect()
            }
            SweepManifold::Torus { sides } => Ok(vec![Manifold::flat_torus(sides.clone())?]),
        }
    }

    fn validate(&self) -> Result<(), CurvError> {
        for m in self.manifolds()? {
            let n = m.intrinsic_dim();
            let alpha = schedule_alpha(n);
            if !(alpha > 0.0 && alpha < 1.0 / (6.0 * n as f64)) {
                return Err(CurvError::InvalidConfig(format!(
                    "alpha_{n} = {alpha} outside (0, 1/(6n))"
                )));
            }
        }
        if self.node_counts.is_empty() || self.seeds.is_empty() {
            return Err(CurvError::InvalidConfig(
                "need at least one node count and one seed".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one (manifold, N, seed) experiment.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub manifold: String,
    pub n: usize,
    pub node_count: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub mean_scaled_sorc: f64,
    pub stderr: f64,
    pub mean_scaled_src: f64,
    pub target_s: f64,
    pub undefined_edge_fraction: f64,
    pub wall_time_s: f64,
    /// Per-row failure, recorded instead of aborting the sweep.
    pub error: Option<String>,
}

fn manifold_label(m: &Manifold) -> String {
    match m {
        Manifold::Sphere { dim } => format!("sphere{dim}"),
        Manifold::FlatTorus { .. } => "torus".to_string(),
    }
}

/// Run the full sweep: for each (manifold, N, seed), sample the manifold,
/// build the RGG on the scheduled threshold, and average the scaled SORC
/// (and scaled SRC oracle) over the sampled nodes. Rows are emitted in
/// (manifold, N, seed) order regardless of scheduling; failures become
/// row-level records.
pub fn convergence_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CurvError> {
    config.validate()?;
    let manifolds = config.manifolds()?;
    let mut points = Vec::new();
    for m in &manifolds {
        for &nc in &config.node_counts {
            for &seed in &config.seeds {
                points.push((m.clone(), nc, seed));
            }
        }
    }
    let rows = exec::map_indexed(&points, |(m, nc, seed)| sweep_point(config, m, *nc, *seed));
    Ok(rows)
}

fn sweep_point(config: &SweepConfig, manifold: &Manifold, node_count: usize, seed: u64) -> SweepRow {
    let start = Instant::now();
    let n = manifold.intrinsic_dim();
    let target_s = manifold.scalar_curvature(&Point(vec![0.0; manifold.ambient_dim()]));
    let mut row = SweepRow {
        manifold: manifold_label(manifold),
        n,
        node_count,
        epsilon: f64::NAN,
        seed,
        mean_scaled_sorc: f64::NAN,
        stderr: f64::NAN,
        mean_scaled_src: f64::NAN,
        target_s,
        undefined_edge_fraction: f64::NAN,
        wall_time_s: 0.0,
        error: None,
    };

    let result = (|| -> Result<(), CurvError> {
        let epsilon = epsilon_schedule(
            n,
            node_count,
            config.avg_degree_ref,
            config.ref_node_count,
            manifold,
        )?;
        row.epsilon = epsilon;
        let stream = derive_seed(&[seed, n as u64, node_count as u64]);
        let pts = manifold.sample_uniform(node_count, stream);
        let graph = build_rgg(pts, epsilon, manifold, Some(seed))?;

        let nodes = match config.node_sample {
            Some(k) if k < node_count => {
                let mut rng = seeded_rng(derive_seed(&[stream, 1]));
                sample_distinct(node_count, k, &mut rng)
            }
            _ => (0..node_count).collect(),
        };
        let report = node_curvatures(
            &graph,
            &nodes,
            &CurvatureOptions {
                with_src: true,
                ..Default::default()
            },
        )?;

        let k = report.nodes.len() as f64;
        let mean: f64 = report.nodes.iter().map(|c| c.scaled_sorc).sum::<f64>() / k;
        let var: f64 = report
            .nodes
            .iter()
            .map(|c| (c.scaled_sorc - mean).powi(2))
            .sum::<f64>()
            / (k - 1.0).max(1.0);
        row.mean_scaled_sorc = mean;
        row.stderr = (var / k).sqrt();
        row.mean_scaled_src = report
            .nodes
            .iter()
            .map(|c| c.scaled_src.unwrap_or(0.0))
            .sum::<f64>()
            / k;
        let total_deg: usize = report.nodes.iter().map(|c| c.degree).sum();
        let total_undef: usize = report.nodes.iter().map(|c| c.undefined_edge_count).sum();
        row.undefined_edge_fraction = if total_deg > 0 {
            total_undef as f64 / total_deg as f64
        } else {
            0.0
        };
        Ok(())
    })();

    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row.wall_time_s = start.elapsed().as_secs_f64();
    row
}

/// `k` distinct indices from `0..n`, ascending (partial Fisher-Yates).
fn sample_distinct(n: usize, k: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut out = idx[..k].to_vec();
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Ratio statistics
// ---------------------------------------------------------------------------

/// Limit CDF of the edge ratio `Z = eps / d`: `F_Z(z) = 1 - z^{-n}` for
/// `z >= 1`, zero below.
pub fn ratio_cdf(z: f64, n: usize) -> f64 {
    if z < 1.0 {
        0.0
    } else {
        1.0 - z.powi(-(n as i32))
    }
}

#[derive(Debug, Clone)]
pub struct RatioStats {
    pub n: usize,
    pub node_count: usize,
    pub epsilon: f64,
    pub sample_count: usize,
    pub empirical_mean: f64,
    /// Limit mean `n / (n - 1)`.
    pub target_mean: f64,
    /// Kolmogorov-Smirnov distance to the closed-form `F_Z`.
    pub ks_distance: f64,
}

/// Collect `eps / w(x, y)` over all edges and compare against the limit
/// law: the ratios live in `[1, inf)` with CDF `F_Z` and mean `n/(n-1)`.
pub fn ratio_statistics(graph: &GeometricGraph) -> Result<RatioStats, CurvError> {
    let eps = graph.epsilon();
    let n = graph.intrinsic_dim();
    let mut ratios: Vec<f64> = graph.edges().map(|(_, _, w)| eps / w).collect();
    if ratios.is_empty() {
        return Err(CurvError::EdgelessGraph);
    }
    ratios.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let count = ratios.len();
    let mean = ratios.iter().sum::<f64>() / count as f64;
    let mut ks = 0.0f64;
    for (i, &z) in ratios.iter().enumerate() {
        let f = ratio_cdf(z, n);
        let lo = i as f64 / count as f64;
        let hi = (i + 1) as f64 / count as f64;
        ks = ks.max((f - lo).abs()).max((hi - f).abs());
    }
    Ok(RatioStats {
        n,
        node_count: graph.node_count(),
        epsilon: eps,
        sample_count: count,
        empirical_mean: mean,
        target_mean: n as f64 / (n as f64 - 1.0),
        ks_distance: ks,
    })
}

// ---------------------------------------------------------------------------
// Moment checks
// ---------------------------------------------------------------------------

/// Monte-Carlo estimates of the ball moments `E[u_i u_j]`, where
/// `u = log_x(z)` in an orthonormal tangent basis and `z` is uniform in
/// `B^M(x, eps)`. The diagonal approaches `eps^2 / (n+2)` and the
/// off-diagonal vanishes at order `eps^4`.
#[derive(Debug, Clone)]
pub struct MomentCheck {
    pub second_moments: Vec<f64>,
    pub second_stderr: Vec<f64>,
    /// Full symmetric matrix; diagonal repeats `second_moments`.
    pub cross_moments: Vec<Vec<f64>>,
    pub cross_stderr: Vec<Vec<f64>>,
    pub sample_count: usize,
}

pub fn moment_check(
    manifold: &Manifold,
    x: &Point,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<MomentCheck, CurvError> {
    if epsilon >= manifold.injectivity_radius() {
        return Err(CurvError::EpsilonTooLarge {
            epsilon,
            injectivity_radius: manifold.injectivity_radius(),
        });
    }
    let n = manifold.intrinsic_dim();
    let basis = manifold.tangent_basis(x);

    // Fixed chunk layout (independent of thread count) keeps the sample
    // set and the reduction order deterministic.
    const CHUNKS: usize = 64;
    let quotas: Vec<(usize, usize)> = (0..CHUNKS)
        .map(|c| {
            let q = samples / CHUNKS + usize::from(c < samples % CHUNKS);
            (c, q)
        })
        .collect();
    struct Sums {
        m2: Vec<f64>,
        m4: Vec<f64>,
        cross: Vec<f64>,
        cross2: Vec<f64>,
    }
    let chunk_sums = exec::map_indexed(&quotas, |&(c, quota)| {
        let pts = manifold.sample_in_ball(x, epsilon, quota, derive_seed(&[seed, c as u64]));
        let mut s = Sums {
            m2: vec![0.0; n],
            m4: vec![0.0; n],
            cross: vec![0.0; n * n],
            cross2: vec![0.0; n * n],
        };
        let mut u = vec![0.0; n];
        for z in &pts {
            let v = manifold.log_map(x, z).expect("samples are inside the ball");
            for i in 0..n {
                u[i] = v
                    .components
                    .iter()
                    .zip(&basis[i].components)
                    .map(|(a, b)| a * b)
                    .sum();
            }
            for i in 0..n {
                let sq = u[i] * u[i];
                s.m2[i] += sq;
                s.m4[i] += sq * sq;
                for j in 0..n {
                    let p = u[i] * u[j];
                    s.cross[i * n + j] += p;
                    s.cross2[i * n + j] += p * p;
                }
            }
        }
        s
    });

    let mut m2 = vec![0.0; n];
    let mut m4 = vec![0.0; n];
    let mut cross = vec![0.0; n * n];
    let mut cross2 = vec![0.0; n * n];
    for s in &chunk_sums {
        for i in 0..n {
            m2[i] += s.m2[i];
            m4[i] += s.m4[i];
        }
        for k in 0..n * n {
            cross[k] += s.cross[k];
            cross2[k] += s.cross2[k];
        }
    }

    let count = samples as f64;
    let mean2: Vec<f64> = m2.iter().map(|&s| s / count).collect();
    let stderr2: Vec<f64> = (0..n)
        .map(|i| ((m4[i] / count - mean2[i] * mean2[i]).max(0.0) / count).sqrt())
        .collect();
    let mean_cross: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| cross[i * n + j] / count).collect())
        .collect();
    let stderr_cross: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let m = cross[i * n + j] / count;
                    ((cross2[i * n + j] / count - m * m).max(0.0) / count).sqrt()
                })
                .collect()
        })
        .collect();
    Ok(MomentCheck {
        second_moments: mean2,
        second_stderr: stderr2,
        cross_moments: mean_cross,
        cross_stderr: stderr_cross,
        sample_count: samples,
    })
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Whether the sweep CSV carries measured wall times. Timing is the one
/// inherently non-reproducible column, so determinism-sensitive runs
/// suppress it (writing a fixed zero) instead of weakening the
/// byte-identity contract of everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMode {
    Measured,
    Suppressed,
}

pub const SWEEP_CSV_HEADER: &str =
    "manifold,n,N,epsilon,seed,mean_scaled_sorc,stderr,mean_scaled_src,target_S,undefined_edge_fraction,wall_time_s";

pub fn write_sweep_csv<W: Write>(
    rows: &[SweepRow],
    timing: TimingMode,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        let wall = match timing {
            TimingMode::Measured => fmt_g17(r.wall_time_s),
            TimingMode::Suppressed => fmt_g17(0.0),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.manifold,
            r.n,
            r.node_count,
            fmt_g17(r.epsilon),
            r.seed,
            fmt_g17(r.mean_scaled_sorc),
            fmt_g17(r.stderr),
            fmt_g17(r.mean_scaled_src),
            fmt_g17(r.target_s),
            fmt_g17(r.undefined_edge_fraction),
            wall,
        )?;
    }
    Ok(())
}

pub const RATIO_CSV_HEADER: &str =
    "n,N,epsilon,sample_count,empirical_mean,target_mean,ks_distance";

pub fn write_ratio_csv<W: Write>(stats: &[RatioStats], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{RATIO_CSV_HEADER}")?;
    for s in stats {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.n,
            s.node_count,
            fmt_g17(s.epsilon),
            s.sample_count,
            fmt_g17(s.empirical_mean),
            fmt_g17(s.target_mean),
            fmt_g17(s.ks_distance),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgg::GeometricGraph;

    fn sphere2() -> Manifold {
        Manifold::sphere(2).unwrap()
    }

    #[test]
    fn schedule_hits_reference_degree_exactly() {
        let m = sphere2();
        let eps = epsilon_schedule(2, 1000, 50.0, 1000, &m).unwrap();
        let k = 1000.0 * unit_ball_volume(2) * eps * eps / m.total_volume();
        assert!((k - 50.0).abs() < 1e-12 * 50.0);
    }

    #[test]
    fn alpha_two_value() {
        assert!((schedule_alpha(2) - 1.0 / 12.02).abs() < 1e-15);
        for n in 2..=4 {
            let a = schedule_alpha(n);
            assert!(a > 0.0 && a < 1.0 / (6.0 * n as f64));
        }
    }

    #[test]
    fn epsilon_decreases_in_node_count() {
        let m = sphere2();
        let mut prev = f64::INFINITY;
        for nc in [500usize, 1000, 2000, 4000, 8000] {
            let eps = epsilon_schedule(2, nc, 50.0, 1000, &m).unwrap();
            assert!(eps < prev);
            prev = eps;
        }
    }

    #[test]
    fn schedule_rejects_epsilon_at_injectivity_radius() {
        // At N = 1 the schedule asks for eps ~ 0.55 L, above the torus
        // injectivity radius L/2.
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            epsilon_schedule(2, 1, 300.0, 1000, &m),
            Err(CurvError::EpsilonTooLarge { .. })
        ));
    }

    #[test]
    fn ratio_cdf_closed_form() {
        assert_eq!(ratio_cdf(1.0, 2), 0.0);
        assert_eq!(ratio_cdf(0.5, 3), 0.0);
        assert!((ratio_cdf(2.0, 2) - (1.0 - 0.25)).abs() < 1e-15);
        assert!((ratio_cdf(2.0, 3) - (1.0 - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn single_edge_ratio_mean() {
        let g = GeometricGraph::from_edge_list(2, &[(0, 1, 0.25)], 2, 0.5).unwrap();
        let stats = ratio_statistics(&g).unwrap();
        assert_eq!(stats.sample_count, 1);
        assert!((stats.empirical_mean - 2.0).abs() < 1e-15);
        assert!((stats.target_mean - 2.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_graph_is_an_error() {
        let g = GeometricGraph::from_edge_list(3, &[], 2, 0.5).unwrap();
        assert!(matches!(ratio_statistics(&g), Err(CurvError::EdgelessGraph)));
    }

    #[test]
    fn ratios_are_at_least_one_on_real_graphs() {
        let m = sphere2();
        let pts = m.sample_uniform(500, 3);
        let g = build_rgg(pts, 0.4, &m, Some(3)).unwrap();
        for (_, _, w) in g.edges() {
            assert!(g.epsilon() / w >= 1.0);
        }
        let stats = ratio_statistics(&g).unwrap();
        assert!(stats.ks_distance >= 0.0 && stats.ks_distance <= 1.0);
    }

    #[test]
    fn torus_ratio_law_is_exact() {
        // Flat volume makes F_Z exact; KS decays like 1/sqrt(edges).
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        let pts = m.sample_uniform(3000, 17);
        let g = build_rgg(pts, 0.08, &m, Some(17)).unwrap();
        let stats = ratio_statistics(&g).unwrap();
        assert!(
            stats.ks_distance < 3.0 / (stats.sample_count as f64).sqrt() + 0.01,
            "ks {} over {} edges",
            stats.ks_distance,
            stats.sample_count
        );
        assert!((stats.empirical_mean - 2.0).abs() < 0.05);
    }

    #[test]
    fn moment_check_flat_ball() {
        // On the flat torus E[u_i^2] = eps^2 / (n + 2) exactly.
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        let x = Point(vec![0.5, 0.5]);
        let eps = 0.1;
        let mc = moment_check(&m, &x, eps, 40_000, 5).unwrap();
        let expect = eps * eps / 4.0;
        for i in 0..2 {
            assert!(
                (mc.second_moments[i] - expect).abs() < 4.0 * mc.second_stderr[i],
                "E[u_{i}^2] = {} vs {expect}",
                mc.second_moments[i]
            );
        }
    }

    #[test]
    fn moment_check_cross_moments_vanish() {
        let m = sphere2();
        let x = Point(vec![0.0, 0.0, 1.0]);
        let mc = moment_check(&m, &x, 0.1, 40_000, 11).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(
                        mc.cross_moments[i][j].abs() <= 5.0 * mc.cross_stderr[i][j],
                        "E[u_i u_j] = {}",
                        mc.cross_moments[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn moment_check_deterministic() {
        let m = sphere2();
        let x = Point(vec![0.0, 0.0, 1.0]);
        let a = moment_check(&m, &x, 0.2, 5_000, 7).unwrap();
        let b = moment_check(&m, &x, 0.2, 5_000, 7).unwrap();
        assert_eq!(a.second_moments[0].to_bits(), b.second_moments[0].to_bits());
        assert_eq!(
            a.cross_moments[0][1].to_bits(),
            b.cross_moments[0][1].to_bits()
        );
    }

    #[test]
    fn sweep_rows_are_deterministic() {
        let config = SweepConfig {
            manifold: SweepManifold::Torus {
                sides: vec![1.0, 1.0],
            },
            node_counts: vec![200],
            avg_degree_ref: 50.0,
            ref_node_count: 1000,
            seeds: vec![1, 2],
            node_sample: Some(50),
        };
        let r1 = convergence_sweep(&config).unwrap();
        let r2 = convergence_sweep(&config).unwrap();
        assert_eq!(r1.len(), 2);
        for (a, b) in r1.iter().zip(&r2) {
            assert!(a.error.is_none(), "{:?}", a.error);
            assert_eq!(a.mean_scaled_sorc.to_bits(), b.mean_scaled_sorc.to_bits());
            assert_eq!(a.mean_scaled_src.to_bits(), b.mean_scaled_src.to_bits());
            assert_eq!(a.target_s, 0.0);
        }
        let mut csv1 = Vec::new();
        write_sweep_csv(&r1, TimingMode::Suppressed, &mut csv1).unwrap();
        let mut csv2 = Vec::new();
        write_sweep_csv(&r2, TimingMode::Suppressed, &mut csv2).unwrap();
        assert_eq!(csv1, csv2);
    }

    #[test]
    fn sweep_targets_by_dimension() {
        let config = SweepConfig {
            manifold: SweepManifold::Spheres { dims: vec![2, 3] },
            node_counts: vec![150],
            avg_degree_ref: 20.0,
            ref_node_count: 150,
            seeds: vec![4],
            node_sample: Some(30),
        };
        let rows = convergence_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].target_s, 2.0);
        assert_eq!(rows[1].target_s, 6.0);
    }

    #[test]
    fn sweep_survives_bad_points() {
        // Epsilon exceeds the injectivity radius at tiny N; the row
        // records the failure and the sweep continues.
        let config = SweepConfig {
            manifold: SweepManifold::Torus {
                sides: vec![1.0, 1.0],
            },
            node_counts: vec![2, 20],
            avg_degree_ref: 300.0,
            ref_node_count: 1000,
            seeds: vec![9],
            node_sample: None,
        };
        let rows = convergence_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].error.is_some());
        assert!(rows[1].error.is_none());
    }

    #[test]
    fn subsampled_mean_is_unbiased() {
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        let pts = m.sample_uniform(400, 23);
        let eps = epsilon_schedule(2, 400, 30.0, 1000, &m).unwrap();
        let g = build_rgg(pts, eps, &m, Some(23)).unwrap();
        let all: Vec<usize> = (0..400).collect();
        let full = node_curvatures(&g, &all, &CurvatureOptions::default()).unwrap();
        let full_mean: f64 =
            full.nodes.iter().map(|c| c.scaled_sorc).sum::<f64>() / full.nodes.len() as f64;

        let mut rng = seeded_rng(99);
        let sub_nodes = sample_distinct(400, 100, &mut rng);
        let sub = node_curvatures(&g, &sub_nodes, &CurvatureOptions::default()).unwrap();
        let k = sub.nodes.len() as f64;
        let sub_mean: f64 = sub.nodes.iter().map(|c| c.scaled_sorc).sum::<f64>() / k;
        let sub_var: f64 = sub
            .nodes
            .iter()
            .map(|c| (c.scaled_sorc - sub_mean).powi(2))
            .sum::<f64>()
            / (k - 1.0);
        let stderr = (sub_var / k).sqrt();
        assert!(
            (sub_mean - full_mean).abs() < 3.0 * stderr,
            "subsample {sub_mean} vs full {full_mean} (stderr {stderr})"
        );
    }
}
