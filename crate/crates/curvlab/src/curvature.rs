//! Edge-level Ollivier-Ricci curvature, node-level scalar curvature
//! statistics, and the manifold-side oracles they are validated against.
//!
//! The edge statistic is `kappa(x, y) = 1 - W1(mu_x, mu_y) / w(x, y)`,
//! where `mu_x` is the uniform measure on the neighbors of `x` (excluding
//! `x` itself) and the transport cost is the shortest-path metric. The
//! node statistic averages `w^2 kappa` over incident edges and, scaled by
//! `2(n+2)^2 / eps^4`, estimates the scalar curvature of the sampled
//! manifold.

use std::collections::HashMap;

use crate::error::CurvError;
use crate::exec;
use crate::geometry::{Manifold, Point};
use crate::rgg::{
    dijkstra_capped, neighborhood_measure, DijkstraScratch, DiscreteMeasure, GeometricGraph,
    LocalDistanceTable,
};
use crate::rng::derive_seed;
use crate::transport::{w1_exact, TransportProblem};

/// Default shortest-path truncation radius, in units of epsilon. All
/// transport-relevant pairs sit within `3 eps` on the manifold, so `4 eps`
/// leaves margin for graph distortion.
pub const DEFAULT_RADIUS_CAP_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStatus {
    Ok,
    /// Some pair of neighborhood atoms is disconnected in the graph, so
    /// the transport cost (and the curvature) is undefined.
    UndefinedDisconnected,
}

/// Ollivier-Ricci curvature of one edge.
#[derive(Debug, Clone)]
pub struct EdgeCurvature {
    pub edge: (usize, usize),
    pub kappa: f64,
    pub w1: f64,
    pub weight: f64,
    pub status: EdgeStatus,
}

/// Curvature statistics of one node.
#[derive(Debug, Clone)]
pub struct NodeCurvature {
    pub node: usize,
    pub sorc: f64,
    pub scaled_sorc: f64,
    pub src: Option<f64>,
    pub scaled_src: Option<f64>,
    pub degree: usize,
    pub undefined_edge_count: usize,
}

/// Result of a batch curvature run: one entry per requested node, plus
/// every incident edge (deduplicated, keyed by the smaller endpoint).
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub nodes: Vec<NodeCurvature>,
    pub edges: Vec<EdgeCurvature>,
}

// ---------------------------------------------------------------------------
// Edge curvature
// ---------------------------------------------------------------------------

/// Ollivier-Ricci curvature of the edge (x, y).
///
/// Costs are shortest-path distances taken from `table` where available;
/// any entry missing or truncated there is recomputed with an uncapped
/// Dijkstra from the corresponding source. If a required pair is
/// disconnected even then, the edge is reported undefined rather than
/// erroring.
///
/// The computation canonicalizes the orientation internally, so
/// `orc_edge(g, x, y)` and `orc_edge(g, y, x)` return identical results.
pub fn orc_edge(
    graph: &GeometricGraph,
    x: usize,
    y: usize,
    table: &LocalDistanceTable,
) -> Result<EdgeCurvature, CurvError> {
    let weight = graph
        .edge_weight(x, y)
        .ok_or(CurvError::NotAnEdge(x, y))?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let mu = neighborhood_measure(graph, lo)?;
    let nu = neighborhood_measure(graph, hi)?;

    let row_index: HashMap<usize, usize> = table
        .sources
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k))
        .collect();
    let mut scratch = DijkstraScratch::new(graph.node_count());
    let mut fallback_rows: HashMap<usize, Vec<f64>> = HashMap::new();

    let m = mu.len();
    let n = nu.len();
    let mut cost = vec![0.0f64; m * n];
    let mut disconnected = false;
    'outer: for (i, &u) in mu.support().iter().enumerate() {
        let mut row_filled = false;
        for (j, &v) in nu.support().iter().enumerate() {
            let mut d = match row_index.get(&u) {
                Some(&k) => table.distance(k, v),
                None => f64::INFINITY,
            };
            if d.is_infinite() {
                if !row_filled && !fallback_rows.contains_key(&u) {
                    dijkstra_capped(graph, u, f64::INFINITY, &mut scratch);
                    fallback_rows.insert(u, scratch.dist.clone());
                    row_filled = true;
                }
                d = fallback_rows[&u][v];
            }
            if d.is_infinite() {
                disconnected = true;
                break 'outer;
            }
            cost[i * n + j] = d;
        }
    }

    if disconnected {
        return Ok(EdgeCurvature {
            edge: (lo, hi),
            kappa: f64::NAN,
            w1: f64::NAN,
            weight,
            status: EdgeStatus::UndefinedDisconnected,
        });
    }

    let w1 = w1_metric_reduced(&mu, &nu, &cost);
    Ok(EdgeCurvature {
        edge: (lo, hi),
        kappa: 1.0 - w1 / weight,
        w1,
        weight,
        status: EdgeStatus::Ok,
    })
}

/// W1 between two uniform neighborhood measures under a metric cost.
///
/// Because the cost is a metric and both measures may share atoms, mass
/// common to both sides can stay in place at zero cost; only the residual
/// measures enter the LP. This is exact for metric costs and cuts the
/// solve size substantially on overlapping neighborhoods.
fn w1_metric_reduced(mu: &DiscreteMeasure, nu: &DiscreteMeasure, cost: &[f64]) -> f64 {
    let m = mu.len();
    let n = nu.len();
    let dmu = mu.denominator();
    let dnu = nu.denominator();
    let scale = dmu / gcd(dmu, dnu) * dnu;
    let mu_unit = scale / dmu;
    let nu_unit = scale / dnu;

    // Merge-walk the sorted supports to find common atoms.
    let mut res_mu: Vec<(usize, u64)> = Vec::with_capacity(m);
    let mut res_nu: Vec<(usize, u64)> = Vec::with_capacity(n);
    let (mut i, mut j) = (0usize, 0usize);
    let sup_mu = mu.support();
    let sup_nu = nu.support();
    while i < m || j < n {
        if j == n || (i < m && sup_mu[i] < sup_nu[j]) {
            res_mu.push((i, mu_unit));
            i += 1;
        } else if i == m || sup_nu[j] < sup_mu[i] {
            res_nu.push((j, nu_unit));
            j += 1;
        } else {
            let matched = mu_unit.min(nu_unit);
            if mu_unit > matched {
                res_mu.push((i, mu_unit - matched));
            }
            if nu_unit > matched {
                res_nu.push((j, nu_unit - matched));
            }
            i += 1;
            j += 1;
        }
    }

    let residual: u64 = res_mu.iter().map(|&(_, u)| u).sum();
    debug_assert_eq!(residual, res_nu.iter().map(|&(_, u)| u).sum::<u64>());
    if residual == 0 {
        return 0.0;
    }

    // Residual measures rescaled to probability at denominator `residual`;
    // the value scales back linearly by residual/scale.
    let mu_r = DiscreteMeasure::from_rationals(
        res_mu.iter().map(|&(i, _)| sup_mu[i]).collect(),
        res_mu.iter().map(|&(_, u)| u).collect(),
        residual,
    )
    .expect("residual measure is valid by construction");
    let nu_r = DiscreteMeasure::from_rationals(
        res_nu.iter().map(|&(j, _)| sup_nu[j]).collect(),
        res_nu.iter().map(|&(_, u)| u).collect(),
        residual,
    )
    .expect("residual measure is valid by construction");

    let sub_cost: Vec<Vec<f64>> = res_mu
        .iter()
        .map(|&(i, _)| res_nu.iter().map(|&(j, _)| cost[i * n + j]).collect())
        .collect();
    let problem = TransportProblem::new(mu_r, nu_r, sub_cost)
        .expect("residual subproblem is well formed");
    let (value, _) = w1_exact(&problem);
    value * (residual as f64 / scale as f64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Node statistics
// ---------------------------------------------------------------------------

/// Scalar Ollivier-Ricci curvature of a node:
/// `(1/deg) * sum over incident edges of w^2 kappa`, where undefined edges
/// contribute zero but the denominator stays the full degree.
pub fn sorc_node(degree: usize, incident: &[EdgeCurvature]) -> f64 {
    if degree == 0 {
        return 0.0;
    }
    let sum: f64 = incident
        .iter()
        .filter(|e| e.status == EdgeStatus::Ok)
        .map(|e| e.weight * e.weight * e.kappa)
        .sum();
    sum / degree as f64
}

/// The convergence scaling `2 (n+2)^2 / eps^4`.
pub fn scaled_sorc(sorc: f64, epsilon: f64, n: usize) -> f64 {
    let np2 = (n + 2) as f64;
    2.0 * np2 * np2 / epsilon.powi(4) * sorc
}

/// Mean incident Ricci curvature at node `x`:
/// `(1/deg) * sum over neighbors y of Ric_x(log_x y, log_x y)`, the
/// manifold-side oracle that SORC estimates. The scaled variant carries
/// the `(n+2)/eps^2` factor.
pub fn src_node(
    manifold: &Manifold,
    graph: &GeometricGraph,
    x: usize,
) -> Result<(f64, f64), CurvError> {
    let deg = graph.degree(x);
    if deg == 0 {
        return Ok((0.0, 0.0));
    }
    let px = graph
        .point(x)
        .ok_or(CurvError::MissingManifold("src_node"))?;
    let mut sum = 0.0;
    for &(y, _) in graph.neighbors(x) {
        let py = graph
            .point(y as usize)
            .ok_or(CurvError::MissingManifold("src_node"))?;
        let v = manifold.log_map(px, py)?;
        sum += manifold.ricci_quadratic(px, &v);
    }
    let src = sum / deg as f64;
    let n = manifold.intrinsic_dim() as f64;
    let scaled = (n + 2.0) / (graph.epsilon() * graph.epsilon()) * src;
    Ok((src, scaled))
}

// ---------------------------------------------------------------------------
// Batch pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct CurvatureOptions {
    pub radius_cap_factor: f64,
    pub with_src: bool,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        CurvatureOptions {
            radius_cap_factor: DEFAULT_RADIUS_CAP_FACTOR,
            with_src: false,
        }
    }
}

/// Curvature statistics for a set of nodes.
///
/// Each node is an independent work unit: truncated Dijkstra runs from
/// each of its neighbors feed the cost matrices of all its incident
/// edges, each edge solve is an exact LP, and the per-node reduction is
/// sequential in adjacency order. Units run in parallel; every output is
/// byte-deterministic and independent of the thread count.
pub fn node_curvatures(
    graph: &GeometricGraph,
    nodes: &[usize],
    opts: &CurvatureOptions,
) -> Result<CurvatureReport, CurvError> {
    if opts.with_src && (graph.manifold().is_none() || graph.points().is_empty()) {
        return Err(CurvError::MissingManifold("--with-src"));
    }
    let cap = opts.radius_cap_factor * graph.epsilon();

    let units = exec::map_indexed(nodes, |&x| process_unit(graph, x, cap, opts));
    let mut nodes_out = Vec::with_capacity(nodes.len());
    let mut edge_map: HashMap<(usize, usize), EdgeCurvature> = HashMap::new();
    // Two passes: edges computed from their smaller endpoint win, so the
    // merged report does not depend on unit order.
    for unit in &units {
        let (node, edges) = match unit {
            Ok(u) => u,
            Err(_) => continue,
        };
        nodes_out.push(node.clone());
        for e in edges {
            if e.edge.0 == node.node {
                edge_map.insert(e.edge, e.clone());
            }
        }
    }
    for unit in &units {
        if let Ok((node, edges)) = unit {
            for e in edges {
                if e.edge.0 != node.node {
                    edge_map.entry(e.edge).or_insert_with(|| e.clone());
                }
            }
        }
    }
    for unit in units {
        unit?;
    }
    let mut edges: Vec<EdgeCurvature> = edge_map.into_values().collect();
    edges.sort_by_key(|e| e.edge);
    Ok(CurvatureReport {
        nodes: nodes_out,
        edges,
    })
}

type UnitResult = Result<(NodeCurvature, Vec<EdgeCurvature>), CurvError>;

fn process_unit(graph: &GeometricGraph, x: usize, cap: f64, opts: &CurvatureOptions) -> UnitResult {
    let nbrs = graph.neighbors(x);
    let deg = nbrs.len();
    let (src, scaled_src) = if opts.with_src {
        let m = graph.manifold().expect("checked by caller");
        let (s, ss) = src_node(m, graph, x)?;
        (Some(s), Some(ss))
    } else {
        (None, None)
    };
    if deg == 0 {
        return Ok((
            NodeCurvature {
                node: x,
                sorc: 0.0,
                scaled_sorc: 0.0,
                src,
                scaled_src,
                degree: 0,
                undefined_edge_count: 0,
            },
            Vec::new(),
        ));
    }

    // Targets: every atom of every incident edge's far-side measure.
    let mut targets: Vec<u32> = Vec::new();
    for &(y, _) in nbrs {
        targets.extend(graph.neighbors(y as usize).iter().map(|&(v, _)| v));
    }
    targets.sort_unstable();
    targets.dedup();
    let t_pos = |v: u32| -> usize {
        targets.binary_search(&v).expect("target set covers all atoms")
    };

    // Truncated Dijkstra from each neighbor of x, compacted to the targets.
    let mut scratch = DijkstraScratch::new(graph.node_count());
    let mut rows: Vec<f64> = Vec::with_capacity(deg * targets.len());
    let mut uncapped: Vec<bool> = vec![false; deg];
    for &(u, _) in nbrs {
        dijkstra_capped(graph, u as usize, cap, &mut scratch);
        rows.extend(targets.iter().map(|&t| scratch.dist[t as usize]));
    }

    let mu = neighborhood_measure(graph, x)?;
    let mut edges = Vec::with_capacity(deg);
    let mut undefined = 0usize;
    for &(y, weight) in nbrs {
        let nu = neighborhood_measure(graph, y as usize)?;
        let m = mu.len();
        let n = nu.len();
        let mut cost = vec![0.0f64; m * n];
        let mut disconnected = false;
        'fill: for (i, &(u, _)) in nbrs.iter().enumerate() {
            for (j, &v) in nu.support().iter().enumerate() {
                let mut d = rows[i * targets.len() + t_pos(v as u32)];
                if d.is_infinite() && !uncapped[i] {
                    // Retry without the cap, once per source.
                    dijkstra_capped(graph, u as usize, f64::INFINITY, &mut scratch);
                    for (k, &t) in targets.iter().enumerate() {
                        rows[i * targets.len() + k] = scratch.dist[t as usize];
                    }
                    uncapped[i] = true;
                    d = rows[i * targets.len() + t_pos(v as u32)];
                }
                if d.is_infinite() {
                    disconnected = true;
                    break 'fill;
                }
                cost[i * n + j] = d;
            }
        }
        let (lo, hi) = if x <= y as usize {
            (x, y as usize)
        } else {
            (y as usize, x)
        };
        if disconnected {
            undefined += 1;
            edges.push(EdgeCurvature {
                edge: (lo, hi),
                kappa: f64::NAN,
                w1: f64::NAN,
                weight,
                status: EdgeStatus::UndefinedDisconnected,
            });
            continue;
        }
        let w1 = w1_metric_reduced(&mu, &nu, &cost);
        edges.push(EdgeCurvature {
            edge: (lo, hi),
            kappa: 1.0 - w1 / weight,
            w1,
            weight,
            status: EdgeStatus::Ok,
        });
    }

    let sorc = sorc_node(deg, &edges);
    let node = NodeCurvature {
        node: x,
        sorc,
        scaled_sorc: scaled_sorc(sorc, graph.epsilon(), graph.intrinsic_dim()),
        src,
        scaled_src,
        degree: deg,
        undefined_edge_count: undefined,
    };
    Ok((node, edges))
}

// ---------------------------------------------------------------------------
// Manifold-side Monte Carlo estimator
// ---------------------------------------------------------------------------

/// Monte-Carlo estimate of the manifold Ollivier-Ricci curvature
/// `kappa_M(x, y) = 1 - W1(mu_x^M, mu_y^M) / d_M(x, y)`, where each
/// measure is uniform on a geodesic `epsilon`-ball. Draws `m` points per
/// ball and solves the discrete problem with exact geodesic costs.
///
/// Samples come in antithetic pairs `(z, exp_c(-log_c z))`: the geodesic
/// point reflection through the ball center preserves the uniform ball
/// measure on these constant-curvature models, and pinning each cloud's
/// sample mean to the center removes the dominant noise term of the
/// estimate (the random offset between the two cloud means).
pub fn estimate_manifold_orc(
    manifold: &Manifold,
    x: &Point,
    y: &Point,
    epsilon: f64,
    m: usize,
    seed: u64,
) -> Result<f64, CurvError> {
    let d = manifold.geodesic_distance(x, y);
    if d == 0.0 {
        return Err(CurvError::CoincidentPoints);
    }
    if epsilon >= manifold.injectivity_radius() {
        return Err(CurvError::EpsilonTooLarge {
            epsilon,
            injectivity_radius: manifold.injectivity_radius(),
        });
    }
    if m == 0 {
        return Err(CurvError::InvalidConfig("need at least one sample".into()));
    }
    let xs = antithetic_ball_samples(manifold, x, epsilon, m, derive_seed(&[seed, 0]));
    let ys = antithetic_ball_samples(manifold, y, epsilon, m, derive_seed(&[seed, 1]));
    let cost: Vec<Vec<f64>> = xs
        .iter()
        .map(|p| ys.iter().map(|q| manifold.geodesic_distance(p, q)).collect())
        .collect();
    let mu = DiscreteMeasure::uniform((0..m).collect())?;
    let nu = DiscreteMeasure::uniform((0..m).collect())?;
    let problem = TransportProblem::new(mu, nu, cost)?;
    let (w1, _) = w1_exact(&problem);
    Ok(1.0 - w1 / d)
}

/// `count` uniform ball samples in antithetic pairs: each rejection draw
/// `z` is followed by its geodesic reflection through the center. An odd
/// count gets one unpaired draw at the end.
fn antithetic_ball_samples(
    manifold: &Manifold,
    center: &Point,
    radius: f64,
    count: usize,
    seed: u64,
) -> Vec<Point> {
    let halves = manifold.sample_in_ball(center, radius, count.div_ceil(2), seed);
    let mut out = Vec::with_capacity(count);
    for z in halves {
        if out.len() + 1 < count {
            let v = manifold
                .log_map(center, &z)
                .expect("ball samples lie inside the injectivity radius");
            let reflected = manifold.exp_map(&crate::geometry::TangentVector {
                base: v.base.clone(),
                components: v.components.iter().map(|c| -c).collect(),
                norm: v.norm,
            });
            out.push(z);
            out.push(reflected);
        } else {
            out.push(z);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Edge error profile
// ---------------------------------------------------------------------------

/// One decile of the edge error profile.
#[derive(Debug, Clone)]
pub struct ProfileBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean_abs_err: f64,
}

/// Bin edges by `d_M(x, y) / eps` deciles and report the mean absolute
/// deviation of `kappa / eps^2` from `Ric(v) / (2(n+2))` per bin. The
/// error grows toward short edges, which is exactly what this table makes
/// visible. Empty input gives an empty table.
pub fn edge_error_profile(
    graph: &GeometricGraph,
    manifold: &Manifold,
    edges: &[EdgeCurvature],
) -> Result<Vec<ProfileBin>, CurvError> {
    if edges.is_empty() {
        return Ok(Vec::new());
    }
    let eps = graph.epsilon();
    let n = manifold.intrinsic_dim() as f64;
    let mut sums = vec![0.0f64; 10];
    let mut counts = vec![0usize; 10];
    for e in edges {
        if e.status != EdgeStatus::Ok {
            continue;
        }
        let (x, y) = e.edge;
        let px = graph
            .point(x)
            .ok_or(CurvError::MissingManifold("edge_error_profile"))?;
        let py = graph
            .point(y)
            .ok_or(CurvError::MissingManifold("edge_error_profile"))?;
        let v = manifold.log_map(px, py)?;
        let unit = crate::geometry::TangentVector {
            base: v.base.clone(),
            components: v.components.iter().map(|c| c / v.norm).collect(),
            norm: 1.0,
        };
        let ric = manifold.ricci_quadratic(px, &unit);
        let err = (e.kappa / (eps * eps) - ric / (2.0 * (n + 2.0))).abs();
        let bin = ((e.weight / eps * 10.0).floor() as usize).min(9);
        sums[bin] += err;
        counts[bin] += 1;
    }
    Ok((0..10)
        .map(|b| ProfileBin {
            lo: b as f64 / 10.0,
            hi: (b + 1) as f64 / 10.0,
            count: counts[b],
            mean_abs_err: if counts[b] > 0 {
                sums[b] / counts[b] as f64
            } else {
                f64::NAN
            },
        })
        .collect())
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

pub const EDGE_CSV_HEADER: &str = "i,j,weight,w1,kappa,status";
pub const NODE_CSV_HEADER: &str =
    "node,degree,sorc,scaled_sorc,src,scaled_src,undefined_edges";
pub const PROFILE_CSV_HEADER: &str = "d_over_eps_lo,d_over_eps_hi,count,mean_abs_err";

pub fn write_edge_csv<W: std::io::Write>(
    edges: &[EdgeCurvature],
    mut out: W,
) -> std::io::Result<()> {
    use crate::graph_io::fmt_g17;
    writeln!(out, "{EDGE_CSV_HEADER}")?;
    for e in edges {
        let status = match e.status {
            EdgeStatus::Ok => "ok",
            EdgeStatus::UndefinedDisconnected => "undefined_disconnected",
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.edge.0,
            e.edge.1,
            fmt_g17(e.weight),
            fmt_g17(e.w1),
            fmt_g17(e.kappa),
            status,
        )?;
    }
    Ok(())
}

pub fn write_node_csv<W: std::io::Write>(
    nodes: &[NodeCurvature],
    mut out: W,
) -> std::io::Result<()> {
    use crate::graph_io::fmt_g17;
    writeln!(out, "{NODE_CSV_HEADER}")?;
    for c in nodes {
        let src = c.src.map(fmt_g17).unwrap_or_default();
        let scaled_src = c.scaled_src.map(fmt_g17).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.node,
            c.degree,
            fmt_g17(c.sorc),
            fmt_g17(c.scaled_sorc),
            src,
            scaled_src,
            c.undefined_edge_count,
        )?;
    }
    Ok(())
}

pub fn write_profile_csv<W: std::io::Write>(
    bins: &[ProfileBin],
    mut out: W,
) -> std::io::Result<()> {
    use crate::graph_io::fmt_g17;
    writeln!(out, "{PROFILE_CSV_HEADER}")?;
    for b in bins {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_g17(b.lo),
            fmt_g17(b.hi),
            b.count,
            fmt_g17(b.mean_abs_err),
        )?;
    }
    Ok(())
}
