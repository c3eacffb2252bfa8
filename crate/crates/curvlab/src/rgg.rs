//! Random geometric graphs with geodesic edge weights, truncated
//! shortest-path tables, and the uniform neighborhood measures that feed
//! the transport solver.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::CurvError;
use crate::exec;
use crate::geometry::{Manifold, Point};

// ---------------------------------------------------------------------------
// DiscreteMeasure
// ---------------------------------------------------------------------------

/// A finitely supported probability measure with exact rational masses,
/// stored as integer numerators over a common denominator.
///
/// Keeping the masses rational lets the transport solver work with
/// integral flows and return plans whose marginals match exactly, with no
/// floating-point mass drift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMeasure {
    support: Vec<usize>,
    numerators: Vec<u64>,
    denominator: u64,
}

impl DiscreteMeasure {
    /// Uniform measure on a set of distinct node indices.
    pub fn uniform(support: Vec<usize>) -> Result<Self, CurvError> {
        let den = support.len() as u64;
        let numerators = vec![1u64; support.len()];
        Self::from_rationals(support, numerators, den)
    }

    /// Measure with masses `numerators[i] / denominator`; the numerators
    /// must be positive and sum exactly to the denominator.
    pub fn from_rationals(
        support: Vec<usize>,
        numerators: Vec<u64>,
        denominator: u64,
    ) -> Result<Self, CurvError> {
        if support.is_empty() {
            return Err(CurvError::InvalidMeasure("empty support".into()));
        }
        if support.len() != numerators.len() {
            return Err(CurvError::InvalidMeasure(
                "support and mass lengths differ".into(),
            ));
        }
        if numerators.iter().any(|&n| n == 0) {
            return Err(CurvError::InvalidMeasure("zero mass atom".into()));
        }
        if numerators.iter().sum::<u64>() != denominator {
            return Err(CurvError::InvalidMeasure(format!(
                "masses sum to {}/{denominator}, not 1",
                numerators.iter().sum::<u64>()
            )));
        }
        let mut seen = support.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(CurvError::InvalidMeasure(
                "support indices not distinct".into(),
            ));
        }
        Ok(DiscreteMeasure {
            support,
            numerators,
            denominator,
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Mass of atom `i` as a float.
    pub fn mass_f64(&self, i: usize) -> f64 {
        self.numerators[i] as f64 / self.denominator as f64
    }
}

// ---------------------------------------------------------------------------
// GeometricGraph
// ---------------------------------------------------------------------------

/// An immutable weighted graph with node coordinates. Edges connect pairs
/// at geodesic distance strictly between 0 and `epsilon`, weighted by that
/// distance; adjacency lists are sorted by neighbor index and exactly
/// symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    points: Vec<Point>,
    epsilon: f64,
    adjacency: Vec<Vec<(u32, f64)>>,
    n_intrinsic: usize,
    manifold: Option<Manifold>,
    seed: Option<u64>,
}

impl GeometricGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.n_intrinsic
    }

    pub fn manifold(&self) -> Option<&Manifold> {
        self.manifold.as_ref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Option<&Point> {
        self.points.get(i)
    }

    /// Neighbors of `x` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, x: usize) -> &[(u32, f64)] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    /// Weight of edge (x, y), if present.
    pub fn edge_weight(&self, x: usize, y: usize) -> Option<f64> {
        let row = &self.adjacency[x];
        row.binary_search_by_key(&(y as u32), |&(j, _)| j)
            .ok()
            .map(|k| row[k].1)
    }

    /// Undirected edges as (i, j, weight) with i < j, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| (j as usize) > i)
                .map(move |&(j, w)| (i, j as usize, w))
        })
    }

    /// Build a graph from an explicit edge list (the real-world path, where
    /// weights come from [`preprocess_weights`] rather than a manifold).
    /// `epsilon` is the threshold that was applied to the weights; it drives
    /// the curvature scaling.
    pub fn from_edge_list(
        node_count: usize,
        edges: &[(usize, usize, f64)],
        n_intrinsic: usize,
        epsilon: f64,
    ) -> Result<Self, CurvError> {
        if n_intrinsic < 2 {
            return Err(CurvError::InvalidDimension(n_intrinsic));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(i, j, w) in edges {
            if i >= node_count || j >= node_count || i == j {
                return Err(CurvError::MalformedGraphFile(format!(
                    "bad edge ({i}, {j}) in a graph with {node_count} nodes"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(CurvError::NonPositiveWeight(w));
            }
            adjacency[i].push((j as u32, w));
            adjacency[j].push((i as u32, w));
        }
        for row in &mut adjacency {
            row.sort_unstable_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(CurvError::MalformedGraphFile("duplicate edge".into()));
            }
        }
        Ok(GeometricGraph {
            points: Vec::new(),
            epsilon,
            adjacency,
            n_intrinsic,
            manifold: None,
            seed: None,
        })
    }

    pub(crate) fn from_parts(
        points: Vec<Point>,
        epsilon: f64,
        adjacency: Vec<Vec<(u32, f64)>>,
        n_intrinsic: usize,
        manifold: Option<Manifold>,
        seed: Option<u64>,
    ) -> Self {
        GeometricGraph {
            points,
            epsilon,
            adjacency,
            n_intrinsic,
            manifold,
            seed,
        }
    }
}

/// Build the RGG on `points` with connectivity threshold `epsilon`: an
/// edge (x, y) exists iff `0 < d_M(x, y) < epsilon` (strict, matching the
/// ties-are-measure-zero convention), weighted by the geodesic distance.
///
/// Construction is exact pairwise; the torus uses a cell-grid accelerator
/// that provably enumerates the same pairs. Node order is preserved.
pub fn build_rgg(
    points: Vec<Point>,
    epsilon: f64,
    manifold: &Manifold,
    seed: Option<u64>,
) -> Result<GeometricGraph, CurvError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(CurvError::InvalidConfig(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if epsilon >= manifold.injectivity_radius() {
        eprintln!(
            "warning: epsilon {epsilon} is not below the injectivity radius {}",
            manifold.injectivity_radius()
        );
    }
    let rows = match manifold {
        Manifold::FlatTorus { .. } => grid_candidate_rows(&points, epsilon, manifold),
        Manifold::Sphere { .. } => naive_rows(&points, epsilon, manifold),
    };
    Ok(assemble(points, epsilon, rows, manifold, seed))
}

/// Reference O(N^2) pairwise construction; the accelerated path must match
/// it exactly.
pub fn build_rgg_naive(
    points: Vec<Point>,
    epsilon: f64,
    manifold: &Manifold,
    seed: Option<u64>,
) -> Result<GeometricGraph, CurvError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(CurvError::InvalidConfig(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let rows = naive_rows(&points, epsilon, manifold);
    Ok(assemble(points, epsilon, rows, manifold, seed))
}

/// For each node i, edges (i, j, w) with j > i, j ascending.
fn naive_rows(points: &[Point], epsilon: f64, manifold: &Manifold) -> Vec<Vec<(u32, f64)>> {
    let idx: Vec<usize> = (0..points.len()).collect();
    exec::map_indexed(&idx, |&i| {
        let mut row = Vec::new();
        for j in (i + 1)..points.len() {
            let d = manifold.geodesic_distance(&points[i], &points[j]);
            if d > 0.0 && d < epsilon {
                row.push((j as u32, d));
            }
        }
        row
    })
}

/// Torus cell grid: cells at least `epsilon` wide, so every qualifying
/// pair lies in the same or an adjacent (wrapped) cell. Produces the same
/// candidate set as the naive scan, with the same distance test.
fn grid_candidate_rows(
    points: &[Point],
    epsilon: f64,
    manifold: &Manifold,
) -> Vec<Vec<(u32, f64)>> {
    let sides = manifold.side_lengths();
    let n = sides.len();
    let cells_per_dim: Vec<usize> = sides
        .iter()
        .map(|&l| ((l / epsilon).floor() as usize).max(1))
        .collect();
    let total_cells: usize = cells_per_dim.iter().product();
    if total_cells <= 3usize.pow(n as u32) {
        // Grid too coarse to help.
        return naive_rows(points, epsilon, manifold);
    }

    let cell_of = |p: &Point| -> usize {
        let mut id = 0;
        for k in 0..n {
            let c = ((p.0[k] / sides[k] * cells_per_dim[k] as f64).floor() as usize)
                .min(cells_per_dim[k] - 1);
            id = id * cells_per_dim[k] + c;
        }
        id
    };

    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); total_cells];
    for (i, p) in points.iter().enumerate() {
        buckets[cell_of(p)].push(i as u32);
    }

    // Neighbor cells (including self) for each cell, deduplicated since
    // wrapped offsets alias when a dimension has fewer than 3 cells.
    let neighbor_cells: Vec<Vec<u32>> = (0..total_cells)
        .map(|id| {
            let mut coords = vec![0usize; n];
            let mut rest = id;
            for k in (0..n).rev() {
                coords[k] = rest % cells_per_dim[k];
                rest /= cells_per_dim[k];
            }
            let mut out = Vec::new();
            let mut offsets = vec![0i64; n];
            collect_neighbor_ids(&coords, &cells_per_dim, &mut offsets, 0, &mut out);
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();

    let idx: Vec<usize> = (0..points.len()).collect();
    exec::map_indexed(&idx, |&i| {
        let my_cell = cell_of(&points[i]);
        let mut candidates: Vec<u32> = Vec::new();
        for &c in &neighbor_cells[my_cell] {
            for &j in &buckets[c as usize] {
                if (j as usize) > i {
                    candidates.push(j);
                }
            }
        }
        candidates.sort_unstable();
        let mut row = Vec::new();
        for j in candidates {
            let d = manifold.geodesic_distance(&points[i], &points[j as usize]);
            if d > 0.0 && d < epsilon {
                row.push((j, d));
            }
        }
        row
    })
}

fn collect_neighbor_ids(
    coords: &[usize],
    cells_per_dim: &[usize],
    offsets: &mut Vec<i64>,
    dim: usize,
    out: &mut Vec<u32>,
) {
    if dim == coords.len() {
        let mut id = 0usize;
        for k in 0..coords.len() {
            let m = cells_per_dim[k] as i64;
            let c = (coords[k] as i64 + offsets[k]).rem_euclid(m) as usize;
            id = id * cells_per_dim[k] + c;
        }
        out.push(id as u32);
        return;
    }
    for off in -1..=1 {
        offsets[dim] = off;
        collect_neighbor_ids(coords, cells_per_dim, offsets, dim + 1, out);
    }
}

/// Merge per-node rows (j > i) into full symmetric sorted adjacency.
fn assemble(
    points: Vec<Point>,
    epsilon: f64,
    rows: Vec<Vec<(u32, f64)>>,
    manifold: &Manifold,
    seed: Option<u64>,
) -> GeometricGraph {
    let n = points.len();
    let mut adjacency: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row {
            adjacency[i].push((j, w));
            adjacency[j as usize].push((i as u32, w));
        }
    }
    // Rows are merged in ascending i with ascending j > i, so each list is
    // already sorted; keep a debug check rather than a re-sort.
    debug_assert!(adjacency
        .iter()
        .all(|row| row.windows(2).all(|w| w[0].0 < w[1].0)));
    GeometricGraph::from_parts(
        points,
        epsilon,
        adjacency,
        manifold.intrinsic_dim(),
        Some(manifold.clone()),
        seed,
    )
}

// ---------------------------------------------------------------------------
// Shortest paths
// ---------------------------------------------------------------------------

/// Distances from a set of source nodes, truncated at a radius cap.
/// Entries that were not settled within the cap are `f64::INFINITY`,
/// meaning "unreachable within cap", not an error.
#[derive(Debug, Clone)]
pub struct LocalDistanceTable {
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
    distances: Vec<Vec<f64>>,
}

impl LocalDistanceTable {
    /// Distance from `sources[s]` to node `t`, `INFINITY` if not settled.
    pub fn distance(&self, s: usize, t: usize) -> f64 {
        self.distances[s][t]
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.distances[s]
    }
}

/// Dijkstra from each source, expanding only nodes with tentative distance
/// `<= radius_cap`. Entries beyond the cap are flagged unreachable.
pub fn truncated_shortest_paths(
    graph: &GeometricGraph,
    sources: &[usize],
    radius_cap: f64,
) -> LocalDistanceTable {
    let rows = exec::map_indexed(sources, |&s| {
        let mut scratch = DijkstraScratch::new(graph.node_count());
        dijkstra_capped(graph, s, radius_cap, &mut scratch);
        scratch.dist.clone()
    });
    LocalDistanceTable {
        sources: sources.to_vec(),
        targets: (0..graph.node_count()).collect(),
        distances: rows,
    }
}

/// Reusable buffers for repeated Dijkstra runs over one graph.
pub(crate) struct DijkstraScratch {
    pub dist: Vec<f64>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32)>>,
}

impl DijkstraScratch {
    pub fn new(n: usize) -> Self {
        DijkstraScratch {
            dist: vec![f64::INFINITY; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &t in &self.touched {
            self.dist[t as usize] = f64::INFINITY;
        }
        self.touched.clear();
        self.heap.clear();
    }
}

/// Single-source Dijkstra, settling nodes up to `radius_cap` (or all
/// reachable nodes when the cap is infinite). Distances land in
/// `scratch.dist`. Nonnegative weights let us order heap keys by the raw
/// bit pattern of the float.
pub(crate) fn dijkstra_capped(
    graph: &GeometricGraph,
    source: usize,
    radius_cap: f64,
    scratch: &mut DijkstraScratch,
) {
    scratch.reset();
    scratch.dist[source] = 0.0;
    scratch.touched.push(source as u32);
    scratch.heap.push(Reverse((0u64, source as u32)));
    while let Some(Reverse((dbits, u))) = scratch.heap.pop() {
        let d = f64::from_bits(dbits);
        if d > scratch.dist[u as usize] {
            continue;
        }
        for &(v, w) in graph.neighbors(u as usize) {
            let nd = d + w;
            if nd <= radius_cap && nd < scratch.dist[v as usize] {
                if scratch.dist[v as usize].is_infinite() {
                    scratch.touched.push(v);
                }
                scratch.dist[v as usize] = nd;
                scratch.heap.push(Reverse((nd.to_bits(), v)));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Neighborhood measures
// ---------------------------------------------------------------------------

/// Uniform probability measure on the 1-hop neighborhood of `x`,
/// excluding `x` itself: each neighbor carries exactly `1/deg(x)`.
/// Errors for an isolated node, where no such measure exists.
pub fn neighborhood_measure(
    graph: &GeometricGraph,
    x: usize,
) -> Result<DiscreteMeasure, CurvError> {
    let nbrs = graph.neighbors(x);
    if nbrs.is_empty() {
        return Err(CurvError::IsolatedNode(x));
    }
    DiscreteMeasure::uniform(nbrs.iter().map(|&(j, _)| j as usize).collect())
}

// ---------------------------------------------------------------------------
// Weight preprocessing
// ---------------------------------------------------------------------------

/// Monotonically decreasing weight transforms for real-world graphs where
/// a larger raw weight means a stronger (closer) connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightTransform {
    /// `w -> 1 / w`
    Reciprocal,
    /// `w -> exp(-w)`
    NegExp,
    /// `w -> (w_min + w_max) - w`, reflecting the observed range onto itself
    Shift,
}

impl WeightTransform {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "reciprocal" => Some(WeightTransform::Reciprocal),
            "negexp" => Some(WeightTransform::NegExp),
            "shift" => Some(WeightTransform::Shift),
            _ => None,
        }
    }
}

/// Apply a decreasing transform to raw edge weights, then drop edges whose
/// transformed weight is at or above `threshold`. Raw weights must be
/// positive.
pub fn preprocess_weights(
    edges: &[(usize, usize, f64)],
    transform: WeightTransform,
    threshold: f64,
) -> Result<Vec<(usize, usize, f64)>, CurvError> {
    for &(_, _, w) in edges {
        if !(w > 0.0) || !w.is_finite() {
            return Err(CurvError::NonPositiveWeight(w));
        }
    }
    let (lo, hi) = edges.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), e| {
        (lo.min(e.2), hi.max(e.2))
    });
    let out = edges
        .iter()
        .map(|&(i, j, w)| {
            let t = match transform {
                WeightTransform::Reciprocal => 1.0 / w,
                WeightTransform::NegExp => (-w).exp(),
                WeightTransform::Shift => lo + hi - w,
            };
            (i, j, t)
        })
        .filter(|&(_, _, t)| t < threshold)
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Manifold;

    fn two_point_graph(d: f64, epsilon: f64) -> GeometricGraph {
        let m = Manifold::flat_torus(vec![2.0, 2.0]).unwrap();
        let points = vec![Point(vec![0.0, 0.0]), Point(vec![d, 0.0])];
        build_rgg(points, epsilon, &m, None).unwrap()
    }

    #[test]
    fn edge_iff_distance_below_threshold() {
        let g = two_point_graph(0.5, 0.6);
        assert_eq!(g.edge_count(), 1);
        assert!((g.edge_weight(0, 1).unwrap() - 0.5).abs() < 1e-12);

        let g = two_point_graph(0.5, 0.4);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn threshold_is_strict() {
        let g = two_point_graph(0.5, 0.5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let m = Manifold::sphere(2).unwrap();
        let pts = m.sample_uniform(300, 5);
        let g = build_rgg(pts, 0.3, &m, Some(5)).unwrap();
        for i in 0..g.node_count() {
            let row = g.neighbors(i);
            assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for &(j, w) in row {
                let back = g.edge_weight(j as usize, i).expect("symmetric edge");
                assert_eq!(back.to_bits(), w.to_bits());
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let m = Manifold::sphere(2).unwrap();
        let pts = m.sample_uniform(200, 9);
        let g1 = build_rgg(pts.clone(), 0.4, &m, Some(9)).unwrap();
        let g2 = build_rgg(pts, 0.4, &m, Some(9)).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn grid_matches_naive_on_torus() {
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        for (n_pts, eps, seed) in [(400, 0.11, 1u64), (300, 0.05, 2), (50, 0.9, 3)] {
            let pts = m.sample_uniform(n_pts, seed);
            let fast = build_rgg(pts.clone(), eps, &m, None).unwrap();
            let naive = build_rgg_naive(pts, eps, &m, None).unwrap();
            assert_eq!(fast, naive, "n={n_pts} eps={eps}");
        }
    }

    #[test]
    fn sphere_mean_degree_matches_schedule_target() {
        // k = N v_n eps^n / vol(S^n) with k = 50 at N = 1000.
        let m = Manifold::sphere(2).unwrap();
        let eps = (50.0 * m.total_volume()
            / (1000.0 * crate::geometry::unit_ball_volume(2)))
        .sqrt();
        let pts = m.sample_uniform(1000, 11);
        let g = build_rgg(pts, eps, &m, Some(11)).unwrap();
        let mean_deg = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
        assert!(
            (45.0..=55.0).contains(&mean_deg),
            "mean degree {mean_deg} outside [45, 55]"
        );
    }

    #[test]
    fn torus_degree_law() {
        // Exact flat volume: expected degree N * v_n * eps^n / vol(M);
        // empirical mean within 3 standard errors of the binomial law.
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        let n_pts = 2000usize;
        let eps = 0.08;
        let pts = m.sample_uniform(n_pts, 21);
        let g = build_rgg(pts, eps, &m, Some(21)).unwrap();
        let p = crate::geometry::unit_ball_volume(2) * eps * eps / m.total_volume();
        let expect = (n_pts as f64 - 1.0) * p;
        let var_node = (n_pts as f64 - 1.0) * p * (1.0 - p);
        // Mean over N mildly dependent nodes; bound the stderr by treating
        // them as independent and padding the tolerance with the 3x factor.
        let stderr = (var_node / n_pts as f64).sqrt();
        let mean_deg = 2.0 * g.edge_count() as f64 / n_pts as f64;
        assert!(
            (mean_deg - expect).abs() < 3.0 * stderr.max(expect * 0.02),
            "mean degree {mean_deg}, expected {expect}"
        );
    }

    #[test]
    fn path_graph_distance_adds() {
        let g = GeometricGraph::from_edge_list(3, &[(0, 1, 0.3), (1, 2, 0.4)], 2, 1.0).unwrap();
        let table = truncated_shortest_paths(&g, &[0], f64::INFINITY);
        assert!((table.distance(0, 2) - 0.7).abs() < 1e-15);
        assert_eq!(table.distance(0, 0), 0.0);
    }

    #[test]
    fn truncation_flags_far_nodes() {
        let g = GeometricGraph::from_edge_list(3, &[(0, 1, 0.3), (1, 2, 0.4)], 2, 1.0).unwrap();
        let table = truncated_shortest_paths(&g, &[0], 0.5);
        assert!((table.distance(0, 1) - 0.3).abs() < 1e-15);
        assert!(table.distance(0, 2).is_infinite());
    }

    #[test]
    fn graph_distance_dominates_geodesic() {
        let m = Manifold::sphere(2).unwrap();
        let pts = m.sample_uniform(400, 33);
        let g = build_rgg(pts, 0.35, &m, Some(33)).unwrap();
        let sources: Vec<usize> = (0..20).collect();
        let table = truncated_shortest_paths(&g, &sources, f64::INFINITY);
        for (s, &src) in sources.iter().enumerate() {
            for t in 0..g.node_count() {
                let dg = table.distance(s, t);
                if dg.is_finite() {
                    let dm = m.geodesic_distance(&g.points()[src], &g.points()[t]);
                    assert!(dg >= dm - 1e-9, "d_G {dg} < d_M {dm}");
                }
            }
        }
    }

    #[test]
    fn truncated_table_matches_uncapped_within_cap() {
        let m = Manifold::flat_torus(vec![1.0, 1.0]).unwrap();
        let pts = m.sample_uniform(600, 41);
        let eps = 0.1;
        let g = build_rgg(pts, eps, &m, Some(41)).unwrap();
        let sources: Vec<usize> = (0..30).collect();
        let capped = truncated_shortest_paths(&g, &sources, 4.0 * eps);
        let full = truncated_shortest_paths(&g, &sources, f64::INFINITY);
        for s in 0..sources.len() {
            for t in 0..g.node_count() {
                let df = full.distance(s, t);
                if df <= 4.0 * eps {
                    assert_eq!(capped.distance(s, t).to_bits(), df.to_bits());
                }
            }
        }
    }

    #[test]
    fn neighborhood_measure_is_uniform_and_excludes_center() {
        let g = GeometricGraph::from_edge_list(
            5,
            &[(0, 1, 0.1), (0, 2, 0.2), (0, 3, 0.3), (0, 4, 0.4)],
            2,
            1.0,
        )
        .unwrap();
        let mu = neighborhood_measure(&g, 0).unwrap();
        assert_eq!(mu.len(), 4);
        assert_eq!(mu.denominator(), 4);
        assert!(mu.numerators().iter().all(|&n| n == 1));
        assert!(!mu.support().contains(&0));
    }

    #[test]
    fn isolated_node_has_no_measure() {
        let g = GeometricGraph::from_edge_list(3, &[(0, 1, 0.5)], 2, 1.0).unwrap();
        assert!(matches!(
            neighborhood_measure(&g, 2),
            Err(CurvError::IsolatedNode(2))
        ));
    }

    #[test]
    fn measure_rejects_bad_rationals() {
        assert!(DiscreteMeasure::from_rationals(vec![0, 1], vec![1, 1], 3).is_err());
        assert!(DiscreteMeasure::from_rationals(vec![0, 0], vec![1, 1], 2).is_err());
        assert!(DiscreteMeasure::from_rationals(vec![0, 1], vec![2, 0], 2).is_err());
        assert!(DiscreteMeasure::from_rationals(vec![], vec![], 0).is_err());
    }

    #[test]
    fn preprocess_reciprocal_and_threshold() {
        let edges = [(0usize, 1usize, 2.0)];
        let out = preprocess_weights(&edges, WeightTransform::Reciprocal, f64::INFINITY).unwrap();
        assert!((out[0].2 - 0.5).abs() < 1e-15);

        let many = [(0usize, 1usize, 2.0), (1, 2, 4.0), (2, 3, 0.5)];
        let kept = preprocess_weights(&many, WeightTransform::Reciprocal, f64::INFINITY).unwrap();
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn preprocess_negexp_reverses_order() {
        let edges = [(0usize, 1usize, 1.0), (1, 2, 2.0)];
        let out = preprocess_weights(&edges, WeightTransform::NegExp, f64::INFINITY).unwrap();
        assert!(out[0].2 > out[1].2);
    }

    #[test]
    fn preprocess_shift_reverses_order_and_stays_positive() {
        let edges = [(0usize, 1usize, 1.0), (1, 2, 5.0)];
        let out = preprocess_weights(&edges, WeightTransform::Shift, f64::INFINITY).unwrap();
        assert!((out[0].2 - 5.0).abs() < 1e-15);
        assert!((out[1].2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn preprocess_threshold_drops_edges() {
        let edges = [(0usize, 1usize, 1.0), (1, 2, 2.0)];
        let out = preprocess_weights(&edges, WeightTransform::Reciprocal, 0.75).unwrap();
        assert_eq!(out, vec![(1, 2, 0.5)]);
    }

    #[test]
    fn preprocess_rejects_nonpositive_weight() {
        let edges = [(0usize, 1usize, 0.0)];
        assert!(preprocess_weights(&edges, WeightTransform::Reciprocal, 1.0).is_err());
    }
}
