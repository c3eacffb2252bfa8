//! Scalar Ollivier-Ricci curvature on random geometric graphs.
//!
//! The library estimates the scalar curvature of an unknown manifold from
//! graph data alone. Sample points from a manifold, connect pairs below a
//! distance threshold, and the per-node statistic
//! `2(n+2)^2 / eps^4 * SORC(x)` converges to the scalar curvature at `x`
//! as the graph grows. Everything needed to run and check that experiment
//! end to end lives here:
//!
//! - [`geometry`]: closed-form oracles (sampling, distances, log maps,
//!   curvature) for the unit sphere and the flat torus;
//! - [`rgg`]: graph construction, truncated shortest paths, neighborhood
//!   measures;
//! - [`transport`]: exact 1-Wasserstein distances by min-cost flow, with
//!   a brute-force oracle;
//! - [`curvature`]: edge ORC, node SORC/SRC, the manifold-side Monte
//!   Carlo estimator, and the edge error profile;
//! - [`harness`]: epsilon schedules, convergence sweeps, ratio and moment
//!   validation checks, CSV emission;
//! - [`graph_io`]: the JSON graph file format.
//!
//! Heavy loops (per-edge transport solves, per-source Dijkstra, Monte
//! Carlo sampling) are data-parallel over rayon behind the default
//! `parallel` feature; disabling it yields a dependency-light sequential
//! build with identical output bytes.

pub mod curvature;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod graph_io;
pub mod harness;
pub mod rgg;
pub mod rng;
pub mod transport;

pub use error::CurvError;
