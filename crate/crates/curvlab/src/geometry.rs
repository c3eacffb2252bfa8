//! Closed-form manifold oracles: uniform sampling, geodesic distance, log
//! maps, and Ricci/scalar curvature for the unit sphere `S^n` and the flat
//! rectangular torus. These are the ground-truth models that the graph-side
//! estimators are checked against.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::CurvError;
use crate::rng::seeded_rng;

/// Volume of the n-dimensional unit Euclidean ball.
///
/// Uses the two-step recurrence `v_n = 2 pi / n * v_{n-2}` with `v_0 = 1`,
/// `v_1 = 2`, which is exact and avoids a gamma-function dependency.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Surface area of the unit n-sphere embedded in R^{n+1}.
pub fn sphere_surface_area(n: usize) -> f64 {
    (n as f64 + 1.0) * unit_ball_volume(n + 1)
}

/// A point on a manifold, stored in ambient coordinates.
///
/// Sphere points are unit vectors in R^{n+1}; torus points have each
/// coordinate in `[0, L_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A tangent vector at a base point, in ambient coordinates.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vec<f64>,
    pub norm: f64,
}

impl TangentVector {
    fn new(base: Point, components: Vec<f64>) -> Self {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        TangentVector {
            base,
            components,
            norm,
        }
    }
}

/// A manifold with closed-form geometry: the unit sphere `S^n` or a flat
/// rectangular torus with given side lengths.
#[derive(Debug, Clone, PartialEq)]
pub enum Manifold {
    Sphere { dim: usize },
    FlatTorus { sides: Vec<f64> },
}

impl Manifold {
    /// Unit sphere of intrinsic dimension `n >= 2`.
    pub fn sphere(dim: usize) -> Result<Self, CurvError> {
        if dim < 2 {
            return Err(CurvError::InvalidDimension(dim));
        }
        Ok(Manifold::Sphere { dim })
    }

    /// Flat torus `R^n / (L_1 Z x ... x L_n Z)` with `n >= 2`.
    pub fn flat_torus(sides: Vec<f64>) -> Result<Self, CurvError> {
        if sides.len() < 2 {
            return Err(CurvError::InvalidDimension(sides.len()));
        }
        if sides.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(CurvError::InvalidSideLength);
        }
        Ok(Manifold::FlatTorus { sides })
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Manifold::Sphere { dim } => *dim,
            Manifold::FlatTorus { sides } => sides.len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Manifold::Sphere { dim } => dim + 1,
            Manifold::FlatTorus { sides } => sides.len(),
        }
    }

    /// Torus side lengths; empty slice for the sphere.
    pub fn side_lengths(&self) -> &[f64] {
        match self {
            Manifold::Sphere { .. } => &[],
            Manifold::FlatTorus { sides } => sides,
        }
    }

    /// Largest radius at which log maps are single-valued:
    /// pi for the unit sphere, half the shortest side for the torus.
    pub fn injectivity_radius(&self) -> f64 {
        match self {
            Manifold::Sphere { .. } => std::f64::consts::PI,
            Manifold::FlatTorus { sides } => {
                sides.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0
            }
        }
    }

    /// Riemannian volume of the whole manifold.
    pub fn total_volume(&self) -> f64 {
        match self {
            Manifold::Sphere { dim } => sphere_surface_area(*dim),
            Manifold::FlatTorus { sides } => sides.iter().product(),
        }
    }

    /// Draw `count` i.i.d. points from the uniform distribution with
    /// respect to Riemannian volume. Deterministic for a given seed.
    pub fn sample_uniform(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = seeded_rng(seed);
        (0..count).map(|_| self.sample_one(&mut rng)).collect()
    }

    pub(crate) fn sample_one(&self, rng: &mut ChaCha8Rng) -> Point {
        match self {
            Manifold::Sphere { dim } => {
                // Normalized Gaussian vector; resample the (measure-zero)
                // degenerate case of a near-zero norm.
                loop {
                    let v: Vec<f64> = (0..dim + 1)
                        .map(|_| StandardNormal.sample(rng))
                        .collect();
                    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    if norm > 1e-12 {
                        return Point(v.into_iter().map(|c| c / norm).collect());
                    }
                }
            }
            Manifold::FlatTorus { sides } => {
                Point(sides.iter().map(|&l| rng.gen_range(0.0..l)).collect())
            }
        }
    }

    /// Geodesic distance between two points.
    ///
    /// Sphere: arccos of the inner product, clamped to `[-1, 1]` against
    /// floating-point noise near coincident or antipodal pairs.
    /// Torus: Euclidean length of the per-coordinate minimal wrap.
    pub fn geodesic_distance(&self, p: &Point, q: &Point) -> f64 {
        match self {
            Manifold::Sphere { .. } => {
                // Identical coordinates short-circuit to zero: near the
                // top of its range acos amplifies rounding in the dot
                // product to ~1e-8, which would break d(p, p) = 0.
                if p.0 == q.0 {
                    return 0.0;
                }
                let dot: f64 = p.0.iter().zip(&q.0).map(|(a, b)| a * b).sum();
                dot.clamp(-1.0, 1.0).acos()
            }
            Manifold::FlatTorus { sides } => {
                let mut sq = 0.0;
                for ((&a, &b), &l) in p.0.iter().zip(&q.0).zip(sides) {
                    let d = wrap_displacement(b - a, l);
                    sq += d * d;
                }
                sq.sqrt()
            }
        }
    }

    /// Log map `log_x(y)`: the tangent vector at `x` of length
    /// `d_M(x, y)` pointing along the minimizing geodesic toward `y`.
    ///
    /// Errors when `d_M(x, y)` reaches the injectivity radius, where the
    /// minimizer is no longer unique.
    pub fn log_map(&self, x: &Point, y: &Point) -> Result<TangentVector, CurvError> {
        let d = self.geodesic_distance(x, y);
        if d >= self.injectivity_radius() {
            return Err(CurvError::LogMapOutOfRange {
                distance: d,
                injectivity_radius: self.injectivity_radius(),
            });
        }
        match self {
            Manifold::Sphere { .. } => {
                // (theta / sin theta) * (y - cos(theta) x), with the
                // theta -> 0 limit handled by a series for the prefactor.
                let theta = d;
                let scale = if theta < 1e-8 {
                    1.0 + theta * theta / 6.0
                } else {
                    theta / theta.sin()
                };
                let cos_t = theta.cos();
                let comps: Vec<f64> = x
                    .0
                    .iter()
                    .zip(&y.0)
                    .map(|(&xi, &yi)| scale * (yi - cos_t * xi))
                    .collect();
                Ok(TangentVector::new(x.clone(), comps))
            }
            Manifold::FlatTorus { sides } => {
                let comps: Vec<f64> = x
                    .0
                    .iter()
                    .zip(&y.0)
                    .zip(sides)
                    .map(|((&a, &b), &l)| wrap_displacement(b - a, l))
                    .collect();
                Ok(TangentVector::new(x.clone(), comps))
            }
        }
    }

    /// Exponential map: follow the geodesic from the base of `v` for
    /// arc length `|v|`. Inverse of [`Manifold::log_map`] inside the
    /// injectivity radius.
    pub fn exp_map(&self, v: &TangentVector) -> Point {
        match self {
            Manifold::Sphere { .. } => {
                let t = v.norm;
                if t < 1e-300 {
                    return v.base.clone();
                }
                let (sin_t, cos_t) = t.sin_cos();
                let coords: Vec<f64> = v
                    .base
                    .0
                    .iter()
                    .zip(&v.components)
                    .map(|(&x, &c)| cos_t * x + sin_t * c / t)
                    .collect();
                // Renormalize to hold the unit-norm invariant exactly.
                let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
                Point(coords.into_iter().map(|c| c / norm).collect())
            }
            Manifold::FlatTorus { sides } => {
                let coords: Vec<f64> = v
                    .base
                    .0
                    .iter()
                    .zip(&v.components)
                    .zip(sides)
                    .map(|((&x, &c), &l)| (x + c).rem_euclid(l))
                    .collect();
                Point(coords)
            }
        }
    }

    /// Ricci curvature evaluated as the quadratic form `Ric_x(v, v)`.
    ///
    /// `(n - 1) |v|^2` on the unit sphere, identically zero on the torus.
    pub fn ricci_quadratic(&self, _x: &Point, v: &TangentVector) -> f64 {
        match self {
            Manifold::Sphere { dim } => (*dim as f64 - 1.0) * v.norm * v.norm,
            Manifold::FlatTorus { .. } => 0.0,
        }
    }

    /// Scalar curvature: the trace of the Ricci operator. `n(n-1)` on the
    /// unit sphere, zero on the torus; constant for both models.
    pub fn scalar_curvature(&self, _x: &Point) -> f64 {
        match self {
            Manifold::Sphere { dim } => (*dim * (*dim - 1)) as f64,
            Manifold::FlatTorus { .. } => 0.0,
        }
    }

    /// An orthonormal basis of the tangent space at `x`, built by
    /// Gram-Schmidt on the ambient coordinate frame projected to `T_xM`.
    pub fn tangent_basis(&self, x: &Point) -> Vec<TangentVector> {
        let n = self.intrinsic_dim();
        match self {
            Manifold::FlatTorus { .. } => (0..n)
                .map(|i| {
                    let mut comps = vec![0.0; n];
                    comps[i] = 1.0;
                    TangentVector::new(x.clone(), comps)
                })
                .collect(),
            Manifold::Sphere { .. } => {
                let ambient = n + 1;
                let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
                for i in 0..ambient {
                    if basis.len() == n {
                        break;
                    }
                    // Project e_i to the tangent space, then orthogonalize
                    // against the basis collected so far.
                    let mut v: Vec<f64> = (0..ambient)
                        .map(|j| {
                            let e = if i == j { 1.0 } else { 0.0 };
                            e - x.0[i] * x.0[j]
                        })
                        .collect();
                    for b in &basis {
                        let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                        for (vj, bj) in v.iter_mut().zip(b) {
                            *vj -= dot * bj;
                        }
                    }
                    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    if norm > 1e-8 {
                        basis.push(v.into_iter().map(|c| c / norm).collect());
                    }
                }
                debug_assert_eq!(basis.len(), n);
                basis
                    .into_iter()
                    .map(|comps| TangentVector::new(x.clone(), comps))
                    .collect()
            }
        }
    }

    /// Uniform samples from the geodesic ball `B^M(x, radius)`, by
    /// rejection from the global uniform distribution. Exact, and fast
    /// enough at the ball sizes used by the validation checks.
    pub fn sample_in_ball(
        &self,
        center: &Point,
        radius: f64,
        count: usize,
        seed: u64,
    ) -> Vec<Point> {
        let mut rng = seeded_rng(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p = self.sample_one(&mut rng);
            if self.geodesic_distance(center, &p) < radius {
                out.push(p);
            }
        }
        out
    }
}

/// Signed displacement from 0 to `delta` on a circle of circumference
/// `period`, wrapped into `[-period/2, period/2)`.
fn wrap_displacement(delta: f64, period: f64) -> f64 {
    let mut d = delta.rem_euclid(period);
    if d >= period / 2.0 {
        d -= period;
    }
    d
}
