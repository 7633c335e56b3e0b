//! Trapezoidal quadrature on circles and Riesz projections.
//!
//! For an integrand analytic on an annulus around the circle the equispaced
//! trapezoidal rule converges geometrically, so the only adaptivity needed is
//! node doubling. Doubling reuses every previous node.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::linalg::{self, CMatrix, Projector};
use crate::parallel::{self, Execution};
use crate::{Error, Result, C64, INTEGER_TOL};

/// Counterclockwise circle `C(center; radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    center: C64,
    radius: f64,
}

impl Circle {
    pub fn new(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::Contour(format!("invalid circle C({center}; {radius})")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `j`-th of `n` equispaced nodes, starting on the positive real side.
    pub fn node(&self, j: usize, n: usize) -> C64 {
        let theta = 2.0 * PI * j as f64 / n as f64;
        self.center + C64::from_polar(self.radius, theta)
    }

    /// Points strictly inside the circle.
    pub fn encloses(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Distance from `z` to the circle itself.
    pub fn distance_to(&self, z: C64) -> f64 {
        ((z - self.center).norm() - self.radius).abs()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.center, self.radius * factor)
    }
}

/// Node schedule for [`integrate_circle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub initial_nodes: usize,
    pub max_doublings: u32,
    pub rel_tol: f64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 64,
            max_doublings: 6,
            rel_tol: 1e-10,
            execution: Execution::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_nodes < 8 || !self.initial_nodes.is_power_of_two() {
            return Err(Error::Input(format!(
                "initial_nodes must be a power of two >= 8, got {}",
                self.initial_nodes
            )));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::Input(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        Ok(())
    }

    /// Same schedule starting from twice as many nodes.
    pub fn doubled(&self) -> Self {
        Self {
            initial_nodes: self.initial_nodes * 2,
            ..*self
        }
    }

    pub fn sequential(self) -> Self {
        Self {
            execution: Execution::Sequential,
            ..self
        }
    }
}

/// Computes `(1/2 pi i) \oint_c f(z) dz`.
///
/// Node values `f(z_j) (z_j - c)` are summed in index order, so the result does
/// not depend on the execution mode. Refinement stops once two successive
/// estimates differ by at most `rel_tol * (|estimate| + max(1, s))`, where `s`
/// is the mean magnitude of the weighted node values (the roundoff floor of
/// the sum).
pub fn integrate_circle<F>(f: F, circle: &Circle, quad: &QuadratureConfig) -> Result<CMatrix>
where
    F: Fn(C64) -> Result<CMatrix> + Send + Sync,
{
    quad.validate()?;
    let weighted = |j: usize, n: usize| -> Result<CMatrix> {
        let z = circle.node(j, n);
        let v = f(z)?;
        Ok(v * (z - circle.center))
    };

    let mut n = quad.initial_nodes;
    let mut values = parallel::try_map_indexed(n, quad.execution, |j| weighted(j, n))?;
    let shape = values[0].shape();
    if values.iter().any(|v| v.shape() != shape) {
        return Err(Error::Dimension("integrand changed shape along the contour".into()));
    }
    let mut estimate = ordered_mean(&values);

    for _ in 0..quad.max_doublings {
        let fine = 2 * n;
        let odd = parallel::try_map_indexed(n, quad.execution, |j| weighted(2 * j + 1, fine))?;
        let mut merged = Vec::with_capacity(fine);
        for (even, odd) in values.into_iter().zip(odd) {
            merged.push(even);
            merged.push(odd);
        }
        values = merged;
        n = fine;
        let next = ordered_mean(&values);
        let scale = values.iter().map(|v| v.norm()).sum::<f64>() / n as f64;
        let difference = (&next - &estimate).norm();
        if difference <= quad.rel_tol * (next.norm() + scale.max(1.0)) {
            return Ok(next);
        }
        estimate = next;
    }

    let previous = ordered_mean(&values.iter().step_by(2).cloned().collect::<Vec<_>>());
    Err(Error::Quadrature {
        nodes: n,
        difference: (&estimate - &previous).norm(),
        previous: Box::new(previous),
        last: Box::new(estimate),
    })
}

fn ordered_mean(values: &[CMatrix]) -> CMatrix {
    let mut acc = CMatrix::zeros(values[0].nrows(), values[0].ncols());
    for v in values {
        acc += v;
    }
    acc / C64::new(values.len() as f64, 0.0)
}

/// Scalar convenience wrapper around [`integrate_circle`].
pub fn integrate_circle_scalar<F>(f: F, circle: &Circle, quad: &QuadratureConfig) -> Result<C64>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    let m = integrate_circle(|z| Ok(CMatrix::from_element(1, 1, f(z)?)), circle, quad)?;
    Ok(m[(0, 0)])
}

/// Eigenvalues closer than this to a Riesz contour are rejected.
pub const SEPARATION_TOL: f64 = 1e-8;

/// Radius floor used when choosing contours automatically.
pub const MIN_RADIUS: f64 = 1e-6;

/// Half the distance from `z0` to the nearest point of `others`, floored at
/// [`MIN_RADIUS`] and capped at `cap`. Points within `exclude_tol` of `z0`
/// are treated as `z0` itself.
pub fn isolating_radius(z0: C64, others: &[C64], exclude_tol: f64, cap: f64) -> f64 {
    let nearest = others
        .iter()
        .map(|w| (w - z0).norm())
        .filter(|&d| d > exclude_tol)
        .fold(f64::INFINITY, f64::min);
    (0.5 * nearest).min(cap).max(MIN_RADIUS)
}

/// Rounds a trace to the nearest integer, failing if it is further than
/// [`INTEGER_TOL`] away. Returns the integer and the residual.
pub fn round_trace(raw: C64) -> Result<(i64, f64)> {
    let value = raw.re.round();
    let residual = (raw - C64::new(value, 0.0)).norm();
    if residual > INTEGER_TOL || !residual.is_finite() {
        return Err(Error::NonInteger { raw, residual });
    }
    Ok((value as i64, residual))
}

/// Riesz projection with its rounded trace.
#[derive(Debug, Clone)]
pub struct RieszProjection {
    pub projector: Projector,
    pub circle: Circle,
    pub raw_trace: C64,
    /// Trace rounded to an integer: the algebraic multiplicity of the enclosed
    /// eigenvalues.
    pub rank: usize,
    pub residual: f64,
}

/// `P = (-1/2 pi i) \oint_{C(z0; eps)} (A - zeta I)^{-1} d zeta`.
pub fn riesz_projection(a: &CMatrix, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<RieszProjection> {
    if !a.is_square() {
        return Err(Error::Dimension("Riesz projection needs a square matrix".into()));
    }
    linalg::ensure_finite(a)?;
    let circle = Circle::new(z0, eps)?;
    let n = a.nrows();
    for lambda in linalg::eigenvalues(a)? {
        let distance = circle.distance_to(lambda);
        if distance <= SEPARATION_TOL * (1.0 + circle.radius()) {
            return Err(Error::Separation { eigenvalue: lambda, distance });
        }
    }
    let id = linalg::identity(n);
    let integral = integrate_circle(
        |zeta| {
            let shifted = a - &id * zeta;
            let (inv, _) = linalg::inverse(&shifted)?;
            Ok(inv)
        },
        &circle,
        quad,
    )?;
    let p = -integral;
    let raw_trace = linalg::trace(&p);
    let (rank, residual) = round_trace(raw_trace)?;
    if rank < 0 {
        return Err(Error::NonInteger { raw: raw_trace, residual });
    }
    let projector = Projector::with_tolerance(p, false, 1e-8)?;
    Ok(RieszProjection {
        projector,
        circle,
        raw_trace,
        rank: rank as usize,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::linalg::{diag, from_real_rows, identity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn cauchy_integrals() {
        let unit = Circle::new(C64::new(0.0, 0.0), 1.0).unwrap();
        let id = identity(2);
        let r = integrate_circle(|z| Ok(&id / z), &unit, &quad()).unwrap();
        assert!((r - &id).norm() < 1e-14);
        let r = integrate_circle(|_| Ok(id.clone()), &unit, &quad()).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn residue_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let circle = Circle::new(C64::new(0.3, -0.2), 1.0).unwrap();
        for _ in 0..10 {
            let m = generate::random_matrix(&mut rng, 3, 3);
            let inside = circle.center() + C64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..6.3));
            let outside = circle.center() + C64::from_polar(rng.random_range(2.0..3.0), rng.random_range(0.0..6.3));
            let r_in = integrate_circle(|z| Ok(&m / (z - inside)), &circle, &quad()).unwrap();
            let r_out = integrate_circle(|z| Ok(&m / (z - outside)), &circle, &quad()).unwrap();
            assert!((r_in - &m).norm() < 1e-12 * m.norm());
            assert!(r_out.norm() < 1e-12 * m.norm());
        }
    }

    #[test]
    fn nonconvergence_reports_last_two_estimates() {
        // pole almost on the contour
        let circle = Circle::new(C64::new(0.0, 0.0), 1.0).unwrap();
        let q = QuadratureConfig {
            initial_nodes: 8,
            max_doublings: 1,
            ..QuadratureConfig::default()
        };
        let err = integrate_circle(
            |z| Ok(CMatrix::from_element(1, 1, 1.0 / (z - C64::new(1.001, 0.0)))),
            &circle,
            &q,
        )
        .unwrap_err();
        match err {
            Error::Quadrature { previous, last, nodes, .. } => {
                assert_eq!(nodes, 16);
                assert_ne!(previous, last);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig {
            initial_nodes: 12,
            ..QuadratureConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(Circle::new(C64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn riesz_of_diagonal_and_jordan_matrices() {
        let z0 = C64::new(0.0, 0.0);
        let a = diag(&[C64::new(0.0, 0.0), C64::new(5.0, 0.0)]);
        let p = riesz_projection(&a, z0, 1.0, &quad()).unwrap();
        assert!((p.projector.matrix() - diag(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])).norm() < 1e-12);
        assert_eq!(p.rank, 1);

        let h = from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let p = riesz_projection(&h, z0, 0.5, &quad()).unwrap();
        assert_eq!(p.rank, 2);
        assert!((p.projector.matrix() - identity(2)).norm() < 1e-10);

        let h = from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(riesz_projection(&h, z0, 0.5, &quad()).unwrap().rank, 1);
    }

    #[test]
    fn riesz_rejects_eigenvalue_on_contour() {
        let a = diag(&[C64::new(1.0, 0.0), C64::new(5.0, 0.0)]);
        assert!(matches!(
            riesz_projection(&a, C64::new(0.0, 0.0), 1.0, &quad()),
            Err(Error::Separation { .. })
        ));
    }

    #[test]
    fn riesz_projections_commute_and_sum_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..6 {
            let a = generate::random_matrix(&mut rng, n, n);
            let spec = linalg::spectrum(&a).unwrap();
            let centers: Vec<C64> = spec.iter().map(|s| s.value).collect();
            let mut total = CMatrix::zeros(n, n);
            for s in &spec {
                let eps = isolating_radius(s.value, &centers, 1e-12, 1.0);
                let p = riesz_projection(&a, s.value, eps, &quad()).unwrap();
                let pm = p.projector.matrix();
                assert!((&a * pm - pm * &a).norm() < 1e-8 * (1.0 + a.norm() * pm.norm()));
                assert_eq!(p.rank, s.multiplicity);
                total += pm;
            }
            assert!((total - identity(n)).norm() < 1e-8);
        }
    }

    #[test]
    fn trace_rounding() {
        assert_eq!(round_trace(C64::new(2.0 + 1e-9, 1e-9)).unwrap().0, 2);
        assert!(round_trace(C64::new(2.01, 0.0)).is_err());
    }
}
