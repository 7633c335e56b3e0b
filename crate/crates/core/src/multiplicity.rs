//! Scalar and operator argument principles.

use serde::{Deserialize, Serialize};

use crate::analytic::{self, OperatorFunction};
use crate::contour::{self, Circle, QuadratureConfig};
use crate::linalg::{self, CMatrix};
use crate::{parallel, Error, Result, C64};

/// Both operator orderings must agree to this (relative) before rounding.
pub const ORDERING_TOL: f64 = 1e-8;

/// `|det| < DEGENERATE_TOL` at every probe point means the determinant
/// vanishes identically.
pub const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ArgumentPrinciple,
    RieszTrace,
    DeterminantOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub point: C64,
    pub value: i64,
    pub raw_trace: C64,
    pub residual: f64,
    pub method: Method,
}

impl MultiplicityReport {
    fn from_raw(point: C64, raw: C64, method: Method) -> Result<Self> {
        let (value, residual) = contour::round_trace(raw)?;
        Ok(Self {
            point,
            value,
            raw_trace: raw,
            residual,
            method,
        })
    }
}

/// Radius of the small circles used for derivatives at contour nodes: a
/// quarter of `eps`, shrunk further if a declared singularity sits close to
/// the contour.
fn inner_radius(singularities: &[C64], z0: C64, eps: f64) -> f64 {
    let gap = singularities
        .iter()
        .map(|s| ((s - z0).norm() - eps).abs())
        .fold(f64::INFINITY, f64::min);
    (0.25 * eps).min(0.5 * gap)
}

/// Schedule for the inner derivative circles. The nearest singularity is at
/// least twice the inner radius away, so the trapezoid error falls like
/// `2^-n` and a quarter of the outer starting nodes suffices. The outer
/// integral already runs in parallel.
fn inner_quad(quad: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        initial_nodes: (quad.initial_nodes / 4).max(8),
        ..*quad
    }
    .sequential()
}

fn check_contour(f: &OperatorFunction, z0: C64, eps: f64) -> Result<()> {
    f.check_isolated(z0, eps)?;
    check_on_contour(f, z0, eps)
}

fn check_on_contour(f: &OperatorFunction, z0: C64, eps: f64) -> Result<()> {
    if let Some(s) = f
        .singularities()
        .iter()
        .find(|&&s| ((s - z0).norm() - eps).abs() <= contour::SEPARATION_TOL * (1.0 + eps))
    {
        return Err(Error::Contour(format!("singularity {s} lies on C({z0}; {eps})")));
    }
    Ok(())
}

/// `f'` by Cauchy's formula on `C(z; rho)`.
fn scalar_derivative<F>(f: &F, z: C64, rho: f64, quad: &QuadratureConfig) -> Result<C64>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    let circle = Circle::new(z, rho)?;
    contour::integrate_circle_scalar(
        |zeta| {
            let w = zeta - z;
            Ok(f(zeta)? / (w * w))
        },
        &circle,
        quad,
    )
}

/// Order of the zero (positive) or pole (negative) of `f` at `z0`:
/// `(1/2πi)∮ f'/f`.
pub fn scalar_multiplicity<F>(f: F, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    scalar_multiplicity_with(f, z0, eps, 0.25 * eps, quad, Method::ArgumentPrinciple)
}

fn scalar_multiplicity_with<F>(
    f: F,
    z0: C64,
    eps: f64,
    rho: f64,
    quad: &QuadratureConfig,
    method: Method,
) -> Result<MultiplicityReport>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    let circle = Circle::new(z0, eps)?;
    let inner = inner_quad(quad);
    let raw = contour::integrate_circle_scalar(
        |zeta| {
            let value = f(zeta)?;
            if value.norm() == 0.0 || !value.is_finite() {
                return Err(Error::Contour(format!("f vanishes or blows up at {zeta} on the contour")));
            }
            Ok(scalar_derivative(&f, zeta, rho, &inner)? / value)
        },
        &circle,
        quad,
    )?;
    MultiplicityReport::from_raw(z0, raw, method)
}

/// Raw traces of `(1/2πi)∮ A'A^{-1}` and `(1/2πi)∮ A^{-1}A'`.
fn log_derivative_traces(
    a: &OperatorFunction,
    z0: C64,
    eps: f64,
    quad: &QuadratureConfig,
    allow_enclosed: bool,
) -> Result<(C64, C64)> {
    if !a.is_square() {
        return Err(Error::Dimension("argument principle needs a square function".into()));
    }
    if allow_enclosed {
        check_on_contour(a, z0, eps)?;
    } else {
        check_contour(a, z0, eps)?;
    }
    let rho = inner_radius(a.singularities(), z0, eps);
    let circle = Circle::new(z0, eps)?;
    let n = a.shape().0;
    let inner = inner_quad(quad);
    let stacked = contour::integrate_circle(
        |zeta| {
            let value = a.eval(zeta)?;
            let (inv, _) = linalg::inverse(&value).map_err(|_| {
                Error::Contour(format!("A is singular at {zeta} on C({z0}; {eps})"))
            })?;
            let d = analytic::derivative_unchecked(a, zeta, rho, &inner)?;
            let mut out = CMatrix::zeros(n, 2 * n);
            out.columns_mut(0, n).copy_from(&(&d * &inv));
            out.columns_mut(n, n).copy_from(&(&inv * &d));
            Ok(out)
        },
        &circle,
        quad,
    )?;
    let first = linalg::trace(&stacked.columns(0, n).into_owned());
    let second = linalg::trace(&stacked.columns(n, n).into_owned());
    if (first - second).norm() > ORDERING_TOL * (1.0 + first.norm()) {
        return Err(Error::OrderingMismatch { first, second });
    }
    Ok((first, second))
}

/// `m_a(z0; A) = tr (1/2πi)∮ A'(ζ)A(ζ)^{-1} dζ`, cross-checked against the
/// other operator ordering.
pub fn algebraic_multiplicity(a: &OperatorFunction, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport> {
    let (first, _) = log_derivative_traces(a, z0, eps, quad, false)?;
    MultiplicityReport::from_raw(z0, first, Method::ArgumentPrinciple)
}

/// Index of a finitely meromorphic `M` with respect to `C(z0; eps)`: zeros
/// minus poles, counted with multiplicity. Unlike
/// [`algebraic_multiplicity`] the circle may enclose several singularities.
pub fn meromorphic_index(m: &OperatorFunction, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport> {
    let (first, _) = log_derivative_traces(m, z0, eps, quad, true)?;
    MultiplicityReport::from_raw(z0, first, Method::ArgumentPrinciple)
}

/// The same count obtained by integrating only the principal part of
/// `A'A^{-1}` at `z0`.
pub fn principal_part_multiplicity(
    a: &OperatorFunction,
    z0: C64,
    eps: f64,
    quad: &QuadratureConfig,
) -> Result<MultiplicityReport> {
    check_contour(a, z0, eps)?;
    let rho = inner_radius(a.singularities(), z0, eps);
    let inner = a.clone();
    let n = a.shape().0;
    let inner_schedule = inner_quad(quad);
    let log_derivative = OperatorFunction::new(n, n, move |zeta| {
        let (inv, _) = linalg::inverse(&inner.eval(zeta)?)?;
        Ok(analytic::derivative_unchecked(&inner, zeta, rho, &inner_schedule)? * inv)
    })
    .with_singularities(a.singularities().to_vec());
    let pp = analytic::principal_part(&log_derivative, z0, eps, quad)?;
    let Some(first) = pp.coefficients.first() else {
        return MultiplicityReport::from_raw(z0, C64::new(0.0, 0.0), Method::ArgumentPrinciple);
    };
    let circle = Circle::new(z0, eps)?;
    let shape = first.shape();
    let integral = contour::integrate_circle(
        |zeta| Ok(pp.evaluate(zeta).unwrap_or_else(|| CMatrix::zeros(shape.0, shape.1))),
        &circle,
        quad,
    )?;
    MultiplicityReport::from_raw(z0, linalg::trace(&integral), Method::ArgumentPrinciple)
}

/// Order of the zero of `det A(z)` at `z0`.
pub fn determinant_zero_order(a: &OperatorFunction, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant needs a square function".into()));
    }
    check_contour(a, z0, eps)?;
    let circle = Circle::new(z0, eps)?;
    let probes = quad.initial_nodes;
    let dets = parallel::try_map_indexed(probes + 2, quad.execution, |j| {
        let z = match j {
            _ if j < probes => circle.node(j, probes),
            _ if j == probes => z0 + 0.5 * eps * C64::new(0.6, 0.8),
            _ => z0 + 0.25 * eps * C64::new(-0.8, 0.6),
        };
        a.eval(z).map(|m| linalg::determinant(&m).norm())
    })?;
    if dets.iter().all(|&d| d < DEGENERATE_TOL) {
        return Err(Error::Degenerate { z0 });
    }
    let rho = inner_radius(a.singularities(), z0, eps);
    scalar_multiplicity_with(
        |z| a.eval(z).map(|m| linalg::determinant(&m)),
        z0,
        eps,
        rho,
        quad,
        Method::DeterminantOracle,
    )
}

/// Algebraic multiplicity of the eigenvalues of `a` inside `C(z0; eps)` as
/// the trace of the Riesz projection.
pub fn riesz_multiplicity(a: &CMatrix, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport> {
    let r = contour::riesz_projection(a, z0, eps, quad)?;
    Ok(MultiplicityReport {
        point: z0,
        value: r.rank as i64,
        raw_trace: r.raw_trace,
        residual: r.residual,
        method: Method::RieszTrace,
    })
}
