//! Matrix-valued functions of a complex variable, Laurent coefficients and
//! principal parts.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::contour::{self, Circle, QuadratureConfig};
use crate::linalg::{self, CMatrix};
use crate::parallel;
use crate::{Error, Result, C64};

type EvalFn = dyn Fn(C64) -> Result<CMatrix> + Send + Sync;

/// Evaluating closer than this (relative to `1 + |s|`) to a declared
/// singularity `s` is a domain error.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Default relative tolerance for deciding that a Laurent coefficient
/// vanishes.
pub const COEFFICIENT_TOL: f64 = 1e-8;

/// Evaluable map `z -> F(z)` with a fixed shape and a declared singular set.
///
/// Evaluation closures must be pure; the library calls them concurrently.
#[derive(Clone)]
pub struct OperatorFunction {
    rows: usize,
    cols: usize,
    eval: Arc<EvalFn>,
    singularities: Vec<C64>,
    description: Option<String>,
}

impl fmt::Debug for OperatorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFunction")
            .field("shape", &(self.rows, self.cols))
            .field("singularities", &self.singularities)
            .field("description", &self.description)
            .finish()
    }
}

impl OperatorFunction {
    pub fn new<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(C64) -> Result<CMatrix> + Send + Sync + 'static,
    {
        Self {
            rows,
            cols,
            eval: Arc::new(f),
            singularities: Vec::new(),
            description: None,
        }
    }

    pub fn with_singularities(mut self, singularities: Vec<C64>) -> Self {
        self.singularities = singularities;
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn singularities(&self) -> &[C64] {
        &self.singularities
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn is_declared_singular(&self, z: C64) -> bool {
        self.singularities
            .iter()
            .any(|s| (z - s).norm() <= SINGULARITY_TOL * (1.0 + s.norm()))
    }

    pub fn eval(&self, z: C64) -> Result<CMatrix> {
        if self.is_declared_singular(z) {
            return Err(Error::Domain { z });
        }
        let m = (self.eval)(z)?;
        if m.shape() != (self.rows, self.cols) {
            return Err(Error::Dimension(format!(
                "function declared {}x{} returned {}x{} at {z}",
                self.rows,
                self.cols,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(m)
    }

    /// `z -> M` for a fixed matrix.
    pub fn constant(m: CMatrix) -> Self {
        let (r, c) = m.shape();
        Self::new(r, c, move |_| Ok(m.clone()))
    }

    /// The pencil `z -> A - z I`.
    pub fn pencil(a: CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("pencil needs a square matrix".into()));
        }
        linalg::ensure_finite(&a)?;
        let n = a.nrows();
        let id = linalg::identity(n);
        Ok(Self::new(n, n, move |z| Ok(&a - &id * z)).with_description("pencil A - zI"))
    }

    /// `z -> sum_k C_k z^k`.
    pub fn polynomial(coefficients: Vec<CMatrix>) -> Result<Self> {
        let (r, c) = check_coefficients(&coefficients)?;
        Ok(Self::new(r, c, move |z| Ok(horner(&coefficients, z, r, c))).with_description("matrix polynomial"))
    }

    /// `z -> N(z) D(z)^{-1}` for matrix polynomials `N`, `D`. The singular set
    /// is the zero set of `det D`, computed from the coefficients.
    pub fn rational(numerator: Vec<CMatrix>, denominator: Vec<CMatrix>) -> Result<Self> {
        let (r, c) = check_coefficients(&numerator)?;
        let (dr, dc) = check_coefficients(&denominator)?;
        if dr != dc || dc != c {
            return Err(Error::Dimension(format!(
                "denominator must be {c}x{c}, got {dr}x{dc}"
            )));
        }
        let poles = polynomial_determinant_roots(&denominator)?;
        Ok(Self::new(r, c, move |z| {
            let num = horner(&numerator, z, r, c);
            let den = horner(&denominator, z, c, c);
            // N D^{-1} = (D^{-T} N^T)^T
            let (xt, _) = linalg::solve(&den.transpose(), &num.transpose())?;
            Ok(xt.transpose())
        })
        .with_singularities(poles)
        .with_description("matrix rational function N(z) D(z)^{-1}"))
    }

    /// `z -> I - F(z)`.
    pub fn identity_minus(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("I - F needs a square function".into()));
        }
        let inner = self.clone();
        let id = linalg::identity(self.rows);
        Ok(Self::new(self.rows, self.cols, move |z| Ok(&id - inner.eval(z)?))
            .with_singularities(self.singularities.clone()))
    }

    /// `z -> F(z)^{-1}`. The singular set of the inverse (the zeros of
    /// `det F` together with those of `F`) is not known in general; callers
    /// declare it with [`OperatorFunction::with_singularities`].
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("only square functions can be inverted".into()));
        }
        let inner = self.clone();
        Ok(Self::new(self.rows, self.cols, move |z| {
            let (inv, _) = linalg::inverse(&inner.eval(z)?)?;
            Ok(inv)
        }))
    }

    /// `zeta -> F(conj(zeta))^*`, again analytic wherever `F` is.
    pub fn adjoint_reflect(&self) -> Self {
        let inner = self.clone();
        Self::new(self.cols, self.rows, move |z| Ok(inner.eval(z.conj())?.adjoint()))
            .with_singularities(self.singularities.iter().map(|s| s.conj()).collect())
    }

    /// `z -> U F(z) V` for fixed matrices.
    pub fn conjugated(&self, left: CMatrix, right: CMatrix) -> Result<Self> {
        if left.ncols() != self.rows || right.nrows() != self.cols {
            return Err(Error::Dimension("conjugating factors do not fit".into()));
        }
        let inner = self.clone();
        let (r, c) = (left.nrows(), right.ncols());
        Ok(Self::new(r, c, move |z| Ok(&left * inner.eval(z)? * &right))
            .with_singularities(self.singularities.clone()))
    }

    /// Declared singularities other than `z0` itself.
    pub fn other_singularities(&self, z0: C64) -> Vec<C64> {
        self.singularities
            .iter()
            .copied()
            .filter(|s| (s - z0).norm() > SINGULARITY_TOL * (1.0 + s.norm()))
            .collect()
    }

    /// Half the distance from `z0` to the nearest other declared
    /// singularity, capped at 1.
    pub fn default_radius(&self, z0: C64) -> f64 {
        contour::isolating_radius(z0, &self.other_singularities(z0), 0.0, 1.0)
    }

    /// Largest Frobenius norm of `F` over `nodes` equispaced points of `circle`.
    pub fn max_norm_on(&self, circle: &Circle, nodes: usize, quad: &QuadratureConfig) -> Result<f64> {
        let norms = parallel::try_map_indexed(nodes, quad.execution, |j| {
            Ok::<f64, Error>(self.eval(circle.node(j, nodes))?.norm())
        })?;
        Ok(norms.into_iter().fold(0.0, f64::max))
    }

    /// Fails if another declared singularity lies in the closed disk
    /// `|z - z0| <= eps`.
    pub fn check_isolated(&self, z0: C64, eps: f64) -> Result<()> {
        if let Some(s) = self
            .other_singularities(z0)
            .into_iter()
            .find(|s| (s - z0).norm() <= eps * (1.0 + 1e-12))
        {
            return Err(Error::Contour(format!(
                "singularity {s} lies inside C({z0}; {eps})"
            )));
        }
        Ok(())
    }
}

fn check_coefficients(coefficients: &[CMatrix]) -> Result<(usize, usize)> {
    let first = coefficients
        .first()
        .ok_or_else(|| Error::Input("polynomial needs at least one coefficient".into()))?;
    let shape = first.shape();
    for c in coefficients {
        if c.shape() != shape {
            return Err(Error::Dimension("polynomial coefficients differ in shape".into()));
        }
        linalg::ensure_finite(c)?;
    }
    Ok(shape)
}

fn horner(coefficients: &[CMatrix], z: C64, r: usize, c: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(r, c);
    for coef in coefficients.iter().rev() {
        acc = acc * z + coef;
    }
    acc
}

/// Roots of `det(sum_k C_k z^k)`, clustered at [`linalg::CLUSTER_TOL`].
///
/// The scalar determinant is interpolated on the unit circle (its degree is
/// at most `n * deg`) and the roots are the eigenvalues of the companion
/// matrix. An identically vanishing determinant is an error.
pub fn polynomial_determinant_roots(coefficients: &[CMatrix]) -> Result<Vec<C64>> {
    let (r, c) = check_coefficients(coefficients)?;
    if r != c {
        return Err(Error::Dimension("determinant needs square coefficients".into()));
    }
    let degree_bound = r * (coefficients.len() - 1);
    if degree_bound == 0 {
        return Ok(Vec::new());
    }
    let nodes = (degree_bound + 1).next_power_of_two().max(8);
    let circle = Circle::new(C64::new(0.0, 0.0), 1.0)?;
    let samples: Vec<C64> = (0..nodes)
        .map(|j| linalg::determinant(&horner(coefficients, circle.node(j, nodes), r, c)))
        .collect();
    let mut coef: Vec<C64> = (0..=degree_bound)
        .map(|k| {
            samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * circle.node(j, nodes).powi(-(k as i32)))
                .sum::<C64>()
                / nodes as f64
        })
        .collect();
    let scale = coef.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Degenerate { z0: C64::new(0.0, 0.0) });
    }
    while coef.last().is_some_and(|z| z.norm() <= 1e-12 * scale) {
        coef.pop();
    }
    let degree = coef.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coef[degree];
    let companion = CMatrix::from_fn(degree, degree, |i, j| {
        if i == 0 {
            -coef[degree - 1 - j] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let roots = linalg::eigenvalues(&companion)?;
    let tol = linalg::CLUSTER_TOL * companion.norm().max(1.0);
    Ok(linalg::cluster_points(&roots, tol).into_iter().map(|p| p.value).collect())
}

/// `M_k` for every `k` in `orders`, from one set of samples on `C(z0; eps)`.
pub fn laurent_coefficients(
    f: &OperatorFunction,
    z0: C64,
    orders: RangeInclusive<i32>,
    eps: f64,
    quad: &QuadratureConfig,
) -> Result<Vec<CMatrix>> {
    f.check_isolated(z0, eps)?;
    let circle = Circle::new(z0, eps)?;
    let (rows, cols) = f.shape();
    let orders: Vec<i32> = orders.collect();
    if orders.is_empty() {
        return Ok(Vec::new());
    }
    let stacked = contour::integrate_circle(
        |zeta| {
            let value = f.eval(zeta)?;
            let w = zeta - z0;
            let mut out = CMatrix::zeros(rows, cols * orders.len());
            for (slot, &k) in orders.iter().enumerate() {
                out.columns_mut(slot * cols, cols).copy_from(&(&value * w.powi(-k - 1)));
            }
            Ok(out)
        },
        &circle,
        quad,
    )?;
    Ok((0..orders.len())
        .map(|slot| stacked.columns(slot * cols, cols).into_owned())
        .collect())
}

/// `M_k = (1/2 pi i) \oint (zeta - z0)^{-k-1} F(zeta) d zeta`.
pub fn laurent_coefficient(
    f: &OperatorFunction,
    z0: C64,
    k: i32,
    eps: f64,
    quad: &QuadratureConfig,
) -> Result<CMatrix> {
    Ok(laurent_coefficients(f, z0, k..=k, eps, quad)?.remove(0))
}

/// Scale below which `M_{-k}` counts as zero: `tol * max|F| * eps^k`
/// (the Cauchy bound on `|M_{-k}|`).
fn negative_order_threshold(tol: f64, max_norm: f64, eps: f64, k: usize) -> f64 {
    tol * max_norm * eps.powi(k as i32)
}

/// Default probe depth for [`pole_order`].
pub fn default_probe_depth(f: &OperatorFunction) -> usize {
    4 * f.shape().0.max(1)
}

/// Order of the pole of `f` at `z0` (0 when `f` is analytic there).
///
/// `tol` is relative: `|M_{-k}|` is compared with `tol * max|F| * eps^k`.
pub fn pole_order(
    f: &OperatorFunction,
    z0: C64,
    eps: f64,
    kmax_probe: usize,
    tol: f64,
    quad: &QuadratureConfig,
) -> Result<usize> {
    Ok(pole_data(f, z0, eps, kmax_probe, tol, quad)?.0)
}

/// Pole order, the coefficients `M_{-1}, ..., M_{-N0}`, and the max norm on
/// the contour.
fn pole_data(
    f: &OperatorFunction,
    z0: C64,
    eps: f64,
    kmax_probe: usize,
    tol: f64,
    quad: &QuadratureConfig,
) -> Result<(usize, Vec<CMatrix>, f64)> {
    if kmax_probe == 0 {
        return Err(Error::Input("probe depth must be at least 1".into()));
    }
    let circle = Circle::new(z0, eps)?;
    let probe = laurent_coefficients(f, z0, -(kmax_probe as i32)..=-1, eps, quad)?;
    // probe[i] holds M_{-(kmax - i)}
    let max_norm = f.max_norm_on(&circle, quad.initial_nodes, quad)?;
    let norm_of = |k: usize| probe[kmax_probe - k].norm();
    let deepest = norm_of(kmax_probe);
    if deepest > negative_order_threshold(tol, max_norm, eps, kmax_probe) {
        return Err(Error::OrderExceedsProbe {
            probe: kmax_probe,
            norm: deepest,
        });
    }
    let order = (1..=kmax_probe)
        .rev()
        .find(|&k| norm_of(k) > negative_order_threshold(tol, max_norm, eps, k))
        .unwrap_or(0);
    let coefficients = (1..=order).map(|k| probe[kmax_probe - k].clone()).collect();
    Ok((order, coefficients, max_norm))
}

/// Truncated Laurent series `sum_{k=min_order}^{max_order} M_k (z - z0)^k`.
#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    pub center: C64,
    pub min_order: i32,
    pub coefficients: Vec<CMatrix>,
    pub radius: f64,
}

impl LaurentExpansion {
    pub fn max_order(&self) -> i32 {
        self.min_order + self.coefficients.len() as i32 - 1
    }

    pub fn coefficient(&self, k: i32) -> Option<&CMatrix> {
        if k < self.min_order {
            return None;
        }
        self.coefficients.get((k - self.min_order) as usize)
    }

    pub fn evaluate(&self, z: C64) -> CMatrix {
        let w = z - self.center;
        let (r, c) = self.coefficients[0].shape();
        let mut acc = CMatrix::zeros(r, c);
        for (i, m) in self.coefficients.iter().enumerate() {
            acc += m * w.powi(self.min_order + i as i32);
        }
        acc
    }
}

/// Laurent expansion from the pole order up to `max_order`.
pub fn laurent_expansion(
    f: &OperatorFunction,
    z0: C64,
    max_order: i32,
    eps: f64,
    quad: &QuadratureConfig,
) -> Result<LaurentExpansion> {
    let order = pole_order(f, z0, eps, default_probe_depth(f), COEFFICIENT_TOL, quad)? as i32;
    let min_order = -order;
    if max_order < min_order {
        return Err(Error::Input(format!(
            "max order {max_order} is below the pole order -{order}"
        )));
    }
    let coefficients = laurent_coefficients(f, z0, min_order..=max_order, eps, quad)?;
    Ok(LaurentExpansion {
        center: z0,
        min_order,
        coefficients,
        radius: eps,
    })
}

/// Principal part `sum_{k=1}^{N0} M_{-k} (z - z0)^{-k}` with coefficient ranks.
#[derive(Debug, Clone)]
pub struct PrincipalPart {
    pub center: C64,
    /// `M_{-1}, M_{-2}, ..., M_{-N0}`.
    pub coefficients: Vec<CMatrix>,
    pub ranks: Vec<usize>,
}

impl PrincipalPart {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn evaluate(&self, z: C64) -> Option<CMatrix> {
        let first = self.coefficients.first()?;
        let w = z - self.center;
        let mut acc = CMatrix::zeros(first.nrows(), first.ncols());
        for (i, m) in self.coefficients.iter().enumerate() {
            acc += m * w.powi(-(i as i32) - 1);
        }
        Some(acc)
    }
}

pub fn principal_part(f: &OperatorFunction, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<PrincipalPart> {
    let (_, coefficients, max_norm) = pole_data(f, z0, eps, default_probe_depth(f), COEFFICIENT_TOL, quad)?;
    let ranks = coefficients
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let threshold = negative_order_threshold(COEFFICIENT_TOL, max_norm, eps, i + 1);
            linalg::singular_values(m).iter().filter(|&&s| s > threshold).count()
        })
        .collect();
    Ok(PrincipalPart {
        center: z0,
        coefficients,
        ranks,
    })
}

/// `F'(z) = (1/2 pi i) \oint_{C(z; eps)} F(zeta) (zeta - z)^{-2} d zeta`.
pub fn derivative(f: &OperatorFunction, z: C64, eps: f64, quad: &QuadratureConfig) -> Result<CMatrix> {
    if let Some(s) = f.singularities().iter().find(|s| (*s - z).norm() <= eps) {
        return Err(Error::Contour(format!(
            "singularity {s} lies inside the derivative circle C({z}; {eps})"
        )));
    }
    derivative_unchecked(f, z, eps, quad)
}

/// As [`derivative`] without the singular-set check; used on contours whose
/// radii were already chosen against the singular set.
pub(crate) fn derivative_unchecked(f: &OperatorFunction, z: C64, eps: f64, quad: &QuadratureConfig) -> Result<CMatrix> {
    let circle = Circle::new(z, eps)?;
    contour::integrate_circle(
        |zeta| {
            let w = zeta - z;
            Ok(f.eval(zeta)? / (w * w))
        },
        &circle,
        quad,
    )
}
