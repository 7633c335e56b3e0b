//! Howland factorizations at a zero of finite type.
//!
//! Forward: `A(z) = [Q_1 - (z-z0)P_1] ... [Q_n0 - (z-z0)P_n0] A_n0(z)`.
//! Reversed: `A(z) = Ã(z) [Q̃_n0 - (z-z0)P̃_n0] ... [Q̃_1 - (z-z0)P̃_1]`,
//! obtained from the forward factorization of `B(ζ) = A(conj ζ)^*`.

use crate::analytic::{self, OperatorFunction};
use crate::contour::QuadratureConfig;
use crate::linalg::{self, CMatrix, Projector};
use crate::{Error, Result, C64};

/// Below this distance from `z0` the regular part is evaluated by its value
/// at `z0`, avoiding the `0/0` difference quotient.
const COINCIDENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct HowlandStep {
    /// Orthogonal projection onto `ran(A_{j-1}(z0))^⊥`.
    pub p_proj: Projector,
    /// `I - P`, the projection onto `ran(A_{j-1}(z0))`.
    pub q_proj: Projector,
    pub p: usize,
    pub order_index: usize,
    /// Set when the rank decision behind this step was borderline.
    pub warning: Option<String>,
}

impl HowlandStep {
    /// `Q - (z - z0) P`.
    pub fn factor(&self, z: C64, z0: C64) -> CMatrix {
        self.q_proj.matrix() - self.p_proj.matrix() * (z - z0)
    }
}

#[derive(Debug, Clone)]
pub struct HowlandFactorization {
    pub center: C64,
    /// Steps `j = 1..n0`. In a reversed factorization the factor of step 1
    /// is the rightmost.
    pub steps: Vec<HowlandStep>,
    pub regular_part: OperatorFunction,
    /// Value of the regular part at the center.
    pub regular_at_center: CMatrix,
    pub order: usize,
    pub reversed: bool,
    pub warnings: Vec<String>,
}

impl HowlandFactorization {
    pub fn p_sequence(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.p).collect()
    }

    pub fn nu(&self) -> usize {
        nu(self)
    }
}

/// `A_1(z) = Q A(z) - (z-z0)^{-1} P [A(z) - A(z0)]`, with the cached value
/// `A_1(z0)` used at the center.
fn step_function(a: &OperatorFunction, z0: C64, a_z0: CMatrix, p: &Projector, q: &Projector, a1_z0: CMatrix) -> OperatorFunction {
    let (n, _) = a.shape();
    let inner = a.clone();
    let pm = p.matrix().clone();
    let qm = q.matrix().clone();
    OperatorFunction::new(n, n, move |z| {
        let w = z - z0;
        if w.norm() <= COINCIDENT_TOL * (1.0 + z0.norm()) {
            return Ok(a1_z0.clone());
        }
        let az = inner.eval(z)?;
        Ok(&qm * &az - &pm * (&az - &a_z0) / w)
    })
    .with_singularities(a.other_singularities(z0))
}

/// Radius for the Cauchy derivative of `a` at `z0`.
fn derivative_radius(a: &OperatorFunction, z0: C64) -> f64 {
    a.default_radius(z0)
}

/// Size of `a` around `z0`, the reference for rank decisions at `z0`: a value
/// that vanishes up to rounding must not look invertible.
fn local_scale(a: &OperatorFunction, z0: C64, quad: &QuadratureConfig) -> Result<f64> {
    let radius = 0.5 * derivative_radius(a, z0);
    let circle = crate::Circle::new(z0, radius)?;
    Ok(a.max_norm_on(&circle, 16, quad)? / (a.shape().0.max(1) as f64).sqrt())
}

fn rank_decision(
    a: &OperatorFunction,
    m: &CMatrix,
    z0: C64,
    rtol: f64,
    quad: &QuadratureConfig,
    what: &str,
) -> Result<(usize, f64, Option<String>)> {
    let scale = local_scale(a, z0, quad)?;
    let (rank, sigma) = linalg::numerical_rank_scaled(m, rtol, scale)?;
    let warning = linalg::rank_is_borderline_scaled(&sigma, rtol, scale).then(|| {
        format!(
            "{what}: rank decision is borderline (singular values {:.3e})",
            sigma.iter().copied().fold(f64::INFINITY, f64::min)
        )
    });
    Ok((rank, scale, warning))
}

/// One Howland step at `z0`, given `A(z0)`. Returns the step, `A_1` and
/// `A_1(z0)`.
fn step_from_value(
    a: &OperatorFunction,
    z0: C64,
    a_z0: CMatrix,
    rtol: f64,
    order_index: usize,
    quad: &QuadratureConfig,
) -> Result<(HowlandStep, OperatorFunction, CMatrix)> {
    let n = a.shape().0;
    let (rank, scale, warning) = rank_decision(a, &a_z0, z0, rtol, quad, &format!("step {order_index}"))?;
    if rank == n {
        return Err(Error::NoZero { z0 });
    }
    let range = linalg::range_basis_scaled(&a_z0, rtol, scale)?;
    let q = linalg::orth_projector(&range);
    let p = q.complement();
    let derivative = analytic::derivative_unchecked(a, z0, derivative_radius(a, z0), quad)?;
    let a1_z0 = q.matrix() * &a_z0 - p.matrix() * derivative;
    let a1 = step_function(a, z0, a_z0.clone(), &p, &q, a1_z0.clone());
    let step = HowlandStep {
        p: n - rank,
        p_proj: p,
        q_proj: q,
        order_index,
        warning,
    };
    Ok((step, a1, a1_z0))
}

/// A single Howland step: `A(z) = [Q_1 - (z-z0)P_1] A_1(z)`.
pub fn howland_step(a: &OperatorFunction, z0: C64, rtol: f64) -> Result<(HowlandStep, OperatorFunction)> {
    check_square(a)?;
    let a_z0 = a.eval(z0)?;
    let (step, a1, _) = step_from_value(a, z0, a_z0, rtol, 1, &QuadratureConfig::default())?;
    Ok((step, a1))
}

fn check_square(a: &OperatorFunction) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension("Howland factorization needs a square function".into()));
    }
    Ok(())
}

pub fn default_max_steps(a: &OperatorFunction) -> usize {
    8 * a.shape().0.max(1)
}

/// Iterated Howland factorization.
pub fn howland_factorize(a: &OperatorFunction, z0: C64, rtol: f64, max_steps: usize) -> Result<HowlandFactorization> {
    howland_factorize_with(a, z0, rtol, max_steps, &QuadratureConfig::default())
}

pub fn howland_factorize_with(
    a: &OperatorFunction,
    z0: C64,
    rtol: f64,
    max_steps: usize,
    quad: &QuadratureConfig,
) -> Result<HowlandFactorization> {
    check_square(a)?;
    let n = a.shape().0;
    let mut current = a.clone();
    let mut value = a.eval(z0)?;
    let (rank, _, _) = rank_decision(a, &value, z0, rtol, quad, "A(z0)")?;
    if rank == n {
        return Err(Error::NoZero { z0 });
    }
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    loop {
        let (rank, _, warning) = rank_decision(&current, &value, z0, rtol, quad, "regular part")?;
        if rank == n {
            if let Some(w) = warning {
                warnings.push(w);
            }
            break;
        }
        if steps.len() == max_steps {
            return Err(Error::NotFiniteType { steps: max_steps });
        }
        let (step, next, next_value) = step_from_value(&current, z0, value, rtol, steps.len() + 1, quad)?;
        if let Some(w) = &step.warning {
            warnings.push(w.clone());
        }
        steps.push(step);
        current = next;
        value = next_value;
    }
    Ok(HowlandFactorization {
        center: z0,
        order: steps.len(),
        steps,
        regular_part: current.with_description("Howland regular part"),
        regular_at_center: value,
        reversed: false,
        warnings,
    })
}

/// Reversed-order factorization via the forward factorization of
/// `B(ζ) = A(conj ζ)^*` at `conj z0`.
pub fn reversed_factorize(a: &OperatorFunction, z0: C64, rtol: f64, max_steps: usize) -> Result<HowlandFactorization> {
    reversed_factorize_with(a, z0, rtol, max_steps, &QuadratureConfig::default())
}

pub fn reversed_factorize_with(
    a: &OperatorFunction,
    z0: C64,
    rtol: f64,
    max_steps: usize,
    quad: &QuadratureConfig,
) -> Result<HowlandFactorization> {
    check_square(a)?;
    let b = a.adjoint_reflect();
    let forward = howland_factorize_with(&b, z0.conj(), rtol, max_steps, quad)?;
    let steps = forward
        .steps
        .into_iter()
        .map(|s| HowlandStep {
            p_proj: Projector::new(s.p_proj.into_matrix().adjoint(), true).expect("adjoint of an orthogonal projection"),
            q_proj: Projector::new(s.q_proj.into_matrix().adjoint(), true).expect("adjoint of an orthogonal projection"),
            ..s
        })
        .collect();
    Ok(HowlandFactorization {
        center: z0,
        steps,
        regular_part: forward.regular_part.adjoint_reflect().with_description("reversed Howland regular part"),
        regular_at_center: forward.regular_at_center.adjoint(),
        order: forward.order,
        reversed: true,
        warnings: forward.warnings,
    })
}

/// `ν(z0; A) = Σ p_j`.
pub fn nu(f: &HowlandFactorization) -> usize {
    f.steps.iter().map(|s| s.p).sum()
}

/// Result of the simple-pole test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplePole {
    pub simple: bool,
    pub nu: usize,
    pub mg: usize,
}

/// `A^{-1}` has a simple pole at `z0` iff `ν = dim ker A(z0)`.
pub fn is_simple_pole(a: &OperatorFunction, z0: C64, rtol: f64) -> Result<SimplePole> {
    let f = howland_factorize(a, z0, rtol, default_max_steps(a))?;
    let nu = nu(&f);
    let mg = f.steps[0].p;
    Ok(SimplePole { simple: nu == mg, nu, mg })
}

/// Evaluates the product representation at `z`.
pub fn reconstruct(f: &HowlandFactorization, z: C64) -> Result<CMatrix> {
    let regular = if (z - f.center).norm() <= COINCIDENT_TOL * (1.0 + f.center.norm()) {
        f.regular_at_center.clone()
    } else {
        f.regular_part.eval(z)?
    };
    if f.reversed {
        let mut acc = regular;
        for step in f.steps.iter().rev() {
            acc *= step.factor(z, f.center);
        }
        Ok(acc)
    } else {
        let mut acc = regular;
        for step in f.steps.iter().rev() {
            acc = step.factor(z, f.center) * acc;
        }
        Ok(acc)
    }
}

/// `|det[Q_j - (z-z0)P_j] - (z0 - z)^{p_j}|` for each step.
pub fn step_determinant_residuals(f: &HowlandFactorization, z: C64) -> Vec<f64> {
    f.steps
        .iter()
        .map(|s| (linalg::determinant(&s.factor(z, f.center)) - (f.center - z).powi(s.p as i32)).norm())
        .collect()
}
