//! Birman-Schwinger operators for `H = H0 + V2^* V1` and the multiplicity
//! identities relating `H` to `K(z) = -V1 (H0 - z)^{-1} V2^*`.

use serde::Serialize;

use crate::analytic::OperatorFunction;
use crate::contour::{self, QuadratureConfig};
use crate::factorization;
use crate::linalg::{self, CMatrix, SpectralPoint};
use crate::multiplicity::{self, MultiplicityReport};
use crate::{parallel, Error, Result, C64, DEFAULT_RTOL};

/// Relative tolerance for eigenvector and fixed-point checks.
pub const VECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    h0: CMatrix,
    v1: CMatrix,
    v2: CMatrix,
    h: CMatrix,
    spectrum_h0: Vec<SpectralPoint>,
    spectrum_h: Vec<SpectralPoint>,
}

impl PerturbationProblem {
    pub fn new(h0: CMatrix, v1: CMatrix, v2: CMatrix) -> Result<Self> {
        if !h0.is_square() {
            return Err(Error::Dimension("H0 must be square".into()));
        }
        let n = h0.nrows();
        if v1.ncols() != n || v2.ncols() != n || v1.nrows() != v2.nrows() {
            return Err(Error::Dimension(format!(
                "V1 ({}x{}) and V2 ({}x{}) must both be n_K x {n}",
                v1.nrows(),
                v1.ncols(),
                v2.nrows(),
                v2.ncols()
            )));
        }
        for m in [&h0, &v1, &v2] {
            linalg::ensure_finite(m)?;
        }
        let h = &h0 + v2.adjoint() * &v1;
        let spectrum_h0 = linalg::spectrum(&h0)?;
        let spectrum_h = linalg::spectrum(&h)?;
        Ok(Self {
            h0,
            v1,
            v2,
            h,
            spectrum_h0,
            spectrum_h,
        })
    }

    pub fn h0(&self) -> &CMatrix {
        &self.h0
    }

    pub fn v1(&self) -> &CMatrix {
        &self.v1
    }

    pub fn v2(&self) -> &CMatrix {
        &self.v2
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn dim_h(&self) -> usize {
        self.h0.nrows()
    }

    pub fn dim_k(&self) -> usize {
        self.v1.nrows()
    }

    pub fn spectrum_h0(&self) -> &[SpectralPoint] {
        &self.spectrum_h0
    }

    pub fn spectrum_h(&self) -> &[SpectralPoint] {
        &self.spectrum_h
    }

    /// Whether `H` is self-adjoint. Reported, never required.
    pub fn is_self_adjoint(&self) -> bool {
        (&self.h - self.h.adjoint()).norm() <= 1e-12 * self.h.norm().max(1.0)
    }

    fn cluster_tol(&self) -> f64 {
        linalg::CLUSTER_TOL * self.h0.norm().max(self.h.norm()).max(1.0)
    }

    fn near(points: &[SpectralPoint], z: C64, tol: f64) -> bool {
        points.iter().any(|p| (p.value - z).norm() <= tol)
    }

    pub fn in_spectrum_h0(&self, z: C64) -> bool {
        Self::near(&self.spectrum_h0, z, self.cluster_tol())
    }

    pub fn in_spectrum_h(&self, z: C64) -> bool {
        Self::near(&self.spectrum_h, z, self.cluster_tol())
    }

    /// Points of `σ(H0) ∪ σ(H)`, merged at the clustering tolerance.
    pub fn union_points(&self) -> Vec<C64> {
        let mut all: Vec<C64> = self.spectrum_h0.iter().map(|p| p.value).collect();
        all.extend(self.spectrum_h.iter().map(|p| p.value));
        linalg::cluster_points(&all, self.cluster_tol())
            .into_iter()
            .map(|p| p.value)
            .collect()
    }

    /// Eigenvalues of `H` outside `σ(H0)`.
    pub fn new_eigenvalues(&self) -> Vec<C64> {
        self.spectrum_h
            .iter()
            .map(|p| p.value)
            .filter(|&z| !self.in_spectrum_h0(z))
            .collect()
    }

    /// Eigenvalues shared by `H0` and `H`.
    pub fn shared_eigenvalues(&self) -> Vec<C64> {
        self.spectrum_h
            .iter()
            .map(|p| p.value)
            .filter(|&z| self.in_spectrum_h0(z))
            .collect()
    }

    /// Half the distance from `z0` to the rest of `σ(H0) ∪ σ(H)`, capped at 1.
    pub fn default_radius(&self, z0: C64) -> f64 {
        contour::isolating_radius(z0, &self.union_points(), self.cluster_tol(), 1.0)
    }

    fn check_resolvent_point(&self, z: C64) -> Result<()> {
        if self
            .spectrum_h0
            .iter()
            .any(|p| (p.value - z).norm() <= crate::analytic::SINGULARITY_TOL * (1.0 + p.value.norm()))
        {
            return Err(Error::Domain { z });
        }
        Ok(())
    }

    /// `(H0 - z)^{-1} B` by a linear solve.
    fn r0_times(&self, z: C64, b: &CMatrix) -> Result<CMatrix> {
        self.check_resolvent_point(z)?;
        let shifted = &self.h0 - linalg::identity(self.dim_h()) * z;
        let (x, _) = linalg::solve(&shifted, b).map_err(|e| match e {
            Error::Singular { .. } => Error::Domain { z },
            e => e,
        })?;
        Ok(x)
    }

    /// `K(z) = -V1 (H0 - z)^{-1} V2^*`.
    pub fn k(&self, z: C64) -> Result<CMatrix> {
        Ok(-(&self.v1 * self.r0_times(z, &self.v2.adjoint())?))
    }

    /// `K(·)` with singular set `σ(H0)`.
    pub fn bs_operator(&self) -> OperatorFunction {
        let this = self.clone();
        let nk = self.dim_k();
        OperatorFunction::new(nk, nk, move |z| this.k(z))
            .with_singularities(self.spectrum_h0.iter().map(|p| p.value).collect())
            .with_description("Birman-Schwinger operator K(z)")
    }

    /// `I - K(·)`.
    pub fn identity_minus_k(&self) -> OperatorFunction {
        self.bs_operator()
            .identity_minus()
            .expect("K is square")
            .with_description("I - K(z)")
    }

    /// `R(z) = R0 - R0 V2^* [I - K(z)]^{-1} V1 R0`.
    pub fn resolvent(&self, z: C64) -> Result<CMatrix> {
        let n = self.dim_h();
        let r0 = self.r0_times(z, &linalg::identity(n))?;
        let m = linalg::identity(self.dim_k()) - self.k(z)?;
        let (x, _) = linalg::solve(&m, &(&self.v1 * &r0)).map_err(|e| match e {
            Error::Singular { rcond } => Error::BirmanSchwingerSingular { z, rcond },
            e => e,
        })?;
        Ok(&r0 - &r0 * self.v2.adjoint() * x)
    }

    /// `(H - z)^{-1}` by direct inversion.
    pub fn direct_resolvent(&self, z: C64) -> Result<CMatrix> {
        let (inv, _) = linalg::inverse(&(&self.h - linalg::identity(self.dim_h()) * z))?;
        Ok(inv)
    }

    /// Relative residual of `I - V1 R(z) V2^* = [I - K(z)]^{-1}`.
    pub fn symmetric_identity_check(&self, z: C64) -> Result<f64> {
        let nk = self.dim_k();
        let lhs = linalg::identity(nk) - &self.v1 * self.direct_resolvent(z)? * self.v2.adjoint();
        let m = linalg::identity(nk) - self.k(z)?;
        let (rhs, _) = linalg::inverse(&m).map_err(|e| match e {
            Error::Singular { rcond } => Error::BirmanSchwingerSingular { z, rcond },
            e => e,
        })?;
        Ok(linalg::relative_residual(&lhs, &rhs))
    }

    /// Ranks of `H - z` and `I - K(z)` with their borderline flags. The
    /// thresholds are relative to `|H| + |z|` and `1 + |K(z)|`, so that an
    /// operator vanishing up to rounding has rank zero.
    fn ranks(&self, z: C64, rtol: f64) -> Result<((usize, bool), (usize, bool))> {
        let n = self.dim_h();
        let nk = self.dim_k();
        let k = self.k(z)?;
        let scale_h = self.h.norm() / (n as f64).sqrt() + z.norm();
        let scale_k = 1.0 + k.norm() / (nk as f64).sqrt();
        let (rh, sh) = linalg::numerical_rank_scaled(&(&self.h - linalg::identity(n) * z), rtol, scale_h)?;
        let (rk, sk) = linalg::numerical_rank_scaled(&(linalg::identity(nk) - k), rtol, scale_k)?;
        Ok((
            (rh, linalg::rank_is_borderline_scaled(&sh, rtol, scale_h)),
            (rk, linalg::rank_is_borderline_scaled(&sk, rtol, scale_k)),
        ))
    }

    /// Rank tests for `H - z` and `I - K(z)` at `rtol`.
    pub fn detector(&self, z: C64, rtol: f64) -> Result<(bool, bool)> {
        let ((rh, _), (rk, _)) = self.ranks(z, rtol)?;
        Ok((rh < self.dim_h(), rk < self.dim_k()))
    }

    fn eigen_residual(&self, f: &CMatrix, z0: C64) -> f64 {
        let r = &self.h * f - f * z0;
        r.norm() / (f.norm() * self.h.norm().max(1.0)).max(f64::MIN_POSITIVE)
    }

    /// `g = V1 f / (z0 - z1)` for an eigenvector `H f = z0 f`, with the
    /// alternative form `[I - K(z1)]^{-1} V1 R0(z1) f` evaluated as a check.
    pub fn eigenvector_transfer_forward(&self, z0: C64, f: &CMatrix, z1: C64) -> Result<Transfer> {
        let residual = self.eigen_residual(f, z0);
        if f.norm() == 0.0 || residual > VECTOR_TOL {
            return Err(Error::Input(format!(
                "f is not an eigenvector of H at {z0} (residual {residual:.3e})"
            )));
        }
        if (z1 - z0).norm() == 0.0 {
            return Err(Error::Input("z1 must differ from z0".into()));
        }
        let g = &self.v1 * f / (z0 - z1);
        let m = linalg::identity(self.dim_k()) - self.k(z1)?;
        let (alt, _) = linalg::solve(&m, &(&self.v1 * self.r0_times(z1, f)?)).map_err(|e| match e {
            Error::Singular { rcond } => Error::BirmanSchwingerSingular { z: z1, rcond },
            e => e,
        })?;
        let kg = self.k(z0)? * &g;
        Ok(Transfer {
            formula_residual: linalg::relative_residual(&alt, &g),
            check_residual: scaled_residual(&kg, &g),
            vector: g,
        })
    }

    /// `f = -R0(z0) V2^* g` for a fixed point `K(z0) g = g`.
    pub fn eigenvector_transfer_backward(&self, z0: C64, g: &CMatrix) -> Result<Transfer> {
        let k = self.k(z0)?;
        let kg = &k * g;
        let residual = scaled_residual(&kg, g) / k.norm().max(1.0);
        if g.norm() == 0.0 || residual > VECTOR_TOL {
            return Err(Error::Input(format!(
                "g is not a fixed point of K({z0}) (residual {residual:.3e})"
            )));
        }
        let f = -self.r0_times(z0, &(self.v2.adjoint() * g))?;
        Ok(Transfer {
            check_residual: self.eigen_residual(&f, z0),
            formula_residual: 0.0,
            vector: f,
        })
    }

    /// `m_g(z0; H) = m_g(1; K(z0))` for `z0` in the resolvent set of `H0`.
    pub fn check_geometric(&self, z0: C64) -> Result<GeometricCheck> {
        self.require_resolvent_point(z0)?;
        let n = self.dim_h();
        let nk = self.dim_k();
        let ((rh, bh), (rk, bk)) = self.ranks(z0, DEFAULT_RTOL)?;
        let borderline = bh || bk;
        Ok(GeometricCheck {
            mg_h: n - rh,
            mg_k: nk - rk,
            ok: n - rh == nk - rk,
            borderline,
        })
    }

    fn require_resolvent_point(&self, z0: C64) -> Result<()> {
        if self.in_spectrum_h0(z0) {
            return Err(Error::Input(format!(
                "{z0} lies in the spectrum of H0; use the Weinstein-Aronszajn check"
            )));
        }
        Ok(())
    }

    /// `m_a(z0; H)` (Riesz trace) = `m_a(z0; I - K)` (argument principle) =
    /// `ν(z0; I - K)` (Howland), plus the multiplicities of the eigenvalue 1
    /// of `K(z0)` for information.
    pub fn check_algebraic(&self, z0: C64, eps: Option<f64>, quad: &QuadratureConfig) -> Result<AlgebraicCheck> {
        self.require_resolvent_point(z0)?;
        let eps = eps.unwrap_or_else(|| self.default_radius(z0));
        let ma_h = multiplicity::riesz_multiplicity(&self.h, z0, eps, quad)?;
        let i_minus_k = self.identity_minus_k();
        let ma_bs = multiplicity::algebraic_multiplicity(&i_minus_k, z0, eps, quad)?;
        let nu = if self.in_spectrum_h(z0) {
            let f = factorization::howland_factorize_with(
                &i_minus_k,
                z0,
                DEFAULT_RTOL,
                factorization::default_max_steps(&i_minus_k),
                quad,
            )?;
            factorization::nu(&f)
        } else {
            0
        };
        let k0 = self.k(z0)?;
        let (ma_k1, mg_k1) = eigen_one_multiplicities(&k0, quad)?;
        let ok = ma_h.value == ma_bs.value && ma_bs.value == nu as i64;
        Ok(AlgebraicCheck {
            eps,
            ma_h,
            ma_bs,
            nu,
            ma_k1,
            mg_k1,
            ok,
        })
    }

    /// `m_a(z0; H) = m_a(z0; H0) + ind_{C(z0; eps)}(I - K)`.
    pub fn weinstein_aronszajn(&self, z0: C64, eps: Option<f64>, quad: &QuadratureConfig) -> Result<WACheck> {
        if !self.in_spectrum_h0(z0) && !self.in_spectrum_h(z0) {
            return Err(Error::Input(format!("{z0} lies in neither spectrum")));
        }
        let eps = eps.unwrap_or_else(|| self.default_radius(z0));
        let ma_h = multiplicity::riesz_multiplicity(&self.h, z0, eps, quad)?;
        let ma_h0 = multiplicity::riesz_multiplicity(&self.h0, z0, eps, quad)?;
        let index = multiplicity::meromorphic_index(&self.identity_minus_k(), z0, eps, quad)?;
        let ok = ma_h.value == ma_h0.value + index.value;
        Ok(WACheck {
            eps,
            ma_h,
            ma_h0,
            index,
            ok,
        })
    }

    /// Weinstein-Aronszajn checks at every point of `σ(H0) ∪ σ(H)`.
    pub fn multiplicity_balance(&self, quad: &QuadratureConfig) -> Result<Balance> {
        let points = self.union_points();
        let checks = parallel::try_map_indexed(points.len(), quad.execution, |i| {
            self.weinstein_aronszajn(points[i], None, quad)
        })?;
        let total: i64 = checks.iter().map(|c| c.ma_h.value - c.ma_h0.value).sum();
        Ok(Balance { checks, total })
    }

    /// Runs every applicable identity at `z0`.
    pub fn verdict(&self, z0: C64, eps: Option<f64>, quad: &QuadratureConfig) -> Result<BSVerdict> {
        let mut v = BSVerdict {
            z0,
            ..BSVerdict::default()
        };
        if self.in_spectrum_h0(z0) {
            let wa = self.weinstein_aronszajn(z0, eps, quad)?;
            v.wa_ok = Some(wa.ok);
            v.ma_h = Some(wa.ma_h);
            v.ma_h0 = Some(wa.ma_h0);
            v.wa_index = Some(wa.index);
        } else {
            let g = self.check_geometric(z0)?;
            v.mg_h = Some(g.mg_h);
            v.mg_k = Some(g.mg_k);
            v.geometric_ok = Some(g.ok);
            let a = self.check_algebraic(z0, eps, quad)?;
            v.ma_h = Some(a.ma_h);
            v.ma_bs = Some(a.ma_bs);
            v.nu = Some(a.nu);
            v.ma_k1 = Some(a.ma_k1);
            v.mg_k1 = Some(a.mg_k1);
            v.algebraic_ok = Some(a.ok);
        }
        Ok(v)
    }
}

fn scaled_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE)
}

/// Algebraic and geometric multiplicity of the eigenvalue 1 of `k`.
fn eigen_one_multiplicities(k: &CMatrix, quad: &QuadratureConfig) -> Result<(usize, usize)> {
    let nk = k.nrows();
    let one = C64::new(1.0, 0.0);
    let tol = linalg::CLUSTER_TOL * k.norm().max(1.0);
    let points = linalg::spectrum(k)?;
    let others: Vec<C64> = points.iter().map(|p| p.value).collect();
    let eps = contour::isolating_radius(one, &others, tol, 1.0);
    let ma = contour::riesz_projection(k, one, eps, quad)?.rank;
    let scale = 1.0 + k.norm() / (nk.max(1) as f64).sqrt();
    let (rank, _) = linalg::numerical_rank_scaled(&(linalg::identity(nk) - k), DEFAULT_RTOL, scale)?;
    Ok((ma, nk - rank))
}

/// Output of an eigenvector transfer. `formula_residual` compares the two
/// equivalent formulas (forward only); `check_residual` measures the target
/// property (`K(z0) g = g`, respectively `H f = z0 f`).
#[derive(Debug, Clone)]
pub struct Transfer {
    pub vector: CMatrix,
    pub formula_residual: f64,
    pub check_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeometricCheck {
    pub mg_h: usize,
    pub mg_k: usize,
    pub ok: bool,
    pub borderline: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicCheck {
    pub eps: f64,
    pub ma_h: MultiplicityReport,
    pub ma_bs: MultiplicityReport,
    pub nu: usize,
    /// `m_a(1; K(z0))`, informational.
    pub ma_k1: usize,
    /// `m_g(1; K(z0))`, informational.
    pub mg_k1: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WACheck {
    pub eps: f64,
    pub ma_h: MultiplicityReport,
    pub ma_h0: MultiplicityReport,
    pub index: MultiplicityReport,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Balance {
    pub checks: Vec<WACheck>,
    /// `Σ (m_a(H) - m_a(H0))` over all points; zero at finite dimension.
    pub total: i64,
}

impl Balance {
    pub fn ok(&self) -> bool {
        self.total == 0 && self.checks.iter().all(|c| c.ok)
    }
}

/// Collected identities at one point. Fields that do not apply at `z0` are
/// `None`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BSVerdict {
    pub z0: C64,
    pub mg_h: Option<usize>,
    pub mg_k: Option<usize>,
    pub geometric_ok: Option<bool>,
    pub ma_h: Option<MultiplicityReport>,
    pub ma_bs: Option<MultiplicityReport>,
    pub nu: Option<usize>,
    pub algebraic_ok: Option<bool>,
    pub ma_h0: Option<MultiplicityReport>,
    pub wa_index: Option<MultiplicityReport>,
    pub wa_ok: Option<bool>,
    pub ma_k1: Option<usize>,
    pub mg_k1: Option<usize>,
}

impl BSVerdict {
    pub fn ok(&self) -> bool {
        [self.geometric_ok, self.algebraic_ok, self.wa_ok]
            .into_iter()
            .flatten()
            .all(|b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, from_real_rows, identity};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn example_i() -> PerturbationProblem {
        PerturbationProblem::new(
            from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
            from_real_rows(&[&[0.0, 0.0], &[-1.0, -2.0]]),
            identity(2),
        )
        .unwrap()
    }

    fn example_ii() -> PerturbationProblem {
        PerturbationProblem::new(
            from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
            from_real_rows(&[&[0.0, -1.0], &[1.0, -1.0]]),
            identity(2),
        )
        .unwrap()
    }

    fn column(v: &[f64]) -> CMatrix {
        CMatrix::from_iterator(v.len(), 1, v.iter().map(|&x| c(x)))
    }

    #[test]
    fn perturbed_operators() {
        assert!((example_i().h() - from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]])).norm() == 0.0);
        assert!((example_ii().h() - from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]])).norm() == 0.0);
    }

    #[test]
    fn bs_operator_values() {
        let k = example_i().bs_operator().eval(c(0.0)).unwrap();
        assert!((k - from_real_rows(&[&[0.0, 0.0], &[1.0, 1.0]])).norm() < 1e-14);
        let k = example_ii().bs_operator().eval(c(0.0)).unwrap();
        assert!((k - from_real_rows(&[&[0.0, 1.0], &[-1.0, 2.0]])).norm() < 1e-14);
        let zero_v = PerturbationProblem::new(identity(2), CMatrix::zeros(1, 2), CMatrix::zeros(1, 2)).unwrap();
        assert!(zero_v.k(c(3.0)).unwrap().norm() == 0.0);
        assert!(matches!(example_i().bs_operator().eval(c(1.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn resolvent_formula() {
        let p = example_i();
        let r = p.resolvent(c(-1.0)).unwrap();
        let direct = p.direct_resolvent(c(-1.0)).unwrap();
        assert!(linalg::relative_residual(&r, &direct) < 1e-10);
        assert!(p.symmetric_identity_check(c(-1.0)).unwrap() < 1e-10);
        assert!(matches!(
            example_ii().resolvent(c(0.0)),
            Err(Error::BirmanSchwingerSingular { .. })
        ));
        let free = PerturbationProblem::new(diag(&[c(1.0), c(2.0)]), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        let r = free.resolvent(c(0.5)).unwrap();
        assert!((r - diag(&[c(2.0), c(2.0 / 3.0)])).norm() < 1e-14);
        assert_eq!(free.symmetric_identity_check(c(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn eigenvector_transfers() {
        for (p, f) in [(example_i(), column(&[1.0, -1.0])), (example_ii(), column(&[0.0, 1.0]))] {
            let z1 = c(-1.0);
            let t = p.eigenvector_transfer_forward(c(0.0), &f, z1).unwrap();
            assert!(t.formula_residual < 1e-10 && t.check_residual < 1e-10);
            let k0 = p.k(c(0.0)).unwrap();
            assert!((&k0 * &t.vector - &t.vector).norm() < 1e-12);
            let back = p.eigenvector_transfer_backward(c(0.0), &t.vector).unwrap();
            assert!(back.check_residual < 1e-10);
            // backward(forward(f)) = f / (z0 - z1)
            assert!((&back.vector - &f / (c(0.0) - z1)).norm() < 1e-12);
            let scaled = p.eigenvector_transfer_forward(c(0.0), &(&f * c(3.0)), z1).unwrap();
            assert!((scaled.vector - &t.vector * c(3.0)).norm() < 1e-12);
        }
        let p = example_i();
        assert!(matches!(
            p.eigenvector_transfer_forward(c(0.0), &column(&[1.0, 0.0]), c(-1.0)),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            p.eigenvector_transfer_backward(c(0.0), &column(&[1.0, 0.0])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn worked_examples() {
        let v = example_i().verdict(c(0.0), None, &q()).unwrap();
        assert!(v.ok());
        assert_eq!((v.mg_h, v.mg_k), (Some(1), Some(1)));
        assert_eq!(v.ma_h.as_ref().unwrap().value, 2);
        assert_eq!(v.ma_bs.as_ref().unwrap().value, 2);
        assert_eq!(v.nu, Some(2));
        assert_eq!((v.ma_k1, v.mg_k1), (Some(1), Some(1)));

        let v = example_ii().verdict(c(0.0), None, &q()).unwrap();
        assert!(v.ok());
        assert_eq!((v.mg_h, v.mg_k), (Some(1), Some(1)));
        assert_eq!(v.ma_h.as_ref().unwrap().value, 1);
        assert_eq!(v.nu, Some(1));
        assert_eq!((v.ma_k1, v.mg_k1), (Some(2), Some(1)));
    }

    #[test]
    fn diagonal_problem() {
        let p = PerturbationProblem::new(diag(&[c(1.0), c(2.0)]), diag(&[c(-1.0), c(0.0)]), identity(2)).unwrap();
        let a = p.check_algebraic(c(0.0), None, &q()).unwrap();
        assert_eq!((a.ma_h.value, a.ma_bs.value, a.nu), (1, 1, 1));
        let g = p.check_geometric(c(5.0)).unwrap();
        assert_eq!((g.mg_h, g.mg_k, g.ok), (0, 0, true));
        assert!(matches!(p.check_geometric(c(1.0)), Err(Error::Input(_))));
    }

    #[test]
    fn weinstein_aronszajn_cases() {
        let s = 0.5;
        let v = diag(&[c(s), c(0.0)]);
        let p = PerturbationProblem::new(diag(&[c(0.0), c(1.0)]), v.clone(), v).unwrap();
        let wa = p.weinstein_aronszajn(c(0.0), Some(0.2), &q()).unwrap();
        assert_eq!((wa.ma_h.value, wa.ma_h0.value, wa.index.value), (0, 1, -1));
        assert!(wa.ok);

        let free = PerturbationProblem::new(diag(&[c(0.0), c(1.0)]), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        let wa = free.weinstein_aronszajn(c(0.0), None, &q()).unwrap();
        assert_eq!((wa.ma_h.value, wa.index.value), (1, 0));

        let eta = 1e-3;
        let jordan = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let p = PerturbationProblem::new(jordan, diag(&[c(0.0), c(eta)]), identity(2)).unwrap();
        for z0 in p.union_points() {
            assert!(p.weinstein_aronszajn(z0, None, &q()).unwrap().ok);
        }
        let balance = p.multiplicity_balance(&q()).unwrap();
        assert!(balance.ok());
        assert!(matches!(p.weinstein_aronszajn(c(5.0), None, &q()), Err(Error::Input(_))));
    }

    #[test]
    fn detector_agrees_on_examples() {
        let p = example_i();
        assert_eq!(p.detector(c(0.0), 1e-10).unwrap(), (true, true));
        assert_eq!(p.detector(c(-1.0), 1e-10).unwrap(), (false, false));
    }
}
