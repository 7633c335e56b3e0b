//! Index, trace and spectral-shift identities for pairs of orthogonal
//! projections.

use serde::Serialize;

use crate::analytic::OperatorFunction;
use crate::contour::{self, QuadratureConfig};
use crate::linalg::{self, CMatrix, Projector};
use crate::multiplicity::{self, MultiplicityReport};
use crate::{Error, Result, C64};

/// Rank tolerance for reading off ranges and kernels of projections, whose
/// singular values are 0 or 1.
const PROJECTION_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ProjectionPair {
    p: Projector,
    q: Projector,
}

impl ProjectionPair {
    pub fn new(p: CMatrix, q: CMatrix) -> Result<Self> {
        if p.shape() != q.shape() {
            return Err(Error::Dimension(format!(
                "P is {}x{} but Q is {}x{}",
                p.nrows(),
                p.ncols(),
                q.nrows(),
                q.ncols()
            )));
        }
        Ok(Self {
            p: Projector::new(p, true)?,
            q: Projector::new(q, true)?,
        })
    }

    pub fn p(&self) -> &CMatrix {
        self.p.matrix()
    }

    pub fn q(&self) -> &CMatrix {
        self.q.matrix()
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// The pair `(Q, P)`.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// `(U P U^*, U Q U^*)` for a unitary `U`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        let conj = |m: &CMatrix| {
            let x = u * m * u.adjoint();
            (&x + x.adjoint()) * C64::new(0.5, 0.0)
        };
        Self::new(conj(self.p()), conj(self.q()))
    }

    fn difference(&self) -> CMatrix {
        self.p() - self.q()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairIndexReport {
    /// `dim(ran P ∩ ker Q)`.
    pub m1: usize,
    /// `dim(ker P ∩ ran Q)`.
    pub m_minus1: usize,
    pub index: i64,
}

/// `ind(P, Q) = m1 - m_{-1}` from principal angles between explicit bases.
pub fn pair_index(pp: &ProjectionPair, rtol: f64) -> Result<PairIndexReport> {
    let ran_p = linalg::range_basis(pp.p(), PROJECTION_RANK_TOL)?;
    let ker_p = linalg::kernel_basis(pp.p(), PROJECTION_RANK_TOL)?;
    let ran_q = linalg::range_basis(pp.q(), PROJECTION_RANK_TOL)?;
    let ker_q = linalg::kernel_basis(pp.q(), PROJECTION_RANK_TOL)?;
    let m1 = linalg::subspace_intersection_dim(&ran_p, &ker_q, rtol)?;
    let m_minus1 = linalg::subspace_intersection_dim(&ker_p, &ran_q, rtol)?;
    Ok(PairIndexReport {
        m1,
        m_minus1,
        index: m1 as i64 - m_minus1 as i64,
    })
}

/// `tr((P - Q)^{2n+1})`.
pub fn trace_odd_power(pp: &ProjectionPair, n: u32) -> C64 {
    let d = pp.difference();
    let d2 = &d * &d;
    let mut acc = d;
    for _ in 0..n {
        acc = &d2 * acc;
    }
    linalg::trace(&acc)
}

fn check_not_zero_one(z: C64) -> Result<()> {
    if z.norm() <= 1e-12 || (z - 1.0).norm() <= 1e-12 {
        return Err(Error::Domain { z });
    }
    Ok(())
}

/// `det((P - z)(Q - z)^{-1})`.
pub fn perturbation_determinant(pp: &ProjectionPair, z: C64) -> Result<C64> {
    check_not_zero_one(z)?;
    let id = linalg::identity(pp.dim());
    let (qi, _) = linalg::inverse(&(pp.q() - &id * z))?;
    Ok(linalg::determinant(&((pp.p() - &id * z) * qi)))
}

/// `((z - 1)/z)^index`.
pub fn perturbation_determinant_closed_form(index: i64, z: C64) -> C64 {
    ((z - 1.0) / z).powi(index as i32)
}

/// The spectral shift function of a pair: `index` on `[0, 1]`, zero
/// elsewhere, with the trace and norm checks it satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralShift {
    /// Value on `[0, 1]`.
    pub value: i64,
    /// `∫ ξ`.
    pub integral: f64,
    pub trace_difference: C64,
    /// `|∫ξ - tr(P - Q)|`.
    pub trace_residual: f64,
    /// `∫|ξ|`.
    pub total_variation: f64,
    /// `Σ σ_i(P - Q)`.
    pub nuclear_norm: f64,
}

impl SpectralShift {
    pub fn at(&self, lambda: f64) -> i64 {
        if (0.0..=1.0).contains(&lambda) {
            self.value
        } else {
            0
        }
    }

    pub fn within_nuclear_bound(&self) -> bool {
        self.total_variation <= self.nuclear_norm + 1e-8
    }
}

pub fn spectral_shift(pp: &ProjectionPair) -> Result<SpectralShift> {
    let index = pair_index(pp, crate::DEFAULT_RTOL)?.index;
    let d = pp.difference();
    let trace_difference = linalg::trace(&d);
    let integral = index as f64;
    Ok(SpectralShift {
        value: index,
        integral,
        trace_difference,
        trace_residual: (trace_difference - integral).norm(),
        total_variation: index.unsigned_abs() as f64,
        nuclear_norm: linalg::singular_values(&d).iter().sum(),
    })
}

/// `(1/π) arg D(λ + iε)` with the argument continued from `D = 1` at
/// `λ + i·10^6` down the vertical line, so that indices of magnitude above 1
/// are not folded back by the principal branch.
pub fn spectral_shift_limit(pp: &ProjectionPair, lambda: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Input("eps must be positive".into()));
    }
    const TOP: f64 = 1e6;
    const STEPS: usize = 4000;
    let ratio = (eps / TOP).ln();
    let mut previous = perturbation_determinant(pp, C64::new(lambda, TOP))?;
    let mut phase = previous.arg();
    for k in 1..=STEPS {
        let y = TOP * (ratio * k as f64 / STEPS as f64).exp();
        let d = perturbation_determinant(pp, C64::new(lambda, y))?;
        phase += (d / previous).arg();
        previous = d;
    }
    Ok(phase / std::f64::consts::PI)
}

/// `tr(f(P) - f(Q))` from the eigenvalues of `P` and `Q`. `f0` and `f1`
/// must agree with `f` at 0 and 1.
pub fn trace_f_difference<F>(pp: &ProjectionPair, f: F, f0: C64, f1: C64) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    for (x, fx) in [(0.0, f0), (1.0, f1)] {
        let v = f(x);
        if !v.is_finite() || !fx.is_finite() {
            return Err(Error::Input(format!("f is not finite at {x}")));
        }
        if (v - fx).norm() > 1e-12 * (1.0 + fx.norm()) {
            return Err(Error::Input(format!("f({x}) = {v} disagrees with the supplied value {fx}")));
        }
    }
    let apply = |m: &CMatrix| -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for lambda in linalg::hermitian_eigenvalues(m)? {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::Input(format!("f is not finite at {lambda}")));
            }
            acc += v;
        }
        Ok(acc)
    };
    Ok(apply(pp.p())? - apply(pp.q())?)
}

/// `M(z) = I + (P - Q)(Q - z)^{-1}`, meromorphic with singular set `{0, 1}`.
pub fn m_function(pp: &ProjectionPair) -> OperatorFunction {
    let n = pp.dim();
    let p = pp.p().clone();
    let q = pp.q().clone();
    OperatorFunction::new(n, n, move |z| {
        let id = linalg::identity(n);
        let (qi, _) = linalg::inverse(&(&q - &id * z))?;
        Ok(&id + (&p - &q) * qi)
    })
    .with_singularities(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    .with_description("M(z) = I + (P - Q)(Q - z)^{-1}")
}

/// Half the distance from `z0` to the other points of `{0, 1}`, capped at 1.
pub fn default_m_radius(z0: C64) -> f64 {
    contour::isolating_radius(z0, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 1e-12, 1.0)
}

/// Index of `M` with respect to `C(z0; eps)`; the circle must not enclose
/// the points of `{0, 1}` other than `z0`.
pub fn m_function_index(pp: &ProjectionPair, z0: C64, eps: f64, quad: &QuadratureConfig) -> Result<MultiplicityReport> {
    let m = m_function(pp);
    m.check_isolated(z0, eps)?;
    multiplicity::meromorphic_index(&m, z0, eps, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{self, PairBlocks};
    use crate::linalg::diag;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn e11() -> CMatrix {
        diag(&[c(1.0), c(0.0)])
    }

    fn index_one_pair() -> ProjectionPair {
        ProjectionPair::new(e11(), CMatrix::zeros(2, 2)).unwrap()
    }

    #[test]
    fn indices_of_small_pairs() {
        let same = ProjectionPair::new(e11(), e11()).unwrap();
        assert_eq!(pair_index(&same, 1e-10).unwrap().index, 0);
        let r = pair_index(&index_one_pair(), 1e-10).unwrap();
        assert_eq!((r.m1, r.m_minus1, r.index), (1, 0, 1));
        // projection onto span{(1, 1)/sqrt(2)}
        let tilted = CMatrix::from_element(2, 2, c(0.5));
        let r = pair_index(&ProjectionPair::new(e11(), tilted).unwrap(), 1e-10).unwrap();
        assert_eq!((r.m1, r.m_minus1, r.index), (0, 0, 0));
        assert_eq!(pair_index(&index_one_pair().swapped(), 1e-10).unwrap().index, -1);
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let not_proj = diag(&[c(2.0), c(0.0)]);
        assert!(ProjectionPair::new(not_proj, e11()).is_err());
        let oblique = crate::linalg::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert!(ProjectionPair::new(oblique, e11()).is_err());
        assert!(ProjectionPair::new(e11(), CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn odd_powers() {
        let same = ProjectionPair::new(e11(), e11()).unwrap();
        let pair = index_one_pair();
        for n in 0..3 {
            assert_eq!(trace_odd_power(&same, n), c(0.0));
            assert!((trace_odd_power(&pair, n) - 1.0).norm() < 1e-14);
        }
        // commuting diagonal 6x6 pair: P = diag(1,1,0,1,0,0), Q = diag(0,1,1,1,1,0)
        let p = diag(&[1.0, 1.0, 0.0, 1.0, 0.0, 0.0].map(c));
        let q = diag(&[0.0, 1.0, 1.0, 1.0, 1.0, 0.0].map(c));
        let pair = ProjectionPair::new(p, q).unwrap();
        for n in 0..4 {
            assert!((trace_odd_power(&pair, n) + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn determinants() {
        let pair = index_one_pair();
        assert!((perturbation_determinant(&pair, c(2.0)).unwrap() - 0.5).norm() < 1e-14);
        assert!((perturbation_determinant(&pair, c(-1.0)).unwrap() - 2.0).norm() < 1e-14);
        let same = ProjectionPair::new(e11(), e11()).unwrap();
        assert!((perturbation_determinant(&same, C64::new(0.3, 0.7)).unwrap() - 1.0).norm() < 1e-14);
        assert!(matches!(perturbation_determinant(&pair, c(1.0)), Err(Error::Domain { .. })));
        assert!(matches!(perturbation_determinant(&pair, c(0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn spectral_shift_function() {
        let same = spectral_shift(&ProjectionPair::new(e11(), e11()).unwrap()).unwrap();
        assert_eq!(same.value, 0);
        let s = spectral_shift(&index_one_pair()).unwrap();
        assert_eq!((s.value, s.at(0.5), s.at(1.5), s.at(-0.1)), (1, 1, 0, 0));
        assert!(s.trace_residual < 1e-12 && s.within_nuclear_bound());
        let limit = spectral_shift_limit(&index_one_pair(), 0.5, 1e-6).unwrap();
        assert!((limit - 1.0).abs() < 1e-4);
    }

    #[test]
    fn shift_limit_resolves_large_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let blocks = PairBlocks {
            m_minus1: 3,
            generic: 1,
            neither: 1,
            ..PairBlocks::default()
        };
        let (p, q) = generate::projection_pair(&mut rng, &blocks);
        let pair = ProjectionPair::new(p, q).unwrap();
        let limit = spectral_shift_limit(&pair, 0.5, 1e-6).unwrap();
        assert!((limit + 3.0).abs() < 1e-4, "{limit}");
        assert!(spectral_shift_limit(&pair, 1.5, 1e-6).unwrap().abs() < 1e-4);
    }

    #[test]
    fn trace_of_function_differences() {
        let pair = index_one_pair();
        let t = trace_f_difference(&pair, c, c(0.0), c(1.0)).unwrap();
        assert!((t - 1.0).norm() < 1e-14);
        let t = trace_f_difference(&pair, |x| c(x * x), c(0.0), c(1.0)).unwrap();
        assert!((t - 1.0).norm() < 1e-14);
        let t = trace_f_difference(&pair, |_| c(4.0), c(4.0), c(4.0)).unwrap();
        assert!(t.norm() < 1e-14);
        assert!(trace_f_difference(&pair, |x| c(1.0 / x), c(f64::INFINITY), c(1.0)).is_err());
        assert!(trace_f_difference(&pair, c, c(0.5), c(1.0)).is_err());
    }

    #[test]
    fn m_function_indices() {
        let pair = index_one_pair();
        let quad = QuadratureConfig::default();
        for (z0, want) in [(c(0.0), -1), (c(1.0), 1), (c(0.5), 0)] {
            let r = m_function_index(&pair, z0, default_m_radius(z0), &quad).unwrap();
            assert_eq!(r.value, want);
        }
        assert!(matches!(
            m_function_index(&pair, c(0.0), 1.5, &quad),
            Err(Error::Contour(_))
        ));
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let blocks = PairBlocks {
            m1: 2,
            m_minus1: 1,
            both: 1,
            generic: 1,
            ..PairBlocks::default()
        };
        let (p, q) = generate::projection_pair(&mut rng, &blocks);
        let pair = ProjectionPair::new(p, q).unwrap();
        let u = generate::random_unitary(&mut rng, pair.dim());
        let moved = pair.conjugated(&u).unwrap();
        assert_eq!(pair_index(&pair, 1e-10).unwrap(), pair_index(&moved, 1e-10).unwrap());
        assert_eq!(pair_index(&moved, 1e-10).unwrap().index, blocks.index());
    }
}
