//! Dense complex linear algebra: rank decisions, subspace bases, projectors
//! and conditioned solves.
//!
//! Everything here is deterministic for a fixed input. Degenerate shapes
//! (`0 x n`, empty bases) are legal and flow through every routine.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::{Error, Result, C64};

/// Dense complex matrix standing in for every bounded operator.
pub type CMatrix = DMatrix<C64>;

/// Systems with a reciprocal condition estimate at or below this are
/// reported as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

const BASIS_TOL: f64 = 1e-12;
const PROJECTOR_TOL: f64 = 1e-10;

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input("matrix has non-finite entries".into()))
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from real row data; handy for tests and fixtures.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn diag(entries: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Singular values and left/right singular vectors sorted by decreasing
/// singular value. `v` is always square (`cols x cols`) so that its trailing
/// columns span the kernel.
struct SortedSvd {
    u: CMatrix,
    sigma: Vec<f64>,
    v: CMatrix,
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn sorted_svd(m: &CMatrix) -> SortedSvd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return SortedSvd {
            u: CMatrix::zeros(rows, 0),
            sigma: Vec::new(),
            v: identity(cols),
        };
    }
    // faer returns the singular values already in nonincreasing order.
    let svd = to_faer(m).svd().expect("SVD iteration converges for finite input");
    let sigma: Vec<f64> = svd.S().column_vector().iter().map(|s| s.re).collect();
    let u = from_faer(svd.U().subcols(0, sigma.len()));
    let v = from_faer(svd.V());
    SortedSvd { u, sigma, v }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    to_faer(m)
        .singular_values()
        .expect("SVD iteration converges for finite input")
}

/// Singular values `<= rtol * max(sigma_max, scale)` count as zero. `scale`
/// is the size of the surrounding problem, so that a matrix which is zero up
/// to rounding is not mistaken for one of full rank.
fn rank_from_sigma(sigma: &[f64], rtol: f64, scale: f64) -> usize {
    let max = sigma.first().copied().unwrap_or(0.0).max(scale);
    if max == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rtol * max).count()
}

fn check_rtol(rtol: f64) -> Result<()> {
    if rtol > 0.0 && rtol.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("rank tolerance must be positive, got {rtol}")))
    }
}

/// Numerical rank `#{sigma_k > rtol * sigma_max}` together with the sorted
/// singular values.
pub fn numerical_rank(m: &CMatrix, rtol: f64) -> Result<(usize, Vec<f64>)> {
    numerical_rank_scaled(m, rtol, 0.0)
}

/// [`numerical_rank`] with the threshold measured against
/// `max(sigma_max, scale)`.
pub fn numerical_rank_scaled(m: &CMatrix, rtol: f64, scale: f64) -> Result<(usize, Vec<f64>)> {
    check_rtol(rtol)?;
    ensure_finite(m)?;
    let sigma = singular_values(m);
    Ok((rank_from_sigma(&sigma, rtol, scale), sigma))
}

/// True when some singular value sits within a factor of ten of the rank
/// threshold, i.e. the rank decision could flip under a small perturbation.
pub fn rank_is_borderline(sigma: &[f64], rtol: f64) -> bool {
    rank_is_borderline_scaled(sigma, rtol, 0.0)
}

pub fn rank_is_borderline_scaled(sigma: &[f64], rtol: f64, scale: f64) -> bool {
    let max = sigma.first().copied().unwrap_or(0.0).max(scale);
    if max == 0.0 {
        return false;
    }
    let threshold = rtol * max;
    sigma
        .iter()
        .any(|&s| s > threshold / 10.0 && s < threshold * 10.0)
}

/// Orthonormal basis of a subspace of `C^ambient_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    vectors: CMatrix,
}

impl SubspaceBasis {
    /// Wraps a matrix whose columns must already be orthonormal.
    pub fn new(vectors: CMatrix) -> Result<Self> {
        ensure_finite(&vectors)?;
        let k = vectors.ncols();
        let gram = vectors.adjoint() * &vectors;
        let err = (gram - identity(k)).norm();
        if err > BASIS_TOL * (k.max(1) as f64) {
            return Err(Error::Input(format!(
                "basis columns are not orthonormal (deviation {err:.3e})"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            vectors: CMatrix::zeros(ambient_dim, 0),
        }
    }

    /// Orthonormalizes the columns of `spanning` at rank tolerance `rtol`.
    pub fn spanned_by(spanning: &CMatrix, rtol: f64) -> Result<Self> {
        range_basis(spanning, rtol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn into_vectors(self) -> CMatrix {
        self.vectors
    }
}

/// Numerical column space of `m`.
pub fn range_basis(m: &CMatrix, rtol: f64) -> Result<SubspaceBasis> {
    range_basis_scaled(m, rtol, 0.0)
}

pub fn range_basis_scaled(m: &CMatrix, rtol: f64, scale: f64) -> Result<SubspaceBasis> {
    check_rtol(rtol)?;
    ensure_finite(m)?;
    let svd = sorted_svd(m);
    let r = rank_from_sigma(&svd.sigma, rtol, scale);
    Ok(SubspaceBasis {
        vectors: svd.u.columns(0, r).into_owned(),
    })
}

/// Numerical kernel of `m`; its dimension is `cols - rank`.
pub fn kernel_basis(m: &CMatrix, rtol: f64) -> Result<SubspaceBasis> {
    kernel_basis_scaled(m, rtol, 0.0)
}

pub fn kernel_basis_scaled(m: &CMatrix, rtol: f64, scale: f64) -> Result<SubspaceBasis> {
    check_rtol(rtol)?;
    ensure_finite(m)?;
    let cols = m.ncols();
    let svd = sorted_svd(m);
    let r = rank_from_sigma(&svd.sigma, rtol, scale);
    Ok(SubspaceBasis {
        vectors: svd.v.columns(r, cols - r).into_owned(),
    })
}

/// Idempotent matrix, optionally flagged as an orthogonal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    orthogonal: bool,
}

impl Projector {
    /// Validates idempotence (and hermiticity for `orthogonal`) to `1e-10`.
    pub fn new(matrix: CMatrix, orthogonal: bool) -> Result<Self> {
        Self::with_tolerance(matrix, orthogonal, PROJECTOR_TOL)
    }

    /// As [`Projector::new`] with a caller-chosen tolerance, measured
    /// relative to `1 + |P|^2`.
    pub fn with_tolerance(matrix: CMatrix, orthogonal: bool, tol: f64) -> Result<Self> {
        ensure_finite(&matrix)?;
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "projector must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = 1.0 + matrix.norm_squared();
        let idem = (&matrix * &matrix - &matrix).norm();
        if idem > tol * scale {
            return Err(Error::Input(format!(
                "matrix is not idempotent (|P^2 - P| = {idem:.3e})"
            )));
        }
        if orthogonal {
            let herm = (matrix.adjoint() - &matrix).norm();
            if herm > tol * scale {
                return Err(Error::Input(format!(
                    "orthogonal projector is not Hermitian (|P^* - P| = {herm:.3e})"
                )));
            }
        }
        Ok(Self { matrix, orthogonal })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(n, n),
            orthogonal: true,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: identity(n),
            orthogonal: true,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `I - P`, built entrywise so that `P + (I - P) = I` holds exactly.
    pub fn complement(&self) -> Self {
        Self {
            matrix: identity(self.dim()) - &self.matrix,
            orthogonal: self.orthogonal,
        }
    }

    /// `dim ran(P)`, read off the (real) trace.
    pub fn rank(&self) -> usize {
        trace(&self.matrix).re.round().max(0.0) as usize
    }

    /// Orthonormal basis of `ran(P)`.
    pub fn range(&self) -> Result<SubspaceBasis> {
        range_basis(&self.matrix, 1e-8)
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Orthogonal projector `B B^*` onto `span(B)`.
pub fn orth_projector(basis: &SubspaceBasis) -> Projector {
    let v = basis.vectors();
    Projector {
        matrix: v * v.adjoint(),
        orthogonal: true,
    }
}

fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn lu_inverse(m: &CMatrix) -> Result<(nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>, CMatrix, f64)> {
    let lu = m.clone().lu();
    let inv = lu.try_inverse().ok_or(Error::Singular { rcond: 0.0 })?;
    if !inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Singular { rcond: 0.0 });
    }
    let rcond = 1.0 / (one_norm(m) * one_norm(&inv));
    if rcond.is_nan() || rcond <= SINGULAR_RCOND {
        return Err(Error::Singular {
            rcond: if rcond.is_nan() { 0.0 } else { rcond },
        });
    }
    Ok((lu, inv, rcond))
}

/// LU-based inverse with the 1-norm reciprocal condition number.
pub fn inverse(m: &CMatrix) -> Result<(CMatrix, f64)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "cannot invert a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m)?;
    if m.nrows() == 0 {
        return Ok((CMatrix::zeros(0, 0), 1.0));
    }
    let (_, inv, rcond) = lu_inverse(m)?;
    Ok((inv, rcond))
}

/// Solves `M X = B`, returning `X` and a reciprocal condition estimate.
/// Fails with [`Error::Singular`] when `rcond <= 1e-12`.
pub fn solve(m: &CMatrix, b: &CMatrix) -> Result<(CMatrix, f64)> {
    if !m.is_square() || m.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "solve needs square M with matching rows: M is {}x{}, B is {}x{}",
            m.nrows(),
            m.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    ensure_finite(m)?;
    ensure_finite(b)?;
    if m.nrows() == 0 {
        return Ok((CMatrix::zeros(0, b.ncols()), 1.0));
    }
    let (lu, inv, rcond) = lu_inverse(m)?;
    let x = lu.solve(b).unwrap_or_else(|| &inv * b);
    Ok((x, rcond))
}

/// Number of principal angles between `span(b1)` and `span(b2)` whose cosine
/// exceeds `1 - rtol`, i.e. the numerical dimension of the intersection.
pub fn subspace_intersection_dim(b1: &SubspaceBasis, b2: &SubspaceBasis, rtol: f64) -> Result<usize> {
    check_rtol(rtol)?;
    if b1.ambient_dim() != b2.ambient_dim() {
        return Err(Error::Dimension(format!(
            "subspaces live in C^{} and C^{}",
            b1.ambient_dim(),
            b2.ambient_dim()
        )));
    }
    let cross = b1.vectors().adjoint() * b2.vectors();
    Ok(principal_cosines(&cross)
        .into_iter()
        .filter(|&c| c > 1.0 - rtol)
        .count())
}

fn principal_cosines(cross: &CMatrix) -> Vec<f64> {
    singular_values(cross)
}

pub fn determinant(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Eigenvalues of a square matrix from its complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalues need a square matrix".into()));
    }
    ensure_finite(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::Input(format!("eigenvalue iteration failed: {e:?}")))
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalues need a square matrix".into()));
    }
    ensure_finite(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let herm = (m + m.adjoint()).scale(0.5);
    to_faer(&herm)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Input(format!("eigenvalue iteration failed: {e:?}")))
}

/// A point of the spectrum with its algebraic multiplicity (cluster size).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub value: C64,
    pub multiplicity: usize,
}

/// Spread of computed eigenvalues that are merged into one spectral point,
/// relative to `max(1, |A|)`.
///
/// A defective eigenvalue of index `k` is only resolved to roughly
/// `u^{1/k}` in double precision, so clusters are merged generously and
/// represented by their centroid (which is accurate to `O(u)`).
pub const CLUSTER_TOL: f64 = 1e-4;

/// Single-linkage clustering of points closer than `tol`; each cluster is
/// represented by its centroid. Output is sorted by real, then imaginary part.
pub fn cluster_points(points: &[C64], tol: f64) -> Vec<SpectralPoint> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        let mut k = i;
        while label[k] != r {
            let next = label[k];
            label[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += p;
                g.2 += 1;
            }
            None => groups.push((r, p, 1)),
        }
    }
    let mut out: Vec<SpectralPoint> = groups
        .into_iter()
        .map(|(_, sum, count)| SpectralPoint {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.value
                    .im
                    .partial_cmp(&b.value.im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    out
}

/// Eigenvalues of `m` clustered with tolerance `CLUSTER_TOL * max(1, |m|)`.
pub fn spectrum(m: &CMatrix) -> Result<Vec<SpectralPoint>> {
    let ev = eigenvalues(m)?;
    let tol = CLUSTER_TOL * m.norm().max(1.0);
    Ok(cluster_points(&ev, tol))
}

/// Relative residual `|lhs - rhs| / max(|rhs|, tiny)` in the Frobenius norm.
pub fn relative_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rank_of_identity_and_rank_one() {
        let (r, s) = numerical_rank(&identity(2), 1e-10).unwrap();
        assert_eq!(r, 2);
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);

        let m = from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let (r, s) = numerical_rank(&m, 1e-10).unwrap();
        assert_eq!(r, 1);
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);

        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), 1e-10).unwrap().0, 0);
    }

    #[test]
    fn rank_rejects_bad_input() {
        let mut m = identity(2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(numerical_rank(&m, 1e-10), Err(Error::Input(_))));
        assert!(numerical_rank(&identity(2), 0.0).is_err());
    }

    #[test]
    fn bases_of_rank_one_matrix() {
        let m = from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let target = [c(1.0 / 2f64.sqrt()), c(-1.0 / 2f64.sqrt())];
        for basis in [range_basis(&m, 1e-10).unwrap(), kernel_basis(&m, 1e-10).unwrap()] {
            assert_eq!(basis.dim(), 1);
            let v = basis.vectors().column(0);
            // equal up to a unit phase
            let overlap: C64 = v.iter().zip(&target).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-14);
        }
        assert_eq!(range_basis(&identity(2), 1e-10).unwrap().dim(), 2);
        assert_eq!(kernel_basis(&identity(2), 1e-10).unwrap().dim(), 0);
        assert_eq!(range_basis(&CMatrix::zeros(2, 2), 1e-10).unwrap().dim(), 0);
        assert_eq!(kernel_basis(&CMatrix::zeros(2, 2), 1e-10).unwrap().dim(), 2);
    }

    #[test]
    fn wide_and_empty_shapes() {
        let wide = from_real_rows(&[&[1.0, 0.0, 0.0]]);
        assert_eq!(kernel_basis(&wide, 1e-10).unwrap().dim(), 2);
        let empty = CMatrix::zeros(0, 3);
        assert_eq!(numerical_rank(&empty, 1e-10).unwrap().0, 0);
        assert_eq!(kernel_basis(&empty, 1e-10).unwrap().dim(), 3);
        assert_eq!(range_basis(&empty, 1e-10).unwrap().dim(), 0);
    }

    #[test]
    fn orthogonal_projectors() {
        let e1 = SubspaceBasis::new(from_real_rows(&[&[1.0], &[0.0]])).unwrap();
        assert_eq!(orth_projector(&e1).matrix(), &diag(&[c(1.0), c(0.0)]));

        let s = 1.0 / 2f64.sqrt();
        let b = SubspaceBasis::new(from_real_rows(&[&[s], &[s]])).unwrap();
        let p = orth_projector(&b);
        let expect = from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!((p.matrix() - expect).norm() < 1e-15);
        assert!(p.is_orthogonal());

        assert_eq!(orth_projector(&SubspaceBasis::empty(3)).matrix(), &CMatrix::zeros(3, 3));
    }

    #[test]
    fn projector_validation() {
        assert!(Projector::new(from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]), false).is_ok());
        assert!(Projector::new(from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]), true).is_err());
        assert!(Projector::new(from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]), false).is_err());
        let p = Projector::new(diag(&[c(1.0), c(0.0)]), true).unwrap();
        let sum = p.matrix() + p.complement().matrix();
        assert_eq!(sum, identity(2));
    }

    #[test]
    fn solves() {
        let b = from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        let (x, rcond) = solve(&identity(3), &b).unwrap();
        assert_eq!(x, b);
        assert!((rcond - 1.0).abs() < 1e-15);

        let d = diag(&[c(2.0), c(4.0)]);
        let (x, _) = solve(&d, &identity(2)).unwrap();
        assert!((x - diag(&[c(0.5), c(0.25)])).norm() < 1e-16);

        let sing = from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        assert!(matches!(solve(&sing, &identity(2)), Err(Error::Singular { .. })));
        assert!(matches!(solve(&identity(2), &identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn intersections() {
        let e1 = SubspaceBasis::new(from_real_rows(&[&[1.0], &[0.0]])).unwrap();
        let e2 = SubspaceBasis::new(from_real_rows(&[&[0.0], &[1.0]])).unwrap();
        assert_eq!(subspace_intersection_dim(&e1, &e1, 1e-10).unwrap(), 1);
        assert_eq!(subspace_intersection_dim(&e1, &e2, 1e-10).unwrap(), 0);

        let plane = SubspaceBasis::new(from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let line = SubspaceBasis::new(from_real_rows(&[&[s], &[s], &[0.0]])).unwrap();
        assert_eq!(subspace_intersection_dim(&plane, &line, 1e-10).unwrap(), 1);
        assert!(subspace_intersection_dim(&plane, &e1, 1e-10).is_err());
    }

    #[test]
    fn clustering_merges_close_points() {
        let pts = [c(0.0), C64::new(1e-6, 0.0), c(1.0), c(1.0 + 2e-5), c(3.0)];
        let cl = cluster_points(&pts, 1e-4);
        assert_eq!(cl.len(), 3);
        assert_eq!(cl[0].multiplicity, 2);
        assert_eq!(cl[1].multiplicity, 2);
        assert_eq!(cl[2].multiplicity, 1);
    }

    #[test]
    fn spectrum_of_jordan_block_is_one_point() {
        let h = from_real_rows(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let sp = spectrum(&h).unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].multiplicity, 2);
        assert!(sp[0].value.norm() < 1e-14);
    }

    #[test]
    fn range_projector_reproduces_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..7 {
            let low = generate::random_matrix(&mut rng, n + 1, 2) * generate::random_matrix(&mut rng, 2, n);
            let p = orth_projector(&range_basis(&low, 1e-10).unwrap());
            assert!((p.matrix() * &low - &low).norm() < 1e-10 * low.norm());
        }
    }
}
