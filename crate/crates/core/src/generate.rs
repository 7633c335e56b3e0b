//! Seeded generators for test problems with known answers.
//!
//! Every generator takes an explicit RNG; with `ChaCha8Rng::seed_from_u64`
//! the problems are reproducible across platforms.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::analytic::OperatorFunction;
use crate::linalg::{self, CMatrix};
use crate::C64;

/// Complex Gaussian matrix with independent `N(0, 1/2) + i N(0, 1/2)` entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    })
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of
/// `diag(R)` divided out).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = random_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    loop {
        let z = C64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius));
        if z.norm() <= radius {
            return z;
        }
    }
}

/// `count` points in the disk of radius `radius` with pairwise distances and
/// distances to `avoid` at least `min_sep`.
pub fn separated_points<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    avoid: &[C64],
    radius: f64,
    min_sep: f64,
) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(count);
    while out.len() < count {
        let z = random_complex(rng, radius);
        if avoid.iter().chain(out.iter()).all(|w| (w - z).norm() >= min_sep) {
            out.push(z);
        }
    }
    out
}

/// Block upper-triangular matrix with Jordan blocks `J_k(eigenvalue)` for
/// each `k` in `blocks`, then the simple eigenvalues `others`, with random
/// coupling above the diagonal between the two groups only.
fn jordan_triangular<R: Rng + ?Sized>(rng: &mut R, eigenvalue: C64, blocks: &[usize], others: &[C64]) -> CMatrix {
    let m: usize = blocks.iter().sum();
    let n = m + others.len();
    let mut t = CMatrix::zeros(n, n);
    let mut start = 0;
    for &k in blocks {
        for i in start..start + k {
            t[(i, i)] = eigenvalue;
            if i + 1 < start + k {
                t[(i, i + 1)] = C64::new(1.0, 0.0);
            }
        }
        start += k;
    }
    for (i, &mu) in others.iter().enumerate() {
        t[(m + i, m + i)] = mu;
    }
    let coupling = random_matrix(rng, m, others.len()) * C64::new(0.5, 0.0);
    t.view_mut((0, m), (m, others.len())).copy_from(&coupling);
    t
}

/// Matrix unitarily similar to a known Jordan structure.
#[derive(Debug, Clone)]
pub struct JordanMatrix {
    pub matrix: CMatrix,
    pub eigenvalue: C64,
    pub blocks: Vec<usize>,
    pub others: Vec<C64>,
}

impl JordanMatrix {
    pub fn algebraic(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn geometric(&self) -> usize {
        self.blocks.len()
    }

    /// Pole order of `(A - zI)^{-1}` at the eigenvalue: the largest block.
    pub fn index(&self) -> usize {
        self.blocks.iter().copied().max().unwrap_or(0)
    }

    pub fn is_semisimple(&self) -> bool {
        self.blocks.iter().all(|&k| k == 1)
    }

    /// Half the distance to the nearest other eigenvalue, capped at 1.
    pub fn isolating_radius(&self) -> f64 {
        crate::contour::isolating_radius(self.eigenvalue, &self.others, 0.0, 1.0)
    }
}

pub fn jordan_matrix<R: Rng + ?Sized>(rng: &mut R, eigenvalue: C64, blocks: &[usize], others: &[C64]) -> JordanMatrix {
    let t = jordan_triangular(rng, eigenvalue, blocks, others);
    let u = random_unitary(rng, t.nrows());
    JordanMatrix {
        matrix: &u * t * u.adjoint(),
        eigenvalue,
        blocks: blocks.to_vec(),
        others: others.to_vec(),
    }
}

/// Random block sizes (each at most `max_block`) summing to at most `budget`,
/// at least one block.
pub fn random_blocks<R: Rng + ?Sized>(rng: &mut R, budget: usize, max_block: usize) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut left = budget;
    let count = rng.random_range(1..=budget.min(3));
    for _ in 0..count {
        if left == 0 {
            break;
        }
        let k = rng.random_range(1..=left.min(max_block));
        blocks.push(k);
        left -= k;
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    blocks
}

/// A Jordan-structured matrix of dimension `dim` with a random eigenvalue.
pub fn random_jordan_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_block: usize) -> JordanMatrix {
    let eigenvalue = random_complex(rng, 1.0);
    let blocks = random_blocks(rng, dim, max_block);
    let others = separated_points(rng, dim - blocks.iter().sum::<usize>(), &[eigenvalue], 2.0, 0.4);
    jordan_matrix(rng, eigenvalue, &blocks, &others)
}

/// Square analytic function with a zero of finite type and known structure.
#[derive(Debug, Clone)]
pub struct FiniteTypeProblem {
    pub function: OperatorFunction,
    pub z0: C64,
    /// A contour radius on which the function is invertible away from `z0`.
    pub eps: f64,
    /// Algebraic multiplicity of the zero.
    pub nu: usize,
    /// Pole order of the inverse at `z0`.
    pub pole_order: usize,
    pub kernel_dim: usize,
    /// The matrix `A` when the function is the pencil `A - zI`.
    pub pencil: Option<JordanMatrix>,
}

/// `A(z) = U(z) diag((z - z0)^{k_i}) W(z)` with `U, W` affine in `z`,
/// unitary at `z0` and invertible on `|z - z0| < 10/3`.
pub fn local_smith_problem<R: Rng + ?Sized>(rng: &mut R, z0: C64, exponents: &[usize]) -> FiniteTypeProblem {
    let n = exponents.len();
    let mut affine = || {
        let u0 = random_unitary(rng, n);
        let mut u1 = random_matrix(rng, n, n);
        let norm = u1.norm();
        u1 *= C64::new(0.3 / norm, 0.0);
        (u0, u1)
    };
    let (u0, u1) = affine();
    let (w0, w1) = affine();
    let ks = exponents.to_vec();
    let function = OperatorFunction::new(n, n, move |z| {
        let w = z - z0;
        let d: Vec<C64> = ks.iter().map(|&k| w.powi(k as i32)).collect();
        Ok((&u0 + &u1 * w) * linalg::diag(&d) * (&w0 + &w1 * w))
    })
    .with_description("U(z) diag((z-z0)^k) W(z)");
    FiniteTypeProblem {
        function,
        z0,
        eps: 0.5,
        nu: exponents.iter().sum(),
        pole_order: exponents.iter().copied().max().unwrap_or(0),
        kernel_dim: exponents.iter().filter(|&&k| k > 0).count(),
        pencil: None,
    }
}

pub fn pencil_problem(jordan: JordanMatrix) -> FiniteTypeProblem {
    let function = crate::analytic::OperatorFunction::pencil(jordan.matrix.clone())
        .expect("generated matrices are square and finite");
    FiniteTypeProblem {
        function,
        z0: jordan.eigenvalue,
        eps: jordan.isolating_radius(),
        nu: jordan.algebraic(),
        pole_order: jordan.index(),
        kernel_dim: jordan.geometric(),
        pencil: Some(jordan),
    }
}

/// Alternates pencils and local Smith forms; dimension drawn from `2..=8`.
pub fn random_finite_type_problem<R: Rng + ?Sized>(rng: &mut R, pencil: bool) -> FiniteTypeProblem {
    let dim = rng.random_range(2..=8);
    if pencil {
        pencil_problem(random_jordan_matrix(rng, dim, 3))
    } else {
        let mut exponents: Vec<usize> = (0..dim).map(|_| rng.random_range(0..=3)).collect();
        if exponents.iter().all(|&k| k == 0) {
            exponents[0] = 1;
        }
        let z0 = random_complex(rng, 1.0);
        local_smith_problem(rng, z0, &exponents)
    }
}

/// Perturbation data `(H0, V1, V2)` with `H = H0 + V2^* V1`.
#[derive(Debug, Clone)]
pub struct PerturbationData {
    pub h0: CMatrix,
    pub v1: CMatrix,
    pub v2: CMatrix,
}

fn min_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| (x - y).norm()))
        .fold(f64::INFINITY, f64::min)
}

/// `H` with an engineered Jordan eigenvalue `z0`, random `V1, V2` and
/// `H0 = H - V2^* V1`, resampled until `sigma(H0)` stays 0.05 away from
/// `sigma(H)`.
#[derive(Debug, Clone)]
pub struct BirmanSchwingerCase {
    pub data: PerturbationData,
    pub h: JordanMatrix,
}

pub fn random_birman_schwinger_case<R: Rng + ?Sized>(rng: &mut R) -> BirmanSchwingerCase {
    loop {
        let n = rng.random_range(2..=6);
        let h = random_jordan_matrix(rng, n, 3);
        let nk = rng.random_range(h.geometric()..=n);
        let v1 = random_matrix(rng, nk, n);
        let v2 = random_matrix(rng, nk, n);
        let h0 = &h.matrix - v2.adjoint() * &v1;
        let Ok(s0) = linalg::eigenvalues(&h0) else { continue };
        let mut s = h.others.clone();
        s.push(h.eigenvalue);
        if min_distance(&s0, &s) >= 0.05 {
            return BirmanSchwingerCase {
                data: PerturbationData { h0, v1, v2 },
                h,
            };
        }
    }
}

/// `H0` and `H` sharing the eigenvalue `z0` with different Jordan structures.
#[derive(Debug, Clone)]
pub struct OverlapCase {
    pub data: PerturbationData,
    pub z0: C64,
    pub h0: JordanMatrix,
    pub h: JordanMatrix,
}

impl OverlapCase {
    pub fn ma_h0(&self) -> usize {
        self.h0.algebraic()
    }

    pub fn ma_h(&self) -> usize {
        self.h.algebraic()
    }
}

pub fn random_overlap_case<R: Rng + ?Sized>(rng: &mut R, factor_by_svd: bool) -> OverlapCase {
    loop {
        let n = rng.random_range(2..=6);
        let z0 = random_complex(rng, 1.0);
        let b0 = random_blocks(rng, n, 3);
        let b1 = random_blocks(rng, n, 3);
        let o0 = separated_points(rng, n - b0.iter().sum::<usize>(), &[z0], 2.0, 0.4);
        let o1 = separated_points(rng, n - b1.iter().sum::<usize>(), &[z0], 2.0, 0.4);
        let mut all: Vec<C64> = o0.iter().chain(&o1).copied().collect();
        all.push(z0);
        let crowded = all
            .iter()
            .enumerate()
            .any(|(i, a)| all[i + 1..].iter().any(|b| (a - b).norm() < 0.05));
        if crowded {
            continue;
        }
        let h0 = jordan_matrix(rng, z0, &b0, &o0);
        let h = jordan_matrix(rng, z0, &b1, &o1);
        let v = &h.matrix - &h0.matrix;
        let (v1, v2) = if factor_by_svd {
            factor_perturbation(&v)
        } else {
            (v, linalg::identity(n))
        };
        return OverlapCase {
            data: PerturbationData { h0: h0.matrix.clone(), v1, v2 },
            z0,
            h0,
            h,
        };
    }
}

/// `V = V2^* V1` with `V2^* = U S^{1/2}`, `V1 = S^{1/2} W^*`, truncated at
/// the numerical rank.
pub fn factor_perturbation(v: &CMatrix) -> (CMatrix, CMatrix) {
    let svd = v.clone().svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let top = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-13 * top.max(1.0))
        .collect();
    let r = keep.len().max(1);
    let n = v.nrows();
    let mut v1 = CMatrix::zeros(r, v.ncols());
    let mut v2 = CMatrix::zeros(r, n);
    for (row, &i) in keep.iter().enumerate() {
        let s = svd.singular_values[i].sqrt();
        v1.row_mut(row).copy_from(&(vt.row(i) * C64::new(s, 0.0)));
        v2.row_mut(row).copy_from(&(u.column(i).adjoint() * C64::new(s, 0.0)));
    }
    (v1, v2)
}

/// Block counts for a projection pair built as a direct sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairBlocks {
    /// `P = 1, Q = 0`.
    pub m1: usize,
    /// `P = 0, Q = 1`.
    pub m_minus1: usize,
    pub both: usize,
    pub neither: usize,
    /// 2x2 blocks with two lines at a generic angle.
    pub generic: usize,
}

impl PairBlocks {
    pub fn dim(&self) -> usize {
        self.m1 + self.m_minus1 + self.both + self.neither + 2 * self.generic
    }

    pub fn index(&self) -> i64 {
        self.m1 as i64 - self.m_minus1 as i64
    }

    /// Random block counts with total dimension `dim`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        let mut b = Self::default();
        let mut left = dim;
        while left > 0 {
            match rng.random_range(0..5) {
                0 => b.m1 += 1,
                1 => b.m_minus1 += 1,
                2 => b.both += 1,
                3 => b.neither += 1,
                _ if left >= 2 => {
                    b.generic += 1;
                    left -= 1;
                }
                _ => b.neither += 1,
            }
            left -= 1;
        }
        b
    }
}

/// Orthogonal projections `(P, Q)` with the block structure of `blocks`,
/// conjugated by a random unitary.
pub fn projection_pair<R: Rng + ?Sized>(rng: &mut R, blocks: &PairBlocks) -> (CMatrix, CMatrix) {
    let n = blocks.dim();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    let mut i = 0;
    for _ in 0..blocks.m1 {
        p[(i, i)] = one;
        i += 1;
    }
    for _ in 0..blocks.m_minus1 {
        q[(i, i)] = one;
        i += 1;
    }
    for _ in 0..blocks.both {
        p[(i, i)] = one;
        q[(i, i)] = one;
        i += 1;
    }
    i += blocks.neither;
    for _ in 0..blocks.generic {
        let theta: f64 = rng.random_range(0.2..1.3);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let v = [C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), phi)];
        p[(i, i)] = one;
        for a in 0..2 {
            for b in 0..2 {
                q[(i + a, i + b)] = v[a] * v[b].conj();
            }
        }
        i += 2;
    }
    let u = random_unitary(rng, n);
    let conj = |m: CMatrix| {
        let x = &u * m * u.adjoint();
        (&x + x.adjoint()) * C64::new(0.5, 0.0)
    };
    (conj(p), conj(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..7 {
            let u = random_unitary(&mut rng, n);
            assert!((u.adjoint() * &u - linalg::identity(n)).norm() < 1e-13);
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_matrix(&mut ChaCha8Rng::seed_from_u64(5), 3, 4);
        let b = random_matrix(&mut ChaCha8Rng::seed_from_u64(5), 3, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn jordan_matrix_has_engineered_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lambda = C64::new(0.3, -0.2);
        let j = jordan_matrix(&mut rng, lambda, &[2, 1], &[C64::new(2.0, 0.0)]);
        let a = &j.matrix - linalg::identity(4) * lambda;
        let (rank, _) = linalg::numerical_rank(&a, 1e-10).unwrap();
        assert_eq!(4 - rank, 2);
        let (rank2, _) = linalg::numerical_rank(&(&a * &a), 1e-10).unwrap();
        assert_eq!(4 - rank2, 3);
    }

    #[test]
    fn perturbation_factorization_reproduces_v() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_matrix(&mut rng, 4, 2) * random_matrix(&mut rng, 2, 4);
        let (v1, v2) = factor_perturbation(&v);
        assert_eq!(v1.nrows(), 2);
        assert!((v2.adjoint() * v1 - &v).norm() < 1e-12 * v.norm());
    }

    #[test]
    fn pairs_are_orthogonal_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in 2..9 {
            let blocks = PairBlocks::random(&mut rng, dim);
            assert_eq!(blocks.dim(), dim);
            let (p, q) = projection_pair(&mut rng, &blocks);
            for m in [&p, &q] {
                assert!((m * m - m).norm() < 1e-12);
                assert!((m - m.adjoint()).norm() == 0.0);
            }
        }
    }
}
