//! Dense complex linear algebra helpers shared by the numeric modules:
//! operator norms, Hermitian eigendecompositions, seeded random matrix
//! families and deterministic seed derivation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Operator norm (largest singular value) via dense SVD.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// `(A + A*)/2`.
pub fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenpairs sorted by descending
/// eigenvalue with index-order tie breaking (deterministic for repeated
/// spectra).
pub fn hermitian_eigen_sorted(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = hermitian_part(m).symmetric_eigen();
    let dim = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Sum of the outer products `v_k v_k*` of the first `count` columns.
pub fn projection_onto_columns(vectors: &DMatrix<Complex64>, count: usize) -> DMatrix<Complex64> {
    let dim = vectors.nrows();
    let slice = vectors.columns(0, count);
    let mut p = DMatrix::zeros(dim, dim);
    p.gemm(
        Complex64::new(1.0, 0.0),
        &slice.into_owned(),
        &slice.adjoint(),
        Complex64::new(0.0, 0.0),
    );
    p
}

pub fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

/// Standard complex Gaussian matrix (independent N(0,1) real and imaginary
/// parts).
pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian with the R-diagonal
/// phase correction.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random orthonormal frame: the first `cols` columns of a Haar unitary.
pub fn random_frame<R: Rng>(dim: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    haar_unitary(dim, rng).columns(0, cols).into_owned()
}

/// Scaling margin keeping "contraction" samples strictly inside the unit
/// ball despite floating-point rounding in the norm computation.
const CONTRACTION_MARGIN: f64 = 1.0 + 1.0e-12;

/// Rescales `m` so its computed operator norm is at most 1.
pub fn clamp_to_unit_ball(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = operator_norm(&m);
    if norm <= 1.0 {
        m
    } else {
        m / Complex64::new(norm * CONTRACTION_MARGIN, 0.0)
    }
}

/// Random Hermitian matrix scaled to operator norm at most 1.
pub fn random_hermitian_contraction<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    clamp_to_unit_ball(hermitian_part(&gaussian_matrix(dim, dim, rng)))
}

/// Random complex matrix scaled to operator norm at most 1.
pub fn random_contraction<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    clamp_to_unit_ball(gaussian_matrix(dim, dim, rng))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// SplitMix64 step, used to derive independent stream seeds.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed derivation from a base seed and a path of indices;
/// independent of evaluation order, so parallel sampling stays reproducible.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(base ^ 0xA076_1D64_78BD_642F);
    for &part in path {
        state = splitmix64(state ^ splitmix64(part.wrapping_add(0x2545_F491_4F6C_DD1D)));
    }
    state
}

/// Seeded generator for a derived stream.
pub fn seeded_rng(base: u64, path: &[u64]) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(derive_seed(base, path))
}

/// Largest absolute eigenvalue of a Hermitian matrix (cheaper than a full
/// SVD and exact for the Hermitian case).
pub fn hermitian_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    hermitian_part(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

/// Rank-one projection `v v* / ‖v‖²`.
pub fn rank_one_projection(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let scale = Complex64::new(1.0 / norm_sq, 0.0);
    v * v.adjoint() * scale
}
