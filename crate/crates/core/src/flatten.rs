//! Polynomials close to the identity that vanish at prescribed small roots,
//! and the relation transform they induce.
//!
//! Given roots `λ_1, …, λ_N` with `|λ_i| < ε` and a window `[−D, D]`, the
//! construction produces `h(t) = q(t)·∏(t − λ_i)` with `|h(t) − t| < ε` on
//! the window. The factor `q` approximates `f̃/h₀`, where `h₀` is the root
//! product and `f̃` is a soft threshold vanishing on a neighbourhood of the
//! roots and equal to the identity outside a smooth shoulder contained in
//! `(−ε, ε)`. The fit is a weighted least-squares in the Chebyshev basis,
//! targeting the residual `q·h₀ − f̃` directly, with adaptive degree
//! doubling; the certificate is a dense-grid check of `|h(t) − t|`.
//!
//! Composing `h` with a formally self-adjoint relation `f` yields the
//! transformed relation `g = h∘f` in the free algebra: near-representations
//! of `f` whose value has the prescribed eigenvalues become exact
//! representations of `g`, while `g` stays uniformly close to `f` on bounded
//! tuples.

use crate::exactnum::{rationalize, ComplexRational, Rational};
use crate::linalg;
use crate::relations::{MatrixTuple, NcPoly, RelationsError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Number of points in the canonical verification grid on `[−D, D]`.
pub const GRID_POINTS: usize = 10_000;

/// Hard cap on the degree of the smooth factor `q`.
pub const MAX_FACTOR_DEGREE: usize = 512;

/// Denominator bound used when relation transforms rationalize coefficients.
pub const RATIONALIZE_DENOMINATOR: u64 = 1_000_000_000_000;

#[derive(Debug, Error)]
pub enum FlattenError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(
        "no factor of degree <= {max_degree} met the target (best grid deviation {best_sup:.3e}, required < {eps:.3e})"
    )]
    ApproximationFailure {
        max_degree: usize,
        best_sup: f64,
        eps: f64,
    },
    #[error("matrix argument is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("relation must be formally self-adjoint; apply make_self_adjoint first")]
    NotSelfAdjoint,
    #[error(
        "composing the degree-{degree} polynomial expanded past {cap} words; the transform is \
         intended for near-representations where a low-degree factor suffices"
    )]
    TransformTooLarge { degree: usize, cap: usize },
    #[error(transparent)]
    Relations(#[from] RelationsError),
}

/// `h(t) = q(t)·∏(t − λ_i)` with its construction data.
///
/// `smooth_factor` holds the Chebyshev coefficients of `q` on `[−bound,
/// bound]`; evaluation always uses the numerically stable product form, so
/// `h` vanishes exactly at the stored roots.
#[derive(Debug, Clone)]
pub struct FlatPolynomial {
    roots: Vec<f64>,
    smooth_factor: Vec<f64>,
    eps: f64,
    eps1: f64,
    bound: f64,
    grid_sup: f64,
}

impl FlatPolynomial {
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Chebyshev coefficients of the smooth factor `q` on `[−bound, bound]`.
    pub fn smooth_factor(&self) -> &[f64] {
        &self.smooth_factor
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Deviation `max |h(t) − t|` achieved on the canonical grid.
    pub fn grid_sup(&self) -> f64 {
        self.grid_sup
    }

    pub fn degree(&self) -> usize {
        self.smooth_factor.len().saturating_sub(1) + self.roots.len()
    }

    /// Scalar evaluation in product form.
    pub fn eval(&self, t: f64) -> f64 {
        let q = clenshaw(&self.smooth_factor, t / self.bound);
        self.roots.iter().fold(q, |acc, &r| acc * (t - r))
    }

    /// Hermitian functional calculus: eigendecompose and apply the scalar
    /// map. The argument must be Hermitian within `1e−8`.
    pub fn eval_matrix(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, FlattenError> {
        let defect = linalg::operator_norm(&(m - m.adjoint()));
        if defect > 1e-8 {
            return Err(FlattenError::NotHermitian(defect));
        }
        let (values, vectors) = linalg::hermitian_eigen_sorted(m);
        let dim = m.nrows();
        let mut out = DMatrix::zeros(dim, dim);
        for (k, &v) in values.iter().enumerate() {
            let col = vectors.column(k).into_owned();
            out += &col * col.adjoint() * Complex64::new(self.eval(v), 0.0);
        }
        Ok(out)
    }

    /// Monomial coefficients of the full product `h` (ascending powers).
    ///
    /// The Chebyshev-to-monomial conversion is ill-conditioned at high
    /// degree; intended for the modest degrees that relation transforms use.
    pub fn monomial_coefficients(&self) -> Vec<f64> {
        let mut h = cheb_to_monomial(&self.smooth_factor, self.bound);
        for &r in &self.roots {
            // multiply by (t − r)
            let mut next = vec![0.0; h.len() + 1];
            for (k, &c) in h.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            h = next;
        }
        h
    }

    /// Deviation from the identity over the canonical grid: `(sup, argmax)`.
    pub fn grid_deviation(&self) -> (f64, f64) {
        let mut sup = 0.0;
        let mut arg = -self.bound;
        for i in 0..GRID_POINTS {
            let t = grid_point(self.bound, i);
            let dev = (self.eval(t) - t).abs();
            if dev > sup {
                sup = dev;
                arg = t;
            }
        }
        (sup, arg)
    }
}

pub(crate) fn grid_point(bound: f64, i: usize) -> f64 {
    -bound + 2.0 * bound * (i as f64) / ((GRID_POINTS - 1) as f64)
}

fn clenshaw(coeffs: &[f64], u: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().rev() {
        let next = 2.0 * u * b1 - b2 + c;
        b2 = b1;
        b1 = next;
    }
    b1 - u * b2
}

/// Chebyshev coefficients on `[−D, D]` into monomials in `t`.
fn cheb_to_monomial(coeffs: &[f64], bound: f64) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    let mut out = vec![0.0; deg + 1];
    // T_k as monomials in t via T_{k+1}(u) = 2u T_k − T_{k−1}, u = t/D.
    let mut t_prev = vec![0.0; deg + 1];
    let mut t_cur = vec![0.0; deg + 1];
    t_prev[0] = 1.0;
    if deg >= 1 {
        t_cur[1] = 1.0 / bound;
    }
    out[0] += coeffs[0];
    if deg >= 1 {
        for (o, c) in out.iter_mut().zip(&t_cur) {
            *o += coeffs[1] * c;
        }
    }
    for k in 2..=deg {
        let mut t_next = vec![0.0; deg + 1];
        for j in 0..deg {
            t_next[j + 1] += 2.0 / bound * t_cur[j];
        }
        for (n, p) in t_next.iter_mut().zip(&t_prev) {
            *n -= p;
        }
        for (o, c) in out.iter_mut().zip(&t_next) {
            *o += coeffs[k] * c;
        }
        t_prev = t_cur;
        t_cur = t_next;
    }
    out
}

/// Order-3 smoothstep: `σ(0) = 0`, `σ(1) = 1`, with three vanishing
/// derivatives at both ends, so the threshold below is C⁴ at the joins.
fn smoothstep(u: f64) -> f64 {
    let u2 = u * u;
    u2 * u2 * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u2 * u)
}

/// Soft threshold with a multiplicative smooth shoulder: zero on `[−a, a]`,
/// exactly `t` for `|t| ≥ b`, and `t·σ((|t|−a)/(b−a))` in between, so
/// `|f̃(t) − t| ≤ b` everywhere and the deviation vanishes outside the
/// shoulder.
fn soft_threshold(t: f64, a: f64, b: f64) -> f64 {
    let mag = t.abs();
    if mag <= a {
        0.0
    } else if mag >= b {
        t
    } else {
        t * smoothstep((mag - a) / (b - a))
    }
}

/// Builds the flattening polynomial for the given roots on `[−bound, bound]`.
///
/// Requires `0 < eps < bound` and `|root| < eps` for every root (strictly;
/// a root at `±eps` is rejected). With no roots the identity `h(t) = t` is
/// returned. Otherwise `ε₁ = (max|root| + eps)/2` fixes the threshold map,
/// and the smooth factor is fitted at doubling degrees until the canonical
/// grid satisfies `|h(t) − t| < eps`, or the degree cap is reached.
pub fn build_flattener(
    roots: &[f64],
    eps: f64,
    bound: f64,
) -> Result<FlatPolynomial, FlattenError> {
    if !(eps > 0.0 && eps < bound && bound.is_finite()) {
        return Err(FlattenError::Precondition(format!(
            "need 0 < eps < bound, got eps = {eps}, bound = {bound}"
        )));
    }
    let mut max_root: f64 = 0.0;
    for &r in roots {
        if !r.is_finite() {
            return Err(FlattenError::Precondition("non-finite root".to_string()));
        }
        if r.abs() >= eps {
            return Err(FlattenError::Precondition(format!(
                "every root must satisfy |root| < eps; got root {r} with eps {eps}"
            )));
        }
        max_root = max_root.max(r.abs());
    }
    if roots.is_empty() {
        // h(t) = t: the factor is q(t) = t = bound·T₁(t/bound).
        return Ok(FlatPolynomial {
            roots: Vec::new(),
            smooth_factor: vec![0.0, bound],
            eps,
            eps1: eps / 2.0,
            bound,
            grid_sup: 0.0,
        });
    }
    // The flat radius sits strictly between max|root| and ε₁ = (m+eps)/2,
    // and the shoulder ends at ε₁ < eps; outside the shoulder the threshold
    // is exactly the identity, so the whole eps budget is available to the
    // fit there.
    let eps1 = (max_root + eps) / 2.0;
    let a = (3.0 * max_root + eps) / 4.0;
    let b = eps1;
    let h0 = |t: f64| roots.iter().fold(1.0, |acc, &r| acc * (t - r));
    let target = |t: f64| soft_threshold(t, a, b);

    let mut degree = 1usize;
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        for coeffs in fit_weighted_chebyshev(&h0, &target, bound, degree) {
            let candidate = FlatPolynomial {
                roots: roots.to_vec(),
                smooth_factor: coeffs,
                eps,
                eps1,
                bound,
                grid_sup: 0.0,
            };
            let (sup, _) = candidate.grid_deviation();
            if best.as_ref().is_none_or(|(s, _)| sup < *s) {
                best = Some((sup, candidate.smooth_factor.clone()));
            }
            if sup < eps * (1.0 - 1e-12) {
                return Ok(FlatPolynomial {
                    grid_sup: sup,
                    ..candidate
                });
            }
        }
        if degree >= MAX_FACTOR_DEGREE {
            let (best_sup, _) = best.expect("at least one fit");
            return Err(FlattenError::ApproximationFailure {
                max_degree: MAX_FACTOR_DEGREE,
                best_sup,
                eps,
            });
        }
        degree = (degree * 2).min(MAX_FACTOR_DEGREE);
    }
}

/// Number of minimax-seeking reweighting rounds per degree.
const LAWSON_ROUNDS: usize = 6;

/// Weighted least-squares fits of `q` in the Chebyshev basis on Chebyshev
/// nodes. The first fit minimizes `Σ_j (q(t_j)·h₀(t_j) − f̃(t_j))²` — the
/// metric of the final residual — and subsequent rounds reweight nodes by
/// their residual magnitude, pushing the solution toward the minimax fit.
/// Returns one candidate coefficient vector per round.
fn fit_weighted_chebyshev(
    h0: &dyn Fn(f64) -> f64,
    target: &dyn Fn(f64) -> f64,
    bound: f64,
    degree: usize,
) -> Vec<Vec<f64>> {
    let cols = degree + 1;
    let nodes = (4 * cols).max(1024);
    let mut design = DMatrix::<f64>::zeros(nodes, cols);
    let mut rhs = nalgebra::DVector::<f64>::zeros(nodes);
    for j in 0..nodes {
        let u = (std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64).cos();
        let t = bound * u;
        let w = h0(t);
        // T_k(u) by recurrence, scaled by the weight.
        let mut t_prev = 1.0;
        let mut t_cur = u;
        design[(j, 0)] = w;
        if cols > 1 {
            design[(j, 1)] = w * t_cur;
        }
        for k in 2..cols {
            let t_next = 2.0 * u * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
            design[(j, k)] = w * t_cur;
        }
        rhs[j] = target(t);
    }
    let mut weights = nalgebra::DVector::<f64>::from_element(nodes, 1.0);
    let mut candidates = Vec::with_capacity(LAWSON_ROUNDS);
    for _ in 0..LAWSON_ROUNDS {
        let sqrt_w = weights.map(f64::sqrt);
        let mut scaled = design.clone();
        for j in 0..nodes {
            for k in 0..cols {
                scaled[(j, k)] *= sqrt_w[j];
            }
        }
        let scaled_rhs = rhs.component_mul(&sqrt_w);
        let svd = scaled.svd(true, true);
        let solution = svd.solve(&scaled_rhs, 1e-14).expect("SVD least squares");
        let residual = &design * &solution - &rhs;
        candidates.push(solution.iter().cloned().collect());
        let r_max = residual.amax();
        if r_max == 0.0 {
            break;
        }
        for j in 0..nodes {
            weights[j] *= residual[j].abs() + 1e-3 * r_max;
        }
        let total: f64 = weights.iter().sum();
        weights /= total / nodes as f64;
    }
    candidates
}

/// `g = h ∘ f` expanded in the free algebra with exact rational
/// coefficients (continued-fraction rationalization, denominators up to
/// [`RATIONALIZE_DENOMINATOR`]). Requires `f` formally self-adjoint.
///
/// For any tuple `t` with `‖f(t)‖ ≤ bound`, the transform satisfies
/// `‖g(t) − f(t)‖ ≤ eps` up to the rationalization slack, since
/// `sup_{|s| ≤ bound} |h(s) − s| < eps`.
/// Word-count cap for the free-algebra expansion of `h ∘ f`.
const TRANSFORM_TERM_CAP: usize = 2_000_000;

pub fn flatten_relation(f: &NcPoly, h: &FlatPolynomial) -> Result<NcPoly, FlattenError> {
    if !f.is_formally_self_adjoint() {
        return Err(FlattenError::NotSelfAdjoint);
    }
    let coeffs: Vec<Rational> = h
        .monomial_coefficients()
        .into_iter()
        .map(|c| rationalize(c, RATIONALIZE_DENOMINATOR))
        .collect();
    let gens = f.gens();
    let mut g = NcPoly::zero(gens);
    for c in coeffs.iter().rev() {
        g = g.mul(f);
        if g.term_count() > TRANSFORM_TERM_CAP {
            return Err(FlattenError::TransformTooLarge {
                degree: h.degree(),
                cap: TRANSFORM_TERM_CAP,
            });
        }
        g = g.add(&NcPoly::scalar(
            gens,
            ComplexRational::from_rational(c.clone()),
        ));
    }
    Ok(g)
}

/// Eigenvalue clustering radius for [`flatten_matrix_relation`]: eigenvalues
/// closer than this are flattened by a single root.
const ROOT_CLUSTER_RADIUS: f64 = 1e-9;

/// Builds the transform for a concrete near-representation: computes
/// `A = f(b)`, takes its eigenvalues as roots (clustered within `1e−9`),
/// builds the flattener and returns `g = h∘f`. Requires `‖f(b)‖ < eps` so
/// the eigenvalues qualify as roots; then `‖g(b)‖` is numerically zero and
/// `g` stays within `eps` of `f` on `bound`-bounded tuples.
pub fn flatten_matrix_relation(
    f: &NcPoly,
    b: &MatrixTuple,
    eps: f64,
    bound: f64,
) -> Result<NcPoly, FlattenError> {
    if !f.is_formally_self_adjoint() {
        return Err(FlattenError::NotSelfAdjoint);
    }
    if bound < eps {
        return Err(FlattenError::Precondition(format!(
            "need bound >= eps, got eps = {eps}, bound = {bound}"
        )));
    }
    let a = f.eval(b)?;
    let norm = linalg::operator_norm(&a);
    if norm >= eps {
        return Err(FlattenError::Precondition(format!(
            "the relation value has norm {norm:.3e}, not below eps = {eps:.3e}"
        )));
    }
    let (values, _) = linalg::hermitian_eigen_sorted(&a);
    let mut roots: Vec<f64> = Vec::new();
    for v in values {
        if roots.iter().all(|&r| (r - v).abs() > ROOT_CLUSTER_RADIUS) {
            roots.push(v);
        }
    }
    let h = build_flattener(&roots, eps, bound)?;
    flatten_relation(f, &h)
}
