//! Free `*`-polynomials in noncommuting generators, their evaluation on
//! matrix tuples, and the seminorm machinery of polynomial relations.
//!
//! A relation is a polynomial `f` in `x_1, …, x_n, x_1*, …, x_n*`; a tuple of
//! operators represents it when `f` evaluates to zero. Coefficients are exact
//! complex rationals so that relation transforms compound without drift; only
//! evaluation on matrices is floating-point.
//!
//! Text syntax (round-trips with the printer): terms like
//! `(3/2+0i)*x1*x2^ + (-1+0i)*1`, where `^` marks a starred letter and `1`
//! is the empty word.

use crate::exactnum::{ComplexRational, ExactNumError, Rational};
use crate::linalg;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelationsError {
    #[error("polynomial uses generator x{used} but the tuple has only {available}")]
    DimensionMismatch { used: u32, available: usize },
    #[error("matrices must be square and of equal dimension")]
    RaggedTuple,
    #[error("expected a nonempty system of relations")]
    EmptySystem,
    #[error("cannot parse {0:?} as a polynomial: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Exact(#[from] ExactNumError),
}

/// One letter of a word: a generator index (1-based) with a star flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: u32,
    pub starred: bool,
}

impl Letter {
    pub fn plain(index: u32) -> Self {
        Letter {
            index,
            starred: false,
        }
    }

    pub fn starred(index: u32) -> Self {
        Letter {
            index,
            starred: true,
        }
    }
}

/// A word over the generators; the empty word is the unit.
pub type Word = Vec<Letter>;

/// Element of the free unital `*`-algebra on `gens` generators, stored as a
/// sparse map word → coefficient with no zero coefficients.
///
/// Equality compares terms only: the declared generator count is a capacity
/// hint, and polynomials agree exactly when their words and coefficients do
/// (the free algebras embed into each other along generator inclusion).
#[derive(Debug, Clone)]
pub struct NcPoly {
    gens: u32,
    terms: BTreeMap<Word, ComplexRational>,
}

impl PartialEq for NcPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for NcPoly {}

impl NcPoly {
    pub fn zero(gens: u32) -> Self {
        NcPoly {
            gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(gens: u32) -> Self {
        NcPoly::scalar(gens, ComplexRational::one())
    }

    pub fn scalar(gens: u32, c: ComplexRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        NcPoly { gens, terms }
    }

    pub fn generator(gens: u32, index: u32) -> Self {
        assert!(index >= 1 && index <= gens, "generator index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(vec![Letter::plain(index)], ComplexRational::one());
        NcPoly { gens, terms }
    }

    pub fn generator_star(gens: u32, index: u32) -> Self {
        assert!(index >= 1 && index <= gens, "generator index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(vec![Letter::starred(index)], ComplexRational::one());
        NcPoly { gens, terms }
    }

    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn terms(&self) -> &BTreeMap<Word, ComplexRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Maximal word length.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn insert_term(terms: &mut BTreeMap<Word, ComplexRational>, word: Word, c: ComplexRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (word, c) in &other.terms {
            Self::insert_term(&mut terms, word.clone(), c.clone());
        }
        NcPoly {
            gens: self.gens.max(other.gens),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ComplexRational::from_rational(Rational::from_int(-1))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                Self::insert_term(&mut terms, word, ca.mul(cb));
            }
        }
        NcPoly {
            gens: self.gens.max(other.gens),
            terms,
        }
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        if c.is_zero() {
            return NcPoly::zero(self.gens);
        }
        NcPoly {
            gens: self.gens,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Formal adjoint: reverse each word, flip stars, conjugate coefficients.
    pub fn adjoint(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (word, c) in &self.terms {
            let adj_word: Word = word
                .iter()
                .rev()
                .map(|l| Letter {
                    index: l.index,
                    starred: !l.starred,
                })
                .collect();
            Self::insert_term(&mut terms, adj_word, c.conj());
        }
        NcPoly {
            gens: self.gens,
            terms,
        }
    }

    pub fn is_formally_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    /// Unital `*`-homomorphism into matrices: the empty word maps to the
    /// identity, the letter `(i, starred)` to the conjugate transpose of the
    /// i-th matrix.
    pub fn eval(&self, tuple: &MatrixTuple) -> Result<DMatrix<Complex64>, RelationsError> {
        let max_index = self
            .terms
            .keys()
            .flat_map(|w| w.iter().map(|l| l.index))
            .max()
            .unwrap_or(0);
        if max_index as usize > tuple.n {
            return Err(RelationsError::DimensionMismatch {
                used: max_index,
                available: tuple.n,
            });
        }
        let dim = tuple.dim;
        let mut acc: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
        for (word, c) in &self.terms {
            let mut m = linalg::identity(dim);
            for letter in word {
                let factor = &tuple.matrices[(letter.index - 1) as usize];
                m = if letter.starred {
                    m * factor.adjoint()
                } else {
                    m * factor
                };
            }
            let (re, im) = c.to_complex_f64();
            acc += m * Complex64::new(re, im);
        }
        Ok(acc)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*")?;
            if word.is_empty() {
                write!(f, "1")?;
            } else {
                for (k, letter) in word.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "x{}", letter.index)?;
                    if letter.starred {
                        write!(f, "^")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for NcPoly {
    type Err = RelationsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

fn parse_poly(input: &str) -> Result<NcPoly, RelationsError> {
    let err = |msg: &str| RelationsError::Parse(input.to_string(), msg.to_string());
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(err("empty input"));
    }
    if trimmed == "0" {
        return Ok(NcPoly::zero(1));
    }
    // Split into signed terms at top level (outside parentheses).
    let mut parts: Vec<(i32, String)> = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    let mut sign = 1;
    for ch in trimmed.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| err("unbalanced parentheses"))?;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() {
                    // sign of the leading term
                    sign *= if ch == '-' { -1 } else { 1 };
                } else {
                    parts.push((sign, std::mem::take(&mut current)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(err("unbalanced parentheses"));
    }
    if current.trim().is_empty() {
        return Err(err("dangling sign"));
    }
    parts.push((sign, current));

    let mut max_gen = 1u32;
    let mut result_terms: BTreeMap<Word, ComplexRational> = BTreeMap::new();
    for (sign, term_text) in parts {
        let term_text = term_text.trim();
        let mut coeff = ComplexRational::one();
        let mut word: Word = Vec::new();
        for factor in term_text.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if let Some(body) = factor.strip_prefix('(') {
                let body = body
                    .strip_suffix(')')
                    .ok_or_else(|| err("unclosed coefficient"))?;
                coeff = coeff.mul(&ComplexRational::from_str(body)?);
            } else if factor == "1" {
                // unit factor, nothing to append
            } else if let Some(rest) = factor.strip_prefix('x') {
                let (digits, starred) = match rest.strip_suffix('^') {
                    Some(d) => (d, true),
                    None => (rest, false),
                };
                let index: u32 = digits.parse().map_err(|_| err("bad generator index"))?;
                if index == 0 {
                    return Err(err("generator indices are 1-based"));
                }
                max_gen = max_gen.max(index);
                word.push(Letter { index, starred });
            } else if let Ok(r) = Rational::from_str(factor) {
                coeff = coeff.mul(&ComplexRational::from_rational(r));
            } else {
                return Err(err("unrecognized factor"));
            }
        }
        if sign < 0 {
            coeff = coeff.neg();
        }
        NcPoly::insert_term(&mut result_terms, word, coeff);
    }
    Ok(NcPoly {
        gens: max_gen,
        terms: result_terms,
    })
}

/// An n-tuple of equal-size square complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    pub n: usize,
    pub dim: usize,
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<DMatrix<Complex64>>) -> Result<Self, RelationsError> {
        let n = matrices.len();
        let dim = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        for m in &matrices {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(RelationsError::RaggedTuple);
            }
        }
        Ok(MatrixTuple { n, dim, matrices })
    }
}

/// Rewrites the system `f_1 = … = f_m = 0` as the single relation
/// `Σ f_i* f_i = 0`; a tuple satisfies the system iff it satisfies the sum.
pub fn system_to_single(relations: &[NcPoly]) -> Result<NcPoly, RelationsError> {
    let first = relations.first().ok_or(RelationsError::EmptySystem)?;
    let mut acc = NcPoly::zero(first.gens());
    for f in relations {
        acc = acc.add(&f.adjoint().mul(f));
    }
    Ok(acc)
}

/// `p* p`, a formally self-adjoint polynomial with the same representations.
pub fn make_self_adjoint(p: &NcPoly) -> NcPoly {
    p.adjoint().mul(p)
}

/// The defining system for `n` projections with scalar sum `λ`:
/// `{x_i² − x_i}`, `{x_i* − x_i}` and `Σ x_i − λ·1` (2n+1 polynomials).
pub fn projection_relations(n: u32, lambda: &Rational) -> Vec<NcPoly> {
    let mut out = Vec::with_capacity(2 * n as usize + 1);
    for i in 1..=n {
        let x = NcPoly::generator(n, i);
        out.push(x.mul(&x).sub(&x));
    }
    for i in 1..=n {
        let x = NcPoly::generator(n, i);
        out.push(NcPoly::generator_star(n, i).sub(&x));
    }
    let mut sum = NcPoly::scalar(n, ComplexRational::from_rational(-lambda.clone()));
    for i in 1..=n {
        sum = sum.add(&NcPoly::generator(n, i));
    }
    out.push(sum);
    out
}

/// Families of deterministic samples used by [`seminorm_lower_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// `±K·I` for every generator.
    ScaledIdentity,
    /// K-scaled Haar unitaries.
    Unitary,
    /// K-scaled random Hermitian contractions.
    HermitianContraction,
    /// K-scaled random contractions.
    Contraction,
}

pub const ALL_SAMPLE_KINDS: [SampleKind; 4] = [
    SampleKind::ScaledIdentity,
    SampleKind::Unitary,
    SampleKind::HermitianContraction,
    SampleKind::Contraction,
];

fn sample_tuples(
    kind: SampleKind,
    gens: usize,
    dim: usize,
    radius: f64,
    base_seed: u64,
    kind_id: u64,
    sample_index: u64,
) -> Vec<MatrixTuple> {
    let k = Complex64::new(radius, 0.0);
    match kind {
        SampleKind::ScaledIdentity => {
            let plus = vec![linalg::identity(dim) * k; gens];
            let minus = vec![linalg::identity(dim) * (-k); gens];
            vec![
                MatrixTuple::new(plus).expect("square"),
                MatrixTuple::new(minus).expect("square"),
            ]
        }
        SampleKind::Unitary => {
            let mut rng = linalg::seeded_rng(base_seed, &[dim as u64, kind_id, sample_index]);
            let ms = (0..gens)
                .map(|_| linalg::clamp_to_unit_ball(linalg::haar_unitary(dim, &mut rng)) * k)
                .collect();
            vec![MatrixTuple::new(ms).expect("square")]
        }
        SampleKind::HermitianContraction => {
            let mut rng = linalg::seeded_rng(base_seed, &[dim as u64, kind_id, sample_index]);
            let ms = (0..gens)
                .map(|_| linalg::random_hermitian_contraction(dim, &mut rng) * k)
                .collect();
            vec![MatrixTuple::new(ms).expect("square")]
        }
        SampleKind::Contraction => {
            let mut rng = linalg::seeded_rng(base_seed, &[dim as u64, kind_id, sample_index]);
            let ms = (0..gens)
                .map(|_| linalg::random_contraction(dim, &mut rng) * k)
                .collect();
            vec![MatrixTuple::new(ms).expect("square")]
        }
    }
}

/// Certified lower bound for the seminorm
/// `ν_K(f) = sup ‖f(T_1, …, T_n, T_1*, …, T_n*)‖` over tuples with
/// `‖T_i‖ ≤ K`: the maximum of `‖f‖` over a deterministic seeded sample set
/// per dimension (scaled identities, Haar unitaries, Hermitian contractions,
/// general contractions). Never an upper bound. Monotone in `samples`
/// because per-sample seeds depend only on the sample index, so sample sets
/// are nested.
pub fn seminorm_lower_bound(
    p: &NcPoly,
    radius: f64,
    dims: &[usize],
    samples: u32,
    seed: u64,
) -> f64 {
    seminorm_lower_bound_sampled(p, radius, dims, samples, seed, &ALL_SAMPLE_KINDS)
}

/// [`seminorm_lower_bound`] restricted to chosen sample families.
pub fn seminorm_lower_bound_sampled(
    p: &NcPoly,
    radius: f64,
    dims: &[usize],
    samples: u32,
    seed: u64,
    kinds: &[SampleKind],
) -> f64 {
    assert!(radius > 0.0, "the seminorm radius must be positive");
    let gens = p.gens() as usize;
    let mut jobs: Vec<(SampleKind, usize, u64, u64)> = Vec::new();
    for &dim in dims {
        for &kind in kinds {
            let kind_id = ALL_SAMPLE_KINDS
                .iter()
                .position(|&k| k == kind)
                .expect("known kind") as u64;
            let count = match kind {
                SampleKind::ScaledIdentity => 1,
                _ => samples,
            };
            for index in 0..count {
                jobs.push((kind, dim, kind_id, u64::from(index)));
            }
        }
    }
    jobs.par_iter()
        .map(|&(kind, dim, kind_id, index)| {
            sample_tuples(kind, gens, dim, radius, seed, kind_id, index)
                .iter()
                .map(|t| p.eval(t).map(|m| linalg::operator_norm(&m)).unwrap_or(0.0))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn c(re: i64, im: i64) -> ComplexRational {
        ComplexRational::new(Rational::from_int(re), Rational::from_int(im))
    }

    fn diag2(a: f64, b: f64) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
        ]))
    }

    #[test]
    fn adjoint_reverses_and_stars() {
        let x1 = NcPoly::generator(2, 1);
        let x2 = NcPoly::generator(2, 2);
        let p = x1.mul(&x2); // x1*x2
        let adj = p.adjoint();
        let expected: Word = vec![Letter::starred(2), Letter::starred(1)];
        assert_eq!(adj.terms().keys().next().unwrap(), &expected);
        assert_eq!(adj.adjoint(), p);
    }

    #[test]
    fn scalar_and_cancellation() {
        let x1 = NcPoly::generator(1, 1);
        assert!(x1.sub(&x1).is_zero());
        let one = NcPoly::one(1);
        assert_eq!(one.mul(&x1), x1);
    }

    #[test]
    fn eval_is_unital() {
        let p = NcPoly::one(2);
        let t = MatrixTuple::new(vec![diag2(0.3, 0.7), diag2(1.0, -1.0)]).unwrap();
        let m = p.eval(&t).unwrap();
        assert_eq!(m, identity(2));
    }

    #[test]
    fn eval_respects_stars() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        let t = MatrixTuple::new(vec![m.clone()]).unwrap();
        let p = NcPoly::generator_star(1, 1);
        assert_eq!(p.eval(&t).unwrap(), m.adjoint());
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = NcPoly::generator(3, 3);
        let t = MatrixTuple::new(vec![diag2(1.0, 0.0)]).unwrap();
        assert!(matches!(
            p.eval(&t),
            Err(RelationsError::DimensionMismatch {
                used: 3,
                available: 1
            })
        ));
    }

    #[test]
    fn single_relation_rewrite() {
        let x1 = NcPoly::generator(1, 1);
        let g = system_to_single(std::slice::from_ref(&x1)).unwrap();
        assert_eq!(g, make_self_adjoint(&x1));
        let z = system_to_single(&[NcPoly::zero(1)]).unwrap();
        assert!(z.is_zero());
        assert!(matches!(
            system_to_single(&[]),
            Err(RelationsError::EmptySystem)
        ));
    }

    #[test]
    fn projection_relations_count_and_content() {
        let rels = projection_relations(3, &Rational::new(3, 2));
        assert_eq!(rels.len(), 7);
        // n=1, λ=1: {x² − x, x* − x, x − 1}
        let rels = projection_relations(1, &Rational::one());
        let x = NcPoly::generator(1, 1);
        assert_eq!(rels[0], x.mul(&x).sub(&x));
        assert_eq!(rels[1], NcPoly::generator_star(1, 1).sub(&x));
        assert_eq!(rels[2], x.sub(&NcPoly::one(1)));
    }

    #[test]
    fn relations_vanish_on_an_exact_representation() {
        // P1 = diag(1,0), P2 = diag(0,1): two projections with sum I.
        let t = MatrixTuple::new(vec![diag2(1.0, 0.0), diag2(0.0, 1.0)]).unwrap();
        for f in projection_relations(2, &Rational::one()) {
            assert!(linalg::operator_norm(&f.eval(&t).unwrap()) < 1e-14);
        }
        let g = system_to_single(&projection_relations(2, &Rational::one())).unwrap();
        assert!(g.is_formally_self_adjoint());
        assert!(linalg::operator_norm(&g.eval(&t).unwrap()) < 1e-14);
    }

    #[test]
    fn print_parse_round_trip() {
        let x1 = NcPoly::generator(2, 1);
        let x2s = NcPoly::generator_star(2, 2);
        let p = x1
            .mul(&x2s)
            .scale(&ComplexRational::new(Rational::new(3, 2), Rational::zero()))
            .add(&NcPoly::scalar(2, c(-1, 0)));
        let text = p.to_string();
        assert_eq!(text, "(-1+0i)*1 + (3/2+0i)*x1*x2^");
        let back: NcPoly = text.parse().unwrap();
        assert_eq!(back, p);
        let zero: NcPoly = "0".parse().unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn parse_plain_terms() {
        let p: NcPoly = "x1*x1^ - x2".parse().unwrap();
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.gens(), 2);
        let q: NcPoly = "(0+1i)*x1 + (0-1i)*x1".parse().unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn seminorm_of_single_generator_attains_radius() {
        let p = NcPoly::generator(1, 1);
        let lb = seminorm_lower_bound(&p, 2.0, &[2, 4], 8, 0);
        assert_eq!(lb, 2.0);
    }

    #[test]
    fn seminorm_of_zero() {
        let p = NcPoly::zero(1);
        assert_eq!(seminorm_lower_bound(&p, 2.0, &[2], 4, 0), 0.0);
    }

    #[test]
    fn hermitian_samples_annihilate_antisymmetric_poly() {
        let p = NcPoly::generator(1, 1).sub(&NcPoly::generator_star(1, 1));
        let hermitian_only = seminorm_lower_bound_sampled(
            &p,
            1.0,
            &[3],
            6,
            1,
            &[SampleKind::ScaledIdentity, SampleKind::HermitianContraction],
        );
        assert!(hermitian_only < 1e-12, "got {hermitian_only}");
        let generic = seminorm_lower_bound(&p, 1.0, &[3], 6, 1);
        assert!(generic > 0.1, "got {generic}");
    }
}
