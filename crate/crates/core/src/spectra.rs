//! The spectrum of scalar sums of `n` projections.
//!
//! For `n ≥ 5` the spectrum is a closed segment `[α_n, β_n]`, where `α_n` and
//! `β_n` are the roots of `λ² − nλ + n`, together with two discrete rational
//! tails converging to the endpoints. For `n ≤ 4` it is an explicit list.
//! This module provides exact endpoints, certified membership for `n ≤ 4`, the
//! interval self-map `f(λ) = n−1 − 1/(λ−1)` with its inverse and orbit
//! dynamics, and a clearly flagged candidate generator for the discrete tails
//! when `n ≥ 5`.
//!
//! Membership of an arbitrary quadratic irrational in the segment is decided
//! through the characteristic polynomial `λ² − nλ + n` (negative strictly
//! inside, zero at the endpoints, positive outside), which needs no
//! cross-field comparison.

use crate::exactnum::{ExactNumError, QuadraticReal, Rational};
use num_bigint::BigInt;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("operation defined for n >= {min}, got n = {got}")]
    Domain { min: u32, got: u32 },
    #[error("map has a pole at {0}")]
    Pole(String),
    #[error("orbit seed must lie strictly inside the open segment")]
    SeedOutsideSegment,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error(transparent)]
    Exact(#[from] ExactNumError),
}

/// The closed segment `[α_n, β_n]` with
/// `α_n = (n − √(n²−4n))/2`, `β_n = (n + √(n²−4n))/2`.
///
/// Both endpoints are roots of `λ² − nλ + n = 0`, so `α_n + β_n = n` and
/// `α_n·β_n = n`. For `n = 4` the radicand vanishes and the segment is the
/// single point `{2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    n: u32,
    alpha: QuadraticReal,
    beta: QuadraticReal,
}

/// Where a value sits relative to a closed segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SegmentPosition {
    Below,
    /// Equals `α_n` (also reported for the degenerate `n = 4` point).
    LowerEndpoint,
    Interior,
    UpperEndpoint,
    Above,
}

impl SegmentPosition {
    pub fn is_inside_closed(self) -> bool {
        !matches!(self, SegmentPosition::Below | SegmentPosition::Above)
    }

    pub fn is_endpoint(self) -> bool {
        matches!(
            self,
            SegmentPosition::LowerEndpoint | SegmentPosition::UpperEndpoint
        )
    }
}

impl Segment {
    /// Exact endpoints for `n ≥ 4`. The radicand `n²−4n` is kept verbatim.
    pub fn for_count(n: u32) -> Result<Self, SpectraError> {
        if n < 4 {
            return Err(SpectraError::Domain { min: 4, got: n });
        }
        let rad = u64::from(n) * u64::from(n) - 4 * u64::from(n);
        let half_n = Rational::new(i64::from(n), 2);
        let half = Rational::new(1, 2);
        let alpha = QuadraticReal::new(half_n.clone(), -half.clone(), rad);
        let beta = QuadraticReal::new(half_n, half, rad);
        Ok(Segment { n, alpha, beta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> &QuadraticReal {
        &self.alpha
    }

    pub fn beta(&self) -> &QuadraticReal {
        &self.beta
    }

    /// Exact position of any [`QuadraticReal`] relative to the segment,
    /// regardless of its radicand: the sign of `x² − nx + n` separates
    /// interior, boundary and exterior, and the rational midpoint `n/2`
    /// decides the side.
    pub fn position(&self, x: &QuadraticReal) -> SegmentPosition {
        let n_rat = Rational::from_int(i64::from(self.n));
        let char_value = x
            .mul(x)
            .expect("same-field square")
            .sub(&x.mul_rational(&n_rat))
            .expect("same-field subtraction")
            .add_rational(&n_rat);
        let midpoint = Rational::new(i64::from(self.n), 2);
        match char_value.sign() {
            Ordering::Less => SegmentPosition::Interior,
            Ordering::Equal => match x.cmp_rational(&midpoint) {
                Ordering::Less => SegmentPosition::LowerEndpoint,
                Ordering::Greater => SegmentPosition::UpperEndpoint,
                // Only reachable for n = 4, where α = β = 2.
                Ordering::Equal => SegmentPosition::LowerEndpoint,
            },
            Ordering::Greater => match x.cmp_rational(&midpoint) {
                Ordering::Less => SegmentPosition::Below,
                _ => SegmentPosition::Above,
            },
        }
    }
}

/// Convenience wrapper for [`Segment::for_count`].
pub fn segment_endpoints(n: u32) -> Result<Segment, SpectraError> {
    Segment::for_count(n)
}

/// The interval self-map `f(x) = n−1 − 1/(x−1)`.
///
/// Its fixed points are exactly `α_n` and `β_n`, and it is strictly
/// expanding upward on the open segment: `f(x) > x` for `α_n < x < β_n`.
pub fn coxeter_map(n: u32, x: &QuadraticReal) -> Result<QuadraticReal, SpectraError> {
    let shifted = x.sub_rational(&Rational::one());
    let inv = shifted
        .inv()
        .map_err(|_| SpectraError::Pole(x.to_string()))?;
    Ok(inv
        .neg()
        .add_rational(&Rational::from_int(i64::from(n) - 1)))
}

/// Inverse of [`coxeter_map`]: `f⁻¹(y) = 1 + 1/(n−1−y)`, pole at `y = n−1`.
pub fn coxeter_inverse(n: u32, y: &QuadraticReal) -> Result<QuadraticReal, SpectraError> {
    let denom = y.neg().add_rational(&Rational::from_int(i64::from(n) - 1));
    let inv = denom.inv().map_err(|_| SpectraError::Pole(y.to_string()))?;
    Ok(inv.add_rational(&Rational::one()))
}

/// `x ↦ n − x`, the complement symmetry of the projection relation.
pub fn complement_map(n: u32, x: &QuadraticReal) -> QuadraticReal {
    x.neg().add_rational(&Rational::from_int(i64::from(n)))
}

/// Why an orbit stopped extending in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitTruncation {
    /// The next point passed the stop bound (it is still included, as the
    /// witness of escape).
    PassedStop,
    MaxSteps,
}

/// A two-sided orbit of the interval self-map: backward iterates, the seed,
/// then forward iterates, in increasing order.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub n: u32,
    pub points: Vec<QuadraticReal>,
    pub seed_index: usize,
    pub forward_truncation: OrbitTruncation,
    pub backward_truncation: OrbitTruncation,
}

impl Orbit {
    pub fn seed(&self) -> &QuadraticReal {
        &self.points[self.seed_index]
    }
}

/// Iterates the map forward until a point exceeds `stop_above` (or
/// `max_steps`), and backward until below `stop_below`. The seed must lie
/// strictly inside the open segment, where monotonicity makes both searches
/// terminate against any bound strictly inside.
///
/// Stop bounds must be comparable with the orbit points (rational, or in the
/// seed's quadratic field).
pub fn orbit(
    n: u32,
    seed: &QuadraticReal,
    stop_below: &QuadraticReal,
    stop_above: &QuadraticReal,
    max_steps: usize,
) -> Result<Orbit, SpectraError> {
    if n <= 4 {
        return Err(SpectraError::Domain { min: 5, got: n });
    }
    let segment = Segment::for_count(n)?;
    if segment.position(seed) != SegmentPosition::Interior {
        return Err(SpectraError::SeedOutsideSegment);
    }
    let mut forward = Vec::new();
    let mut forward_truncation = OrbitTruncation::MaxSteps;
    let mut point = seed.clone();
    for _ in 0..max_steps {
        point = coxeter_map(n, &point)?;
        forward.push(point.clone());
        if point.cmp_exact(stop_above)? == Ordering::Greater {
            forward_truncation = OrbitTruncation::PassedStop;
            break;
        }
    }
    let mut backward = Vec::new();
    let mut backward_truncation = OrbitTruncation::MaxSteps;
    point = seed.clone();
    for _ in 0..max_steps {
        point = coxeter_inverse(n, &point)?;
        backward.push(point.clone());
        if point.cmp_exact(stop_below)? == Ordering::Less {
            backward_truncation = OrbitTruncation::PassedStop;
            break;
        }
    }
    backward.reverse();
    let seed_index = backward.len();
    let mut points = backward;
    points.push(seed.clone());
    points.extend(forward);
    Ok(Orbit {
        n,
        points,
        seed_index,
        forward_truncation,
        backward_truncation,
    })
}

/// Membership verdict for a scalar against the spectrum for `n` projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SigmaTag {
    /// Inside the closed segment `[α_n, β_n]` (exact comparison).
    InSegment,
    /// In the certified discrete list; only emitted for `n ≤ 4`.
    InDiscreteCertified,
    /// Generated by the orbit-closure candidate construction for `n ≥ 5`;
    /// not a certificate.
    InDiscreteCandidate,
    /// Certified absent (finite/countable lists for `n ≤ 4`).
    NotInSigmaCertified,
    /// Exterior point not reached at the requested search depth.
    UnknownBeyondDepth,
}

/// Membership status plus a human-readable witness (e.g. the tail index `k`
/// for `n = 4`, or the generating orbit data).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaStatus {
    pub tag: SigmaTag,
    pub witness: Option<String>,
}

impl SigmaStatus {
    fn new(tag: SigmaTag, witness: impl Into<Option<String>>) -> Self {
        SigmaStatus {
            tag,
            witness: witness.into(),
        }
    }

    /// Membership established by a certificate (segment or small-`n` lists).
    pub fn is_certified_member(&self) -> bool {
        matches!(
            self.tag,
            SigmaTag::InSegment | SigmaTag::InDiscreteCertified
        )
    }

    /// Membership either certified or conjectured by the candidate generator.
    pub fn is_member_allowing_candidates(&self) -> bool {
        self.is_certified_member() || self.tag == SigmaTag::InDiscreteCandidate
    }
}

impl fmt::Display for SigmaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{:?} ({w})", self.tag),
            None => write!(f, "{:?}", self.tag),
        }
    }
}

fn small_sigma_list(n: u32) -> &'static [(i64, i64)] {
    match n {
        1 => &[(0, 1), (1, 1)],
        2 => &[(0, 1), (1, 1), (2, 1)],
        3 => &[(0, 1), (1, 1), (3, 2), (2, 1), (3, 1)],
        _ => unreachable!(),
    }
}

/// Certified membership for `n ≤ 4`: finite-list check for `n ≤ 3`, a
/// closed-form solve of `λ = 1 + k/(k+2)` (or its mirror `3 − k/(k+2)`) for
/// `n = 4`.
pub fn sigma_small_n(n: u32, lambda: &Rational) -> Result<SigmaStatus, SpectraError> {
    if !(1..=4).contains(&n) {
        return Err(SpectraError::Domain { min: 1, got: n });
    }
    if n <= 3 {
        let hit = small_sigma_list(n)
            .iter()
            .any(|&(p, q)| *lambda == Rational::new(p, q));
        return Ok(if hit {
            SigmaStatus::new(
                SigmaTag::InDiscreteCertified,
                Some(format!("member of the finite list for n = {n}")),
            )
        } else {
            SigmaStatus::new(
                SigmaTag::NotInSigmaCertified,
                Some(format!("not in the finite list for n = {n}")),
            )
        });
    }
    // n = 4: integers 0..=4 plus the two tails 1 + k/(k+2) and 3 − k/(k+2).
    for i in 0..=4i64 {
        if *lambda == Rational::from_int(i) {
            return Ok(SigmaStatus::new(
                SigmaTag::InDiscreteCertified,
                Some(format!("integer point {i}")),
            ));
        }
    }
    let one = Rational::one();
    let four = Rational::from_int(4);
    let (t, mirrored) = if lambda > &one && lambda < &Rational::from_int(2) {
        (lambda - &one, false)
    } else if lambda > &Rational::from_int(2) && lambda < &Rational::from_int(3) {
        (&(&four - lambda) - &one, true)
    } else {
        return Ok(SigmaStatus::new(
            SigmaTag::NotInSigmaCertified,
            Some("outside [1, 2] ∪ [2, 3] and not an integer point".to_string()),
        ));
    };
    // Solve k/(k+2) = t exactly: k = 2t/(1−t).
    let k = &(&Rational::from_int(2) * &t) * &(&one - &t).recip().expect("t < 1");
    if k.is_integer() && !k.is_negative() {
        let k_int = k.to_integer().expect("checked integral");
        let witness = if mirrored {
            format!("k = {k_int} in 3 - k/(k+2)")
        } else {
            format!("k = {k_int} in 1 + k/(k+2)")
        };
        Ok(SigmaStatus::new(
            SigmaTag::InDiscreteCertified,
            Some(witness),
        ))
    } else {
        Ok(SigmaStatus::new(
            SigmaTag::NotInSigmaCertified,
            Some(format!("k/(k+2) = {t} has no solution k in N")),
        ))
    }
}

/// Rational specialization of the interval map, used by the candidate
/// closure. Returns `None` at the pole.
fn map_rational(n: u32, x: &Rational) -> Option<Rational> {
    let shifted = x - &Rational::one();
    if shifted.is_zero() {
        return None;
    }
    Some(&Rational::from_int(i64::from(n) - 1) - &shifted.recip().expect("nonzero"))
}

fn map_rational_inverse(n: u32, y: &Rational) -> Option<Rational> {
    let denom = &Rational::from_int(i64::from(n) - 1) - y;
    if denom.is_zero() {
        return None;
    }
    Some(&Rational::one() + &denom.recip().expect("nonzero"))
}

/// Sign-based segment test for rational points: the sign of `p² − np + n`
/// against the midpoint side, entirely in rational arithmetic.
fn rational_position(n: u32, p: &Rational) -> SegmentPosition {
    let n_rat = Rational::from_int(i64::from(n));
    let char_value = &(&(p * p) - &(p * &n_rat)) + &n_rat;
    let midpoint = Rational::new(i64::from(n), 2);
    if char_value.is_zero() {
        return match p.cmp(&midpoint) {
            Ordering::Less => SegmentPosition::LowerEndpoint,
            Ordering::Greater => SegmentPosition::UpperEndpoint,
            Ordering::Equal => SegmentPosition::LowerEndpoint,
        };
    }
    if char_value.is_negative() {
        SegmentPosition::Interior
    } else if p < &midpoint {
        SegmentPosition::Below
    } else {
        SegmentPosition::Above
    }
}

/// Candidate generator for the discrete tails when `n ≥ 5` (and the ground
/// truth reproduction for `n = 4`): the closure of the integer points of
/// `[0, n]` outside the open segment under the interval map, its inverse and
/// the complement `x ↦ n−x`, truncated at the given composition depth.
///
/// Points are restricted to `[0, n]` and, on output, to the exterior of the
/// closed segment. Every point is a candidate only — membership for `n ≥ 5`
/// exterior points is never certified here.
pub fn discrete_candidates(n: u32, depth: u32) -> Result<BTreeSet<Rational>, SpectraError> {
    if n < 4 {
        return Err(SpectraError::Domain { min: 4, got: n });
    }
    if depth == 0 {
        return Err(SpectraError::ZeroDepth);
    }
    let n_rat = Rational::from_int(i64::from(n));
    let mut known: BTreeSet<Rational> = BTreeSet::new();
    let mut frontier: Vec<Rational> = Vec::new();
    for i in 0..=i64::from(n) {
        let p = Rational::from_int(i);
        if rational_position(n, &p) != SegmentPosition::Interior {
            known.insert(p.clone());
            frontier.push(p);
        }
    }
    let in_range = |p: &Rational| !p.is_negative() && p <= &n_rat;
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            let images = [
                map_rational(n, p),
                map_rational_inverse(n, p),
                Some(&n_rat - p),
            ];
            for img in images.into_iter().flatten() {
                if in_range(&img) && !known.contains(&img) {
                    known.insert(img.clone());
                    next.push(img);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(known
        .into_iter()
        .filter(|p| !rational_position(n, p).is_inside_closed())
        .collect())
}

/// Full membership decision.
///
/// * `n ≤ 4`: certified via [`sigma_small_n`] (irrational values are
///   certified absent — those spectra are rational lists).
/// * `n ≥ 5`: exact segment check first; outside the segment, rational
///   points are searched in [`discrete_candidates`] up to `depth`, yielding
///   a flagged candidate or an `UnknownBeyondDepth`.
pub fn sigma_membership(
    n: u32,
    lambda: &QuadraticReal,
    depth: u32,
) -> Result<SigmaStatus, SpectraError> {
    if n == 0 {
        return Err(SpectraError::Domain { min: 1, got: n });
    }
    if n <= 4 {
        return match lambda.as_rational() {
            Some(r) => sigma_small_n(n, r),
            None => Ok(SigmaStatus::new(
                SigmaTag::NotInSigmaCertified,
                Some("irrational; the spectrum for n <= 4 is a rational list".to_string()),
            )),
        };
    }
    let segment = Segment::for_count(n)?;
    match segment.position(lambda) {
        SegmentPosition::Interior => {
            return Ok(SigmaStatus::new(
                SigmaTag::InSegment,
                Some(format!("strictly inside [alpha_{n}, beta_{n}]")),
            ))
        }
        SegmentPosition::LowerEndpoint => {
            return Ok(SigmaStatus::new(
                SigmaTag::InSegment,
                Some(format!("equals alpha_{n}")),
            ))
        }
        SegmentPosition::UpperEndpoint => {
            return Ok(SigmaStatus::new(
                SigmaTag::InSegment,
                Some(format!("equals beta_{n}")),
            ))
        }
        SegmentPosition::Below | SegmentPosition::Above => {}
    }
    if let Some(r) = lambda.as_rational() {
        if !r.is_negative() && r <= &Rational::from_int(i64::from(n)) {
            let candidates = discrete_candidates(n, depth)?;
            if candidates.contains(r) {
                return Ok(SigmaStatus::new(
                    SigmaTag::InDiscreteCandidate,
                    Some(format!("orbit-closure candidate at depth {depth}")),
                ));
            }
        }
    }
    Ok(SigmaStatus::new(
        SigmaTag::UnknownBeyondDepth,
        Some(format!("exterior point not generated at depth {depth}")),
    ))
}

/// `Σ_4` reference point `1 + k/(k+2)` (lower tail) as an exact rational.
pub fn sigma4_lower(k: u64) -> Rational {
    &Rational::one() + &Rational::new(BigInt::from(k), BigInt::from(k + 2))
}

/// `Σ_4` reference point `3 − k/(k+2)` (upper tail).
pub fn sigma4_upper(k: u64) -> Rational {
    &Rational::from_int(3) - &Rational::new(BigInt::from(k), BigInt::from(k + 2))
}
