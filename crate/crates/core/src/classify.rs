//! Classification dossiers: per-`(n, λ)` verdicts on trace existence,
//! finite-dimensional representations, type I, exactness, nuclearity,
//! simplicity and stability of the universal algebra of `n` projections
//! summing to `λ·1`, together with spectrum computations inside type I and
//! UHF algebras.
//!
//! Every Yes/No verdict names the structural result it rests on and is
//! decided by exact arithmetic in the same run; Unknown verdicts record why
//! none of the results apply. Dossiers are symmetrized under the complement
//! `λ ↦ n − λ` (the relation is invariant under `p_i ↦ 1 − p_i`), so a rule
//! that decides one side decides both.

use crate::exactnum::{QuadraticReal, Rational};
use crate::spectra::{self, SegmentPosition, SigmaStatus, SigmaTag, SpectraError};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("operation defined for n >= {min}, got n = {got}")]
    Domain { min: u32, got: u32 },
    #[error("cannot parse {0:?} as a supernatural number: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Exponent of a prime in a supernatural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// Formal product `∏ p^{ε_p}` with `ε_p ∈ ℕ ∪ {∞}`, the isomorphism
/// invariant of a UHF algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl SupernaturalNumber {
    pub fn new(entries: impl IntoIterator<Item = (u64, Exponent)>) -> Result<Self, ClassifyError> {
        let mut exponents = BTreeMap::new();
        for (p, e) in entries {
            if !is_prime(p) {
                return Err(ClassifyError::Parse(
                    p.to_string(),
                    "base is not prime".into(),
                ));
            }
            if e == Exponent::Finite(0) {
                return Err(ClassifyError::Parse(
                    p.to_string(),
                    "exponents must be at least 1".into(),
                ));
            }
            if exponents.insert(p, e).is_some() {
                return Err(ClassifyError::Parse(p.to_string(), "repeated prime".into()));
            }
        }
        Ok(SupernaturalNumber { exponents })
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Exponent> {
        &self.exponents
    }

    /// Whether the integer `q` divides this supernatural number: every prime
    /// power of `q` must be dominated by the stored exponent.
    pub fn divides(&self, q: u64) -> bool {
        if q == 0 {
            return false;
        }
        let mut rest = q;
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                match self.exponents.get(&p) {
                    Some(Exponent::Infinite) => {}
                    Some(Exponent::Finite(cap)) if *cap >= e => {}
                    _ => return false,
                }
            }
            p += 1;
        }
        if rest > 1 {
            match self.exponents.get(&rest) {
                Some(Exponent::Infinite) => {}
                Some(Exponent::Finite(cap)) if *cap >= 1 => {}
                _ => return false,
            }
        }
        true
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, e) in &self.exponents {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            match e {
                Exponent::Finite(k) => write!(f, "{p}:{k}")?,
                Exponent::Infinite => write!(f, "{p}:inf")?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl FromStr for SupernaturalNumber {
    type Err = ClassifyError;

    /// Parses `"2:inf,3:2"`; `"1"` denotes the empty product.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return SupernaturalNumber::new([]);
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let (p_txt, e_txt) = part
                .split_once(':')
                .ok_or_else(|| ClassifyError::Parse(s.into(), format!("bad entry {part:?}")))?;
            let p: u64 = p_txt
                .trim()
                .parse()
                .map_err(|_| ClassifyError::Parse(s.into(), format!("bad prime {p_txt:?}")))?;
            let e_txt = e_txt.trim();
            let e = if e_txt.eq_ignore_ascii_case("inf") || e_txt == "oo" {
                Exponent::Infinite
            } else {
                Exponent::Finite(e_txt.parse().map_err(|_| {
                    ClassifyError::Parse(s.into(), format!("bad exponent {e_txt:?}"))
                })?)
            };
            entries.push((p, e));
        }
        SupernaturalNumber::new(entries)
    }
}

/// Convenience wrapper for the divisibility criterion.
pub fn supernatural_divides(q: u64, nu: &SupernaturalNumber) -> bool {
    nu.divides(q)
}

/// The finite superset of scalars realizable inside any type I algebra with
/// an `m`-dimensional representation: `{s/m : 0 ≤ s ≤ n·m}`.
pub fn type_i_sigma_candidates(n: u32, m: u32) -> Result<Vec<Rational>, ClassifyError> {
    if m == 0 {
        return Err(ClassifyError::Domain { min: 1, got: 0 });
    }
    Ok((0..=u64::from(n) * u64::from(m))
        .map(|s| Rational::new(BigInt::from(s), BigInt::from(m)))
        .collect())
}

/// Description of the non-exactness scalar set for a given `n`: the overlap
/// of the spectrum with the shift-by-3 of the spectrum for `n − 6`
/// projections.
#[derive(Debug, Clone, Serialize)]
pub struct ExactnessWindow {
    pub n: u32,
    /// Certified members (complete for 7 ≤ n ≤ 9, truncated for n = 10).
    pub certified_points: Vec<Rational>,
    pub truncated: bool,
    /// For n ≥ 11: the exact interval `[α_{n−6}+3, β_{n−6}+3]`.
    pub interval: Option<(QuadraticReal, QuadraticReal)>,
    /// Shifted discrete-tail candidates (uncertified) that also test as
    /// spectrum members.
    pub candidate_points: Vec<Rational>,
}

pub fn exactness_window(n: u32, depth: u32) -> Result<ExactnessWindow, ClassifyError> {
    if n <= 6 {
        return Err(ClassifyError::Domain { min: 7, got: n });
    }
    let three = Rational::from_int(3);
    let segment = spectra::segment_endpoints(n)?;
    let in_segment = |r: &Rational| {
        segment
            .position(&QuadraticReal::from(r.clone()))
            .is_inside_closed()
    };
    match n {
        7..=9 => {
            let inner = n - 6;
            let mut points = Vec::new();
            let list: &[(i64, i64)] = match inner {
                1 => &[(0, 1), (1, 1)],
                2 => &[(0, 1), (1, 1), (2, 1)],
                _ => &[(0, 1), (1, 1), (3, 2), (2, 1), (3, 1)],
            };
            for &(p, q) in list {
                let shifted = &Rational::new(p, q) + &three;
                if in_segment(&shifted) {
                    points.push(shifted);
                }
            }
            Ok(ExactnessWindow {
                n,
                certified_points: points,
                truncated: false,
                interval: None,
                candidate_points: Vec::new(),
            })
        }
        10 => {
            let mut points: Vec<Rational> = (0..=4i64)
                .map(|i| &Rational::from_int(i) + &three)
                .collect();
            for k in 1..=u64::from(2 * depth) {
                points.push(&spectra::sigma4_lower(k) + &three);
                points.push(&spectra::sigma4_upper(k) + &three);
            }
            points.retain(|p| in_segment(p));
            points.sort();
            points.dedup();
            Ok(ExactnessWindow {
                n,
                certified_points: points,
                truncated: true,
                interval: None,
                candidate_points: Vec::new(),
            })
        }
        _ => {
            let inner = spectra::segment_endpoints(n - 6)?;
            let lo = inner.alpha().add_rational(&three);
            let hi = inner.beta().add_rational(&three);
            let mut candidates = Vec::new();
            for p in spectra::discrete_candidates(n - 6, depth)? {
                let shifted = &p + &three;
                let status =
                    spectra::sigma_membership(n, &QuadraticReal::from(shifted.clone()), depth)?;
                if status.is_member_allowing_candidates() {
                    candidates.push(shifted);
                }
            }
            Ok(ExactnessWindow {
                n,
                certified_points: Vec::new(),
                truncated: false,
                interval: Some((lo, hi)),
                candidate_points: candidates,
            })
        }
    }
}

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

/// A single dossier field: the verdict, the structural result it cites, and
/// a human-readable explanation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub citation: String,
    pub detail: String,
}

impl Verdict {
    fn yes(citation: &str, detail: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Yes,
            citation: citation.into(),
            detail: detail.into(),
        }
    }

    fn no(citation: &str, detail: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::No,
            citation: citation.into(),
            detail: detail.into(),
        }
    }

    fn unknown(detail: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Unknown,
            citation: String::new(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.answer {
            Answer::Yes => write!(f, "yes")?,
            Answer::No => write!(f, "no")?,
            Answer::Unknown => write!(f, "unknown")?,
        }
        if !self.citation.is_empty() {
            write!(f, " [{}]", self.citation)?;
        }
        if !self.detail.is_empty() {
            write!(f, " — {}", self.detail)?;
        }
        Ok(())
    }
}

/// Classification record for one `(n, λ)` pair.
#[derive(Debug, Clone, Serialize)]
pub struct Dossier {
    pub n: u32,
    pub lambda: QuadraticReal,
    pub sigma_status: SigmaStatus,
    pub trace_exists: Verdict,
    pub finite_dim_rep: Verdict,
    pub type_i: Verdict,
    pub exact: Verdict,
    pub nuclear: Verdict,
    pub simple: Verdict,
    pub stable: Verdict,
}

impl Dossier {
    pub fn fields(&self) -> [(&'static str, &Verdict); 7] {
        [
            ("trace_exists", &self.trace_exists),
            ("finite_dim_rep", &self.finite_dim_rep),
            ("type_i", &self.type_i),
            ("exact", &self.exact),
            ("nuclear", &self.nuclear),
            ("simple", &self.simple),
            ("stable", &self.stable),
        ]
    }
}

impl fmt::Display for Dossier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "dossier for n = {}, lambda = {} ({} ≈ {})",
            self.n,
            self.lambda,
            self.sigma_status,
            self.lambda.to_decimal(6)
        )?;
        for (name, verdict) in self.fields() {
            writeln!(f, "  {name:<15} {verdict}")?;
        }
        Ok(())
    }
}

const CIT_TRACE: &str = "trace-existence-for-spectrum-points";
const CIT_FDR_YES: &str = "finite-dimensional-realization-of-rational-points";
const CIT_FDR_NO: &str = "trace-rationality-obstruction";
const CIT_TYPE1_ENDPOINT: &str = "endpoints-not-type-one";
const CIT_TYPE1_INTERIOR: &str = "interior-not-type-one-beyond-six";
const CIT_TYPE1_DISCRETE: &str = "discrete-points-finite-dimensional";
const CIT_EXACT_WINDOW: &str = "shifted-spectrum-non-exactness";
const CIT_EXACT_FINDIM: &str = "finite-dimensional-hence-exact";
const CIT_NUCLEAR_EXACT: &str = "nuclearity-implies-exactness";
const CIT_NUCLEAR_ORBIT: &str = "orbit-meets-non-exact-window";
const CIT_NUCLEAR_FINDIM: &str = "finite-dimensional-hence-nuclear";
const CIT_SIMPLE_SCALAR: &str = "scalar-algebra-at-extremes";
const CIT_SIMPLE_RATIONAL: &str = "rational-segment-point-not-simple";
const CIT_SIMPLE_DROP: &str = "drop-projection-quotient";
const CIT_STABLE_SEGMENT: &str = "segment-points-not-stable";
const CIT_MIRROR_PREFIX: &str = "complement-symmetry via ";

/// Whether the orbit of `lambda` under the interval self-map meets the
/// non-exactness window. Only called for `n > 6` with `lambda` strictly
/// inside the open segment. Returns the witnessing point if any.
fn orbit_meets_window(
    n: u32,
    lambda: &QuadraticReal,
) -> Result<Option<QuadraticReal>, SpectraError> {
    let in_window = |p: &QuadraticReal| -> Result<bool, SpectraError> {
        let shifted = p.sub_rational(&Rational::from_int(3));
        if n <= 10 {
            match shifted.as_rational() {
                Some(r) => {
                    Ok(spectra::sigma_small_n(n - 6, r)?.tag == SigmaTag::InDiscreteCertified)
                }
                None => Ok(false),
            }
        } else {
            let inner = spectra::segment_endpoints(n - 6)?;
            Ok(inner.position(&shifted).is_inside_closed())
        }
    };
    // Stop bounds: the window hull for rational seeds, whole-segment rational
    // bounds otherwise (exact comparisons across different quadratic fields
    // are not available, and the hull bounds below are always conservative).
    let (stop_below, stop_above) = if n <= 10 {
        (
            QuadraticReal::from(3),
            QuadraticReal::from(i64::from(n) - 3),
        )
    } else if lambda.is_rational() {
        let inner = spectra::segment_endpoints(n - 6)?;
        (
            inner.alpha().add_rational(&Rational::from_int(3)),
            inner.beta().add_rational(&Rational::from_int(3)),
        )
    } else {
        (
            QuadraticReal::from(2),
            QuadraticReal::from(i64::from(n) - 2),
        )
    };
    let orbit = spectra::orbit(n, lambda, &stop_below, &stop_above, 10_000)?;
    for point in &orbit.points {
        if in_window(point)? {
            return Ok(Some(point.clone()));
        }
    }
    Ok(None)
}

fn classify_one_sided(
    n: u32,
    lambda: &QuadraticReal,
    depth: u32,
) -> Result<Dossier, ClassifyError> {
    let status = spectra::sigma_membership(n, lambda, depth)?;
    let position = if n >= 4 {
        Some(spectra::segment_endpoints(n)?.position(lambda))
    } else {
        None
    };
    let candidate_note = if status.tag == SigmaTag::InDiscreteCandidate {
        " (membership is a candidate, not a certificate)"
    } else {
        ""
    };

    if status.tag == SigmaTag::NotInSigmaCertified {
        let reason = format!(
            "lambda = {lambda} is certified not to be a sum of {n} projections; the universal \
             algebra has no representations"
        );
        return Ok(Dossier {
            n,
            lambda: lambda.clone(),
            sigma_status: status,
            trace_exists: Verdict::unknown(reason.clone()),
            finite_dim_rep: Verdict::unknown(reason.clone()),
            type_i: Verdict::unknown(reason.clone()),
            exact: Verdict::unknown(reason.clone()),
            nuclear: Verdict::unknown(reason.clone()),
            simple: Verdict::unknown(reason.clone()),
            stable: Verdict::unknown(reason),
        });
    }

    let member = status.is_member_allowing_candidates();

    let trace_exists = if member {
        Verdict::yes(
            CIT_TRACE,
            format!("every spectrum point admits a tracial state{candidate_note}"),
        )
    } else {
        Verdict::unknown("membership undecided at this search depth")
    };

    let finite_dim_rep = if lambda.is_rational() && member {
        Verdict::yes(
            CIT_FDR_YES,
            format!(
                "rational spectrum points have finite-dimensional representations{candidate_note}"
            ),
        )
    } else if !lambda.is_rational() {
        Verdict::no(
            CIT_FDR_NO,
            "taking the trace of a finite-dimensional representation forces the scalar to be rational",
        )
    } else {
        Verdict::unknown("membership undecided at this search depth")
    };

    let type_i = match position {
        Some(p) if p.is_endpoint() && n >= 5 => Verdict::no(
            CIT_TYPE1_ENDPOINT,
            "the endpoints are irrational, and scalars realizable in a type I algebra form a finite rational set",
        ),
        Some(SegmentPosition::Interior) if n > 6 => Verdict::no(
            CIT_TYPE1_INTERIOR,
            "interior segment points are not type I once n exceeds 6",
        ),
        _ if n <= 4 && status.tag == SigmaTag::InDiscreteCertified => Verdict::yes(
            CIT_TYPE1_DISCRETE,
            "discrete spectrum points have finite-dimensional universal algebras",
        ),
        Some(SegmentPosition::Interior) => {
            Verdict::unknown("interior points with n in {5, 6} are not covered by the stated results")
        }
        _ => Verdict::unknown("no type I criterion applies"),
    };

    let shifted_status = if n > 6 {
        let shifted = lambda.sub_rational(&Rational::from_int(3));
        Some(spectra::sigma_membership(n - 6, &shifted, depth)?)
    } else {
        None
    };
    let exact = if let Some(shifted) = &shifted_status {
        if shifted.is_certified_member() {
            Verdict::no(
                CIT_EXACT_WINDOW,
                format!(
                    "lambda - 3 is a certified sum of {} projections, placing lambda in the \
                     non-exactness overlap{candidate_note}",
                    n - 6
                ),
            )
        } else if type_i.answer == Answer::Yes {
            Verdict::yes(CIT_EXACT_FINDIM, "finite-dimensional algebras are exact")
        } else {
            Verdict::unknown("the shifted-spectrum overlap does not contain this point")
        }
    } else if type_i.answer == Answer::Yes {
        Verdict::yes(CIT_EXACT_FINDIM, "finite-dimensional algebras are exact")
    } else {
        Verdict::unknown("the non-exactness overlap is defined only for n > 6")
    };

    let nuclear = if exact.answer == Answer::No {
        Verdict::no(CIT_NUCLEAR_EXACT, "nuclear algebras are exact")
    } else if n > 6 && position == Some(SegmentPosition::Interior) {
        match orbit_meets_window(n, lambda)? {
            Some(witness) => Verdict::no(
                CIT_NUCLEAR_ORBIT,
                format!(
                    "the orbit of lambda under the interval self-map reaches {witness}, a \
                     non-exact point; nuclearity is constant along orbits"
                ),
            ),
            None => {
                if type_i.answer == Answer::Yes {
                    Verdict::yes(
                        CIT_NUCLEAR_FINDIM,
                        "finite-dimensional algebras are nuclear",
                    )
                } else {
                    Verdict::unknown("the orbit avoids the non-exactness window")
                }
            }
        }
    } else if type_i.answer == Answer::Yes {
        Verdict::yes(
            CIT_NUCLEAR_FINDIM,
            "finite-dimensional algebras are nuclear",
        )
    } else {
        Verdict::unknown("no nuclearity criterion applies")
    };

    let simple = (|| {
        if let Some(r) = lambda.as_rational() {
            if r.is_zero() || r == &Rational::from_int(i64::from(n)) {
                return Verdict::yes(
                    CIT_SIMPLE_SCALAR,
                    "all projections are forced to 0 (or all to 1); the algebra is the scalars",
                );
            }
            if matches!(&position, Some(p) if p.is_inside_closed()) {
                return Verdict::no(
                    CIT_SIMPLE_RATIONAL,
                    "rational segment points are infinite-dimensional yet admit a \
                     finite-dimensional representation",
                );
            }
        }
        if n >= 2 {
            let fewer = spectra::sigma_membership(n - 1, lambda, depth)
                .map(|s| s.is_certified_member())
                .unwrap_or(false);
            if fewer {
                return Verdict::no(
                    CIT_SIMPLE_DROP,
                    format!(
                        "lambda is also a sum of {} projections; sending the last projection \
                         to 0 yields a proper quotient",
                        n - 1
                    ),
                );
            }
        }
        if n <= 4 && status.tag == SigmaTag::InDiscreteCertified {
            return Verdict::unknown(
                "the algebra is a full matrix algebra or a sum of them; which of the two is \
                 not decided per point",
            );
        }
        Verdict::unknown("no simplicity criterion applies")
    })();

    let stable = match position {
        Some(p) if p.is_inside_closed() => Verdict::no(
            CIT_STABLE_SEGMENT,
            "near-representations at nearby rational scalars exist in dimensions admitting no \
             exact representation",
        ),
        _ => Verdict::unknown("stability is only addressed on the segment"),
    };

    Ok(Dossier {
        n,
        lambda: lambda.clone(),
        sigma_status: status,
        trace_exists,
        finite_dim_rep,
        type_i,
        exact,
        nuclear,
        simple,
        stable,
    })
}

fn merge_field(own: Verdict, mirror: &Verdict, mirrored_lambda: &QuadraticReal) -> Verdict {
    if own.answer == Answer::Unknown && mirror.answer != Answer::Unknown {
        return Verdict {
            answer: mirror.answer,
            citation: format!("{CIT_MIRROR_PREFIX}{}", mirror.citation),
            detail: format!(
                "decided at the complementary scalar {mirrored_lambda}: {}",
                mirror.detail
            ),
        };
    }
    own
}

/// Full dossier, symmetrized across the complement `λ ↦ n − λ`.
pub fn classify(n: u32, lambda: &QuadraticReal, depth: u32) -> Result<Dossier, ClassifyError> {
    if n == 0 {
        return Err(ClassifyError::Domain { min: 1, got: 0 });
    }
    let own = classify_one_sided(n, lambda, depth)?;
    let mirrored_lambda = spectra::complement_map(n, lambda);
    let mirror = classify_one_sided(n, &mirrored_lambda, depth)?;
    Ok(Dossier {
        n,
        lambda: own.lambda,
        sigma_status: own.sigma_status,
        trace_exists: merge_field(own.trace_exists, &mirror.trace_exists, &mirrored_lambda),
        finite_dim_rep: merge_field(own.finite_dim_rep, &mirror.finite_dim_rep, &mirrored_lambda),
        type_i: merge_field(own.type_i, &mirror.type_i, &mirrored_lambda),
        exact: merge_field(own.exact, &mirror.exact, &mirrored_lambda),
        nuclear: merge_field(own.nuclear, &mirror.nuclear, &mirrored_lambda),
        simple: merge_field(own.simple, &mirror.simple, &mirrored_lambda),
        stable: merge_field(own.stable, &mirror.stable, &mirrored_lambda),
    })
}

/// Verdict on whether `λ·1` is a sum of `n` projections inside the UHF
/// algebra with supernatural number `nu`.
#[derive(Debug, Clone, Serialize)]
pub struct UhfVerdict {
    pub answer: Answer,
    pub membership: SigmaStatus,
    pub denominator_divides: bool,
    /// True when the Yes rests on an uncertified candidate membership.
    pub candidate_basis: bool,
}

pub fn uhf_sigma_contains(
    n: u32,
    lambda: &Rational,
    nu: &SupernaturalNumber,
    depth: u32,
) -> Result<UhfVerdict, ClassifyError> {
    let membership = spectra::sigma_membership(n, &QuadraticReal::from(lambda.clone()), depth)?;
    let q = lambda
        .denom()
        .to_u64()
        .map(|q| nu.divides(q))
        .unwrap_or(false);
    let answer = if !q {
        Answer::No
    } else if membership.is_member_allowing_candidates() {
        Answer::Yes
    } else if membership.tag == SigmaTag::NotInSigmaCertified {
        Answer::No
    } else {
        Answer::Unknown
    };
    Ok(UhfVerdict {
        answer,
        candidate_basis: membership.tag == SigmaTag::InDiscreteCandidate,
        membership,
        denominator_divides: q,
    })
}

/// All scalars `p/q` with `q ≤ q_max` realizable in the UHF algebra, sorted.
/// The result is generally not closed: for `n ≥ 5` it accumulates at the
/// irrational segment endpoints, which are never members.
pub fn uhf_sigma_enumerate(
    n: u32,
    nu: &SupernaturalNumber,
    q_max: u32,
    depth: u32,
) -> Result<Vec<Rational>, ClassifyError> {
    if q_max == 0 {
        return Err(ClassifyError::Domain { min: 1, got: 0 });
    }
    let segment = if n >= 5 {
        Some(spectra::segment_endpoints(n)?)
    } else {
        None
    };
    let candidates = if n >= 5 {
        Some(spectra::discrete_candidates(n, depth)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for q in 1..=i64::from(q_max) {
        if !nu.divides(q as u64) {
            continue;
        }
        for p in 0..=(i64::from(n) * q) {
            let lambda = Rational::new(p, q);
            if lambda.denom().to_i64() != Some(q) {
                continue; // not in lowest terms with this denominator
            }
            let member = match (&segment, &candidates) {
                (Some(seg), Some(cands)) => {
                    seg.position(&QuadraticReal::from(lambda.clone()))
                        .is_inside_closed()
                        || cands.contains(&lambda)
                }
                _ => spectra::sigma_small_n(n, &lambda)?.tag == SigmaTag::InDiscreteCertified,
            };
            if member {
                out.push(lambda);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn quad(s: &str) -> QuadraticReal {
        s.parse().unwrap()
    }

    #[test]
    fn supernatural_parsing_and_divisibility() {
        let car: SupernaturalNumber = "2:inf".parse().unwrap();
        assert!(car.divides(4));
        assert!(!car.divides(3));
        assert!(car.divides(1));
        let mixed: SupernaturalNumber = "2:2,3:1".parse().unwrap();
        assert!(mixed.divides(12)); // 12 = 2²·3
        assert!(!mixed.divides(8)); // 2³ needs exponent 3
        assert!("4:1".parse::<SupernaturalNumber>().is_err());
        assert!("2:0".parse::<SupernaturalNumber>().is_err());
        let one: SupernaturalNumber = "1".parse().unwrap();
        assert!(one.divides(1));
        assert!(!one.divides(2));
    }

    #[test]
    fn type_i_candidate_counts() {
        assert_eq!(
            type_i_sigma_candidates(2, 1).unwrap(),
            vec![rat("0"), rat("1"), rat("2")]
        );
        let c = type_i_sigma_candidates(3, 2).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c[1], rat("1/2"));
    }

    #[test]
    fn exactness_windows_for_small_n() {
        let w = exactness_window(7, 10).unwrap();
        assert_eq!(w.certified_points, vec![rat("3"), rat("4")]);
        assert!(!w.truncated);
        let w = exactness_window(9, 10).unwrap();
        assert_eq!(
            w.certified_points,
            vec![rat("3"), rat("4"), rat("9/2"), rat("5"), rat("6")]
        );
        let w = exactness_window(12, 10).unwrap();
        let (lo, hi) = w.interval.unwrap();
        assert_eq!(lo, quad("(12 - 1*sqrt(12))/2"));
        assert_eq!(hi, quad("(12 + 1*sqrt(12))/2"));
        assert!(exactness_window(6, 5).is_err());
    }

    #[test]
    fn dossier_for_seven_three() {
        let d = classify(7, &quad("3"), 40).unwrap();
        assert_eq!(d.exact.answer, Answer::No);
        assert_eq!(d.nuclear.answer, Answer::No);
        assert_eq!(d.type_i.answer, Answer::No);
        assert_eq!(d.finite_dim_rep.answer, Answer::Yes);
        assert_eq!(d.trace_exists.answer, Answer::Yes);
        assert_eq!(d.simple.answer, Answer::No);
        assert_eq!(d.stable.answer, Answer::No);
    }

    #[test]
    fn dossier_for_endpoint() {
        let alpha5 = quad("(5 - 1*sqrt(5))/2");
        let d = classify(5, &alpha5, 40).unwrap();
        assert_eq!(d.type_i.answer, Answer::No);
        assert_eq!(d.finite_dim_rep.answer, Answer::No);
        assert_eq!(d.trace_exists.answer, Answer::Yes);
        assert_eq!(d.exact.answer, Answer::Unknown);
        assert_eq!(d.stable.answer, Answer::No);
    }

    #[test]
    fn dossier_orbit_rule_for_twelve() {
        let d = classify(12, &quad("7/6"), 40).unwrap();
        assert_eq!(d.nuclear.answer, Answer::No);
        assert_eq!(d.nuclear.citation, CIT_NUCLEAR_ORBIT);
        assert!(d.nuclear.detail.contains('5'));
        assert_eq!(d.exact.answer, Answer::Unknown);
        assert_eq!(d.stable.answer, Answer::No);
    }

    #[test]
    fn dossier_for_four_thirds() {
        let d = classify(4, &quad("4/3"), 40).unwrap();
        assert_eq!(d.type_i.answer, Answer::Yes);
        assert_eq!(d.exact.answer, Answer::Yes);
        assert_eq!(d.nuclear.answer, Answer::Yes);
        assert_eq!(d.simple.answer, Answer::Unknown);
    }

    #[test]
    fn complement_symmetry_decides_the_mirror() {
        // 3/2 is a sum of three projections, so the four-projection algebra
        // at 3/2 has the drop-projection quotient; by complement symmetry the
        // verdict transfers to 5/2.
        let d = classify(4, &quad("3/2"), 40).unwrap();
        assert_eq!(d.simple.answer, Answer::No);
        let m = classify(4, &quad("5/2"), 40).unwrap();
        assert_eq!(m.simple.answer, Answer::No);
        assert!(m.simple.citation.starts_with(CIT_MIRROR_PREFIX));
    }

    #[test]
    fn scalar_extremes_are_simple() {
        let d = classify(3, &quad("0"), 10).unwrap();
        assert_eq!(d.simple.answer, Answer::Yes);
        let d = classify(3, &quad("3"), 10).unwrap();
        assert_eq!(d.simple.answer, Answer::Yes);
    }

    #[test]
    fn uhf_contains_and_enumerate() {
        let car: SupernaturalNumber = "2:inf".parse().unwrap();
        let v = uhf_sigma_contains(4, &rat("3/2"), &car, 40).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let v = uhf_sigma_contains(4, &rat("4/3"), &car, 40).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(!v.denominator_divides);
        let all = uhf_sigma_enumerate(2, &car, 100, 40).unwrap();
        assert_eq!(all, vec![rat("0"), rat("1"), rat("2")]);
    }

    #[test]
    fn uhf_enumerate_for_four_with_car_algebra() {
        let car: SupernaturalNumber = "2:inf".parse().unwrap();
        let pts = uhf_sigma_enumerate(4, &car, 8, 40).unwrap();
        // Tail points whose reduced denominator is a power of two up to 8:
        // k ∈ {0, 2, 6} have k+2 a power of two, and k = 14 reduces
        // (14/16 = 7/8), giving 15/8 and its mirror 17/8.
        let expected: Vec<Rational> = [
            "0", "1", "3/2", "7/4", "15/8", "2", "17/8", "9/4", "5/2", "3", "4",
        ]
        .iter()
        .map(|s| rat(s))
        .collect();
        assert_eq!(pts, expected);
    }

    #[test]
    fn uhf_monotone_in_supernatural_number() {
        let small: SupernaturalNumber = "2:1".parse().unwrap();
        let large: SupernaturalNumber = "2:inf,3:1".parse().unwrap();
        let small_pts = uhf_sigma_enumerate(5, &small, 12, 40).unwrap();
        let large_pts = uhf_sigma_enumerate(5, &large, 12, 40).unwrap();
        for p in &small_pts {
            assert!(large_pts.contains(p), "{p} lost under a larger invariant");
        }
    }
}
