//! Exact scalars: arbitrary-precision rationals and real quadratic irrationals.
//!
//! Everything the rest of the crate compares, iterates or classifies is decided
//! here without floating-point error. Two value types:
//!
//! * [`Rational`] — arbitrary-precision `p/q`, always in lowest terms with a
//!   positive denominator.
//! * [`QuadraticReal`] — `a + b*sqrt(rad)` with rational `a`, `b` and a fixed
//!   nonnegative integer radicand. Perfect-square radicands collapse to the
//!   rational form at construction, so structural equality is value equality.
//!
//! Radicands are kept verbatim (never reduced square-free). Arithmetic between
//! two irrationals with different radicands is refused rather than extended to
//! a biquadratic field; mixing with rationals is always allowed.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactNumError {
    /// Both operands are irrational and live in different quadratic fields.
    #[error("mixed radicands: sqrt({0}) and sqrt({1}) are incommensurable here")]
    MixedRadicand(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a {1}")]
    Parse(String, &'static str),
}

/// Arbitrary-precision rational in canonical form (`gcd(num, den) = 1`,
/// `den > 0`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to canonical form.
    ///
    /// Panics if `den == 0`; use [`Rational::from_str`] for fallible input.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The integer value, when the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Multiplicative inverse; `Err` on zero.
    pub fn recip(&self) -> Result<Self, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Result<Self, ExactNumError> {
        if exp < 0 && self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        Ok(Rational(self.0.pow(exp)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back to a quotient of approximations for huge operands.
            let n = self.0.numer().to_f64().unwrap_or(f64::MAX);
            let d = self.0.denom().to_f64().unwrap_or(f64::MAX);
            n / d
        })
    }

    /// Exact dyadic value of a finite float (every finite `f64` is rational).
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub(crate) fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

macro_rules! forward_rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_rational_binop!(Add, add);
forward_rational_binop!(Sub, sub);
forward_rational_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ExactNumError;

    /// Accepts `p`, `p/q` and plain decimals such as `1.25` or `-.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ExactNumError::Parse(s.to_string(), "rational");
        if let Some((num, den)) = s.split_once('/') {
            let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
            if den.is_zero() {
                return Err(ExactNumError::DivisionByZero);
            }
            return Ok(Rational::new(num, den));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (sign, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
                return Err(err());
            }
            if !int_digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let digits = format!("{int_digits}{frac_part}");
            let num = BigInt::from_str(&digits).map_err(|_| err())?;
            let den = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Rational::new(num * sign, den));
        }
        let n = BigInt::from_str(s).map_err(|_| err())?;
        Ok(Rational::from_int(n))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_int(BigInt::from(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `a + b*sqrt(rad)` with exact rational coefficients.
///
/// Normal form: either `b != 0` and `rad` is a non-square positive integer, or
/// `b == 0` and `rad == 0` (a plain rational). [`QuadraticReal::new`] restores
/// the normal form, folding perfect-square radicands into the rational part,
/// so `==` decides value equality within one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: Rational,
    b: Rational,
    rad: u64,
}

impl QuadraticReal {
    pub fn new(a: Rational, b: Rational, rad: u64) -> Self {
        if b.is_zero() {
            return QuadraticReal {
                a,
                b: Rational::zero(),
                rad: 0,
            };
        }
        let root = rad.sqrt();
        if root * root == rad {
            QuadraticReal {
                a: &a + &(&b * &Rational::from_int(BigInt::from(root))),
                b: Rational::zero(),
                rad: 0,
            }
        } else {
            QuadraticReal { a, b, rad }
        }
    }

    /// `sqrt(rad)` itself.
    pub fn sqrt_of(rad: u64) -> Self {
        QuadraticReal::new(Rational::zero(), Rational::one(), rad)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The radicand shared by both operands, or an error when both are
    /// irrational over different radicands.
    fn joint_rad(&self, other: &Self) -> Result<u64, ExactNumError> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.rad),
            (_, true) => Ok(self.rad),
            (false, false) if self.rad == other.rad => Ok(self.rad),
            (false, false) => Err(ExactNumError::MixedRadicand(self.rad, other.rad)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactNumError> {
        let rad = self.joint_rad(other)?;
        Ok(QuadraticReal::new(
            &self.a + &other.a,
            &self.b + &other.b,
            rad,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactNumError> {
        let rad = self.joint_rad(other)?;
        let rad_rat = Rational::from_int(BigInt::from(rad));
        // (a1 + b1√d)(a2 + b2√d) = a1a2 + b1b2 d + (a1b2 + b1a2)√d
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * &rad_rat);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        Ok(QuadraticReal::new(a, b, rad))
    }

    pub fn neg(&self) -> Self {
        QuadraticReal {
            a: -&self.a,
            b: -&self.b,
            rad: self.rad,
        }
    }

    /// Exact inverse via the conjugate: `1/(a+b√d) = (a−b√d)/(a²−b²d)`.
    pub fn inv(&self) -> Result<Self, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(QuadraticReal::from(r.recip()?));
        }
        let rad_rat = Rational::from_int(BigInt::from(self.rad));
        // Nonzero for irrational values: a² = b²d would make √d rational.
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &rad_rat);
        let inv_norm = norm.recip()?;
        Ok(QuadraticReal::new(
            &self.a * &inv_norm,
            &(-&self.b) * &inv_norm,
            self.rad,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactNumError> {
        self.mul(&other.inv()?)
    }

    pub fn conjugate(&self) -> Self {
        QuadraticReal {
            a: self.a.clone(),
            b: -&self.b,
            rad: self.rad,
        }
    }

    /// Sign of the value, decided by integer arithmetic only.
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.as_ratio().cmp(&BigRational::zero());
        }
        let a_sign = self.a.as_ratio().cmp(&BigRational::zero());
        let b_sign = self.b.as_ratio().cmp(&BigRational::zero());
        match (a_sign, b_sign) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: compare a² against b²·d on the dominant side.
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let b2d = &(&self.b * &self.b) * &Rational::from_int(BigInt::from(self.rad));
                match a2.as_ratio().cmp(b2d.as_ratio()) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => a_sign,
                    Ordering::Less => b_sign,
                }
            }
        }
    }

    /// Total order within one field (or against rationals); errors on mixed
    /// radicands.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, ExactNumError> {
        Ok(self.sub(other)?.sign())
    }

    /// Comparison against a rational is always decidable.
    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        QuadraticReal {
            a: &self.a - other,
            b: self.b.clone(),
            rad: self.rad,
        }
        .sign()
    }

    /// Exact floor, using an integer square root plus a constant number of
    /// exact comparisons.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor();
        }
        // x = (A + B√d)/D with integer A, B and D > 0.
        let ad = self.a.denom();
        let bd = self.b.denom();
        let a_num = self.a.numer() * bd;
        let b_num = self.b.numer() * ad;
        let d = ad * bd;
        let t: BigInt = &b_num * &b_num * BigInt::from(self.rad);
        let s = t.sqrt();
        let num_lo = if b_num.is_negative() {
            &a_num - &s - BigInt::one()
        } else {
            &a_num + &s
        };
        let mut c = num_lo.div_floor(&d);
        loop {
            if self.cmp_rational(&Rational::from_int(c.clone())) == Ordering::Less {
                c -= 1;
                continue;
            }
            if self.cmp_rational(&Rational::from_int(&c + BigInt::one())) != Ordering::Less {
                c += 1;
                continue;
            }
            return c;
        }
    }

    /// Correctly rounded decimal expansion with `digits` fractional digits
    /// (ties round away from zero; ties only arise for rational values).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = Rational::from_int(BigInt::from(10u32).pow(digits as u32));
        let scaled = self.mul_rational(&scale);
        let c = scaled.floor();
        let half_point = Rational::new(&c * 2 + 1, BigInt::from(2));
        let rounded = match scaled.cmp_rational(&half_point) {
            Ordering::Less => c,
            Ordering::Greater => &c + 1,
            Ordering::Equal => {
                if scaled.sign() == Ordering::Less {
                    c
                } else {
                    &c + 1
                }
            }
        };
        let negative = rounded.is_negative();
        let mag = rounded.magnitude().to_string();
        let mag = if mag.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = mag.len() - digits;
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{mag}")
        } else {
            format!("{sign}{}.{}", &mag[..split], &mag[split..])
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.rad as f64).sqrt()
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        QuadraticReal {
            a: &self.a + r,
            b: self.b.clone(),
            rad: self.rad,
        }
    }

    pub fn sub_rational(&self, r: &Rational) -> Self {
        QuadraticReal {
            a: &self.a - r,
            b: self.b.clone(),
            rad: self.rad,
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        QuadraticReal::new(&self.a * r, &self.b * r, self.rad)
    }
}

impl From<Rational> for QuadraticReal {
    fn from(a: Rational) -> Self {
        QuadraticReal {
            a,
            b: Rational::zero(),
            rad: 0,
        }
    }
}

impl From<i64> for QuadraticReal {
    fn from(n: i64) -> Self {
        QuadraticReal::from(Rational::from_int(n))
    }
}

impl fmt::Display for QuadraticReal {
    /// Canonical text form: `p/q` for rationals, otherwise
    /// `(A ± B*sqrt(D))/C` with integer `A`, `B`, `C > 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let c: BigInt = self.a.denom().lcm(self.b.denom());
        let a = self.a.numer() * (&c / self.a.denom());
        let b = self.b.numer() * (&c / self.b.denom());
        let sign = if b.is_negative() { '-' } else { '+' };
        let b_abs = b.magnitude();
        if c.is_one() {
            write!(f, "({a} {sign} {b_abs}*sqrt({}))", self.rad)
        } else {
            write!(f, "({a} {sign} {b_abs}*sqrt({}))/{c}", self.rad)
        }
    }
}

impl fmt::Debug for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QuadraticReal {
    type Err = ExactNumError;

    /// Accepts everything [`Rational::from_str`] does, plus
    /// `(A + B*sqrt(D))/C` (the `/C` part optional, coefficients rational).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(r) = Rational::from_str(s) {
            return Ok(QuadraticReal::from(r));
        }
        let err = || ExactNumError::Parse(s.to_string(), "quadratic real");
        let (body, denom) = if let Some(stripped) = s.strip_prefix('(') {
            let close = stripped.rfind(')').ok_or_else(err)?;
            let body = &stripped[..close];
            let tail = stripped[close + 1..].trim();
            let denom = if tail.is_empty() {
                Rational::one()
            } else {
                let tail = tail.strip_prefix('/').ok_or_else(err)?;
                Rational::from_str(tail)?
            };
            (body, denom)
        } else {
            (s, Rational::one())
        };
        if denom.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        let sqrt_pos = body.find("sqrt(").ok_or_else(err)?;
        let after = &body[sqrt_pos + 5..];
        let close = after.find(')').ok_or_else(err)?;
        let rad: u64 = after[..close].trim().parse().map_err(|_| err())?;
        if !after[close + 1..].trim().is_empty() {
            return Err(err());
        }
        let head = body[..sqrt_pos].trim_end();
        let head = head.strip_suffix('*').unwrap_or(head).trim_end();
        // Split `head` as `A ± B`, scanning for the sign that separates terms.
        let mut split = None;
        for (i, ch) in head.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&head[i - 1..i], "e" | "E" | "/") {
                split = Some((i, ch));
            }
        }
        let (a, b) = match split {
            Some((i, ch)) => {
                let a = Rational::from_str(&head[..i])?;
                let b_txt = head[i + 1..].trim();
                let b = if b_txt.is_empty() {
                    Rational::one()
                } else {
                    Rational::from_str(b_txt)?
                };
                (a, if ch == '-' { -b } else { b })
            }
            None => {
                let b_txt = head.trim();
                let b = if b_txt.is_empty() || b_txt == "+" {
                    Rational::one()
                } else if b_txt == "-" {
                    -Rational::one()
                } else {
                    Rational::from_str(b_txt)?
                };
                (Rational::zero(), b)
            }
        };
        let inv = denom.recip()?;
        Ok(QuadraticReal::new(&a * &inv, &b * &inv, rad))
    }
}

impl Serialize for QuadraticReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadraticReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Complex number with exact rational real and imaginary parts. Used as the
/// coefficient field of noncommutative polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        ComplexRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexRational::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        ComplexRational::from_rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ComplexRational {
            re: &(&self.re * &other.re) - &(&self.im * &other.im),
            im: &(&self.re * &other.im) + &(&self.im * &other.re),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexRational {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ComplexRational {
    type Err = ExactNumError;

    /// Parses `re+imi` / `re-imi` / `re` (each part a rational).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ExactNumError::Parse(s.to_string(), "complex rational");
        if let Some(body) = s.strip_suffix('i') {
            let mut split = None;
            for (i, ch) in body.char_indices().skip(1) {
                if ch == '+' || ch == '-' {
                    split = Some((i, ch));
                }
            }
            let (i, ch) = split.ok_or_else(err)?;
            let re = Rational::from_str(&body[..i])?;
            let im_txt = body[i + 1..].trim();
            let im = if im_txt.is_empty() {
                Rational::one()
            } else {
                Rational::from_str(im_txt)?
            };
            Ok(ComplexRational::new(re, if ch == '-' { -im } else { im }))
        } else {
            Ok(ComplexRational::from_rational(Rational::from_str(s)?))
        }
    }
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// by continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    let negative = x < 0.0;
    let mut x = x.abs();
    // Convergents p/q of the continued fraction expansion.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let cap = BigInt::from(max_den);
    for _ in 0..64 {
        let a = x.floor();
        if a > 9.0e18 {
            break;
        }
        let a_int = BigInt::from(a as i64);
        let p2 = &a_int * &p1 + &p0;
        let q2 = &a_int * &q1 + &q0;
        if q2 > cap {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = x - a;
        if frac < 1.0e-18 {
            break;
        }
        x = 1.0 / frac;
    }
    let value = Rational::new(p1, q1);
    if negative {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, rad: u64) -> QuadraticReal {
        QuadraticReal::new(Rational::from_int(a), Rational::from_int(b), rad)
    }

    fn qr(an: i64, ad: i64, bn: i64, bd: i64, rad: u64) -> QuadraticReal {
        QuadraticReal::new(Rational::new(an, ad), Rational::new(bn, bd), rad)
    }

    #[test]
    fn addition_composes_components() {
        let one = q(1, 0, 0);
        let root5 = q(0, 1, 5);
        assert_eq!(one.add(&root5).unwrap(), q(1, 1, 5));
    }

    #[test]
    fn root_times_itself_collapses_to_rational() {
        let root5 = q(0, 1, 5);
        let sq = root5.mul(&root5).unwrap();
        assert_eq!(sq, q(5, 0, 0));
        assert!(sq.is_rational());
    }

    #[test]
    fn conjugate_product_is_the_field_norm() {
        // (6 − 2√6)(6 + 2√6) = 36 − 4·6 = 12
        let x = q(6, -2, 6);
        let y = q(6, 2, 6);
        assert_eq!(x.mul(&y).unwrap(), q(12, 0, 0));
    }

    #[test]
    fn inverse_of_pure_root() {
        let root5 = q(0, 1, 5);
        let inv = root5.inv().unwrap();
        assert_eq!(inv, qr(0, 1, 1, 5, 5));
        assert_eq!(root5.mul(&inv).unwrap(), q(1, 0, 0));
    }

    #[test]
    fn inverse_of_rational() {
        let two = q(2, 0, 0);
        assert_eq!(two.inv().unwrap(), qr(1, 2, 0, 1, 0));
    }

    #[test]
    fn inverse_via_conjugate() {
        // 1/(6 − 2√6) = (6 + 2√6)/12 = 1/2 + (1/6)√6
        let x = q(6, -2, 6);
        let inv = x.inv().unwrap();
        assert_eq!(inv, qr(1, 2, 1, 6, 6));
        assert_eq!(x.mul(&inv).unwrap(), q(1, 0, 0));
    }

    #[test]
    fn zero_inverse_is_rejected() {
        assert_eq!(q(0, 0, 0).inv().unwrap_err(), ExactNumError::DivisionByZero);
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let e = q(0, 1, 5).add(&q(0, 1, 6)).unwrap_err();
        assert_eq!(e, ExactNumError::MixedRadicand(5, 6));
    }

    #[test]
    fn comparisons_match_known_values() {
        // (5−√5)/2 < 2 and (5+√5)/2 < 4
        let alpha = qr(5, 2, -1, 2, 5);
        let beta = qr(5, 2, 1, 2, 5);
        assert_eq!(alpha.cmp_rational(&Rational::from_int(2)), Ordering::Less);
        assert_eq!(beta.cmp_rational(&Rational::from_int(4)), Ordering::Less);
        assert_eq!(alpha.cmp_exact(&alpha).unwrap(), Ordering::Equal);
        assert_eq!(alpha.cmp_exact(&beta).unwrap(), Ordering::Less);
    }

    #[test]
    fn perfect_square_radicand_normalizes() {
        // 1 + 2*sqrt(9) = 7
        assert_eq!(q(1, 2, 9), q(7, 0, 0));
        // sqrt(0) folds away
        assert_eq!(q(3, 5, 0), q(3, 0, 0));
    }

    #[test]
    fn decimal_expansion_is_correctly_rounded() {
        let alpha = qr(5, 2, -1, 2, 5);
        let beta = qr(5, 2, 1, 2, 5);
        assert_eq!(alpha.to_decimal(6), "1.381966");
        assert_eq!(beta.to_decimal(6), "3.618034");
        let three_halves = QuadraticReal::from(Rational::new(3, 2));
        assert_eq!(three_halves.to_decimal(3), "1.500");
        let neg = QuadraticReal::from(Rational::new(-1, 8));
        assert_eq!(neg.to_decimal(2), "-0.13");
    }

    #[test]
    fn floor_of_surds() {
        assert_eq!(q(0, 1, 5).floor(), BigInt::from(2));
        assert_eq!(q(0, -1, 5).floor(), BigInt::from(-3));
        assert_eq!(qr(5, 2, -1, 2, 5).floor(), BigInt::from(1));
        assert_eq!(
            QuadraticReal::from(Rational::new(7, 2)).floor(),
            BigInt::from(3)
        );
    }

    #[test]
    fn display_parse_round_trip() {
        let values = [
            q(2, 0, 0),
            qr(1, 2, 0, 1, 0),
            qr(5, 2, -1, 2, 5),
            q(0, 1, 45),
            qr(-3, 7, 2, 21, 12),
        ];
        for v in values {
            let shown = v.to_string();
            let back: QuadraticReal = shown.parse().unwrap();
            assert_eq!(back, v, "round-trip failed for {shown}");
        }
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(Rational::from_str("3/6").unwrap(), Rational::new(1, 2));
        assert_eq!(Rational::from_str("-1.25").unwrap(), Rational::new(-5, 4));
        assert_eq!(Rational::from_str("7").unwrap(), Rational::from_int(7));
        assert!(Rational::from_str("1/0").is_err());
    }

    #[test]
    fn complex_rational_round_trip() {
        let c = ComplexRational::new(Rational::new(3, 2), Rational::new(-1, 4));
        let shown = c.to_string();
        assert_eq!(shown, "3/2-1/4i");
        let back: ComplexRational = shown.parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5, 1_000_000), Rational::new(1, 2));
        assert_eq!(rationalize(-2.0 / 3.0, 1_000_000), Rational::new(-2, 3));
        let pi_approx = rationalize(std::f64::consts::PI, 1000);
        assert_eq!(pi_approx, Rational::new(355, 113));
    }
}
