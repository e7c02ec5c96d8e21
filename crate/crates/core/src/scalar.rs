//! Number types used for game values and rewards.
//!
//! Every game, reward matrix and axiom check is generic over [`Scalar`]. Two
//! implementations exist: [`Rational`] (arbitrary-precision exact fractions,
//! the default) and `f64` (needed when a computation leaves the rationals, for
//! example raising a ratio to an irrational power).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Which number representation a game (and everything derived from it) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumberMode {
    Rational,
    Float,
}

impl NumberMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NumberMode::Rational => "rational",
            NumberMode::Float => "float",
        }
    }
}

impl fmt::Display for NumberMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NumberMode {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(NumberMode::Rational),
            "float" => Ok(NumberMode::Float),
            other => Err(ParseScalarError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("cannot parse {0:?} as a number")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0:?} is not a finite number")]
    NotFinite(String),
    #[error("unknown number mode {0:?} (expected \"rational\" or \"float\")")]
    UnknownMode(String),
}

/// Numeric operations the mechanism, baselines and axiom checks need.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    const MODE: NumberMode;

    fn zero() -> Self;
    fn one() -> Self;
    /// `num / den`; panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion of a binary64 value; `None` for NaN or infinities.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// False for NaN and infinities. Always true for rationals.
    fn is_finite(&self) -> bool;
    fn abs(&self) -> Self;
    /// `self^exponent`, or `None` when the result is not representable.
    fn checked_pow(&self, exponent: &Self) -> Option<Self>;
    /// Parses a decimal (`2.5`, `-3e2`) or a fraction (`7/3`).
    fn parse(s: &str) -> Result<Self, ParseScalarError>;
    /// Canonical text form: `p/q` for rationals, 12 significant digits for floats.
    fn render(&self) -> String;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn from_int(x: i64) -> Self {
        Self::from_ratio(x, 1)
    }
}

impl Scalar for Rational {
    const MODE: NumberMode = NumberMode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn checked_pow(&self, exponent: &Self) -> Option<Self> {
        if exponent.is_one() || self.is_one() {
            Some(self.clone())
        } else if Zero::is_zero(exponent) {
            Some(One::one())
        } else if Zero::is_zero(self) && exponent.is_positive() {
            Some(Zero::zero())
        } else if exponent.is_integer() && exponent.is_positive() {
            let e = exponent.to_integer().to_u32()?;
            Some(num_traits::pow(self.clone(), e as usize))
        } else {
            None
        }
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const MODE: NumberMode = NumberMode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn checked_pow(&self, exponent: &Self) -> Option<Self> {
        let r = self.powf(*exponent);
        r.is_finite().then_some(r)
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        let x = if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
            if q == 0.0 {
                return Err(ParseScalarError::ZeroDenominator(s.to_string()));
            }
            p / q
        } else {
            // Rust accepts "inf"/"nan" here; those are rejected just below.
            t.parse()
                .map_err(|_| ParseScalarError::Malformed(s.to_string()))?
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(ParseScalarError::NotFinite(s.to_string()))
        }
    }

    fn render(&self) -> String {
        format_significant(*self, 12)
    }
}

fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let t = s.trim();
    let malformed = || ParseScalarError::Malformed(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| malformed())?;
        let q: BigInt = q.trim().parse().map_err(|_| malformed())?;
        if q.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| malformed())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| malformed())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Formats `x` with `digits` significant digits, `%g` style: positional
/// notation for moderate exponents, scientific otherwise, trailing zeros
/// stripped.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// How axiom checks compare two scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Exact comparison.
    Exact,
    /// Values within `eps` of each other compare equal.
    Absolute(f64),
}

impl Tolerance {
    pub const FLOAT_DEFAULT: Tolerance = Tolerance::Absolute(1e-9);

    /// An absolute tolerance; `None` unless `eps` is finite and positive.
    pub fn absolute(eps: f64) -> Option<Self> {
        (eps.is_finite() && eps > 0.0).then_some(Tolerance::Absolute(eps))
    }

    /// Exact for rationals, `1e-9` absolute for floats.
    pub fn default_for(mode: NumberMode) -> Self {
        match mode {
            NumberMode::Rational => Tolerance::Exact,
            NumberMode::Float => Tolerance::FLOAT_DEFAULT,
        }
    }

    pub fn compare<S: Scalar>(&self, a: &S, b: &S) -> Ordering {
        match *self {
            Tolerance::Exact => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            Tolerance::Absolute(eps) => {
                let d = (a.clone() - b.clone()).to_f64();
                if d.abs() <= eps {
                    Ordering::Equal
                } else if d > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.compare(a, b) == Ordering::Equal
    }

    /// Strictly greater: in absolute mode `a - b` must exceed `eps`.
    pub fn gt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.compare(a, b) == Ordering::Greater
    }

    pub fn ge<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.compare(a, b) != Ordering::Less
    }

    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.compare(a, b) != Ordering::Greater
    }
}
