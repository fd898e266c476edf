//! Exact rational arithmetic and dense univariate polynomials.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. [`DensePolynomial`] stores
//! coefficients in ascending order with trailing zeros trimmed, so two equal
//! polynomials always compare equal structurally.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact big-integer fraction.
pub type Rational = BigRational;

/// Builds `num/den` as a rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy conversion used by every float evaluation path.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Canonical text form: `"num/den"`, or `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p/q"`, an integer, or a terminating decimal (optionally with an
/// exponent such as `1e-6`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}0")
        .parse::<BigInt>()
        .map_err(|_| bad())?
        / 10;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Univariate polynomial with exact rational coefficients, `coeffs[i]`
/// multiplying `x^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePolynomial {
    coeffs: Vec<Rational>,
}

impl DensePolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Convenience constructor from `(num, den)` pairs in ascending order.
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Self {
        Self::new(coeffs.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Exact evaluation by Horner's scheme.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Float coefficients, ascending.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Horner evaluation after converting coefficients to `f64`.
    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.to_f64_coeffs(), x)
    }
}

/// Horner evaluation of ascending float coefficients.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `p + q`.
pub fn poly_add(p: &DensePolynomial, q: &DensePolynomial) -> DensePolynomial {
    let len = p.coeffs.len().max(q.coeffs.len());
    DensePolynomial::new((0..len).map(|i| p.coeff(i) + q.coeff(i)).collect())
}

/// `p * q` by exact convolution.
pub fn poly_mul(p: &DensePolynomial, q: &DensePolynomial) -> DensePolynomial {
    if p.is_zero() || q.is_zero() {
        return DensePolynomial::zero();
    }
    let mut out = vec![Rational::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    DensePolynomial::new(out)
}

pub fn poly_derivative(p: &DensePolynomial) -> DensePolynomial {
    p.derivative()
}

pub fn poly_eval_real(p: &DensePolynomial, x: f64) -> f64 {
    p.eval_f64(x)
}

impl Add for &DensePolynomial {
    type Output = DensePolynomial;
    fn add(self, rhs: Self) -> DensePolynomial {
        poly_add(self, rhs)
    }
}

impl Sub for &DensePolynomial {
    type Output = DensePolynomial;
    fn sub(self, rhs: Self) -> DensePolynomial {
        poly_add(self, &-rhs)
    }
}

impl Mul for &DensePolynomial {
    type Output = DensePolynomial;
    fn mul(self, rhs: Self) -> DensePolynomial {
        poly_mul(self, rhs)
    }
}

impl Neg for &DensePolynomial {
    type Output = DensePolynomial;
    fn neg(self) -> DensePolynomial {
        DensePolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePolynomial({self})")
    }
}

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) if mag.is_integer() => write!(f, "{mag}")?,
                (_, false) => write!(f, "({mag})")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<String>,
}

impl Serialize for DensePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(DensePolynomial::new(coeffs))
    }
}

/// Serde adapter for a single rational stored as a fraction string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}
