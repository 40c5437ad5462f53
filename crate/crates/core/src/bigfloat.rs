//! Working-precision arithmetic.
//!
//! Every high-precision computation in the crate runs at a [`Precision`]
//! chosen by the caller; values are converted to machine doubles only when
//! they leave a computation. Real values are MPFR floats (`rug::Float`);
//! [`BigComplex`] is a plain pair of them with the handful of operations the
//! moment and root-finding code needs.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::{Pow, PowAssign};
use rug::{Assign, Float, Rational};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Number of decimal digits carried by a high-precision computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    /// Default working precision for Pade constructions.
    pub const DEFAULT_DIGITS: u32 = 500;
    /// Guard bits added on top of the requested decimal digits.
    const GUARD_BITS: u32 = 32;

    pub fn new(digits: u32) -> Self {
        Precision { digits: digits.max(1) }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + Self::GUARD_BITS
    }

    pub fn float<T>(self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(self) -> Float {
        self.float(0)
    }

    pub fn one(self) -> Float {
        self.float(1)
    }

    pub fn pi(self) -> Float {
        self.float(Constant::Pi)
    }

    /// `10^(-digits)`.
    pub fn epsilon(self) -> Float {
        self.pow10(-(self.digits as i32))
    }

    pub fn pow10(self, exp: i32) -> Float {
        let mut x = self.float(10);
        x.pow_assign(exp);
        x
    }

    /// Parses a decimal (`-0.723914`, `1e-3`) or rational (`187/64`) literal exactly.
    pub fn parse_exact(self, text: &str) -> Result<Float> {
        Ok(self.float(&parse_rational(text)?))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(Self::DEFAULT_DIGITS)
    }
}

/// Parses `p/q`, integers and decimal literals (with optional exponent) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidParams(format!("cannot parse number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d == 0 {
            return Err(Error::InvalidParams(format!("zero denominator in '{text}'")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let integer =
        rug::Integer::from_str_radix(if all_digits.is_empty() { "0" } else { &all_digits }, 10).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let mut value = Rational::from(integer);
    let ten = Rational::from(rug::Integer::from(10).pow(scale.unsigned_abs()));
    if scale >= 0 {
        value *= ten;
    } else {
        value /= ten;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Formats a float with `digits` significant decimal digits in scientific notation.
pub fn to_sci_string(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Complex number over MPFR floats.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::with_val(re.prec(), 0);
        BigComplex { re, im }
    }

    pub fn from_c64(prec: Precision, z: Complex64) -> Self {
        BigComplex::new(prec.float(z.re), prec.float(z.im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn zero(prec: Precision) -> Self {
        BigComplex::new(prec.zero(), prec.zero())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    /// Modulus `|z|`.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let den = Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref());
        BigComplex::new(
            Float::with_val(p, &self.re / &den),
            Float::with_val(p, -(&self.im / den)),
        )
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() {
            return if self.re.is_sign_negative() && !self.re.is_zero() {
                BigComplex::new(Float::with_val(p, 0), Float::with_val(p, -&self.re).sqrt())
            } else {
                BigComplex::new(self.re.clone().sqrt(), Float::with_val(p, 0))
            };
        }
        let modulus = self.abs();
        let re = (Float::with_val(p, &modulus + &self.re) / 2u32).sqrt();
        let mut im = (Float::with_val(p, &modulus - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        BigComplex::new(re, im)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        BigComplex::new(self.abs().ln(), Float::with_val(p, self.im.atan2_ref(&self.re)))
    }

    /// `true` when `|Im z| <= tol * max(1, |z|)`.
    pub fn is_real_within(&self, tol: &Float) -> bool {
        let mut scale = self.abs();
        if scale < 1 {
            scale.assign(1);
        }
        Float::with_val(self.prec(), self.im.abs_ref()) <= Float::with_val(self.prec(), tol * &scale)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}i)", to_sci_string(&self.re, 20), to_sci_string(&self.im, 20))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex::new(re, im)
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
}

impl Add<&Float> for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &Float) -> BigComplex {
        BigComplex::new(Float::with_val(self.prec(), &self.re + o), self.im.clone())
    }
}

impl Sub<&Float> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &Float) -> BigComplex {
        BigComplex::new(Float::with_val(self.prec(), &self.re - o), self.im.clone())
    }
}
