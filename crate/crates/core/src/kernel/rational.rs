use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

/// Direction used when a rational is rendered with finitely many digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward −∞.
    Down,
    /// Toward +∞.
    Up,
}

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator(format!("{numer}/0")));
        }
        Ok(Self(BigRational::new(numer, denom)))
    }

    /// Small-integer fraction. Panics when `denom == 0`.
    pub fn frac(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// 2^exp for any signed exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Self(BigRational::from_integer(p))
        } else {
            Self(BigRational::new_raw(BigInt::one(), p))
        }
    }

    pub(crate) fn from_big(r: BigRational) -> Self {
        Self(r)
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Bit length of the denominator.
    pub fn denom_bits(&self) -> u64 {
        self.0.denom().bits()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Largest multiple of 2^-bits not above `self`.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        let scaled = (self.0.numer() << bits as usize).div_floor(self.0.denom());
        Self(BigRational::new(scaled, BigInt::one() << bits as usize))
    }

    /// Smallest multiple of 2^-bits not below `self`.
    pub fn ceil_dyadic(&self, bits: u32) -> Self {
        let scaled = -((-(self.0.numer() << bits as usize)).div_floor(self.0.denom()));
        Self(BigRational::new(scaled, BigInt::one() << bits as usize))
    }

    /// Rounds to a dyadic rational carrying about `bits` significant bits, in
    /// the given direction. Zero is returned unchanged.
    pub fn round_relative(&self, bits: u32, dir: Rounding) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        // |x| ∈ [2^(e-1), 2^(e+1)) where e = bits(num) - bits(den)
        let e = self.numer().bits() as i64 - self.denom().bits() as i64;
        let shift = bits as i64 - e;
        let scaled = self * &Self::pow2(shift);
        let m = match dir {
            Rounding::Down => scaled.floor(),
            Rounding::Up => scaled.ceil(),
        };
        &Self::from_integer(m) * &Self::pow2(-shift)
    }

    /// Lossy conversion for display and test oracles. Never used on a
    /// certified path.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Renders with `sig` significant decimal digits, rounded in `dir`.
    pub fn to_decimal_directed(&self, sig: u32, dir: Rounding) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let e = decimal_exponent(&self.0.abs());
        let shift = sig as i64 - 1 - e;
        let scaled = &self.0 * pow10(shift);
        let m = match dir {
            Rounding::Down => scaled.floor().to_integer(),
            Rounding::Up => scaled.ceil().to_integer(),
        };
        format_scaled(&m, -shift)
    }

    /// Exact decimal expansion when the denominator has only the prime
    /// factors 2 and 5.
    pub fn to_decimal_exact(&self) -> Option<String> {
        let mut d = self.denom().clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let (mut a, mut b) = (0i64, 0i64);
        while d.is_even() {
            d /= &two;
            a += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            b += 1;
        }
        if !d.is_one() {
            return None;
        }
        let k = a.max(b);
        let m = (&self.0 * pow10(k)).to_integer();
        let mut s = format_plain(&m, -k);
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        Some(s)
    }
}

fn pow10(exp: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new_raw(BigInt::one(), p)
    }
}

/// floor(log10(x)) for x > 0.
fn decimal_exponent(x: &BigRational) -> i64 {
    let bits = x.numer().bits() as f64 - x.denom().bits() as f64;
    let mut e = (bits * std::f64::consts::LOG10_2).floor() as i64;
    while pow10(e) > *x {
        e -= 1;
    }
    while pow10(e + 1) <= *x {
        e += 1;
    }
    e
}

/// m · 10^exp, plain notation for moderate exponents, scientific otherwise.
fn format_scaled(m: &BigInt, exp: i64) -> String {
    let digits = m.abs().to_string();
    let lead = exp + digits.len() as i64 - 1;
    if (-20..=20).contains(&lead) {
        return format_plain(m, exp);
    }
    let sign = if m.is_negative() { "-" } else { "" };
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{lead}")
    } else {
        format!("{sign}{head}.{tail}e{lead}")
    }
}

fn format_plain(m: &BigInt, exp: i64) -> String {
    let sign = if m.is_negative() { "-" } else { "" };
    let digits = m.abs().to_string();
    if exp >= 0 {
        return format!("{sign}{digits}{}", "0".repeat(exp as usize));
    }
    let frac = (-exp) as usize;
    if digits.len() > frac {
        let (i, f) = digits.split_at(digits.len() - frac);
        format!("{sign}{i}.{f}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat(frac - digits.len()))
    }
}

fn parse_err(text: &str, reason: &str) -> Error {
    Error::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_digits(text: &str, part: &str) -> Result<BigInt> {
    if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(text, "expected decimal digits"));
    }
    BigInt::parse_bytes(part.as_bytes(), 10).ok_or_else(|| parse_err(text, "bad digits"))
}

/// Parses `[+-]digits[.digits][e[+-]digits]` or `[+-]p/q` exactly.
pub fn rational_from_decimal(text: &str) -> Result<ExactRational> {
    let t = text.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    if body.is_empty() {
        return Err(parse_err(text, "empty"));
    }
    let value = if let Some((p, q)) = body.split_once('/') {
        let p = parse_digits(text, p)?;
        let q = parse_digits(text, q)?;
        if q.is_zero() {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        BigRational::new(p, q)
    } else {
        let (mantissa, exp) = match body.find(['e', 'E']) {
            Some(i) => {
                let e = &body[i + 1..];
                let (eneg, edigits) = match e.as_bytes().first() {
                    Some(b'-') => (true, &e[1..]),
                    Some(b'+') => (false, &e[1..]),
                    _ => (false, e),
                };
                let ev = parse_digits(text, edigits)?
                    .to_i64()
                    .filter(|v| *v <= 100_000)
                    .ok_or_else(|| parse_err(text, "exponent out of range"))?;
                (&body[..i], if eneg { -ev } else { ev })
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(parse_err(text, "no digits"));
        }
        let all = format!("{int_part}{frac_part}");
        let m = parse_digits(text, &all)?;
        BigRational::from_integer(m) * pow10(exp - frac_part.len() as i64)
    };
    Ok(ExactRational(if neg { -value } else { value }))
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        rational_from_decimal(s)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for ExactRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}
