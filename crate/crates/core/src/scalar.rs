//! Exact Gaussian rationals, the coefficient field for every table in the crate.
//!
//! A [`Scalar`] is `re + im*i` with both parts stored as reduced [`BigRational`]s.
//! The text form is canonical: `"3/2-1/5*i"`, `"0"`, `"1"`, `"i"`, `"-2*i"`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den + 0i`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `(re_num/re_den) + (im_num/im_den) i`.
    pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|^2 = re^2 + im^2, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(Scalar::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::real(BigRational::one())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::real(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im + &rhs.im
            },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im - &rhs.im
            },
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar::real(&self.re * &rhs.re),
            (true, false) => Scalar {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => Scalar {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => Scalar {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn write_abs_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.abs().is_one() {
        write!(f, "i")
    } else {
        write!(f, "{}*i", im.abs())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
            }
            return write_abs_imag(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        write!(f, "{}", if self.im.is_negative() { "-" } else { "+" })?;
        write_abs_imag(f, &self.im)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_err(text: &str, reason: &str) -> Error {
    Error::ScalarParse {
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_unsigned_rational(full: &str, s: &str) -> Result<BigRational> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    if !digits(num) {
        return Err(parse_err(full, "expected digits"));
    }
    let num: BigInt = num.parse().map_err(|_| parse_err(full, "bad numerator"))?;
    let den: BigInt = match den {
        Some(d) if digits(d) => d.parse().map_err(|_| parse_err(full, "bad denominator"))?,
        Some(_) => return Err(parse_err(full, "expected digits after '/'")),
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(parse_err(full, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_signed_rational(full: &str, s: &str) -> Result<BigRational> {
    match s.strip_prefix('-') {
        Some(rest) => Ok(-parse_unsigned_rational(full, rest)?),
        None => parse_unsigned_rational(full, s.strip_prefix('+').unwrap_or(s)),
    }
}

/// Parses `i`, `-i`, `r/s*i`, `-r/s*i` (an optional leading sign included).
fn parse_imag(full: &str, s: &str) -> Result<BigRational> {
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let value = if body == "i" {
        BigRational::one()
    } else if let Some(coef) = body.strip_suffix("*i") {
        parse_unsigned_rational(full, coef)?
    } else {
        return Err(parse_err(full, "malformed imaginary part"));
    };
    Ok(if neg { -value } else { value })
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scalar> {
        // spaces may sit next to an operator, never inside a number
        let mut compact = String::new();
        for word in text.split_whitespace() {
            let glued = compact.ends_with(|c: char| c.is_ascii_alphanumeric())
                && word.starts_with(|c: char| c.is_ascii_alphanumeric());
            if glued {
                return Err(parse_err(text, "space inside a number"));
            }
            compact.push_str(word);
        }
        let s = compact.as_str();
        if s.is_empty() {
            return Err(parse_err(text, "empty"));
        }
        if !s.ends_with('i') {
            return Ok(Scalar::real(parse_signed_rational(text, s)?));
        }
        // the split point is the last sign that is not in leading position
        let split = s
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => Ok(Scalar {
                re: parse_signed_rational(text, &s[..k])?,
                im: parse_imag(text, &s[k..])?,
            }),
            None => Ok(Scalar {
                re: BigRational::zero(),
                im: parse_imag(text, s)?,
            }),
        }
    }
}
