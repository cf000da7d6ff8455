//! Exact values: rationals, moment polynomials and signs.

use std::fmt;
use std::ops::{Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = num::BigRational;

/// An exact commutative ring element that an expectation can produce.
pub trait Value: Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync {
    fn from_rational(r: Rational) -> Self;

    fn from_integer(i: impl Into<BigInt>) -> Self {
        Self::from_rational(Rational::from_integer(i.into()))
    }
}

impl Value for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
}

/// Parse `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    t.parse::<Rational>().map_err(|e| format!("bad rational `{s}`: {e}"))
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Serialize any value through its canonical `Display` form.
pub fn serialize_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A sign `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^exponent`.
    pub fn from_exponent(exponent: usize) -> Self {
        if exponent.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply<V: Value>(self, v: V) -> V {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Sign::Plus { "+1" } else { "-1" })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i32(self.as_i32())
    }
}

/// Render a rational coefficient in front of a monomial: `""`, `"-"`, `"3/2*"`.
pub(crate) fn coefficient_prefix(c: &Rational) -> String {
    if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".into()
    } else if c.is_negative() {
        format!("-{}*", -c)
    } else {
        format!("{c}*")
    }
}
