use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

/// A sign in {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// (-1)^k.
    pub fn from_parity(k: impl Into<i64>) -> Sign {
        if k.into().rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn pow(self, e: u32) -> Sign {
        if e % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    /// Product of an iterator of signs; `+1` when empty.
    pub fn product<I: IntoIterator<Item = Sign>>(iter: I) -> Sign {
        iter.into_iter().fold(Sign::Plus, |a, b| a * b)
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s.trim() {
            "+" | "+1" | "1" => Some(Sign::Plus),
            "-" | "-1" => Some(Sign::Minus),
            _ => None,
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

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
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

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// An exact half-integer, stored as a numerator over the fixed denominator 2.
///
/// Unramified twist exponents in the calculus all lie in (1/2)Z; keeping the
/// numerator exact avoids any float ambiguity in comparisons and output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    /// Twice the value.
    pub num: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { num: 0 };

    pub fn new(num_over_two: i32) -> HalfInt {
        HalfInt { num: num_over_two }
    }

    pub fn from_int(n: i32) -> HalfInt {
        HalfInt { num: 2 * n }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn abs(self) -> HalfInt {
        HalfInt { num: self.num.abs() }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { num: -self.num }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num % 2 == 0 {
            write!(f, "{}", self.num / 2)
        } else {
            write!(f, "{}/2", self.num)
        }
    }
}
