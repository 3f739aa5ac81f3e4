use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A non-negative fraction kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected \"a/b\" or an integer, got {0:?}")]
    Syntax(String),
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let g = gcd(num, den).max(1);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(num: u64, den: u64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn integer(v: u64) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `a/b` or a bare integer `a`. Decimals, signs and spaces
    /// inside the literal are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || RationalError::Syntax(s.to_string());
        let digits = |t: &str| {
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                return Err(syntax());
            }
            t.parse::<u64>().map_err(|_| syntax())
        };
        match s.split_once('/') {
            Some((a, b)) => Rational::new(digits(a)?, digits(b)?),
            None => Ok(Rational::integer(digits(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(Rational::of(10, 15), Rational::of(2, 3));
        assert_eq!(Rational::of(0, 7), Rational::integer(0));
        assert_eq!(Rational::of(45, 27).to_string(), "5/3");
    }

    #[test]
    fn parses_strictly() {
        assert_eq!("5/3".parse::<Rational>().unwrap(), Rational::of(5, 3));
        assert_eq!("2".parse::<Rational>().unwrap(), Rational::integer(2));
        assert_eq!("6/4".parse::<Rational>().unwrap(), Rational::of(3, 2));
        for bad in ["1.5", "-1/2", "1/ 2", "/2", "1/", "", "a/b", "1/2/3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
        assert_eq!("1/0".parse::<Rational>(), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn orders_by_cross_multiplication() {
        assert!(Rational::of(2, 3) < Rational::of(3, 4));
        assert!(Rational::of(9, 4) > Rational::integer(2));
        let big = Rational::of(u64::MAX - 1, u64::MAX);
        assert!(big < Rational::integer(1));
    }

    #[test]
    fn serde_as_string() {
        let r = Rational::of(7, 4);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"7/4\"");
        assert_eq!(serde_json::from_str::<Rational>("\"14/8\"").unwrap(), r);
    }
}
