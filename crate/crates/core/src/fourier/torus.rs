use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Largest power of two allowed in a denominator.
pub const MAX_TORUS_SHIFT: u32 = 62;

/// An exact dyadic rational modulo 1: `num / 2^shift` with
/// `0 <= num < 2^shift`, stored in lowest terms (`num` odd unless zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TorusValue {
    num: u64,
    shift: u32,
}

impl TorusValue {
    pub const ZERO: TorusValue = TorusValue { num: 0, shift: 0 };

    /// `num / 2^shift` reduced mod 1.
    pub fn new(num: u64, shift: u32) -> Result<Self> {
        if shift > MAX_TORUS_SHIFT {
            return Err(Error::invalid(format!("denominator 2^{shift} too large")));
        }
        Ok(Self::reduced(num, shift))
    }

    fn reduced(num: u64, shift: u32) -> Self {
        let mut num = num & ((1u64 << shift) - 1);
        let mut shift = shift;
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(shift);
        num >>= tz;
        shift -= tz;
        TorusValue { num, shift }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// `log2` of the reduced denominator.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn denominator(&self) -> u64 {
        1u64 << self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.denominator() as f64
    }

    fn at_shift(&self, shift: u32) -> u64 {
        self.num << (shift - self.shift)
    }
}

impl Add for TorusValue {
    type Output = TorusValue;

    fn add(self, rhs: TorusValue) -> TorusValue {
        let s = self.shift.max(rhs.shift);
        TorusValue::reduced(self.at_shift(s).wrapping_add(rhs.at_shift(s)), s)
    }
}

impl Neg for TorusValue {
    type Output = TorusValue;

    fn neg(self) -> TorusValue {
        TorusValue::reduced((1u64 << self.shift).wrapping_sub(self.num), self.shift)
    }
}

impl Sub for TorusValue {
    type Output = TorusValue;

    fn sub(self, rhs: TorusValue) -> TorusValue {
        self + (-rhs)
    }
}

impl fmt::Display for TorusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.denominator())
    }
}

impl FromStr for TorusValue {
    type Err = Error;

    /// `a/b` with `b` a power of two, or a bare integer (which is 0 mod 1).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a dyadic fraction a/2^k, found {s:?}"));
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let a: u64 = a.parse().map_err(|_| bad())?;
        let b: u64 = b.parse().map_err(|_| bad())?;
        if !b.is_power_of_two() {
            return Err(bad());
        }
        TorusValue::new(a, b.trailing_zeros())
    }
}

impl Serialize for TorusValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TorusValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TorusValue {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_mod_one() {
        assert_eq!(t("1/2") + t("1/2"), TorusValue::ZERO);
        assert_eq!(t("3/4") + t("1/2"), t("1/4"));
        assert_eq!(t("1/8") - t("1/4"), t("7/8"));
        assert_eq!(-TorusValue::ZERO, TorusValue::ZERO);
        assert_eq!(t("6/8"), t("3/4"));
        assert_eq!(t("5/4"), t("1/4"));
        assert_eq!(t("3"), TorusValue::ZERO);
        assert_eq!(t("3/4").shift(), 2);
        assert_eq!(t("3/4").to_string(), "3/4");
        assert!("1/3".parse::<TorusValue>().is_err());
        assert!(TorusValue::new(1, 63).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let v = t("5/16");
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "\"5/16\"");
        assert_eq!(serde_json::from_str::<TorusValue>(&s).unwrap(), v);
    }
}
