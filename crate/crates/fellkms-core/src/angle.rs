//! Exact unit-circle values `e^{2πi·a}` with rational angle `a ∈ [0,1)`.
//!
//! Multiplication adds angles mod 1 and conjugation negates them, so every
//! cocycle identity in this crate is decided exactly, with no tolerance.
//! Complex evaluation happens only at the boundary to numerical checks.

use crate::{CoreError, Scalar};
use num_complex::Complex;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point of the circle group T, stored as a reduced rational angle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitCircleValue {
    /// Numerator of the angle, `0 <= num < den`.
    num: i64,
    /// Denominator of the angle, `den >= 1`.
    den: i64,
}

impl UnitCircleValue {
    pub const ONE: UnitCircleValue = UnitCircleValue { num: 0, den: 1 };

    /// `e^{2πi·(num/den)}`, reduced to the fundamental domain `[0,1)`.
    pub fn from_angle(num: i64, den: i64) -> Result<Self, CoreError> {
        if den == 0 {
            return Err(CoreError::input("angle denominator must be nonzero"));
        }
        Ok(Self::reduce(num as i128, den as i128))
    }

    /// The half turn `-1`.
    pub fn minus_one() -> Self {
        UnitCircleValue { num: 1, den: 2 }
    }

    fn reduce(mut num: i128, mut den: i128) -> Self {
        if den < 0 {
            num = -num;
            den = -den;
        }
        num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        debug_assert!(num >= 0 && num < den);
        UnitCircleValue {
            num: i64::try_from(num).expect("angle numerator overflow"),
            den: i64::try_from(den).expect("angle denominator overflow"),
        }
    }

    /// Angle as a reduced pair `(num, den)` with `0 <= num < den`.
    pub fn angle(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// Group law: angles add mod 1.
    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(
            self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    /// Complex conjugate, i.e. the group inverse.
    pub fn conj(&self) -> Self {
        Self::reduce(-(self.num as i128), self.den as i128)
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::reduce(self.num as i128 * e as i128, self.den as i128)
    }

    /// Evaluate to a complex number at the requested precision.
    pub fn eval<F: Scalar>(&self) -> Complex<F> {
        // Quarter turns are exact in binary floating point; handle them
        // directly so trivial and Pauli-type cocycles evaluate without
        // rounding.
        match (self.num, self.den) {
            (0, _) => Complex::new(F::one(), F::zero()),
            (1, 2) => Complex::new(-F::one(), F::zero()),
            (1, 4) => Complex::new(F::zero(), F::one()),
            (3, 4) => Complex::new(F::zero(), -F::one()),
            (n, d) => {
                let theta = F::real(2.0 * std::f64::consts::PI * (n as f64) / (d as f64));
                Complex::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Parse `"p/q"` (or a bare integer `"p"`, meaning angle p/1 = 1).
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim()
                    .parse::<i64>()
                    .map_err(|_| CoreError::input(format!("bad angle numerator in {s:?}")))?,
                d.trim()
                    .parse::<i64>()
                    .map_err(|_| CoreError::input(format!("bad angle denominator in {s:?}")))?,
            ),
            None => (
                s.parse::<i64>()
                    .map_err(|_| CoreError::input(format!("bad angle {s:?}")))?,
                1,
            ),
        };
        Self::from_angle(num, den)
    }
}

impl Default for UnitCircleValue {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Display for UnitCircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for UnitCircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{}/{})", self.num, self.den)
    }
}

impl Serialize for UnitCircleValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for UnitCircleValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        UnitCircleValue::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multiplication_adds_angles_mod_one() {
        let a = UnitCircleValue::from_angle(2, 3).unwrap();
        let b = UnitCircleValue::from_angle(2, 3).unwrap();
        assert_eq!(a.mul(&b).angle(), (1, 3));
        assert_eq!(a.mul(&a.conj()), UnitCircleValue::ONE);
    }

    #[test]
    fn conjugation_negates_angle() {
        let a = UnitCircleValue::from_angle(1, 5).unwrap();
        assert_eq!(a.conj().angle(), (4, 5));
        assert_eq!(UnitCircleValue::ONE.conj(), UnitCircleValue::ONE);
    }

    #[test]
    fn evaluation_is_unimodular() {
        for den in 1..30i64 {
            for num in 0..den {
                let z = UnitCircleValue::from_angle(num, den).unwrap().eval::<f64>();
                assert!((z.norm() - 1.0).abs() < 1e-12, "|{z}| != 1");
            }
        }
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(
            UnitCircleValue::minus_one().eval::<f64>(),
            num_complex::Complex::new(-1.0, 0.0)
        );
        assert_eq!(
            UnitCircleValue::from_angle(1, 4).unwrap().eval::<f64>(),
            num_complex::Complex::new(0.0, 1.0)
        );
    }

    #[test]
    fn parse_and_display_round_trip() {
        let a = UnitCircleValue::parse("7/12").unwrap();
        assert_eq!(a.to_string(), "7/12");
        assert_eq!(UnitCircleValue::parse("-1/3").unwrap().angle(), (2, 3));
        assert_eq!(UnitCircleValue::parse("5").unwrap(), UnitCircleValue::ONE);
        assert!(UnitCircleValue::parse("1/0").is_err());
    }

    proptest! {
        #[test]
        fn group_laws(n1 in -40i64..40, d1 in 1i64..13, n2 in -40i64..40, d2 in 1i64..13) {
            let a = UnitCircleValue::from_angle(n1, d1).unwrap();
            let b = UnitCircleValue::from_angle(n2, d2).unwrap();
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&a.conj()), UnitCircleValue::ONE);
            prop_assert_eq!(a.pow(3), a.mul(&a).mul(&a));
            let (num, den) = a.angle();
            prop_assert!(num >= 0 && num < den);
        }
    }
}
