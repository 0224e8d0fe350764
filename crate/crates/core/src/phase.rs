//! Exact elements of Q/Z.
//!
//! A [`Phase`] `num/den` stands for the root of unity `exp(2πi·num/den)`.
//! Values are kept reduced with `0 <= num < den`; zero is `0/1`.
//! Arithmetic runs through `u128` intermediates and panics if a reduced
//! denominator no longer fits in `u64`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPhase")]
pub struct Phase {
    num: u64,
    den: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhase {
    num: i64,
    den: i64,
}

impl TryFrom<RawPhase> for Phase {
    type Error = Error;

    fn try_from(raw: RawPhase) -> Result<Self> {
        if raw.den <= 0 {
            return Err(Error::InvalidInput(format!(
                "phase denominator must be positive, got {}",
                raw.den
            )));
        }
        Ok(Phase::new(raw.num, raw.den as u64))
    }
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// `num/den` reduced mod 1. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Phase {
        Phase::from_ratio(num as i128, den as u128)
    }

    /// Same as [`Phase::new`] with wide arguments.
    pub fn from_ratio(num: i128, den: u128) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let d = den as i128;
        assert!(d > 0, "phase denominator overflow");
        let r = num.rem_euclid(d) as u128;
        let g = r.gcd(&den);
        let (n, d) = (r / g, den / g);
        if n == 0 {
            return Phase::ZERO;
        }
        let den = u64::try_from(d).expect("phase denominator overflow");
        Phase { num: n as u64, den }
    }

    /// `k/m` for a primitive `m`-th root raised to `k`.
    pub fn root(k: i64, m: u64) -> Phase {
        Phase::new(k, m)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Additive order of the phase in Q/Z.
    pub fn order(&self) -> u64 {
        self.den
    }

    /// `k * self`.
    pub fn scale(&self, k: i64) -> Phase {
        let n = (self.num as i128)
            .checked_mul(k as i128)
            .expect("phase overflow");
        Phase::from_ratio(n, self.den as u128)
    }

    /// `self / k`: the phase `num/(den*k)`. One of the `k` solutions of `k*y = self`.
    pub fn divide(&self, k: u64) -> Phase {
        assert!(k > 0, "division by zero");
        Phase::from_ratio(self.num as i128, self.den as u128 * k as u128)
    }

    /// `self * k` as an integer in `[0, k)`, when `den` divides `k`.
    pub fn numerator_over(&self, k: u64) -> Option<u64> {
        if k % self.den != 0 {
            return None;
        }
        Some(self.num * (k / self.den))
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, rhs: Phase) -> Phase {
        if rhs.num == 0 {
            return self;
        }
        if self.num == 0 {
            return rhs;
        }
        let (a, b) = (self.den as u128, rhs.den as u128);
        let l = a.lcm(&b);
        let x = self.num as u128 * (l / a);
        let y = rhs.num as u128 * (l / b);
        let s = x.checked_add(y).expect("phase overflow");
        Phase::from_ratio((s % l) as i128, l)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        if self.num == 0 {
            self
        } else {
            Phase {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for Phase {
    type Output = Phase;

    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, rhs: Phase) {
        *self = *self - rhs;
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;

    fn mul(self, k: i64) -> Phase {
        self.scale(k)
    }
}

impl Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

/// A batch of phases rewritten over one common denominator, for hot loops
/// that only add and compare.
#[derive(Clone, Debug)]
pub struct CommonDenominator {
    den: u64,
    nums: Vec<u64>,
}

impl CommonDenominator {
    /// Returns `None` when the lcm of the denominators is too large for
    /// three-term sums to stay inside `u64`.
    pub fn new(values: &[Phase]) -> Option<CommonDenominator> {
        let mut l: u64 = 1;
        for v in values {
            l = l.lcm(&v.den);
            if l > (u64::MAX >> 3) {
                return None;
            }
        }
        let nums = values.iter().map(|v| v.num * (l / v.den)).collect();
        Some(CommonDenominator { den: l, nums })
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        self.nums[i]
    }

    pub fn phase(&self, i: usize) -> Phase {
        Phase::from_ratio(self.nums[i] as i128, self.den as u128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_on_construction() {
        assert_eq!(Phase::new(2, 4), Phase::new(1, 2));
        assert_eq!(Phase::new(-1, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(6, 3), Phase::ZERO);
        assert_eq!(Phase::ZERO.den(), 1);
    }

    #[test]
    fn spec_addition_examples() {
        assert_eq!(Phase::new(1, 2) + Phase::new(1, 2), Phase::ZERO);
        assert_eq!(Phase::new(1, 3) + Phase::new(1, 6), Phase::new(1, 2));
    }

    #[test]
    fn divide_gives_a_preimage() {
        let p = Phase::new(1, 2);
        let q = p.divide(2);
        assert_eq!(q, Phase::new(1, 4));
        assert_eq!(q.scale(2), p);
    }

    #[test]
    fn json_shape() {
        let p: Phase = serde_json::from_str(r#"{"num": 5, "den": 4}"#).unwrap();
        assert_eq!(p, Phase::new(1, 4));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"num":1,"den":4}"#);
        assert!(serde_json::from_str::<Phase>(r#"{"num": 1, "den": 0}"#).is_err());
        assert!(serde_json::from_str::<Phase>(r#"{"num": 1, "den": 2, "x": 1}"#).is_err());
    }

    #[test]
    fn common_denominator_roundtrip() {
        let v = [Phase::new(1, 2), Phase::new(1, 3), Phase::ZERO];
        let c = CommonDenominator::new(&v).unwrap();
        assert_eq!(c.den(), 6);
        for (i, p) in v.iter().enumerate() {
            assert_eq!(c.phase(i), *p);
        }
    }

    fn phase() -> impl Strategy<Value = Phase> {
        (any::<i32>(), 1u64..10_000).prop_map(|(n, d)| Phase::new(n as i64, d))
    }

    proptest! {
        #[test]
        fn group_laws(a in phase(), b in phase(), c in phase()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a + Phase::ZERO, a);
            prop_assert_eq!(a + (-a), Phase::ZERO);
            prop_assert_eq!(a - b + b, a);
        }

        #[test]
        fn canonical_form(n in any::<i32>(), d in 1u64..100_000) {
            let p = Phase::new(n as i64, d);
            prop_assert!(p.num() < p.den());
            prop_assert_eq!(p.num().gcd(&p.den()), 1);
            // independent float check of the value mod 1
            let x = (n as f64 / d as f64).rem_euclid(1.0);
            let y = p.num() as f64 / p.den() as f64;
            prop_assert!((x - y).abs() < 1e-9 || (1.0 - (x - y).abs()) < 1e-9);
        }

        #[test]
        fn scale_matches_repeated_add(a in phase(), k in 0i64..20) {
            let mut s = Phase::ZERO;
            for _ in 0..k { s += a; }
            prop_assert_eq!(a.scale(k), s);
            prop_assert_eq!(a.scale(-k), -s);
        }
    }
}
