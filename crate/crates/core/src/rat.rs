//! Exact rational scalars and the extended value line used for potentials.
//!
//! All distances and potential values in this crate are arbitrary-precision
//! rationals, so comparisons and arithmetic are exact. [`ExtValue`] adjoins
//! `+inf` with absorbing addition, which is how improper potential values
//! behave in every formula here.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, kept in canonical reduced form with a
/// positive denominator (the inner `BigRational` maintains that invariant).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Builds `numer/denom`. Panics if `denom == 0`; use [`Rat::from_str`]
    /// for untrusted input.
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "rational denominator must be nonzero");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// `2^exp`, with negative exponents giving exact dyadic fractions.
    pub fn pow2(exp: i32) -> Rat {
        let one = BigInt::one();
        if exp >= 0 {
            Rat(BigRational::from_integer(one << exp as usize))
        } else {
            Rat(BigRational::new(one.clone(), one << (-exp) as usize))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Exact halving; used by the half-gap descent rule.
    pub fn half(&self) -> Rat {
        Rat(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    /// Numerator and denominator as machine integers, when both fit; the
    /// generator uses this to draw exact Bernoulli outcomes.
    pub(crate) fn to_u64_parts(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        Rat(&self.0 - &rhs.0)
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division of Rat by zero");
        Rat(&self.0 / &rhs.0)
    }
}

/// Canonical text form: integers print bare (`"3"`, `"-2"`), everything else
/// prints as `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parse error for rational and extended-value literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational literal {literal:?}: {reason}")]
pub struct RatParseError {
    pub literal: String,
    pub reason: &'static str,
}

fn parse_bigint(s: &str, literal: &str) -> Result<BigInt, RatParseError> {
    let ok = !s.is_empty()
        && s.strip_prefix('-').unwrap_or(s).chars().all(|c| c.is_ascii_digit())
        && !s.strip_prefix('-').unwrap_or(s).is_empty();
    if !ok {
        return Err(RatParseError {
            literal: literal.to_owned(),
            reason: "expected an optionally signed decimal integer",
        });
    }
    s.parse::<BigInt>().map_err(|_| RatParseError {
        literal: literal.to_owned(),
        reason: "integer out of parseable form",
    })
}

impl FromStr for Rat {
    type Err = RatParseError;

    /// Accepts `"p"` or `"p/q"` and normalizes (`"2/4"` parses to `1/2`).
    /// A zero denominator is rejected.
    fn from_str(s: &str) -> Result<Rat, RatParseError> {
        match s.split_once('/') {
            None => Ok(Rat(BigRational::from_integer(parse_bigint(s, s)?))),
            Some((p, q)) => {
                let numer = parse_bigint(p, s)?;
                let denom = parse_bigint(q, s)?;
                if denom.is_zero() {
                    return Err(RatParseError {
                        literal: s.to_owned(),
                        reason: "denominator is zero",
                    });
                }
                Ok(Rat(BigRational::new(numer, denom)))
            }
        }
    }
}

/// A potential value: finite rational or `+inf`.
///
/// The derived order puts every finite value below `PlusInfinity`, and
/// addition absorbs into `+inf`, which matches how the descent-set and
/// order formulas treat points outside the potential's domain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtValue {
    Finite(Rat),
    PlusInfinity,
}

impl ExtValue {
    pub fn finite(numer: i64, denom: i64) -> ExtValue {
        ExtValue::Finite(Rat::new(numer, denom))
    }

    pub fn from_int(n: i64) -> ExtValue {
        ExtValue::Finite(Rat::from_int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::PlusInfinity => None,
        }
    }

    /// `self + r`, absorbing into `+inf`.
    pub fn add_rat(&self, r: &Rat) -> ExtValue {
        match self {
            ExtValue::Finite(v) => ExtValue::Finite(v + r),
            ExtValue::PlusInfinity => ExtValue::PlusInfinity,
        }
    }

    /// Exact midpoint `(self + other) / 2`, absorbing into `+inf`.
    pub fn midpoint(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite((a + b).half()),
            _ => ExtValue::PlusInfinity,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{}", r),
            ExtValue::PlusInfinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtValue {
    type Err = RatParseError;

    fn from_str(s: &str) -> Result<ExtValue, RatParseError> {
        if s == "inf" {
            Ok(ExtValue::PlusInfinity)
        } else {
            Ok(ExtValue::Finite(s.parse()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        assert_eq!(Rat::new(3, 1).to_string(), "3");
        assert_eq!(Rat::new(-2, 5).to_string(), "-2/5");
        assert_eq!(Rat::new(2, -5).to_string(), "-2/5");
        assert_eq!(Rat::new(0, 7).to_string(), "0");
        assert_eq!(Rat::new(4, 8).to_string(), "1/2");
    }

    #[test]
    fn parse_round_trips_and_normalizes() {
        for s in ["0", "3", "-7", "1/2", "-2/5", "25/12"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("2/4".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("-6/4".parse::<Rat>().unwrap(), Rat::new(-3, 2));
    }

    #[test]
    fn parse_rejects_malformed_literals() {
        for s in ["", "/", "1/", "/2", "1/0", "a", "1.5", "+3", "1 /2", "--2", "-"] {
            assert!(s.parse::<Rat>().is_err(), "should reject {:?}", s);
        }
    }

    #[test]
    fn pow2_handles_both_signs() {
        assert_eq!(Rat::pow2(0), Rat::one());
        assert_eq!(Rat::pow2(5), Rat::from_int(32));
        assert_eq!(Rat::pow2(-3), Rat::new(1, 8));
        // Large exponents must stay exact: 2^-33 shows up in the chain witness.
        assert_eq!(&Rat::pow2(-33) * &Rat::pow2(33), Rat::one());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(&a + &b, Rat::new(1, 2));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(&a * &b, Rat::new(1, 18));
        assert_eq!(&a / &b, Rat::from_int(2));
        assert_eq!(Rat::new(5, 8).half(), Rat::new(5, 16));
    }

    #[test]
    fn ext_value_ordering_and_absorption() {
        let f = ExtValue::finite(7, 2);
        assert!(f < ExtValue::PlusInfinity);
        assert!(ExtValue::PlusInfinity <= ExtValue::PlusInfinity);
        assert_eq!(
            ExtValue::PlusInfinity.add_rat(&Rat::from_int(100)),
            ExtValue::PlusInfinity
        );
        assert_eq!(f.add_rat(&Rat::new(1, 2)), ExtValue::from_int(4));
        assert_eq!(
            ExtValue::from_int(3).midpoint(&ExtValue::from_int(0)),
            ExtValue::finite(3, 2)
        );
        assert_eq!(
            ExtValue::from_int(3).midpoint(&ExtValue::PlusInfinity),
            ExtValue::PlusInfinity
        );
    }

    #[test]
    fn ext_value_parses_inf() {
        assert_eq!("inf".parse::<ExtValue>().unwrap(), ExtValue::PlusInfinity);
        assert_eq!("3/4".parse::<ExtValue>().unwrap(), ExtValue::finite(3, 4));
        assert!("Inf".parse::<ExtValue>().is_err());
    }
}
