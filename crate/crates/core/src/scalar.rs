//! Exact scalar types.
//!
//! Everything in this crate is exact. The generic parts (tropical values,
//! layers, polynomials, algebraic extensions) work over any ordered field of
//! fractions implementing [`Scalar`]; in practice that means `Ratio<BigInt>`
//! or a fixed-width `Ratio<i64>` / `Ratio<i128>` when overflow is not a
//! concern. The lattice-based parts are concrete over [`Rat`].

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// Arbitrary-precision rational number.
pub type Rat = Ratio<BigInt>;

/// An exact, totally ordered field of fractions.
pub trait Scalar: Clone + Debug + Display + Ord + Hash + Num + Signed {
    fn from_int(n: i64) -> Self;

    /// Lossless conversion to an arbitrary-precision rational.
    fn to_rat(&self) -> Rat;

    /// Numerator and denominator of the reduced fraction.
    fn parts(&self) -> (BigInt, BigInt) {
        let r = self.to_rat();
        (r.numer().clone(), r.denom().clone())
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Debug + Display + Integer + Signed + Hash + FromPrimitive + Into<BigInt>,
{
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for scalar type"))
    }

    fn to_rat(&self) -> Rat {
        Ratio::new(self.numer().clone().into(), self.denom().clone().into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}")]
pub struct ParseRatError {
    pub input: String,
}

/// Parses "p/q", "p" or a plain decimal such as "0.25".
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError { input: s.to_string() };
    if t.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d == BigInt::from(0) {
            return Err(err());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::from(0)
        } else {
            BigInt::from_str(int).map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| err())?;
        let mag = int_part.abs() * &scale + frac_part;
        let n = if negative { -mag } else { mag };
        return Ok(Ratio::new(n, scale));
    }
    BigInt::from_str(t).map(Ratio::from_integer).map_err(|_| err())
}

/// Canonical "p/q" rendering in lowest terms ("p" when q = 1).
pub fn fmt_rat<S: Scalar>(x: &S) -> String {
    let (n, d) = x.parts();
    if d == BigInt::from(1) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()))
}
