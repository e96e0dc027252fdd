//! Layered max-plus arithmetic.
//!
//! Values live in the max-plus semifield `(Q ∪ {-∞}, max, +)`, written
//! additively: what is usually denoted `a·b` and `a^k` on the value side is
//! `a + b` and `k·a` here. Layers live in the cancellative semifield
//! `(Q>0, +, ×)`. A layered element is either [`LayeredElem::Zero`] or a pair
//! `[l]v` of a layer and a finite value.
//!
//! Addition compares values: the larger one wins, and on a tie the layers are
//! summed. Multiplication is componentwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{common_denominator, fmt_rat, parse_rat, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LayerError {
    #[error("the zero element has no layer")]
    ZeroHasNoLayer,
    #[error("a layered element cannot carry the bottom value")]
    BottomValue,
    #[error("layers must be strictly positive, got {0}")]
    NonPositiveLayer(String),
    #[error("cannot parse layered element {0:?}")]
    Parse(String),
}

/// A max-plus value: `-∞` or a finite exact number.
///
/// The derived order puts `Bottom` strictly below every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropValue<S> {
    Bottom,
    Finite(S),
}

impl<S: Scalar> TropValue<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            TropValue::Bottom => None,
            TropValue::Finite(v) => Some(v),
        }
    }

    /// `max(self, other)`.
    pub fn trop_add(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `self + other` with `-∞` absorbing.
    pub fn trop_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (TropValue::Finite(a), TropValue::Finite(b)) => TropValue::Finite(a.clone() + b.clone()),
            _ => TropValue::Bottom,
        }
    }
}

impl<S: Scalar> fmt::Display for TropValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::Bottom => f.write_str("-inf"),
            TropValue::Finite(v) => f.write_str(&fmt_rat(v)),
        }
    }
}

/// A strictly positive layer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Layer<S>(S);

impl<S: Scalar> Layer<S> {
    pub fn new(value: S) -> Result<Self, LayerError> {
        if value.is_positive() {
            Ok(Layer(value))
        } else {
            Err(LayerError::NonPositiveLayer(fmt_rat(&value)))
        }
    }

    pub fn one() -> Self {
        Layer(S::one())
    }

    pub fn get(&self) -> &S {
        &self.0
    }

    pub fn into_inner(self) -> S {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Layer(S::one() / self.0.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Layer(num_traits::pow(self.0.clone(), exp as usize))
    }
}

impl<S: Scalar> Add for Layer<S> {
    type Output = Layer<S>;
    fn add(self, rhs: Self) -> Self {
        Layer(self.0 + rhs.0)
    }
}

impl<S: Scalar> Mul for Layer<S> {
    type Output = Layer<S>;
    fn mul(self, rhs: Self) -> Self {
        Layer(self.0 * rhs.0)
    }
}

impl<S: Scalar> fmt::Display for Layer<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

/// An element `[l]v` of the uniform layered semifield `Q>0 ⊙ Q`, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LayeredElem<S> {
    Zero,
    Pair { layer: Layer<S>, value: S },
}

impl<S: Scalar> LayeredElem<S> {
    /// Builds `[layer]value`, rejecting non-positive layers.
    pub fn new(layer: S, value: S) -> Result<Self, LayerError> {
        Ok(LayeredElem::Pair {
            layer: Layer::new(layer)?,
            value,
        })
    }

    /// The multiplicative identity `[1]0`.
    pub fn one() -> Self {
        LayeredElem::Pair {
            layer: Layer::one(),
            value: S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LayeredElem::Zero)
    }

    pub fn trop_add(&self, other: &Self) -> Self {
        match (self, other) {
            (LayeredElem::Zero, y) => y.clone(),
            (x, LayeredElem::Zero) => x.clone(),
            (
                LayeredElem::Pair { layer: k, value: a },
                LayeredElem::Pair { layer: l, value: b },
            ) => match a.cmp(b) {
                Ordering::Greater => self.clone(),
                Ordering::Less => other.clone(),
                Ordering::Equal => LayeredElem::Pair {
                    layer: k.clone() + l.clone(),
                    value: a.clone(),
                },
            },
        }
    }

    pub fn trop_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (
                LayeredElem::Pair { layer: k, value: a },
                LayeredElem::Pair { layer: l, value: b },
            ) => LayeredElem::Pair {
                layer: k.clone() * l.clone(),
                value: a.clone() + b.clone(),
            },
            _ => LayeredElem::Zero,
        }
    }

    /// `self^n` for `n ≥ 0`; `Zero^0` is the identity.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        match self {
            LayeredElem::Zero => LayeredElem::Zero,
            LayeredElem::Pair { layer, value } => LayeredElem::Pair {
                layer: layer.pow(n),
                value: value.clone() * S::from_int(n as i64),
            },
        }
    }

    /// Multiplicative inverse of a non-zero element.
    pub fn inverse(&self) -> Option<Self> {
        match self {
            LayeredElem::Zero => None,
            LayeredElem::Pair { layer, value } => Some(LayeredElem::Pair {
                layer: layer.inverse(),
                value: -value.clone(),
            }),
        }
    }

    pub fn sort_map(&self) -> Result<Layer<S>, LayerError> {
        match self {
            LayeredElem::Zero => Err(LayerError::ZeroHasNoLayer),
            LayeredElem::Pair { layer, .. } => Ok(layer.clone()),
        }
    }

    pub fn ghost_map(&self) -> TropValue<S> {
        match self {
            LayeredElem::Zero => TropValue::Bottom,
            LayeredElem::Pair { value, .. } => TropValue::Finite(value.clone()),
        }
    }

    /// Inverse of `(sort_map, ghost_map)` on non-zero elements.
    pub fn rebuild(layer: Layer<S>, value: TropValue<S>) -> Result<Self, LayerError> {
        match value {
            TropValue::Bottom => Err(LayerError::BottomValue),
            TropValue::Finite(value) => Ok(LayeredElem::Pair { layer, value }),
        }
    }
}

impl<S: Scalar> Add for LayeredElem<S> {
    type Output = LayeredElem<S>;
    fn add(self, rhs: Self) -> Self {
        self.trop_add(&rhs)
    }
}

impl<S: Scalar> Mul for LayeredElem<S> {
    type Output = LayeredElem<S>;
    fn mul(self, rhs: Self) -> Self {
        self.trop_mul(&rhs)
    }
}

impl<S: Scalar> fmt::Display for LayeredElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayeredElem::Zero => f.write_str("Zero"),
            LayeredElem::Pair { layer, value } => write!(f, "[{}]{}", layer, fmt_rat(value)),
        }
    }
}

impl FromStr for LayeredElem<Rat> {
    type Err = LayerError;

    /// Parses the canonical rendering `[l]v` or `Zero`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Zero" {
            return Ok(LayeredElem::Zero);
        }
        let bad = || LayerError::Parse(s.to_string());
        let rest = t.strip_prefix('[').ok_or_else(bad)?;
        let (layer, value) = rest.split_once(']').ok_or_else(bad)?;
        let layer = parse_rat(layer).map_err(|_| bad())?;
        let value = parse_rat(value).map_err(|_| bad())?;
        LayeredElem::new(layer, value)
    }
}

/// A finitely generated subgroup of `(Q, +)`.
///
/// Every such subgroup is cyclic, so the lattice is stored as its
/// non-negative generator `δ` (zero for the trivial group) alongside the
/// generators it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ValueLattice {
    generators: Vec<Rat>,
    delta: Rat,
}

impl ValueLattice {
    pub fn new(generators: Vec<Rat>) -> Self {
        let delta = rational_gcd(&generators);
        ValueLattice { generators, delta }
    }

    /// The lattice `Z`.
    pub fn integers() -> Self {
        Self::new(vec![Rat::one()])
    }

    /// The trivial lattice `{0}`.
    pub fn trivial() -> Self {
        Self::new(Vec::new())
    }

    pub fn generators(&self) -> &[Rat] {
        &self.generators
    }

    /// The canonical generator `δ ≥ 0` with lattice `= δZ`.
    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn is_trivial(&self) -> bool {
        self.delta.is_zero()
    }

    pub fn contains(&self, q: &Rat) -> bool {
        if self.delta.is_zero() {
            return q.is_zero();
        }
        (q / &self.delta).is_integer()
    }

    /// The representative of `q + lattice` in `[0, δ)` (`q` itself when trivial).
    pub fn reduce(&self, q: &Rat) -> Rat {
        if self.delta.is_zero() {
            return q.clone();
        }
        let k = (q / &self.delta).floor();
        q - k * &self.delta
    }
}

/// Membership of `q` in the subgroup generated by `lattice`'s generators.
pub fn lattice_contains(lattice: &ValueLattice, q: &Rat) -> bool {
    lattice.contains(q)
}

/// gcd of rationals: clear denominators, take the integer gcd, scale back.
pub(crate) fn rational_gcd(xs: &[Rat]) -> Rat {
    let den = common_denominator(xs.iter());
    let g = xs
        .iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    Rat::new(g, den).abs()
}

impl TryFrom<Vec<String>> for ValueLattice {
    type Error = String;
    fn try_from(v: Vec<String>) -> Result<Self, String> {
        let gens = v
            .iter()
            .map(|s| parse_rat(s).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ValueLattice::new(gens))
    }
}

impl From<ValueLattice> for Vec<String> {
    fn from(l: ValueLattice) -> Self {
        l.generators.iter().map(fmt_rat).collect()
    }
}
