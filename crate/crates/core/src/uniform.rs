//! Uniform layered extensions `L' ⊙ G'` of the base `Q>0 ⊙ G(H)`.
//!
//! A [`UniformDescriptor`] pairs a sort part (the layer semiring) with a
//! bipotent presentation (the value group). Scalars of an extension carry a
//! layer from the sort part and a value that is either rational or a
//! symbol. Evaluation, pure extensions, closures, layer fibres and the
//! semifield criterion live here.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::bipotent::{BipotentPresentation, Generator, ValueExpr};
use crate::cancellative::{AlgebraicGenerator, ExtElem};
use crate::poly::{PosPoly, SignedPoly};
use crate::scalar::{fmt_rat, Rat};
use crate::tropical::{LayerError, LayeredElem, ValueLattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniformError {
    #[error("value {0} is not in the value group of the base")]
    ValueNotInBase(String),
    #[error("layer {0} is not in the sort part of the base")]
    LayerNotInBase(String),
    #[error("layers {0} and {1} live in different sort semirings")]
    SortMismatch(String, String),
    #[error("layer {0} is not positive")]
    NonPositiveLayer(String),
    #[error("symbolic value {0} cannot be compared with rational values")]
    SymbolicValue(String),
    #[error("adjoining {layer} to {sort} needs more than one sort generator")]
    UnsupportedTower { sort: String, layer: String },
    #[error("layered polynomial: {0}")]
    InvalidPoly(String),
    #[error(transparent)]
    Layer(#[from] LayerError),
}

/// The sorting (layer) semiring of an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortPart {
    /// `Q>0`.
    Base,
    /// `Q>0[θ]`, the positive reals of `Q(θ)`.
    Algebraic(Arc<AlgebraicGenerator<Rat>>),
    /// `Q>0[p(t)]` for a transcendental `t`, or `Q>0(p(t))` with fractions.
    FreeSimple { generator: PosPoly<Rat>, fractions: bool },
}

impl SortPart {
    pub fn is_semifield(&self) -> bool {
        match self {
            SortPart::Base | SortPart::Algebraic(_) => true,
            SortPart::FreeSimple { fractions, .. } => *fractions,
        }
    }

    pub fn contains(&self, layer: &SortElem) -> bool {
        match (self, layer) {
            (_, SortElem::Rational(q)) => q.is_positive(),
            (SortPart::Algebraic(g), SortElem::Algebraic(e)) => {
                if **e.generator() == **g {
                    return e.is_positive_real();
                }
                // over another generator only the root of `g` itself is recognized:
                // a root of g's polynomial inside g's isolating interval
                e.minimal_poly() == *g.minimal_poly() && {
                    let (lo, hi) = g.interval();
                    let above = e.sub(&ExtElem::from_scalar(e.generator(), lo.clone())).map(|d| d.sign_at_root());
                    let below = ExtElem::from_scalar(e.generator(), hi.clone()).sub(e).map(|d| d.sign_at_root());
                    above == Ok(Ordering::Greater) && below.is_ok_and(|o| o != Ordering::Less)
                }
            }
            (SortPart::FreeSimple { generator, fractions }, SortElem::Free(p)) => {
                free_membership(p, generator, *fractions)
            }
            _ => false,
        }
    }
}

impl fmt::Display for SortPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortPart::Base => f.write_str("Q>0"),
            SortPart::Algebraic(g) => {
                let (lo, hi) = g.interval();
                write!(f, "Q>0[θ], θ root of {} in ({}, {})", g.minimal_poly(), fmt_rat(lo), fmt_rat(hi))
            }
            SortPart::FreeSimple { generator, fractions } => {
                let p = generator.to_string().replace('x', "t");
                if *fractions {
                    write!(f, "Q>0({p})")
                } else {
                    write!(f, "Q>0[{p}]")
                }
            }
        }
    }
}

/// `q ∈ Q>0[p]` (or `Q>0(p)`) for polynomials in the transcendental `t`.
/// `q` must be a polynomial in `p`; without fractions its coefficients must
/// be non-negative, with fractions it must be positive on `p > 0`.
fn free_membership(q: &PosPoly<Rat>, p: &PosPoly<Rat>, fractions: bool) -> bool {
    let p = p.as_signed();
    if p.degree() == Some(0) {
        return q.degree() == 0;
    }
    let mut coeffs = Vec::new();
    let mut rest = q.as_signed().clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem(p);
        if rem.degree().unwrap_or(0) > 0 {
            return false;
        }
        coeffs.push(rem.coeff(0));
        rest = quot;
    }
    let r = SignedPoly::from_coeffs(coeffs);
    if !r.has_negative_coeff() {
        return true;
    }
    if !fractions {
        return false;
    }
    // strip y^k, then positivity on [0, ∞) means s(0) > 0, lc > 0, and no
    // positive roots
    let k = r.terms().next().map(|(d, _)| d).unwrap_or(0);
    let s = SignedPoly::from_coeffs(r.coeffs()[k..].to_vec());
    s.coeff(0).is_positive() && s.leading().is_some_and(|c| c.is_positive()) && s.count_positive_roots() == 0
}

/// A layer: rational, algebraic over a generator, or a polynomial in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortElem {
    Rational(Rat),
    Algebraic(ExtElem<Rat>),
    Free(PosPoly<Rat>),
}

impl SortElem {
    pub fn one() -> Self {
        SortElem::Rational(Rat::one())
    }

    /// Rewrites rational algebraic or constant elements as `Rational`.
    pub fn normalize(self) -> Self {
        match self {
            SortElem::Algebraic(e) => match e.as_rational() {
                Some(q) => SortElem::Rational(q),
                None => SortElem::Algebraic(e),
            },
            SortElem::Free(p) if p.degree() == 0 => SortElem::Rational(p.as_signed().coeff(0)),
            other => other,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            SortElem::Rational(q) => q.is_positive(),
            SortElem::Algebraic(e) => e.is_positive_real(),
            SortElem::Free(_) => true,
        }
    }

    fn combine(
        &self,
        other: &Self,
        rat: impl Fn(&Rat, &Rat) -> Rat,
        alg: impl Fn(&ExtElem<Rat>, &ExtElem<Rat>) -> Option<ExtElem<Rat>>,
        free: impl Fn(&PosPoly<Rat>, &PosPoly<Rat>) -> PosPoly<Rat>,
    ) -> Result<Self, UniformError> {
        let mismatch = || UniformError::SortMismatch(self.to_string(), other.to_string());
        let out = match (self, other) {
            (SortElem::Rational(a), SortElem::Rational(b)) => SortElem::Rational(rat(a, b)),
            (SortElem::Algebraic(a), SortElem::Algebraic(b)) => SortElem::Algebraic(alg(a, b).ok_or_else(mismatch)?),
            (SortElem::Algebraic(a), SortElem::Rational(q)) => {
                SortElem::Algebraic(alg(a, &ExtElem::from_scalar(a.generator(), q.clone())).ok_or_else(mismatch)?)
            }
            (SortElem::Rational(q), SortElem::Algebraic(b)) => {
                SortElem::Algebraic(alg(&ExtElem::from_scalar(b.generator(), q.clone()), b).ok_or_else(mismatch)?)
            }
            (SortElem::Free(a), SortElem::Free(b)) => SortElem::Free(free(a, b)),
            (SortElem::Free(a), SortElem::Rational(q)) => SortElem::Free(free(a, &PosPoly::constant(q.clone()).map_err(|_| mismatch())?)),
            (SortElem::Rational(q), SortElem::Free(b)) => SortElem::Free(free(&PosPoly::constant(q.clone()).map_err(|_| mismatch())?, b)),
            _ => return Err(mismatch()),
        };
        Ok(out.normalize())
    }

    pub fn add(&self, other: &Self) -> Result<Self, UniformError> {
        self.combine(other, |a, b| a + b, |a, b| a.add(b).ok(), |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, UniformError> {
        self.combine(other, |a, b| a * b, |a, b| a.mul(b).ok(), |a, b| a * b)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = SortElem::one();
        for _ in 0..n {
            acc = acc.mul(self).expect("powers stay in one sort semiring");
        }
        acc
    }
}

impl fmt::Display for SortElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortElem::Rational(q) => f.write_str(&fmt_rat(q)),
            SortElem::Algebraic(e) => e.fmt(f),
            SortElem::Free(p) => f.write_str(&p.to_string().replace('x', "t")),
        }
    }
}

/// A scalar `a = s(a) ⊙ ν(a)` of an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtScalar {
    layer: SortElem,
    value: Generator,
}

impl ExtScalar {
    pub fn new(layer: SortElem, value: Generator) -> Result<Self, UniformError> {
        let layer = layer.normalize();
        if !layer.is_positive() {
            return Err(UniformError::NonPositiveLayer(layer.to_string()));
        }
        Ok(ExtScalar { layer, value })
    }

    pub fn rational(layer: Rat, value: Rat) -> Result<Self, UniformError> {
        Self::new(SortElem::Rational(layer), Generator::Numeric(value))
    }

    pub fn layer(&self) -> &SortElem {
        &self.layer
    }

    pub fn value(&self) -> &Generator {
        &self.value
    }

    fn numeric_value(&self) -> Result<&Rat, UniformError> {
        match &self.value {
            Generator::Numeric(q) => Ok(q),
            Generator::Symbolic(s) => Err(UniformError::SymbolicValue(s.clone())),
        }
    }

    /// `self · [1]delta`, for numeric values.
    pub fn shift_value(&self, delta: &Rat) -> Result<Self, UniformError> {
        let v = self.numeric_value()?;
        Ok(ExtScalar { layer: self.layer.clone(), value: Generator::Numeric(v + delta) })
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]{}", self.layer, self.value)
    }
}

/// `Σ αᵢ xⁱ` with non-zero layered coefficients over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredPoly {
    terms: Vec<(LayeredElem<Rat>, u32)>,
}

impl LayeredPoly {
    pub fn new(mut terms: Vec<(LayeredElem<Rat>, u32)>) -> Result<Self, UniformError> {
        if terms.is_empty() {
            return Err(UniformError::InvalidPoly("no terms".into()));
        }
        if terms.iter().any(|(c, _)| c.is_zero()) {
            return Err(UniformError::InvalidPoly("zero coefficient".into()));
        }
        terms.sort_by_key(|(_, e)| *e);
        if terms.windows(2).any(|w| w[0].1 == w[1].1) {
            return Err(UniformError::InvalidPoly("repeated exponent".into()));
        }
        Ok(LayeredPoly { terms })
    }

    pub fn terms(&self) -> &[(LayeredElem<Rat>, u32)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.last().map(|t| t.1).unwrap_or(0)
    }

    fn term_parts(&self) -> impl Iterator<Item = (&Rat, &Rat, u32)> {
        self.terms.iter().map(|(c, e)| match c {
            LayeredElem::Pair { layer, value } => (layer.get(), value, *e),
            LayeredElem::Zero => unreachable!("coefficients are non-zero"),
        })
    }

    /// Plain layered evaluation at a base element.
    pub fn eval_base(&self, x: &LayeredElem<Rat>) -> LayeredElem<Rat> {
        self.terms
            .iter()
            .fold(LayeredElem::Zero, |acc, (c, e)| acc.trop_add(&c.trop_mul(&x.pow(*e))))
    }
}

impl fmt::Display for LayeredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(c, e)| match e {
                0 => c.to_string(),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Exponents of the dominant terms of `f` at `a`.
pub fn essential_indices(f: &LayeredPoly, a: &ExtScalar) -> Result<Vec<u32>, UniformError> {
    let va = a.numeric_value()?;
    let term_values: Vec<(u32, Rat)> = f
        .term_parts()
        .map(|(_, v, e)| (e, v + va * Rat::from_integer(e.into())))
        .collect();
    let max = term_values.iter().map(|(_, v)| v).max().expect("non-empty").clone();
    Ok(term_values.into_iter().filter(|(_, v)| *v == max).map(|(e, _)| e).collect())
}

/// `f(a) = s(f(a)) ⊙ ν(f(a))` together with the essential exponents and
/// the layer polynomial `Σ_{j∈J} s(αⱼ)·yʲ` whose value at `s(a)` is the layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub layer: SortElem,
    pub value: Rat,
    pub essential: Vec<u32>,
    pub layer_poly: PosPoly<Rat>,
}

pub fn eval_layered_poly(f: &LayeredPoly, a: &ExtScalar) -> Result<Evaluation, UniformError> {
    let essential = essential_indices(f, a)?;
    let va = a.numeric_value()?;
    let mut value = None;
    let mut layer_terms = Vec::new();
    for (l, v, e) in f.term_parts() {
        if essential.contains(&e) {
            value.get_or_insert_with(|| v + va * Rat::from_integer(e.into()));
            layer_terms.push((e as usize, l.clone()));
        }
    }
    let layer_poly = PosPoly::new(SignedPoly::from_terms(layer_terms)).expect("layers are positive");
    // Horner over the sort semiring
    let coeffs = layer_poly.as_signed().coeffs();
    let mut layer = SortElem::Rational(coeffs.last().unwrap().clone());
    for c in coeffs.iter().rev().skip(1) {
        layer = layer.mul(a.layer())?;
        if !c.is_zero() {
            layer = layer.add(&SortElem::Rational(c.clone()))?;
        }
    }
    Ok(Evaluation { layer, value: value.expect("essential set is non-empty"), essential, layer_poly })
}

/// `L' ⊙ G'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformDescriptor {
    pub sort: SortPart,
    pub value: BipotentPresentation,
}

fn value_expr(g: &Generator) -> ValueExpr {
    match g {
        Generator::Numeric(q) => ValueExpr { constant: q.clone(), symbols: Vec::new() },
        Generator::Symbolic(s) => ValueExpr { constant: Rat::zero(), symbols: vec![(s.clone(), Rat::one())] },
    }
}

impl UniformDescriptor {
    /// `Q>0 ⊙ base`.
    pub fn base(lattice: ValueLattice) -> Self {
        UniformDescriptor { sort: SortPart::Base, value: BipotentPresentation::trivial(lattice) }
    }

    pub fn value_contains(&self, v: &Generator) -> bool {
        self.value.value_group_contains(&value_expr(v))
    }

    pub fn layer_contains(&self, l: &SortElem) -> bool {
        self.sort.contains(l)
    }

    pub fn contains(&self, a: &ExtScalar) -> bool {
        self.layer_contains(a.layer()) && self.value_contains(a.value())
    }
}

impl fmt::Display for UniformDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta = self.value.base().delta();
        let base = if delta.is_zero() {
            "{0}".to_string()
        } else if delta.is_one() {
            "Z".to_string()
        } else {
            format!("{}Z", fmt_rat(delta))
        };
        write!(f, "{} ⊙ {}", self.sort, base)?;
        if !self.value.is_empty() {
            let gens: Vec<String> = self.value.generators().iter().map(|g| g.to_string()).collect();
            write!(f, "[{}]", gens.join(", "))?;
        }
        Ok(())
    }
}

/// `H[a] = L_H[s(a)] ⊙ G(H)` for `ν(a) ∈ G(H)`.
pub fn pure_layer_ext(h: &UniformDescriptor, a: &ExtScalar) -> Result<UniformDescriptor, UniformError> {
    if !h.value_contains(a.value()) {
        return Err(UniformError::ValueNotInBase(a.value().to_string()));
    }
    if h.layer_contains(a.layer()) {
        return Ok(h.clone());
    }
    let unsupported = || UniformError::UnsupportedTower { sort: h.sort.to_string(), layer: a.layer().to_string() };
    let sort = match (&h.sort, a.layer()) {
        (SortPart::Base, SortElem::Algebraic(e)) => {
            // an element of full degree generates the same field as the root
            if *e == ExtElem::root(e.generator()) || e.minimal_poly().degree() == Some(e.generator().dimension()) {
                SortPart::Algebraic(Arc::clone(e.generator()))
            } else {
                SortPart::Algebraic(Arc::new(e.to_generator().ok_or_else(unsupported)?))
            }
        }
        (SortPart::Base, SortElem::Free(p)) => SortPart::FreeSimple { generator: p.clone(), fractions: false },
        _ => return Err(unsupported()),
    };
    Ok(UniformDescriptor { sort, value: h.value.clone() })
}

/// `H[a] = L_H ⊙ G(H[ν(a)])` for `s(a) ∈ L_H`.
pub fn pure_value_ext(h: &UniformDescriptor, a: &ExtScalar) -> Result<UniformDescriptor, UniformError> {
    if !h.layer_contains(a.layer()) {
        return Err(UniformError::LayerNotInBase(a.layer().to_string()));
    }
    if h.value_contains(a.value()) {
        return Ok(h.clone());
    }
    let value = h
        .value
        .with_generator(a.value().clone())
        .expect("a new generator adds no relations");
    Ok(UniformDescriptor { sort: h.sort.clone(), value })
}

/// The smallest uniform layered domain containing `H` and `a`:
/// `L_H[s(a)] ⊙ G(H[ν(a)])`, built value part first.
pub fn uniform_closure(h: &UniformDescriptor, a: &ExtScalar) -> Result<UniformDescriptor, UniformError> {
    let (layer_part, value_part) = split(a);
    let with_value = pure_value_ext(h, &value_part)?;
    pure_layer_ext(&with_value, &layer_part)
}

/// Same closure built layer part first.
pub fn uniform_closure_layer_first(h: &UniformDescriptor, a: &ExtScalar) -> Result<UniformDescriptor, UniformError> {
    let (layer_part, value_part) = split(a);
    let with_layer = pure_layer_ext(h, &layer_part)?;
    pure_value_ext(&with_layer, &value_part)
}

/// `(s(a) ⊙ 1, 1 ⊙ ν(a))`.
fn split(a: &ExtScalar) -> (ExtScalar, ExtScalar) {
    let layer_part = ExtScalar { layer: a.layer.clone(), value: Generator::Numeric(Rat::zero()) };
    let value_part = ExtScalar { layer: SortElem::one(), value: a.value.clone() };
    (layer_part, value_part)
}

/// `{s(e) : e ∈ elems, ν(e) = alpha}`, without repeats, in sample order.
pub fn layer_fibre_sample(elems: &[ExtScalar], alpha: &Generator) -> Vec<SortElem> {
    let mut out: Vec<SortElem> = Vec::new();
    for e in elems.iter().filter(|e| e.value() == alpha) {
        if !out.contains(e.layer()) {
            out.push(e.layer().clone());
        }
    }
    out
}

/// Compares the sampled fibres at `alpha` and `beta`. With `translate`, the
/// sample is first closed under multiplication by `[1](beta − alpha)` and
/// its inverse, which maps one fibre onto the other in any uniform domain.
pub fn fibres_coincide(sample: &[ExtScalar], alpha: &Rat, beta: &Rat, translate: bool) -> bool {
    if alpha == beta {
        return true;
    }
    let mut elems = sample.to_vec();
    if translate {
        let shift = beta - alpha;
        for e in sample {
            match e.value() {
                Generator::Numeric(v) if v == alpha => elems.push(e.shift_value(&shift).expect("numeric")),
                Generator::Numeric(v) if v == beta => elems.push(e.shift_value(&-shift.clone()).expect("numeric")),
                _ => {}
            }
        }
    }
    let a = layer_fibre_sample(&elems, &Generator::Numeric(alpha.clone()));
    let b = layer_fibre_sample(&elems, &Generator::Numeric(beta.clone()));
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

/// Outcome of [`is_layerset_semiring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayersetReport {
    /// `ν(a) ∈ G(H)`, the semiring criterion.
    pub is_semiring: bool,
    /// `s(a)` already lies in `L_H`; then `L_{H[a]} = L_H` regardless.
    pub layer_in_base: bool,
    /// When not a semiring: the layers `1` and `s(a)`, whose sum would need
    /// the degree-0 and degree-1 terms of some `f(a)` to tie in value.
    pub witness: Option<(SortElem, SortElem)>,
    /// Degree pairs `i < j ≤ bound` whose terms can tie, i.e. with
    /// `(j − i)·ν(a) ∈ G(H)`. A layer sum mixing degrees is realizable only
    /// across such pairs.
    pub tie_pairs: Vec<(u32, u32)>,
}

pub fn is_layerset_semiring(h: &UniformDescriptor, a: &ExtScalar, bound: u32) -> LayersetReport {
    let is_semiring = h.value_contains(a.value());
    let layer_in_base = h.layer_contains(a.layer());
    let mut ties = BTreeSet::new();
    for gap in 1..=bound {
        let mut v = value_expr(a.value());
        v.constant *= Rat::from_integer(gap.into());
        for (_, c) in v.symbols.iter_mut() {
            *c *= Rat::from_integer(gap.into());
        }
        if h.value.value_group_contains(&v) {
            for i in 0..=bound - gap {
                ties.insert((i, i + gap));
            }
        }
    }
    let witness = (!is_semiring).then(|| (SortElem::one(), a.layer().clone()));
    LayersetReport { is_semiring, layer_in_base, witness, tie_pairs: ties.into_iter().collect() }
}

/// Both the sort part and the value part are semifields.
pub fn is_uniform_semifield(h: &UniformDescriptor) -> bool {
    h.sort.is_semifield() && h.value.is_bipotent_semifield()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn sqrt2() -> Arc<AlgebraicGenerator<Rat>> {
        Arc::new(AlgebraicGenerator::new("x^2 - 2".parse().unwrap(), rat_int(1), rat_int(2)).unwrap())
    }

    fn le(l: i64, v: i64) -> LayeredElem<Rat> {
        LayeredElem::new(rat_int(l), rat_int(v)).unwrap()
    }

    fn quad() -> LayeredPoly {
        LayeredPoly::new(vec![(le(1, 0), 2), (le(1, 0), 1), (le(1, 0), 0)]).unwrap()
    }

    fn qz() -> UniformDescriptor {
        UniformDescriptor::base(ValueLattice::integers())
    }

    fn root_scalar(value: Generator) -> ExtScalar {
        ExtScalar::new(SortElem::Algebraic(ExtElem::root(&sqrt2())), value).unwrap()
    }

    #[test]
    fn essential_examples() {
        let f = quad();
        assert_eq!(essential_indices(&f, &ExtScalar::rational(rat_int(1), rat_int(0)).unwrap()).unwrap(), vec![0, 1, 2]);
        assert_eq!(essential_indices(&f, &ExtScalar::rational(rat_int(1), rat_int(1)).unwrap()).unwrap(), vec![2]);
        let single = LayeredPoly::new(vec![(le(2, 5), 3)]).unwrap();
        assert_eq!(essential_indices(&single, &ExtScalar::rational(rat_int(4), rat_int(-1)).unwrap()).unwrap(), vec![3]);
    }

    #[test]
    fn evaluation_examples() {
        let f = quad();
        let r = eval_layered_poly(&f, &ExtScalar::rational(rat_int(3), rat_int(0)).unwrap()).unwrap();
        assert_eq!((r.layer, r.value), (SortElem::Rational(rat_int(13)), rat_int(0)));
        let r = eval_layered_poly(&f, &ExtScalar::rational(rat_int(3), rat_int(1)).unwrap()).unwrap();
        assert_eq!((r.layer, r.value), (SortElem::Rational(rat_int(9)), rat_int(2)));
        let c = LayeredPoly::new(vec![(le(2, 5), 0)]).unwrap();
        let r = eval_layered_poly(&c, &root_scalar(Generator::Numeric(rat(7, 3)))).unwrap();
        assert_eq!((r.layer, r.value), (SortElem::Rational(rat_int(2)), rat_int(5)));
        // algebraic layer: θ² + θ + 1 = 3 + θ
        let r = eval_layered_poly(&f, &root_scalar(Generator::Numeric(rat_int(0)))).unwrap();
        assert_eq!(r.layer, SortElem::Algebraic(ExtElem::new(&sqrt2(), vec![rat_int(3), rat_int(1)])));
        assert!(matches!(
            eval_layered_poly(&f, &root_scalar(Generator::Symbolic("g".into()))),
            Err(UniformError::SymbolicValue(_))
        ));
    }

    #[test]
    fn poly_validation() {
        assert!(LayeredPoly::new(vec![]).is_err());
        assert!(LayeredPoly::new(vec![(LayeredElem::Zero, 1)]).is_err());
        assert!(LayeredPoly::new(vec![(le(1, 0), 1), (le(2, 0), 1)]).is_err());
        assert_eq!(quad().to_string(), "[1]0*x^2 + [1]0*x + [1]0");
    }

    #[test]
    fn pure_extensions() {
        let h = qz();
        let layered = pure_layer_ext(&h, &root_scalar(Generator::Numeric(rat_int(0)))).unwrap();
        assert_eq!(layered.sort, SortPart::Algebraic(sqrt2()));
        assert_eq!(layered.value, h.value);
        assert_eq!(pure_layer_ext(&h, &ExtScalar::rational(rat_int(2), rat_int(0)).unwrap()).unwrap(), h);
        assert!(matches!(
            pure_layer_ext(&h, &root_scalar(Generator::Numeric(rat(1, 2)))),
            Err(UniformError::ValueNotInBase(_))
        ));

        let valued = pure_value_ext(&h, &ExtScalar::rational(rat_int(2), rat(1, 2)).unwrap()).unwrap();
        assert_eq!(valued.sort, SortPart::Base);
        assert_eq!(valued.value.generators(), &[Generator::Numeric(rat(1, 2))]);
        assert_eq!(pure_value_ext(&h, &ExtScalar::rational(rat_int(2), rat_int(3)).unwrap()).unwrap(), h);
        assert!(matches!(
            pure_value_ext(&h, &root_scalar(Generator::Numeric(rat(1, 2)))),
            Err(UniformError::LayerNotInBase(_))
        ));
    }

    #[test]
    fn closure_examples() {
        let h = qz();
        let a = root_scalar(Generator::Numeric(rat(1, 2)));
        let c = uniform_closure(&h, &a).unwrap();
        assert_eq!(c.sort, SortPart::Algebraic(sqrt2()));
        assert_eq!(c.value.generators(), &[Generator::Numeric(rat(1, 2))]);
        assert_eq!(c, uniform_closure_layer_first(&h, &a).unwrap());
        assert_eq!(uniform_closure(&c, &a).unwrap(), c);
        assert!(c.contains(&a));
        assert!(is_uniform_semifield(&c));
        assert_eq!(c.to_string(), "Q>0[θ], θ root of x^2 - 2 in (1, 2) ⊙ Z[1/2]");
        let inside = ExtScalar::rational(rat(5, 3), rat_int(4)).unwrap();
        assert_eq!(uniform_closure(&h, &inside).unwrap(), h);
    }

    #[test]
    fn non_root_algebraic_layer() {
        // 1 + √2 generates Q(√2) again
        let e = ExtElem::new(&sqrt2(), vec![rat_int(1), rat_int(1)]);
        let a = ExtScalar::new(SortElem::Algebraic(e), Generator::Numeric(rat_int(0))).unwrap();
        let c = pure_layer_ext(&qz(), &a).unwrap();
        assert_eq!(c.sort, SortPart::Algebraic(sqrt2()));
        assert!(c.contains(&a));

        // θ² for θ = 3^(1/4) only generates Q(√3)
        let quartic = Arc::new(AlgebraicGenerator::new("x^4 - 3".parse().unwrap(), rat_int(1), rat_int(2)).unwrap());
        let sq = ExtElem::new(&quartic, vec![rat_int(0), rat_int(0), rat_int(1)]);
        let a = ExtScalar::new(SortElem::Algebraic(sq), Generator::Numeric(rat_int(0))).unwrap();
        let c = pure_layer_ext(&qz(), &a).unwrap();
        match &c.sort {
            SortPart::Algebraic(g) => assert_eq!(g.minimal_poly().to_string(), "x^2 - 3"),
            other => panic!("unexpected sort part {other}"),
        }
        assert!(c.contains(&a));
        assert_eq!(uniform_closure(&c, &a).unwrap(), c);
    }

    #[test]
    fn conjugate_root_not_contained() {
        // 3 - √2 ≈ 1.59 is a root of x^2 - 6x + 7, whose other root is ≈ 4.41
        let e = ExtElem::new(&sqrt2(), vec![rat_int(3), rat_int(-1)]);
        let layer = SortElem::Algebraic(e);
        let far = Arc::new(AlgebraicGenerator::new("x^2 - 6*x + 7".parse().unwrap(), rat_int(4), rat_int(5)).unwrap());
        let near = Arc::new(AlgebraicGenerator::new("x^2 - 6*x + 7".parse().unwrap(), rat_int(1), rat_int(2)).unwrap());
        assert!(!SortPart::Algebraic(far).contains(&layer));
        assert!(SortPart::Algebraic(near).contains(&layer));
    }

    #[test]
    fn free_layers() {
        let t: PosPoly<Rat> = "x".parse().unwrap();
        let a = ExtScalar::new(SortElem::Free(t.clone()), Generator::Numeric(rat_int(0))).unwrap();
        let c = pure_layer_ext(&qz(), &a).unwrap();
        assert_eq!(c.sort, SortPart::FreeSimple { generator: t.clone(), fractions: false });
        assert!(!is_uniform_semifield(&c));
        let frac = UniformDescriptor { sort: SortPart::FreeSimple { generator: t.clone(), fractions: true }, value: c.value.clone() };
        assert!(is_uniform_semifield(&frac));
        let shifted: PosPoly<Rat> = "x^2 + 1".parse().unwrap();
        assert!(c.sort.contains(&SortElem::Free(shifted.clone())));
        // over Q>0[t + 1]: t^2 + 1 = y^2 - 2y + 2 needs fractions
        let sort = SortPart::FreeSimple { generator: "x + 1".parse().unwrap(), fractions: false };
        assert!(!sort.contains(&SortElem::Free(shifted.clone())));
        let sort = SortPart::FreeSimple { generator: "x + 1".parse().unwrap(), fractions: true };
        assert!(sort.contains(&SortElem::Free(shifted)));
        // t = y - 1 is negative for small y > 0
        assert!(!sort.contains(&SortElem::Free("x".parse().unwrap())));
        let r = eval_layered_poly(&quad(), &a).unwrap();
        assert_eq!(r.layer, SortElem::Free("x^2 + x + 1".parse().unwrap()));
    }

    #[test]
    fn fibres() {
        let s = |l: i64, v: i64| ExtScalar::rational(rat_int(l), rat_int(v)).unwrap();
        let elems = vec![s(2, 5), s(3, 5), s(7, 1)];
        assert_eq!(
            layer_fibre_sample(&elems, &Generator::Numeric(rat_int(5))),
            vec![SortElem::Rational(rat_int(2)), SortElem::Rational(rat_int(3))]
        );
        assert!(layer_fibre_sample(&elems, &Generator::Numeric(rat_int(9))).is_empty());
        let adversarial = vec![s(2, 0)];
        assert!(!fibres_coincide(&adversarial, &rat_int(0), &rat_int(1), false));
        assert!(fibres_coincide(&adversarial, &rat_int(0), &rat_int(1), true));
        assert!(fibres_coincide(&adversarial, &rat_int(4), &rat_int(4), false));
        let grid: Vec<ExtScalar> = (1..5).flat_map(|l| (-2..3).map(move |v| s(l, v))).collect();
        assert!(fibres_coincide(&grid, &rat_int(0), &rat_int(1), false));
    }

    #[test]
    fn layerset_semiring() {
        let h = qz();
        let r = is_layerset_semiring(&h, &root_scalar(Generator::Numeric(rat_int(0))), 8);
        assert!(r.is_semiring && r.witness.is_none());
        let r = is_layerset_semiring(&h, &root_scalar(Generator::Symbolic("g".into())), 8);
        assert!(!r.is_semiring);
        assert!(r.tie_pairs.is_empty());
        assert_eq!(r.witness, Some((SortElem::one(), root_scalar(Generator::Numeric(rat_int(0))).layer().clone())));
        let r = is_layerset_semiring(&h, &ExtScalar::rational(rat_int(2), rat_int(3)).unwrap(), 8);
        assert!(r.is_semiring && r.layer_in_base);
        // torsion value: ties only between degrees of equal parity
        let r = is_layerset_semiring(&h, &root_scalar(Generator::Numeric(rat(1, 2))), 4);
        assert!(!r.is_semiring);
        assert!(r.tie_pairs.iter().all(|(i, j)| (j - i) % 2 == 0));
        assert!(!r.tie_pairs.contains(&(0, 1)));
    }

    #[test]
    fn semifield_criterion() {
        let h = qz();
        assert!(is_uniform_semifield(&h));
        let g = pure_value_ext(&h, &ExtScalar::new(SortElem::one(), Generator::Symbolic("g".into())).unwrap()).unwrap();
        assert!(!is_uniform_semifield(&g));
    }

    fn arb_layered_poly() -> impl Strategy<Value = LayeredPoly> {
        proptest::collection::btree_map(0u32..7, (1i64..6, -6i64..7, 1i64..4), 1..6).prop_map(|m| {
            LayeredPoly::new(
                m.into_iter()
                    .map(|(e, (l, v, d))| (LayeredElem::new(rat_int(l), rat(v, d)).unwrap(), e))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn value_ignores_layer(f in arb_layered_poly(), l in 1i64..9, v in -5i64..6, d in 1i64..4) {
            let a = ExtScalar::rational(rat(l, 3), rat(v, d)).unwrap();
            let flat = ExtScalar::rational(rat_int(1), rat(v, d)).unwrap();
            let r = eval_layered_poly(&f, &a).unwrap();
            prop_assert_eq!(&r.value, &eval_layered_poly(&f, &flat).unwrap().value);
            // the layer is the layer polynomial at s(a), and matches direct
            // layered evaluation
            prop_assert_eq!(SortElem::Rational(r.layer_poly.eval(&rat(l, 3))), r.layer.clone());
            let direct = f.eval_base(&LayeredElem::new(rat(l, 3), rat(v, d)).unwrap());
            prop_assert_eq!(direct, LayeredElem::new(match r.layer { SortElem::Rational(q) => q, _ => unreachable!() }, r.value).unwrap());
        }
    }
}
