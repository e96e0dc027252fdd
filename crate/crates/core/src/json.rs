//! JSON interchange formats.
//!
//! Rationals are strings `"p/q"` (plain integers are also accepted on
//! input). Shapes:
//!
//! - presentation: `{"base": ["1"], "generators": [{"num": "1/2"}, {"sym": "g"}], "relations": [{"exps": [2, 0], "beta": "1"}]}`
//! - polynomial: `{"poly": {"2": "1", "0": "-2"}}`, a bare degree map, or text `"x^2 - 2"`
//! - generator: `{"m": <polynomial>, "interval": ["1", "2"]}`
//! - descriptor: `{"sort": {"kind": "base" | "algebraic" | "free", ...}, "value": <presentation>}`
//! - layered polynomial: `[{"layer": "1", "value": "0", "exp": 2}, ...]`
//! - scalar: `{"layer": "3" | {"algebraic": <generator>, "coeffs": [...]} | {"free": <polynomial>}, "value": "1/2" | {"sym": "g"}}`

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bipotent::{BipotentError, BipotentPresentation, Generator, Relation};
use crate::cancellative::{AlgebraicGenerator, CancellativeError, ExtElem};
use crate::poly::{PolyError, PosPoly, SignedPoly};
use crate::scalar::{fmt_rat, parse_rat, Rat};
use crate::tropical::{LayerError, LayeredElem, ValueLattice};
use crate::uniform::{ExtScalar, LayeredPoly, SortElem, SortPart, UniformDescriptor, UniformError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid degree key {0:?}")]
    DegreeKey(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bipotent(#[from] BipotentError),
    #[error(transparent)]
    Generator(#[from] CancellativeError),
    #[error(transparent)]
    Uniform(#[from] UniformError),
    #[error(transparent)]
    Layer(#[from] LayerError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Text(String),
    Int(i64),
}

impl RatJson {
    pub fn parse(&self) -> Result<Rat, JsonError> {
        match self {
            RatJson::Text(s) => parse_rat(s).map_err(|_| JsonError::Rational(s.clone())),
            RatJson::Int(n) => Ok(Rat::from_integer((*n).into())),
        }
    }
}

impl From<&Rat> for RatJson {
    fn from(q: &Rat) -> Self {
        RatJson::Text(fmt_rat(q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyJson {
    Wrapped { poly: BTreeMap<String, RatJson> },
    Map(BTreeMap<String, RatJson>),
    Text(String),
}

impl PolyJson {
    pub fn parse(&self) -> Result<SignedPoly<Rat>, JsonError> {
        let map = match self {
            PolyJson::Text(s) => return Ok(s.parse()?),
            PolyJson::Wrapped { poly } => poly,
            PolyJson::Map(m) => m,
        };
        let mut terms = Vec::new();
        for (k, v) in map {
            let d: usize = k.trim().parse().map_err(|_| JsonError::DegreeKey(k.clone()))?;
            terms.push((d, v.parse()?));
        }
        Ok(SignedPoly::from_terms(terms))
    }

    pub fn parse_positive(&self) -> Result<PosPoly<Rat>, JsonError> {
        Ok(PosPoly::new(self.parse()?)?)
    }
}

impl From<&SignedPoly<Rat>> for PolyJson {
    fn from(p: &SignedPoly<Rat>) -> Self {
        PolyJson::Wrapped { poly: p.terms().map(|(d, c)| (d.to_string(), RatJson::from(c))).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub m: PolyJson,
    pub interval: [RatJson; 2],
}

impl GeneratorJson {
    pub fn parse(&self) -> Result<AlgebraicGenerator<Rat>, JsonError> {
        Ok(AlgebraicGenerator::new(self.m.parse()?, self.interval[0].parse()?, self.interval[1].parse()?)?)
    }
}

impl From<&AlgebraicGenerator<Rat>> for GeneratorJson {
    fn from(g: &AlgebraicGenerator<Rat>) -> Self {
        let (lo, hi) = g.interval();
        GeneratorJson { m: g.minimal_poly().into(), interval: [lo.into(), hi.into()] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenJson {
    Num(RatJson),
    Sym(String),
}

impl GenJson {
    pub fn parse(&self) -> Result<Generator, JsonError> {
        Ok(match self {
            GenJson::Num(q) => Generator::Numeric(q.parse()?),
            GenJson::Sym(s) => Generator::Symbolic(s.clone()),
        })
    }
}

impl From<&Generator> for GenJson {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Numeric(q) => GenJson::Num(q.into()),
            Generator::Symbolic(s) => GenJson::Sym(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub exps: Vec<i64>,
    pub beta: RatJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub base: Vec<RatJson>,
    pub generators: Vec<GenJson>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
}

impl PresentationJson {
    pub fn parse(&self) -> Result<BipotentPresentation, JsonError> {
        let base = ValueLattice::new(self.base.iter().map(|q| q.parse()).collect::<Result<_, _>>()?);
        let generators = self.generators.iter().map(|g| g.parse()).collect::<Result<_, _>>()?;
        let relations = self
            .relations
            .iter()
            .map(|r| Ok(Relation { exps: r.exps.clone(), beta: r.beta.parse()? }))
            .collect::<Result<_, JsonError>>()?;
        Ok(BipotentPresentation::new(base, generators, relations)?)
    }
}

impl From<&BipotentPresentation> for PresentationJson {
    fn from(p: &BipotentPresentation) -> Self {
        PresentationJson {
            base: p.base().generators().iter().map(RatJson::from).collect(),
            generators: p.generators().iter().map(GenJson::from).collect(),
            relations: p
                .relations()
                .iter()
                .map(|r| RelationJson { exps: r.exps.clone(), beta: (&r.beta).into() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SortJson {
    Base,
    Algebraic {
        m: PolyJson,
        interval: [RatJson; 2],
    },
    Free {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<PolyJson>,
        #[serde(default)]
        fractions: bool,
    },
}

impl SortJson {
    pub fn parse(&self) -> Result<SortPart, JsonError> {
        Ok(match self {
            SortJson::Base => SortPart::Base,
            SortJson::Algebraic { m, interval } => {
                let g = GeneratorJson { m: m.clone(), interval: interval.clone() }.parse()?;
                SortPart::Algebraic(Arc::new(g))
            }
            SortJson::Free { generator, fractions } => SortPart::FreeSimple {
                generator: match generator {
                    Some(p) => p.parse_positive()?,
                    None => PosPoly::monomial(Rat::from_integer(1.into()), 1)?,
                },
                fractions: *fractions,
            },
        })
    }
}

impl From<&SortPart> for SortJson {
    fn from(s: &SortPart) -> Self {
        match s {
            SortPart::Base => SortJson::Base,
            SortPart::Algebraic(g) => {
                let gj = GeneratorJson::from(&**g);
                SortJson::Algebraic { m: gj.m, interval: gj.interval }
            }
            SortPart::FreeSimple { generator, fractions } => {
                SortJson::Free { generator: Some(generator.as_signed().into()), fractions: *fractions }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorJson {
    pub sort: SortJson,
    pub value: PresentationJson,
}

impl DescriptorJson {
    pub fn parse(&self) -> Result<UniformDescriptor, JsonError> {
        Ok(UniformDescriptor { sort: self.sort.parse()?, value: self.value.parse()? })
    }
}

impl From<&UniformDescriptor> for DescriptorJson {
    fn from(d: &UniformDescriptor) -> Self {
        DescriptorJson { sort: (&d.sort).into(), value: (&d.value).into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub layer: RatJson,
    pub value: RatJson,
    pub exp: u32,
}

pub fn parse_layered_poly(terms: &[TermJson]) -> Result<LayeredPoly, JsonError> {
    let terms = terms
        .iter()
        .map(|t| Ok((LayeredElem::new(t.layer.parse()?, t.value.parse()?)?, t.exp)))
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(LayeredPoly::new(terms)?)
}

pub fn layered_poly_json(f: &LayeredPoly) -> Vec<TermJson> {
    f.terms()
        .iter()
        .filter_map(|(c, e)| match c {
            LayeredElem::Pair { layer, value } => Some(TermJson { layer: layer.get().into(), value: value.into(), exp: *e }),
            LayeredElem::Zero => None,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayerJson {
    Rational(RatJson),
    Algebraic { algebraic: GeneratorJson, coeffs: Vec<RatJson> },
    Free { free: PolyJson },
}

impl LayerJson {
    pub fn parse(&self) -> Result<SortElem, JsonError> {
        Ok(match self {
            LayerJson::Rational(q) => SortElem::Rational(q.parse()?),
            LayerJson::Algebraic { algebraic, coeffs } => {
                let g = Arc::new(algebraic.parse()?);
                let cs = coeffs.iter().map(|c| c.parse()).collect::<Result<_, _>>()?;
                SortElem::Algebraic(ExtElem::new(&g, cs))
            }
            LayerJson::Free { free } => SortElem::Free(free.parse_positive()?),
        })
    }
}

impl From<&SortElem> for LayerJson {
    fn from(s: &SortElem) -> Self {
        match s {
            SortElem::Rational(q) => LayerJson::Rational(q.into()),
            SortElem::Algebraic(e) => LayerJson::Algebraic {
                algebraic: (&**e.generator()).into(),
                coeffs: e.coeffs().iter().map(RatJson::from).collect(),
            },
            SortElem::Free(p) => LayerJson::Free { free: p.as_signed().into() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Rational(RatJson),
    Symbol { sym: String },
}

impl ValueJson {
    pub fn parse(&self) -> Result<Generator, JsonError> {
        Ok(match self {
            ValueJson::Rational(q) => Generator::Numeric(q.parse()?),
            ValueJson::Symbol { sym } => Generator::Symbolic(sym.clone()),
        })
    }
}

impl From<&Generator> for ValueJson {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Numeric(q) => ValueJson::Rational(q.into()),
            Generator::Symbolic(s) => ValueJson::Symbol { sym: s.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub layer: LayerJson,
    pub value: ValueJson,
}

impl ScalarJson {
    pub fn parse(&self) -> Result<ExtScalar, JsonError> {
        Ok(ExtScalar::new(self.layer.parse()?, self.value.parse()?)?)
    }
}

impl From<&ExtScalar> for ScalarJson {
    fn from(a: &ExtScalar) -> Self {
        ScalarJson { layer: a.layer().into(), value: a.value().into() }
    }
}
