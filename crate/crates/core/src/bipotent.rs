//! Finitely generated bipotent extensions `H[a₁, ..., aₙ]` of a bipotent
//! semifield `H` whose value group is a lattice in `(Q, +)`.
//!
//! Values are written additively, so a monomial `∏ aᵢ^kᵢ` has value
//! `Σ kᵢ·ν(aᵢ)` and "lies in H" means that value lies in the base lattice.
//!
//! Generators are either numeric (a rational value, relations computed) or
//! symbolic (relations declared). Declared relations are solved over Q: the
//! value group is modelled inside `Q ⊕ Q^F`, one extra coordinate per
//! symbol that the relations leave free. Every question about the
//! extension then reduces to the integer lattice
//! `Λ = {k ∈ Zⁿ : Σ kᵢ·aᵢ ∈ H}` and its Smith normal form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intmat::{hermite_contains, lattice_basis, left_kernel, smith_normal_form, IntMatrix, SmithDecomposition};
use crate::scalar::{common_denominator, fmt_rat, Rat};
use crate::tropical::ValueLattice;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BipotentError {
    #[error("inconsistent relations: {reason}")]
    InconsistentRelations { reason: String },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("generator index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("generator {generator} of the smaller extension is not a generator of the larger one")]
    NotASubPresentation { generator: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Numeric(Rat),
    Symbolic(String),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Numeric(q) => f.write_str(&fmt_rat(q)),
            Generator::Symbolic(name) => f.write_str(name),
        }
    }
}

/// Declares `Σ exps[i]·aᵢ = beta` with `beta` in the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub exps: Vec<i64>,
    pub beta: Rat,
}

/// Exponent range for monomials: `Integer` is the fraction semifield
/// `H(A)`, `Natural` the monoid-generated `H[A]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentDomain {
    Integer,
    Natural,
}

/// Extension degree: a positive integer or infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Degree {
    Finite(BigInt),
    Infinite,
}

impl Degree {
    pub fn finite(n: i64) -> Self {
        Degree::Finite(BigInt::from(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            Degree::Finite(n) => Some(n),
            Degree::Infinite => None,
        }
    }
}

impl Mul for Degree {
    type Output = Degree;
    fn mul(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a * b),
            _ => Degree::Infinite,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => f.write_str("inf"),
        }
    }
}

/// A value of the extension group: `constant + Σ cⱼ·symbolⱼ` over the free
/// symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueExpr {
    pub constant: Rat,
    pub symbols: Vec<(String, Rat)>,
}

impl ValueExpr {
    pub fn is_rational(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant.is_zero() || self.symbols.is_empty() {
            parts.push((self.constant.is_negative(), fmt_rat(&self.constant.abs())));
        }
        for (name, c) in &self.symbols {
            let mag = c.abs();
            let text = if mag.is_one() { name.clone() } else { format!("{}*{}", fmt_rat(&mag), name) };
            parts.push((c.is_negative(), text));
        }
        for (i, (neg, text)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => f.write_str(text)?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

/// Basis of `Λ`, Hermite-reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentLattice {
    basis: IntMatrix<BigInt>,
}

impl ExponentLattice {
    pub fn basis(&self) -> &IntMatrix<BigInt> {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.basis.rows().map(|r| r.to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.nrows() == 0
    }

    pub fn contains(&self, k: &[BigInt]) -> bool {
        hermite_contains(&self.basis, k)
    }
}

/// A monomial `∏ aᵢ^expsᵢ` and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exps: Vec<BigInt>,
    pub value: ValueExpr,
}

/// A torsion generator of the decomposition. `representative` is the value
/// of the coset representative in `[0, δ)`; it differs from the monomial's
/// own value by an element of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionMonomial {
    pub monomial: Monomial,
    pub order: BigInt,
    pub representative: Rat,
}

/// `aᵢ = β · ∏ bⱼ^freeⱼ · ∏ cⱼ^torsionⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regeneration {
    pub beta: Rat,
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

/// `D = (H(b₁..b_t))[c_{t+1}..c_m]`: free part, torsion part, and how each
/// original generator is rebuilt from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtDecomposition {
    pub lattice: ExponentLattice,
    pub invariant_factors: Vec<BigInt>,
    pub free: Vec<Monomial>,
    pub torsion: Vec<TorsionMonomial>,
    pub regeneration: Vec<Regeneration>,
    pub rank: Degree,
}

impl ExtDecomposition {
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.torsion.iter().map(|t| t.order.clone()).collect()
    }
}

/// `k·b = Σ exps[i]·aᵢ + beta` with `k` minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceWitness {
    pub k: BigInt,
    pub exps: Vec<BigInt>,
    pub beta: Rat,
}

/// Values of the generators inside `Q ⊕ Q^F`.
#[derive(Debug, Clone)]
struct Model {
    free_symbols: Vec<String>,
    values: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone)]
pub struct BipotentPresentation {
    base: ValueLattice,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    model: Model,
}

impl PartialEq for BipotentPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for BipotentPresentation {}

impl BipotentPresentation {
    pub fn new(base: ValueLattice, generators: Vec<Generator>, relations: Vec<Relation>) -> Result<Self, BipotentError> {
        let model = build_model(&base, &generators, &relations)?;
        Ok(BipotentPresentation { base, generators, relations, model })
    }

    /// The base itself, with no generators.
    pub fn trivial(base: ValueLattice) -> Self {
        Self::new(base, Vec::new(), Vec::new()).expect("no relations to contradict")
    }

    pub fn numeric(base: ValueLattice, values: Vec<Rat>) -> Self {
        Self::new(base, values.into_iter().map(Generator::Numeric).collect(), Vec::new())
            .expect("no relations to contradict")
    }

    pub fn base(&self) -> &ValueLattice {
        &self.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Adds a generator; existing relations get a zero exponent for it.
    pub fn with_generator(&self, g: Generator) -> Result<Self, BipotentError> {
        let mut generators = self.generators.clone();
        generators.push(g);
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let mut exps = r.exps.clone();
                exps.push(0);
                Relation { exps, beta: r.beta.clone() }
            })
            .collect();
        Self::new(self.base.clone(), generators, relations)
    }

    /// Reorders generators (and relation exponents): new generator `i` is
    /// old generator `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let generators = perm.iter().map(|&i| self.generators[i].clone()).collect();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation { exps: perm.iter().map(|&i| r.exps[i]).collect(), beta: r.beta.clone() })
            .collect();
        Self::new(self.base.clone(), generators, relations).expect("permutation keeps consistency")
    }

    fn check_exps(&self, exps: &[BigInt]) -> Result<(), BipotentError> {
        if exps.len() != self.len() {
            return Err(BipotentError::ExponentLength { expected: self.len(), got: exps.len() });
        }
        Ok(())
    }

    fn check_indices(&self, idx: &[usize]) -> Result<(), BipotentError> {
        match idx.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(BipotentError::IndexOutOfRange { index, n: self.len() }),
            None => Ok(()),
        }
    }

    fn dim(&self) -> usize {
        1 + self.model.free_symbols.len()
    }

    fn value_vector(&self, exps: &[BigInt]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (k, v) in exps.iter().zip(&self.model.values) {
            if k.is_zero() {
                continue;
            }
            let k = Rat::from_integer(k.clone());
            for (o, x) in out.iter_mut().zip(v) {
                *o += &k * x;
            }
        }
        out
    }

    fn to_expr(&self, v: &[Rat]) -> ValueExpr {
        ValueExpr {
            constant: v[0].clone(),
            symbols: self
                .model
                .free_symbols
                .iter()
                .zip(&v[1..])
                .filter(|(_, c)| !c.is_zero())
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
        }
    }

    /// Value of the monomial with exponent vector `exps`.
    pub fn monomial_value(&self, exps: &[BigInt]) -> Result<ValueExpr, BipotentError> {
        self.check_exps(exps)?;
        Ok(self.to_expr(&self.value_vector(exps)))
    }

    /// Value of generator `i` in the model (symbols solved by the relations).
    pub fn generator_value(&self, i: usize) -> ValueExpr {
        self.to_expr(&self.model.values[i])
    }

    /// Whether a value of the form `constant + Σ cⱼ·symbolⱼ` lies in the value
    /// group `G(D) = base + Σ Z·aᵢ`. Symbols must be names used by this
    /// presentation; an unknown symbol is never in the group.
    pub fn value_group_contains(&self, value: &ValueExpr) -> bool {
        let mut target = vec![Rat::zero(); self.dim()];
        target[0] = value.constant.clone();
        for (name, c) in &value.symbols {
            match self.symbol_vector(name) {
                Some(v) => {
                    for (t, x) in target.iter_mut().zip(&v) {
                        *t += c * x;
                    }
                }
                None => return false,
            }
        }
        let mut rows: Vec<Vec<Rat>> = self.model.values.clone();
        if !self.base.is_trivial() {
            let mut d = vec![Rat::zero(); self.dim()];
            d[0] = self.base.delta().clone();
            rows.push(d);
        }
        let den = common_denominator(rows.iter().flatten().chain(&target));
        let scale = |v: &[Rat]| -> Vec<BigInt> { v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect() };
        let basis = lattice_basis(self.dim(), rows.iter().map(|r| scale(r)).collect());
        hermite_contains(&basis, &scale(&target))
    }

    fn symbol_vector(&self, name: &str) -> Option<Vec<Rat>> {
        let i = self.generators.iter().position(|g| matches!(g, Generator::Symbolic(s) if s == name))?;
        Some(self.model.values[i].clone())
    }

    /// Basis of `{k ∈ Z^idx : Σ kᵢ·aᵢ ∈ H}` for the generators in `idx`.
    fn lattice_on(&self, idx: &[usize]) -> IntMatrix<BigInt> {
        let mut rows: Vec<Vec<Rat>> = idx.iter().map(|&i| self.model.values[i].clone()).collect();
        if !self.base.is_trivial() {
            let mut d = vec![Rat::zero(); self.dim()];
            d[0] = self.base.delta().clone();
            rows.push(d);
        }
        let den = common_denominator(rows.iter().flatten());
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let kernel = left_kernel(&IntMatrix::from_rows(self.dim(), ints));
        let projected = kernel.into_iter().map(|k| k[..idx.len()].to_vec()).collect();
        lattice_basis(idx.len(), projected)
    }

    pub fn exponent_lattice(&self) -> ExponentLattice {
        let all: Vec<usize> = (0..self.len()).collect();
        ExponentLattice { basis: self.lattice_on(&all) }
    }

    /// Smith form of `Λ + span{eᵢ : i ∈ sub}`.
    fn relative_smith(&self, sub: &[usize]) -> (IntMatrix<BigInt>, SmithDecomposition<BigInt>) {
        let n = self.len();
        let mut rows = self.exponent_lattice().rows();
        for &i in sub {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            rows.push(e);
        }
        let r = IntMatrix::from_rows(n, rows);
        let snf = smith_normal_form(&r);
        (r, snf)
    }

    pub fn smith(&self) -> SmithDecomposition<BigInt> {
        self.relative_smith(&[]).1
    }

    /// Free rank, torsion monomials and regeneration data.
    pub fn decompose(&self) -> ExtDecomposition {
        let n = self.len();
        let lattice = self.exponent_lattice();
        let snf = smith_normal_form(lattice.basis());
        let factors = snf.invariant_factors();
        let rank = factors.len();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        // (column j, is_torsion)
        let mut kept: Vec<(usize, bool)> = Vec::new();
        for j in 0..n {
            let exps = snf.v_inv.row(j).to_vec();
            let value = self.value_vector(&exps);
            let monomial = Monomial { value: self.to_expr(&value), exps };
            if j >= rank {
                kept.push((j, false));
                free.push(monomial);
            } else if !factors[j].is_one() {
                kept.push((j, true));
                let representative = self.base.reduce(&value[0]);
                torsion.push(TorsionMonomial { monomial, order: factors[j].clone(), representative });
            }
        }
        let regeneration = (0..n)
            .map(|i| {
                let mut beta = self.model.values[i][0].clone();
                let (mut fc, mut tc) = (Vec::new(), Vec::new());
                let mut t_index = 0;
                for &(j, is_torsion) in &kept {
                    let mut c = snf.v.get(i, j).clone();
                    if is_torsion {
                        let t = &torsion[t_index];
                        c = c.mod_floor(&t.order);
                        beta -= Rat::from_integer(c.clone()) * &t.monomial.value.constant;
                        tc.push(c);
                        t_index += 1;
                    } else {
                        beta -= Rat::from_integer(c.clone()) * self.value_vector(&snf.v_inv.row(j).to_vec())[0].clone();
                        fc.push(c);
                    }
                }
                Regeneration { beta, free: fc, torsion: tc }
            })
            .collect();
        let rank_degree = if free.is_empty() {
            Degree::Finite(torsion.iter().fold(BigInt::one(), |acc, t| acc * &t.order))
        } else {
            Degree::Infinite
        };
        ExtDecomposition { lattice, invariant_factors: factors, free, torsion, regeneration, rank: rank_degree }
    }

    /// Some non-trivial monomial relation among the generators in `subset`.
    pub fn is_divisibly_dependent(&self, subset: &[usize]) -> Result<bool, BipotentError> {
        self.check_indices(subset)?;
        Ok(self.lattice_on(subset).nrows() > 0)
    }

    /// Minimal `k ≥ 1` with `k·b ∈ H[aᵢ : i ∈ S]` (as a coset), and the
    /// witnessing exponents and base element. `None` when no power of `b`
    /// lands there.
    pub fn divisible_dependence_witness(&self, b: &[BigInt], subset: &[usize]) -> Result<Option<DependenceWitness>, BipotentError> {
        self.check_exps(b)?;
        self.check_indices(subset)?;
        let (r, snf) = self.relative_smith(subset);
        let Degree::Finite(k) = class_order(&snf, b) else { return Ok(None) };
        let x: Vec<BigInt> = snf.v.vec_mul(b).into_iter().map(|y| y * &k).collect();
        let factors = snf.invariant_factors();
        // w·D = x·... with w_j = x_j / d_j, then z = w·U gives k·b = z·R
        let mut w = vec![BigInt::zero(); r.nrows()];
        for (j, d) in factors.iter().enumerate() {
            w[j] = &x[j] / d;
        }
        let z = snf.u.vec_mul(&w);
        let lambda_rows = r.nrows() - subset.len();
        let mut exps = vec![BigInt::zero(); self.len()];
        for (t, &i) in subset.iter().enumerate() {
            exps[i] += &z[lambda_rows + t];
        }
        let kb: Vec<BigInt> = b.iter().map(|x| x * &k).collect();
        let lhs = self.value_vector(&kb);
        let rhs = self.value_vector(&exps);
        let beta = &lhs[0] - &rhs[0];
        debug_assert!(lhs[1..] == rhs[1..] && self.base.contains(&beta));
        Ok(Some(DependenceWitness { k, exps, beta }))
    }

    /// Minimal `k ≥ 1` with `k·b ∈ H`, or infinite.
    pub fn torsion_degree(&self, b: &[BigInt]) -> Result<Degree, BipotentError> {
        self.check_exps(b)?;
        Ok(class_order(&self.smith(), b))
    }

    /// `[D : H[aᵢ : i ∈ sub]]`.
    pub fn extension_rank(&self, sub: &[usize]) -> Result<Degree, BipotentError> {
        self.check_indices(sub)?;
        let (_, snf) = self.relative_smith(sub);
        if snf.free_rank() > 0 {
            return Ok(Degree::Infinite);
        }
        Ok(Degree::Finite(snf.invariant_factors().iter().fold(BigInt::one(), |acc, d| acc * d)))
    }

    /// `[self : smaller]` where `smaller` has the same base and a subset of
    /// the generators.
    pub fn extension_rank_over(&self, smaller: &BipotentPresentation) -> Result<Degree, BipotentError> {
        let mut sub = Vec::new();
        for g in smaller.generators() {
            match self.generators.iter().position(|h| h == g) {
                Some(i) => sub.push(i),
                None => return Err(BipotentError::NotASubPresentation { generator: g.to_string() }),
            }
        }
        if smaller.base != self.base {
            return Err(BipotentError::NotASubPresentation { generator: "base".into() });
        }
        self.extension_rank(&sub)
    }

    /// `H[A]` is a semifield iff every generator is `H`-torsion.
    pub fn is_bipotent_semifield(&self) -> bool {
        self.smith().free_rank() == 0
    }

    pub fn torsion_subdomain_contains(&self, b: &[BigInt]) -> Result<bool, BipotentError> {
        Ok(self.torsion_degree(b)?.is_finite())
    }

    /// `x = α·y` for some `α ∈ H`.
    pub fn linearly_dependent_pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool, BipotentError> {
        self.check_exps(x)?;
        self.check_exps(y)?;
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        Ok(self.exponent_lattice().contains(&diff))
    }

    /// Whether the class of `exps` has a representative with exponents in the
    /// given domain. For `Natural` this searches `Λ`-translates with basis
    /// coefficients bounded by `bound`.
    pub fn contains_monomial(&self, exps: &[BigInt], domain: ExponentDomain, bound: u32) -> Result<bool, BipotentError> {
        self.check_exps(exps)?;
        if domain == ExponentDomain::Integer || exps.iter().all(|e| !e.is_negative()) {
            return Ok(true);
        }
        let rows = self.exponent_lattice().rows();
        if rows.is_empty() {
            return Ok(false);
        }
        let b = bound as i64;
        let mut coeffs = vec![-b; rows.len()];
        loop {
            let mut v = exps.to_vec();
            for (c, row) in coeffs.iter().zip(&rows) {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi += ri * c;
                }
            }
            if v.iter().all(|e| !e.is_negative()) {
                return Ok(true);
            }
            let mut i = 0;
            while i < coeffs.len() && coeffs[i] == b {
                coeffs[i] = -b;
                i += 1;
            }
            if i == coeffs.len() {
                return Ok(false);
            }
            coeffs[i] += 1;
        }
    }
}

/// Order of the class of `b` in `Zⁿ / rowspan`.
fn class_order(snf: &SmithDecomposition<BigInt>, b: &[BigInt]) -> Degree {
    let y = snf.v.vec_mul(b);
    let factors = snf.invariant_factors();
    if y[factors.len()..].iter().any(|c| !c.is_zero()) {
        return Degree::Infinite;
    }
    let order = factors
        .iter()
        .zip(&y)
        .fold(BigInt::one(), |acc, (d, c)| acc.lcm(&(d / d.gcd(c))));
    Degree::Finite(order)
}

fn build_model(base: &ValueLattice, generators: &[Generator], relations: &[Relation]) -> Result<Model, BipotentError> {
    let n = generators.len();
    let mut symbols: Vec<String> = Vec::new();
    for g in generators {
        if let Generator::Symbolic(s) = g {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
    }
    let sym_index: BTreeMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let f = symbols.len();
    // rows: symbol coefficients | right-hand side
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (ri, rel) in relations.iter().enumerate() {
        if rel.exps.len() != n {
            return Err(BipotentError::InconsistentRelations {
                reason: format!("relation {ri} has {} exponents for {n} generators", rel.exps.len()),
            });
        }
        if !base.contains(&rel.beta) {
            return Err(BipotentError::InconsistentRelations {
                reason: format!("relation {ri} has beta {} outside the base", fmt_rat(&rel.beta)),
            });
        }
        let mut row = vec![Rat::zero(); f + 1];
        row[f] = rel.beta.clone();
        for (k, g) in rel.exps.iter().zip(generators) {
            let k = Rat::from_integer(BigInt::from(*k));
            match g {
                Generator::Numeric(q) => row[f] -= &k * q,
                Generator::Symbolic(s) => row[sym_index[s.as_str()]] += k,
            }
        }
        rows.push(row);
    }
    // reduced row echelon form over Q
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..f {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if let Some(bad) = rows[r..].iter().find(|row| !row[f].is_zero()) {
        return Err(BipotentError::InconsistentRelations {
            reason: format!("relations force 0 = {}", fmt_rat(&bad[f])),
        });
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..f).filter(|c| !pivot_cols.contains(c)).collect();
    let dim = 1 + free_cols.len();
    let symbol_value = |c: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        if let Some(&(row, _)) = pivots.iter().find(|&&(_, pc)| pc == c) {
            v[0] = rows[row][f].clone();
            for (t, &fc) in free_cols.iter().enumerate() {
                v[1 + t] = -rows[row][fc].clone();
            }
        } else {
            let t = free_cols.iter().position(|&fc| fc == c).unwrap();
            v[1 + t] = Rat::one();
        }
        v
    };
    let values = generators
        .iter()
        .map(|g| match g {
            Generator::Numeric(q) => {
                let mut v = vec![Rat::zero(); dim];
                v[0] = q.clone();
                v
            }
            Generator::Symbolic(s) => symbol_value(sym_index[s.as_str()]),
        })
        .collect();
    Ok(Model { free_symbols: free_cols.iter().map(|&c| symbols[c].clone()).collect(), values })
}

/// Converts small integer exponents.
pub fn exps_from_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn exps_to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn z() -> ValueLattice {
        ValueLattice::integers()
    }

    fn num(vals: &[(i64, i64)]) -> BipotentPresentation {
        BipotentPresentation::numeric(z(), vals.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    fn sym(name: &str) -> Generator {
        Generator::Symbolic(name.into())
    }

    fn e(v: &[i64]) -> Vec<BigInt> {
        exps_from_i64(v)
    }

    // Test-only oracle: all k in the box |kᵢ| <= b with Σ kᵢqᵢ ∈ Z.
    fn box_relations(vals: &[Rat], b: i64) -> Vec<Vec<i64>> {
        let n = vals.len();
        let mut out = Vec::new();
        let mut k = vec![-b; n];
        loop {
            let s: Rat = k.iter().zip(vals).map(|(&ki, q)| rat_int(ki) * q).sum();
            if s.is_integer() && k.iter().any(|&x| x != 0) {
                out.push(k.clone());
            }
            let mut i = 0;
            while i < n && k[i] == b {
                k[i] = -b;
                i += 1;
            }
            if i == n {
                return out;
            }
            k[i] += 1;
        }
    }

    #[test]
    fn lattice_examples() {
        let p = num(&[(1, 2), (1, 3)]);
        assert_eq!(p.exponent_lattice().rows(), vec![e(&[2, 0]), e(&[0, 3])]);
        // the Hermite basis spans exactly the box oracle's relations
        let lat = p.exponent_lattice();
        for k in box_relations(&[rat(1, 2), rat(1, 3)], 6) {
            assert!(lat.contains(&e(&k)));
        }
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        assert!(g.exponent_lattice().is_trivial());
        let mixed = BipotentPresentation::new(z(), vec![Generator::Numeric(rat(1, 2)), sym("g")], vec![]).unwrap();
        assert_eq!(mixed.exponent_lattice().rows(), vec![e(&[2, 0])]);
    }

    #[test]
    fn declared_relations() {
        // 2g = 1 makes g behave like 1/2
        let p = BipotentPresentation::new(z(), vec![sym("g")], vec![Relation { exps: vec![2], beta: rat_int(1) }]).unwrap();
        assert_eq!(p.torsion_degree(&e(&[1])).unwrap(), Degree::finite(2));
        assert_eq!(p.generator_value(0).to_string(), "1/2");
        let bad = BipotentPresentation::new(
            z(),
            vec![Generator::Numeric(rat(1, 2))],
            vec![Relation { exps: vec![2], beta: rat_int(3) }],
        );
        assert!(matches!(bad, Err(BipotentError::InconsistentRelations { .. })));
        let outside = BipotentPresentation::new(z(), vec![sym("g")], vec![Relation { exps: vec![1], beta: rat(1, 2) }]);
        assert!(matches!(outside, Err(BipotentError::InconsistentRelations { .. })));
        // g + h = 0: h = -g, one free symbol remains
        let p = BipotentPresentation::new(z(), vec![sym("g"), sym("h")], vec![Relation { exps: vec![1, 1], beta: rat_int(0) }]).unwrap();
        let d = p.decompose();
        assert_eq!(d.free_rank(), 1);
        assert!(d.torsion.is_empty());
        assert_eq!(p.generator_value(0).to_string(), "-h");
    }

    #[test]
    fn decomposition_examples() {
        let d = num(&[(1, 2), (1, 3)]).decompose();
        assert_eq!(d.free_rank(), 0);
        assert_eq!(d.torsion_orders(), vec![BigInt::from(6)]);
        assert_eq!(d.rank, Degree::finite(6));
        let rep = &d.torsion[0].representative;
        assert!((rep * rat_int(6)).is_integer());
        assert!((1..6).all(|k| !(rep * rat_int(k)).is_integer()));

        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap().decompose();
        assert_eq!((g.free_rank(), g.torsion.len(), g.rank.clone()), (1, 0, Degree::Infinite));

        let mixed = BipotentPresentation::new(z(), vec![Generator::Numeric(rat(1, 2)), sym("g")], vec![]).unwrap();
        let d = mixed.decompose();
        assert_eq!(d.free_rank(), 1);
        assert_eq!(d.torsion_orders(), vec![BigInt::from(2)]);
    }

    #[test]
    fn dependence_examples() {
        assert!(num(&[(1, 2), (1, 3)]).is_divisibly_dependent(&[0, 1]).unwrap());
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        assert!(!g.is_divisibly_dependent(&[0]).unwrap());
        assert!(num(&[(1, 2), (1, 4)]).is_divisibly_dependent(&[0, 1]).unwrap());

        let w = num(&[(1, 2)]).divisible_dependence_witness(&e(&[1]), &[]).unwrap().unwrap();
        assert_eq!((w.k, w.beta), (BigInt::from(2), rat_int(1)));
        assert_eq!(g.divisible_dependence_witness(&e(&[1]), &[]).unwrap(), None);

        let p = num(&[(1, 2), (1, 6)]);
        let w = p.divisible_dependence_witness(&e(&[0, 1]), &[0]).unwrap().unwrap();
        assert_eq!(w.k, BigInt::from(3));
        // 3·(1/6) = exps·(1/2) + beta
        assert_eq!(rat(1, 2), rat(1, 2) * Rat::from_integer(w.exps[0].clone()) + &w.beta);
        assert!(w.beta.is_integer());
    }

    #[test]
    fn degrees_and_ranks() {
        assert_eq!(num(&[(1, 2)]).torsion_degree(&e(&[1])).unwrap(), Degree::finite(2));
        assert_eq!(num(&[(2, 1)]).torsion_degree(&e(&[1])).unwrap(), Degree::finite(1));
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        assert_eq!(g.torsion_degree(&e(&[1])).unwrap(), Degree::Infinite);

        let sixth = num(&[(1, 6)]);
        assert_eq!(sixth.extension_rank(&[]).unwrap(), Degree::finite(6));
        let tower = num(&[(1, 2), (1, 6)]);
        assert_eq!(tower.extension_rank(&[0]).unwrap(), Degree::finite(3));
        assert_eq!(num(&[(1, 2)]).extension_rank(&[]).unwrap(), Degree::finite(2));
        assert_eq!(tower.extension_rank_over(&num(&[(1, 2)])).unwrap(), Degree::finite(3));
        assert_eq!(g.extension_rank(&[]).unwrap(), Degree::Infinite);
        assert!(matches!(tower.extension_rank_over(&num(&[(1, 5)])), Err(BipotentError::NotASubPresentation { .. })));
    }

    #[test]
    fn semifield_and_torsion_subdomain() {
        assert!(num(&[(1, 2), (1, 3)]).is_bipotent_semifield());
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        assert!(!g.is_bipotent_semifield());
        let mixed = BipotentPresentation::new(z(), vec![Generator::Numeric(rat(1, 2)), sym("g")], vec![]).unwrap();
        assert!(!mixed.is_bipotent_semifield());
        assert!(!mixed.torsion_subdomain_contains(&e(&[0, 1])).unwrap());
        let p = num(&[(1, 2), (1, 3)]);
        assert!(p.torsion_subdomain_contains(&e(&[1, 1])).unwrap());
        assert_eq!(p.monomial_value(&e(&[1, 1])).unwrap().to_string(), "5/6");
        assert_eq!(p.torsion_degree(&e(&[1, 1])).unwrap(), Degree::finite(6));
    }

    #[test]
    fn pairs_and_group_membership() {
        let p = num(&[(1, 2), (3, 2), (1, 3)]);
        assert!(p.linearly_dependent_pair(&e(&[1, 0, 0]), &e(&[0, 1, 0])).unwrap());
        assert!(!p.linearly_dependent_pair(&e(&[1, 0, 0]), &e(&[0, 0, 1])).unwrap());
        assert!(p.linearly_dependent_pair(&e(&[1, 0, 0]), &e(&[1, 0, 0])).unwrap());
        let half = num(&[(1, 2)]);
        let q = |c: Rat| ValueExpr { constant: c, symbols: vec![] };
        assert!(half.value_group_contains(&q(rat(3, 2))));
        assert!(!half.value_group_contains(&q(rat(1, 3))));
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        assert!(g.value_group_contains(&ValueExpr { constant: rat_int(2), symbols: vec![("g".into(), rat_int(-3))] }));
        assert!(!g.value_group_contains(&ValueExpr { constant: rat_int(0), symbols: vec![("h".into(), rat_int(1))] }));
    }

    #[test]
    fn inverse_of_free_generator_not_in_monoid() {
        let g = BipotentPresentation::new(z(), vec![sym("g")], vec![]).unwrap();
        for k in 1..=20 {
            assert!(!g.contains_monomial(&e(&[-k]), ExponentDomain::Natural, 8).unwrap());
            assert!(g.contains_monomial(&e(&[-k]), ExponentDomain::Integer, 8).unwrap());
        }
        // a torsion inverse is reachable: -1/2 = 1/2 - 1
        assert!(num(&[(1, 2)]).contains_monomial(&e(&[-1]), ExponentDomain::Natural, 8).unwrap());
    }

    #[test]
    fn empty_presentation_is_the_base() {
        let p = BipotentPresentation::trivial(z());
        let d = p.decompose();
        assert_eq!(d.rank, Degree::finite(1));
        assert!(p.is_bipotent_semifield());
    }

    fn arb_presentation() -> impl Strategy<Value = BipotentPresentation> {
        proptest::collection::vec(prop_oneof![(-8i64..9, 1i64..9).prop_map(|(a, b)| Some(rat(a, b))), Just(None)], 1..5)
            .prop_map(|gens| {
                let generators = gens
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| match g {
                        Some(q) => Generator::Numeric(q),
                        None => Generator::Symbolic(format!("g{i}")),
                    })
                    .collect();
                BipotentPresentation::new(ValueLattice::integers(), generators, vec![]).unwrap()
            })
    }

    proptest! {
        #[test]
        fn regeneration_holds(p in arb_presentation()) {
            let d = p.decompose();
            for (i, r) in d.regeneration.iter().enumerate() {
                prop_assert!(p.base().contains(&r.beta));
                let mut exps = vec![BigInt::zero(); p.len()];
                for (c, m) in r.free.iter().zip(&d.free) {
                    for (x, y) in exps.iter_mut().zip(&m.exps) { *x += c * y; }
                }
                for (c, t) in r.torsion.iter().zip(&d.torsion) {
                    for (x, y) in exps.iter_mut().zip(&t.monomial.exps) { *x += c * y; }
                }
                let rebuilt = p.monomial_value(&exps).unwrap();
                let own = p.generator_value(i);
                prop_assert_eq!(&rebuilt.symbols, &own.symbols);
                prop_assert_eq!(rebuilt.constant + &r.beta, own.constant);
            }
        }

        #[test]
        fn torsion_degree_divides_annihilators(p in arb_presentation(), i in 0usize..4, k in 1i64..25) {
            prop_assume!(i < p.len());
            let mut b = vec![BigInt::zero(); p.len()];
            b[i] = BigInt::one();
            if let Degree::Finite(t) = p.torsion_degree(&b).unwrap() {
                let kb: Vec<BigInt> = b.iter().map(|x| x * k).collect();
                if p.exponent_lattice().contains(&kb) {
                    prop_assert!((BigInt::from(k) % t).is_zero());
                }
            }
        }

        #[test]
        fn set_dependence_iff_some_witness(p in arb_presentation()) {
            let all: Vec<usize> = (0..p.len()).collect();
            let dependent = p.is_divisibly_dependent(&all).unwrap();
            let some = (0..p.len()).any(|j| {
                let rest: Vec<usize> = all.iter().copied().filter(|&i| i != j).collect();
                let mut b = vec![BigInt::zero(); p.len()];
                b[j] = BigInt::one();
                p.divisible_dependence_witness(&b, &rest).unwrap().is_some()
            });
            prop_assert_eq!(dependent, some);
        }
    }
}
