//! Simple extensions of the cancellative semifield `Q>0`.
//!
//! An [`AlgebraicGenerator`] is a monic irreducible `m` together with an
//! interval isolating one positive real root `θ`. Elements of the extension
//! are [`ExtElem`]s, coefficient vectors in the basis `1, θ, ..., θ^(n-1)`
//! with arithmetic in `Q[x]/(m)`. The transcendental case is covered by
//! [`PosRationalFunction`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::irreducible::{proper_factor, FactorError};
use crate::poly::{PosPoly, SignedPoly};
use crate::scalar::{fmt_rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CancellativeError {
    #[error("polynomial has no sign change")]
    NoSignChange,
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("degree {degree} generator adds nothing to the base")]
    TrivialGenerator { degree: usize },
    #[error("polynomial is reducible (factor {factor})")]
    Reducible { factor: String },
    #[error("polynomial has no positive real root")]
    NoPositiveRoot,
    #[error("all coefficients are positive, so no positive root exists")]
    AllPositiveCoefficients,
    #[error("interval does not isolate exactly one positive root")]
    IntervalNotIsolating,
    #[error("elements belong to different generators")]
    GeneratorMismatch,
    #[error("zero has no inverse")]
    ZeroElement,
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Splits `m` into `(m₊, m₋)` with `m = m₊ − m₋`, both positive, disjoint
/// supports.
pub fn diff_split<S: Scalar>(m: &SignedPoly<S>) -> Result<(PosPoly<S>, PosPoly<S>), CancellativeError> {
    if !(m.has_positive_coeff() && m.has_negative_coeff()) {
        return Err(CancellativeError::NoSignChange);
    }
    let plus = SignedPoly::from_terms(m.terms().filter(|(_, c)| c.is_positive()).map(|(d, c)| (d, c.clone())));
    let minus = SignedPoly::from_terms(m.terms().filter(|(_, c)| c.is_negative()).map(|(d, c)| (d, -c.clone())));
    Ok((
        PosPoly::new(plus).expect("non-empty positive part"),
        PosPoly::new(minus).expect("non-empty negative part"),
    ))
}

/// A positive real algebraic number of degree ≥ 2 over Q.
#[derive(Debug, Clone)]
pub struct AlgebraicGenerator<S> {
    m: SignedPoly<S>,
    lo: S,
    hi: S,
}

impl<S: Scalar> AlgebraicGenerator<S> {
    pub fn new(m: SignedPoly<S>, lo: S, hi: S) -> Result<Self, CancellativeError> {
        if !m.is_monic() {
            return Err(CancellativeError::NotMonic);
        }
        let degree = m.degree().unwrap();
        if degree <= 1 {
            return Err(CancellativeError::TrivialGenerator { degree });
        }
        if let Some(factor) = proper_factor(&m)? {
            return Err(CancellativeError::Reducible { factor: factor.to_string() });
        }
        if m.count_positive_roots() == 0 {
            if !m.has_negative_coeff() && m.count_real_roots() > 0 {
                return Err(CancellativeError::AllPositiveCoefficients);
            }
            return Err(CancellativeError::NoPositiveRoot);
        }
        let isolating = lo.is_positive()
            && lo < hi
            && m.eval(&lo).signum() * m.eval(&hi).signum() == -S::one()
            && m.count_roots_between(&lo, &hi) == 1;
        if !isolating {
            return Err(CancellativeError::IntervalNotIsolating);
        }
        Ok(AlgebraicGenerator { m, lo, hi })
    }

    pub fn minimal_poly(&self) -> &SignedPoly<S> {
        &self.m
    }

    pub fn interval(&self) -> (&S, &S) {
        (&self.lo, &self.hi)
    }

    pub fn dimension(&self) -> usize {
        self.m.degree().unwrap()
    }

    /// Bisects the isolating interval until it is narrower than `width`.
    pub fn refine(&self, width: &S) -> (S, S) {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let sign_lo = self.m.eval(&lo).signum();
        let two = S::from_int(2);
        while hi.clone() - lo.clone() >= *width {
            let mid = (lo.clone() + hi.clone()) / two.clone();
            if self.m.eval(&mid).signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

/// Same polynomial and the two intervals isolate the same root.
impl<S: Scalar> PartialEq for AlgebraicGenerator<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        lo < hi && self.m.count_roots_between(lo, hi) == 1 && !self.m.eval(lo).is_zero()
    }
}

impl<S: Scalar> Eq for AlgebraicGenerator<S> {}

impl<S: Scalar> fmt::Display for AlgebraicGenerator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in ({}, {})", self.m, fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

/// An element `c₀ + c₁θ + ... + c_{n−1}θ^(n−1)` of `Q(θ)`.
#[derive(Debug, Clone)]
pub struct ExtElem<S> {
    gen: Arc<AlgebraicGenerator<S>>,
    coeffs: Vec<S>,
}

impl<S: Scalar> ExtElem<S> {
    /// Reduces `p` modulo the minimal polynomial.
    pub fn from_poly(gen: &Arc<AlgebraicGenerator<S>>, p: &SignedPoly<S>) -> Self {
        let r = p.rem(&gen.m);
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(gen.dimension(), S::zero());
        ExtElem { gen: Arc::clone(gen), coeffs }
    }

    pub fn new(gen: &Arc<AlgebraicGenerator<S>>, coeffs: Vec<S>) -> Self {
        Self::from_poly(gen, &SignedPoly::from_coeffs(coeffs))
    }

    pub fn from_scalar(gen: &Arc<AlgebraicGenerator<S>>, c: S) -> Self {
        Self::new(gen, vec![c])
    }

    pub fn zero(gen: &Arc<AlgebraicGenerator<S>>) -> Self {
        Self::new(gen, Vec::new())
    }

    pub fn one(gen: &Arc<AlgebraicGenerator<S>>) -> Self {
        Self::from_scalar(gen, S::one())
    }

    /// The generator `θ` itself.
    pub fn root(gen: &Arc<AlgebraicGenerator<S>>) -> Self {
        Self::new(gen, vec![S::zero(), S::one()])
    }

    pub fn generator(&self) -> &Arc<AlgebraicGenerator<S>> {
        &self.gen
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn as_poly(&self) -> SignedPoly<S> {
        SignedPoly::from_coeffs(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<S> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// All coefficients non-negative and at least one positive.
    pub fn in_cone(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative()) && self.coeffs.iter().any(|c| c.is_positive())
    }

    fn same_generator(&self, other: &Self) -> Result<(), CancellativeError> {
        if Arc::ptr_eq(&self.gen, &other.gen) || *self.gen == *other.gen {
            Ok(())
        } else {
            Err(CancellativeError::GeneratorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CancellativeError> {
        self.same_generator(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(ExtElem { gen: Arc::clone(&self.gen), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CancellativeError> {
        self.same_generator(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(ExtElem { gen: Arc::clone(&self.gen), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CancellativeError> {
        self.same_generator(other)?;
        Ok(Self::from_poly(&self.gen, &(&self.as_poly() * &other.as_poly())))
    }

    pub fn scale(&self, c: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.clone() * c.clone()).collect();
        ExtElem { gen: Arc::clone(&self.gen), coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.gen);
        for _ in 0..n {
            acc = acc.mul(self).expect("same generator");
        }
        acc
    }

    /// Inverse via the extended gcd of the lift with `m`.
    pub fn inverse(&self) -> Result<Self, CancellativeError> {
        if self.is_zero() {
            return Err(CancellativeError::ZeroElement);
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.gen.m);
        debug_assert!(g.degree() == Some(0), "m is irreducible");
        Ok(Self::from_poly(&self.gen, &s))
    }

    /// Sign of the real number this element represents.
    pub fn sign_at_root(&self) -> Ordering {
        let p = self.as_poly();
        if p.is_zero() {
            return Ordering::Equal;
        }
        let (mut lo, mut hi) = (self.gen.lo.clone(), self.gen.hi.clone());
        let sign_lo = self.gen.m.eval(&lo).signum();
        let two = S::from_int(2);
        // p(θ) ≠ 0 since m is irreducible and deg p < deg m
        while p.count_roots_between(&lo, &hi) > 0 || p.eval(&lo).is_zero() {
            let mid = (lo.clone() + hi.clone()) / two.clone();
            if self.gen.m.eval(&mid).signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p.eval(&hi).cmp(&S::zero())
    }

    pub fn is_positive_real(&self) -> bool {
        self.sign_at_root() == Ordering::Greater
    }

    /// Coefficient cone test next to the numeric sign test. For binomial
    /// moduli the cone is closed under the operations; for other moduli the
    /// two can differ and both are reported.
    pub fn cone_report(&self) -> ConeReport {
        let in_cone = self.in_cone();
        let positive_at_root = self.is_positive_real();
        ConeReport { in_cone, positive_at_root, agree: in_cone == positive_at_root }
    }

    /// Closed interval containing the represented real number, obtained by
    /// interval evaluation over a root enclosure narrower than `width`.
    pub fn enclosure(&self, width: &S) -> (S, S) {
        let (lo, hi) = self.gen.refine(width);
        let mut acc = (S::zero(), S::zero());
        for c in self.coeffs.iter().rev() {
            let cands = [
                acc.0.clone() * lo.clone(),
                acc.0.clone() * hi.clone(),
                acc.1.clone() * lo.clone(),
                acc.1.clone() * hi.clone(),
            ];
            let min = cands.iter().min().unwrap().clone();
            let max = cands.iter().max().unwrap().clone();
            acc = (min + c.clone(), max + c.clone());
        }
        acc
    }

    /// Monic minimal polynomial of this element over Q, from the first linear
    /// dependence among its powers.
    pub fn minimal_poly(&self) -> SignedPoly<S> {
        let n = self.gen.dimension();
        // rows: coefficient vectors of e^k, augmented with the unit vector e_k
        let mut rows: Vec<(Vec<S>, Vec<S>)> = Vec::new();
        let mut power = Self::one(&self.gen);
        for k in 0..=n {
            let mut tag = vec![S::zero(); n + 1];
            tag[k] = S::one();
            let mut v = power.coeffs.clone();
            for (r, rt) in &rows {
                let pivot = r.iter().position(|c| !c.is_zero()).unwrap();
                if !v[pivot].is_zero() {
                    let f = v[pivot].clone() / r[pivot].clone();
                    for i in 0..n {
                        v[i] = v[i].clone() - f.clone() * r[i].clone();
                    }
                    for i in 0..=n {
                        tag[i] = tag[i].clone() - f.clone() * rt[i].clone();
                    }
                }
            }
            if v.iter().all(|c| c.is_zero()) {
                return SignedPoly::from_coeffs(tag).monic();
            }
            rows.push((v, tag));
            power = power.mul(self).expect("same generator");
        }
        unreachable!("n + 1 powers in an n-dimensional space are dependent")
    }

    /// The element as a generator in its own right. `None` when it is
    /// rational or not a positive real.
    pub fn to_generator(&self) -> Option<AlgebraicGenerator<S>> {
        if !self.is_positive_real() {
            return None;
        }
        let p = self.minimal_poly();
        if p.degree()? < 2 {
            return None;
        }
        let mut width = S::one();
        loop {
            let (lo, hi) = self.enclosure(&width);
            if let Ok(g) = AlgebraicGenerator::new(p.clone(), lo, hi) {
                return Some(g);
            }
            width = width / S::from_int(16);
        }
    }
}

impl<S: Scalar> PartialEq for ExtElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_generator(other).is_ok() && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Eq for ExtElem<S> {}

impl<S: Scalar> fmt::Display for ExtElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.as_poly().to_string().replace('x', "θ");
        f.write_str(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeReport {
    pub in_cone: bool,
    pub positive_at_root: bool,
    pub agree: bool,
}

/// Whether `a/b` lies in the kernel of `Q>0(x) → Q>0(θ)`, i.e. `m | a − b`.
pub fn kernel_contains<S: Scalar>(a: &PosPoly<S>, b: &PosPoly<S>, gen: &AlgebraicGenerator<S>) -> bool {
    gen.m.divides(&(a.as_signed() - b.as_signed()))
}

/// The kernel element `(m₊g₁ + m₋g₂ + h(g₁+g₂)) / (m₊g₂ + m₋g₁ + h(g₁+g₂))`.
/// An absent `g₂` or `h` drops the terms that contain it.
pub fn kernel_sample<S: Scalar>(
    g1: &PosPoly<S>,
    g2: Option<&PosPoly<S>>,
    h: Option<&PosPoly<S>>,
    gen: &AlgebraicGenerator<S>,
) -> Result<PosRationalFunction<S>, CancellativeError> {
    let (mp, mm) = diff_split(&gen.m)?;
    let mut num = &mp * g1;
    let mut den = &mm * g1;
    if let Some(g2) = g2 {
        num = &num + &(&mm * g2);
        den = &den + &(&mp * g2);
    }
    if let Some(h) = h {
        let shared = match g2 {
            Some(g2) => h * &(g1 + g2),
            None => h * g1,
        };
        num = &num + &shared;
        den = &den + &shared;
    }
    Ok(PosRationalFunction::new(num, den))
}

/// `num / den` in `Q>0(x)`; equality is by cross-multiplication.
#[derive(Debug, Clone)]
pub struct PosRationalFunction<S> {
    num: PosPoly<S>,
    den: PosPoly<S>,
}

impl<S: Scalar> PosRationalFunction<S> {
    pub fn new(num: PosPoly<S>, den: PosPoly<S>) -> Self {
        PosRationalFunction { num, den }
    }

    pub fn from_poly(p: PosPoly<S>) -> Self {
        PosRationalFunction { num: p, den: PosPoly::one() }
    }

    pub fn numerator(&self) -> &PosPoly<S> {
        &self.num
    }

    pub fn denominator(&self) -> &PosPoly<S> {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        PosRationalFunction { num, den: &self.den * &other.den }
    }

    pub fn mul(&self, other: &Self) -> Self {
        PosRationalFunction { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn inverse(&self) -> Self {
        PosRationalFunction { num: self.den.clone(), den: self.num.clone() }
    }

    /// Value at a positive point.
    pub fn eval(&self, x: &S) -> S {
        self.num.eval(x) / self.den.eval(x)
    }
}

/// `r1 = r2` iff `num₁·den₂ = num₂·den₁`.
pub fn ratfunc_eq<S: Scalar>(r1: &PosRationalFunction<S>, r2: &PosRationalFunction<S>) -> bool {
    &r1.num * &r2.den == &r2.num * &r1.den
}

impl<S: Scalar> PartialEq for PosRationalFunction<S> {
    fn eq(&self, other: &Self) -> bool {
        ratfunc_eq(self, other)
    }
}

impl<S: Scalar> fmt::Display for PosRationalFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
