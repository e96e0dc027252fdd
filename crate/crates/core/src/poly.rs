//! Univariate polynomials with exact coefficients.
//!
//! [`SignedPoly`] is the ring `Q[x]` (the difference ring of `Q>0[x]`);
//! [`PosPoly`] is the semiring `Q>0[x]` of non-zero polynomials whose
//! non-zero coefficients are all positive.
//!
//! Text format: terms `c*x^k` joined by `+`/`-`, e.g. `x^3 - 3*x + 1` or
//! `1/2*x^2 + 2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::One;

use crate::scalar::{fmt_rat, parse_rat, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial has a non-positive coefficient")]
    NotPositive,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
}

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> SignedPoly<S> {
    pub fn zero() -> Self {
        SignedPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn x() -> Self {
        Self::monomial(S::one(), 1)
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: S, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); deg + 1];
        coeffs[deg] = c;
        SignedPoly { coeffs }
    }

    /// From ascending coefficients; trailing zeros are dropped.
    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SignedPoly { coeffs }
    }

    /// From `(degree, coefficient)` pairs; repeated degrees are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut coeffs: Vec<S> = Vec::new();
        for (d, c) in terms {
            if coeffs.len() <= d {
                coeffs.resize(d + 1, S::zero());
            }
            coeffs[d] = coeffs[d].clone() + c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Non-zero terms as `(degree, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&(S::one() / lc.clone())),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn has_positive_coeff(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_positive())
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_negative())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&d| d >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![S::zero(); top - dd + 1];
        for k in (0..=top - dd).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = S::one() / lc;
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// `self / gcd(self, self')`: same roots, each simple.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn to_rat(&self) -> SignedPoly<Rat> {
        SignedPoly::from_coeffs(self.coeffs.iter().map(|c| c.to_rat()).collect())
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        let mut next = self.derivative();
        while !next.is_zero() {
            let r = seq.last().unwrap().rem(&next);
            seq.push(next);
            next = -r;
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots_between(&self, lo: &S, hi: &S) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        let at = |x: &S| variations(seq.iter().map(|p| p.eval(x).signum()));
        at(lo).saturating_sub(at(hi))
    }

    /// Number of distinct real roots in `(0, ∞)`.
    pub fn count_positive_roots(&self) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        let at_zero = variations(seq.iter().map(|p| p.coeff(0).signum()));
        let at_inf = variations(seq.iter().map(|p| sign_at_infinity(p, false)));
        at_zero.saturating_sub(at_inf)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        let lo = variations(seq.iter().map(|p| sign_at_infinity(p, true)));
        let hi = variations(seq.iter().map(|p| sign_at_infinity(p, false)));
        lo.saturating_sub(hi)
    }
}

fn sign_at_infinity<S: Scalar>(p: &SignedPoly<S>, negative: bool) -> S {
    match p.leading() {
        None => S::zero(),
        Some(lc) => {
            let s = lc.signum();
            if negative && p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations<S: Scalar>(signs: impl Iterator<Item = S>) -> usize {
    let mut count = 0;
    let mut last: Option<S> = None;
    for s in signs.filter(|s| !s.is_zero()) {
        if let Some(prev) = &last {
            if *prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

impl<S: Scalar> Add for &SignedPoly<S> {
    type Output = SignedPoly<S>;
    fn add(self, rhs: Self) -> SignedPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SignedPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for &SignedPoly<S> {
    type Output = SignedPoly<S>;
    fn sub(self, rhs: Self) -> SignedPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SignedPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Mul for &SignedPoly<S> {
    type Output = SignedPoly<S>;
    fn mul(self, rhs: Self) -> SignedPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return SignedPoly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        SignedPoly::from_coeffs(out)
    }
}

impl<S: Scalar> Neg for SignedPoly<S> {
    type Output = SignedPoly<S>;
    fn neg(self) -> SignedPoly<S> {
        SignedPoly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> fmt::Display for SignedPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                d => format!("x^{d}"),
            };
            if deg == 0 {
                f.write_str(&fmt_rat(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{}", fmt_rat(&mag), var)?;
            }
        }
        Ok(())
    }
}

impl FromStr for SignedPoly<Rat> {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let fail = |reason: &str| PolyError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        // split into signed terms, keeping the sign with each term
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let binary = (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('*'));
            if binary {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        terms.push(cur);
        let mut parsed = Vec::new();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rat::one(), rest),
                None => (Rat::one(), term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(fail("dangling sign"));
            }
            let (coeff, power) = match body.find('x') {
                None => (parse_rat(body).map_err(|e| fail(&e.to_string()))?, 0usize),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let coeff = if c.is_empty() {
                        Rat::one()
                    } else {
                        parse_rat(c).map_err(|e| fail(&e.to_string()))?
                    };
                    let rest = &body[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| fail("bad exponent"))?
                    };
                    (coeff, power)
                }
            };
            parsed.push((power, sign * coeff));
        }
        Ok(SignedPoly::from_terms(parsed))
    }
}

/// A non-zero polynomial whose non-zero coefficients are all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosPoly<S>(SignedPoly<S>);

impl<S: Scalar> PosPoly<S> {
    pub fn new(p: SignedPoly<S>) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if p.has_negative_coeff() {
            return Err(PolyError::NotPositive);
        }
        Ok(PosPoly(p))
    }

    pub fn one() -> Self {
        PosPoly(SignedPoly::one())
    }

    pub fn constant(c: S) -> Result<Self, PolyError> {
        Self::new(SignedPoly::constant(c))
    }

    pub fn monomial(c: S, deg: usize) -> Result<Self, PolyError> {
        Self::new(SignedPoly::monomial(c, deg))
    }

    pub fn as_signed(&self) -> &SignedPoly<S> {
        &self.0
    }

    pub fn into_signed(self) -> SignedPoly<S> {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().expect("positive polynomials are non-zero")
    }

    pub fn eval(&self, x: &S) -> S {
        self.0.eval(x)
    }

    pub fn pow(&self, n: u32) -> Self {
        PosPoly(self.0.pow(n))
    }
}

impl<S: Scalar> Add for &PosPoly<S> {
    type Output = PosPoly<S>;
    fn add(self, rhs: Self) -> PosPoly<S> {
        PosPoly(&self.0 + &rhs.0)
    }
}

impl<S: Scalar> Mul for &PosPoly<S> {
    type Output = PosPoly<S>;
    fn mul(self, rhs: Self) -> PosPoly<S> {
        PosPoly(&self.0 * &rhs.0)
    }
}

impl<S: Scalar> fmt::Display for PosPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for PosPoly<Rat> {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        PosPoly::new(s.parse()?)
    }
}

/// Compares a polynomial's value at `x` with zero.
pub fn sign_at<S: Scalar>(p: &SignedPoly<S>, x: &S) -> Ordering {
    p.eval(x).cmp(&S::zero())
}
