//! Irreducibility over Q for small-degree polynomials.
//!
//! Pipeline: content removal, squarefree check, rational root test, a
//! factor-degree sieve from distinct-degree factorization modulo small
//! primes, and finally Kronecker's interpolation search for any degree the
//! sieve could not exclude. Comfortable up to degree 8 with modest
//! coefficients.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::SignedPoly;
use crate::scalar::{common_denominator, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("factor search for {poly} needs evaluation points beyond the supported range")]
    OutsideEnvelope { poly: String },
}

/// Returns a proper factor of `p` over Q (degree between 1 and deg p − 1), or
/// `None` when `p` is irreducible. Constants and zero have no factor and are
/// reported as `None`; callers decide how to treat them.
pub fn proper_factor<S: Scalar>(p: &SignedPoly<S>) -> Result<Option<SignedPoly<Rat>>, FactorError> {
    let f = p.to_rat();
    let Some(n) = f.degree() else { return Ok(None) };
    if n <= 1 {
        return Ok(None);
    }
    if f.coeff(0).is_zero() {
        return Ok(Some(SignedPoly::x()));
    }
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Ok(Some(g));
    }
    let ints = primitive_integer_coeffs(&f);
    if let Some(root) = rational_root(&ints) {
        return Ok(Some(SignedPoly::from_coeffs(vec![-root, Rat::one()])));
    }
    if n <= 3 {
        return Ok(None);
    }
    let candidates = sieve_factor_degrees(&ints);
    for d in candidates {
        if let Some(factor) = kronecker_factor(&f, &ints, d)? {
            return Ok(Some(factor));
        }
    }
    Ok(None)
}

/// Irreducible over Q: degree ≥ 1 and no proper factor.
pub fn is_irreducible<S: Scalar>(p: &SignedPoly<S>) -> Result<bool, FactorError> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    Ok(proper_factor(p)?.is_none())
}

fn primitive_integer_coeffs(f: &SignedPoly<Rat>) -> Vec<BigInt> {
    let den = common_denominator(f.coeffs());
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * Ratio::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 100_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

fn eval_int(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn rational_root(f: &[BigInt]) -> Option<Rat> {
    let a0 = f.first()?;
    let an = f.last()?;
    let (ps, qs) = (divisors(a0)?, divisors(an)?);
    for q in &qs {
        for p in &ps {
            for cand in [Ratio::new(p.clone(), q.clone()), Ratio::new(-p.clone(), q.clone())] {
                let v = f
                    .iter()
                    .rev()
                    .fold(Rat::zero(), |acc, c| acc * &cand + Ratio::from_integer(c.clone()));
                if v.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

const SIEVE_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Degrees `d` with `2 <= d <= n/2` that a factor over Q could have.
fn sieve_factor_degrees(f: &[BigInt]) -> Vec<usize> {
    let n = f.len() - 1;
    let mut possible: BTreeSet<usize> = (1..n).collect();
    for &p in &SIEVE_PRIMES {
        let pb = BigInt::from(p);
        if (f[n].clone() % &pb).is_zero() {
            continue;
        }
        let fp: Vec<u64> = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let fp = modp::monic(&fp, p);
        if modp::degree(&modp::gcd(&fp, &modp::derivative(&fp, p), p)) != Some(0) {
            continue;
        }
        let degs = modp::factor_degrees(&fp, p);
        let mut sums: BTreeSet<usize> = BTreeSet::from([0]);
        for d in degs {
            let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(next);
        }
        possible.retain(|d| sums.contains(d));
        if possible.is_empty() {
            break;
        }
    }
    possible.into_iter().filter(|&d| d >= 2 && 2 * d <= n).collect()
}

/// Searches for an integer factor of degree `d` by interpolating through
/// divisors of `f` at `d + 1` integer points.
fn kronecker_factor(
    f: &SignedPoly<Rat>,
    ints: &[BigInt],
    d: usize,
) -> Result<Option<SignedPoly<Rat>>, FactorError> {
    let mut points: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for k in 0..120i64 {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let v = eval_int(ints, &x);
        if let Some(ds) = divisors(&v) {
            points.push((x, ds));
        }
    }
    if points.len() < d + 1 {
        return Err(FactorError::OutsideEnvelope { poly: f.to_string() });
    }
    points.sort_by_key(|(_, ds)| ds.len());
    points.truncate(d + 1);
    let xs: Vec<Rat> = points.iter().map(|(x, _)| Ratio::from_integer(x.clone())).collect();
    // first point takes positive divisors only (a factor's sign is free)
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, ds))| {
            if i == 0 {
                ds.clone()
            } else {
                ds.iter().flat_map(|v| [v.clone(), -v.clone()]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<Rat> = idx
            .iter()
            .zip(&choices)
            .map(|(&i, c)| Ratio::from_integer(c[i].clone()))
            .collect();
        let g = interpolate(&xs, &ys);
        let deg = g.degree().unwrap_or(0);
        if deg >= 1 && deg < f.degree().unwrap() && g.coeffs().iter().all(|c| c.is_integer()) && g.divides(f) {
            return Ok(Some(g));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> SignedPoly<Rat> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = SignedPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = SignedPoly::from_coeffs(vec![-xs[i].clone(), Rat::one()]);
        out = &(&out * &lin) + &SignedPoly::constant(coef[i].clone());
    }
    out
}

/// Dense polynomial arithmetic over GF(p), ascending coefficients.
mod modp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut result = 1u64;
        let (mut base, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }

    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        let a = trim(a.to_vec());
        match a.last() {
            None => a,
            Some(&lc) => {
                let i = inv(lc, p);
                a.iter().map(|c| c * i % p).collect()
            }
        }
    }

    pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` must be non-zero.
    fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let li = inv(b[db], p);
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r[r.len() - 1] * li % p;
            q[shift] = c;
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = div_rem(&a, &b, p).1;
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = div_rem(base, m, p).1;
        while e > 0 {
            if e & 1 == 1 {
                result = div_rem(&mul(&result, &b, p), m, p).1;
            }
            b = div_rem(&mul(&b, &b, p), m, p).1;
            e >>= 1;
        }
        result
    }

    /// Degrees of the irreducible factors of a monic squarefree `f`.
    pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
        let mut f = f.to_vec();
        let mut out = Vec::new();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 1;
        while degree(&f).is_some_and(|n| n >= 2 * d) {
            h = pow_mod(&h, p, &f, p);
            let g = gcd(&f, &sub(&h, &x, p), p);
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 {
                out.extend(std::iter::repeat(d).take(dg / d));
                f = div_rem(&f, &g, p).0;
                h = div_rem(&h, &f, p).1;
            }
            d += 1;
        }
        if let Some(n) = degree(&f).filter(|&n| n > 0) {
            out.push(n);
        }
        out
    }
}
