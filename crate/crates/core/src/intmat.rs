//! Integer matrices: Hermite row form, left kernels, and Smith normal form.
//!
//! Generic over any signed Euclidean integer type; the lattice code uses
//! [`num_bigint::BigInt`].

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

/// Bound for the integer types the matrix code works over.
pub trait IntScalar: Clone + fmt::Debug + Integer + Signed {}
impl<T: Clone + fmt::Debug + Integer + Signed> IntScalar for T {}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<T>>,
}

impl<T: IntScalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![T::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.iter().map(|r| r.as_slice())
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self.data[i][k].clone() * other.data[k][j].clone();
                    out.data[i][j] = out.data[i][j].clone() + t;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .zip(&self.data)
                    .fold(T::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone())
            })
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.data[i][j].is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = self.data[src][j].clone() * q.clone();
            self.data[dst][j] = self.data[dst][j].clone() + t;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.data {
            let t = row[src].clone() * q.clone();
            row[dst] = row[dst].clone() + t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -x.clone();
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// Result of [`hermite_rows`]: `transform · input = form`.
#[derive(Debug, Clone)]
pub struct HermiteForm<T> {
    pub form: IntMatrix<T>,
    pub transform: IntMatrix<T>,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form with a unimodular transform.
///
/// Pivots are positive and entries above each pivot are reduced into
/// `[0, pivot)`. The zero rows sit at the bottom.
pub fn hermite_rows<T: IntScalar>(m: &IntMatrix<T>) -> HermiteForm<T> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    let mut pivots = Vec::new();
    for j in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            // smallest non-zero entry in column j at or below row r
            let best = (r..m.rows)
                .filter(|&i| !h.data[i][j].is_zero())
                .min_by(|&a, &b| h.data[a][j].abs().cmp(&h.data[b][j].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h.data[i][j].is_zero() {
                    continue;
                }
                let q = h.data[i][j].div_floor(&h.data[r][j]);
                h.add_row(i, r, &-q.clone());
                u.add_row(i, r, &-q);
                if !h.data[i][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.data[r][j].is_zero() {
            continue;
        }
        if h.data[r][j].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.data[i][j].div_floor(&h.data[r][j]);
            h.add_row(i, r, &-q.clone());
            u.add_row(i, r, &-q);
        }
        pivots.push(j);
        r += 1;
    }
    HermiteForm {
        form: h,
        transform: u,
        rank: r,
        pivots,
    }
}

/// A basis of `{x : x · m = 0}` (integer left kernel).
pub fn left_kernel<T: IntScalar>(m: &IntMatrix<T>) -> Vec<Vec<T>> {
    let hf = hermite_rows(m);
    (hf.rank..m.rows)
        .map(|i| hf.transform.row(i).to_vec())
        .collect()
}

/// Hermite-reduced basis of the row lattice spanned by `rows`.
pub fn lattice_basis<T: IntScalar>(cols: usize, rows: Vec<Vec<T>>) -> IntMatrix<T> {
    let hf = hermite_rows(&IntMatrix::from_rows(cols, rows));
    let basis = hf.form.data[..hf.rank].to_vec();
    IntMatrix::from_rows(cols, basis)
}

/// Membership of `v` in the row lattice of a Hermite-reduced basis.
pub fn hermite_contains<T: IntScalar>(basis: &IntMatrix<T>, v: &[T]) -> bool {
    let mut w = v.to_vec();
    for row in basis.rows() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        // entries left of the pivot must already be cleared
        if w[..p].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = w[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        for (wj, rj) in w.iter_mut().zip(row) {
            *wj = wj.clone() - q.clone() * rj.clone();
        }
    }
    w.iter().all(|x| x.is_zero())
}

/// `u · input · v = diag(d_1, d_2, ...)` with `d_1 | d_2 | ...`, all `d_i ≥ 0`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition<T> {
    pub u: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
    pub diagonal: IntMatrix<T>,
}

impl<T: IntScalar> SmithDecomposition<T> {
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// The non-zero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.diagonal.rows.min(self.diagonal.cols);
        (0..n)
            .map(|i| self.diagonal.data[i][i].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    /// Rank of the quotient `Z^cols / rowspan`.
    pub fn free_rank(&self) -> usize {
        self.diagonal.cols - self.rank()
    }

    /// Invariant factors greater than one.
    pub fn torsion_invariants(&self) -> Vec<T> {
        self.invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

/// Smith normal form with deterministic pivoting.
///
/// The pivot at step `k` is the entry of least absolute value in the
/// remaining block, scanning columns left to right and rows top to bottom.
pub fn smith_normal_form<T: IntScalar>(r: &IntMatrix<T>) -> SmithDecomposition<T> {
    let (m, n) = (r.rows, r.cols);
    let mut d = r.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for j in k..n {
                for i in k..m {
                    if d.data[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d.data[i][j].abs() < d.data[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v, v_inv);
            };
            if pi != k {
                d.swap_rows(k, pi);
                u.swap_rows(k, pi);
            }
            if pj != k {
                d.swap_cols(k, pj);
                v.swap_cols(k, pj);
                v_inv.swap_rows(k, pj);
            }
            let mut dirty = false;
            for i in k + 1..m {
                if d.data[i][k].is_zero() {
                    continue;
                }
                let q = d.data[i][k].div_floor(&d.data[k][k]);
                d.add_row(i, k, &-q.clone());
                u.add_row(i, k, &-q);
                dirty |= !d.data[i][k].is_zero();
            }
            for j in k + 1..n {
                if d.data[k][j].is_zero() {
                    continue;
                }
                let q = d.data[k][j].div_floor(&d.data[k][k]);
                d.add_col(j, k, &-q.clone());
                v.add_col(j, k, &-q.clone());
                v_inv.add_row(k, j, &q);
                dirty |= !d.data[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !d.data[i][j].is_multiple_of(&d.data[k][k]))
            });
            match offender {
                Some(i) => {
                    d.add_row(k, i, &T::one());
                    u.add_row(k, i, &T::one());
                }
                None => break,
            }
        }
        if d.data[k][k].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(d, u, v, v_inv)
}

fn finish<T: IntScalar>(
    d: IntMatrix<T>,
    u: IntMatrix<T>,
    v: IntMatrix<T>,
    v_inv: IntMatrix<T>,
) -> SmithDecomposition<T> {
    SmithDecomposition {
        u,
        v,
        v_inv,
        diagonal: d,
    }
}
