//! Integer matrices, Hermite and Smith normal forms, rational solving and
//! lattice membership.
//!
//! Hermite convention used throughout: *row* style. For `H = U M`, the
//! nonzero rows of `H` come first, their leading entries (pivots) are
//! positive and sit in strictly increasing columns, and every entry above a
//! pivot lies in `[0, pivot)`. Zero rows are at the bottom. `U` is unimodular.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg;

pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

pub fn int_vec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVector {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + y * x)
}

/// Divides out the gcd of the entries. The zero vector is returned as is.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Dense row-major integer matrix. A matrix may have zero rows (an empty
/// relation lattice); every row has `cols` entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<IntVector>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| int_vec(r)).collect(), cols)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self[(i, j)].clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        (0..self.rows).map(|i| dot_int(self.row(i), v)).collect()
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> RatVector {
        (0..self.rows)
            .map(|i| dot_int_rat(self.row(i), v))
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Adjugate matrix: `adj(M) M = M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut adj = Self::zeros(n, n);
        if n == 1 {
            adj.set(0, 0, BigInt::one());
            return adj;
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let c = minor.det();
                let c = if (i + j) % 2 == 0 { c } else { -c };
                adj.set(j, i, c);
            }
        }
        adj
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self[(i, j)].clone())
                    .collect()
            })
            .collect();
        Self::from_rows(rows, self.cols - 1)
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let rows = (0..self.rows)
            .map(|i| cols.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect();
        Self::from_rows(rows, cols.len())
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        Self::from_rows(
            rows.iter().map(|&i| self.row(i).to_vec()).collect(),
            self.cols,
        )
    }

    pub fn to_rat_rows(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| to_rat_vec(self.row(i))).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = q * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

impl HnfResult {
    /// Pivot column of each nonzero row of `h`.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rank)
            .map(|i| {
                self.h
                    .row(i)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero HNF row")
            })
            .collect()
    }
}

/// Row Hermite normal form with transform, `U M = H`.
pub fn hnf(m: &IntMatrix) -> HnfResult {
    let rows = m.nrows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut p = 0;
    for col in 0..m.ncols() {
        if p == rows {
            break;
        }
        loop {
            // bring the smallest nonzero entry of the column to the pivot row
            let best = (p..rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by_key(|&i| h[(i, col)].abs());
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut cleared = true;
            for i in p + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(p, col)]);
                h.sub_row_multiple(i, p, &q);
                u.sub_row_multiple(i, p, &q);
                if !h[(i, col)].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if h[(p, col)].is_zero() {
            continue;
        }
        if h[(p, col)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h[(p, col)].clone();
        for i in 0..p {
            let q = h[(i, col)].div_floor(&pivot);
            h.sub_row_multiple(i, p, &q);
            u.sub_row_multiple(i, p, &q);
        }
        p += 1;
    }
    debug_assert!((p..rows).all(|i| h.is_zero_row(i)));
    HnfResult { h, u, rank: p }
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.row_vecs();
    let rows = m.nrows();
    let cols = m.ncols();
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                    *x -= &q * y;
                }
            }
            if !a[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
            }
            if !a[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // enforce divisibility of the remaining block
        let pivot = a[t][t].clone();
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&a[i][j] % &pivot).is_zero());
        if let Some((i, _)) = offender {
            let row = a[i].clone();
            for (x, y) in a[t][t..].iter_mut().zip(&row[t..]) {
                *x += y;
            }
            continue;
        }
        divisors.push(pivot.abs());
        t += 1;
    }
    divisors
}

/// Solves `M x = b` over the rationals. Free coordinates (non-pivot columns
/// of the echelon form, pivots chosen leftmost as in [`hnf`]) are zero.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Option<RatVector> {
    assert_eq!(m.nrows(), b.len(), "dimension mismatch");
    linalg::solve(&m.to_rat_rows(), b, m.ncols())
}

/// Whether `v` is an integer combination of the rows of `basis`.
pub fn lattice_member(basis: &IntMatrix, v: &[BigRational]) -> bool {
    Lattice::from_rows(basis).contains(v)
}

/// A sublattice of `Z^n` kept in Hermite form for repeated membership tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    echelon: Vec<(usize, IntVector)>,
}

impl Lattice {
    pub fn from_rows(basis: &IntMatrix) -> Self {
        let echelon = if basis.nrows() == 0 {
            Vec::new()
        } else {
            let red = hnf(basis);
            red.pivots()
                .into_iter()
                .enumerate()
                .map(|(k, c)| (c, red.h.row(k).to_vec()))
                .collect()
        };
        Lattice {
            dim: basis.ncols(),
            echelon,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        if v.iter().any(|x| !x.is_integer()) {
            return false;
        }
        let mut residual: IntVector = v.iter().map(|x| x.to_integer()).collect();
        for (c, row) in &self.echelon {
            let (q, r) = residual[*c].div_rem(&row[*c]);
            if !r.is_zero() {
                return false;
            }
            if q.is_zero() {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        residual.iter().all(Zero::is_zero)
    }
}

/// Integer basis (in Hermite form) of `{x in Z^n : x M = 0}` for an
/// `n x m` matrix `M`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let red = hnf(m);
    let kernel_rows: Vec<IntVector> = (red.rank..m.nrows())
        .map(|i| red.u.row(i).to_vec())
        .collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(0, m.nrows());
    }
    let k = IntMatrix::from_rows(kernel_rows, m.nrows());
    let canon = hnf(&k);
    canon.h.select_rows(&(0..canon.rank).collect::<Vec<_>>())
}
