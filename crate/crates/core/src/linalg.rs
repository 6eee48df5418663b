//! Gaussian elimination over an exact [`Field`].

use crate::scalar::Field;

/// Reduced row echelon form. `rows` holds only the nonzero rows; `pivots[k]`
/// is the pivot column of `rows[k]`, strictly increasing.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub rows: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<S: Field> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref<S: Field>(mut rows: Vec<Vec<S>>, cols: usize) -> Echelon<S> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col]
            .inverse()
            .expect("nonzero pivot is invertible");
        for x in rows[next].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - factor.clone() * y.clone();
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    Echelon { rows, pivots, cols }
}

pub fn rank<S: Field>(rows: &[Vec<S>], cols: usize) -> usize {
    rref(rows.to_vec(), cols).rank()
}

/// Solves `M x = b`. Free variables are set to zero.
pub fn solve<S: Field>(m: &[Vec<S>], b: &[S], cols: usize) -> Option<Vec<S>> {
    assert_eq!(m.len(), b.len(), "row count mismatch");
    let augmented: Vec<Vec<S>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = rref(augmented, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// A basis of `{x : M x = 0}`, one vector per free column.
pub fn nullspace<S: Field>(m: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let ech = rref(m.to_vec(), cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !ech.pivots.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<S: Field>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let augmented: Vec<Vec<S>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "inverse of a non-square matrix");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let ech = rref(augmented, n);
    if ech.rank() < n {
        return None;
    }
    Some(ech.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}
