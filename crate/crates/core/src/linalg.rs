//! Minimal dense row-major matrices.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add_scaled(&self, other: &DenseMatrix, scale: f64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self + s·I`.
    pub fn shift_diagonal(&self, s: f64) -> DenseMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest `|m[i][j] - m[j][i]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting.
    ///
    /// Fails when a pivot falls below `min_pivot` (absolute); the returned
    /// pair carries the smallest pivot seen.
    pub fn solve(&self, rhs: &DenseMatrix, min_pivot: f64) -> Result<(DenseMatrix, f64)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut smallest = f64::INFINITY;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap();
            let p = a[(piv, col)];
            smallest = smallest.min(p.abs());
            if p.abs() < min_pivot {
                return Err(Error::Exceptional {
                    z: f64::NAN,
                    reason: format!("singular pivot block (pivot {p:e})"),
                });
            }
            if piv != col {
                a.swap_rows(piv, col);
                b.swap_rows(piv, col);
            }
            for r in col + 1..n {
                let factor = a[(r, col)] / p;
                if factor == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = a[(col, c)];
                    a[(r, c)] -= factor * v;
                }
                for c in 0..b.cols {
                    let v = b[(col, c)];
                    b[(r, c)] -= factor * v;
                }
            }
        }
        let mut x = Self::zeros(n, b.cols);
        for c in 0..b.cols {
            for r in (0..n).rev() {
                let mut acc = b[(r, c)];
                for k in r + 1..n {
                    acc -= a[(r, k)] * x[(k, c)];
                }
                x[(r, c)] = acc / a[(r, r)];
            }
        }
        Ok((x, smallest))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// One line per row, comma separated, shortest round-trip float form.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format!("{x:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Numerical rank of a family of vectors.
///
/// Each vector is scaled to unit length, then the Gram matrix is reduced by
/// symmetric elimination with diagonal pivoting; pivots below
/// `tol · (largest pivot)` count as zero.
pub fn gram_rank(vectors: &[&[f64]], tol: f64) -> usize {
    let units: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter().map(|x| x / norm).collect()
            } else {
                v.to_vec()
            }
        })
        .collect();
    let k = units.len();
    let mut g = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let d: f64 = units[i].iter().zip(&units[j]).map(|(a, b)| a * b).sum();
            g[(i, j)] = d;
            g[(j, i)] = d;
        }
    }
    let mut active: Vec<usize> = (0..k).collect();
    let mut first = None;
    let mut rank = 0;
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|a, b| g[(*a.1, *a.1)].total_cmp(&g[(*b.1, *b.1)]))
            .unwrap();
        let pivot = g[(p, p)];
        let largest = *first.get_or_insert(pivot);
        if pivot.is_nan() || pivot <= tol * largest || largest <= 0.0 {
            break;
        }
        rank += 1;
        active.swap_remove(pos);
        for &i in &active {
            let f = g[(i, p)] / pivot;
            if f == 0.0 {
                continue;
            }
            for &j in &active {
                let v = g[(p, j)];
                g[(i, j)] -= f * v;
            }
        }
    }
    rank
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]);
        let x = DenseMatrix::from_rows(&[vec![1.0], vec![-2.0], vec![0.5]]);
        let b = a.matmul(&x);
        let (got, pivot) = a.solve(&b, 1e-12).unwrap();
        assert!(got.max_abs_diff(&x) < 1e-14);
        assert!(pivot > 0.0);
    }

    #[test]
    fn solve_flags_singular_block() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(a.solve(&DenseMatrix::identity(2), 1e-10).is_err());
    }

    #[test]
    fn gram_rank_counts_independent_vectors() {
        let a = [1.0, 0.0, 1.0];
        let b = [0.0, 2.0, 0.0];
        let c = [2.0, 2.0, 2.0];
        assert_eq!(gram_rank(&[&a, &a], 1e-8), 1);
        assert_eq!(gram_rank(&[&a, &b], 1e-8), 2);
        assert_eq!(gram_rank(&[&a, &b, &c], 1e-8), 2);
        assert_eq!(gram_rank(&[&[0.0, 0.0][..]], 1e-8), 0);
        assert_eq!(gram_rank(&[], 1e-8), 0);
    }

    #[test]
    fn csv_rows() {
        let m = DenseMatrix::from_rows(&[vec![1.0, -0.5], vec![0.25, 0.0]]);
        assert_eq!(m.to_csv(), "1.0,-0.5\n0.25,0.0\n");
    }
}
