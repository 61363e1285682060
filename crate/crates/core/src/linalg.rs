//! Dense matrices over GF(2^k).
//!
//! Row reduction always pivots on the lowest available column, and linear
//! solves set free variables to zero, so every solution returned here is a
//! deterministic function of the input.

use crate::field::{Embedding, Fe, Gf};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Gf,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(field: Gf, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: Gf, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: Gf, cols: usize, rows: &[Vec<Fe>]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn from_columns(field: Gf, rows: usize, cols: &[Vec<Fe>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_fn(field: Gf, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Fe) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Fe>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn embed(&self, e: &Embedding) -> Matrix {
        assert_eq!(self.field, e.source(), "field mismatch");
        let data = self.data.iter().map(|&a| e.apply(a)).collect();
        Matrix { field: e.target(), rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.add(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column in increasing order.
    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    /// A solution of `A x = b` with free variables zero, if one exists.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.rows, "shape mismatch");
        let aug = Matrix::from_fn(self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                Fe::ONE
            } else {
                Fe::ZERO
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(self.field, n, n, |i, j| r.get(i, n + j)))
    }

    pub fn det(&self) -> Fe {
        assert!(self.is_square(), "determinant of non-square matrix");
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Fe::ZERO;
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.add(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_projective(f: Gf, v: &[Fe]) -> Option<Vec<Fe>> {
    let lead = v.iter().copied().find(|x| !x.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// Scales a nonzero matrix so its first nonzero entry (row-major) is 1.
pub fn normalize_projective_matrix(m: &Matrix) -> Option<Matrix> {
    let f = m.field();
    let lead = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j))
        .find(|x| !x.is_zero())?;
    Some(m.scale(f.inv(lead).ok()?))
}

/// Canonical key of the span of `vectors`: the nonzero rows of its RREF.
pub fn span_key(f: Gf, dim: usize, vectors: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(f, dim, vectors).rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn dot(f: Gf, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn axpy(f: Gf, acc: &mut [Fe], c: Fe, x: &[Fe]) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = f.add(*a, f.mul(c, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = Gf::new(2).unwrap();
        let m = Matrix::from_rows(f, 2, &[vec![Fe(1), Fe(2)], vec![Fe(2), Fe(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        assert_eq!(m.det(), f.add(Fe(1), f.mul(Fe(2), Fe(2))));
    }

    #[test]
    fn solve_uses_zero_free_variables() {
        let f = Gf::gf2();
        let m = Matrix::from_rows(f, 3, &[vec![Fe(0), Fe(1), Fe(1)]]);
        assert_eq!(m.solve(&[Fe(1)]), Some(vec![Fe(0), Fe(1), Fe(0)]));
        let ns = m.nullspace();
        assert_eq!(ns, vec![vec![Fe(1), Fe(0), Fe(0)], vec![Fe(0), Fe(1), Fe(1)]]);
    }

    #[test]
    fn singular_has_no_inverse() {
        let f = Gf::gf2();
        let m = Matrix::from_rows(f, 2, &[vec![Fe(1), Fe(1)], vec![Fe(1), Fe(1)]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), Fe(0));
        assert_eq!(m.solve(&[Fe(1), Fe(0)]), None);
    }
}
