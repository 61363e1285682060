//! Quadratic forms, their polar alternating forms, and Pfaffians.
//!
//! In characteristic two the Pfaffian expansion along the first row carries
//! no signs, so `Pf(A) = Σ_j a_{1j} Pf(A with rows/cols 1, j removed)`.
//! The expansion is memoized on the set of remaining indices and works over
//! any commutative ring implementing [`CommRing`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Gf};
use crate::linalg::{normalize_projective, Matrix};

/// Minimal commutative ring interface used by the Pfaffian expansion.
pub trait CommRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CommRing for Gf {
    type Elem = Fe;
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn one(&self) -> Fe {
        Fe::ONE
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        Gf::add(*self, *a, *b)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        Gf::mul(*self, *a, *b)
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
}

/// Memoized Pfaffians of principal submatrices of one alternating matrix.
pub struct PfaffianEngine<'a, R: CommRing> {
    ring: &'a R,
    entries: Vec<Vec<R::Elem>>,
    memo: HashMap<u64, R::Elem>,
}

impl<'a, R: CommRing> PfaffianEngine<'a, R> {
    /// `entries[i][j]` is read for `i < j` only.
    pub fn new(ring: &'a R, entries: Vec<Vec<R::Elem>>) -> Self {
        assert!(entries.len() <= 64, "dimension too large");
        PfaffianEngine { ring, entries, memo: HashMap::new() }
    }

    /// Pfaffian of the principal submatrix on the index set `mask`.
    pub fn pf(&mut self, mask: u64) -> R::Elem {
        if mask == 0 {
            return self.ring.one();
        }
        if mask.count_ones() % 2 == 1 {
            return self.ring.zero();
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut acc = self.ring.zero();
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let e = self.entries[i][j].clone();
            if self.ring.is_zero(&e) {
                continue;
            }
            let sub = self.pf(rest & !(1u64 << j));
            if self.ring.is_zero(&sub) {
                continue;
            }
            acc = self.ring.add(&acc, &self.ring.mul(&e, &sub));
        }
        self.memo.insert(mask, acc.clone());
        acc
    }

    pub fn full_mask(&self) -> u64 {
        let n = self.entries.len();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// `Pf` of the matrix with row and column `i` deleted, for each `i`.
    pub fn vector(&mut self) -> Vec<R::Elem> {
        let full = self.full_mask();
        (0..self.entries.len()).map(|i| self.pf(full & !(1u64 << i))).collect()
    }
}

/// An alternating bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlternatingForm {
    gram: Matrix,
}

impl AlternatingForm {
    /// Checks the matrix is square, symmetric and zero on the diagonal.
    pub fn new(gram: Matrix) -> Result<AlternatingForm> {
        if !gram.is_square() {
            return Err(Error::NotAlternating);
        }
        let n = gram.rows();
        for i in 0..n {
            if !gram.get(i, i).is_zero() {
                return Err(Error::NotAlternating);
            }
            for j in i + 1..n {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotAlternating);
                }
            }
        }
        Ok(AlternatingForm { gram })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> Gf {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pair(&self, x: &[Fe], y: &[Fe]) -> Fe {
        crate::linalg::dot(self.field(), x, &self.gram.mul_vec(y))
    }

    fn entries(&self) -> Vec<Vec<Fe>> {
        self.gram.to_rows()
    }

    pub fn pfaffian(&self) -> Result<Fe> {
        if self.dim() % 2 == 1 {
            return Err(Error::OddDimension(self.dim()));
        }
        let f = self.field();
        let mut eng = PfaffianEngine::new(&f, self.entries());
        let full = eng.full_mask();
        Ok(eng.pf(full))
    }

    /// `ω_i = Pf` of the Gram matrix with row and column `i` deleted.
    pub fn pfaffian_vector(&self) -> Result<Vec<Fe>> {
        if self.dim().is_multiple_of(2) {
            return Err(Error::EvenDimension(self.dim()));
        }
        let f = self.field();
        Ok(PfaffianEngine::new(&f, self.entries()).vector())
    }

    pub fn corank(&self) -> usize {
        self.dim() - self.gram.rank()
    }

    pub fn radical_basis(&self) -> Vec<Vec<Fe>> {
        self.gram.nullspace()
    }

    /// Whether `b` vanishes on the span of `subspace`.
    pub fn is_totally_isotropic(&self, subspace: &[Vec<Fe>]) -> Result<bool> {
        check_independent(self.field(), self.dim(), subspace)?;
        Ok(subspace.iter().all(|x| subspace.iter().all(|y| self.pair(x, y).is_zero())))
    }
}

fn check_independent(f: Gf, dim: usize, vectors: &[Vec<Fe>]) -> Result<()> {
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
    }
    if !vectors.is_empty() && Matrix::from_rows(f, dim, vectors).rank() < vectors.len() {
        return Err(Error::DependentVectors);
    }
    Ok(())
}

/// `q(x) = Σ_{i≤j} a_ij x_i x_j`, coefficients stored upper-triangular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    field: Gf,
    dim: usize,
    coeffs: Vec<Fe>,
}

impl QuadraticForm {
    pub fn zero(field: Gf, dim: usize) -> QuadraticForm {
        QuadraticForm { field, dim, coeffs: vec![Fe::ZERO; dim * dim] }
    }

    /// From `(i, j, a_ij)` triples with 0-based `i ≤ j`; repeated entries add up.
    pub fn from_triples(field: Gf, dim: usize, triples: &[(usize, usize, Fe)]) -> Result<QuadraticForm> {
        let mut q = QuadraticForm::zero(field, dim);
        for &(i, j, a) in triples {
            if i > j || j >= dim {
                return Err(Error::InvalidInput(format!("bad index pair ({i}, {j})")));
            }
            if !field.contains(a) {
                return Err(Error::NotInField(a.0));
            }
            let cur = q.coeff(i, j);
            q.set(i, j, field.add(cur, a));
        }
        Ok(q)
    }

    /// Nonzero `(i, j, a_ij)` with `i ≤ j`, in row-major order.
    pub fn triples(&self) -> Vec<(usize, usize, Fe)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let a = self.coeff(i, j);
                if !a.is_zero() {
                    out.push((i, j, a));
                }
            }
        }
        out
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `a_ij` for `i ≤ j`; the arguments are reordered if needed.
    pub fn coeff(&self, i: usize, j: usize) -> Fe {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: Fe) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[i * self.dim + j] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Upper-triangular coefficients in row-major order.
    pub fn coefficient_vector(&self) -> Vec<Fe> {
        let mut out = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.push(self.coeff(i, j));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Fe]) -> Fe {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        let f = self.field;
        let mut acc = Fe::ZERO;
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Fe::ZERO;
            for (j, &xj) in x.iter().enumerate().skip(i) {
                row = f.add(row, f.mul(self.coeffs[i * self.dim + j], xj));
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    /// Polar form `b(x, y) = q(x + y) - q(x) - q(y)`.
    pub fn polar(&self) -> AlternatingForm {
        let gram = Matrix::from_fn(self.field, self.dim, self.dim, |i, j| {
            if i == j {
                Fe::ZERO
            } else {
                self.coeff(i, j)
            }
        });
        AlternatingForm { gram }
    }

    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!((self.field, self.dim), (other.field, other.dim), "shape mismatch");
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        QuadraticForm { field: f, dim: self.dim, coeffs }
    }

    pub fn scale(&self, c: Fe) -> QuadraticForm {
        let f = self.field;
        QuadraticForm { field: f, dim: self.dim, coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// `λ q0 + μ q1`.
    pub fn combination(lambda: Fe, q0: &QuadraticForm, mu: Fe, q1: &QuadraticForm) -> QuadraticForm {
        q0.scale(lambda).add(&q1.scale(mu))
    }

    /// The form `x ↦ q(G x)`.
    pub fn pullback(&self, g: &Matrix) -> QuadraticForm {
        assert_eq!(g.rows(), self.dim, "dimension mismatch");
        let cols = g.columns();
        let b = self.polar();
        let n = g.cols();
        let mut out = QuadraticForm::zero(self.field, n);
        for k in 0..n {
            out.set(k, k, self.eval(&cols[k]));
            for l in k + 1..n {
                out.set(k, l, b.pair(&cols[k], &cols[l]));
            }
        }
        out
    }

    pub fn embed(&self, e: &Embedding) -> QuadraticForm {
        assert_eq!(self.field, e.source(), "field mismatch");
        QuadraticForm { field: e.target(), dim: self.dim, coeffs: e.apply_all(&self.coeffs) }
    }

    /// Whether `q` vanishes on the span of `subspace`.
    pub fn is_totally_singular(&self, subspace: &[Vec<Fe>]) -> Result<bool> {
        check_independent(self.field, self.dim, subspace)?;
        let b = self.polar();
        Ok(subspace.iter().all(|x| self.eval(x).is_zero())
            && subspace.iter().all(|x| subspace.iter().all(|y| b.pair(x, y).is_zero())))
    }
}

/// The half-discriminant `Σ_{i≤j} a_ij Pf_i Pf_j`, i.e. `q` at the Pfaffian vector.
pub fn half_disc(q: &QuadraticForm) -> Result<Fe> {
    let w = q.polar().pfaffian_vector()?;
    let f = q.field();
    let mut acc = Fe::ZERO;
    for i in 0..q.dim() {
        for j in i..q.dim() {
            acc = f.add(acc, f.mul(q.coeff(i, j), f.mul(w[i], w[j])));
        }
    }
    Ok(acc)
}

/// The projective radical point of an odd-dimensional form of corank 1.
pub fn radical_point(b: &AlternatingForm) -> Option<Vec<Fe>> {
    let w = b.pfaffian_vector().ok()?;
    normalize_projective(b.field(), &w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(f: Gf, n: usize, t: &[(usize, usize, u64)]) -> QuadraticForm {
        let t: Vec<_> = t.iter().map(|&(i, j, a)| (i, j, Fe(a))).collect();
        QuadraticForm::from_triples(f, n, &t).unwrap()
    }

    #[test]
    fn pfaffian_of_four_by_four() {
        let f = Gf::new(2).unwrap();
        let q = form(f, 4, &[(0, 1, 1), (2, 3, 2), (0, 2, 3), (1, 3, 1), (0, 3, 2), (1, 2, 2)]);
        let b = q.polar();
        let expect = f.add(f.add(f.mul(Fe(1), Fe(2)), f.mul(Fe(3), Fe(1))), f.mul(Fe(2), Fe(2)));
        assert_eq!(b.pfaffian().unwrap(), expect);
        let g = b.gram().clone();
        assert_eq!(f.square(expect), g.det());
    }

    #[test]
    fn empty_pfaffian_is_one() {
        let f = Gf::gf2();
        let b = QuadraticForm::zero(f, 0).polar();
        assert_eq!(b.pfaffian().unwrap(), Fe::ONE);
    }

    #[test]
    fn odd_pfaffian_rejected() {
        let f = Gf::gf2();
        let b = QuadraticForm::zero(f, 3).polar();
        assert_eq!(b.pfaffian(), Err(Error::OddDimension(3)));
        assert_eq!(QuadraticForm::zero(f, 4).polar().pfaffian_vector(), Err(Error::EvenDimension(4)));
    }

    #[test]
    fn half_disc_ternary_formula() {
        let f = Gf::gf2();
        let q = form(f, 3, &[(0, 0, 1), (1, 2, 1)]);
        assert_eq!(half_disc(&q).unwrap(), Fe::ONE);
        let q = form(f, 3, &[(0, 1, 1)]);
        assert_eq!(half_disc(&q).unwrap(), Fe::ZERO);
    }

    #[test]
    fn pullback_matches_evaluation() {
        let f = Gf::new(2).unwrap();
        let q = form(f, 3, &[(0, 0, 2), (0, 1, 3), (1, 2, 1), (2, 2, 1)]);
        let g = Matrix::from_rows(f, 3, &[
            vec![Fe(1), Fe(2), Fe(0)],
            vec![Fe(0), Fe(3), Fe(1)],
            vec![Fe(2), Fe(0), Fe(1)],
        ]);
        let p = q.pullback(&g);
        for a in 0..4 {
            for b in 0..4 {
                let x = vec![Fe(a), Fe(b), Fe(1)];
                assert_eq!(p.eval(&x), q.eval(&g.mul_vec(&x)));
            }
        }
    }

    #[test]
    fn isotropy_checks() {
        let f = Gf::gf2();
        let q = form(f, 3, &[(0, 1, 1), (2, 2, 1)]);
        let e0 = vec![Fe(1), Fe(0), Fe(0)];
        let e1 = vec![Fe(0), Fe(1), Fe(0)];
        assert!(q.is_totally_singular(std::slice::from_ref(&e0)).unwrap());
        assert!(!q.is_totally_singular(&[e0.clone(), e1.clone()]).unwrap());
        assert_eq!(q.is_totally_singular(&[e0.clone(), e0.clone()]), Err(Error::DependentVectors));
        assert!(!q.polar().is_totally_isotropic(&[e0, e1]).unwrap());
    }
}
