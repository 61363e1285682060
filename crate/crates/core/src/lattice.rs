//! Intersection lattice of middle-dimensional classes spanned by generators.
//!
//! Classes are handled formally on the symbols `η, Λ_∅, Λ_1, …, Λ_n`, where `η`
//! stands for `η^{m-1}`. Pairings between generators come from the measured
//! dimension of their intersection; `η·η = 4` and `η·Λ = 1`.

use crate::autos::reflections;
use crate::error::{Error, Result};
use crate::field::{Embedding, Gf};
use crate::geometry::{enumerate_generators, GeneratorSet, Subspace};
use crate::pencil::Pencil;

pub type IntMatrix = Vec<Vec<i64>>;

/// Degree of `X`; the self-pairing of `η^{m-1}`.
pub const ETA_SQUARED: i64 = 4;

/// `(-1)^r (⌊r/2⌋ + 1)` with `r` the projective dimension of `a ∩ b`; zero when disjoint.
pub fn intersection_number(a: &Subspace, b: &Subspace, f: Gf, m: usize) -> Result<i64> {
    for s in [a, b] {
        if s.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, found: s.dim() });
        }
        if s.basis.iter().any(|v| v.len() != 2 * m + 1) {
            return Err(Error::DimensionMismatch { expected: 2 * m + 1, found: s.basis[0].len() });
        }
    }
    let d = a.intersection_dim(b, f);
    if d == 0 {
        return Ok(0);
    }
    let r = (d - 1) as i64;
    let sign = if r % 2 == 0 { 1 } else { -1 };
    Ok(sign * (r / 2 + 1))
}

/// Pairing matrix of a list of generators.
pub fn intersection_matrix(gens: &[Subspace], f: Gf, m: usize) -> Result<IntMatrix> {
    gens.iter()
        .map(|a| gens.iter().map(|b| intersection_number(a, b, f, m)).collect())
        .collect()
}

/// Cartan matrix of `D_{2m+1}`: chain `α_1 … α_{2m}` with `α_0` attached to `α_{2m-1}`.
pub fn cartan_d(m: usize) -> IntMatrix {
    let n = 2 * m + 1;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut edge = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    for i in 1..2 * m {
        edge(i, i + 1);
    }
    edge(0, 2 * m - 1);
    c
}

pub fn det(mat: &IntMatrix) -> i64 {
    let n = mat.len();
    let mut a: Vec<Vec<i128>> = mat.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        (sign * a[n - 1][n - 1]) as i64
    }
}

fn pair(g: &IntMatrix, x: &[i64], y: &[i64]) -> i64 {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| y.iter().enumerate().map(|(j, &yj)| xi * g[i][j] * yj).sum::<i64>())
        .sum()
}

fn gram_of(g: &IntMatrix, vecs: &[Vec<i64>]) -> IntMatrix {
    vecs.iter().map(|x| vecs.iter().map(|y| pair(g, x, y)).collect()).collect()
}

/// Integer solution of `a x = b` by Cramer's rule, if one exists.
fn solve_integral(a: &IntMatrix, b: &[i64]) -> Result<Vec<i64>> {
    let d = det(a);
    if d == 0 {
        return Err(Error::SingularMatrix);
    }
    (0..a.len())
        .map(|j| {
            let mut aj = a.clone();
            for (row, &bi) in aj.iter_mut().zip(b) {
                row[j] = bi;
            }
            let num = det(&aj);
            if num % d != 0 {
                return Err(Error::IndexingNotDerivable);
            }
            Ok(num / d)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CycleLattice {
    pub m: usize,
    pub rank: usize,
    /// Pairing on the symbols `(η, Λ_∅, Λ_1, …, Λ_{2m+1})`.
    pub symbol_gram: IntMatrix,
    /// `e_0, …, e_{2m+1}` in symbol coordinates.
    pub e_basis: Vec<Vec<i64>>,
    /// Pairing on `(e_0, …, e_{2m+1})`.
    pub gram: IntMatrix,
    pub gram_det: i64,
    /// `η` in the `e` basis, when it lies in their integral span.
    pub eta_in_e: Option<Vec<i64>>,
    /// `α_0, …, α_{2m}` in symbol coordinates.
    pub root_basis: Vec<Vec<i64>>,
    pub root_gram: IntMatrix,
}

impl CycleLattice {
    /// `Gram(α) = (-1)^{m-1} Cartan(D_{2m+1})`.
    pub fn is_signed_cartan(&self) -> bool {
        let sign = if self.m % 2 == 1 { 1 } else { -1 };
        let c = cartan_d(self.m);
        self.root_gram.iter().zip(&c).all(|(r, s)| r.iter().zip(s).all(|(&x, &y)| x == sign * y))
    }

    /// Pairing of two vectors in `e` coordinates.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        pair(&self.gram, x, y)
    }

    /// Pairing of two vectors in symbol coordinates.
    pub fn pair_symbols(&self, x: &[i64], y: &[i64]) -> i64 {
        pair(&self.symbol_gram, x, y)
    }

    /// Whether every root is orthogonal to `η`.
    pub fn roots_are_primitive(&self) -> bool {
        let mut eta = vec![0i64; self.symbol_gram.len()];
        eta[0] = 1;
        self.root_basis.iter().all(|a| self.pair_symbols(a, &eta) == 0)
    }
}

/// The lattice from `Λ_∅` and its reflections `Λ_i = ρ_i(Λ_∅)`.
pub fn build_lattice_from(base: &Subspace, reflected: &[Subspace], f: Gf, m: usize) -> Result<CycleLattice> {
    let n = 2 * m + 1;
    if reflected.len() != n {
        return Err(Error::IndexingNotDerivable);
    }
    let gens: Vec<Subspace> = std::iter::once(base.clone()).chain(reflected.iter().cloned()).collect();
    let inter = intersection_matrix(&gens, f, m)?;
    let size = n + 2;
    let mut sym = vec![vec![0i64; size]; size];
    sym[0][0] = ETA_SQUARED;
    for i in 1..size {
        sym[0][i] = 1;
        sym[i][0] = 1;
        for j in 1..size {
            sym[i][j] = inter[i - 1][j - 1];
        }
    }
    let unit = |k: usize| {
        let mut v = vec![0i64; size];
        v[k] = 1;
        v
    };
    // e_0 = η − Λ_∅, e_i = Λ_i
    let mut e_basis = vec![unit(0)];
    e_basis[0][1] = -1;
    e_basis.extend((1..=n).map(|k| unit(k + 1)));
    let gram = gram_of(&sym, &e_basis);
    let gram_det = det(&gram);
    let rhs: Vec<i64> = e_basis.iter().map(|x| pair(&sym, &unit(0), x)).collect();
    let eta_in_e = solve_integral(&gram, &rhs).ok();

    // α_0 = −e_0 + Λ_∅ + e_{2m} + e_{2m+1}, α_i = e_i − e_{i+1}
    let mut alpha0 = unit(1);
    for (a, b) in alpha0.iter_mut().zip(&e_basis[0]) {
        *a -= b;
    }
    alpha0[2 * m + 1] += 1;
    alpha0[2 * m + 2] += 1;
    let mut root_basis = vec![alpha0];
    for i in 1..=2 * m {
        let mut a = unit(i + 1);
        a[i + 2] -= 1;
        root_basis.push(a);
    }
    let root_gram = gram_of(&sym, &root_basis);
    Ok(CycleLattice { m, rank: n + 1, symbol_gram: sym, e_basis, gram, gram_det, eta_in_e, root_basis, root_gram })
}

/// Enumerates generators over the target of `e` and builds the lattice.
pub fn build_lattice(p: &Pencil, e: &Embedding) -> Result<(GeneratorSet, CycleLattice)> {
    let gens = enumerate_generators(p, e)?;
    let f = gens.field;
    let refl = reflections(p, e)?;
    let mut reflected = Vec::with_capacity(refl.len());
    for r in &refl {
        let img = gens.base.image(f, &r.matrix);
        if !gens.all.iter().any(|g| g.key == img.key) {
            return Err(Error::IndexingNotDerivable);
        }
        reflected.push(img);
    }
    let lattice = build_lattice_from(&gens.base, &reflected, f, p.m())?;
    Ok((gens, lattice))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_d5_determinant_is_four() {
        assert_eq!(det(&cartan_d(2)), 4);
        assert_eq!(det(&cartan_d(3)), 4);
    }

    #[test]
    fn bareiss_matches_small_cases() {
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![2, 3, 1], vec![4, 1, 5], vec![0, 2, 7]]), -82);
        assert_eq!(det(&vec![]), 1);
    }

    #[test]
    fn integral_solve_rejects_fractions() {
        let a = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(solve_integral(&a, &[4, 3]).unwrap(), vec![2, 3]);
        assert!(solve_integral(&a, &[1, 0]).is_err());
    }
}
