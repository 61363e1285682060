//! Seeded generators for test inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, EtaleAlgebra};
use crate::field::{Fe, Gf};
use crate::linalg::Matrix;
use crate::normalform::realize;
use crate::pencil::Pencil;
use crate::poly::{BinaryForm, Polynomial};
use crate::quadform::QuadraticForm;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn element<R: Rng>(f: Gf, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..f.size()))
}

pub fn nonzero_element<R: Rng>(f: Gf, rng: &mut R) -> Fe {
    Fe(rng.gen_range(1..f.size()))
}

pub fn vector<R: Rng>(f: Gf, n: usize, rng: &mut R) -> Vec<Fe> {
    (0..n).map(|_| element(f, rng)).collect()
}

pub fn form<R: Rng>(f: Gf, n: usize, rng: &mut R) -> QuadraticForm {
    let mut q = QuadraticForm::zero(f, n);
    for i in 0..n {
        for j in i..n {
            q.set(i, j, element(f, rng));
        }
    }
    q
}

pub fn invertible_matrix<R: Rng>(f: Gf, n: usize, rng: &mut R) -> Matrix {
    loop {
        let data = vector(f, n * n, rng);
        let g = Matrix::from_fn(f, n, n, |i, j| data[i * n + j]);
        if g.is_invertible() {
            return g;
        }
    }
}

/// A random pencil: independent forms, not necessarily regular.
pub fn pencil<R: Rng>(f: Gf, n: usize, rng: &mut R) -> Pencil {
    loop {
        if let Ok(p) = Pencil::new(form(f, n, rng), form(f, n, rng)) {
            return p;
        }
    }
}

/// Coefficients `a` of a separable half-discriminant of degree `2m + 1`.
pub fn separable_coefficients<R: Rng>(f: Gf, m: usize, rng: &mut R) -> Vec<Fe> {
    loop {
        let a = vector(f, 2 * m + 2, rng);
        if BinaryForm::new(f, a.clone()).is_separable_form() {
            return a;
        }
    }
}

/// A regular pencil from random normal-form data, moved by random changes of both bases.
pub fn regular_pencil<R: Rng>(f: Gf, m: usize, rng: &mut R) -> Pencil {
    let a = separable_coefficients(f, m, rng);
    let r = vector(f, 2 * m, rng);
    let p = realize(f, &a, &r).expect("separable data realizes");
    let g = invertible_matrix(f, 2 * m + 1, rng);
    let h = invertible_matrix(f, 2, rng);
    p.pullback(&g).change_basis(&h).expect("invertible change of basis")
}

/// A monic separable polynomial of the given degree.
pub fn separable_polynomial<R: Rng>(f: Gf, degree: usize, rng: &mut R) -> Polynomial {
    loop {
        let mut c = vector(f, degree, rng);
        c.push(Fe::ONE);
        let p = Polynomial::new(f, c);
        if p.is_separable().unwrap_or(false) {
            return p;
        }
    }
}

pub fn algebra_element<R: Rng>(alg: &EtaleAlgebra, rng: &mut R) -> AlgebraElement {
    alg.element(vector(alg.field(), alg.dim(), rng)).expect("right length")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let f = Gf::new(3).unwrap();
        let a = regular_pencil(f, 1, &mut rng(7));
        let b = regular_pencil(f, 1, &mut rng(7));
        assert_eq!(a, b);
        assert!(a.is_regular());
    }
}
