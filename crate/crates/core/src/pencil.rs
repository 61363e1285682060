//! Pencils of quadratic forms and their half-discriminant.
//!
//! For `u = (λ, μ)` write `q_u = λ q0 + μ q1` and `b_u` for its polar form.
//! The radical map `Ω(λ, μ) = Σ_i λ^(m-i) μ^i w_i` is the Pfaffian vector of
//! `b_u`, computed symbolically with binary-form entries, and the
//! half-discriminant is `Δ(t0, t1) = q_{(t0,t1)}(Ω(t0, t1))`, a binary form of
//! degree `n = 2m + 1` with coefficients `a_0, …, a_n`.

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Gf};
use crate::linalg::Matrix;
use crate::poly::{BinaryForm, ProjRoot};
use crate::quadform::{AlternatingForm, CommRing, PfaffianEngine, QuadraticForm};

/// Homogeneous forms in `(t0, t1)` as coefficient lists; the empty list is zero.
struct FormRing {
    field: Gf,
}

impl CommRing for FormRing {
    type Elem = Vec<Fe>;
    fn zero(&self) -> Vec<Fe> {
        Vec::new()
    }
    fn one(&self) -> Vec<Fe> {
        vec![Fe::ONE]
    }
    fn add(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        if a.is_empty() {
            return b.clone();
        }
        if b.is_empty() {
            return a.clone();
        }
        assert_eq!(a.len(), b.len(), "adding forms of different degree");
        let out: Vec<Fe> = a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect();
        if out.iter().all(|x| x.is_zero()) {
            Vec::new()
        } else {
            out
        }
    }
    fn mul(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let f = self.field;
        let mut c = vec![Fe::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(x, y));
            }
        }
        if c.iter().all(|x| x.is_zero()) {
            Vec::new()
        } else {
            c
        }
    }
    fn is_zero(&self, a: &Vec<Fe>) -> bool {
        a.is_empty()
    }
}

/// A pair of quadratic forms on `E = k^n`, `n` odd, not proportional.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pencil {
    q0: QuadraticForm,
    q1: QuadraticForm,
}

/// `Ω(λ, μ) = Σ_{i=0}^{m} λ^(m-i) μ^i w_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalMap {
    pub field: Gf,
    pub w: Vec<Vec<Fe>>,
}

impl RadicalMap {
    pub fn m(&self) -> usize {
        self.w.len() - 1
    }

    pub fn eval(&self, lambda: Fe, mu: Fe) -> Vec<Fe> {
        let f = self.field;
        let m = self.m() as u64;
        let n = self.w[0].len();
        let mut out = vec![Fe::ZERO; n];
        for (i, wi) in self.w.iter().enumerate() {
            let c = f.mul(f.pow(lambda, m - i as u64), f.pow(mu, i as u64));
            crate::linalg::axpy(f, &mut out, c, wi);
        }
        out
    }
}

impl Pencil {
    pub fn new(q0: QuadraticForm, q1: QuadraticForm) -> Result<Pencil> {
        if q0.field() != q1.field() {
            return Err(Error::FieldMismatch);
        }
        if q0.dim() != q1.dim() {
            return Err(Error::DimensionMismatch { expected: q0.dim(), found: q1.dim() });
        }
        let n = q0.dim();
        if n.is_multiple_of(2) || n < 3 {
            return Err(Error::EvenDimension(n));
        }
        let f = q0.field();
        let rows = vec![q0.coefficient_vector(), q1.coefficient_vector()];
        if Matrix::from_rows(f, rows[0].len(), &rows).rank() < 2 {
            return Err(Error::ProportionalPair);
        }
        Ok(Pencil { q0, q1 })
    }

    pub fn field(&self) -> Gf {
        self.q0.field()
    }

    pub fn n(&self) -> usize {
        self.q0.dim()
    }

    pub fn m(&self) -> usize {
        (self.n() - 1) / 2
    }

    pub fn q0(&self) -> &QuadraticForm {
        &self.q0
    }

    pub fn q1(&self) -> &QuadraticForm {
        &self.q1
    }

    pub fn member(&self, lambda: Fe, mu: Fe) -> QuadraticForm {
        QuadraticForm::combination(lambda, &self.q0, mu, &self.q1)
    }

    pub fn polar_member(&self, lambda: Fe, mu: Fe) -> AlternatingForm {
        self.member(lambda, mu).polar()
    }

    pub fn embed(&self, e: &Embedding) -> Pencil {
        Pencil { q0: self.q0.embed(e), q1: self.q1.embed(e) }
    }

    /// The pair `(q0 ∘ g, q1 ∘ g)`.
    pub fn pullback(&self, g: &Matrix) -> Pencil {
        Pencil { q0: self.q0.pullback(g), q1: self.q1.pullback(g) }
    }

    /// The radical map, with coefficients `w_0, …, w_m` from symbolic Pfaffians.
    pub fn radical_map(&self) -> RadicalMap {
        let f = self.field();
        let n = self.n();
        let m = self.m();
        let ring = FormRing { field: f };
        let b0 = self.q0.polar();
        let b1 = self.q1.polar();
        let entries: Vec<Vec<Vec<Fe>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (x, y) = (b0.gram().get(i, j), b1.gram().get(i, j));
                        if x.is_zero() && y.is_zero() {
                            Vec::new()
                        } else {
                            vec![x, y]
                        }
                    })
                    .collect()
            })
            .collect();
        let pf = PfaffianEngine::new(&ring, entries).vector();
        let w = (0..=m)
            .map(|k| pf.iter().map(|c| c.get(k).copied().unwrap_or(Fe::ZERO)).collect())
            .collect();
        RadicalMap { field: f, w }
    }

    /// `Δ(t0, t1) = q_{(t0,t1)}(Ω(t0, t1))`.
    pub fn half_discriminant(&self) -> BinaryForm {
        let f = self.field();
        let n = self.n();
        let omega = self.radical_map();
        let m = omega.m();
        let comp: Vec<BinaryForm> = (0..n)
            .map(|i| BinaryForm::new(f, omega.w.iter().map(|w| w[i]).collect()))
            .collect();
        let mut acc = BinaryForm::zero(f, n);
        for i in 0..n {
            for j in i..n {
                let (x, y) = (self.q0.coeff(i, j), self.q1.coeff(i, j));
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                let term = BinaryForm::linear(f, x, y).mul(&comp[i]).mul(&comp[j]);
                acc = acc.add(&term);
            }
        }
        debug_assert_eq!(acc.degree(), 2 * m + 1);
        acc
    }

    pub fn is_regular(&self) -> bool {
        self.half_discriminant().is_separable_form()
    }

    /// Roots of `Δ` over the target of `e` with the corank of `b_u` at each.
    pub fn corank_profile(&self, e: &Embedding) -> Result<Vec<(ProjRoot, usize)>> {
        if !self.is_regular() {
            return Err(Error::NotRegular);
        }
        let delta = self.half_discriminant().embed(e);
        let roots = delta.projective_roots(&Embedding::identity(e.target()))?;
        if roots.len() < self.n() {
            return Err(Error::NotSplit { found: roots.len(), needed: self.n() });
        }
        let big = self.embed(e);
        Ok(roots.into_iter().map(|(l, m)| ((l, m), big.polar_member(l, m).corank())).collect())
    }

    /// The pencil with basis `(q_{g u0}, q_{g u1})`, columns of `g` being images of `u0, u1`.
    ///
    /// The new half-discriminant is exactly `Δ ∘ g` (see [`BinaryForm::substitute`]).
    pub fn change_basis(&self, g: &Matrix) -> Result<Pencil> {
        if (g.rows(), g.cols()) != (2, 2) || g.field() != self.field() {
            return Err(Error::InvalidInput("need a 2x2 matrix over the pencil field".into()));
        }
        if !g.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        Pencil::new(
            QuadraticForm::combination(g.get(0, 0), &self.q0, g.get(1, 0), &self.q1),
            QuadraticForm::combination(g.get(0, 1), &self.q0, g.get(1, 1), &self.q1),
        )
    }

    /// Rebases so that `a_n ≠ 0`, returning the new pencil and the basis change used.
    ///
    /// Candidates are tried in a fixed order: identity, swap, then
    /// `(u0, c u0 + u1)` for nonzero `c` in increasing order.
    pub fn ensure_an_nonzero(&self) -> Result<(Pencil, Matrix)> {
        let f = self.field();
        let delta = self.half_discriminant();
        if delta.is_zero() {
            return Err(Error::NotRegular);
        }
        let mk = |rows: [[Fe; 2]; 2]| Matrix::from_rows(f, 2, &[rows[0].to_vec(), rows[1].to_vec()]);
        let mut candidates = vec![
            mk([[Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ONE]]),
            mk([[Fe::ZERO, Fe::ONE], [Fe::ONE, Fe::ZERO]]),
        ];
        candidates.extend(f.elements().skip(1).map(|c| mk([[Fe::ONE, c], [Fe::ZERO, Fe::ONE]])));
        for g in candidates {
            if !delta.eval(g.get(0, 1), g.get(1, 1)).is_zero() {
                return Ok((self.change_basis(&g)?, g));
            }
        }
        let mut j = 2;
        loop {
            let (_, e) = f.extension(j)?;
            let big = delta.embed(&e);
            let roots = big.projective_roots(&Embedding::identity(e.target()))?;
            if (roots.len() as u64) < e.target().size() + 1 {
                return Err(Error::NoRationalNonRoot { min_extension_degree: j });
            }
            j += 1;
        }
    }
}
