//! The invariant `r ∈ A / (k + ℘(A))`, the isomorphism test and the Arf invariant.
//!
//! For a normal form with `a_n ≠ 0`, `A = k[T]/(a_0 + a_1 T + … + a_n T^n)`
//! and `r = Σ_{i=0}^{n-2} r_i d_i`. Two regular pairs with the same
//! half-discriminant are isomorphic exactly when their `r` agree modulo
//! `k + ℘(A)`.

use crate::algebra::{AlgebraElement, EtaleAlgebra};
use crate::autos::kronecker_phi;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::normalform::{extract_normal_form, read_normal_form, realize, NormalForm};
use crate::pencil::Pencil;
use crate::poly::Polynomial;
use crate::quadform::QuadraticForm;

/// The algebra `k[T]/(Σ a_i T^i)` of a normal form.
pub fn algebra_of(nf: &NormalForm) -> Result<EtaleAlgebra> {
    if nf.a.last().is_none_or(|x| x.is_zero()) {
        return Err(Error::AnZero);
    }
    EtaleAlgebra::new(&Polynomial::new(nf.field, nf.a.clone()))
}

#[derive(Clone, Debug)]
pub struct RInvariant {
    pub algebra: EtaleAlgebra,
    pub value: AlgebraElement,
}

impl RInvariant {
    /// Canonical representative of the class of `r`.
    pub fn class(&self) -> AlgebraElement {
        self.algebra.coset_reduce(&self.value).expect("same algebra").0
    }

    pub fn is_trivial(&self) -> bool {
        self.algebra.coset_reduce(&self.value).expect("same algebra").1
    }
}

pub fn r_invariant(nf: &NormalForm) -> Result<RInvariant> {
    let algebra = algebra_of(nf)?;
    let value = algebra.from_d_coordinates(&nf.r)?;
    Ok(RInvariant { algebra, value })
}

/// Normal form of a regular pencil after rebasing to `a_n ≠ 0`.
pub fn r_invariant_of(p: &Pencil) -> Result<(NormalForm, RInvariant)> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    let (q, _) = p.ensure_an_nonzero()?;
    let nf = extract_normal_form(&q)?;
    let r = r_invariant(&nf)?;
    Ok((nf, r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// `g` with `q'_i(x) = q_i(g x)` for both forms, when isomorphic.
    pub witness: Option<Matrix>,
}

/// Decides whether `p2` is obtained from `p1` by a linear change of variables.
///
/// A change of variables `g` multiplies the half-discriminant by `det(g)²`.
/// When `Δ2 = c Δ1`, `p2` is first rescaled along one coordinate so that the
/// two half-discriminants agree; different non-proportional `Δ` give `false`.
pub fn is_isomorphic(p1: &Pencil, p2: &Pencil) -> Result<IsoResult> {
    if p1.field() != p2.field() {
        return Err(Error::FieldMismatch);
    }
    if p1.n() != p2.n() {
        return Err(Error::DimensionMismatch { expected: p1.n(), found: p2.n() });
    }
    if !p1.is_regular() || !p2.is_regular() {
        return Err(Error::NotRegular);
    }
    let f = p1.field();
    let n = p1.n();
    let no = IsoResult { isomorphic: false, witness: None };
    let d1 = p1.half_discriminant();
    let d2 = p2.half_discriminant();
    let Some(lead) = d1.coeffs().iter().position(|c| !c.is_zero()) else {
        return Err(Error::NotRegular);
    };
    let c = f.div(d2.coeffs()[lead], d1.coeffs()[lead])?;
    if c.is_zero() || d1.scale(c) != d2 {
        return Ok(no);
    }
    let delta = f.inv(f.sqrt(c))?;
    let mut scale = Matrix::identity(f, n);
    scale.set(0, 0, delta);
    let p2s = p2.pullback(&scale);
    debug_assert_eq!(p2s.half_discriminant(), d1);

    let (q1, g) = p1.ensure_an_nonzero()?;
    let q2 = p2s.change_basis(&g)?;
    let nf1 = extract_normal_form(&q1)?;
    let nf2 = extract_normal_form(&q2)?;
    if nf1.a != nf2.a {
        return Err(Error::Internal("equal half-discriminants gave different normal forms".into()));
    }
    let r1 = r_invariant(&nf1)?;
    let alg = &r1.algebra;
    let r2 = alg.from_d_coordinates(&nf2.r)?;
    let Some((s, _)) = alg.solve_artin_schreier(&alg.add(&r1.value, &r2)?)? else {
        return Ok(no);
    };
    let (_, phi) = kronecker_phi(alg, &s, nf1.m())?;
    let b1 = nf1.basis.matrix(f);
    let b2_inv = nf2.basis.matrix(f).inverse().ok_or(Error::SingularMatrix)?;
    let scale_inv = scale.inverse().ok_or(Error::SingularMatrix)?;
    let witness = b1.mul(&phi).mul(&b2_inv).mul(&scale_inv);
    if p1.pullback(&witness) != *p2 {
        return Err(Error::Internal("isomorphism witness failed verification".into()));
    }
    Ok(IsoResult { isomorphic: true, witness: Some(witness) })
}

/// d-coordinates `0..n-1` of `r + ℘(s)`.
fn shifted_r(alg: &EtaleAlgebra, r: &AlgebraElement, s: &AlgebraElement) -> Result<Vec<Fe>> {
    let shifted = alg.add(r, &alg.artin_schreier(s)?)?;
    let mut c = alg.d_coordinates(&shifted)?;
    c.pop();
    Ok(c)
}

/// Pulls the realized normal form back by `φ(s)`, re-extracts, and checks the
/// new `r` equals `r + ℘(s)` up to a constant.
pub fn transformation_law_check(nf: &NormalForm, s: &AlgebraElement) -> Result<bool> {
    let rinv = r_invariant(nf)?;
    let alg = &rinv.algebra;
    let p = realize(nf.field, &nf.a, &nf.r)?;
    let (_, phi) = kronecker_phi(alg, s, nf.m())?;
    let moved = extract_normal_form(&p.pullback(&phi))?;
    let expected = shifted_r(alg, &rinv.value, s)?;
    let new_r = alg.from_d_coordinates(&moved.r)?;
    let diff = alg.d_coordinates(&alg.add(&new_r, &alg.add(&rinv.value, &alg.artin_schreier(s)?)?)?)?;
    Ok(moved.a == nf.a && moved.r == expected && diff[..diff.len() - 1].iter().all(|x| x.is_zero()))
}

/// Same check on an arbitrary pencil, reading coefficients off its own Kronecker basis.
pub fn transformation_law_check_in_basis(p: &Pencil, nf: &NormalForm, s: &AlgebraElement) -> Result<bool> {
    let rinv = r_invariant(nf)?;
    let alg = &rinv.algebra;
    let f = p.field();
    let (_, phi) = kronecker_phi(alg, s, nf.m())?;
    let b = nf.basis.matrix(f);
    let g = b.mul(&phi).mul(&b.inverse().ok_or(Error::SingularMatrix)?);
    let moved = read_normal_form(&p.pullback(&g), &nf.basis)?;
    Ok(moved.a == nf.a && moved.r == shifted_r(alg, &rinv.value, s)?)
}

#[derive(Clone, Debug)]
pub struct ArfData {
    /// `q_A(w'_{i+1})` for `i = 0..m`.
    pub q_w: Vec<AlgebraElement>,
    /// `q_A(v'_i)` for `i = 0..m`.
    pub q_v: Vec<AlgebraElement>,
    pub arf: AlgebraElement,
    pub arf_class: AlgebraElement,
    /// Whether `Arf ≡ r` modulo `k + ℘(A)`.
    pub matches_r: bool,
}

struct FormOverA<'a> {
    alg: &'a EtaleAlgebra,
    coeffs: Vec<Vec<AlgebraElement>>,
}

impl<'a> FormOverA<'a> {
    /// `q0 + t q1` with coefficients in `A`.
    fn new(alg: &'a EtaleAlgebra, q0: &QuadraticForm, q1: &QuadraticForm) -> Result<Self> {
        let n = q0.dim();
        let t = alg.t_power(1);
        let mut coeffs = vec![vec![alg.zero(); n]; n];
        for (i, row) in coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate().skip(i) {
                *c = alg.add(&alg.constant(q0.coeff(i, j)), &alg.scale(q1.coeff(i, j), &t)?)?;
            }
        }
        Ok(FormOverA { alg, coeffs })
    }

    fn eval(&self, x: &[AlgebraElement]) -> Result<AlgebraElement> {
        let a = self.alg;
        let mut acc = a.zero();
        for i in 0..x.len() {
            for j in i..x.len() {
                acc = a.add(&acc, &a.mul(&self.coeffs[i][j], &a.mul(&x[i], &x[j])?)?)?;
            }
        }
        Ok(acc)
    }

    fn pair(&self, x: &[AlgebraElement], y: &[AlgebraElement]) -> Result<AlgebraElement> {
        let a = self.alg;
        let mut acc = a.zero();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let cross = a.add(&a.mul(&x[i], &y[j])?, &a.mul(&x[j], &y[i])?)?;
                acc = a.add(&acc, &a.mul(&self.coeffs[i][j], &cross)?)?;
            }
        }
        Ok(acc)
    }
}

/// The Arf invariant of `q0 + t q1` on the hyperbolic decomposition
/// `w'_i = Σ_{k≥i} t^(k-i) w_k`, `v'_i = v_i`.
pub fn arf_invariant(nf: &NormalForm) -> Result<ArfData> {
    let rinv = r_invariant(nf)?;
    let alg = &rinv.algebra;
    let m = nf.m();
    let n = nf.n();
    let p = realize(nf.field, &nf.a, &nf.r)?;
    let qa = FormOverA::new(alg, p.q0(), p.q1())?;

    let w_prime: Vec<Vec<AlgebraElement>> = (0..=m)
        .map(|i| {
            let mut x = vec![alg.zero(); n];
            for (k, slot) in x.iter_mut().enumerate().take(m + 1).skip(i) {
                *slot = alg.t_power(k - i);
            }
            x
        })
        .collect();
    let v_prime: Vec<Vec<AlgebraElement>> = (0..m)
        .map(|i| {
            let mut x = vec![alg.zero(); n];
            x[m + 1 + i] = alg.one();
            x
        })
        .collect();

    if !qa.eval(&w_prime[0])?.is_zero() {
        return Err(Error::Internal("q_A(w'_0) should vanish".into()));
    }
    for i in 0..m {
        for j in 0..m {
            let expect = if i == j { alg.one() } else { alg.zero() };
            if qa.pair(&w_prime[j + 1], &v_prime[i])? != expect
                || !qa.pair(&v_prime[i], &v_prime[j])?.is_zero()
                || !qa.pair(&w_prime[i + 1], &w_prime[j + 1])?.is_zero()
            {
                return Err(Error::Internal("primed basis is not hyperbolic".into()));
            }
        }
    }

    let mut q_w = Vec::with_capacity(m);
    let mut q_v = Vec::with_capacity(m);
    let mut arf = alg.zero();
    let t = alg.t_power(1);
    for i in 0..m {
        let x = qa.eval(&w_prime[i + 1])?;
        let y = qa.eval(&v_prime[i])?;
        if x != alg.d_basis()[2 * i + 1] {
            return Err(Error::Internal("q_A(w'_(i+1)) differs from d_(2i+1)".into()));
        }
        let expect_y = alg.add(&alg.scale(nf.r[2 * i], &t)?, &alg.constant(nf.r[2 * i + 1]))?;
        if y != expect_y {
            return Err(Error::Internal("q_A(v'_i) differs from r_(2i) t + r_(2i+1)".into()));
        }
        arf = alg.add(&arf, &alg.mul(&x, &y)?)?;
        q_w.push(x);
        q_v.push(y);
    }
    let arf_class = alg.coset_reduce(&arf)?.0;
    let matches_r = alg.same_class(&arf, &rinv.value)?;
    Ok(ArfData { q_w, q_v, arf, arf_class, matches_r })
}
