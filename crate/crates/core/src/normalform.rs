//! Kronecker bases and the normal form of a pencil.
//!
//! A Kronecker basis `w_0, …, w_m, v_0, …, v_{m-1}` satisfies
//! `b0(w_i, v_j) = δ_{i,j+1}`, `b1(w_i, v_j) = δ_{ij}` and vanishing pairings
//! among the `w` and among the `v`. In such a basis
//!
//! ```text
//! q0 = Σ a_{2i} x_i² + Σ x_{i+1} y_i + Σ r_{2i+1} y_i²
//! q1 = Σ a_{2i+1} x_i² + Σ x_i y_i   + Σ r_{2i} y_i²
//! ```
//!
//! where `x_i, y_i` are the coordinates along `w_i, v_i`.

use crate::error::{Error, Result};
use crate::field::{Fe, Gf};
use crate::linalg::{axpy, Matrix};
use crate::pencil::Pencil;
use crate::quadform::QuadraticForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerBasis {
    pub w: Vec<Vec<Fe>>,
    pub v: Vec<Vec<Fe>>,
}

impl KroneckerBasis {
    /// Columns `w_0, …, w_m, v_0, …, v_{m-1}`.
    pub fn matrix(&self, field: Gf) -> Matrix {
        let n = self.w[0].len();
        let cols: Vec<Vec<Fe>> = self.w.iter().chain(self.v.iter()).cloned().collect();
        Matrix::from_columns(field, n, &cols)
    }

    pub fn m(&self) -> usize {
        self.v.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub field: Gf,
    /// `a_0, …, a_n`.
    pub a: Vec<Fe>,
    /// `r_0, …, r_{n-2}`.
    pub r: Vec<Fe>,
    pub basis: KroneckerBasis,
}

impl NormalForm {
    pub fn m(&self) -> usize {
        self.r.len() / 2
    }

    pub fn n(&self) -> usize {
        self.a.len() - 1
    }
}

/// The coefficient vectors of the radical map; errors if they are dependent.
pub fn canonical_w(p: &Pencil) -> Result<Vec<Vec<Fe>>> {
    let w = p.radical_map().w;
    if Matrix::from_rows(p.field(), p.n(), &w).rank() < w.len() {
        return Err(Error::DependentVectors);
    }
    Ok(w)
}

/// Checks all pairing conditions of a Kronecker basis.
pub fn satisfies_basic_equations(p: &Pencil, basis: &KroneckerBasis) -> bool {
    let b0 = p.q0().polar();
    let b1 = p.q1().polar();
    let m = basis.m();
    let delta = |c: bool| if c { Fe::ONE } else { Fe::ZERO };
    for i in 0..=m {
        for k in 0..=m {
            if !b0.pair(&basis.w[i], &basis.w[k]).is_zero() || !b1.pair(&basis.w[i], &basis.w[k]).is_zero() {
                return false;
            }
        }
        for j in 0..m {
            if b0.pair(&basis.w[i], &basis.v[j]) != delta(i == j + 1)
                || b1.pair(&basis.w[i], &basis.v[j]) != delta(i == j)
            {
                return false;
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            if !b0.pair(&basis.v[i], &basis.v[j]).is_zero() || !b1.pair(&basis.v[i], &basis.v[j]).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Completes `w` to a Kronecker basis.
///
/// Each `v_j` is the lowest-pivot solution of its pairing equations against
/// the `w`. A correction `v_j += Σ_k l_jk w_k` then clears the pairings among
/// the `v`, where `l` solves
/// `l_ij + l_ji = b1(v_i, v_j)` and `l_{i,j+1} + l_{j,i+1} = b0(v_i, v_j)`.
pub fn complete_kronecker(p: &Pencil, w: &[Vec<Fe>]) -> Result<KroneckerBasis> {
    let f = p.field();
    let n = p.n();
    let m = p.m();
    if w.len() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, found: w.len() });
    }
    let g0 = p.q0().polar().gram().clone();
    let g1 = p.q1().polar().gram().clone();
    let mut rows = Vec::with_capacity(2 * (m + 1));
    for wi in w {
        rows.push(g0.mul_vec(wi));
    }
    for wi in w {
        rows.push(g1.mul_vec(wi));
    }
    let sys = Matrix::from_rows(f, n, &rows);
    let mut v = Vec::with_capacity(m);
    for j in 0..m {
        let mut rhs = vec![Fe::ZERO; 2 * (m + 1)];
        rhs[j + 1] = Fe::ONE;
        rhs[m + 1 + j] = Fe::ONE;
        v.push(sys.solve(&rhs).ok_or(Error::NotRegular)?);
    }

    let b0 = p.q0().polar();
    let b1 = p.q1().polar();
    let unknowns = m * (m + 1);
    let idx = |j: usize, k: usize| j * (m + 1) + k;
    let mut eqs = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut row = vec![Fe::ZERO; unknowns];
            row[idx(i, j)] = f.add(row[idx(i, j)], Fe::ONE);
            row[idx(j, i)] = f.add(row[idx(j, i)], Fe::ONE);
            eqs.push(row);
            rhs.push(b1.pair(&v[i], &v[j]));
            let mut row = vec![Fe::ZERO; unknowns];
            row[idx(i, j + 1)] = f.add(row[idx(i, j + 1)], Fe::ONE);
            row[idx(j, i + 1)] = f.add(row[idx(j, i + 1)], Fe::ONE);
            eqs.push(row);
            rhs.push(b0.pair(&v[i], &v[j]));
        }
    }
    if !eqs.is_empty() {
        let l = Matrix::from_rows(f, unknowns, &eqs).solve(&rhs).ok_or(Error::NotRegular)?;
        for (j, vj) in v.iter_mut().enumerate() {
            for (k, wk) in w.iter().enumerate() {
                axpy(f, vj, l[idx(j, k)], wk);
            }
        }
    }
    let basis = KroneckerBasis { w: w.to_vec(), v };
    if !basis.matrix(f).is_invertible() || !satisfies_basic_equations(p, &basis) {
        return Err(Error::NotRegular);
    }
    Ok(basis)
}

/// Reads normal-form coefficients off a given Kronecker basis.
pub fn read_normal_form(p: &Pencil, basis: &KroneckerBasis) -> Result<NormalForm> {
    if !satisfies_basic_equations(p, basis) {
        return Err(Error::InvalidInput("basis violates the pairing conditions".into()));
    }
    let m = basis.m();
    let mut a = Vec::with_capacity(2 * m + 2);
    for wi in &basis.w {
        a.push(p.q0().eval(wi));
        a.push(p.q1().eval(wi));
    }
    let mut r = Vec::with_capacity(2 * m);
    for vi in &basis.v {
        r.push(p.q1().eval(vi));
        r.push(p.q0().eval(vi));
    }
    Ok(NormalForm { field: p.field(), a, r, basis: basis.clone() })
}

pub fn extract_normal_form(p: &Pencil) -> Result<NormalForm> {
    let w = canonical_w(p).map_err(|_| Error::NotRegular)?;
    let basis = complete_kronecker(p, &w)?;
    read_normal_form(p, &basis)
}

/// The normal-form pencil with coefficients `a` and `r`.
pub fn realize(field: Gf, a: &[Fe], r: &[Fe]) -> Result<Pencil> {
    if !a.len().is_multiple_of(2) || a.len() < 4 {
        return Err(Error::InvalidInput(format!("need 2m+2 coefficients a_i, got {}", a.len())));
    }
    let m = a.len() / 2 - 1;
    if r.len() != 2 * m {
        return Err(Error::DimensionMismatch { expected: 2 * m, found: r.len() });
    }
    if let Some(bad) = a.iter().chain(r).find(|x| !field.contains(**x)) {
        return Err(Error::NotInField(bad.0));
    }
    let n = 2 * m + 1;
    let y = |i: usize| m + 1 + i;
    let mut q0 = QuadraticForm::zero(field, n);
    let mut q1 = QuadraticForm::zero(field, n);
    for i in 0..=m {
        q0.set(i, i, a[2 * i]);
        q1.set(i, i, a[2 * i + 1]);
    }
    for i in 0..m {
        q0.set(i + 1, y(i), Fe::ONE);
        q1.set(i, y(i), Fe::ONE);
        q0.set(y(i), y(i), r[2 * i + 1]);
        q1.set(y(i), y(i), r[2 * i]);
    }
    let p = Pencil::new(q0, q1)?;
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: &[u64]) -> Vec<Fe> {
        v.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn basic_pair_has_standard_basis() {
        let f = Gf::gf2();
        let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 1])).unwrap();
        let nf = extract_normal_form(&p).unwrap();
        assert_eq!(nf.a, fe(&[0, 1, 1, 1]));
        assert_eq!(nf.r, fe(&[0, 1]));
        assert_eq!(nf.basis.w, vec![fe(&[1, 0, 0]), fe(&[0, 1, 0])]);
        assert_eq!(nf.basis.v, vec![fe(&[0, 0, 1])]);
    }

    #[test]
    fn inseparable_coefficients_rejected() {
        let f = Gf::gf2();
        assert_eq!(realize(f, &fe(&[1, 0, 1, 0]), &fe(&[0, 0])), Err(Error::NotRegular));
    }

    #[test]
    fn swapping_reverses_coefficients() {
        let f = Gf::new(2).unwrap();
        let a = fe(&[1, 2, 0, 3, 1, 1]);
        let r = fe(&[2, 1, 3, 0]);
        let Ok(p) = realize(f, &a, &r) else { return };
        let sw = Pencil::new(p.q1().clone(), p.q0().clone()).unwrap();
        let nf = extract_normal_form(&sw).unwrap();
        let mut ra = a.clone();
        ra.reverse();
        let mut rr = r.clone();
        rr.reverse();
        assert_eq!(nf.a, ra);
        assert_eq!(nf.r, rr);
    }
}
