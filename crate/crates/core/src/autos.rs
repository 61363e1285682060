//! Automorphisms of a regular pair and of its base locus.
//!
//! In Kronecker coordinates, `s ∈ A` with d-coordinates `s_0, …, s_{n-1}`
//! acts by `w_i ↦ w_i`, `v_i ↦ v_i + Σ_k s_{i+k} w_k`, i.e. by the block
//! matrix `[[I, S], [0, I]]` with the catalecticant `S[k][i] = s_{i+k}`.
//! Idempotents of `A` give the automorphisms of the pair; roots of `Δ`
//! give reflections; and projectivities of the line preserving the roots of
//! `Δ` lift to automorphisms of `X = {q0 = q1 = 0}`.

use std::collections::HashMap;

use crate::algebra::{AlgebraElement, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{Embedding, Fe, Gf};
use crate::invariants::{algebra_of, is_isomorphic};
use crate::linalg::{normalize_projective, normalize_projective_matrix, Matrix};
use crate::normalform::{extract_normal_form, KroneckerBasis};
use crate::pencil::Pencil;
use crate::poly::ProjRoot;

/// Catalecticant `S` (size `(m+1) × m`) and the Kronecker-coordinate matrix of `φ(s)`.
pub fn kronecker_phi(alg: &EtaleAlgebra, s: &AlgebraElement, m: usize) -> Result<(Matrix, Matrix)> {
    let f = alg.field();
    let n = 2 * m + 1;
    if alg.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alg.dim() });
    }
    let c = alg.d_coordinates(s)?;
    let cat = Matrix::from_fn(f, m + 1, m, |k, i| c[i + k]);
    let mut phi = Matrix::identity(f, n);
    for i in 0..m {
        for k in 0..=m {
            phi.set(k, m + 1 + i, cat.get(k, i));
        }
    }
    Ok((cat, phi))
}

#[derive(Clone, Debug)]
pub struct AutomorphismRep {
    pub s: AlgebraElement,
    pub catalecticant: Matrix,
    pub kronecker_matrix: Matrix,
    /// The same map in the original coordinates of `E`.
    pub matrix: Matrix,
}

pub fn phi(alg: &EtaleAlgebra, s: &AlgebraElement, basis: &KroneckerBasis) -> Result<AutomorphismRep> {
    let f = alg.field();
    let (cat, km) = kronecker_phi(alg, s, basis.m())?;
    let b = basis.matrix(f);
    let matrix = b.mul(&km).mul(&b.inverse().ok_or(Error::SingularMatrix)?);
    Ok(AutomorphismRep { s: s.clone(), catalecticant: cat, kronecker_matrix: km, matrix })
}

/// Whether `q_i ∘ g = q_i` for both forms.
pub fn preserves_pair(p: &Pencil, g: &Matrix) -> bool {
    p.q0().pullback(g) == *p.q0() && p.q1().pullback(g) == *p.q1()
}

/// Whether `q_i ∘ g` stays in the span of `q0, q1`.
pub fn preserves_pencil(p: &Pencil, g: &Matrix) -> bool {
    let f = p.field();
    let rows = vec![
        p.q0().coefficient_vector(),
        p.q1().coefficient_vector(),
        p.q0().pullback(g).coefficient_vector(),
        p.q1().pullback(g).coefficient_vector(),
    ];
    Matrix::from_rows(f, rows[0].len(), &rows).rank() == 2
}

/// `Aut(q0, q1) = {φ(ε)}` for idempotents `ε` modulo `ε ~ ε + 1`.
///
/// Representatives are the sums of subsets of all primitive idempotents but
/// the last, so the output has `2^(l-1)` elements for `l` factors of `f`.
///
/// When every rational point of the line is a root of `Δ`, the group is
/// computed over the smallest extension with a non-root and the matrices
/// defined over the base field are kept; `s` and the Kronecker data of those
/// elements then live over the extension.
pub fn automorphism_group(p: &Pencil) -> Result<Vec<AutomorphismRep>> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    match p.ensure_an_nonzero() {
        Err(Error::NoRationalNonRoot { min_extension_degree }) => {
            let (_, e) = p.field().extension(min_extension_degree)?;
            let mut out = Vec::new();
            for mut rep in automorphism_group(&p.embed(&e))? {
                let rows: Option<Vec<Vec<Fe>>> = rep
                    .matrix
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(|&x| e.preimage(x)).collect())
                    .collect();
                if let Some(rows) = rows {
                    rep.matrix = Matrix::from_rows(p.field(), p.n(), &rows);
                    out.push(rep);
                }
            }
            Ok(out)
        }
        other => automorphism_group_rebased(p, other?.0),
    }
}

fn automorphism_group_rebased(p: &Pencil, q: Pencil) -> Result<Vec<AutomorphismRep>> {
    let nf = extract_normal_form(&q)?;
    let alg = algebra_of(&nf)?;
    let prim = alg.idempotents();
    let l = prim.len();
    let mut out = Vec::with_capacity(1 << (l - 1));
    for mask in 0u64..1 << (l - 1) {
        let mut eps = alg.zero();
        for (i, e) in prim.iter().enumerate().take(l - 1) {
            if mask >> i & 1 == 1 {
                eps = alg.add(&eps, e)?;
            }
        }
        let rep = phi(&alg, &eps, &nf.basis)?;
        if !preserves_pair(p, &rep.matrix) {
            return Err(Error::Internal("idempotent automorphism does not preserve the pair".into()));
        }
        out.push(rep);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Reflection {
    pub root: ProjRoot,
    /// `z = Ω(x)`, spanning the radical of `b_x`.
    pub z: Vec<Fe>,
    pub matrix: Matrix,
    /// `φ(ε)` for the idempotent attached to this root, when the field has a non-root point.
    pub idempotent_matrix: Option<Matrix>,
}

fn reflection_matrix(p: &Pencil, z: &[Fe], u: (Fe, Fe)) -> Result<Matrix> {
    let f = p.field();
    let n = p.n();
    let q = p.member(u.0, u.1);
    let denom = q.eval(z);
    if denom.is_zero() {
        return Err(Error::NotRegular);
    }
    let row = q.polar().gram().mul_vec(z);
    let inv = f.inv(denom)?;
    Ok(Matrix::from_fn(f, n, n, |i, j| {
        let base = if i == j { Fe::ONE } else { Fe::ZERO };
        f.add(base, f.mul(z[i], f.mul(row[j], inv)))
    }))
}

/// The reflections `ρ_i(v) = v + b_u(z_i, v) / q_u(z_i) · z_i`, one per root of `Δ` over the target of `e`.
pub fn reflections(p: &Pencil, e: &Embedding) -> Result<Vec<Reflection>> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    let big = p.embed(e);
    let f = big.field();
    let delta = big.half_discriminant();
    let roots = delta.projective_roots(&Embedding::identity(f))?;
    if roots.len() < big.n() {
        return Err(Error::NotSplit { found: roots.len(), needed: big.n() });
    }
    let omega = big.radical_map();
    let rebased = big.ensure_an_nonzero().ok();
    let split = match &rebased {
        Some((q, g)) => {
            let nf = extract_normal_form(q)?;
            let alg = algebra_of(&nf)?;
            Some((nf, alg, g.inverse().ok_or(Error::SingularMatrix)?))
        }
        None => None,
    };
    let mut out = Vec::with_capacity(roots.len());
    for &(l, m) in &roots {
        let z = omega.eval(l, m);
        let candidates = [(Fe::ONE, Fe::ZERO), (Fe::ZERO, Fe::ONE), (Fe::ONE, Fe::ONE)];
        let proportional = |u: &(Fe, Fe)| f.mul(l, u.1) == f.mul(m, u.0);
        let usable: Vec<_> = candidates.iter().filter(|u| !proportional(u)).take(2).collect();
        let matrix = reflection_matrix(&big, &z, *usable[0])?;
        if reflection_matrix(&big, &z, *usable[1])? != matrix {
            return Err(Error::Internal("reflection depends on the auxiliary form".into()));
        }
        let idempotent_matrix = match &split {
            Some((nf, alg, ginv)) => {
                let x = ginv.mul_vec(&[l, m]);
                let x = normalize_projective(f, &x).expect("nonzero");
                if x[0].is_zero() {
                    return Err(Error::Internal("root at infinity after rebasing".into()));
                }
                let alpha = f.div(x[1], x[0])?;
                let idx = alg.idempotent_for_root(alpha).ok_or(Error::Internal("no idempotent for root".into()))?;
                Some(phi(alg, &alg.idempotents()[idx], &nf.basis)?.matrix)
            }
            None => None,
        };
        out.push(Reflection { root: (l, m), z, matrix, idempotent_matrix });
    }
    Ok(out)
}

/// `Aut(X)` as the products of `Aut(q0, q1)` with lifts of the projectivities preserving `V(Δ)`.
#[derive(Clone, Debug)]
pub struct AutX {
    pub field: Gf,
    pub pair_automorphisms: Vec<Matrix>,
    /// Normalized elements of `PGL_2` with `Δ ∘ g ∝ Δ`.
    pub line_automorphisms: Vec<Matrix>,
    pub lifts: Vec<Matrix>,
    /// Normalized elements `ρ · h` of `PGL(E)`.
    pub elements: Vec<Matrix>,
    /// `table[i][j]` is the index of `elements[i] · elements[j]`; only for small orders.
    pub table: Option<Vec<Vec<usize>>>,
}

impl AutX {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

const TABLE_LIMIT: usize = 2048;

fn is_proportional(a: &[Fe], b: &[Fe], f: Gf) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| f.mul(a[i], b[j]) == f.mul(a[j], b[i])))
}

/// Elements `g` of `PGL_2` (first nonzero entry 1) with `Δ ∘ g` proportional to `Δ`.
pub fn line_automorphisms(delta: &crate::poly::BinaryForm, exec: Exec) -> Result<Vec<Matrix>> {
    let f = delta.field();
    let q = f.size();
    let keep = |g: &Matrix| {
        g.is_invertible() && is_proportional(delta.coeffs(), delta.substitute(g).coeffs(), f)
    };
    if q <= 32 {
        let total = q * q * q * q;
        let found = exec::filter_map_range(exec, total, |idx| {
            let e = [idx % q, idx / q % q, idx / (q * q) % q, idx / (q * q * q)];
            let first = e.iter().position(|&x| x != 0)?;
            if e[first] != 1 {
                return None;
            }
            let g = Matrix::from_rows(f, 2, &[vec![Fe(e[0]), Fe(e[1])], vec![Fe(e[2]), Fe(e[3])]]);
            keep(&g).then_some(g)
        });
        return Ok(found);
    }
    let roots = delta.projective_roots(&Embedding::identity(f))?;
    if roots.len() < 3 {
        return Err(Error::ScanTooLarge { points: (q as u128).pow(4) });
    }
    let frame = |a: ProjRoot, b: ProjRoot, c: ProjRoot| -> Option<Matrix> {
        let m = Matrix::from_rows(f, 2, &[vec![a.0, b.0], vec![a.1, b.1]]);
        let coef = m.inverse()?.mul_vec(&[c.0, c.1]);
        if coef.iter().any(|x| x.is_zero()) {
            return None;
        }
        Some(Matrix::from_rows(f, 2, &[
            vec![f.mul(coef[0], a.0), f.mul(coef[1], b.0)],
            vec![f.mul(coef[0], a.1), f.mul(coef[1], b.1)],
        ]))
    };
    let src = frame(roots[0], roots[1], roots[2]).ok_or(Error::Internal("degenerate frame".into()))?;
    let src_inv = src.inverse().ok_or(Error::SingularMatrix)?;
    let mut triples = Vec::new();
    for i in 0..roots.len() {
        for j in 0..roots.len() {
            for k in 0..roots.len() {
                if i != j && j != k && i != k {
                    triples.push((i, j, k));
                }
            }
        }
    }
    let mut found: Vec<Matrix> = exec::map_slice(exec, &triples, |&(i, j, k)| {
        let dst = frame(roots[i], roots[j], roots[k])?;
        let g = normalize_projective_matrix(&dst.mul(&src_inv))?;
        keep(&g).then_some(g)
    })
    .into_iter()
    .flatten()
    .collect();
    found.sort_by_key(|g| g.to_rows());
    found.dedup();
    Ok(found)
}

/// Computes `Aut(X)` over the target of `e`; needs `X` quasi-split there.
pub fn aut_x(p: &Pencil, e: &Embedding) -> Result<AutX> {
    aut_x_with(p, e, Exec::default())
}

pub fn aut_x_with(p: &Pencil, e: &Embedding, exec: Exec) -> Result<AutX> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    let big = p.embed(e);
    let f = big.field();
    let (rebased, _) = big.ensure_an_nonzero()?;
    let nf = extract_normal_form(&rebased)?;
    let r = crate::invariants::r_invariant(&nf)?;
    if !r.is_trivial() {
        let qs = crate::geometry::quasi_split_over(&big)?;
        return Err(Error::NotQuasiSplit { extension_degree: qs.degree });
    }
    let pair_automorphisms: Vec<Matrix> = automorphism_group(&big)?.into_iter().map(|a| a.matrix).collect();
    let delta = big.half_discriminant();
    let line = line_automorphisms(&delta, exec)?;
    let lifts = exec::map_slice(exec, &line, |g| -> Result<Matrix> {
        let moved = big.change_basis(g)?;
        let iso = is_isomorphic(&big, &moved)?;
        iso.witness.ok_or(Error::Internal("projectivity of the line did not lift".into()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut elements = Vec::with_capacity(pair_automorphisms.len() * lifts.len());
    let mut index = HashMap::new();
    for h in &lifts {
        for rho in &pair_automorphisms {
            let g = normalize_projective_matrix(&rho.mul(h)).expect("invertible");
            if index.insert(g.clone(), elements.len()).is_some() {
                return Err(Error::Internal("duplicate element in the automorphism group".into()));
            }
            elements.push(g);
        }
    }
    for g in &elements {
        if !preserves_pencil(&big, g) {
            return Err(Error::Internal("element does not preserve X".into()));
        }
    }
    let table = if elements.len() <= TABLE_LIMIT {
        let rows = exec::map_slice(exec, &elements, |a| {
            elements
                .iter()
                .map(|b| {
                    let prod = normalize_projective_matrix(&a.mul(b)).expect("invertible");
                    index.get(&prod).copied()
                })
                .collect::<Option<Vec<usize>>>()
        });
        Some(
            rows.into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or(Error::Internal("automorphism set is not closed".into()))?,
        )
    } else {
        None
    };
    Ok(AutX { field: f, pair_automorphisms, line_automorphisms: line, lifts, elements, table })
}
