//! Points, singularities and linear subspaces of `X = {q0 = q1 = 0} ⊂ P(E)`.

use crate::algebra::AlgebraElement;
use crate::autos::{automorphism_group, kronecker_phi};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{Embedding, Fe, Gf};
use crate::invariants::{algebra_of, r_invariant};
use crate::linalg::{span_key, Matrix};
use crate::normalform::{extract_normal_form, read_normal_form, KroneckerBasis};
use crate::pencil::Pencil;
use crate::poly::BinaryForm;

pub const SCAN_LIMIT: u128 = 100_000_000;

/// Number of points of `P^(dim-1)` over a field with `q` elements.
pub fn projective_size(q: u64, dim: usize) -> u128 {
    let q = q as u128;
    (0..dim).map(|i| q.pow(i as u32)).sum()
}

/// The `idx`-th normalized point of `P(span(basis))`, enumerated by leading position.
fn projective_point(f: Gf, dim: usize, mut idx: u128) -> Vec<Fe> {
    let q = f.size() as u128;
    let mut v = vec![Fe::ZERO; dim];
    for lead in 0..dim {
        let block = q.pow((dim - 1 - lead) as u32);
        if idx < block {
            v[lead] = Fe::ONE;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = Fe((idx % q) as u64);
                idx /= q;
            }
            return v;
        }
        idx -= block;
    }
    unreachable!("index out of range")
}

fn combine(f: Gf, basis: &[Vec<Fe>], c: &[Fe]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; basis[0].len()];
    for (b, &x) in basis.iter().zip(c) {
        crate::linalg::axpy(f, &mut out, x, b);
    }
    out
}

/// Points of `X` over the target of `e`, normalized, in enumeration order.
pub fn points_on_x(p: &Pencil, e: &Embedding) -> Result<Vec<Vec<Fe>>> {
    points_on_x_with(p, e, Exec::default())
}

pub fn points_on_x_with(p: &Pencil, e: &Embedding, exec: Exec) -> Result<Vec<Vec<Fe>>> {
    let big = p.embed(e);
    let f = big.field();
    let n = big.n();
    let total = projective_size(f.size(), n);
    if total > SCAN_LIMIT {
        return Err(Error::ScanTooLarge { points: total });
    }
    Ok(exec::filter_map_range(exec, total as u64, |i| {
        let x = projective_point(f, n, i as u128);
        (big.q0().eval(&x).is_zero() && big.q1().eval(&x).is_zero()).then_some(x)
    }))
}

/// Whether the 2 × n matrix with rows `b0(x, ·)`, `b1(x, ·)` has rank < 2.
pub fn is_singular_point(p: &Pencil, x: &[Fe]) -> bool {
    let r0 = p.q0().polar().gram().mul_vec(x);
    let r1 = p.q1().polar().gram().mul_vec(x);
    Matrix::from_rows(p.field(), p.n(), &[r0, r1]).rank() < 2
}

/// First point of `P(span(basis))` (scan order) where all forms vanish.
fn first_common_zero(p: &Pencil, basis: &[Vec<Fe>]) -> Option<Vec<Fe>> {
    let f = p.field();
    let d = basis.len();
    let total = projective_size(f.size(), d);
    let mut i = 0u128;
    while i < total {
        let c = projective_point(f, d, i);
        let x = combine(f, basis, &c);
        if p.q0().eval(&x).is_zero() && p.q1().eval(&x).is_zero() {
            return Some(x);
        }
        i += 1;
    }
    None
}

/// Singular points of `X` over the field of `p`.
///
/// A point is singular exactly when it lies in the radical of some `b_u`,
/// so the scan runs over `u ∈ P^1` and then over `P(rad b_u)`.
/// Returns one witness per member `u` that has one.
pub fn singular_points(p: &Pencil, exec: Exec) -> Vec<Vec<Fe>> {
    let f = p.field();
    let line = projective_size(f.size(), 2) as u64;
    exec::filter_map_range(exec, line, |i| {
        let u = projective_point(f, 2, i as u128);
        let rad = p.polar_member(u[0], u[1]).radical_basis();
        first_common_zero(p, &rad)
    })
}

/// `true` when no singular point of `X` exists over extensions of degree `1..=max_ext_degree`.
pub fn smoothness_oracle(p: &Pencil, max_ext_degree: u32) -> Result<bool> {
    smoothness_oracle_with(p, max_ext_degree, Exec::default())
}

pub fn smoothness_oracle_with(p: &Pencil, max_ext_degree: u32, exec: Exec) -> Result<bool> {
    for j in 1..=max_ext_degree {
        let (_, e) = p.field().extension(j)?;
        if !singular_points(&p.embed(&e), exec).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of irreducible factors of `Δ` over its field, counting a root at `[0:1]`.
pub fn factor_count(delta: &BinaryForm) -> Result<usize> {
    let f = delta.dehomogenize();
    let missing = usize::from(f.degree().unwrap_or(0) < delta.degree());
    let finite = match f.degree() {
        Some(d) if d >= 1 => f.factor()?.len(),
        _ => 0,
    };
    Ok(finite + missing)
}

/// Degree of the smallest extension over which `Δ` splits into linear factors.
pub fn splitting_degree(delta: &BinaryForm) -> Result<u32> {
    let f = delta.dehomogenize();
    let mut acc = 1u32;
    if f.degree().is_some_and(|d| d >= 1) {
        for (g, _) in f.factor()? {
            let d = g.degree().unwrap_or(1) as u32;
            acc = acc / gcd_u32(acc, d) * d;
        }
    }
    Ok(acc)
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPlane {
    /// Coefficients of `l0 = Σ sqrt(a_{2i}) x_i` on the `w` coordinates.
    pub l0: Vec<Fe>,
    /// Coefficients of `l1 = Σ sqrt(a_{2i+1}) x_i`.
    pub l1: Vec<Fe>,
    /// Basis of `Π = {l0 = l1 = 0} ⊂ W`, as vectors of `E`.
    pub basis: Vec<Vec<Fe>>,
}

/// The plane `Π ⊂ P(W)` cut out by `l0, l1`; it lies in `X` and has dimension `m - 2`.
pub fn canonical_plane(p: &Pencil) -> Result<CanonicalPlane> {
    let m = p.m();
    if m < 2 {
        return Err(Error::PlaneNeedsLargerM(m));
    }
    let f = p.field();
    let nf = extract_normal_form(p)?;
    let l0: Vec<Fe> = (0..=m).map(|i| f.sqrt(nf.a[2 * i])).collect();
    let l1: Vec<Fe> = (0..=m).map(|i| f.sqrt(nf.a[2 * i + 1])).collect();
    let sys = Matrix::from_rows(f, m + 1, &[l0.clone(), l1.clone()]);
    let basis = sys.nullspace().iter().map(|c| combine(f, &nf.basis.w, c)).collect();
    Ok(CanonicalPlane { l0, l1, basis })
}

#[derive(Clone, Debug)]
pub struct QuasiSplit {
    /// Smallest `j` such that the class of `r` dies over GF(q^j).
    pub degree: u32,
    pub field: Gf,
    /// `s` with `℘(s) ≡ r` modulo constants, as power-basis coefficients over `field`.
    pub s: AlgebraElement,
}

pub const QUASI_SPLIT_MAX_FIELD_DEGREE: u32 = 32;

/// Scans `j = 1, 2, …` for the first extension where `X` becomes quasi-split.
pub fn quasi_split_over(p: &Pencil) -> Result<QuasiSplit> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    let k = p.field().degree();
    let mut j = 1;
    while k * j <= QUASI_SPLIT_MAX_FIELD_DEGREE {
        let (big, e) = p.field().extension(j)?;
        let q = p.embed(&e);
        if let Ok((rebased, _)) = q.ensure_an_nonzero() {
            let nf = extract_normal_form(&rebased)?;
            let r = r_invariant(&nf)?;
            if let Some((s, _)) = r.algebra.solve_artin_schreier(&r.value)? {
                return Ok(QuasiSplit { degree: j, field: big, s });
            }
        }
        j += 1;
    }
    Err(Error::UnsupportedDegree(k * j))
}

/// A linear subspace of `E`, kept with its canonical RREF key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub basis: Vec<Vec<Fe>>,
    pub key: Vec<Vec<Fe>>,
}

impl Subspace {
    pub fn new(f: Gf, basis: Vec<Vec<Fe>>) -> Subspace {
        let dim = basis.first().map_or(0, |b| b.len());
        let key = span_key(f, dim, &basis);
        Subspace { basis, key }
    }

    pub fn dim(&self) -> usize {
        self.key.len()
    }

    pub fn image(&self, f: Gf, g: &Matrix) -> Subspace {
        Subspace::new(f, self.basis.iter().map(|b| g.mul_vec(b)).collect())
    }

    /// Vector-space dimension of the intersection.
    pub fn intersection_dim(&self, other: &Subspace, f: Gf) -> usize {
        let n = self.basis[0].len();
        let sum: Vec<Vec<Fe>> = self.key.iter().chain(other.key.iter()).cloned().collect();
        self.dim() + other.dim() - Matrix::from_rows(f, n, &sum).rank()
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub field: Gf,
    /// `Λ_∅`: the span of the `v` in an `r = 0` Kronecker basis.
    pub base: Subspace,
    pub basis: KroneckerBasis,
    /// All images of `Λ_∅` under `Aut(q0, q1)`, without repeats.
    pub all: Vec<Subspace>,
}

/// The maximal linear subspaces of `X` over the target of `e`.
pub fn enumerate_generators(p: &Pencil, e: &Embedding) -> Result<GeneratorSet> {
    if !p.is_regular() {
        return Err(Error::NotRegular);
    }
    let big = p.embed(e);
    let f = big.field();
    let m = big.m();
    let (rebased, _) = big.ensure_an_nonzero()?;
    let nf = extract_normal_form(&rebased)?;
    let alg = algebra_of(&nf)?;
    let r = r_invariant(&nf)?;
    let Some((s, _)) = alg.solve_artin_schreier(&r.value)? else {
        let qs = quasi_split_over(&big)?;
        return Err(Error::NotQuasiSplit { extension_degree: qs.degree });
    };
    let (_, phi) = kronecker_phi(&alg, &s, m)?;
    let b = nf.basis.matrix(f).mul(&phi);
    let cols = b.columns();
    let split_basis = KroneckerBasis { w: cols[..=m].to_vec(), v: cols[m + 1..].to_vec() };
    let check = read_normal_form(&rebased, &split_basis)?;
    if check.r.iter().any(|x| !x.is_zero()) {
        return Err(Error::Internal("split basis has nonzero r".into()));
    }
    let base = Subspace::new(f, split_basis.v.clone());
    if !big.q0().is_totally_singular(&base.basis)? || !big.q1().is_totally_singular(&base.basis)? {
        return Err(Error::Internal("base generator is not totally singular".into()));
    }
    let mut all: Vec<Subspace> = Vec::new();
    for a in automorphism_group(&big)? {
        let img = base.image(f, &a.matrix);
        if !all.iter().any(|x| x.key == img.key) {
            all.push(img);
        }
    }
    Ok(GeneratorSet { field: f, base, basis: split_basis, all })
}
