//! The étale algebra `A = k[T]/(f)` attached to a separable `f`.
//!
//! Elements are stored in the power basis `1, t, …, t^(n-1)`. The d-basis
//! `d_i = a_{i+1} + a_{i+2} t + … + a_n t^(n-1-i)` is built from the raw
//! (not normalized) coefficients of `f`. Cosets of `k + ℘(A)`, where
//! `℘(s) = s² + s`, are handled as GF(2)-linear algebra on the bit expansion
//! of the coefficients.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Fe, Gf};
use crate::linalg::Matrix;
use crate::poly::{ext_gcd, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    tag: u64,
    coeffs: Vec<Fe>,
}

impl AlgebraElement {
    /// Power-basis coordinates.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

struct CosetData {
    /// RREF rows spanning `k + ℘(A)` over GF(2), with pivot columns.
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
    /// Columns: `℘` of each GF(2)-basis element of `A`, then each basis element of `k`.
    solver: Matrix,
}

pub struct EtaleAlgebra {
    field: Gf,
    f: Polynomial,
    monic: Polynomial,
    n: usize,
    tag: u64,
    factors: Vec<Polynomial>,
    idempotents: Vec<AlgebraElement>,
    d_basis: Vec<AlgebraElement>,
    d_inverse: Matrix,
    fprime_inv: AlgebraElement,
    trace_powers: Vec<Fe>,
    coset: OnceLock<CosetData>,
}

impl std::fmt::Debug for EtaleAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EtaleAlgebra").field("field", &self.field).field("f", &self.f).finish()
    }
}

impl Clone for EtaleAlgebra {
    fn clone(&self) -> Self {
        EtaleAlgebra::new(&self.f).expect("already validated")
    }
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl EtaleAlgebra {
    pub fn new(f: &Polynomial) -> Result<EtaleAlgebra> {
        let n = match f.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            Some(d) => d,
        };
        if !f.is_separable()? {
            return Err(Error::Inseparable);
        }
        let field = f.field();
        let monic = f.monic()?;
        let mut h = DefaultHasher::new();
        field.hash(&mut h);
        f.coeffs().hash(&mut h);
        let tag = h.finish();
        let elem = |p: &Polynomial| {
            let r = p.rem(&monic).expect("nonzero modulus");
            AlgebraElement { tag, coeffs: (0..n).map(|i| r.coeff(i)).collect() }
        };

        let factors: Vec<Polynomial> = monic.factor()?.into_iter().map(|(g, _)| g).collect();
        let mut idempotents = Vec::with_capacity(factors.len());
        for g in &factors {
            let co = monic.divrem(g)?.0;
            let (_, s, _) = ext_gcd(&co, g)?;
            idempotents.push(elem(&s.mul(&co)));
        }

        let d_basis: Vec<AlgebraElement> = (0..n)
            .map(|i| elem(&Polynomial::new(field, (i + 1..=n).map(|j| f.coeff(j)).collect())))
            .collect();
        let dmat = Matrix::from_columns(field, n, &d_basis.iter().map(|d| d.coeffs.clone()).collect::<Vec<_>>());
        let d_inverse = dmat.inverse().ok_or(Error::Internal("d-basis is not a basis".into()))?;

        let (_, s, _) = ext_gcd(&f.derivative(), &monic)?;
        let fprime_inv = elem(&s);

        let mut alg = EtaleAlgebra {
            field,
            f: f.clone(),
            monic,
            n,
            tag,
            factors,
            idempotents,
            d_basis,
            d_inverse,
            fprime_inv,
            trace_powers: Vec::new(),
            coset: OnceLock::new(),
        };
        alg.trace_powers = (0..n)
            .map(|j| {
                let tj = alg.t_power(j);
                alg.trace_by_matrix(&tj)
            })
            .collect();
        Ok(alg)
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.f
    }

    /// Coefficient `a_i` of `f`, zero outside `0..=n`.
    pub fn a(&self, i: isize) -> Fe {
        if i < 0 {
            Fe::ZERO
        } else {
            self.f.coeff(i as usize)
        }
    }

    pub fn factors(&self) -> &[Polynomial] {
        &self.factors
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.tag == self.tag && x.coeffs.len() == self.n {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn element(&self, coeffs: Vec<Fe>) -> Result<AlgebraElement> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|c| !self.field.contains(**c)) {
            return Err(Error::NotInField(bad.0));
        }
        Ok(AlgebraElement { tag: self.tag, coeffs })
    }

    pub fn from_poly(&self, p: &Polynomial) -> Result<AlgebraElement> {
        if p.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let r = p.rem(&self.monic)?;
        Ok(AlgebraElement { tag: self.tag, coeffs: (0..self.n).map(|i| r.coeff(i)).collect() })
    }

    pub fn to_poly(&self, x: &AlgebraElement) -> Polynomial {
        Polynomial::new(self.field, x.coeffs.clone())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { tag: self.tag, coeffs: vec![Fe::ZERO; self.n] }
    }

    pub fn constant(&self, c: Fe) -> AlgebraElement {
        let mut x = self.zero();
        x.coeffs[0] = c;
        x
    }

    pub fn one(&self) -> AlgebraElement {
        self.constant(Fe::ONE)
    }

    pub fn t_power(&self, j: usize) -> AlgebraElement {
        self.from_poly(&Polynomial::monomial(self.field, Fe::ONE, j)).expect("same field")
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        let f = self.field;
        Ok(AlgebraElement { tag: self.tag, coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| f.add(a, b)).collect() })
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        self.from_poly(&self.to_poly(x).mul(&self.to_poly(y)))
    }

    pub fn scale(&self, c: Fe, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        let f = self.field;
        Ok(AlgebraElement { tag: self.tag, coeffs: x.coeffs.iter().map(|&a| f.mul(a, c)).collect() })
    }

    pub fn square(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.mul(x, x)
    }

    fn trace_by_matrix(&self, x: &AlgebraElement) -> Fe {
        let f = self.field;
        let mut acc = Fe::ZERO;
        for j in 0..self.n {
            let prod = self.mul(x, &self.t_power(j)).expect("same algebra");
            acc = f.add(acc, prod.coeffs[j]);
        }
        acc
    }

    /// `Tr_{A/k}`.
    pub fn trace(&self, x: &AlgebraElement) -> Result<Fe> {
        self.check(x)?;
        let f = self.field;
        Ok(x.coeffs.iter().zip(&self.trace_powers).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
    }

    pub fn d_basis(&self) -> &[AlgebraElement] {
        &self.d_basis
    }

    pub fn fprime_inverse(&self) -> &AlgebraElement {
        &self.fprime_inv
    }

    /// Coordinates in the d-basis, by solving the triangular change of basis.
    pub fn d_coordinates(&self, x: &AlgebraElement) -> Result<Vec<Fe>> {
        self.check(x)?;
        Ok(self.d_inverse.mul_vec(&x.coeffs))
    }

    pub fn from_d_coordinates(&self, s: &[Fe]) -> Result<AlgebraElement> {
        if s.len() > self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: s.len() });
        }
        let mut acc = self.zero();
        for (i, &c) in s.iter().enumerate() {
            acc = self.add(&acc, &self.scale(c, &self.d_basis[i])?)?;
        }
        Ok(acc)
    }

    /// Whether `Tr(d_i t^j / f'(t)) = δ_ij` for the given candidate basis.
    pub fn check_dual_basis(&self, d: &[AlgebraElement]) -> Result<bool> {
        if d.len() != self.n {
            return Ok(false);
        }
        for (i, di) in d.iter().enumerate() {
            let base = self.mul(di, &self.fprime_inv)?;
            for j in 0..self.n {
                let v = self.trace(&self.mul(&base, &self.t_power(j))?)?;
                if v != if i == j { Fe::ONE } else { Fe::ZERO } {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn dual_basis_check(&self) -> bool {
        self.check_dual_basis(&self.d_basis).unwrap_or(false)
    }

    /// d-coordinates of `(Σ s_j d_j)²`: `r_k = Σ_j s_j² a_{2j+1-k}`.
    pub fn square_in_d_basis(&self, s: &[Fe]) -> Vec<Fe> {
        let f = self.field;
        (0..self.n)
            .map(|k| {
                s.iter().enumerate().fold(Fe::ZERO, |acc, (j, &sj)| {
                    f.add(acc, f.mul(f.square(sj), self.a(2 * j as isize + 1 - k as isize)))
                })
            })
            .collect()
    }

    /// Primitive idempotents, one per irreducible factor of `f`, in factor order.
    pub fn idempotents(&self) -> &[AlgebraElement] {
        &self.idempotents
    }

    /// Index of the idempotent supported at the root `α` of `f`, if `T - α` is a factor.
    pub fn idempotent_for_root(&self, alpha: Fe) -> Option<usize> {
        self.factors
            .iter()
            .position(|g| g.degree() == Some(1) && g.coeff(0) == alpha)
    }

    /// All `2^l` idempotents, indexed by subsets of the primitive ones.
    pub fn all_idempotents(&self) -> Vec<AlgebraElement> {
        let l = self.idempotents.len();
        (0u64..1 << l)
            .map(|mask| {
                (0..l).filter(|i| mask >> i & 1 == 1).fold(self.zero(), |acc, i| {
                    self.add(&acc, &self.idempotents[i]).expect("same algebra")
                })
            })
            .collect()
    }

    /// `℘(s) = s² + s`.
    pub fn artin_schreier(&self, s: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&self.square(s)?, s)
    }

    fn bits(&self, x: &AlgebraElement) -> Vec<Fe> {
        let k = self.field.degree() as usize;
        let mut out = Vec::with_capacity(k * self.n);
        for c in &x.coeffs {
            for b in 0..k {
                out.push(Fe((c.0 >> b) & 1));
            }
        }
        out
    }

    fn element_from_bits(&self, bits: &[Fe]) -> AlgebraElement {
        let k = self.field.degree() as usize;
        let coeffs = (0..self.n)
            .map(|j| Fe((0..k).fold(0u64, |acc, b| acc | (bits[j * k + b].0 << b))))
            .collect();
        AlgebraElement { tag: self.tag, coeffs }
    }

    fn coset_data(&self) -> &CosetData {
        self.coset.get_or_init(|| {
            let k = self.field.degree() as usize;
            let dim = k * self.n;
            let two = Gf::gf2();
            let mut gens = Vec::with_capacity(dim + k);
            for j in 0..self.n {
                for b in 0..k {
                    let mut e = self.zero();
                    e.coeffs[j] = Fe(1 << b);
                    gens.push(self.bits(&self.artin_schreier(&e).expect("same algebra")));
                }
            }
            for b in 0..k {
                gens.push(self.bits(&self.constant(Fe(1 << b))));
            }
            let (r, pivots) = Matrix::from_rows(two, dim, &gens).rref();
            let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
            let solver = Matrix::from_columns(two, dim, &gens);
            CosetData { rows, pivots, solver }
        })
    }

    /// Canonical representative of `r` modulo `k + ℘(A)`, and whether the class is trivial.
    pub fn coset_reduce(&self, r: &AlgebraElement) -> Result<(AlgebraElement, bool)> {
        self.check(r)?;
        let data = self.coset_data();
        let mut v = self.bits(r);
        for (row, &p) in data.rows.iter().zip(&data.pivots) {
            if v[p].0 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    a.0 ^= b.0;
                }
            }
        }
        let rep = self.element_from_bits(&v);
        let trivial = rep.is_zero();
        Ok((rep, trivial))
    }

    /// Dimension over GF(2) of `A / (k + ℘(A))`.
    pub fn coset_space_dim(&self) -> usize {
        self.field.degree() as usize * self.n - self.coset_data().pivots.len()
    }

    /// Some `(s, c)` with `℘(s) + c = r`, `c ∈ k`, if the class of `r` is trivial.
    pub fn solve_artin_schreier(&self, r: &AlgebraElement) -> Result<Option<(AlgebraElement, Fe)>> {
        self.check(r)?;
        let k = self.field.degree() as usize;
        let dim = k * self.n;
        let Some(sol) = self.coset_data().solver.solve(&self.bits(r)) else {
            return Ok(None);
        };
        let s = self.element_from_bits(&sol[..dim]);
        let c = Fe((0..k).fold(0u64, |acc, b| acc | (sol[dim + b].0 << b)));
        Ok(Some((s, c)))
    }

    /// Whether `x - y ∈ k + ℘(A)`.
    pub fn same_class(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<bool> {
        Ok(self.coset_reduce(&self.add(x, y)?)?.1)
    }
}
