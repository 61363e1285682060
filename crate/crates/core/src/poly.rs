//! Univariate polynomials and binary forms over GF(2^k).
//!
//! Factorization runs squarefree decomposition, distinct-degree splitting and
//! trace-based equal-degree splitting with a fixed random seed, so results
//! are reproducible. Factors come out sorted by degree, then by coefficient
//! vector read from the constant term upward.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Gf};

const FACTOR_SEED: u64 = 0x5eed_0f2a;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Gf,
    coeffs: Vec<Fe>,
}

impl Polynomial {
    /// Builds `Σ coeffs[i] T^i`, dropping trailing zeros.
    pub fn new(field: Gf, coeffs: Vec<Fe>) -> Polynomial {
        let mut p = Polynomial { field, coeffs };
        p.trim();
        p
    }

    pub fn from_u64(field: Gf, coeffs: &[u64]) -> Result<Polynomial> {
        let c = coeffs.iter().map(|&v| field.element(v)).collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(field, c))
    }

    pub fn zero(field: Gf) -> Polynomial {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: Gf) -> Polynomial {
        Polynomial::constant(field, Fe::ONE)
    }

    pub fn constant(field: Gf, c: Fe) -> Polynomial {
        Polynomial::new(field, vec![c])
    }

    /// `c T^d`.
    pub fn monomial(field: Gf, c: Fe, d: usize) -> Polynomial {
        let mut v = vec![Fe::ZERO; d + 1];
        v[d] = c;
        Polynomial::new(field, v)
    }

    /// The variable `T`.
    pub fn t(field: Gf) -> Polynomial {
        Polynomial::monomial(field, Fe::ONE, 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Polynomial::new(f, c)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Polynomial::new(f, c)
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        let f = self.field;
        Polynomial::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn divrem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check(d)?;
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let f = self.field;
        let inv = f.inv(d.leading())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.add(r[i - dd + j], f.mul(c, b));
            }
        }
        Ok((Polynomial::new(f, q), Polynomial::new(f, r)))
    }

    pub fn rem(&self, d: &Polynomial) -> Result<Polynomial> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.scale(self.field.inv(self.leading())?))
    }

    pub fn derivative(&self) -> Polynomial {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| if i % 2 == 1 { a } else { Fe::ZERO })
            .collect();
        Polynomial::new(self.field, c)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates after pushing coefficients through `e`.
    pub fn eval_embedded(&self, e: &Embedding, x: Fe) -> Fe {
        let g = e.target();
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| g.add(g.mul(acc, x), e.apply(c)))
    }

    pub fn embed(&self, e: &Embedding) -> Polynomial {
        assert_eq!(self.field, e.source(), "field mismatch");
        Polynomial::new(e.target(), e.apply_all(&self.coeffs))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Polynomial) -> Result<Polynomial> {
        let mut base = self.rem(m)?;
        let mut acc = Polynomial::one(self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root of a polynomial whose odd coefficients vanish.
    fn sqrt_even(&self) -> Polynomial {
        let f = self.field;
        let c = self.coeffs.iter().step_by(2).map(|&a| f.sqrt(a)).collect();
        Polynomial::new(f, c)
    }

    pub fn is_separable(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(gcd(self, &self.derivative())?.degree() == Some(0))
    }

    /// Monic irreducible factors with multiplicities.
    pub fn factor(&self) -> Result<Vec<(Polynomial, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
        let mut out = Vec::new();
        for (sf, mult) in squarefree(&self.monic()?)? {
            for (g, d) in distinct_degree(&sf)? {
                for h in equal_degree(&g, d, &mut rng)? {
                    out.push((h, mult));
                }
            }
        }
        out.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        Ok(out)
    }
}

/// Orders by degree, then by coefficients from `T^0` upward.
pub fn canonical_cmp(a: &Polynomial, b: &Polynomial) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().cmp(b.coeffs.iter()))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.0 == 1 && i > 0 { String::new() } else { format!("[{}]", c.0) };
            match i {
                0 => write!(f, "{}", if c.0 == 1 { "1".to_string() } else { coeff })?,
                1 => write!(f, "{coeff}T")?,
                _ => write!(f, "{coeff}T^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    x.monic()
}

/// Returns `(g, s, t)` with `g = s a + t b` monic.
pub fn ext_gcd(a: &Polynomial, b: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let f = a.field;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Polynomial::one(f), Polynomial::zero(f));
    let (mut t0, mut t1) = (Polynomial::zero(f), Polynomial::one(f));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = s0.add(&q.mul(&s1));
        let t = t0.add(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let inv = f.inv(r0.leading())?;
    Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
}

fn squarefree(p: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let dp = p.derivative();
    if dp.is_zero() {
        for (g, m) in squarefree(&p.sqrt_even())? {
            out.push((g, 2 * m));
        }
        return Ok(out);
    }
    let mut c = gcd(p, &dp)?;
    let mut w = p.divrem(&c)?.0;
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = gcd(&w, &c)?;
        let z = w.divrem(&y)?.0;
        if z.degree() != Some(0) {
            out.push((z.monic()?, i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w)?.0;
    }
    if c.degree() != Some(0) {
        for (g, m) in squarefree(&c.monic()?.sqrt_even())? {
            out.push((g, 2 * m));
        }
    }
    Ok(out)
}

/// `x^(q^d) mod m` by repeated squaring.
fn frobenius_power(x: &Polynomial, times: u32, m: &Polynomial) -> Result<Polynomial> {
    let mut y = x.rem(m)?;
    for _ in 0..times {
        y = y.mul(&y).rem(m)?;
    }
    Ok(y)
}

fn distinct_degree(p: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let f = p.field;
    let k = f.degree();
    let mut out = Vec::new();
    let mut rest = p.clone();
    let t = Polynomial::t(f);
    let mut h = t.rem(&rest)?;
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((rest.monic()?, deg));
            break;
        }
        h = frobenius_power(&h, k, &rest)?;
        let g = gcd(&rest, &h.add(&t))?;
        if g.degree() != Some(0) {
            out.push((g.clone(), d));
            rest = rest.divrem(&g)?.0;
            h = h.rem(&rest)?;
        }
    }
    Ok(out)
}

fn equal_degree(p: &Polynomial, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Polynomial>> {
    let f = p.field;
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == d {
        return Ok(vec![p.monic()?]);
    }
    let bits = f.degree() * d as u32;
    loop {
        let a = Polynomial::new(f, (0..n).map(|_| Fe(rng.gen_range(0..f.size()))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut acc = a.rem(p)?;
        let mut cur = acc.clone();
        for _ in 1..bits {
            cur = cur.mul(&cur).rem(p)?;
            acc = acc.add(&cur);
        }
        if acc.is_zero() {
            continue;
        }
        let g = gcd(p, &acc)?;
        let gd = g.degree().unwrap();
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&p.divrem(&g)?.0, d, rng)?);
            return Ok(out);
        }
    }
}

/// Roots of `p` inside the target of `e`, in increasing order, found by scanning.
pub fn roots_in(p: &Polynomial, e: &Embedding) -> Result<Vec<Fe>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.field != e.source() {
        return Err(Error::FieldMismatch);
    }
    let big = e.target();
    if big.degree() > 20 {
        let q = p.embed(e);
        let mut roots: Vec<Fe> = q
            .factor()?
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| g.coeff(0))
            .collect();
        roots.sort();
        return Ok(roots);
    }
    let q = p.embed(e);
    Ok(crate::exec::filter_range(crate::exec::Exec::default(), big.size(), |x| {
        q.eval(Fe(x)).is_zero()
    })
    .into_iter()
    .map(Fe)
    .collect())
}

/// Smallest root in `target` of a GF(2)-polynomial given as a bit mask.
pub(crate) fn smallest_root_of_gf2_poly(m: u64, target: Gf) -> Option<Fe> {
    let coeffs = (0..64).map(|b| Fe((m >> b) & 1)).collect();
    let p = Polynomial::new(target, coeffs);
    if target.degree() <= 20 {
        return target.elements().find(|&x| p.eval(x).is_zero());
    }
    p.factor()
        .ok()?
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| g.coeff(0))
        .min()
}

/// A binary form `Σ c_i t0^(d-i) t1^i` of fixed degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: Gf,
    coeffs: Vec<Fe>,
}

/// A point of the projective line, normalized so the first nonzero coordinate is 1.
pub type ProjRoot = (Fe, Fe);

impl BinaryForm {
    pub fn new(field: Gf, coeffs: Vec<Fe>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "binary form needs a degree");
        BinaryForm { field, coeffs }
    }

    pub fn zero(field: Gf, degree: usize) -> BinaryForm {
        BinaryForm { field, coeffs: vec![Fe::ZERO; degree + 1] }
    }

    /// `a t0 + b t1`.
    pub fn linear(field: Gf, a: Fe, b: Fe) -> BinaryForm {
        BinaryForm { field, coeffs: vec![a, b] }
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        let f = self.field;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        BinaryForm { field: f, coeffs: c }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field;
        let mut c = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        BinaryForm { field: f, coeffs: c }
    }

    pub fn scale(&self, s: Fe) -> BinaryForm {
        let f = self.field;
        BinaryForm { field: f, coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn eval(&self, t0: Fe, t1: Fe) -> Fe {
        let f = self.field;
        let d = self.degree() as u64;
        self.coeffs.iter().enumerate().fold(Fe::ZERO, |acc, (i, &c)| {
            let term = f.mul(c, f.mul(f.pow(t0, d - i as u64), f.pow(t1, i as u64)));
            f.add(acc, term)
        })
    }

    /// `F(1, T) = Σ c_i T^i`.
    pub fn dehomogenize(&self) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.clone())
    }

    pub fn embed(&self, e: &Embedding) -> BinaryForm {
        assert_eq!(self.field, e.source(), "field mismatch");
        BinaryForm { field: e.target(), coeffs: e.apply_all(&self.coeffs) }
    }

    /// Nonzero, squarefree affine part, and `t0^2` does not divide it.
    pub fn is_separable_form(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.degree();
        if d >= 1 && self.coeffs[d].is_zero() && self.coeffs[d - 1].is_zero() {
            return false;
        }
        let f = self.dehomogenize();
        match f.degree() {
            Some(0) => true,
            _ => f.is_separable().unwrap_or(false),
        }
    }

    /// `F(g00 t0 + g01 t1, g10 t0 + g11 t1)`.
    pub fn substitute(&self, g: &crate::linalg::Matrix) -> BinaryForm {
        assert_eq!((g.rows(), g.cols()), (2, 2), "need a 2x2 matrix");
        let f = self.field;
        let x = BinaryForm::linear(f, g.get(0, 0), g.get(0, 1));
        let y = BinaryForm::linear(f, g.get(1, 0), g.get(1, 1));
        let d = self.degree();
        let one = BinaryForm::new(f, vec![Fe::ONE]);
        let mut xp = vec![one.clone()];
        let mut yp = vec![one];
        for i in 1..=d {
            xp.push(xp[i - 1].mul(&x));
            yp.push(yp[i - 1].mul(&y));
        }
        let mut acc = BinaryForm::zero(f, d);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&xp[d - i].mul(&yp[i]).scale(c));
            }
        }
        acc
    }

    /// Roots in the target of `e` as normalized projective points: `[0:1]` first, then `[1:α]` by `α`.
    pub fn projective_roots(&self, e: &Embedding) -> Result<Vec<ProjRoot>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.coeffs[self.degree()].is_zero() {
            out.push((Fe::ZERO, Fe::ONE));
        }
        let aff = self.dehomogenize();
        if aff.degree().unwrap_or(0) > 0 {
            out.extend(roots_in(&aff, e)?.into_iter().map(|a| (Fe::ONE, a)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: Gf, c: &[u64]) -> Polynomial {
        Polynomial::from_u64(f, c).unwrap()
    }

    #[test]
    fn factor_small_cubic() {
        let f = Gf::gf2();
        let fac = p(f, &[0, 1, 1, 1]).factor().unwrap();
        assert_eq!(fac, vec![(p(f, &[0, 1]), 1), (p(f, &[1, 1, 1]), 1)]);
    }

    #[test]
    fn roots_in_gf4() {
        let f = Gf::gf2();
        let (big, e) = f.extension(2).unwrap();
        assert_eq!(big.degree(), 2);
        assert_eq!(roots_in(&p(f, &[1, 1, 1]), &e).unwrap(), vec![Fe(2), Fe(3)]);
    }

    #[test]
    fn factor_with_squares_and_products() {
        let f = Gf::new(2).unwrap();
        let a = p(f, &[2, 1]);
        let b = p(f, &[1, 1, 1, 0, 1]);
        let b_irr = b.factor().unwrap();
        let prod = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fac = prod.factor().unwrap();
        let mut rebuilt = Polynomial::one(f);
        for (g, m) in &fac {
            for _ in 0..*m {
                rebuilt = rebuilt.mul(g);
            }
        }
        assert_eq!(rebuilt, prod.monic().unwrap());
        assert!(fac.contains(&(a.clone(), 3)));
        assert_eq!(fac.len(), 1 + b_irr.len());
    }

    #[test]
    fn gcd_errors_and_ext_gcd() {
        let f = Gf::new(3).unwrap();
        assert_eq!(gcd(&Polynomial::zero(f), &Polynomial::zero(f)), Err(Error::BothZero));
        let a = p(f, &[1, 0, 1, 1]);
        let b = p(f, &[3, 1, 1]);
        let (g, s, t) = ext_gcd(&a, &b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, gcd(&a, &b).unwrap());
    }

    #[test]
    fn separable_forms() {
        let f = Gf::gf2();
        let bf = |c: &[u64]| BinaryForm::new(f, c.iter().map(|&x| Fe(x)).collect());
        assert!(bf(&[0, 1, 1, 1]).is_separable_form());
        assert!(!bf(&[1, 0, 1, 0]).is_separable_form());
        assert!(!bf(&[1, 1, 0, 0]).is_separable_form());
        assert!(bf(&[0, 1, 1, 0]).is_separable_form());
        assert!(!bf(&[0, 0, 0, 0]).is_separable_form());
    }

    #[test]
    fn substitution_by_swap_reverses() {
        let f = Gf::new(2).unwrap();
        let form = BinaryForm::new(f, vec![Fe(1), Fe(2), Fe(0), Fe(3)]);
        let swap = crate::linalg::Matrix::from_rows(f, 2, &[vec![Fe(0), Fe(1)], vec![Fe(1), Fe(0)]]);
        let s = form.substitute(&swap);
        assert_eq!(s.coeffs(), &[Fe(3), Fe(0), Fe(2), Fe(1)]);
    }

    #[test]
    fn display_is_readable() {
        let f = Gf::new(2).unwrap();
        assert_eq!(p(f, &[1, 0, 2, 1]).to_string(), "T^3 + [2]T^2 + 1");
    }
}
