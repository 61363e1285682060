//! Finite fields GF(2^k) with bit-packed elements.
//!
//! An element is the integer whose bit `b` is the coefficient of `u^b` in the
//! power basis, where `u` is a root of the field modulus. Field handles are
//! small `Copy` values; arithmetic goes through the handle.

use std::fmt;

use crate::error::{Error, Result};

/// Default moduli (degree 1 to 16). They are primitive and compatible:
/// for `d | k`, `x^((2^k-1)/(2^d-1))` is a root of the degree-`d` entry
/// inside the degree-`k` field.
const DEFAULT_MODULI: [u64; 17] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1011011,
    0b10000011,
    0b100011101,
    0b1000010001,
    0b10001101111,
    0b100000000101,
    0b1000011101011,
    0b10000000011011,
    0b100000010101001,
    0b1000000000110101,
    0b10000000000101101,
];

pub const MAX_DEGREE: u32 = 32;

/// A field element in bit-packed power-basis form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(2^degree) = GF(2)[u]/(modulus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf {
    degree: u32,
    modulus: u64,
}

fn gf2_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn gf2_mulmod(a: u64, b: u64, m: u64) -> u64 {
    let d = gf2_degree(m) as u32;
    let top = 1u64 << d;
    let (mut a, mut b, mut r) = (a, b, 0u64);
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= m;
        }
    }
    r
}

fn gf2_rem(mut a: u64, m: u64) -> u64 {
    let dm = gf2_degree(m);
    while a != 0 && gf2_degree(a) >= dm {
        a ^= m << (gf2_degree(a) - dm);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a polynomial over GF(2) of degree `k`.
pub fn is_irreducible_gf2(m: u64, k: u32) -> bool {
    if k == 0 || gf2_degree(m) != k as i32 || k > MAX_DEGREE {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = 0b10u64;
    let frob = |times: u32| {
        let mut y = x;
        for _ in 0..times {
            y = gf2_mulmod(y, y, m);
        }
        y
    };
    if frob(k) != x {
        return false;
    }
    prime_divisors(k as u64)
        .into_iter()
        .all(|p| gf2_gcd(m, frob(k / p as u32) ^ x) == 1)
}

impl Gf {
    /// GF(2^k) with the default modulus; degrees above 16 use the smallest irreducible.
    pub fn new(k: u32) -> Result<Gf> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(k));
        }
        if (k as usize) < DEFAULT_MODULI.len() {
            return Ok(Gf { degree: k, modulus: DEFAULT_MODULI[k as usize] });
        }
        let base = 1u64 << k;
        (1..base)
            .step_by(2)
            .map(|low| base | low)
            .find(|&m| is_irreducible_gf2(m, k))
            .map(|modulus| Gf { degree: k, modulus })
            .ok_or(Error::UnsupportedDegree(k))
    }

    /// GF(2^k) with an explicit modulus, given as a bit mask including the leading bit.
    pub fn with_modulus(k: u32, modulus: u64) -> Result<Gf> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(k));
        }
        if !is_irreducible_gf2(modulus, k) {
            return Err(Error::ReducibleModulus(modulus));
        }
        Ok(Gf { degree: k, modulus })
    }

    pub fn gf2() -> Gf {
        Gf { degree: 1, modulus: 0b11 }
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn has_default_modulus(self) -> bool {
        (self.degree as usize) < DEFAULT_MODULI.len()
            && DEFAULT_MODULI[self.degree as usize] == self.modulus
    }

    pub fn size(self) -> u64 {
        1u64 << self.degree
    }

    pub fn contains(self, a: Fe) -> bool {
        a.0 < self.size()
    }

    pub fn element(self, v: u64) -> Result<Fe> {
        if v < self.size() {
            Ok(Fe(v))
        } else {
            Err(Error::NotInField(v))
        }
    }

    /// All elements in increasing integer order.
    pub fn elements(self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.size()).map(Fe)
    }

    /// The class of `u`, or 1 in GF(2).
    pub fn generator(self) -> Fe {
        if self.degree == 1 {
            Fe::ONE
        } else {
            Fe(2)
        }
    }

    #[inline]
    pub fn add(self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(self, a: Fe, b: Fe) -> Fe {
        if self.degree == 1 {
            return Fe(a.0 & b.0);
        }
        Fe(gf2_mulmod(a.0, b.0, self.modulus))
    }

    pub fn square(self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn div(self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique square root, `a^(2^(k-1))`.
    pub fn sqrt(self, a: Fe) -> Fe {
        let mut r = a;
        for _ in 1..self.degree {
            r = self.square(r);
        }
        r
    }

    /// Absolute trace to GF(2).
    pub fn trace(self, a: Fe) -> Fe {
        let mut acc = a;
        let mut cur = a;
        for _ in 1..self.degree {
            cur = self.square(cur);
            acc = self.add(acc, cur);
        }
        acc
    }

    /// GF(2^(k*j)) together with the embedding of this field into it.
    pub fn extension(self, j: u32) -> Result<(Gf, Embedding)> {
        let big = Gf::new(self.degree * j)?;
        let emb = Embedding::new(self, big)?;
        Ok((big, emb))
    }

    /// Evaluates a GF(2)-polynomial given as a bit mask at `a`.
    pub fn eval_gf2_poly(self, p: u64, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let d = gf2_degree(p);
        for i in (0..=d.max(0)).rev() {
            acc = self.mul(acc, a);
            if (p >> i) & 1 == 1 {
                acc = self.add(acc, Fe::ONE);
            }
        }
        acc
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.degree)
    }
}

/// An element tagged with its field, for context-checked arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub field: Gf,
    pub value: Fe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: Gf, value: u64) -> Result<Self> {
        Ok(FieldElement { field, value: field.element(value)? })
    }
}

pub fn arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = a.field;
    if !f.contains(a.value) {
        return Err(Error::NotInField(a.value.0));
    }
    if !f.contains(b.value) {
        return Err(Error::NotInField(b.value.0));
    }
    let value = match op {
        ArithOp::Add | ArithOp::Sub => f.add(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement { field: f, value })
}

/// A field embedding, stored as the images of the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    source: Gf,
    target: Gf,
    images: Vec<Fe>,
}

impl Embedding {
    pub fn identity(f: Gf) -> Embedding {
        let images = (0..f.degree).map(|b| Fe(1u64 << b)).collect();
        Embedding { source: f, target: f, images }
    }

    /// Sends the generator of `source` to a root of its modulus in `target`.
    ///
    /// Between default moduli the root is the norm-compatible power of the
    /// target generator, so embeddings compose along towers. Otherwise the
    /// smallest root is used.
    pub fn new(source: Gf, target: Gf) -> Result<Embedding> {
        if !target.degree.is_multiple_of(source.degree) {
            return Err(Error::NoEmbedding { from: source.degree, to: target.degree });
        }
        if source == target {
            return Ok(Embedding::identity(source));
        }
        let mut root = None;
        if source.has_default_modulus() && target.has_default_modulus() {
            let e = (target.size() - 1) / (source.size() - 1);
            let cand = target.pow(target.generator(), e);
            if target.eval_gf2_poly(source.modulus, cand).is_zero() {
                root = Some(cand);
            }
        }
        let root = match root {
            Some(r) => r,
            None => crate::poly::smallest_root_of_gf2_poly(source.modulus, target)
                .ok_or(Error::NoEmbedding { from: source.degree, to: target.degree })?,
        };
        let mut images = Vec::with_capacity(source.degree as usize);
        let mut cur = Fe::ONE;
        for _ in 0..source.degree {
            images.push(cur);
            cur = target.mul(cur, root);
        }
        Ok(Embedding { source, target, images })
    }

    pub fn source(&self) -> Gf {
        self.source
    }

    pub fn target(&self) -> Gf {
        self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.images.iter().enumerate().all(|(b, x)| x.0 == 1 << b)
    }

    pub fn apply(&self, a: Fe) -> Fe {
        let mut acc = 0u64;
        let mut bits = a.0;
        let mut b = 0;
        while bits != 0 {
            if bits & 1 == 1 {
                acc ^= self.images[b].0;
            }
            bits >>= 1;
            b += 1;
        }
        Fe(acc)
    }

    pub fn apply_all(&self, v: &[Fe]) -> Vec<Fe> {
        v.iter().map(|&a| self.apply(a)).collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Embedding) -> Result<Embedding> {
        if self.target != next.source {
            return Err(Error::FieldMismatch);
        }
        let images = self.images.iter().map(|&x| next.apply(x)).collect();
        Ok(Embedding { source: self.source, target: next.target, images })
    }

    /// Preimage of `a`, if it lies in the image.
    pub fn preimage(&self, a: Fe) -> Option<Fe> {
        let two = Gf::gf2();
        let k = self.source.degree as usize;
        let big = self.target.degree as usize;
        let cols: Vec<Vec<Fe>> = self
            .images
            .iter()
            .map(|x| (0..big).map(|b| Fe((x.0 >> b) & 1)).collect())
            .collect();
        let m = crate::linalg::Matrix::from_columns(two, big, &cols);
        let rhs: Vec<Fe> = (0..big).map(|b| Fe((a.0 >> b) & 1)).collect();
        let sol = m.solve(&rhs)?;
        Some(Fe((0..k).fold(0u64, |acc, b| acc | (sol[b].0 << b))))
    }
}
