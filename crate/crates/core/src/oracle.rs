//! Exhaustive reference computations used to cross-check the structured algorithms.

use std::collections::HashMap;
use std::hash::Hash;

use crate::algebra::{AlgebraElement, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{Embedding, Fe, Gf};
use crate::geometry::{is_singular_point, points_on_x_with, Subspace};
use crate::linalg::{span_key, Matrix};
use crate::pencil::Pencil;
use crate::quadform::{AlternatingForm, QuadraticForm};

/// The explicit ternary half-discriminant `a11 a23² + a22 a13² + a33 a12² + a12 a23 a13`.
pub fn ternary_half_disc(q: &QuadraticForm) -> Result<Fe> {
    if q.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: q.dim() });
    }
    let f = q.field();
    let c = |i, j| q.coeff(i, j);
    let terms = [
        f.mul(c(0, 0), f.square(c(1, 2))),
        f.mul(c(1, 1), f.square(c(0, 2))),
        f.mul(c(2, 2), f.square(c(0, 1))),
        f.mul(c(0, 1), f.mul(c(1, 2), c(0, 2))),
    ];
    Ok(terms.iter().fold(Fe::ZERO, |acc, &t| f.add(acc, t)))
}

/// Sum over perfect matchings of the products of matched entries.
pub fn pfaffian_by_matchings(b: &AlternatingForm) -> Result<Fe> {
    let n = b.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    fn go(f: Gf, g: &Matrix, rest: &[usize]) -> Fe {
        let Some((&first, tail)) = rest.split_first() else {
            return Fe::ONE;
        };
        let mut acc = Fe::ZERO;
        for (k, &j) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(k);
            acc = f.add(acc, f.mul(g.get(first, j), go(f, g, &remaining)));
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(go(b.field(), b.gram(), &idx))
}

fn decode_matrix(f: Gf, n: usize, mut idx: u64) -> Matrix {
    let q = f.size();
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        data.push(Fe(idx % q));
        idx /= q;
    }
    Matrix::from_fn(f, n, n, |i, j| data[i * n + j])
}

fn power_count(q: u64, k: usize) -> Result<u64> {
    q.checked_pow(k as u32).filter(|&t| (t as u128) <= crate::geometry::SCAN_LIMIT).ok_or(Error::ScanTooLarge {
        points: (q as u128).saturating_pow(k as u32),
    })
}

/// All of `GL_n(F)` by exhaustive filtering.
pub fn gl_matrices(f: Gf, n: usize, exec: Exec) -> Result<Vec<Matrix>> {
    let total = power_count(f.size(), n * n)?;
    Ok(exec::filter_map_range(exec, total, |i| {
        let g = decode_matrix(f, n, i);
        g.is_invertible().then_some(g)
    }))
}

/// `{g ∈ GL(E) : q0∘g = q0, q1∘g = q1}` by exhaustive search.
pub fn stabilizer(p: &Pencil, exec: Exec) -> Result<Vec<Matrix>> {
    let f = p.field();
    let n = p.n();
    let total = power_count(f.size(), n * n)?;
    Ok(exec::filter_map_range(exec, total, |i| {
        let g = decode_matrix(f, n, i);
        (p.q0().pullback(&g) == *p.q0() && p.q1().pullback(&g) == *p.q1() && g.is_invertible()).then_some(g)
    }))
}

/// Every quadratic form of dimension `n` over `f`, in coefficient-index order.
pub fn all_forms(f: Gf, n: usize) -> Result<Vec<QuadraticForm>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let total = power_count(f.size(), slots.len())?;
    let q = f.size();
    Ok((0..total)
        .map(|mut idx| {
            let mut form = QuadraticForm::zero(f, n);
            for &(i, j) in &slots {
                form.set(i, j, Fe(idx % q));
                idx /= q;
            }
            form
        })
        .collect())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Orbit labels of `items` under `group`: each item gets the smallest index in its orbit.
///
/// Images falling outside `items` are an error, since the set must be stable.
pub fn orbit_partition<T, G, A>(items: &[T], group: &[G], act: A, exec: Exec) -> Result<Vec<usize>>
where
    T: Hash + Eq + Sync,
    G: Sync,
    A: Fn(&G, &T) -> T + Sync + Send,
{
    let index: HashMap<&T, usize> = items.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let images: Vec<Option<Vec<usize>>> = exec::map_slice(exec, items, |t| {
        group.iter().map(|g| index.get(&act(g, t)).copied()).collect()
    });
    let mut uf = UnionFind::new(items.len());
    for (i, imgs) in images.into_iter().enumerate() {
        for j in imgs.ok_or(Error::Internal("item set is not stable under the group".into()))? {
            uf.union(i, j);
        }
    }
    Ok((0..items.len()).map(|i| uf.find(i)).collect())
}

/// Labels from an equivalence predicate, each item labelled by the first equivalent item.
pub fn partition_by<T, E>(items: &[T], mut equiv: E) -> Result<Vec<usize>>
where
    E: FnMut(&T, &T) -> Result<bool>,
{
    let mut reps: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(items.len());
    for (i, t) in items.iter().enumerate() {
        let mut found = None;
        for &r in &reps {
            if equiv(&items[r], t)? {
                found = Some(r);
                break;
            }
        }
        labels.push(found.unwrap_or_else(|| {
            reps.push(i);
            i
        }));
    }
    Ok(labels)
}

/// Whether two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ab: HashMap<usize, usize> = HashMap::new();
    let mut ba: HashMap<usize, usize> = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}

/// Points of `X` over the target of `e` where the polar rows are dependent.
pub fn naive_singular_points(p: &Pencil, e: &Embedding, exec: Exec) -> Result<Vec<Vec<Fe>>> {
    let big = p.embed(e);
    let pts = points_on_x_with(p, e, exec)?;
    Ok(pts.into_iter().filter(|x| is_singular_point(&big, x)).collect())
}

/// Lines of `X` over the target of `e`, from pairs of points with vanishing polar pairings.
pub fn lines_on_x(p: &Pencil, e: &Embedding, exec: Exec) -> Result<Vec<Subspace>> {
    let big = p.embed(e);
    let f = big.field();
    let n = big.n();
    let pts = points_on_x_with(p, e, exec)?;
    let b0 = big.q0().polar();
    let b1 = big.q1().polar();
    let found: Vec<Vec<Vec<Vec<Fe>>>> = exec::map_range(exec, pts.len() as u64, |i| {
        let i = i as usize;
        let x = &pts[i];
        pts[i + 1..]
            .iter()
            .filter(|y| b0.pair(x, y).is_zero() && b1.pair(x, y).is_zero())
            .map(|y| span_key(f, n, &[x.clone(), y.clone()]))
            .collect()
    });
    let mut keys: Vec<Vec<Vec<Fe>>> = found.into_iter().flatten().collect();
    keys.sort();
    keys.dedup();
    Ok(keys.into_iter().map(|k| Subspace::new(f, k)).collect())
}

/// Every element of `A`, for small algebras.
pub fn all_elements(alg: &EtaleAlgebra) -> Result<Vec<AlgebraElement>> {
    let f = alg.field();
    let d = alg.dim();
    let total = power_count(f.size(), d)?;
    let q = f.size();
    (0..total)
        .map(|mut idx| {
            let coeffs = (0..d)
                .map(|_| {
                    let v = idx % q;
                    idx /= q;
                    Fe(v)
                })
                .collect();
            alg.element(coeffs)
        })
        .collect()
}

/// Membership of `r` in `k + ℘(A)` by listing `℘(s) + c` for all `s` and `c`.
pub fn coset_contains(alg: &EtaleAlgebra, r: &AlgebraElement) -> Result<bool> {
    for s in all_elements(alg)? {
        let ps = alg.artin_schreier(&s)?;
        for c in alg.field().elements() {
            if alg.add(&ps, &alg.constant(c))? == *r {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_over_gf2_has_168_elements() {
        let f = Gf::gf2();
        assert_eq!(gl_matrices(f, 3, Exec::default()).unwrap().len(), 168);
        assert_eq!(gl_matrices(f, 2, Exec::Sequential).unwrap().len(), 6);
    }

    #[test]
    fn partitions_compare_up_to_relabeling() {
        assert!(same_partition(&[0, 0, 2], &[5, 5, 1]));
        assert!(!same_partition(&[0, 0, 2], &[5, 1, 1]));
        assert!(!same_partition(&[0, 1, 2], &[0, 0, 2]));
    }

    #[test]
    fn orbits_of_gf2_vectors_under_gl2() {
        let f = Gf::gf2();
        let g = gl_matrices(f, 2, Exec::Sequential).unwrap();
        let vecs: Vec<Vec<Fe>> = (0..4).map(|i| vec![Fe(i & 1), Fe(i >> 1)]).collect();
        let labels = orbit_partition(&vecs, &g, |m, v| m.mul_vec(v), Exec::Sequential).unwrap();
        assert_eq!(labels, vec![0, 1, 1, 1]);
    }

    #[test]
    fn matchings_pfaffian_of_four() {
        let f = Gf::new(2).unwrap();
        let rows: Vec<Vec<Fe>> = vec![
            vec![Fe(0), Fe(1), Fe(2), Fe(3)],
            vec![Fe(1), Fe(0), Fe(1), Fe(2)],
            vec![Fe(2), Fe(1), Fe(0), Fe(1)],
            vec![Fe(3), Fe(2), Fe(1), Fe(0)],
        ];
        let b = AlternatingForm::new(Matrix::from_rows(f, 4, &rows)).unwrap();
        assert_eq!(pfaffian_by_matchings(&b).unwrap(), b.pfaffian().unwrap());
    }
}
