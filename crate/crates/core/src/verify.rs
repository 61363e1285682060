//! Self-checking harness: each check compares a structured computation
//! against an exhaustive or independent one and reports exact agreement.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use crate::algebra::EtaleAlgebra;
use crate::autos::{automorphism_group, preserves_pair, reflections};
use crate::error::Result;
use crate::exec::{self, Exec};
use crate::field::{Embedding, Fe, Gf};
use crate::geometry::{
    canonical_plane, enumerate_generators, factor_count, points_on_x_with, quasi_split_over, smoothness_oracle_with,
    splitting_degree, Subspace,
};
use crate::invariants::{algebra_of, arf_invariant, r_invariant, r_invariant_of, transformation_law_check,
    transformation_law_check_in_basis};
use crate::lattice::{build_lattice, intersection_matrix};
use crate::linalg::{span_key, Matrix};
use crate::normalform::{extract_normal_form, realize, satisfies_basic_equations};
use crate::oracle;
use crate::pencil::Pencil;
use crate::quadform::half_disc;
use crate::random;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scale {
    #[default]
    Small,
    Full,
}

impl Scale {
    fn pick(self, small: usize, full: usize) -> usize {
        match self {
            Scale::Small => small,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub tag: &'static str,
    pub name: &'static str,
    pub checked: usize,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

/// Outcome of a check body: number of cases and the first mismatch, if any.
struct Tally {
    checked: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failure: None, notes: Vec::new() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn finish(tag: &'static str, name: &'static str, start: Instant, body: Result<Tally>) -> CheckResult {
    let elapsed = start.elapsed();
    match body {
        Ok(t) => {
            let passed = t.failure.is_none() && t.checked > 0;
            let mut detail = t.failure.unwrap_or_default();
            if !t.notes.is_empty() {
                if !detail.is_empty() {
                    detail.push_str("; ");
                }
                detail.push_str(&t.notes.join("; "));
            }
            CheckResult { tag, name, checked: t.checked, passed, detail, elapsed }
        }
        Err(e) => CheckResult { tag, name, checked: 0, passed: false, detail: format!("error: {e}"), elapsed },
    }
}

fn run_check(tag: &'static str, name: &'static str, body: impl FnOnce() -> Result<Tally>) -> CheckResult {
    let start = Instant::now();
    finish(tag, name, start, body())
}

fn fields(degrees: &[u32]) -> Vec<Gf> {
    degrees.iter().map(|&k| Gf::new(k).expect("supported degree")).collect()
}

fn fe(v: &[u64]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x)).collect()
}

/// The degree-4 surface with `a = (0,1,1,1,1,1)`, `r = 0` over GF(2).
pub fn del_pezzo_example() -> Pencil {
    realize(Gf::gf2(), &fe(&[0, 1, 1, 1, 1, 1]), &fe(&[0, 0, 0, 0])).expect("regular")
}

/// The `m = 3` pencil with `Δ = t0^7 + t1^7` and `r = 0` over GF(2).
pub fn septic_example() -> Pencil {
    realize(Gf::gf2(), &fe(&[1, 0, 0, 0, 0, 0, 0, 1]), &[Fe::ZERO; 6]).expect("regular")
}

/// Smallest extension degree that splits `Δ`, kills the class of `r`, and leaves a rational non-root.
pub fn working_extension(p: &Pencil) -> Result<u32> {
    let split = splitting_degree(&p.half_discriminant())?;
    let (_, e) = p.field().extension(split)?;
    let qs = quasi_split_over(&p.embed(&e))?.degree;
    let mut j = split * qs;
    while (1u128 << (p.field().degree() * j)) < p.n() as u128 {
        j *= 2;
    }
    Ok(j)
}

pub fn check_half_disc(scale: Scale) -> CheckResult {
    run_check("HD", "half-discriminant of ternary forms", || {
        let mut t = Tally::new();
        let mut rng = random::rng(11);
        let per = scale.pick(100, 500);
        for f in fields(&[1, 2]) {
            for _ in 0..per {
                let q = random::form(f, 3, &mut rng);
                let a = half_disc(&q)?;
                let b = oracle::ternary_half_disc(&q)?;
                t.case(a == b, || format!("{q:?}: {a:?} vs {b:?}"));
            }
        }
        Ok(t)
    })
}

pub fn check_smoothness(scale: Scale, exec: Exec) -> CheckResult {
    run_check("SM", "regularity agrees with singular-point scan", || {
        let mut t = Tally::new();
        let f = Gf::gf2();
        let forms = oracle::all_forms(f, 3)?;
        let mut pencils = Vec::new();
        for q0 in &forms {
            for q1 in &forms {
                if let Ok(p) = Pencil::new(q0.clone(), q1.clone()) {
                    pencils.push(p);
                }
            }
        }
        let exhaustive = pencils.len();
        let mut rng = random::rng(12);
        let per = scale.pick(40, 250);
        for f in fields(&[1, 2]) {
            for _ in 0..per {
                pencils.push(random::pencil(f, 5, &mut rng));
            }
        }
        let outcomes = exec::map_slice(exec, &pencils, |p| -> Result<(bool, bool)> {
            Ok((p.is_regular(), smoothness_oracle_with(p, 4, Exec::Sequential)?))
        });
        let mut regular = 0;
        for (p, o) in pencils.iter().zip(outcomes) {
            let (a, b) = o?;
            regular += usize::from(a);
            t.case(a == b, || format!("is_regular={a} oracle={b} on {p:?}"));
        }
        t.note(format!("{exhaustive} ternary pencils over GF(2), {regular} regular in total"));
        Ok(t)
    })
}

pub fn check_normal_form(scale: Scale) -> CheckResult {
    run_check("T1.1", "normal form and round trip", || {
        let mut t = Tally::new();
        let mut rng = random::rng(13);
        let count = scale.pick(90, 500);
        let fs = fields(&[1, 2, 3]);
        let mut round_trips = 0;
        for i in 0..count {
            let f = fs[i % 3];
            let m = 1 + i / 3 % 3;
            let p = random::regular_pencil(f, m, &mut rng);
            let nf = extract_normal_form(&p)?;
            t.case(satisfies_basic_equations(&p, &nf.basis), || format!("basis fails pairings for {p:?}"));
            t.case(nf.a == p.half_discriminant().coeffs(), || format!("a differs from Δ for {p:?}"));
            let Ok((q, _)) = p.ensure_an_nonzero() else { continue };
            let nf1 = extract_normal_form(&q)?;
            let nf2 = extract_normal_form(&realize(f, &nf1.a, &nf1.r)?)?;
            let alg = algebra_of(&nf1)?;
            let same = alg.same_class(&alg.from_d_coordinates(&nf1.r)?, &alg.from_d_coordinates(&nf2.r)?)?;
            t.case(nf2.a == nf1.a && same, || format!("round trip changed data for {q:?}"));
            round_trips += 1;
        }
        t.note(format!("{round_trips} round trips"));
        Ok(t)
    })
}

fn random_algebras(count: usize, seed: u64) -> Vec<EtaleAlgebra> {
    let mut rng = random::rng(seed);
    let fs = fields(&[1, 2, 3]);
    (0..count)
        .map(|i| {
            let f = fs[i % 3];
            let deg = 1 + i % 9;
            EtaleAlgebra::new(&random::separable_polynomial(f, deg, &mut rng)).expect("separable")
        })
        .collect()
}

pub fn check_dual_basis(scale: Scale) -> CheckResult {
    run_check("T5.3", "d-basis is trace-dual to the power basis", || {
        let mut t = Tally::new();
        for alg in random_algebras(scale.pick(30, 100), 14) {
            t.case(alg.dual_basis_check(), || format!("dual basis fails for {:?}", alg.modulus()));
        }
        Ok(t)
    })
}

pub fn check_squaring(scale: Scale) -> CheckResult {
    run_check("T5.4", "squaring in the d-basis", || {
        let mut t = Tally::new();
        let mut rng = random::rng(15);
        for alg in random_algebras(scale.pick(30, 100), 16) {
            let s = random::vector(alg.field(), alg.dim(), &mut rng);
            let x = alg.from_d_coordinates(&s)?;
            let direct = alg.d_coordinates(&alg.square(&x)?)?;
            t.case(direct == alg.square_in_d_basis(&s), || format!("squaring differs for {:?}", alg.modulus()));
        }
        Ok(t)
    })
}

pub fn check_transformation_law(scale: Scale) -> CheckResult {
    run_check("T5.6", "conjugation by φ(s) shifts r by ℘(s)", || {
        let mut t = Tally::new();
        let mut rng = random::rng(17);
        let fs = fields(&[1, 2, 3]);
        let count = scale.pick(60, 200);
        for i in 0..count {
            let f = fs[i % 3];
            let m = 1 + i / 3 % 3;
            let a = loop {
                let a = random::separable_coefficients(f, m, &mut rng);
                if !a[2 * m + 1].is_zero() {
                    break a;
                }
            };
            let r = random::vector(f, 2 * m, &mut rng);
            let p = realize(f, &a, &r)?;
            let nf = extract_normal_form(&p)?;
            let alg = algebra_of(&nf)?;
            let s = random::algebra_element(&alg, &mut rng);
            if i % 2 == 0 {
                t.case(transformation_law_check(&nf, &s)?, || format!("law fails: a={a:?} r={r:?} s={s:?}"));
            } else {
                let g = random::invertible_matrix(f, 2 * m + 1, &mut rng);
                let moved = p.pullback(&g);
                let nf2 = extract_normal_form(&moved)?;
                let s = random::algebra_element(&algebra_of(&nf2)?, &mut rng);
                t.case(transformation_law_check_in_basis(&moved, &nf2, &s)?, || {
                    format!("law fails in moved basis: a={a:?} r={r:?}")
                });
            }
        }
        Ok(t)
    })
}

pub fn check_classification(exec: Exec) -> CheckResult {
    run_check("T1.5", "GL3(F2)-orbits equal r-classes", || {
        let mut t = Tally::new();
        let f = Gf::gf2();
        let forms = oracle::all_forms(f, 3)?;
        let mut by_delta: HashMap<Vec<Fe>, Vec<Pencil>> = HashMap::new();
        for q0 in &forms {
            for q1 in &forms {
                let Ok(p) = Pencil::new(q0.clone(), q1.clone()) else { continue };
                let delta = p.half_discriminant();
                if p.is_regular() && !delta.coeffs()[3].is_zero() {
                    by_delta.entry(delta.coeffs().to_vec()).or_default().push(p);
                }
            }
        }
        let group = oracle::gl_matrices(f, 3, exec)?;
        let mut deltas: Vec<_> = by_delta.keys().cloned().collect();
        deltas.sort();
        let mut classes = 0;
        for d in deltas {
            let ps = &by_delta[&d];
            let orbits = oracle::orbit_partition(ps, &group, |g, p| p.pullback(g), exec)?;
            let reps = ps
                .iter()
                .map(|p| Ok(r_invariant_of(p)?.1.class()))
                .collect::<Result<Vec<_>>>()?;
            let mut ids: HashMap<_, usize> = HashMap::new();
            let labels: Vec<usize> = reps.iter().map(|c| {
                let k = ids.len();
                *ids.entry(c.clone()).or_insert(k)
            }).collect();
            classes += ids.len();
            t.case(oracle::same_partition(&orbits, &labels), || format!("partitions differ for Δ = {d:?}"));
        }
        t.note(format!("{classes} classes over {} half-discriminants", by_delta.len()));
        Ok(t)
    })
}

pub fn check_automorphisms(scale: Scale, exec: Exec) -> CheckResult {
    run_check("T7.1", "automorphism count and exhaustive stabilizer", || {
        let mut t = Tally::new();
        let mut cases: Vec<Pencil> = Vec::new();
        let f2 = Gf::gf2();
        let forms = oracle::all_forms(f2, 3)?;
        for q0 in &forms {
            for q1 in &forms {
                let Ok(p) = Pencil::new(q0.clone(), q1.clone()) else { continue };
                if p.is_regular() {
                    cases.push(p);
                }
            }
        }
        let mut rng = random::rng(18);
        let f4 = Gf::new(2)?;
        for _ in 0..scale.pick(4, 24) {
            cases.push(random::regular_pencil(f4, 1, &mut rng));
        }
        let brute_count = cases.len();
        for m in 1..=3 {
            for f in fields(&[1, 2, 3]) {
                for _ in 0..scale.pick(2, 5) {
                    cases.push(random::regular_pencil(f, m, &mut rng));
                }
            }
        }
        for (i, p) in cases.iter().enumerate() {
            let group = automorphism_group(p)?;
            let l = factor_count(&p.half_discriminant())?;
            t.case(group.len() == 1 << (l - 1), || format!("|Aut| = {} but l = {l} for {p:?}", group.len()));
            t.case(group.iter().all(|a| preserves_pair(p, &a.matrix)), || format!("non-automorphism in {p:?}"));
            if i < brute_count {
                let brute: HashSet<Matrix> = oracle::stabilizer(p, exec)?.into_iter().collect();
                let ours: HashSet<Matrix> = group.into_iter().map(|a| a.matrix).collect();
                t.case(brute == ours, || format!("stabilizer has {} elements, expected {} for {p:?}", brute.len(), ours.len()));
            }
        }
        t.note(format!("{brute_count} pencils against the exhaustive stabilizer"));
        Ok(t)
    })
}

pub fn check_reflections(scale: Scale) -> CheckResult {
    run_check("T7.3", "reflections over a splitting field", || {
        let mut t = Tally::new();
        let mut rng = random::rng(19);
        let fs = fields(&[1, 2]);
        for i in 0..scale.pick(8, 24) {
            let m = 1 + i % 2;
            let p = random::regular_pencil(fs[i / 2 % 2], m, &mut rng);
            let j = splitting_degree(&p.half_discriminant())?;
            let mut j2 = j;
            while (1u128 << (p.field().degree() * j2)) < p.n() as u128 {
                j2 *= 2;
            }
            let (big, e) = p.field().extension(j2)?;
            let bigp = p.embed(&e);
            let refl = reflections(&p, &e)?;
            let n = p.n();
            let id = Matrix::identity(big, n);
            t.case(refl.len() == n, || format!("{} reflections for n = {n}", refl.len()));
            let mut prod = id.clone();
            for (a, r) in refl.iter().enumerate() {
                t.case(r.matrix.mul(&r.matrix) == id && r.matrix != id, || "reflection is not an involution".into());
                t.case(preserves_pair(&bigp, &r.matrix), || "reflection does not preserve the pair".into());
                t.case(r.idempotent_matrix.as_ref() == Some(&r.matrix), || "φ(ε) differs from ρ".into());
                for s in &refl[a + 1..] {
                    t.case(r.matrix.mul(&s.matrix) == s.matrix.mul(&r.matrix), || "reflections do not commute".into());
                }
                prod = prod.mul(&r.matrix);
            }
            t.case(prod == id, || "product of reflections is not the identity".into());
        }
        Ok(t)
    })
}

fn keys(subspaces: &[Subspace]) -> HashSet<Vec<Vec<Fe>>> {
    subspaces.iter().map(|s| s.key.clone()).collect()
}

pub fn check_generators(scale: Scale, exec: Exec) -> CheckResult {
    run_check("C7.4", "generators and the Aut-orbit", || {
        let mut t = Tally::new();
        let mut rng = random::rng(20);
        let mut cases = Vec::new();
        for f in fields(&[1, 2]) {
            for _ in 0..scale.pick(3, 10) {
                cases.push(random::regular_pencil(f, 1, &mut rng));
            }
        }
        cases.push(del_pezzo_example());
        for p in &cases {
            let m = p.m();
            let j = working_extension(p)?;
            let (big, e) = p.field().extension(j)?;
            let gens = enumerate_generators(p, &e)?;
            let bigp = p.embed(&e);
            let group = automorphism_group(&bigp)?;
            let expected = 1usize << (2 * m);
            t.case(gens.all.len() == expected && group.len() == expected, || {
                format!("{} generators, {} automorphisms, expected {expected}", gens.all.len(), group.len())
            });
            for g in &gens.all {
                let ok = g.dim() == m
                    && bigp.q0().is_totally_singular(&g.basis)?
                    && bigp.q1().is_totally_singular(&g.basis)?;
                t.case(ok, || "generator is not a totally singular m-space".into());
            }
            let brute = if m == 1 {
                points_on_x_with(p, &e, exec)?.into_iter().map(|x| Subspace::new(big, vec![x])).collect()
            } else {
                oracle::lines_on_x(p, &e, exec)?
            };
            t.case(keys(&brute) == keys(&gens.all) && brute.len() == expected, || {
                format!("brute force finds {} generators over GF(2^{})", brute.len(), big.degree())
            });
            if m == 2 {
                t.note(format!("{} lines on the degree-4 surface over GF(2^{})", brute.len(), big.degree()));
            }
        }
        Ok(t)
    })
}

pub fn check_canonical_plane(scale: Scale) -> CheckResult {
    run_check("CP", "canonical plane lies on X", || {
        let mut t = Tally::new();
        let dp = del_pezzo_example();
        let plane = canonical_plane(&dp)?;
        t.case(plane.basis == vec![fe(&[0, 1, 1, 0, 0])], || format!("plane {:?}", plane.basis));
        let mut rng = random::rng(21);
        let fs = fields(&[1, 2, 3]);
        for i in 0..scale.pick(12, 60) {
            let m = 2 + i % 2;
            let f = fs[i / 2 % 3];
            let p = random::regular_pencil(f, m, &mut rng);
            let plane = canonical_plane(&p)?;
            let n = p.n();
            let rank = span_key(f, n, &plane.basis).len();
            t.case(rank == m - 1, || format!("plane has dimension {rank}, expected {}", m - 1));
            let on_x = p.q0().is_totally_singular(&plane.basis)? && p.q1().is_totally_singular(&plane.basis)?;
            t.case(on_x, || "plane is not contained in X".into());
            let nf = extract_normal_form(&p)?;
            let c = random::vector(f, m + 1, &mut rng);
            let mut w = vec![Fe::ZERO; n];
            for (ci, wi) in c.iter().zip(&nf.basis.w) {
                crate::linalg::axpy(f, &mut w, *ci, wi);
            }
            let l0 = crate::linalg::dot(f, &plane.l0, &c);
            let l1 = crate::linalg::dot(f, &plane.l1, &c);
            t.case(p.q0().eval(&w) == f.square(l0) && p.q1().eval(&w) == f.square(l1), || {
                "l_i² differs from q_i on W".into()
            });
        }
        Ok(t)
    })
}

pub fn check_arf(scale: Scale) -> CheckResult {
    run_check("T6.1", "Arf invariant matches r", || {
        let mut t = Tally::new();
        let mut rng = random::rng(22);
        let fs = fields(&[1, 2, 3]);
        for i in 0..scale.pick(60, 200) {
            let f = fs[i % 3];
            let m = 1 + i / 3 % 3;
            let a = loop {
                let a = random::separable_coefficients(f, m, &mut rng);
                if !a[2 * m + 1].is_zero() {
                    break a;
                }
            };
            let r = random::vector(f, 2 * m, &mut rng);
            let nf = extract_normal_form(&realize(f, &a, &r)?)?;
            let arf = arf_invariant(&nf)?;
            let rinv = r_invariant(&nf)?;
            let same = rinv.algebra.coset_reduce(&arf.arf)?.0 == rinv.class();
            t.case(arf.matches_r && same, || format!("Arf differs from r for a={a:?} r={r:?}"));
        }
        Ok(t)
    })
}

pub fn check_lattice() -> CheckResult {
    run_check("L8", "lattice of generator classes", || {
        let mut t = Tally::new();
        let dp = del_pezzo_example();
        let (_, e) = Gf::gf2().extension(working_extension(&dp)?)?;
        let (gens, lat) = build_lattice(&dp, &e)?;
        t.case(lat.is_signed_cartan(), || format!("m = 2 root Gram {:?}", lat.root_gram));
        t.case((1..6).all(|i| lat.gram[i][i] == -1), || "a line class does not square to -1".into());
        let k: Vec<i64> = lat.eta_in_e.iter().flatten().map(|x| -x).collect();
        t.case(k == vec![-3, 1, 1, 1, 1, 1], || format!("K = {k:?}"));
        t.case(lat.pair(&k, &k) == 4, || format!("K² = {}", lat.pair(&k, &k)));
        t.case(lat.roots_are_primitive(), || "roots not orthogonal to η".into());
        let inter = intersection_matrix(&gens.all, gens.field, 2)?;
        let graph_ok = inter.iter().enumerate().all(|(i, row)| {
            row[i] == -1 && row.iter().filter(|&&x| x == 1).count() == 5 && row.iter().all(|&x| (-1..=1).contains(&x))
        });
        t.case(graph_ok, || "line intersection graph is not 5-regular".into());
        let sp = septic_example();
        let (_, e) = Gf::gf2().extension(working_extension(&sp)?)?;
        let (_, lat) = build_lattice(&sp, &e)?;
        t.case(lat.is_signed_cartan(), || format!("m = 3 root Gram {:?}", lat.root_gram));
        t.case(lat.roots_are_primitive(), || "m = 3 roots not orthogonal to η".into());
        Ok(t)
    })
}

/// All checks in a fixed order.
pub fn run_all(scale: Scale, exec: Exec) -> Vec<CheckResult> {
    vec![
        check_half_disc(scale),
        check_smoothness(scale, exec),
        check_normal_form(scale),
        check_dual_basis(scale),
        check_squaring(scale),
        check_transformation_law(scale),
        check_classification(exec),
        check_automorphisms(scale, exec),
        check_reflections(scale),
        check_generators(scale, exec),
        check_canonical_plane(scale),
        check_arf(scale),
        check_lattice(),
    ]
}

pub fn embedding_for(p: &Pencil) -> Result<Embedding> {
    let j = working_extension(p)?;
    Ok(p.field().extension(j)?.1)
}
