use std::collections::HashSet;

use proptest::prelude::*;
use qpencil::autos::{aut_x, automorphism_group, kronecker_phi, phi, preserves_pair, preserves_pencil, reflections};
use qpencil::exec::{self, Exec};
use qpencil::geometry::splitting_degree;
use qpencil::invariants::algebra_of;
use qpencil::linalg::normalize_projective_matrix;
use qpencil::normalform::{extract_normal_form, realize};
use qpencil::oracle::{gl_matrices, stabilizer};
use qpencil::{random, Fe, Gf, Matrix};

fn fe(v: &[u64]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x)).collect()
}

#[test]
fn phi_examples() {
    let f = Gf::gf2();
    let nf = extract_normal_form(&realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap()).unwrap();
    let alg = algebra_of(&nf).unwrap();
    assert_eq!(kronecker_phi(&alg, &alg.zero(), 1).unwrap().1, Matrix::identity(f, 3));
    assert_eq!(kronecker_phi(&alg, &alg.one(), 1).unwrap().1, Matrix::identity(f, 3));
    let s = alg.from_d_coordinates(&fe(&[1, 0])).unwrap();
    let g = phi(&alg, &s, &nf.basis).unwrap().matrix;
    assert_eq!(g.mul_vec(&fe(&[0, 0, 1])), fe(&[1, 0, 1]));
    assert_eq!(g.mul_vec(&fe(&[1, 0, 0])), fe(&[1, 0, 0]));
    assert_eq!(g.mul_vec(&fe(&[0, 1, 0])), fe(&[0, 1, 0]));
}

#[test]
fn automorphism_group_examples() {
    let f = Gf::gf2();
    let split = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    assert_eq!(automorphism_group(&split).unwrap().len(), 2);
    assert_eq!(stabilizer(&split, Exec::default()).unwrap().len(), 2);
    let irreducible = realize(f, &fe(&[1, 1, 0, 1]), &fe(&[0, 1])).unwrap();
    let g = automorphism_group(&irreducible).unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g[0].matrix, Matrix::identity(f, 3));

    let (_, e) = f.extension(2).unwrap();
    let big = split.embed(&e);
    assert_eq!(automorphism_group(&big).unwrap().len(), 4);
}

#[test]
fn reflections_in_dimension_five() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1, 1, 1]), &fe(&[0, 0, 0, 0])).unwrap();
    let j = splitting_degree(&p.half_discriminant()).unwrap();
    let (big, e) = f.extension(j).unwrap();
    let refl = reflections(&p, &e).unwrap();
    assert_eq!(refl.len(), 5);
    let id = Matrix::identity(big, 5);
    let bp = p.embed(&e);
    let mut prod = id.clone();
    for r in &refl {
        assert_eq!(r.matrix.mul(&r.matrix), id);
        assert!(preserves_pair(&bp, &r.matrix));
        assert_eq!(r.matrix.mul_vec(&r.z), r.z);
        prod = prod.mul(&r.matrix);
    }
    assert_eq!(prod, id);
}

#[test]
fn aut_x_matches_projective_stabilizer() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    let (big, e) = f.extension(2).unwrap();
    let ax = aut_x(&p, &e).unwrap();
    assert_eq!(ax.order(), 24);
    assert_eq!(ax.pair_automorphisms.len(), 4);
    assert_eq!(ax.line_automorphisms.len(), 6);
    let table = ax.table.as_ref().unwrap();
    let id = ax.elements.iter().position(|g| *g == Matrix::identity(big, 3)).unwrap();
    for row in table {
        assert!(row.contains(&id));
    }

    let bp = p.embed(&e);
    let gl = gl_matrices(big, 3, Exec::default()).unwrap();
    let kept = exec::filter_map_range(Exec::default(), gl.len() as u64, |i| {
        let g = &gl[i as usize];
        preserves_pencil(&bp, g).then(|| normalize_projective_matrix(g).unwrap())
    });
    let brute: HashSet<Matrix> = kept.into_iter().collect();
    let ours: HashSet<Matrix> = ax.elements.into_iter().collect();
    assert_eq!(ours, brute);
}

#[test]
fn aut_x_refuses_non_quasi_split() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 1])).unwrap();
    let (_, e) = f.extension(2).unwrap();
    assert!(matches!(aut_x(&p, &e), Err(qpencil::Error::NotQuasiSplit { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_order_and_closure(k in 1u32..=2, m in 1usize..=3, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::regular_pencil(f, m, &mut random::rng(seed));
        let group = automorphism_group(&p).unwrap();
        let (q, _) = match p.ensure_an_nonzero() {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        let alg = algebra_of(&extract_normal_form(&q).unwrap()).unwrap();
        prop_assert_eq!(group.len(), 1 << (alg.factors().len() - 1));
        let set: HashSet<Matrix> = group.iter().map(|a| a.matrix.clone()).collect();
        prop_assert_eq!(set.len(), group.len());
        for a in &group {
            prop_assert!(preserves_pair(&p, &a.matrix));
            for b in &group {
                prop_assert!(set.contains(&a.matrix.mul(&b.matrix)));
            }
        }
    }

    #[test]
    fn automorphisms_match_stabilizer_over_gf2(seed in any::<u64>()) {
        let f = Gf::gf2();
        let p = random::regular_pencil(f, 1, &mut random::rng(seed));
        let ours: HashSet<Matrix> = automorphism_group(&p).unwrap().into_iter().map(|a| a.matrix).collect();
        let brute: HashSet<Matrix> = stabilizer(&p, Exec::Sequential).unwrap().into_iter().collect();
        prop_assert_eq!(ours, brute);
    }

    #[test]
    fn reflections_are_idempotent_automorphisms(k in 1u32..=2, m in 1usize..=2, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::regular_pencil(f, m, &mut random::rng(seed));
        let j = splitting_degree(&p.half_discriminant()).unwrap();
        let (big, e) = f.extension(j).unwrap();
        let refl = reflections(&p, &e).unwrap();
        let id = Matrix::identity(big, p.n());
        let mut prod = id.clone();
        for r in &refl {
            prop_assert_eq!(r.matrix.mul(&r.matrix), id.clone());
            if let Some(g) = &r.idempotent_matrix {
                prop_assert_eq!(g, &r.matrix);
            }
            prod = prod.mul(&r.matrix);
        }
        prop_assert_eq!(prod, id);
    }
}
