use std::collections::HashMap;

use proptest::prelude::*;
use qpencil::autos::automorphism_group;
use qpencil::exec::Exec;
use qpencil::geometry::{
    canonical_plane, enumerate_generators, factor_count, points_on_x, quasi_split_over, smoothness_oracle,
    splitting_degree, Subspace,
};
use qpencil::invariants::r_invariant_of;
use qpencil::lattice::{build_lattice, cartan_d, det, intersection_matrix};
use qpencil::normalform::realize;
use qpencil::oracle::{coset_contains, lines_on_x};
use qpencil::verify::{del_pezzo_example, embedding_for, septic_example};
use qpencil::{random, Error, Fe, Gf, Pencil, QuadraticForm};

fn fe(v: &[u64]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x)).collect()
}

#[test]
fn points_of_a_split_curve() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    let (_, e) = f.extension(2).unwrap();
    assert_eq!(points_on_x(&p, &e).unwrap().len(), 4);
    let twisted = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 1])).unwrap();
    assert_eq!(points_on_x(&twisted, &embedding_for(&twisted).unwrap()).unwrap().len(), 4);
}

#[test]
fn del_pezzo_surface_contains_the_canonical_point() {
    let dp = del_pezzo_example();
    let pts = points_on_x(&dp, &qpencil::Embedding::identity(Gf::gf2())).unwrap();
    assert!(pts.contains(&fe(&[0, 1, 1, 0, 0])));
    assert_eq!(canonical_plane(&dp).unwrap().basis, vec![fe(&[0, 1, 1, 0, 0])]);
    assert!(smoothness_oracle(&dp, 4).unwrap());
}

#[test]
fn canonical_plane_needs_m_at_least_two() {
    let p = realize(Gf::gf2(), &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    assert!(matches!(canonical_plane(&p), Err(Error::PlaneNeedsLargerM(1))));
}

#[test]
fn singular_pencil_is_detected() {
    let f = Gf::gf2();
    let q0 = QuadraticForm::from_triples(f, 3, &[(0, 1, Fe::ONE)]).unwrap();
    let q1 = QuadraticForm::from_triples(f, 3, &[(0, 2, Fe::ONE)]).unwrap();
    let p = Pencil::new(q0, q1).unwrap();
    assert!(!p.is_regular());
    assert!(!smoothness_oracle(&p, 3).unwrap());
}

#[test]
fn quasi_splitting_degree_agrees_with_enumeration() {
    let f = Gf::gf2();
    let trivial = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    let qs = quasi_split_over(&trivial).unwrap();
    assert_eq!(qs.degree, 1);
    assert!(qs.s.is_zero());

    let twisted = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 1])).unwrap();
    assert_eq!(quasi_split_over(&twisted).unwrap().degree, 4);
    for j in 1..=4 {
        let (_, e) = f.extension(j).unwrap();
        let (_, r) = r_invariant_of(&twisted.embed(&e)).unwrap();
        assert_eq!(coset_contains(&r.algebra, &r.value).unwrap(), j == 4, "degree {j}");
    }
}

#[test]
fn sixteen_lines_each_meeting_five() {
    let dp = del_pezzo_example();
    let e = embedding_for(&dp).unwrap();
    let gens = enumerate_generators(&dp, &e).unwrap();
    assert_eq!(gens.all.len(), 16);
    let keys = |v: &[Subspace]| {
        let mut k: Vec<_> = v.iter().map(|s| s.key.clone()).collect();
        k.sort();
        k
    };
    assert_eq!(keys(&gens.all), keys(&lines_on_x(&dp, &e, Exec::default()).unwrap()));
    let f = gens.field;
    for a in &gens.all {
        let meeting = gens.all.iter().filter(|b| b.key != a.key && a.intersection_dim(b, f) == 1).count();
        assert_eq!(meeting, 5);
    }
}

#[test]
fn lattice_of_the_quartic_surface() {
    let dp = del_pezzo_example();
    let (gens, lat) = build_lattice(&dp, &embedding_for(&dp).unwrap()).unwrap();
    assert_eq!(lat.rank, 6);
    assert_eq!(lat.gram_det, -1);
    assert!(lat.is_signed_cartan());
    assert_eq!(lat.root_gram, cartan_d(2).iter().map(|r| r.iter().map(|x| -x).collect()).collect::<Vec<Vec<i64>>>());
    let k: Vec<i64> = lat.eta_in_e.clone().unwrap().iter().map(|x| -x).collect();
    assert_eq!(k, vec![-3, 1, 1, 1, 1, 1]);
    assert_eq!(lat.pair(&k, &k), 4);
    assert!(lat.roots_are_primitive());

    let f = gens.field;
    let inter = intersection_matrix(&gens.all, f, 2).unwrap();
    let index: HashMap<_, _> = gens.all.iter().enumerate().map(|(i, s)| (s.key.clone(), i)).collect();
    for g in automorphism_group(&dp.embed(&embedding_for(&dp).unwrap())).unwrap() {
        let perm: Vec<usize> = gens.all.iter().map(|s| index[&s.image(f, &g.matrix).key]).collect();
        for i in 0..perm.len() {
            for j in 0..perm.len() {
                assert_eq!(inter[perm[i]][perm[j]], inter[i][j]);
            }
        }
    }
}

#[test]
fn lattice_in_dimension_seven() {
    let sp = septic_example();
    let (gens, lat) = build_lattice(&sp, &embedding_for(&sp).unwrap()).unwrap();
    assert_eq!(gens.all.len(), 64);
    assert_eq!(lat.rank, 8);
    assert_eq!(lat.gram_det, 4);
    assert!(lat.eta_in_e.is_none());
    assert_eq!(lat.root_gram, cartan_d(3));
    assert!(lat.roots_are_primitive());
}

#[test]
fn cartan_determinants() {
    assert_eq!(det(&cartan_d(2)), 4);
    assert_eq!(det(&cartan_d(3)), 4);
    assert_eq!(det(&cartan_d(4)), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smoothness_agrees_with_regularity(k in 1u32..=2, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::pencil(f, 3, &mut random::rng(seed));
        prop_assert_eq!(smoothness_oracle(&p, 4).unwrap(), p.is_regular());
    }

    #[test]
    fn split_curves_have_four_points(k in 1u32..=2, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::regular_pencil(f, 1, &mut random::rng(seed));
        let e = embedding_for(&p).unwrap();
        prop_assert_eq!(points_on_x(&p, &e).unwrap().len(), 4);
        let delta = p.half_discriminant();
        prop_assert!(factor_count(&delta).unwrap() <= 3);
        prop_assert!(splitting_degree(&delta).unwrap() <= 3);
    }

    #[test]
    fn canonical_plane_is_canonical(k in 1u32..=2, m in 2usize..=3, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let mut rng = random::rng(seed);
        let p = random::regular_pencil(f, m, &mut rng);
        let g = random::invertible_matrix(f, 2 * m + 1, &mut rng);
        let plane = Subspace::new(f, canonical_plane(&p).unwrap().basis);
        let moved = Subspace::new(f, canonical_plane(&p.pullback(&g)).unwrap().basis);
        prop_assert_eq!(moved.image(f, &g).key, plane.key.clone());
        prop_assert_eq!(plane.dim(), m - 1);
        prop_assert!(p.q0().is_totally_singular(&plane.basis).unwrap());
        prop_assert!(p.q1().is_totally_singular(&plane.basis).unwrap());
    }

    #[test]
    fn quasi_split_kills_the_class(k in 1u32..=2, m in 1usize..=2, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::regular_pencil(f, m, &mut random::rng(seed));
        let qs = quasi_split_over(&p).unwrap();
        let (_, e) = f.extension(qs.degree).unwrap();
        let (_, r) = r_invariant_of(&p.embed(&e)).unwrap();
        prop_assert!(r.is_trivial());
        if qs.degree > 1 {
            let (_, e) = f.extension(qs.degree - 1).unwrap();
            if let Ok((_, r)) = r_invariant_of(&p.embed(&e)) {
                prop_assert!(!r.is_trivial());
            }
        }
    }
}
