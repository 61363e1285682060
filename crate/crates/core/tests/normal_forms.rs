use proptest::prelude::*;
use qpencil::exec::Exec;
use qpencil::invariants::{arf_invariant, is_isomorphic, r_invariant, r_invariant_of, transformation_law_check};
use qpencil::normalform::{canonical_w, complete_kronecker, extract_normal_form, realize, satisfies_basic_equations};
use qpencil::oracle::{all_elements, coset_contains, gl_matrices};
use qpencil::algebra::{AlgebraElement, EtaleAlgebra};
use qpencil::{random, Fe, Gf, Matrix, Polynomial, QuadraticForm};

fn fe(v: &[u64]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x)).collect()
}

fn alg(f: Gf, c: &[u64]) -> EtaleAlgebra {
    EtaleAlgebra::new(&Polynomial::from_u64(f, c).unwrap()).unwrap()
}

fn el(a: &EtaleAlgebra, c: &[u64]) -> AlgebraElement {
    a.element(fe(c)).unwrap()
}

#[test]
fn realized_forms_m1() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    let t = |v: &[(usize, usize)]| {
        let t: Vec<_> = v.iter().map(|&(i, j)| (i, j, Fe::ONE)).collect();
        QuadraticForm::from_triples(f, 3, &t).unwrap()
    };
    assert_eq!(p.q0(), &t(&[(1, 1), (1, 2)]));
    assert_eq!(p.q1(), &t(&[(0, 0), (1, 1), (0, 2)]));
    assert!(realize(f, &fe(&[0, 0, 0, 1]), &fe(&[0, 0])).is_err());
}

#[test]
fn normal_form_round_trip_and_identity_completion() {
    let f = Gf::gf2();
    let p = realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap();
    let nf = extract_normal_form(&p).unwrap();
    assert_eq!(nf.a, fe(&[0, 1, 1, 1]));
    assert_eq!(nf.r, fe(&[0, 0]));
    assert_eq!(nf.basis.matrix(f), Matrix::identity(f, 3));
    let p2 = realize(f, &fe(&[0, 1, 1, 1, 1, 1]), &fe(&[1, 0, 1, 1])).unwrap();
    assert_eq!(canonical_w(&p2).unwrap(), vec![fe(&[1, 0, 0, 0, 0]), fe(&[0, 1, 0, 0, 0]), fe(&[0, 0, 1, 0, 0])]);
}

#[test]
fn kronecker_basis_for_a_non_normal_pencil() {
    let f = Gf::gf2();
    let q0 = QuadraticForm::from_triples(f, 3, &[(0, 0, Fe::ONE), (1, 2, Fe::ONE)]).unwrap();
    let q1 = QuadraticForm::from_triples(f, 3, &[(1, 1, Fe::ONE), (0, 2, Fe::ONE)]).unwrap();
    let p = qpencil::Pencil::new(q0, q1).unwrap();
    let w = canonical_w(&p).unwrap();
    for x in &w {
        for y in &w {
            assert!(p.q0().polar().pair(x, y).is_zero());
            assert!(p.q1().polar().pair(x, y).is_zero());
        }
    }
    let basis = complete_kronecker(&p, &w).unwrap();
    assert!(satisfies_basic_equations(&p, &basis));
}

#[test]
fn multiplication_trace_and_dual_basis_examples() {
    let f = Gf::gf2();
    let a = alg(f, &[0, 1, 1, 1]);
    assert_eq!(a.mul(&el(&a, &[0, 1, 0]), &el(&a, &[0, 0, 1])).unwrap(), el(&a, &[0, 1, 1]));
    assert_eq!(a.trace(&a.one()).unwrap(), Fe::ONE);
    assert_eq!(a.trace(&el(&a, &[0, 1, 0])).unwrap(), Fe::ONE);
    assert_eq!(a.d_basis(), &[el(&a, &[1, 1, 1]), el(&a, &[1, 1, 0]), el(&a, &[1, 0, 0])]);
    assert!(a.dual_basis_check());

    let b = alg(f, &[1, 1, 0, 1]);
    assert_eq!(b.d_basis(), &[el(&b, &[1, 0, 1]), el(&b, &[0, 1, 0]), el(&b, &[1, 0, 0])]);
    assert!(b.dual_basis_check());
    let mut bad = b.d_basis().to_vec();
    bad[0] = b.add(&bad[0], &b.one()).unwrap();
    assert!(!b.check_dual_basis(&bad).unwrap());
    assert_eq!(b.artin_schreier(&el(&b, &[0, 1, 0])).unwrap(), el(&b, &[0, 1, 1]));
    assert!(b.artin_schreier(&b.one()).unwrap().is_zero());
}

#[test]
fn squaring_examples() {
    let f = Gf::gf2();
    let a = alg(f, &[0, 1, 1, 1]);
    let sq = a.square_in_d_basis(&fe(&[0, 1, 0]));
    assert_eq!(a.from_d_coordinates(&sq).unwrap(), el(&a, &[1, 0, 1]));
    assert_eq!(a.square_in_d_basis(&fe(&[0, 0, 1])), fe(&[0, 0, 1]));
}

#[test]
fn idempotent_examples() {
    let f = Gf::gf2();
    let a = alg(f, &[0, 1, 1, 1]);
    assert_eq!(a.idempotents(), &[el(&a, &[1, 1, 1]), el(&a, &[0, 1, 1])]);
    assert_eq!(a.all_idempotents().len(), 4);
    assert_eq!(alg(f, &[1, 1, 0, 1]).idempotents(), &[alg(f, &[1, 1, 0, 1]).one()]);

    let f4 = Gf::new(2).unwrap();
    let split = alg(f4, &[0, 3, 1, 1]);
    let t = split.t_power(1);
    for alpha in f4.elements().filter(|&x| split.modulus().eval(x).is_zero()) {
        let i = split.idempotent_for_root(alpha).unwrap();
        let e = &split.idempotents()[i];
        assert_eq!(split.mul(e, &t).unwrap(), split.scale(alpha, e).unwrap());
    }
}

#[test]
fn coset_examples_match_enumeration() {
    let f = Gf::gf2();
    let a = alg(f, &[0, 1, 1, 1]);
    let d = a.d_basis().to_vec();
    assert!(a.coset_reduce(&d[0]).unwrap().1);
    assert!(!a.coset_reduce(&d[1]).unwrap().1);
    assert!(a.coset_reduce(&a.one()).unwrap().1);
    assert!(coset_contains(&a, &d[0]).unwrap());
    assert!(!coset_contains(&a, &d[1]).unwrap());
    assert_eq!(a.solve_artin_schreier(&a.zero()).unwrap().unwrap().0, a.zero());
    let (s, c) = a.solve_artin_schreier(&d[0]).unwrap().unwrap();
    assert_eq!(a.add(&a.artin_schreier(&s).unwrap(), &a.constant(c)).unwrap(), d[0]);
    assert!(a.solve_artin_schreier(&d[1]).unwrap().is_none());
    for x in all_elements(&a).unwrap() {
        assert_eq!(a.coset_reduce(&x).unwrap().1, coset_contains(&a, &x).unwrap());
    }
}

#[test]
fn r_invariant_examples() {
    let f = Gf::gf2();
    let nf = |r: &[u64]| extract_normal_form(&realize(f, &fe(&[0, 1, 1, 1]), &fe(r)).unwrap()).unwrap();
    assert!(r_invariant(&nf(&[0, 0])).unwrap().value.is_zero());
    let r10 = r_invariant(&nf(&[1, 0])).unwrap();
    assert_eq!(r10.value, r10.algebra.d_basis()[0]);
    assert!(r10.is_trivial());
    let r01 = r_invariant(&nf(&[0, 1])).unwrap();
    assert_eq!(r01.value, r01.algebra.d_basis()[1]);
    assert!(!r01.is_trivial());

    let rev = realize(f, &fe(&[1, 1, 1, 0]), &fe(&[0, 0])).unwrap();
    assert!(r_invariant(&extract_normal_form(&rev).unwrap()).is_err());
    assert!(r_invariant_of(&rev).unwrap().1.is_trivial());
}

#[test]
fn isomorphism_examples_agree_with_exhaustive_search() {
    let f = Gf::gf2();
    let p = |r: &[u64]| realize(f, &fe(&[0, 1, 1, 1]), &fe(r)).unwrap();
    let same = is_isomorphic(&p(&[0, 1]), &p(&[0, 1])).unwrap();
    assert!(same.isomorphic);
    let gl3 = gl_matrices(f, 3, Exec::default()).unwrap();
    let brute = |x: &qpencil::Pencil, y: &qpencil::Pencil| gl3.iter().any(|g| x.pullback(g) == *y);
    for (r1, r2, expect) in [([0, 0], [1, 0], true), ([0, 0], [0, 1], false), ([1, 1], [0, 1], true)] {
        let (x, y) = (p(&r1), p(&r2));
        let res = is_isomorphic(&x, &y).unwrap();
        assert_eq!(res.isomorphic, expect);
        assert_eq!(brute(&x, &y), expect);
        if let Some(g) = res.witness {
            assert_eq!(x.pullback(&g), y);
        }
    }
}

#[test]
fn transformation_law_examples() {
    let f = Gf::gf2();
    let nf = extract_normal_form(&realize(f, &fe(&[0, 1, 1, 1]), &fe(&[0, 0])).unwrap()).unwrap();
    let alg = r_invariant(&nf).unwrap().algebra;
    assert!(transformation_law_check(&nf, &alg.zero()).unwrap());
    assert!(transformation_law_check(&nf, &alg.one()).unwrap());
    assert!(transformation_law_check(&nf, &alg.d_basis()[1].clone()).unwrap());
}

#[test]
fn arf_examples() {
    let f = Gf::gf2();
    let nf = |r: &[u64]| extract_normal_form(&realize(f, &fe(&[0, 1, 1, 1]), &fe(r)).unwrap()).unwrap();
    let a0 = arf_invariant(&nf(&[0, 0])).unwrap();
    assert!(a0.arf.is_zero());
    assert!(a0.matches_r);
    let a1 = arf_invariant(&nf(&[0, 1])).unwrap();
    let rinv = r_invariant(&nf(&[0, 1])).unwrap();
    assert!(rinv.algebra.same_class(&a1.arf, &rinv.algebra.d_basis()[1]).unwrap());
    assert!(a1.matches_r);
}

fn small_field() -> impl Strategy<Value = Gf> {
    (1u32..=2).prop_map(|k| Gf::new(k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extraction_recovers_realized_coefficients(f in small_field(), m in 1usize..=3, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = random::separable_coefficients(f, m, &mut rng);
        let r = random::vector(f, 2 * m, &mut rng);
        let nf = extract_normal_form(&realize(f, &a, &r).unwrap()).unwrap();
        prop_assert_eq!(nf.a, a);
        prop_assert_eq!(nf.r, r);
    }

    #[test]
    fn extraction_after_conjugation(f in small_field(), m in 1usize..=3, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::regular_pencil(f, m, &mut rng);
        prop_assume!(p.ensure_an_nonzero().is_ok());
        let (_, rinv) = r_invariant_of(&p).unwrap();
        let g = random::invertible_matrix(f, 2 * m + 1, &mut rng);
        let moved = p.pullback(&g);
        let (nf2, rinv2) = r_invariant_of(&moved).unwrap();
        prop_assert!(satisfies_basic_equations(&p.pullback(&g).ensure_an_nonzero().unwrap().0, &nf2.basis));
        prop_assert_eq!(rinv.algebra.dim(), rinv2.algebra.dim());
        if rinv.algebra == rinv2.algebra {
            prop_assert!(rinv.algebra.same_class(&rinv.value, &rinv2.value).unwrap());
        }
        let w = canonical_w(&p).unwrap();
        let det = g.det();
        for (x, y) in w.iter().zip(canonical_w(&moved).unwrap()) {
            let scaled: Vec<Fe> = x.iter().map(|&c| f.mul(det, c)).collect();
            prop_assert_eq!(g.mul_vec(&y), scaled);
        }
    }

    #[test]
    fn swapping_reverses_delta(f in small_field(), m in 1usize..=3, seed in any::<u64>()) {
        let p = random::regular_pencil(f, m, &mut random::rng(seed));
        let swap = Matrix::from_rows(f, 2, &[vec![Fe::ZERO, Fe::ONE], vec![Fe::ONE, Fe::ZERO]]);
        let mut rev = p.half_discriminant().coeffs().to_vec();
        rev.reverse();
        let swapped = p.change_basis(&swap).unwrap().half_discriminant();
        prop_assert_eq!(swapped.coeffs(), rev.as_slice());
    }

    #[test]
    fn algebra_identities(f in small_field(), deg in 2usize..=6, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = EtaleAlgebra::new(&random::separable_polynomial(f, deg, &mut rng)).unwrap();
        prop_assert!(a.dual_basis_check());
        let x = random::algebra_element(&a, &mut rng);
        let s = a.d_coordinates(&x).unwrap();
        prop_assert_eq!(a.from_d_coordinates(&s).unwrap(), x.clone());
        prop_assert_eq!(a.from_d_coordinates(&a.square_in_d_basis(&s)).unwrap(), a.square(&x).unwrap());
        let idem = a.all_idempotents();
        prop_assert_eq!(idem.len(), 1 << a.factors().len());
        for e in &idem {
            prop_assert_eq!(a.square(e).unwrap(), e.clone());
            prop_assert!(a.artin_schreier(e).unwrap().is_zero());
        }
        let (rep, trivial) = a.coset_reduce(&x).unwrap();
        prop_assert!(a.same_class(&rep, &x).unwrap());
        prop_assert_eq!(trivial, a.solve_artin_schreier(&x).unwrap().is_some());
        let y = random::algebra_element(&a, &mut rng);
        let shifted = a.add(&x, &a.artin_schreier(&y).unwrap()).unwrap();
        prop_assert_eq!(a.coset_reduce(&shifted).unwrap().0, rep);
    }

    #[test]
    fn coset_reduction_matches_enumeration(seed in any::<u64>(), deg in 2usize..=4) {
        let f = Gf::gf2();
        let mut rng = random::rng(seed);
        let a = EtaleAlgebra::new(&random::separable_polynomial(f, deg, &mut rng)).unwrap();
        let x = random::algebra_element(&a, &mut rng);
        prop_assert_eq!(a.coset_reduce(&x).unwrap().1, coset_contains(&a, &x).unwrap());
    }

    #[test]
    fn isomorphism_is_an_equivalence(seed in any::<u64>()) {
        let f = Gf::gf2();
        let mut rng = random::rng(seed);
        let a = fe(&[0, 1, 1, 1]);
        let ps: Vec<_> = (0..3).map(|_| {
            let base = realize(f, &a, &random::vector(f, 2, &mut rng)).unwrap();
            base.pullback(&random::invertible_matrix(f, 3, &mut rng))
        }).collect();
        let iso = |i: usize, j: usize| is_isomorphic(&ps[i], &ps[j]).unwrap().isomorphic;
        prop_assert!(iso(0, 0));
        prop_assert_eq!(iso(0, 1), iso(1, 0));
        if iso(0, 1) && iso(1, 2) {
            prop_assert!(iso(0, 2));
        }
    }

    #[test]
    fn arf_matches_r(f in small_field(), m in 1usize..=3, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut a = random::separable_coefficients(f, m, &mut rng);
        while a.last().unwrap().is_zero() {
            a = random::separable_coefficients(f, m, &mut rng);
        }
        let r = random::vector(f, 2 * m, &mut rng);
        let nf = extract_normal_form(&realize(f, &a, &r).unwrap()).unwrap();
        prop_assert!(arf_invariant(&nf).unwrap().matches_r);
    }
}
