mod common;

use common::*;
use oplax::bianchi::{family_mu, BianchiType, FamilyParams, TableSet};
use oplax::jacobi::{det3, jacobi_op, Vec3};
use oplax::oscillator::ddt;
use oplax::scalars::{ScalarPoly, Symbol};
use oplax::syntax::{parse_operator, parse_scalar};
use oplax::weyl::{Mode, OperatorExpr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &ScalarPoly::one(), a.clone());
        prop_assert!((&a * &ScalarPoly::zero()).is_zero());
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn substitution_is_a_ring_morphism(a in scalar(), b in scalar(), w_img in scalar(), k in -2i32..=2, c in 1i64..=3) {
        let s_img = ScalarPoly::pow(Symbol::S, k).scale(&oplax::scalars::GaussRat::int(c));
        let bind = std::collections::BTreeMap::from([(Symbol::Omega, w_img), (Symbol::S, s_img)]);
        let sub = |p: &ScalarPoly| p.subst(&bind).unwrap();
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert!(sub(&ScalarPoly::one()).is_one());
    }

    #[test]
    fn rewriting_is_confluent(w in word(8), picks in prop::collection::vec(0usize..8, 1..16)) {
        check_confluence(&w, &picks)?;
    }

    #[test]
    fn operator_text_round_trips(e in operator(Mode::Quantum)) {
        prop_assert_eq!(parse_operator(&e.to_string(), Mode::Quantum).unwrap(), e);
    }

    #[test]
    fn quantum_product_reduces_to_classical(a in raw_terms(), b in raw_terms()) {
        let q = |raw: &Vec<_>| OperatorExpr::normalize(Mode::Quantum, raw.clone());
        let c = |raw: &Vec<_>| OperatorExpr::normalize(Mode::Classical, raw.clone());
        let prod = &q(&a) * &q(&b);
        let lowered = prod.subst_scalars(&hbar_zero()).unwrap().with_mode(Mode::Classical).unwrap();
        let classical = c(&a).subst_scalars(&hbar_zero()).unwrap() * c(&b).subst_scalars(&hbar_zero()).unwrap();
        prop_assert_eq!(lowered, classical);
    }

    #[test]
    fn product_is_associative(a in operator(Mode::Quantum), b in operator(Mode::Quantum), c in operator(Mode::Quantum)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn commutator_is_antisymmetric(a in operator(Mode::Quantum), b in operator(Mode::Quantum)) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!((&ab + &ba).is_zero());
        prop_assert!(a.commutator(&a).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ddt_is_a_derivation(a in operator(Mode::Classical), b in operator(Mode::Classical), c in scalar()) {
        let lhs = ddt(&(&a * &b)).unwrap();
        let rhs = &(&ddt(&a).unwrap() * &b) + &(&a * &ddt(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lin = ddt(&(&a + &b.scale(&c))).unwrap();
        prop_assert_eq!(lin, &ddt(&a).unwrap() + &ddt(&b).unwrap().scale(&c));
    }

    #[test]
    fn partial_composition_matches_evaluation(
        (f, g, i, vs) in (2usize..=3, 1usize..=3, 1usize..=3)
            .prop_flat_map(|(d, nf, ng)| (int_op(d, nf), int_op(d, ng), 0..nf, prop::collection::vec(int_vec(d), nf + ng - 1)))
    ) {
        check_partial_compose(&f, i, &g, &vs)?;
    }

    #[test]
    fn graded_lie_identities((f, g, h) in graded_triple()) {
        check_graded_lie(&f, &g, &h)?;
    }

    #[test]
    fn jacobi_is_multilinear(
        kind in prop::sample::select(BianchiType::ALL.to_vec()),
        x in rational_vec3(), x2 in rational_vec3(), y in rational_vec3(), z in rational_vec3(),
        c in (-3i64..=3, 1i64..=3),
    ) {
        let mu = TableSet::reference().row(kind).quantum_op();
        check_jacobi_linear(&mu, &x, &x2, &y, &z, &ScalarPoly::ratio(c.0, c.1))?;
    }

    #[test]
    fn jacobi_vanishes_on_repeated_argument(
        kind in prop::sample::select(BianchiType::ALL.to_vec()),
        x in rational_vec3(), z in rational_vec3(),
    ) {
        let t = TableSet::reference();
        for mu in [t.row(kind).quantum_op(), t.row(kind).row.initial_op()] {
            prop_assert!(jacobi_op(&x, &x, &z, &mu).unwrap().iter().all(OperatorExpr::is_zero));
        }
    }

    #[test]
    fn family_jacobi_is_alternating(x in rational_vec3(), y in rational_vec3(), z in rational_vec3()) {
        let mu = family_mu(&FamilyParams::symbolic());
        let j = jacobi_op(&x, &y, &z, &mu).unwrap();
        let swapped = jacobi_op(&y, &x, &z, &mu).unwrap();
        for k in 0..3 {
            prop_assert!((&j[k] + &swapped[k]).is_zero());
        }
        prop_assert_eq!(det3(&y, &x, &z), -det3(&x, &y, &z));
    }

    #[test]
    fn det3_is_alternating(x in rational_vec3(), y in rational_vec3()) {
        prop_assert!(det3(&x, &x, &y).is_zero());
        prop_assert_eq!(det3(&x, &y, &Vec3::unit(2)), -det3(&y, &x, &Vec3::unit(2)));
    }
}
