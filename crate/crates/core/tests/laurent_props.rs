use std::collections::HashMap;

use proptest::prelude::*;

use cube_core::laurent::{LaurentPoly, Monomial, Rational, VarId};
use cube_core::{CubeError, Vertex};

fn var(k: usize) -> VarId {
    [VarId(Vertex::new(0, 0, 0)), VarId(Vertex::new(1, -1, 0)), VarId(Vertex::new(0, 1, -1))][k]
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    let term = (prop::collection::vec(-2i32..=2, 3), -5i64..=5, 1i64..=3);
    prop::collection::vec(term, 0..5).prop_map(|ts| {
        LaurentPoly::from_terms(ts.into_iter().map(|(es, p, q)| {
            let m = Monomial::from_pairs(es.into_iter().enumerate().map(|(k, e)| (var(k), e)));
            (m, Rational::new(p.into(), q.into()))
        }))
    })
}

fn point() -> impl Strategy<Value = HashMap<VarId, Rational>> {
    prop::collection::vec((1i64..=9, 1i64..=9), 3).prop_map(|xs| {
        xs.into_iter()
            .enumerate()
            .map(|(k, (p, q))| (var(k), Rational::new(p.into(), q.into())))
            .collect()
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&LaurentPoly::one()), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in point()) {
        let (pa, pb) = (a.substitute(&x).unwrap(), b.substitute(&x).unwrap());
        prop_assert_eq!(a.mul(&b).substitute(&x).unwrap(), &pa * &pb);
        prop_assert_eq!(a.add(&b).substitute(&x).unwrap(), pa + pb);
    }

    #[test]
    fn json_round_trip(a in poly()) {
        prop_assert_eq!(LaurentPoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn canonical_form_has_no_zero_terms(a in poly(), b in poly()) {
        for p in [a.add(&b), a.mul(&b), a.sub(&b)] {
            for (m, c) in p.terms() {
                prop_assert!(!num_traits::Zero::is_zero(c));
                prop_assert!(m.exponents().iter().all(|&(_, e)| e != 0));
            }
        }
    }
}

#[test]
fn inexact_division_is_rejected() {
    let x = LaurentPoly::var(Vertex::new(0, 0, 0));
    let one = LaurentPoly::one();
    assert_eq!(one.div_exact(&x.add(&one)), Err(CubeError::NotDivisible));
    assert_eq!(one.div_exact(&LaurentPoly::zero()), Err(CubeError::DivisionByZero));
    // monomials are units
    assert_eq!(one.div_exact(&x).unwrap().mul(&x), one);
}

#[test]
fn zero_substitution_under_negative_exponent() {
    let x = VarId(Vertex::new(0, 0, 0));
    let p = LaurentPoly::term(Monomial::var(x, -1), Rational::from_integer(1.into()));
    let at_zero: HashMap<_, _> = [(x, Rational::from_integer(0.into()))].into();
    assert!(matches!(p.substitute(&at_zero), Err(CubeError::ZeroSubstitution(_))));
    assert!(matches!(p.substitute(&HashMap::new()), Err(CubeError::MissingAssignment(_))));
}
