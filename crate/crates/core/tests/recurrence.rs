use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cube_core::lattice::{Region, Vertex, AXES};
use cube_core::laurent::{Rational, VarId};
use cube_core::recurrence::{RecurrenceState, SequenceMode};
use cube_core::verify::{self, RecurrenceCertificate};
use cube_core::networks::recurrence_poly;
use cube_core::CubeError;

/// The recurrence evaluated directly on rationals, with the region supplied
/// as a closure: `canon` reduces a vertex or says it is boundary.
struct Numeric<'a> {
    canon: &'a dyn Fn(Vertex) -> Option<Vertex>,
    init: &'a HashMap<Vertex, Rational>,
    memo: HashMap<(Vertex, i64), Rational>,
}

impl Numeric<'_> {
    fn f(&mut self, v: Vertex, t: i64) -> Rational {
        let Some(c) = (self.canon)(v) else { return Rational::one() };
        if t == c.color() as i64 {
            return self.init[&c].clone();
        }
        if let Some(x) = self.memo.get(&(c, t)) {
            return x.clone();
        }
        let mut num = Rational::zero();
        for e in AXES {
            num += self.f(c + e, t - 1) * self.f(c - e, t - 2);
        }
        let x = num / self.f(c, t - 3);
        self.memo.insert((c, t), x.clone());
        x
    }
}

fn random_init(vs: &[Vertex], seed: u64) -> HashMap<Vertex, Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vs.iter().map(|v| (*v, verify::random_rational(&mut rng))).collect()
}

fn to_assign(init: &HashMap<Vertex, Rational>) -> HashMap<VarId, Rational> {
    init.iter().map(|(v, x)| (VarId(*v), x.clone())).collect()
}

#[test]
fn triangle_symbolic_values_specialize_to_direct_evaluation() {
    let m = 4;
    let region = Region::triangle(m).unwrap();
    let inner: Vec<Vertex> = region.fundamental_domain().unwrap().into_iter().filter(|v| !region.is_boundary(*v)).collect();
    let init = random_init(&inner, 1);
    let canon = |v: Vertex| (v.i > 0 && v.j > 0 && v.k > 0).then_some(v);
    let mut direct = Numeric { canon: &canon, init: &init, memo: HashMap::new() };
    let mut sym = RecurrenceState::new(region);
    for v in &inner {
        let e = v.color() as i64;
        for t in (e..=14).step_by(3) {
            let p = sym.value(*v, t).unwrap();
            assert_eq!(p.substitute(&to_assign(&init)).unwrap(), direct.f(*v, t), "f_{v}({t})");
        }
    }
}

#[test]
fn laurent_values_have_positive_integer_coefficients() {
    let mut s = RecurrenceState::new(Region::triangle(5).unwrap());
    for ((v, t), p) in s.evolve_slice(10).unwrap() {
        for (_, c) in p.terms() {
            assert!(c.is_integer() && *c > Rational::zero(), "f_{v}({t}) has coefficient {c}");
        }
    }
}

#[test]
fn torus_matches_brute_force_reduction() {
    let (a, b) = (Vertex::new(3, -3, 0), Vertex::new(0, 3, -3));
    let region = Region::torus(a, b).unwrap();
    let reps = region.fundamental_domain().unwrap();
    // reduce by searching small combinations of the periods
    let canon = |v: Vertex| {
        for x in -20i64..=20 {
            for y in -20i64..=20 {
                let w = v - x * a - y * b;
                if reps.contains(&w) {
                    return Some(w);
                }
            }
        }
        panic!("no representative for {v}");
    };
    let init = random_init(&reps, 2);
    let mut direct = Numeric { canon: &canon, init: &init, memo: HashMap::new() };
    let mut s = RecurrenceState::with_assignment(region, &to_assign(&init)).unwrap();
    for v in &reps {
        let e = v.color() as i64;
        for t in (e..=e + 12).step_by(3) {
            assert_eq!(s.value(*v, t).unwrap().constant_value().unwrap(), direct.f(*v, t), "f_{v}({t})");
        }
    }
}

#[test]
fn bad_parity_and_outside_points() {
    let mut s = RecurrenceState::new(Region::triangle(5).unwrap());
    assert!(matches!(s.value(Vertex::new(1, 2, 2), 1), Err(CubeError::BadParity { .. })));
    assert!(matches!(s.value(Vertex::new(1, 2, 3), 3), Err(CubeError::OutOfRegion(_))));
}

#[test]
fn shifted_sequences_obey_the_cycle_polynomial() {
    // (1,3): J is not palindromic, so only the cycle orientation works
    let region = Region::cylinder(1, 3).unwrap();
    let v = Vertex::new(2, 0, -2);
    for a in verify::seeded_assignments(&region, 9, 2).unwrap() {
        let cert = verify::check_cylinder_recurrence(1, 3, v, 9, Some(&a)).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.onset);
        let literal = verify::check_cylinder_recurrence_q(1, 3, v, 9, Some(&a)).unwrap();
        assert!(!literal.is_valid());
    }
    let (n, m) = (2, 2);
    let v = Vertex::new(1, 0, -1);
    for a in verify::seeded_assignments(&Region::cylinder(n, m).unwrap(), 10, 2).unwrap() {
        assert!(verify::check_cylinder_recurrence(n, m, v, 8, Some(&a)).unwrap().is_valid());
    }
}

#[test]
fn small_window_is_reported() {
    let q = recurrence_poly(1, 2).unwrap();
    let mut s = RecurrenceState::new(Region::cylinder(1, 2).unwrap());
    let seq = s.flatten_cylinder_sequence(Vertex::new(1, 0, -1), SequenceMode::Shifted, 4).unwrap();
    let cert = RecurrenceCertificate::from_sequence(q, &seq);
    assert!(!cert.is_valid());
    assert!(matches!(cert.require(), Err(CubeError::WindowTooSmall(_))));
}
