mod common;

use proptest::prelude::*;
use ringpert::algebra::{AlgebraElement, Ideal};

use common::{algebra, binomial};

#[test]
fn truncated_polynomial_dimensions() {
    for n in 1..=3 {
        let vars = &["x", "y", "z"][..n];
        for t in 1..=5 {
            let a = algebra(3, vars, t, &[]);
            assert_eq!(a.dim() as u64, binomial(n as u64 + t as u64 - 1, n as u64), "n = {n}, T = {t}");
            assert_eq!(Ideal::maximal(&a).nilpotency_index(), Some(t as usize));
        }
    }
}

#[test]
fn monomial_complete_intersection_dimension() {
    for (a_exp, b_exp) in [(2, 2), (3, 2), (4, 3), (5, 2)] {
        let t = a_exp + b_exp - 1;
        let rels = [format!("x^{a_exp}"), format!("y^{b_exp}")];
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        let a = algebra(2, &["x", "y"], t, &rels);
        assert_eq!(a.dim(), (a_exp * b_exp) as usize);
        assert_eq!(Ideal::maximal(&a).nilpotency_index(), Some(t as usize));
    }
}

#[test]
fn units_and_inverses() {
    let a = algebra(5, &["x", "y"], 4, &["x*y"]);
    let u = AlgebraElement::parse(&a, "2 + x + y^2").unwrap();
    let inv = u.inverse().unwrap();
    assert_eq!(u.mul(&inv).unwrap(), AlgebraElement::one(&a));
    assert!(AlgebraElement::parse(&a, "x + y").unwrap().inverse().is_none());
}

#[test]
fn parse_errors_carry_positions() {
    let a = algebra(3, &["x"], 3, &[]);
    let err = AlgebraElement::parse(&a, "x + * 2").unwrap_err();
    assert_eq!(err.position(), 5);
    assert!(AlgebraElement::parse(&a, "q").is_err());
}

#[test]
fn ideal_powers() {
    let a = algebra(2, &["x", "y"], 4, &[]);
    let j = Ideal::generated(&a, &[AlgebraElement::parse(&a, "x").unwrap()]).unwrap();
    assert_eq!(j.nilpotency_index(), Some(4));
    assert!(j.power(4).is_zero());
    assert_eq!(j.power(2).dim(), 3);
    assert!(!Ideal::unit(&a).is_proper());
}

fn element(alg: &std::sync::Arc<ringpert::algebra::LocalAlgebra>, seed: &[u32]) -> AlgebraElement {
    let p = alg.field().p();
    AlgebraElement::from_coords(alg, (0..alg.dim()).map(|i| seed[i % seed.len()].wrapping_mul(31).wrapping_add(i as u32) % p).collect())
}

proptest! {
    #[test]
    fn ring_axioms(p in prop::sample::select(vec![2u64, 3, 5]), t in 2u32..5, s in prop::collection::vec(any::<u32>(), 3..30)) {
        let alg = algebra(p, &["x", "y"], t, &["x^2*y - y^3"]);
        let a = element(&alg, &s);
        let b = element(&alg, &s[1..]);
        let c = element(&alg, &s[2..]);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&AlgebraElement::one(&alg)).unwrap(), a.clone());
    }

    #[test]
    fn display_round_trip(p in prop::sample::select(vec![2u64, 3, 7]), s in prop::collection::vec(any::<u32>(), 1..30)) {
        let alg = algebra(p, &["x", "y", "z"], 3, &[]);
        let a = element(&alg, &s);
        let back = AlgebraElement::parse(&alg, &a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }
}
