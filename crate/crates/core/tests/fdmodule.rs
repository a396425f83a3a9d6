mod common;

use std::sync::Arc;

use proptest::prelude::*;
use ringpert::algebra::{AlgebraElement, Ideal};
use ringpert::fdmodule::{present_module, FdModule};

use common::{algebra, small_generated};

#[test]
fn cyclic_presentations() {
    let a = algebra(3, &["x", "y"], 4, &[]);
    let x = AlgebraElement::parse(&a, "x").unwrap();
    let m = present_module(&a, 1, &[vec![x]]).unwrap();
    // k[y]/(y^4)
    assert_eq!(m.dim(), 4);
    assert_eq!(m.minimal_generators().len(), 1);
    assert_eq!(m.loewy_length(&Ideal::maximal(&a), &m.full()), Some(4));
    let free = FdModule::free(&a, 2);
    assert_eq!(free.dim(), 2 * a.dim());
    assert_eq!(free.minimal_generators().len(), 2);
}

#[test]
fn residue_field_and_socle() {
    let a = algebra(2, &["x"], 5, &[]);
    let k = FdModule::residue_field(&a);
    assert_eq!(k.dim(), 1);
    assert_eq!(FdModule::free(&a, 1).socle().dim(), 1);
    let b = algebra(2, &["x", "y"], 2, &[]);
    assert_eq!(FdModule::free(&b, 1).socle().dim(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn duality(seed in any::<u64>()) {
        let g = small_generated(seed);
        let m = &g.instance.module;
        let max = Ideal::maximal(g.instance.algebra());
        let d = m.dual();
        prop_assert_eq!(&d.dual(), m.as_ref());
        // socle of M is dual to M^v / m M^v
        prop_assert_eq!(m.socle().dim(), d.minimal_generators().len());
        prop_assert_eq!(m.loewy_length(&max, &m.full()), d.loewy_length(&max, &d.full()));
    }

    #[test]
    fn colon_and_quotients(seed in any::<u64>()) {
        let g = small_generated(seed);
        let inst = &g.instance;
        let m = &inst.module;
        let n = m.ideal_times(&inst.ideal, &m.full());
        for x in &inst.sequence {
            let colon = m.colon(&n, x);
            prop_assert!(n.is_contained_in(&colon));
            prop_assert!(m.element_times(x, &colon).is_contained_in(&n));
        }
        let q = m.quotient(&n).unwrap();
        prop_assert_eq!(q.module.dim(), m.dim() - n.dim());
        if inst.ideal.space() == Ideal::maximal(inst.algebra()).space() {
            prop_assert_eq!(q.module.dim(), m.minimal_generators().len());
        }
        let a = m.loewy_length(&inst.ideal, &m.full()).unwrap();
        prop_assert_eq!(m.relative_loewy_length(&inst.ideal, &m.full(), &n), Some(a.min(1)));
    }

    #[test]
    fn multiplication_maps(seed in any::<u64>()) {
        let g = small_generated(seed);
        let inst = &g.instance;
        let m = Arc::clone(&inst.module);
        let x = &inst.sequence[0];
        let phi = m.induced_multiplication_hom(x, x).unwrap();
        // image is xM, kernel is zero
        prop_assert_eq!(phi.image(), m.element_times(x, &m.full()));
        prop_assert!(phi.kernel().is_zero());
        let one = AlgebraElement::one(inst.algebra());
        let by_one = m.induced_multiplication_hom(&one, x);
        prop_assert_eq!(by_one.is_ok(), m.colon(&m.zero_submodule(), x).is_zero());
    }

    #[test]
    fn direct_sums(seed in any::<u64>()) {
        let g = small_generated(seed);
        let m = &g.instance.module;
        let s = m.direct_sum(m);
        prop_assert_eq!(s.dim(), 2 * m.dim());
        prop_assert_eq!(s.socle().dim(), 2 * m.socle().dim());
        prop_assert_eq!(s.minimal_generators().len(), 2 * m.minimal_generators().len());
    }
}
