mod common;

use proptest::prelude::*;
use ringpert::algebra::Ideal;
use ringpert::fdmodule::{FdModule, Submodule};
use ringpert::grading::{artin_rees, artin_rees_by_definition, GradedFiltration};

use common::{algebra, small_generated};

/// Least `c` with `J^n M ∩ N = J^(n-c) (J^c M ∩ N)` for all `n ≥ c`, straight from the definition.
fn brute_force_ar(m: &FdModule, j: &Ideal, n: &Submodule) -> usize {
    let piece = |d: usize| m.ideal_times(&j.power(d), &m.full());
    let len = (0..).find(|&d| piece(d).is_zero()).unwrap();
    (0..=len)
        .find(|&c| {
            let base = piece(c).intersect(n);
            (c..=len).all(|k| piece(k).intersect(n) == m.ideal_times(&j.power(k - c), &base))
        })
        .unwrap()
}

fn test_submodules(m: &FdModule, j: &Ideal, seq: &[ringpert::algebra::AlgebraElement]) -> Vec<Submodule> {
    let mut subs = vec![m.full(), m.zero_submodule(), m.socle(), m.ideal_times(j, &m.full())];
    for i in 1..=seq.len() {
        subs.push(m.sequence_times(&seq[..i]));
        subs.push(m.colon(&m.zero_submodule(), &seq[i - 1]));
    }
    if let Some(g) = m.minimal_generators().first() {
        subs.push(m.submodule_generated(std::slice::from_ref(g)));
    }
    subs
}

#[test]
fn powers_of_the_ideal() {
    let a = algebra(3, &["x", "y"], 5, &["x*y^2"]);
    let m = FdModule::free(&a, 1);
    let j = Ideal::maximal(&a);
    let filt = GradedFiltration::new(&m, &j).unwrap();
    for c in 0..filt.length() {
        let n = m.ideal_times(&j.power(c), &m.full());
        assert_eq!(filt.artin_rees(&n).unwrap(), c);
        let degrees = filt.initial_module(&n).unwrap().generator_degrees();
        assert_eq!(degrees.max_degree(), c);
    }
}

#[test]
fn line_example() {
    // N = (x^2 + x^3) in k[x]/(x^5): int(N) is generated in degree 2
    let a = algebra(2, &["x"], 5, &[]);
    let m = FdModule::free(&a, 1);
    let elem = ringpert::algebra::AlgebraElement::parse(&a, "x^2 + x^3").unwrap();
    let n = m.element_times(&elem, &m.full());
    assert_eq!(artin_rees(&n, &m, &Ideal::maximal(&a)).unwrap(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn artin_rees_matches_definition(seed in any::<u64>()) {
        let g = small_generated(seed);
        let inst = &g.instance;
        let m = inst.module.as_ref();
        let filt = GradedFiltration::new(m, &inst.ideal).unwrap();
        for n in test_submodules(m, &inst.ideal, &inst.sequence) {
            let expected = brute_force_ar(m, &inst.ideal, &n);
            prop_assert_eq!(filt.artin_rees(&n).unwrap(), expected);
            prop_assert_eq!(artin_rees_by_definition(&filt, &n).unwrap(), expected);
        }
    }

    #[test]
    fn initial_module_has_the_same_size(seed in any::<u64>()) {
        let g = small_generated(seed);
        let inst = &g.instance;
        let m = inst.module.as_ref();
        let filt = GradedFiltration::new(m, &inst.ideal).unwrap();
        let total: usize = (0..filt.length()).map(|d| filt.graded_dim(d)).sum();
        prop_assert_eq!(total, m.dim());
        for n in test_submodules(m, &inst.ideal, &inst.sequence) {
            let init = filt.initial_module(&n).unwrap();
            prop_assert_eq!(init.degree_dims().iter().sum::<usize>(), n.dim());
            for d in 0..init.len() {
                prop_assert!(init.degree_dim(d) <= filt.graded_dim(d));
            }
        }
    }
}
