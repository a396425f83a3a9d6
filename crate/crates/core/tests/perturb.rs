mod common;

use proptest::prelude::*;
use ringpert::homology::HomologyContext;
use ringpert::perturb::{
    perturbation_bound, threshold_search, verify_instances, verify_suite, BoundFlavor, CaseStatus, Fault, GenConfig,
    InstanceSpec, Property, SamplePlan, SuiteConfig, SuiteReport,
};

use common::generated;

fn line_spec(truncation: u32, sequence: &[&str]) -> InstanceSpec {
    InstanceSpec {
        p: 2,
        vars: vec!["x".into()],
        truncation,
        relations: vec![],
        rank: 1,
        module_relations: vec![],
        sequence: sequence.iter().map(|s| s.to_string()).collect(),
        ideal: vec![],
    }
}

fn deep_config(seed: u64, cases: usize) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(seed, cases, 4);
    cfg.generator = GenConfig::deep();
    cfg
}

#[test]
fn bounds_on_a_line() {
    // M = k[x]/(x^6), x: a = 1, ar(xM) = 1
    let inst = line_spec(6, &["x"]).build().unwrap();
    let b = |f| perturbation_bound(&inst.module, &inst.sequence, &inst.ideal, f).unwrap();
    assert_eq!(b(BoundFlavor::Prop32).n, 2);
    assert_eq!(b(BoundFlavor::Lemma).n, 3);
    assert_eq!(b(BoundFlavor::Main).n, 3);
    assert!(!b(BoundFlavor::Main).vacuous);
    assert!(perturbation_bound(&inst.module, &inst.sequence, &inst.ideal, BoundFlavor::Prop34).is_err());
}

#[test]
fn threshold_below_the_bound() {
    // x' = x + x over F_2 kills the element, so level 1 must fail
    let inst = line_spec(6, &["x"]).build().unwrap();
    let ctx = HomologyContext::new(inst.algebra(), 4);
    let report = threshold_search(&inst, SamplePlan::budget(200), 5, &ctx).unwrap();
    assert!(report.falsification.is_none());
    assert_eq!(report.largest_violation, Some(1));
    assert_eq!(report.stable_from, 2);
}

#[test]
fn suite_passes_on_both_profiles() {
    let small = verify_suite(&SuiteConfig::new(11, 16, 4));
    assert!(small.all_passed, "{:?}", small.failing_properties());
    let deep = verify_suite(&deep_config(12, 16));
    assert!(deep.all_passed, "{:?}", deep.failing_properties());
    let main = deep.tally(Property::MainBetti).unwrap();
    assert_eq!(main.passed, 16);
    assert_eq!(deep.nonvacuous_by_length.values().sum::<usize>(), 16);
}

#[test]
fn injected_fault_is_caught() {
    let mut cfg = deep_config(3, 6);
    cfg.fault = Some(Fault::FlipBetti);
    let report = verify_suite(&cfg);
    assert!(!report.all_passed);
    assert_eq!(report.failing_properties(), vec![Property::MainBetti]);
    let tally = report.tally(Property::MainBetti).unwrap();
    assert_eq!(tally.failed, 6);
    assert_eq!(tally.failures.len(), 6);
}

#[test]
fn zero_module_is_never_a_failure() {
    let spec = line_spec(5, &["x"]).with_zero_module();
    let report = verify_instances(&[spec], &SuiteConfig::new(1, 1, 3));
    assert!(report.all_passed, "{:?}", report.failing_properties());
}

#[test]
fn unit_sequence_is_handled() {
    let spec = line_spec(5, &["1 + x", "x"]);
    let report = verify_instances(&[spec], &SuiteConfig::new(1, 1, 3));
    assert!(report.all_passed, "{:?}", report.failing_properties());
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let mut cfg = SuiteConfig::new(99, 8, 3);
    cfg.properties = vec![Property::ArAndInt, Property::MainBetti, Property::Cong];
    let a = verify_suite(&cfg);
    let b = verify_suite(&cfg);
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    let back: SuiteReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    assert_eq!(a.properties.len(), 3);
}

#[test]
fn property_subsets_do_not_change_verdicts() {
    let mut all = SuiteConfig::new(5, 6, 3);
    all.properties = vec![Property::OneElement, Property::IntQuotient];
    let mut one = all.clone();
    one.properties = vec![Property::IntQuotient];
    let a = verify_suite(&all);
    let b = verify_suite(&one);
    assert_eq!(a.tally(Property::IntQuotient), b.tally(Property::IntQuotient));
}

#[test]
fn status_serialization() {
    let s = serde_json::to_string(&CaseStatus::Fail("x".into())).unwrap();
    assert_eq!(s, r#"{"status":"fail","detail":"x"}"#);
    assert_eq!(Property::from_name("main_betti"), Some(Property::MainBetti));
    assert_eq!(Property::ALL.len(), 21);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bound_relations(seed in any::<u64>()) {
        let g = generated(&GenConfig::small(), seed);
        let inst = &g.instance;
        let r = inst.sequence.len();
        let bound = |xs: &[_], f| perturbation_bound(&inst.module, xs, &inst.ideal, f).unwrap();
        let first = &inst.sequence[..1];
        prop_assert_eq!(bound(first, BoundFlavor::Lemma).n, bound(first, BoundFlavor::Prop32).n + 1);
        let main = bound(&inst.sequence, BoundFlavor::Main);
        // every a_i is at least one for elements of the maximal ideal on a nonzero module
        if inst.sequence.iter().all(|x| x.in_maximal_ideal()) {
            prop_assert!(main.n > 1 << r);
        }
        prop_assert_eq!(main.vacuous, inst.ideal.power(main.n).is_zero());
        if r >= 2 {
            let two = bound(&inst.sequence[..2], BoundFlavor::Prop34);
            prop_assert!(two.n >= bound(first, BoundFlavor::Prop32).n);
        }
    }
}
