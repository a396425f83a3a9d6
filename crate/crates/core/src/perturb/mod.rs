//! Filter-regular sequences, the perturbation bounds, and perturbation experiments.

mod instance;
mod suite;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{same_algebra, AlgebraElement, Ideal, LocalAlgebra};
use crate::fdmodule::{FdModule, ModuleError, Submodule};
use crate::grading::{GradedFiltration, GradingError};
use crate::homology::{HomologicalDims, HomologyContext, HomologyError};
use crate::linalg::{Elem, SubspaceFp};

pub use instance::{GenConfig, GenProfile, Generated, InstanceError, InstanceSpec};
pub use suite::{
    verify_instances, verify_suite, CaseStatus, Fault, FailureRecord, Property, PropertyTally, SuiteConfig,
    SuiteReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerturbError {
    #[error("bound flavor {flavor} needs a sequence of length {required}, got {found}")]
    FlavorArity {
        flavor: BoundFlavor,
        required: usize,
        found: usize,
    },
    #[error("element {index} of the sequence is not filter regular")]
    NotFilterRegular { index: usize },
    #[error("expected {expected} perturbations, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Which of the perturbation bounds to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundFlavor {
    /// `max{a_J(0 :_M x), ar_J(xM) + 1}` for a single element.
    Prop32,
    /// `max{a_1 + a_2, ar_J(x_1 M), ar_J((x_1, x_2)M)} + 1` for two elements.
    Prop34,
    /// The single-element bound plus one, used for the Tor and Ext maps.
    Lemma,
    /// `max{a_1 + 2a_2 + ... + 2^{r-1}a_r, ar_J(x_1 M), ..., ar_J((x_1..x_r)M)} + 2`.
    Main,
}

impl BoundFlavor {
    pub const ALL: [BoundFlavor; 4] = [BoundFlavor::Prop32, BoundFlavor::Prop34, BoundFlavor::Lemma, BoundFlavor::Main];

    pub fn name(self) -> &'static str {
        match self {
            BoundFlavor::Prop32 => "prop32",
            BoundFlavor::Prop34 => "prop34",
            BoundFlavor::Lemma => "lemma",
            BoundFlavor::Main => "main",
        }
    }
}

impl fmt::Display for BoundFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundFlavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundFlavor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown bound flavor `{s}` (expected prop32, prop34, lemma or main)"))
    }
}

/// A module, a sequence of algebra elements and the ideal `J`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub module: Arc<FdModule>,
    pub sequence: Vec<AlgebraElement>,
    pub ideal: Ideal,
}

impl Instance {
    pub fn new(module: Arc<FdModule>, sequence: Vec<AlgebraElement>, ideal: Ideal) -> Result<Self, PerturbError> {
        let alg = module.algebra();
        if !same_algebra(alg, ideal.algebra()) || sequence.iter().any(|x| !same_algebra(alg, x.algebra())) {
            return Err(PerturbError::AlgebraMismatch);
        }
        Ok(Self {
            module,
            sequence,
            ideal,
        })
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        self.module.algebra()
    }

    /// `(x_1, ..., x_i)M`.
    pub fn prefix(&self, i: usize) -> Submodule {
        self.module.sequence_times(&self.sequence[..i])
    }

    /// `M/(x_1, ..., x_r)M`.
    pub fn quotient(&self) -> FdModule {
        quotient_by(&self.module, &self.sequence)
    }
}

fn quotient_by(m: &FdModule, xs: &[AlgebraElement]) -> FdModule {
    m.quotient(&m.sequence_times(xs)).expect("sequence submodule").module
}

/// `a_J(((prefix)M : x) / (prefix)M)`.
pub fn colon_loewy_length(m: &FdModule, prefix: &[AlgebraElement], x: &AlgebraElement, j: &Ideal) -> Option<usize> {
    let base = m.sequence_times(prefix);
    let colon = m.colon(&base, x);
    m.relative_loewy_length(j, &colon, &base)
}

/// The values `a_i` of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterRegProfile {
    pub a_values: Vec<Option<usize>>,
    pub all_finite: bool,
}

impl FilterRegProfile {
    pub fn values(&self) -> Result<Vec<usize>, PerturbError> {
        self.a_values
            .iter()
            .enumerate()
            .map(|(index, a)| a.ok_or(PerturbError::NotFilterRegular { index }))
            .collect()
    }
}

pub fn filter_regular_profile(m: &FdModule, xs: &[AlgebraElement], j: &Ideal) -> FilterRegProfile {
    let a_values: Vec<Option<usize>> = (0..xs.len())
        .map(|i| colon_loewy_length(m, &xs[..i], &xs[i], j))
        .collect();
    let all_finite = a_values.iter().all(Option::is_some);
    FilterRegProfile { a_values, all_finite }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub flavor: BoundFlavor,
    pub a_values: Vec<usize>,
    /// The Loewy-length part of the maximum.
    pub a_term: usize,
    /// Artin–Rees numbers of `(x_1..x_i)M`, as entered into the maximum.
    pub ar_terms: Vec<usize>,
    pub n: usize,
    /// `J^N = 0`, so only the trivial perturbation exists.
    pub vacuous: bool,
}

pub fn perturbation_bound(
    m: &FdModule,
    xs: &[AlgebraElement],
    j: &Ideal,
    flavor: BoundFlavor,
) -> Result<BoundReport, PerturbError> {
    let filt = GradedFiltration::new(m, j)?;
    bound_with(&filt, xs, flavor)
}

fn bound_with(filt: &GradedFiltration<'_>, xs: &[AlgebraElement], flavor: BoundFlavor) -> Result<BoundReport, PerturbError> {
    let m = filt.module();
    let j = filt.ideal();
    let r = xs.len();
    let required = match flavor {
        BoundFlavor::Prop32 | BoundFlavor::Lemma => Some(1),
        BoundFlavor::Prop34 => Some(2),
        BoundFlavor::Main => None,
    };
    if let Some(required) = required {
        if r != required {
            return Err(PerturbError::FlavorArity {
                flavor,
                required,
                found: r,
            });
        }
    }
    let a_values = filter_regular_profile(m, xs, j).values()?;
    let ar = |i: usize| filt.artin_rees(&m.sequence_times(&xs[..i]));
    let (a_term, ar_terms, n) = match flavor {
        BoundFlavor::Prop32 | BoundFlavor::Lemma => {
            let ar1 = ar(1)?;
            let base = a_values[0].max(ar1 + 1);
            let n = if flavor == BoundFlavor::Lemma { base + 1 } else { base };
            (a_values[0], vec![ar1], n)
        }
        BoundFlavor::Prop34 => {
            let terms = vec![ar(1)?, ar(2)?];
            let a_term = a_values[0] + a_values[1];
            let n = terms.iter().copied().fold(a_term, usize::max) + 1;
            (a_term, terms, n)
        }
        BoundFlavor::Main => {
            let terms = (1..=r).map(ar).collect::<Result<Vec<_>, _>>()?;
            let a_term = a_values.iter().enumerate().map(|(i, &a)| a << i).sum();
            let n = terms.iter().copied().fold(a_term, usize::max) + 2;
            (a_term, terms, n)
        }
    };
    let vacuous = j.power(n).is_zero();
    Ok(BoundReport {
        flavor,
        a_values,
        a_term,
        ar_terms,
        n,
        vacuous,
    })
}

/// A named auxiliary claim checked alongside a perturbation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationOutcome {
    /// `ε_i` were drawn from `J^level`.
    pub level: usize,
    pub epsilons: Vec<String>,
    pub perturbed: HomologicalDims,
    pub betti_equal: bool,
    pub bass_equal: bool,
    pub dims_equal: bool,
    pub aux: Vec<AuxCheck>,
    pub verdict: bool,
}

impl PerturbationOutcome {
    pub fn tables_equal(&self) -> bool {
        self.betti_equal && self.bass_equal
    }
}

/// How many `ε`-tuples to try at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Enumerate every tuple when there are at most this many.
    pub exhaustive_limit: u64,
    /// Otherwise draw this many uniform tuples.
    pub samples: usize,
}

impl SamplePlan {
    pub fn budget(budget: usize) -> Self {
        Self {
            exhaustive_limit: budget as u64,
            samples: budget,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub level: usize,
    pub space_dim: usize,
    pub exhaustive: bool,
    pub vacuous: bool,
    pub outcomes: Vec<PerturbationOutcome>,
}

impl SampleResult {
    /// Outcomes whose Betti or Bass tables changed.
    pub fn violations(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.tables_equal()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &PerturbationOutcome> {
        self.outcomes.iter().filter(|o| !o.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub tuples: usize,
    pub violations: usize,
    pub exhaustive: bool,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub bound: BoundReport,
    pub levels: Vec<LevelSummary>,
    /// Least level such that no tried perturbation at that level or above changed a table.
    pub stable_from: usize,
    pub largest_violation: Option<usize>,
    /// A violation at or above the proved bound, with the data to reproduce it.
    pub falsification: Option<PerturbationOutcome>,
}

/// Perturbation experiments on one instance, with cached invariants of the quotients.
pub struct Perturber<'a> {
    inst: &'a Instance,
    ctx: &'a HomologyContext,
    filt: GradedFiltration<'a>,
    a_values: Vec<usize>,
    main: BoundReport,
    one_bound: Option<usize>,
    two_bound: Option<usize>,
    original: HomologicalDims,
    cache: HashMap<SubspaceFp, HomologicalDims>,
}

impl<'a> Perturber<'a> {
    pub fn new(inst: &'a Instance, ctx: &'a HomologyContext) -> Result<Self, PerturbError> {
        if !same_algebra(inst.algebra(), ctx.algebra()) {
            return Err(PerturbError::AlgebraMismatch);
        }
        let filt = GradedFiltration::new(&inst.module, &inst.ideal)?;
        let xs = &inst.sequence;
        let main = bound_with(&filt, xs, BoundFlavor::Main)?;
        let one_bound = match xs.first() {
            Some(x) => Some(bound_with(&filt, std::slice::from_ref(x), BoundFlavor::Prop32)?.n),
            None => None,
        };
        let two_bound = if xs.len() >= 2 {
            Some(bound_with(&filt, &xs[..2], BoundFlavor::Prop34)?.n)
        } else {
            None
        };
        let original = ctx.tables(&inst.quotient())?;
        Ok(Self {
            inst,
            ctx,
            filt,
            a_values: main.a_values.clone(),
            main,
            one_bound,
            two_bound,
            original,
            cache: HashMap::new(),
        })
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn main_bound(&self) -> &BoundReport {
        &self.main
    }

    pub fn original(&self) -> &HomologicalDims {
        &self.original
    }

    fn tables_for(&mut self, xs: &[AlgebraElement]) -> Result<HomologicalDims, PerturbError> {
        let m = &self.inst.module;
        let sub = m.sequence_times(xs);
        if let Some(t) = self.cache.get(sub.space()) {
            return Ok(t.clone());
        }
        let q = m.quotient(&sub)?.module;
        let tables = self.ctx.tables(&q)?;
        self.cache.insert(sub.space().clone(), tables.clone());
        Ok(tables)
    }

    /// Replaces `x_i` by `x_i + ε_i` (with `ε_i ∈ J^level`) and compares invariants.
    pub fn perturb_once(&mut self, eps: &[AlgebraElement], level: usize) -> Result<PerturbationOutcome, PerturbError> {
        let xs = &self.inst.sequence;
        if eps.len() != xs.len() {
            return Err(PerturbError::LengthMismatch {
                expected: xs.len(),
                found: eps.len(),
            });
        }
        let alg = self.inst.algebra();
        if eps.iter().any(|e| !same_algebra(alg, e.algebra())) {
            return Err(PerturbError::AlgebraMismatch);
        }
        let shifted: Vec<AlgebraElement> = xs
            .iter()
            .zip(eps)
            .map(|(x, e)| x.add(e).expect("same algebra"))
            .collect();
        let perturbed = self.tables_for(&shifted)?;
        let betti_equal = perturbed.betti == self.original.betti;
        let bass_equal = perturbed.bass == self.original.bass;
        let dims_equal = perturbed.pd == self.original.pd
            && perturbed.id == self.original.id
            && perturbed.depth == self.original.depth;
        let aux = self.aux_checks(&shifted, level)?;
        let verdict = betti_equal && bass_equal && dims_equal && aux.iter().all(|a| a.holds);
        Ok(PerturbationOutcome {
            level,
            epsilons: eps.iter().map(ToString::to_string).collect(),
            perturbed,
            betti_equal,
            bass_equal,
            dims_equal,
            aux,
            verdict,
        })
    }

    /// Claims about `x_1' = x_1 + ε_1` that hold once `level` reaches the relevant bound.
    fn aux_checks(&self, shifted: &[AlgebraElement], level: usize) -> Result<Vec<AuxCheck>, PerturbError> {
        let m = &self.inst.module;
        let j = &self.inst.ideal;
        let xs = &self.inst.sequence;
        let mut out = Vec::new();
        let mut push = |name: &str, holds: bool| {
            out.push(AuxCheck {
                name: name.to_string(),
                holds,
            })
        };
        if self.one_bound.is_some_and(|b| level >= b) {
            let zero = m.zero_submodule();
            push("one_element_colon", m.colon(&zero, &xs[0]) == m.colon(&zero, &shifted[0]));
            let orig = self.filt.initial_lifts(&m.sequence_times(&xs[..1]))?;
            let pert = self.filt.initial_lifts(&m.sequence_times(&shifted[..1]))?;
            push("one_element_initial", orig == pert);
        }
        if self.two_bound.is_some_and(|b| level >= b) {
            let zero = m.zero_submodule();
            push(
                "two_elements_annihilator",
                m.relative_loewy_length(j, &m.colon(&zero, &shifted[0]), &zero) == Some(self.a_values[0]),
            );
            let a2 = colon_loewy_length(m, &shifted[..1], &xs[1], j);
            push("two_elements_loewy", a2.is_some_and(|a| a <= 2 * self.a_values[1]));
            let mut mixed = vec![shifted[0].clone(), xs[1].clone()];
            let orig = self.filt.initial_lifts(&m.sequence_times(&xs[..2]))?;
            let pert = self.filt.initial_lifts(&m.sequence_times(&mixed))?;
            push("two_elements_initial", orig == pert);
            if level >= self.main.n {
                // (x_1', x_2, ..., x_{i+1}) against (x_1, ..., x_{i+1}) for 2 ≤ i ≤ r - 1
                for i in 2..xs.len() {
                    let a_next = colon_loewy_length(m, &mixed, &xs[i], j);
                    push("sequence_loewy", a_next.is_some_and(|a| a <= 2 * self.a_values[i]));
                    mixed.push(xs[i].clone());
                    let orig_sub = m.sequence_times(&xs[..=i]);
                    let pert_sub = m.sequence_times(&mixed);
                    push(
                        "sequence_initial",
                        self.filt.initial_lifts(&orig_sub)? == self.filt.initial_lifts(&pert_sub)?,
                    );
                    push(
                        "sequence_artin_rees",
                        self.filt.artin_rees(&orig_sub)? == self.filt.artin_rees(&pert_sub)?,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Runs `plan` on `ε`-tuples drawn from `J^level`.
    pub fn sample(&mut self, level: usize, plan: SamplePlan, seed: u64) -> Result<SampleResult, PerturbError> {
        let alg = Arc::clone(self.inst.algebra());
        let r = self.inst.sequence.len();
        let basis: Vec<Vec<Elem>> = self.inst.ideal.power(level).space().basis().to_vec();
        let d = basis.len();
        let p = alg.field().p() as u64;
        let zero = AlgebraElement::zero(&alg);
        if d == 0 || r == 0 {
            let outcome = self.perturb_once(&vec![zero; r], level)?;
            return Ok(SampleResult {
                level,
                space_dim: d,
                exhaustive: true,
                vacuous: true,
                outcomes: vec![outcome],
            });
        }
        let digits = d * r;
        let total = (digits as u32)
            .checked_mul(64 - (p - 1).leading_zeros())
            .filter(|&bits| bits < 63)
            .map(|_| p.pow(digits as u32));
        let exhaustive = total.is_some_and(|t| t <= plan.exhaustive_limit);
        let tuples: Vec<Vec<Elem>> = if exhaustive {
            let total = total.expect("checked");
            (0..total)
                .map(|mut index| {
                    (0..digits)
                        .map(|_| {
                            let c = (index % p) as Elem;
                            index /= p;
                            c
                        })
                        .collect()
                })
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(level as u64);
            (0..plan.samples)
                .map(|_| (0..digits).map(|_| rng.gen_range(0..p) as Elem).collect())
                .collect()
        };
        let field = alg.field();
        let mut outcomes = Vec::with_capacity(tuples.len());
        for coeffs in tuples {
            let eps: Vec<AlgebraElement> = coeffs
                .chunks(d)
                .map(|cs| {
                    let mut v = vec![0; alg.dim()];
                    for (&c, b) in cs.iter().zip(&basis) {
                        for (o, &x) in v.iter_mut().zip(b) {
                            *o = field.mul_add(*o, c, x);
                        }
                    }
                    AlgebraElement::from_coords(&alg, v)
                })
                .collect();
            outcomes.push(self.perturb_once(&eps, level)?);
        }
        Ok(SampleResult {
            level,
            space_dim: d,
            exhaustive,
            vacuous: false,
            outcomes,
        })
    }

    /// Samples every level from the proved bound down to zero.
    pub fn threshold(&mut self, plan: SamplePlan, seed: u64) -> Result<ThresholdReport, PerturbError> {
        let n_main = self.main.n;
        let mut levels = Vec::new();
        let mut stable_from = n_main;
        let mut still_stable = true;
        let mut largest_violation = None;
        let mut falsification = None;
        for level in (0..=n_main).rev() {
            let res = self.sample(level, plan, seed)?;
            let violations = res.violations();
            if violations > 0 {
                still_stable = false;
                largest_violation.get_or_insert(level);
                if level >= n_main && falsification.is_none() {
                    falsification = res.outcomes.iter().find(|o| !o.tables_equal()).cloned();
                }
            } else if still_stable {
                stable_from = level;
            }
            levels.push(LevelSummary {
                level,
                tuples: res.outcomes.len(),
                violations,
                exhaustive: res.exhaustive,
                vacuous: res.vacuous,
            });
        }
        Ok(ThresholdReport {
            bound: self.main.clone(),
            levels,
            stable_from,
            largest_violation,
            falsification,
        })
    }
}

/// One perturbation of `inst` by `eps ⊂ J^level`.
pub fn perturb_once(
    inst: &Instance,
    eps: &[AlgebraElement],
    level: usize,
    ctx: &HomologyContext,
) -> Result<PerturbationOutcome, PerturbError> {
    Perturber::new(inst, ctx)?.perturb_once(eps, level)
}

pub fn sample_perturbations(
    inst: &Instance,
    level: usize,
    plan: SamplePlan,
    seed: u64,
    ctx: &HomologyContext,
) -> Result<SampleResult, PerturbError> {
    Perturber::new(inst, ctx)?.sample(level, plan, seed)
}

pub fn threshold_search(
    inst: &Instance,
    plan: SamplePlan,
    seed: u64,
    ctx: &HomologyContext,
) -> Result<ThresholdReport, PerturbError> {
    Perturber::new(inst, ctx)?.threshold(plan, seed)
}
