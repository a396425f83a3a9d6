//! Randomized verification of the filtration, homology and perturbation claims.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{GenConfig, InstanceSpec};
use super::{bound_with, colon_loewy_length, BoundFlavor, Instance, PerturbError, Perturber, SamplePlan};
use crate::algebra::{AlgebraElement, Ideal};
use crate::fdmodule::{present_module, FdModule, ModuleError, Submodule};
use crate::grading::{GradedFiltration, GradingError};
use crate::homology::{
    ext_induced_with, minimal_free_resolution, tor_induced_with, HomologyContext, HomologyError, InducedMapReport,
    DEFAULT_FREE_DIM_LIMIT,
};
use crate::linalg::{Elem, SubspaceFp};

/// A named claim checked on every generated case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    ArAndInt,
    IntQuotient,
    ArQuotient,
    LoewyQuotient,
    ColonMonotone,
    BettiDualRoute,
    BassSocle,
    MultiplyInHom,
    OneElement,
    TwoElements,
    Cong,
    X1,
    TorContainment,
    ExtContainment,
    InducedMaps,
    LengthOne,
    LongExactSequence,
    MainBetti,
    MainBass,
    MainProofAux,
    Corollary,
}

impl Property {
    pub const ALL: [Property; 21] = [
        Property::ArAndInt,
        Property::IntQuotient,
        Property::ArQuotient,
        Property::LoewyQuotient,
        Property::ColonMonotone,
        Property::BettiDualRoute,
        Property::BassSocle,
        Property::MultiplyInHom,
        Property::OneElement,
        Property::TwoElements,
        Property::Cong,
        Property::X1,
        Property::TorContainment,
        Property::ExtContainment,
        Property::InducedMaps,
        Property::LengthOne,
        Property::LongExactSequence,
        Property::MainBetti,
        Property::MainBass,
        Property::MainProofAux,
        Property::Corollary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::ArAndInt => "ar_and_int",
            Property::IntQuotient => "int_quotient",
            Property::ArQuotient => "ar_quotient",
            Property::LoewyQuotient => "loewy_quotient",
            Property::ColonMonotone => "colon_monotone",
            Property::BettiDualRoute => "betti_dual_route",
            Property::BassSocle => "bass_socle",
            Property::MultiplyInHom => "multiply_in_hom",
            Property::OneElement => "one_element",
            Property::TwoElements => "two_elements",
            Property::Cong => "cong",
            Property::X1 => "x1",
            Property::TorContainment => "tor_containment",
            Property::ExtContainment => "ext_containment",
            Property::InducedMaps => "induced_maps",
            Property::LengthOne => "length_one",
            Property::LongExactSequence => "long_exact_sequence",
            Property::MainBetti => "main_betti",
            Property::MainBass => "main_bass",
            Property::MainProofAux => "main_proof_aux",
            Property::Corollary => "corollary",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn needs_homology(self) -> bool {
        matches!(
            self,
            Property::BettiDualRoute
                | Property::BassSocle
                | Property::TorContainment
                | Property::ExtContainment
                | Property::InducedMaps
                | Property::LengthOne
                | Property::LongExactSequence
                | Property::MainBetti
                | Property::MainBass
                | Property::MainProofAux
                | Property::Corollary
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate corruption used to test the suite itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Adds one to `β_0` of the unperturbed quotient before the main comparison.
    FlipBetti,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub j_max: usize,
    pub generator: GenConfig,
    pub plan: SamplePlan,
    /// Random `ε` drawn per case for the single-element claims.
    pub side_samples: usize,
    /// Properties to run; empty means all.
    pub properties: Vec<Property>,
    pub fault: Option<Fault>,
    pub homology_limit: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: usize, j_max: usize) -> Self {
        Self {
            seed,
            cases,
            j_max,
            generator: GenConfig::small(),
            plan: SamplePlan::budget(20),
            side_samples: 2,
            properties: Vec::new(),
            fault: None,
            homology_limit: DEFAULT_FREE_DIM_LIMIT,
        }
    }

    fn selected(&self) -> Vec<Property> {
        if self.properties.is_empty() {
            Property::ALL.to_vec()
        } else {
            let mut v = self.properties.clone();
            v.sort();
            v.dedup();
            v
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail(String),
    /// The relevant power of `J` is zero.
    Vacuous,
    NotApplicable,
    /// A size cap was hit.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub case: usize,
    pub spec: InstanceSpec,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: Property,
    pub passed: usize,
    pub failed: usize,
    pub vacuous: usize,
    pub not_applicable: usize,
    pub skipped: usize,
    pub failures: Vec<FailureRecord>,
}

impl PropertyTally {
    fn new(property: Property) -> Self {
        Self {
            property,
            passed: 0,
            failed: 0,
            vacuous: 0,
            not_applicable: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: usize,
    pub j_max: usize,
    /// Cases for which the generator produced an instance.
    pub generated: usize,
    /// Candidates discarded by the generator's size caps.
    pub rejected: usize,
    /// Candidates discarded because the main bound was vacuous.
    pub rejected_vacuous: usize,
    /// Generated cases by sequence length.
    pub by_length: BTreeMap<usize, usize>,
    /// Cases with a non-vacuous main bound, by sequence length.
    pub nonvacuous_by_length: BTreeMap<usize, usize>,
    pub properties: Vec<PropertyTally>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn tally(&self, p: Property) -> Option<&PropertyTally> {
        self.properties.iter().find(|t| t.property == p)
    }

    pub fn failing_properties(&self) -> Vec<Property> {
        self.properties.iter().filter(|t| t.failed > 0).map(|t| t.property).collect()
    }
}

struct CaseResult {
    case: usize,
    spec: Option<InstanceSpec>,
    rejected: usize,
    rejected_vacuous: usize,
    length: Option<usize>,
    statuses: Vec<(Property, CaseStatus)>,
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Generates `cfg.cases` random instances and checks every selected property on each.
pub fn verify_suite(cfg: &SuiteConfig) -> SuiteReport {
    let props = cfg.selected();
    let results: Vec<CaseResult> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = case_rng(cfg.seed, case);
            match cfg.generator.generate(&mut rng) {
                Some(g) => {
                    let statuses = run_case(&g.instance, cfg, &props, &mut rng);
                    CaseResult {
                        case,
                        length: Some(g.instance.sequence.len()),
                        spec: Some(g.spec),
                        rejected: g.rejected,
                        rejected_vacuous: g.rejected_vacuous,
                        statuses,
                    }
                }
                None => CaseResult {
                    case,
                    spec: None,
                    rejected: cfg.generator.max_attempts,
                    rejected_vacuous: 0,
                    length: None,
                    statuses: props
                        .iter()
                        .map(|&p| (p, CaseStatus::Skipped("no instance within size caps".into())))
                        .collect(),
                },
            }
        })
        .collect();
    aggregate(cfg, &props, results)
}

/// Checks every selected property on the given instances.
pub fn verify_instances(specs: &[InstanceSpec], cfg: &SuiteConfig) -> SuiteReport {
    let props = cfg.selected();
    let results: Vec<CaseResult> = specs
        .par_iter()
        .enumerate()
        .map(|(case, spec)| {
            let mut rng = case_rng(cfg.seed, case);
            let statuses = match spec.build() {
                Ok(inst) => run_case(&inst, cfg, &props, &mut rng),
                Err(e) => props.iter().map(|&p| (p, CaseStatus::Fail(format!("build: {e}")))).collect(),
            };
            CaseResult {
                case,
                spec: Some(spec.clone()),
                rejected: 0,
                rejected_vacuous: 0,
                length: Some(spec.sequence.len()),
                statuses,
            }
        })
        .collect();
    aggregate(cfg, &props, results)
}

fn aggregate(cfg: &SuiteConfig, props: &[Property], results: Vec<CaseResult>) -> SuiteReport {
    let mut tallies: Vec<PropertyTally> = props.iter().map(|&p| PropertyTally::new(p)).collect();
    let mut by_length = BTreeMap::new();
    let mut nonvacuous_by_length = BTreeMap::new();
    let (mut generated, mut rejected, mut rejected_vacuous) = (0, 0, 0);
    for res in results {
        rejected += res.rejected;
        rejected_vacuous += res.rejected_vacuous;
        if let Some(r) = res.length {
            generated += 1;
            *by_length.entry(r).or_insert(0) += 1;
        }
        for (p, status) in res.statuses {
            let tally = tallies.iter_mut().find(|t| t.property == p).expect("selected property");
            if p == Property::MainBetti && matches!(status, CaseStatus::Pass | CaseStatus::Fail(_)) {
                if let Some(r) = res.length {
                    *nonvacuous_by_length.entry(r).or_insert(0) += 1;
                }
            }
            match status {
                CaseStatus::Pass => tally.passed += 1,
                CaseStatus::Vacuous => tally.vacuous += 1,
                CaseStatus::NotApplicable => tally.not_applicable += 1,
                CaseStatus::Skipped(_) => tally.skipped += 1,
                CaseStatus::Fail(detail) => {
                    tally.failed += 1;
                    if let Some(spec) = &res.spec {
                        tally.failures.push(FailureRecord {
                            case: res.case,
                            spec: spec.clone(),
                            detail,
                        });
                    }
                }
            }
        }
    }
    let all_passed = tallies.iter().all(|t| t.failed == 0);
    SuiteReport {
        seed: cfg.seed,
        cases: cfg.cases,
        j_max: cfg.j_max,
        generated,
        rejected,
        rejected_vacuous,
        by_length,
        nonvacuous_by_length,
        properties: tallies,
        all_passed,
    }
}

/// Why a check could not produce a verdict.
enum CheckError {
    Skip(String),
    Fail(String),
}

impl From<HomologyError> for CheckError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::SizeCap { .. } => CheckError::Skip(e.to_string()),
            other => CheckError::Fail(other.to_string()),
        }
    }
}

impl From<PerturbError> for CheckError {
    fn from(e: PerturbError) -> Self {
        match e {
            PerturbError::Homology(h) => h.into(),
            other => CheckError::Fail(other.to_string()),
        }
    }
}

impl From<GradingError> for CheckError {
    fn from(e: GradingError) -> Self {
        CheckError::Fail(e.to_string())
    }
}

impl From<ModuleError> for CheckError {
    fn from(e: ModuleError) -> Self {
        CheckError::Fail(e.to_string())
    }
}

type Check = Result<CaseStatus, CheckError>;

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> CaseStatus {
    if ok {
        CaseStatus::Pass
    } else {
        CaseStatus::Fail(detail())
    }
}

struct Case<'a> {
    inst: &'a Instance,
    cfg: &'a SuiteConfig,
    filt: GradedFiltration<'a>,
    rng: ChaCha8Rng,
}

fn run_case(inst: &Instance, cfg: &SuiteConfig, props: &[Property], rng: &mut ChaCha8Rng) -> Vec<(Property, CaseStatus)> {
    let ctx = HomologyContext::with_limit(inst.algebra(), cfg.j_max, cfg.homology_limit);
    let filt = match GradedFiltration::new(&inst.module, &inst.ideal) {
        Ok(f) => f,
        Err(e) => return props.iter().map(|&p| (p, CaseStatus::Fail(e.to_string()))).collect(),
    };
    // every property draws from its own stream so that selecting a subset does not change the others
    let base: u64 = rng.gen();
    let mut out = Vec::with_capacity(props.len());
    let mut main_cache: Option<Result<MainRun, CheckError>> = None;
    for &p in props {
        let mut case = Case {
            inst,
            cfg,
            filt: filt.clone(),
            rng: case_rng(base, p as usize),
        };
        let status = {
            let result = match p {
                Property::MainBetti | Property::MainBass | Property::MainProofAux | Property::Corollary => {
                    let run = main_cache.get_or_insert_with(|| case.main_run(&ctx));
                    match run {
                        Ok(run) => Ok(run.status(p, cfg.fault)),
                        Err(CheckError::Skip(s)) => Err(CheckError::Skip(s.clone())),
                        Err(CheckError::Fail(s)) => Err(CheckError::Fail(s.clone())),
                    }
                }
                _ => case.check(p, &ctx),
            };
            match result {
                Ok(s) => s,
                Err(CheckError::Skip(s)) => CaseStatus::Skipped(s),
                Err(CheckError::Fail(s)) => CaseStatus::Fail(s),
            }
        };
        out.push((p, status));
    }
    out
}

/// Results of the main-theorem sampling, shared by four properties.
struct MainRun {
    vacuous: bool,
    original_betti: Vec<usize>,
    rows: Vec<MainRow>,
}

struct MainRow {
    epsilons: Vec<String>,
    betti: Vec<usize>,
    bass_equal: bool,
    dims_equal: bool,
    aux_failed: Vec<String>,
}

impl MainRun {
    fn status(&self, p: Property, fault: Option<Fault>) -> CaseStatus {
        if self.vacuous {
            return CaseStatus::Vacuous;
        }
        let mut original = self.original_betti.clone();
        if p == Property::MainBetti && fault == Some(Fault::FlipBetti) {
            if let Some(b) = original.first_mut() {
                *b += 1;
            }
        }
        let bad = self.rows.iter().find(|row| match p {
            Property::MainBetti => row.betti != original,
            Property::MainBass => !row.bass_equal,
            Property::Corollary => !row.dims_equal,
            _ => !row.aux_failed.is_empty(),
        });
        match bad {
            None => CaseStatus::Pass,
            Some(row) => CaseStatus::Fail(format!(
                "epsilons [{}]{}",
                row.epsilons.join(", "),
                if p == Property::MainProofAux {
                    format!(": {}", row.aux_failed.join(", "))
                } else {
                    String::new()
                }
            )),
        }
    }
}

impl<'a> Case<'a> {
    fn module(&self) -> &'a FdModule {
        &self.inst.module
    }

    fn ideal(&self) -> &'a Ideal {
        &self.inst.ideal
    }

    fn xs(&self) -> &'a [AlgebraElement] {
        &self.inst.sequence
    }

    fn random_vector(&mut self, basis: &[Vec<Elem>], ambient: usize) -> Vec<Elem> {
        let f = self.module().field();
        let mut v = vec![0; ambient];
        for b in basis {
            let c = self.rng.gen_range(0..f.p());
            for (o, &x) in v.iter_mut().zip(b) {
                *o = f.mul_add(*o, c, x);
            }
        }
        v
    }

    fn random_submodule_of(&mut self, n: &Submodule) -> Submodule {
        let m = self.module();
        let count = self.rng.gen_range(1..=2);
        let elems: Vec<Vec<Elem>> = (0..count)
            .map(|_| self.random_vector(n.space().basis(), m.dim()))
            .collect();
        m.submodule_generated(&elems)
    }

    fn random_submodule(&mut self) -> Submodule {
        let m = self.module();
        match self.rng.gen_range(0..4) {
            0 if !self.xs().is_empty() => {
                let i = self.rng.gen_range(1..=self.xs().len());
                self.inst.prefix(i)
            }
            1 => m.ideal_times(self.ideal(), &m.full()),
            _ => self.random_submodule_of(&m.full()),
        }
    }

    /// A pair `K ⊆ N ⊆ M`.
    fn random_pair(&mut self) -> (Submodule, Submodule) {
        let n = self.random_submodule();
        let k = if self.rng.gen_bool(0.3) {
            self.module().ideal_times(self.ideal(), &n)
        } else {
            self.random_submodule_of(&n)
        };
        (k, n)
    }

    fn random_in_power(&mut self, level: usize) -> Option<AlgebraElement> {
        let alg = self.inst.algebra();
        let power = self.ideal().power(level);
        if power.is_zero() {
            return None;
        }
        let v = self.random_vector(power.space().basis(), alg.dim());
        Some(AlgebraElement::from_coords(alg, v))
    }

    fn bound(&self, xs: &[AlgebraElement], flavor: BoundFlavor) -> Result<usize, CheckError> {
        Ok(bound_with(&self.filt, xs, flavor)?.n)
    }

    fn check(&mut self, p: Property, ctx: &HomologyContext) -> Check {
        match p {
            Property::ArAndInt => self.ar_and_int(),
            Property::IntQuotient => self.int_quotient(),
            Property::ArQuotient => self.ar_quotient(),
            Property::LoewyQuotient => self.loewy_quotient(),
            Property::ColonMonotone => self.colon_monotone(),
            Property::BettiDualRoute => self.betti_dual_route(ctx),
            Property::BassSocle => self.bass_socle(ctx),
            Property::MultiplyInHom => self.multiply_in_hom(),
            Property::OneElement => self.one_element(),
            Property::TwoElements => self.two_elements(),
            Property::Cong => self.cong(),
            Property::X1 => self.x1(),
            Property::TorContainment | Property::ExtContainment => self.containment(p, ctx),
            Property::InducedMaps => self.induced_maps(ctx),
            Property::LengthOne => self.length_one(ctx),
            Property::LongExactSequence => self.long_exact_sequence(ctx),
            Property::MainBetti | Property::MainBass | Property::MainProofAux | Property::Corollary => {
                unreachable!("handled by the shared main run")
            }
        }
    }

    fn ar_and_int(&mut self) -> Check {
        let mut subs: Vec<Submodule> = (1..=self.xs().len()).map(|i| self.inst.prefix(i)).collect();
        subs.push(self.random_submodule());
        for n in &subs {
            self.filt.artin_rees(n)?;
        }
        Ok(CaseStatus::Pass)
    }

    fn int_quotient(&mut self) -> Check {
        let (k, n) = self.random_pair();
        let m = self.module();
        let q = m.quotient(&k)?;
        let qfilt = GradedFiltration::new(&q.module, self.ideal())?;
        let int_n = self.filt.initial_module(&n)?;
        let int_k = self.filt.initial_module(&k)?;
        let nk = q.project_submodule(&n);
        let int_nk = qfilt.initial_module(&nk)?;
        for d in 0..self.filt.length() {
            let expected = int_n.degree_dim(d) - int_k.degree_dim(d);
            if int_nk.degree_dim(d) != expected {
                return Ok(CaseStatus::Fail(format!(
                    "degree {d}: dim int(N/K) = {}, dim int(N) - dim int(K) = {expected}",
                    int_nk.degree_dim(d)
                )));
            }
            let next = self.filt.piece(d + 1);
            // image of int(N)_d is int(N/K)_d
            if d < qfilt.length() {
                let image = int_n.lifted(d).image(&q.projection).sum(qfilt.piece(d + 1).space()).expect("same ambient");
                if image != *int_nk.lifted(d) {
                    return Ok(CaseStatus::Fail(format!("degree {d}: projection is not onto int(N/K)")));
                }
            }
            // kernel of int(N)_d -> int(N/K)_d is int(K)_d
            let killed = next.sum(&k);
            let kernel = int_n.lifted(d).intersect(killed.space()).expect("same ambient");
            if kernel != *int_k.lifted(d) {
                return Ok(CaseStatus::Fail(format!("degree {d}: kernel differs from int(K)")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn ar_quotient(&mut self) -> Check {
        let (k, n) = self.random_pair();
        let q = self.module().quotient(&k)?;
        let qfilt = GradedFiltration::new(&q.module, self.ideal())?;
        let ar_bar = qfilt.artin_rees(&q.project_submodule(&n))?;
        let ar = self.filt.artin_rees(&n)?;
        Ok(verdict(ar_bar <= ar, || format!("ar(N/K) = {ar_bar} > ar(N) = {ar}")))
    }

    fn loewy_quotient(&mut self) -> Check {
        let m = self.module();
        let n = self.random_submodule();
        let whole = m.loewy_length(self.ideal(), &m.full());
        let quotient = m.relative_loewy_length(self.ideal(), &m.full(), &n);
        let via_module = {
            let q = m.quotient(&n)?;
            q.module.loewy_length(self.ideal(), &q.module.full())
        };
        Ok(verdict(quotient <= whole && quotient == via_module, || {
            format!("a(M/N) = {quotient:?}, a(M) = {whole:?}, via quotient module {via_module:?}")
        }))
    }

    fn colon_monotone(&mut self) -> Check {
        let m = self.module();
        let n = self.random_submodule();
        for x in self.xs() {
            let colon = m.colon(&n, x);
            if !n.is_contained_in(&colon) {
                return Ok(CaseStatus::Fail(format!("N not inside (N : {x})")));
            }
            let everything = colon == m.full();
            let x_m_inside = m.element_times(x, &m.full()).is_contained_in(&n);
            if everything != x_m_inside {
                return Ok(CaseStatus::Fail(format!("(N : {x}) = M is {everything}, xM in N is {x_m_inside}")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn betti_dual_route(&mut self, ctx: &HomologyContext) -> Check {
        ctx.betti(self.module())?;
        ctx.betti(&self.inst.quotient())?;
        Ok(CaseStatus::Pass)
    }

    fn bass_socle(&mut self, ctx: &HomologyContext) -> Check {
        for m in [self.module().clone(), self.inst.quotient()] {
            let mu0 = ctx.bass(&m)?.values()[0];
            if mu0 != m.socle().dim() {
                return Ok(CaseStatus::Fail(format!("mu^0 = {mu0}, socle dimension {}", m.socle().dim())));
            }
        }
        Ok(CaseStatus::Pass)
    }

    /// Draws `ε ∈ J^level` `side_samples` times; `None` when `J^level = 0`.
    fn side_epsilons(&mut self, level: usize) -> Option<Vec<AlgebraElement>> {
        let first = self.random_in_power(level)?;
        let mut v = vec![first];
        for _ in 1..self.cfg.side_samples {
            v.extend(self.random_in_power(level));
        }
        Some(v)
    }

    fn multiply_in_hom(&mut self) -> Check {
        let Some(x) = self.xs().first().cloned() else {
            return Ok(CaseStatus::NotApplicable);
        };
        let level = self.bound(std::slice::from_ref(&x), BoundFlavor::Prop32)?;
        let Some(eps) = self.side_epsilons(level) else {
            return Ok(CaseStatus::Vacuous);
        };
        let m = std::sync::Arc::new(self.module().clone());
        for e in eps {
            if let Err(err) = m.induced_multiplication_hom(&e, &x) {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: {err}")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn one_element(&mut self) -> Check {
        let Some(x) = self.xs().first().cloned() else {
            return Ok(CaseStatus::NotApplicable);
        };
        let level = self.bound(std::slice::from_ref(&x), BoundFlavor::Prop32)?;
        let Some(eps) = self.side_epsilons(level) else {
            return Ok(CaseStatus::Vacuous);
        };
        let m = self.module();
        let zero = m.zero_submodule();
        let ann = m.colon(&zero, &x);
        let init = self.filt.initial_lifts(&m.element_times(&x, &m.full()))?;
        for e in eps {
            let xp = x.add(&e).expect("same algebra");
            if m.colon(&zero, &xp) != ann {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: annihilators differ")));
            }
            if self.filt.initial_lifts(&m.element_times(&xp, &m.full()))? != init {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: int(xM) differs")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn two_elements(&mut self) -> Check {
        if self.xs().len() < 2 {
            return Ok(CaseStatus::NotApplicable);
        }
        let xs = self.xs();
        let level = self.bound(&xs[..2], BoundFlavor::Prop34)?;
        let Some(eps) = self.side_epsilons(level) else {
            return Ok(CaseStatus::Vacuous);
        };
        let m = self.module();
        let j = self.ideal();
        let zero = m.zero_submodule();
        let a1 = colon_loewy_length(m, &[], &xs[0], j);
        let a2 = colon_loewy_length(m, &xs[..1], &xs[1], j).expect("proper ideal");
        let init = self.filt.initial_lifts(&m.sequence_times(&xs[..2]))?;
        for e in eps {
            let xp = xs[0].add(&e).expect("same algebra");
            let a1p = m.relative_loewy_length(j, &m.colon(&zero, &xp), &zero);
            if a1p != a1 {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: a(0 : x1') = {a1p:?}, a1 = {a1:?}")));
            }
            let a2p = colon_loewy_length(m, std::slice::from_ref(&xp), &xs[1], j);
            if !a2p.is_some_and(|a| a <= 2 * a2) {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: perturbed a2 = {a2p:?} > 2 * {a2}")));
            }
            if self.filt.initial_lifts(&m.sequence_times(&[xp, xs[1].clone()]))? != init {
                return Ok(CaseStatus::Fail(format!("epsilon {e}: int((x1, x2)M) differs")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn cong(&mut self) -> Check {
        let xs = self.xs();
        if xs.len() < 2 {
            return Ok(CaseStatus::NotApplicable);
        }
        let m = self.module();
        let subquotient_dim = |colon: Submodule, base: Submodule, extra: Submodule| colon.dim() - base.sum(&extra).dim();
        for i in 2..=xs.len() {
            // 1-based x_1..x_{i-1} is xs[..i-1]; x_2..x_{i-1} is xs[1..i-1]
            let first = m.sequence_times(&xs[..i - 1]);
            let middle = m.sequence_times(&xs[1..i - 1]);
            let tail = m.sequence_times(&xs[1..i]);
            let left = subquotient_dim(m.colon(&first, &xs[i - 1]), first.clone(), m.colon(&middle, &xs[i - 1]));
            let right = subquotient_dim(m.colon(&tail, &xs[0]), tail.clone(), m.colon(&middle, &xs[0]));
            if left != right {
                return Ok(CaseStatus::Fail(format!("i = {i}: dimensions {left} and {right}")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    fn x1(&mut self) -> Check {
        let xs = self.xs();
        if xs.len() < 2 {
            return Ok(CaseStatus::NotApplicable);
        }
        let m = self.module();
        let j = self.ideal();
        let a: Vec<usize> = super::filter_regular_profile(m, xs, j).values()?;
        for i in 2..=xs.len() {
            let lhs = colon_loewy_length(m, &xs[1..i], &xs[0], j);
            let rhs: usize = a[..i].iter().sum();
            if !lhs.is_some_and(|v| v <= rhs) {
                return Ok(CaseStatus::Fail(format!("i = {i}: {lhs:?} > {rhs}")));
            }
        }
        Ok(CaseStatus::Pass)
    }

    /// `x_1`, an `ε` at the lemma bound, and the maps `ā ↦ x_1 a`, `ā ↦ ε a`, `ā ↦ (x_1 + ε) a`.
    fn lemma_maps(&mut self) -> Result<Option<LemmaMaps>, CheckError> {
        let Some(x) = self.xs().first().cloned() else {
            return Ok(None);
        };
        let level = self.bound(std::slice::from_ref(&x), BoundFlavor::Lemma)?;
        let Some(eps) = self.random_in_power(level) else {
            return Ok(Some(LemmaMaps::Vacuous));
        };
        let m = std::sync::Arc::new(self.module().clone());
        let phi = m.induced_multiplication_hom(&x, &x)?;
        let phi_eps = m.induced_multiplication_hom(&eps, &x)?;
        let xp = x.add(&eps).expect("same algebra");
        let phi_prime = m.induced_multiplication_hom(&xp, &x)?;
        Ok(Some(LemmaMaps::Maps {
            x,
            eps,
            xp,
            phi,
            phi_eps,
            phi_prime,
        }))
    }

    fn containment(&mut self, p: Property, ctx: &HomologyContext) -> Check {
        let Some(maps) = self.lemma_maps()? else {
            return Ok(CaseStatus::NotApplicable);
        };
        let LemmaMaps::Maps { eps, phi_eps, x, .. } = maps else {
            return Ok(CaseStatus::Vacuous);
        };
        let j_max = self.cfg.j_max;
        let j = self.ideal();
        let induced = |res: &crate::homology::FreeResolution, j_max: usize| -> Result<InducedMapReport, HomologyError> {
            if p == Property::TorContainment {
                tor_induced_with(res, &phi_eps, j_max, j)
            } else {
                ext_induced_with(res, &phi_eps, j_max, j)
            }
        };
        let report = induced(ctx.residue_resolution()?, j_max)?;
        if !report.all_contained() {
            return Ok(CaseStatus::Fail(format!("E = k, epsilon {eps}: image not in J times target")));
        }
        // a second test module E = A/(x_1), in low degrees
        let alg = self.inst.algebra();
        let e_mod = present_module(alg, 1, &[vec![x.clone()]])?;
        let low = j_max.min(3);
        match minimal_free_resolution(&e_mod, low + 1) {
            Ok(res) => {
                if !induced(&res, low)?.all_contained() {
                    return Ok(CaseStatus::Fail(format!("E = A/({x}), epsilon {eps}: image not in J times target")));
                }
            }
            Err(HomologyError::SizeCap { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        Ok(CaseStatus::Pass)
    }

    fn induced_maps(&mut self, ctx: &HomologyContext) -> Check {
        let Some(maps) = self.lemma_maps()? else {
            return Ok(CaseStatus::NotApplicable);
        };
        let LemmaMaps::Maps { eps, phi, phi_prime, .. } = maps else {
            return Ok(CaseStatus::Vacuous);
        };
        let res = ctx.residue_resolution()?;
        let (j_max, j) = (self.cfg.j_max, self.ideal());
        let tor = tor_induced_with(res, &phi, j_max, j)?;
        let tor_p = tor_induced_with(res, &phi_prime, j_max, j)?;
        let ext = ext_induced_with(res, &phi, j_max, j)?;
        let ext_p = ext_induced_with(res, &phi_prime, j_max, j)?;
        let same = |a: &InducedMapReport, b: &InducedMapReport| {
            a.degrees.iter().zip(&b.degrees).all(|(u, v)| u.matrix == v.matrix)
        };
        Ok(verdict(same(&tor, &tor_p) && same(&ext, &ext_p), || {
            format!("epsilon {eps}: induced maps differ")
        }))
    }

    fn length_one(&mut self, ctx: &HomologyContext) -> Check {
        let Some(maps) = self.lemma_maps()? else {
            return Ok(CaseStatus::NotApplicable);
        };
        let LemmaMaps::Maps { eps, x, xp, .. } = maps else {
            return Ok(CaseStatus::Vacuous);
        };
        let m = self.module();
        let q = super::quotient_by(m, std::slice::from_ref(&x));
        let qp = super::quotient_by(m, std::slice::from_ref(&xp));
        let (t, tp) = (ctx.tables(&q)?, ctx.tables(&qp)?);
        Ok(verdict(t.betti == tp.betti && t.bass == tp.bass, || {
            format!("epsilon {eps}: betti {:?} vs {:?}, bass {:?} vs {:?}", t.betti, tp.betti, t.bass, tp.bass)
        }))
    }

    fn long_exact_sequence(&mut self, ctx: &HomologyContext) -> Check {
        let Some(x) = self.xs().first().cloned() else {
            return Ok(CaseStatus::NotApplicable);
        };
        let m = std::sync::Arc::new(self.module().clone());
        let phi = m.induced_multiplication_hom(&x, &x)?;
        let res = ctx.residue_resolution()?;
        // the full Tor groups are costly; low degrees suffice for the bookkeeping
        let tor = tor_induced_with(res, &phi, self.cfg.j_max.min(4), self.ideal())?;
        let q = super::quotient_by(&m, std::slice::from_ref(&x));
        let betti = ctx.betti_via_tor(&q)?;
        let field = m.field();
        let rank = |rows: &Vec<Vec<Elem>>, cols: usize| -> usize {
            if rows.is_empty() || cols == 0 {
                return 0;
            }
            SubspaceFp::span(field, cols, rows.iter().cloned()).dim()
        };
        let mut kernel_prev = 0;
        for d in &tor.degrees {
            let r = rank(&d.matrix, d.source_dim);
            let expected = (d.target_dim - r) + kernel_prev;
            let found = betti.values()[d.degree];
            if found != expected {
                return Ok(CaseStatus::Fail(format!(
                    "degree {}: beta(M/xM) = {found}, coker + ker = {expected}",
                    d.degree
                )));
            }
            kernel_prev = d.source_dim - r;
        }
        Ok(CaseStatus::Pass)
    }

    fn main_run(&mut self, ctx: &HomologyContext) -> Result<MainRun, CheckError> {
        let mut perturber = Perturber::new(self.inst, ctx)?;
        let bound = perturber.main_bound().clone();
        if bound.vacuous {
            return Ok(MainRun {
                vacuous: true,
                original_betti: Vec::new(),
                rows: Vec::new(),
            });
        }
        let seed: u64 = self.rng.gen();
        let sample = perturber.sample(bound.n, self.cfg.plan, seed)?;
        let original_betti = perturber.original().betti.values().to_vec();
        let rows = sample
            .outcomes
            .into_iter()
            .map(|o| MainRow {
                betti: o.perturbed.betti.values().to_vec(),
                bass_equal: o.bass_equal,
                dims_equal: o.dims_equal,
                aux_failed: o.aux.iter().filter(|a| !a.holds).map(|a| a.name.clone()).collect(),
                epsilons: o.epsilons,
            })
            .collect();
        Ok(MainRun {
            vacuous: false,
            original_betti,
            rows,
        })
    }
}

#[allow(clippy::large_enum_variant)]
enum LemmaMaps {
    Vacuous,
    Maps {
        x: AlgebraElement,
        eps: AlgebraElement,
        xp: AlgebraElement,
        phi: crate::fdmodule::ModuleHom,
        phi_eps: crate::fdmodule::ModuleHom,
        phi_prime: crate::fdmodule::ModuleHom,
    },
}
