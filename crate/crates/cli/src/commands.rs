//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpert::fdmodule::FdModule;
use ringpert::grading::{GradedFiltration, GradingError};
use ringpert::homology::{HomologicalDims, HomologyContext, HomologyError};
use ringpert::perturb::{
    filter_regular_profile, perturbation_bound, verify_suite, BoundFlavor, BoundReport, FilterRegProfile, GenConfig,
    Instance, InstanceError, PerturbError, Perturber, SamplePlan, SampleResult, SuiteConfig, SuiteReport,
    ThresholdReport,
};
use serde::Serialize;
use thiserror::Error;

use crate::descriptor::{read_descriptor, Descriptor, DescriptorError};
use crate::report::{table_rows, write_csv, Report, TableRow, Timing};
use crate::{Cli, Command, DEFAULT_BUDGET, DEFAULT_JMAX};

/// Anything that should end the process with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("{path}: {source}")]
    Instance { path: String, source: InstanceError },
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("no instance within the size caps after {0} attempts")]
    Generator(usize),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("writing {path}: {source}")]
    Csv { path: String, source: csv::Error },
}

/// A finished command: its report, the human summary and optional CSV rows.
#[derive(Debug)]
pub struct Execution {
    pub report: Report,
    pub human: String,
    pub csv: Option<(PathBuf, Vec<TableRow>)>,
}

impl Execution {
    pub fn violation(&self) -> bool {
        !self.report.ok
    }

    /// Writes `--out` and CSV files.
    pub fn write_files(&self, out: Option<&std::path::Path>) -> Result<(), CliError> {
        if let Some(path) = out {
            std::fs::write(path, self.report.to_json() + "\n").map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        if let Some((path, rows)) = &self.csv {
            write_csv(path, rows).map_err(|source| CliError::Csv {
                path: path.display().to_string(),
                source,
            })?;
        }
        Ok(())
    }
}

struct Output<T> {
    seed: Option<u64>,
    input: Option<Descriptor>,
    result: T,
    ok: bool,
    human: String,
    csv: Option<(PathBuf, Vec<TableRow>)>,
}

impl<T> Output<T> {
    fn new(input: Option<Descriptor>, result: T, human: String) -> Self {
        Self {
            seed: None,
            input,
            result,
            ok: true,
            human,
            csv: None,
        }
    }
}

/// Runs the parsed command line.
pub fn execute(cli: &Cli) -> Result<Execution, CliError> {
    let start = Instant::now();
    let (name, out) = match &cli.command {
        Command::AlgebraInfo(a) => ("algebra-info", erase(algebra_info(&a.descriptor)?)),
        Command::Invariants(a) => ("invariants", erase(invariants(&a.input.descriptor, a.flavor)?)),
        Command::Resolve(a) => ("resolve", erase(resolve(&a.input.descriptor, a.jmax, a.csv.clone())?)),
        Command::Perturb(a) => ("perturb", erase(perturb(a)?)),
        Command::Threshold(a) => ("threshold", erase(threshold(a)?)),
        Command::Verify(a) => ("verify", erase(verify(a))),
        Command::GenRandom(a) => ("gen-random", erase(gen_random(a)?)),
    };
    let report = Report {
        command: name.to_string(),
        seed: out.seed,
        input: out.input,
        result: out.result,
        ok: out.ok,
        timing: Timing {
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    };
    Ok(Execution {
        report,
        human: out.human,
        csv: out.csv,
    })
}

fn erase<T: Serialize>(o: Output<T>) -> Output<serde_json::Value> {
    Output {
        seed: o.seed,
        input: o.input,
        result: serde_json::to_value(&o.result).expect("results serialize"),
        ok: o.ok,
        human: o.human,
        csv: o.csv,
    }
}

fn load(path: &std::path::Path) -> Result<(Descriptor, Instance), CliError> {
    let d = read_descriptor(path)?;
    let inst = d.instance.build().map_err(|source| CliError::Instance {
        path: path.display().to_string(),
        source,
    })?;
    Ok((d, inst))
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

#[derive(Serialize)]
struct AlgebraInfo {
    p: u64,
    vars: Vec<String>,
    truncation: u32,
    dim: usize,
    basis: Vec<String>,
    maximal_ideal_nilpotency: Option<usize>,
    ideal_j_dim: usize,
    ideal_j_nilpotency: Option<usize>,
    module_dim: usize,
}

fn algebra_info(path: &std::path::Path) -> Result<Output<AlgebraInfo>, CliError> {
    let (d, inst) = load(path)?;
    let alg = inst.algebra();
    let info = AlgebraInfo {
        p: d.instance.p,
        vars: alg.vars().to_vec(),
        truncation: alg.truncation(),
        dim: alg.dim(),
        basis: alg.basis_names(),
        maximal_ideal_nilpotency: ringpert::algebra::Ideal::maximal(alg).nilpotency_index(),
        ideal_j_dim: inst.ideal.dim(),
        ideal_j_nilpotency: inst.ideal.nilpotency_index(),
        module_dim: inst.module.dim(),
    };
    let mut h = String::new();
    writeln!(h, "algebra F_{}[{}] / (relations + m^{})", info.p, info.vars.join(", "), info.truncation).ok();
    writeln!(h, "dimension        {}", info.dim).ok();
    writeln!(h, "basis            {}", info.basis.join(" ")).ok();
    writeln!(h, "m nilpotent at   {}", opt(info.maximal_ideal_nilpotency)).ok();
    writeln!(h, "J dimension      {}", info.ideal_j_dim).ok();
    writeln!(h, "J nilpotent at   {}", opt(info.ideal_j_nilpotency)).ok();
    writeln!(h, "module dimension {}", info.module_dim).ok();
    Ok(Output::new(Some(d), info, h))
}

#[derive(Serialize)]
struct PrefixInvariants {
    length: usize,
    submodule_dim: usize,
    artin_rees: usize,
    initial_degree_dims: Vec<usize>,
    generator_degrees: Vec<usize>,
}

#[derive(Serialize)]
struct Invariants {
    module_dim: usize,
    minimal_generators: usize,
    socle_dim: usize,
    loewy_length: Option<usize>,
    graded_dims: Vec<usize>,
    profile: FilterRegProfile,
    prefixes: Vec<PrefixInvariants>,
    bound: Option<BoundReport>,
}

fn invariants(path: &std::path::Path, flavor: Option<BoundFlavor>) -> Result<Output<Invariants>, CliError> {
    let (mut d, inst) = load(path)?;
    let flavor = flavor.or(d.run.flavor).unwrap_or(BoundFlavor::Main);
    d.run.flavor = Some(flavor);
    let m: &FdModule = &inst.module;
    let j = &inst.ideal;
    let filt = GradedFiltration::new(m, j)?;
    let profile = filter_regular_profile(m, &inst.sequence, j);
    let prefixes = (1..=inst.sequence.len())
        .map(|i| {
            let n = inst.prefix(i);
            let init = filt.initial_module(&n)?;
            Ok(PrefixInvariants {
                length: i,
                submodule_dim: n.dim(),
                artin_rees: filt.artin_rees(&n)?,
                initial_degree_dims: init.degree_dims(),
                generator_degrees: init.generator_degrees().multiset(),
            })
        })
        .collect::<Result<Vec<_>, GradingError>>()?;
    let bound = if profile.all_finite {
        Some(perturbation_bound(m, &inst.sequence, j, flavor)?)
    } else {
        None
    };
    let inv = Invariants {
        module_dim: m.dim(),
        minimal_generators: m.minimal_generators().len(),
        socle_dim: m.socle().dim(),
        loewy_length: m.loewy_length(j, &m.full()),
        graded_dims: (0..filt.length()).map(|d| filt.graded_dim(d)).collect(),
        profile,
        prefixes,
        bound,
    };
    let mut h = String::new();
    writeln!(h, "module dimension   {}", inv.module_dim).ok();
    writeln!(h, "minimal generators {}", inv.minimal_generators).ok();
    writeln!(h, "socle dimension    {}", inv.socle_dim).ok();
    writeln!(h, "J-Loewy length     {}", opt(inv.loewy_length)).ok();
    writeln!(h, "gr_J(M) dims       {}", list(&inv.graded_dims)).ok();
    let a: Vec<String> = inv.profile.a_values.iter().map(|a| opt(*a)).collect();
    writeln!(h, "a_i                {}", a.join(" ")).ok();
    for p in &inv.prefixes {
        writeln!(
            h,
            "(x_1..x_{}):  dim {}, ar_J {}, int degrees {}",
            p.length,
            p.submodule_dim,
            p.artin_rees,
            list(&p.initial_degree_dims)
        )
        .ok();
    }
    match &inv.bound {
        Some(b) => {
            writeln!(h, "bound ({})      N = {}{}", b.flavor, b.n, if b.vacuous { " (vacuous: J^N = 0)" } else { "" }).ok();
        }
        None => {
            writeln!(h, "bound              undefined: sequence is not J-filter regular").ok();
        }
    }
    Ok(Output::new(Some(d), inv, h))
}

#[derive(Serialize)]
struct Resolution {
    jmax: usize,
    residue_betti: Vec<usize>,
    module: HomologicalDims,
    quotient: HomologicalDims,
}

fn tables_text(h: &mut String, label: &str, t: &HomologicalDims) {
    writeln!(h, "{label}").ok();
    writeln!(h, "  betti  {}", list(t.betti.values())).ok();
    writeln!(h, "  bass   {}", list(t.bass.values())).ok();
    writeln!(h, "  pd {}   id {}   depth {}", t.pd, t.id, t.depth).ok();
}

fn resolve(path: &std::path::Path, jmax: Option<usize>, csv: Option<PathBuf>) -> Result<Output<Resolution>, CliError> {
    let (mut d, inst) = load(path)?;
    let jmax = jmax.or(d.run.jmax).unwrap_or(DEFAULT_JMAX);
    d.run.jmax = Some(jmax);
    let ctx = HomologyContext::new(inst.algebra(), jmax);
    let res = Resolution {
        jmax,
        residue_betti: ctx.residue_resolution()?.ranks()[..=jmax].to_vec(),
        module: ctx.homological_dims(&inst.module)?,
        quotient: ctx.homological_dims(&inst.quotient())?,
    };
    let mut h = String::new();
    writeln!(h, "residue field betti {}", list(&res.residue_betti)).ok();
    tables_text(&mut h, "M", &res.module);
    tables_text(&mut h, "M/(x)M", &res.quotient);
    let mut out = Output::new(Some(d), res, h);
    if let Some(path) = csv {
        let mut rows = table_rows("module", &out.result.module);
        rows.extend(table_rows("quotient", &out.result.quotient));
        out.csv = Some((path, rows));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PerturbRun {
    flavor: BoundFlavor,
    bound: BoundReport,
    main_bound: BoundReport,
    original: HomologicalDims,
    sample: SampleResult,
    violations: usize,
}

fn perturb(args: &crate::PerturbArgs) -> Result<Output<PerturbRun>, CliError> {
    let (mut d, inst) = load(&args.input.descriptor)?;
    let jmax = args.jmax.or(d.run.jmax).unwrap_or(DEFAULT_JMAX);
    let seed = args.seed.or(d.run.seed).unwrap_or(0);
    let budget = args.budget.or(d.run.budget).unwrap_or(DEFAULT_BUDGET);
    let flavor = args.flavor.or(d.run.flavor).unwrap_or(BoundFlavor::Main);
    d.run.jmax = Some(jmax);
    d.run.seed = Some(seed);
    d.run.budget = Some(budget);
    d.run.flavor = Some(flavor);

    let bound = perturbation_bound(&inst.module, &inst.sequence, &inst.ideal, flavor)?;
    let ctx = HomologyContext::new(inst.algebra(), jmax);
    let mut perturber = Perturber::new(&inst, &ctx)?;
    let sample = perturber.sample(bound.n, SamplePlan::budget(budget), seed)?;
    // at the main and lemma bounds the tables are claimed equal; at the others only the side claims
    let tables_claimed = matches!(flavor, BoundFlavor::Main | BoundFlavor::Lemma);
    let violations = sample
        .outcomes
        .iter()
        .filter(|o| if tables_claimed { !o.verdict } else { o.aux.iter().any(|a| !a.holds) })
        .count();
    let run = PerturbRun {
        flavor,
        main_bound: perturber.main_bound().clone(),
        original: perturber.original().clone(),
        bound,
        sample,
        violations,
    };
    let mut h = String::new();
    let b = &run.bound;
    writeln!(h, "a_i {}   ar_J terms {}", list(&b.a_values), list(&b.ar_terms)).ok();
    writeln!(h, "bound ({}) N = {}{}", flavor, b.n, if b.vacuous { ", vacuous: J^N = 0" } else { "" }).ok();
    tables_text(&mut h, "original quotient", &run.original);
    writeln!(
        h,
        "{} tuples from J^{} ({}), {} violations",
        run.sample.outcomes.len(),
        run.sample.level,
        if run.sample.exhaustive { "exhaustive" } else { "sampled" },
        violations
    )
    .ok();
    for o in run.sample.outcomes.iter().filter(|o| !o.verdict).take(5) {
        writeln!(h, "  eps = [{}]", o.epsilons.join(", ")).ok();
        tables_text(&mut h, "  perturbed quotient", &o.perturbed);
        for a in o.aux.iter().filter(|a| !a.holds) {
            writeln!(h, "  failed {}", a.name).ok();
        }
    }
    let mut out = Output::new(Some(d), run, h);
    out.seed = Some(seed);
    out.ok = violations == 0;
    if let Some(path) = args.csv.clone() {
        let mut rows = table_rows("original", &out.result.original);
        for (i, o) in out.result.sample.outcomes.iter().enumerate() {
            rows.extend(table_rows(&format!("perturbed_{i}"), &o.perturbed));
        }
        out.csv = Some((path, rows));
    }
    Ok(out)
}

fn threshold(args: &crate::ThresholdArgs) -> Result<Output<ThresholdReport>, CliError> {
    let (mut d, inst) = load(&args.input.descriptor)?;
    let jmax = args.jmax.or(d.run.jmax).unwrap_or(DEFAULT_JMAX);
    let seed = args.seed.or(d.run.seed).unwrap_or(0);
    let budget = args.budget.or(d.run.budget).unwrap_or(DEFAULT_BUDGET);
    d.run.jmax = Some(jmax);
    d.run.seed = Some(seed);
    d.run.budget = Some(budget);
    let ctx = HomologyContext::new(inst.algebra(), jmax);
    let report = Perturber::new(&inst, &ctx)?.threshold(SamplePlan::budget(budget), seed)?;
    let mut h = String::new();
    writeln!(
        h,
        "proved bound N = {}{}",
        report.bound.n,
        if report.bound.vacuous { " (vacuous at the proved bound)" } else { "" }
    )
    .ok();
    for l in &report.levels {
        writeln!(
            h,
            "  level {:3}: {:4} tuples{}, {} violations",
            l.level,
            l.tuples,
            if l.exhaustive { " (all)" } else { "" },
            l.violations
        )
        .ok();
    }
    writeln!(h, "stable from level {}", report.stable_from).ok();
    if let Some(v) = report.largest_violation {
        writeln!(h, "largest violating level {v}").ok();
    }
    if let Some(f) = &report.falsification {
        writeln!(h, "FALSIFICATION at the proved bound: eps = [{}]", f.epsilons.join(", ")).ok();
    }
    let ok = report.falsification.is_none();
    let mut out = Output::new(Some(d), report, h);
    out.seed = Some(seed);
    out.ok = ok;
    Ok(out)
}

fn verify(args: &crate::VerifyArgs) -> Output<SuiteReport> {
    let mut generator = match args.profile.into() {
        ringpert::perturb::GenProfile::Small => GenConfig::small(),
        ringpert::perturb::GenProfile::Deep => GenConfig::deep(),
        ringpert::perturb::GenProfile::Mixed => GenConfig::mixed(),
    };
    generator.max_module_dim = args.max_dim;
    generator.min_sequence = args.min_length;
    generator.max_sequence = args.max_length.max(args.min_length);
    generator.require_nonvacuous |= args.nonvacuous;
    let mut cfg = SuiteConfig::new(args.seed, args.cases, args.jmax);
    cfg.generator = generator;
    cfg.plan = SamplePlan {
        exhaustive_limit: args.budget as u64,
        samples: args.samples,
    };
    cfg.properties = args.properties.clone();
    cfg.fault = args.fault.map(Into::into);
    let report = verify_suite(&cfg);

    let mut h = String::new();
    writeln!(
        h,
        "seed {}  cases {}  generated {}  rejected {} ({} vacuous)",
        report.seed, report.cases, report.generated, report.rejected, report.rejected_vacuous
    )
    .ok();
    let lengths: Vec<String> = report
        .by_length
        .iter()
        .map(|(r, n)| format!("r={r}: {n} ({} non-vacuous)", report.nonvacuous_by_length.get(r).unwrap_or(&0)))
        .collect();
    writeln!(h, "{}", lengths.join(", ")).ok();
    writeln!(h, "{:<22}{:>6}{:>6}{:>9}{:>6}{:>9}", "property", "pass", "fail", "vacuous", "n/a", "skipped").ok();
    for t in &report.properties {
        writeln!(
            h,
            "{:<22}{:>6}{:>6}{:>9}{:>6}{:>9}",
            t.property.name(),
            t.passed,
            t.failed,
            t.vacuous,
            t.not_applicable,
            t.skipped
        )
        .ok();
    }
    for t in report.properties.iter().filter(|t| t.failed > 0) {
        for f in t.failures.iter().take(3) {
            writeln!(h, "FAIL {} case {}: {}", t.property, f.case, f.detail).ok();
        }
    }
    writeln!(h, "{}", if report.all_passed { "all properties hold" } else { "VIOLATIONS FOUND" }).ok();
    let ok = report.all_passed;
    let mut out = Output::new(None, report, h);
    out.seed = Some(args.seed);
    out.ok = ok;
    out
}

#[derive(Serialize)]
struct RandomDescriptor {
    text: String,
}

fn gen_random(args: &crate::GenRandomArgs) -> Result<Output<RandomDescriptor>, CliError> {
    let cfg = match args.profile.into() {
        ringpert::perturb::GenProfile::Small => GenConfig::small(),
        ringpert::perturb::GenProfile::Deep => GenConfig::deep(),
        ringpert::perturb::GenProfile::Mixed => GenConfig::mixed(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let g = cfg.generate(&mut rng).ok_or(CliError::Generator(cfg.max_attempts))?;
    let d = Descriptor {
        instance: g.spec,
        run: Default::default(),
    };
    let text = d.to_string();
    let mut out = Output::new(Some(d), RandomDescriptor { text: text.clone() }, text);
    out.seed = Some(args.seed);
    Ok(out)
}
