//! Textual instance descriptions and the random instance generator.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{perturbation_bound, BoundFlavor, Instance, PerturbError};
use crate::algebra::{build_algebra, parse_polynomial, AlgebraElement, AlgebraError, Ideal, ParseError, Poly};
use crate::fdmodule::{present_module, ModuleError};
use crate::linalg::{LinalgError, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cannot parse {what} `{text}`: {source}")]
    Parse {
        what: &'static str,
        text: String,
        source: ParseError,
    },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
}

/// Everything needed to rebuild an instance, as plain strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub p: u64,
    pub vars: Vec<String>,
    pub truncation: u32,
    pub relations: Vec<String>,
    pub rank: usize,
    pub module_relations: Vec<Vec<String>>,
    pub sequence: Vec<String>,
    /// Generators of `J`; empty means the maximal ideal.
    pub ideal: Vec<String>,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance, InstanceError> {
        let field = PrimeField::new(self.p)?;
        let relations = self
            .relations
            .iter()
            .map(|text| {
                parse_polynomial(text, &self.vars, field).map_err(|source| InstanceError::Parse {
                    what: "relation",
                    text: text.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<Poly>, _>>()?;
        let alg = Arc::new(build_algebra(field, self.vars.clone(), self.truncation, relations)?);
        let element = |what: &'static str, text: &String| {
            AlgebraElement::parse(&alg, text).map_err(|source| InstanceError::Parse {
                what,
                text: text.clone(),
                source,
            })
        };
        let module_relations = self
            .module_relations
            .iter()
            .map(|tuple| tuple.iter().map(|t| element("module relation entry", t)).collect())
            .collect::<Result<Vec<Vec<AlgebraElement>>, _>>()?;
        let module = Arc::new(present_module(&alg, self.rank, &module_relations)?);
        let sequence = self
            .sequence
            .iter()
            .map(|t| element("sequence element", t))
            .collect::<Result<Vec<_>, _>>()?;
        let ideal = if self.ideal.is_empty() {
            Ideal::maximal(&alg)
        } else {
            let gens = self
                .ideal
                .iter()
                .map(|t| element("ideal generator", t))
                .collect::<Result<Vec<_>, _>>()?;
            Ideal::generated(&alg, &gens)?
        };
        Ok(Instance::new(module, sequence, ideal)?)
    }

    /// The instance with `M = 0`.
    pub fn with_zero_module(&self) -> InstanceSpec {
        let mut spec = self.clone();
        spec.rank = 0;
        spec.module_relations.clear();
        spec
    }
}

/// Families of random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenProfile {
    /// `p ∈ {2,3,5}`, one to three variables, truncation degree 3 to 5, random relations.
    Small,
    /// Monomial complete intersections with long Loewy length, so that the main bound can be
    /// non-vacuous for sequences of length up to three.
    Deep,
    /// Small or deep with equal probability per candidate.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub profile: GenProfile,
    pub max_module_dim: usize,
    pub max_rank: usize,
    pub min_sequence: usize,
    pub max_sequence: usize,
    /// Probability that `J` is a random proper ideal rather than the maximal ideal.
    pub small_ideal_rate: f64,
    /// Resample until the main bound is non-vacuous.
    pub require_nonvacuous: bool,
    pub max_attempts: usize,
}

impl GenConfig {
    pub fn small() -> Self {
        Self {
            profile: GenProfile::Small,
            max_module_dim: 64,
            max_rank: 2,
            min_sequence: 1,
            max_sequence: 3,
            small_ideal_rate: 0.25,
            require_nonvacuous: false,
            max_attempts: 200,
        }
    }

    pub fn mixed() -> Self {
        Self {
            profile: GenProfile::Mixed,
            ..Self::small()
        }
    }

    pub fn deep() -> Self {
        Self {
            profile: GenProfile::Deep,
            max_module_dim: 64,
            max_rank: 2,
            min_sequence: 1,
            max_sequence: 3,
            small_ideal_rate: 0.0,
            require_nonvacuous: true,
            max_attempts: 400,
        }
    }
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> Vec<u32> {
    let mut e = vec![0; nvars];
    for _ in 0..degree {
        e[rng.gen_range(0..nvars)] += 1;
    }
    e
}

/// A constant-free polynomial with `1..=max_terms` terms of degree in `degrees`.
fn random_poly(
    rng: &mut ChaCha8Rng,
    field: PrimeField,
    nvars: usize,
    degrees: std::ops::RangeInclusive<u32>,
    max_terms: usize,
) -> Poly {
    let terms = rng.gen_range(1..=max_terms);
    let mut p = Poly::zero(field, nvars);
    for _ in 0..terms {
        let d = rng.gen_range(degrees.clone());
        let c = rng.gen_range(1..field.p());
        p = p.add(&Poly::monomial(field, random_monomial(rng, nvars, d), c));
    }
    p
}

fn render(p: &Poly, vars: &[String]) -> String {
    p.display(vars).to_string()
}

/// Random element of `m`, skewed towards low order.
fn random_element(rng: &mut ChaCha8Rng, field: PrimeField, vars: &[String], top: u32) -> String {
    let low = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(1..=top.max(1)) };
    let mut p = random_poly(rng, field, vars.len(), low..=low, 2);
    if rng.gen_bool(0.5) && top > low {
        p = p.add(&random_poly(rng, field, vars.len(), low + 1..=top, 2));
    }
    if p.is_zero() {
        p = Poly::var(field, vars.len(), 0);
    }
    render(&p, vars)
}

fn random_small(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> InstanceSpec {
    let p = *[2u64, 3, 5].choose(rng).expect("nonempty");
    let field = PrimeField::new(p).expect("prime");
    let n = rng.gen_range(1..=3usize);
    let t = rng.gen_range(3..=5u32);
    let vars: Vec<String> = VARS[..n].iter().map(|s| s.to_string()).collect();
    let relation_count = rng.gen_range(0..=n);
    let relations = (0..relation_count)
        .map(|_| {
            let low = if rng.gen_bool(0.15) { 1 } else { 2 };
            render(&random_poly(rng, field, n, low..=t - 1, 2), &vars)
        })
        .collect();
    let rank = rng.gen_range(1..=cfg.max_rank);
    let module_relations = (0..rng.gen_range(0..=2))
        .map(|_| {
            (0..rank)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        "0".to_string()
                    } else {
                        render(&random_poly(rng, field, n, 1..=t - 1, 2), &vars)
                    }
                })
                .collect()
        })
        .collect();
    let r = rng.gen_range(cfg.min_sequence..=cfg.max_sequence);
    let sequence = (0..r).map(|_| random_element(rng, field, &vars, t - 1)).collect();
    let ideal = if rng.gen_bool(cfg.small_ideal_rate) {
        (0..rng.gen_range(1..=2)).map(|_| random_element(rng, field, &vars, t - 1)).collect()
    } else {
        Vec::new()
    };
    InstanceSpec {
        p,
        vars,
        truncation: t,
        relations,
        rank,
        module_relations,
        sequence,
        ideal,
    }
}

fn random_deep(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> InstanceSpec {
    let p = *[2u64, 3, 5].choose(rng).expect("nonempty");
    let field = PrimeField::new(p).expect("prime");
    let r = rng.gen_range(cfg.min_sequence..=cfg.max_sequence);
    let n = if rng.gen_bool(0.3) { 1 } else { 2 };
    let vars: Vec<String> = VARS[..n].iter().map(|s| s.to_string()).collect();
    // longer sequences need longer Loewy length
    let (truncation, relations) = if n == 1 {
        let lo = [4u32, 6, 10][r - 1];
        (rng.gen_range(lo..=lo + 6), Vec::new())
    } else {
        let (a, b) = if r == 3 {
            (rng.gen_range(9..=11u32), 2)
        } else {
            (rng.gen_range(3..=9u32), rng.gen_range(2..=3u32))
        };
        (a + b - 1, vec![format!("x^{a}"), format!("y^{b}")])
    };
    let rank = if rng.gen_bool(0.7) { 1 } else { cfg.max_rank.min(2) };
    let module_relations = if rng.gen_bool(0.5) {
        Vec::new()
    } else {
        vec![(0..rank)
            .map(|_| {
                let low = rng.gen_range(2..=truncation.saturating_sub(1).max(2));
                render(&random_poly(rng, field, n, low..=low, 1), &vars)
            })
            .collect()]
    };
    let sequence = (0..r)
        .map(|_| {
            let lead = Poly::monomial(field, random_monomial(rng, n, 1), rng.gen_range(1..p) as u32);
            let tail = if rng.gen_bool(0.5) {
                random_poly(rng, field, n, 2..=truncation.max(3) - 1, 2)
            } else {
                Poly::zero(field, n)
            };
            render(&lead.add(&tail), &vars)
        })
        .collect();
    InstanceSpec {
        p,
        vars,
        truncation,
        relations,
        rank,
        module_relations,
        sequence,
        ideal: Vec::new(),
    }
}

/// Outcome of [`GenConfig::generate`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub spec: InstanceSpec,
    pub instance: Instance,
    /// Candidates discarded for size or, if required, for a vacuous main bound.
    pub rejected: usize,
    pub rejected_vacuous: usize,
}

impl GenConfig {
    /// Draws candidates until one satisfies the size caps; `None` after `max_attempts`.
    pub fn generate(&self, rng: &mut ChaCha8Rng) -> Option<Generated> {
        let mut rejected = 0;
        let mut rejected_vacuous = 0;
        for _ in 0..self.max_attempts {
            let spec = match self.profile {
                GenProfile::Small => random_small(rng, self),
                GenProfile::Deep => random_deep(rng, self),
                GenProfile::Mixed if rng.gen_bool(0.5) => random_small(rng, self),
                GenProfile::Mixed => random_deep(rng, self),
            };
            let Ok(instance) = spec.build() else {
                rejected += 1;
                continue;
            };
            let dim = instance.module.dim();
            if dim == 0 || dim > self.max_module_dim {
                rejected += 1;
                continue;
            }
            if self.require_nonvacuous {
                let bound = perturbation_bound(&instance.module, &instance.sequence, &instance.ideal, BoundFlavor::Main);
                if !matches!(bound, Ok(ref b) if !b.vacuous) {
                    rejected += 1;
                    rejected_vacuous += 1;
                    continue;
                }
            }
            return Some(Generated {
                spec,
                instance,
                rejected,
                rejected_vacuous,
            });
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn spec_round_trip() {
        let spec = InstanceSpec {
            p: 2,
            vars: vec!["x".into()],
            truncation: 4,
            relations: vec![],
            rank: 1,
            module_relations: vec![],
            sequence: vec!["x".into()],
            ideal: vec![],
        };
        let inst = spec.build().unwrap();
        assert_eq!(inst.module.dim(), 4);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<InstanceSpec>(&json).unwrap(), spec);
        assert_eq!(spec.with_zero_module().build().unwrap().module.dim(), 0);
    }

    #[test]
    fn reports_parse_errors() {
        let spec = InstanceSpec {
            p: 2,
            vars: vec!["x".into()],
            truncation: 4,
            relations: vec!["x^".into()],
            rank: 1,
            module_relations: vec![],
            sequence: vec![],
            ideal: vec![],
        };
        match spec.build().unwrap_err() {
            InstanceError::Parse { source, .. } => assert_eq!(source.position(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generators_are_deterministic() {
        for cfg in [GenConfig::small(), GenConfig::deep()] {
            let a = cfg.generate(&mut ChaCha8Rng::seed_from_u64(5)).unwrap();
            let b = cfg.generate(&mut ChaCha8Rng::seed_from_u64(5)).unwrap();
            assert_eq!(a.spec, b.spec);
            assert!(a.instance.module.dim() <= 64);
        }
    }
}
