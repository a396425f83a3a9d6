#![allow(dead_code)]

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpert::algebra::{build_algebra, parse_polynomial, LocalAlgebra};
use ringpert::linalg::PrimeField;
use ringpert::perturb::{GenConfig, Generated};

pub fn algebra(p: u64, vars: &[&str], truncation: u32, relations: &[&str]) -> Arc<LocalAlgebra> {
    let field = PrimeField::new(p).unwrap();
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let relations = relations
        .iter()
        .map(|r| parse_polynomial(r, &vars, field).unwrap())
        .collect();
    Arc::new(build_algebra(field, vars, truncation, relations).unwrap())
}

pub fn generated(cfg: &GenConfig, seed: u64) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cfg.generate(&mut rng).expect("generator gave up")
}

/// A random instance small enough for homology up to degree 3 on one or two variables.
pub fn small_generated(seed: u64) -> Generated {
    let mut cfg = GenConfig::small();
    cfg.max_module_dim = 24;
    generated(&cfg, seed)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
