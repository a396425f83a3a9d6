//! `J`-adic filtrations, initial modules and the Artin–Rees number.

use thiserror::Error;

use crate::algebra::{same_algebra, Ideal};
use crate::fdmodule::{FdModule, Submodule};
use crate::linalg::SubspaceFp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("the filtration ideal must be proper")]
    ImproperIdeal,
    #[error("ideal and module live over different algebras")]
    AlgebraMismatch,
    #[error("submodule does not lie in the filtered module")]
    NotContained,
    #[error("Artin-Rees routes disagree: definition gives {definition}, initial module gives {initial}")]
    RouteMismatch { definition: usize, initial: usize },
}

/// `M = F_0 ⊇ F_1 ⊇ ... ⊇ F_L = 0` with `F_d = J^d M`.
#[derive(Clone, Debug)]
pub struct GradedFiltration<'a> {
    module: &'a FdModule,
    ideal: Ideal,
    pieces: Vec<Submodule>,
}

impl<'a> GradedFiltration<'a> {
    pub fn new(module: &'a FdModule, ideal: &Ideal) -> Result<Self, GradingError> {
        if !same_algebra(module.algebra(), ideal.algebra()) {
            return Err(GradingError::AlgebraMismatch);
        }
        if !ideal.is_proper() {
            return Err(GradingError::ImproperIdeal);
        }
        let mut pieces = vec![module.full()];
        while !pieces.last().expect("nonempty").is_zero() {
            let next = module.ideal_times(ideal, pieces.last().expect("nonempty"));
            pieces.push(next);
        }
        Ok(Self {
            module,
            ideal: ideal.clone(),
            pieces,
        })
    }

    pub fn module(&self) -> &'a FdModule {
        self.module
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// `a_J(M)`, the index of the first zero piece.
    pub fn length(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn pieces(&self) -> &[Submodule] {
        &self.pieces
    }

    /// `F_d`, which is zero for `d ≥ L`.
    pub fn piece(&self, d: usize) -> &Submodule {
        &self.pieces[d.min(self.length())]
    }

    /// `dim_k F_d/F_{d+1}`.
    pub fn graded_dim(&self, d: usize) -> usize {
        self.piece(d).dim() - self.piece(d + 1).dim()
    }

    /// `int(N)` with respect to this filtration.
    pub fn initial_module(&self, n: &Submodule) -> Result<InitialModule<'_>, GradingError> {
        InitialModule::new(self, n)
    }

    /// `ar_J(N)` by both routes; see [`artin_rees`].
    pub fn artin_rees(&self, n: &Submodule) -> Result<usize, GradingError> {
        let init = self.initial_module(n)?;
        let definition = definition_route(self, &init);
        let initial = init.generator_degrees().max_degree();
        if definition != initial {
            return Err(GradingError::RouteMismatch { definition, initial });
        }
        Ok(definition)
    }

    /// Degreewise lifts of `int(N)`; two submodules have equal initial modules iff these agree.
    pub fn initial_lifts(&self, n: &Submodule) -> Result<Vec<SubspaceFp>, GradingError> {
        Ok(self.initial_module(n)?.lifted)
    }
}

/// Convenience wrapper for [`GradedFiltration::new`].
pub fn filtration<'a>(module: &'a FdModule, ideal: &Ideal) -> Result<GradedFiltration<'a>, GradingError> {
    GradedFiltration::new(module, ideal)
}

/// `int(N) ⊆ gr_J(M)`, stored degreewise as the lifts `N ∩ F_d + F_{d+1}`.
#[derive(Clone, Debug)]
pub struct InitialModule<'f> {
    filt: &'f GradedFiltration<'f>,
    // N ∩ F_d
    intersections: Vec<Submodule>,
    lifted: Vec<SubspaceFp>,
}

impl<'f> InitialModule<'f> {
    fn new(filt: &'f GradedFiltration<'f>, n: &Submodule) -> Result<Self, GradingError> {
        if n.space().ambient() != filt.module.dim() || !n.is_contained_in(&filt.pieces[0]) {
            return Err(GradingError::NotContained);
        }
        let len = filt.length();
        let intersections: Vec<Submodule> = (0..=len).map(|d| n.intersect(filt.piece(d))).collect();
        let lifted = (0..len)
            .map(|d| intersections[d].sum(filt.piece(d + 1)).space().clone())
            .collect();
        Ok(Self {
            filt,
            intersections,
            lifted,
        })
    }

    pub fn filtration(&self) -> &GradedFiltration<'f> {
        self.filt
    }

    /// Number of graded degrees, `a_J(M)`.
    pub fn len(&self) -> usize {
        self.lifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifted.is_empty()
    }

    /// `N ∩ F_d + F_{d+1}`, the preimage of `int(N)_d` in `F_d`.
    pub fn lifted(&self, d: usize) -> &SubspaceFp {
        &self.lifted[d]
    }

    /// `N ∩ J^d M`.
    pub fn intersection(&self, d: usize) -> &Submodule {
        &self.intersections[d.min(self.len())]
    }

    /// `dim_k int(N)_d`.
    pub fn degree_dim(&self, d: usize) -> usize {
        if d >= self.len() {
            return 0;
        }
        self.lifted[d].dim() - self.filt.piece(d + 1).dim()
    }

    pub fn degree_dims(&self) -> Vec<usize> {
        (0..self.len()).map(|d| self.degree_dim(d)).collect()
    }

    /// Minimal generator counts per degree.
    ///
    /// Degree `d` contributes `dim int(N)_d` minus the part reached from lower degrees
    /// through `J^e` (all `e ≥ 1`) and from degree `d` itself through `m`.
    pub fn generator_degrees(&self) -> GeneratorDegrees {
        let module = self.filt.module;
        let ideal = &self.filt.ideal;
        let len = self.len();
        // powers[k][e] = J^e (N ∩ F_k)
        let mut powers: Vec<Vec<Submodule>> = Vec::with_capacity(len);
        for k in 0..len {
            let mut chain = vec![self.intersections[k].clone()];
            for _ in k + 1..len {
                let next = module.ideal_times(ideal, chain.last().expect("nonempty"));
                chain.push(next);
            }
            powers.push(chain);
        }
        let counts = (0..len)
            .map(|d| {
                let mut reached = self.filt.piece(d + 1).sum(&module.maximal_times(&self.intersections[d]));
                for e in 1..=d {
                    reached = reached.sum(&powers[d - e][e]);
                }
                self.lifted[d].dim() - reached.dim()
            })
            .collect();
        GeneratorDegrees::from_counts(counts)
    }
}

/// Degree profile of a minimal homogeneous generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDegrees {
    counts: Vec<usize>,
    max_degree: usize,
}

impl GeneratorDegrees {
    fn from_counts(counts: Vec<usize>) -> Self {
        let max_degree = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
        Self { counts, max_degree }
    }

    /// Generator count in each degree.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Degrees with multiplicity, ascending.
    pub fn multiset(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(d, &c)| std::iter::repeat_n(d, c))
            .collect()
    }

    /// `d(Q)`; zero when there are no generators.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// Least `c` with `J^n M ∩ N = J^{n-c}(J^c M ∩ N)` for all `n ≥ c`.
pub fn artin_rees_by_definition(filt: &GradedFiltration<'_>, n: &Submodule) -> Result<usize, GradingError> {
    let init = filt.initial_module(n)?;
    Ok(definition_route(filt, &init))
}

fn definition_route(filt: &GradedFiltration<'_>, init: &InitialModule<'_>) -> usize {
    let module = filt.module;
    let len = filt.length();
    'candidates: for c in 0..=len {
        let mut rhs = init.intersection(c).clone();
        for k in c..=len {
            if *init.intersection(k) != rhs {
                continue 'candidates;
            }
            rhs = module.ideal_times(&filt.ideal, &rhs);
        }
        return c;
    }
    unreachable!("c = a_J(M) always satisfies the Artin-Rees condition")
}

/// `ar_J(N)` for `N ⊆ M`, computed through the definition and through `d(int(N))`.
pub fn artin_rees(n: &Submodule, module: &FdModule, ideal: &Ideal) -> Result<usize, GradingError> {
    GradedFiltration::new(module, ideal)?.artin_rees(n)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{build_algebra, AlgebraElement, LocalAlgebra};
    use crate::linalg::PrimeField;

    fn line(t: u32) -> (Arc<LocalAlgebra>, FdModule) {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(build_algebra(f, vec!["x".into()], t, vec![]).unwrap());
        let m = FdModule::free(&a, 1);
        (a, m)
    }

    #[test]
    fn filtrations() {
        let (a, m) = line(4);
        let max = Ideal::maximal(&a);
        let zero = FdModule::zero(&a);
        assert_eq!(filtration(&zero, &max).unwrap().pieces().len(), 1);
        let k = FdModule::residue_field(&a);
        let fk = filtration(&k, &max).unwrap();
        assert_eq!(fk.length(), 1);
        let fm = filtration(&m, &max).unwrap();
        assert_eq!(fm.length(), 4);
        for d in 0..=4 {
            assert_eq!(fm.piece(d).dim(), 4 - d);
        }
        assert_eq!(filtration(&m, &Ideal::unit(&a)).unwrap_err(), GradingError::ImproperIdeal);
    }

    #[test]
    fn initial_modules() {
        let (a, m) = line(4);
        let fm = filtration(&m, &Ideal::maximal(&a)).unwrap();
        assert_eq!(fm.initial_module(&m.zero_submodule()).unwrap().degree_dims(), vec![0; 4]);
        assert_eq!(fm.initial_module(&m.full()).unwrap().degree_dims(), vec![1; 4]);
        let xa = m.sequence_times(&[AlgebraElement::var(&a, 0)]);
        let init = fm.initial_module(&xa).unwrap();
        assert_eq!(init.degree_dims(), vec![0, 1, 1, 1]);
        assert_eq!(init.generator_degrees().multiset(), vec![1]);
        assert_eq!(init.generator_degrees().max_degree(), 1);
        let whole = fm.initial_module(&m.full()).unwrap().generator_degrees();
        assert_eq!((whole.multiset(), whole.max_degree()), (vec![0], 0));
        let none = fm.initial_module(&m.zero_submodule()).unwrap().generator_degrees();
        assert_eq!((none.multiset(), none.max_degree()), (vec![], 0));
    }

    #[test]
    fn artin_rees_examples() {
        let (a, m) = line(4);
        let max = Ideal::maximal(&a);
        assert_eq!(artin_rees(&m.full(), &m, &max), Ok(0));
        assert_eq!(artin_rees(&m.zero_submodule(), &m, &max), Ok(0));
        let xa = m.sequence_times(&[AlgebraElement::var(&a, 0)]);
        assert_eq!(artin_rees(&xa, &m, &max), Ok(1));
        let x2a = m.sequence_times(&[AlgebraElement::parse(&a, "x^2").unwrap()]);
        assert_eq!(artin_rees(&x2a, &m, &max), Ok(2));
    }

    #[test]
    fn non_maximal_ideal() {
        let f = PrimeField::new(3).unwrap();
        let a = Arc::new(build_algebra(f, vec!["x".into(), "y".into()], 3, vec![]).unwrap());
        let m = FdModule::free(&a, 1);
        let j = Ideal::generated(&a, &[AlgebraElement::var(&a, 0)]).unwrap();
        let filt = filtration(&m, &j).unwrap();
        assert_eq!(filt.length(), 3);
        let init = filt.initial_module(&m.full()).unwrap();
        // M/JM = k[y]/(y^3) is cyclic over R/J
        assert_eq!(init.generator_degrees().multiset(), vec![0]);
        let n = m.sequence_times(&[AlgebraElement::var(&a, 1)]);
        assert_eq!(artin_rees(&n, &m, &j), Ok(0));
    }
}
