//! Finitely generated modules over a local algebra, realised as finite-dimensional
//! vector spaces with commuting variable actions.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{same_algebra, AlgebraElement, Ideal, LocalAlgebra};
use crate::linalg::{quotient_basis, Elem, LinalgError, MatrixFp, SubspaceFp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("expected {expected} action matrices of size {dim}x{dim}")]
    ActionShape { expected: usize, dim: usize },
    #[error("actions of variables {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("relation {0} of the algebra does not act as zero")]
    RelationViolated(usize),
    #[error("the maximal ideal raised to the truncation degree does not act as zero")]
    NotNilpotent,
    #[error("subspace is not stable under the variable actions")]
    NotSubmodule,
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("relation {index} has {found} entries, expected {expected}")]
    RelationLength { index: usize, expected: usize, found: usize },
    #[error("map does not commute with the action of variable {0}")]
    NotLinear(usize),
    #[error("multiplication by the given element is not well defined on M/(0 :_M x)")]
    NotWellDefined,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A module `M` given by one action matrix per algebra variable.
pub struct FdModule {
    alg: Arc<LocalAlgebra>,
    dim: usize,
    actions: Vec<MatrixFp>,
    generators: Vec<Vec<Elem>>,
    monomial_actions: OnceLock<Vec<MatrixFp>>,
}

impl Clone for FdModule {
    fn clone(&self) -> Self {
        Self {
            alg: Arc::clone(&self.alg),
            dim: self.dim,
            actions: self.actions.clone(),
            generators: self.generators.clone(),
            monomial_actions: OnceLock::new(),
        }
    }
}

impl fmt::Debug for FdModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdModule").field("dim", &self.dim).finish()
    }
}

/// Equal when the algebras agree and the action matrices coincide.
impl PartialEq for FdModule {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.actions == other.actions
    }
}

/// A submodule, held as a canonical subspace of the parent module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    space: SubspaceFp,
}

impl Submodule {
    pub fn space(&self) -> &SubspaceFp {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.space.contains(v)
    }

    pub fn is_contained_in(&self, other: &Submodule) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule {
            space: self.space.sum(&other.space).expect("submodules of one module"),
        }
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        Submodule {
            space: self.space.intersect(&other.space).expect("submodules of one module"),
        }
    }
}

/// Result of [`FdModule::quotient`]: the module `M/N` and the projection matrix.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FdModule,
    pub projection: MatrixFp,
    /// Columns of `M` whose unit vectors lift the basis of `M/N`.
    pub lift_columns: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, v: &[Elem]) -> Vec<Elem> {
        self.projection.mul_vec(v)
    }

    /// Canonical lift of a vector of `M/N` to `M`.
    pub fn lift(&self, w: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.projection.cols()];
        for (&c, &x) in self.lift_columns.iter().zip(w) {
            v[c] = x;
        }
        v
    }

    pub fn project_submodule(&self, n: &Submodule) -> Submodule {
        Submodule {
            space: n.space.image(&self.projection),
        }
    }

    /// Preimage in `M` of a submodule of `M/N`.
    pub fn preimage(&self, q: &Submodule) -> Submodule {
        Submodule {
            space: q.space.preimage(&self.projection),
        }
    }
}

/// An `A`-linear map between two modules.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    source: Arc<FdModule>,
    target: Arc<FdModule>,
    matrix: MatrixFp,
}

impl ModuleHom {
    /// Checks `act_target(x_i) * matrix = matrix * act_source(x_i)` for every variable.
    pub fn new(source: Arc<FdModule>, target: Arc<FdModule>, matrix: MatrixFp) -> Result<Self, ModuleError> {
        if !same_algebra(&source.alg, &target.alg) {
            return Err(ModuleError::AlgebraMismatch);
        }
        assert_eq!((matrix.rows(), matrix.cols()), (target.dim, source.dim), "hom matrix shape");
        for (i, (xs, xt)) in source.actions.iter().zip(&target.actions).enumerate() {
            if xt.mul(&matrix) != matrix.mul(xs) {
                return Err(ModuleError::NotLinear(i));
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn source(&self) -> &Arc<FdModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FdModule> {
        &self.target
    }

    pub fn matrix(&self) -> &MatrixFp {
        &self.matrix
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        self.matrix.mul_vec(v)
    }

    pub fn image(&self) -> Submodule {
        Submodule {
            space: SubspaceFp::full(self.matrix.field(), self.source.dim).image(&self.matrix),
        }
    }

    pub fn kernel(&self) -> Submodule {
        Submodule {
            space: crate::linalg::kernel(&self.matrix),
        }
    }
}

fn block_diagonal(blocks: usize, m: &MatrixFp) -> MatrixFp {
    let d = m.rows();
    let mut out = MatrixFp::zeros(m.field(), blocks * d, blocks * d);
    for b in 0..blocks {
        for i in 0..d {
            for j in 0..d {
                let v = m.get(i, j);
                if v != 0 {
                    out.set(b * d + i, b * d + j, v);
                }
            }
        }
    }
    out
}

impl FdModule {
    /// Validates the action matrices against the algebra and builds the module.
    pub fn new(
        alg: &Arc<LocalAlgebra>,
        actions: Vec<MatrixFp>,
        generators: Vec<Vec<Elem>>,
    ) -> Result<Self, ModuleError> {
        let n = alg.nvars();
        let dim = actions.first().map_or(0, |a| a.rows());
        if actions.len() != n || actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(ModuleError::ActionShape { expected: n, dim });
        }
        let module = Self::from_parts(alg, dim, actions, generators);
        module.validate()?;
        Ok(module)
    }

    fn from_parts(alg: &Arc<LocalAlgebra>, dim: usize, actions: Vec<MatrixFp>, generators: Vec<Vec<Elem>>) -> Self {
        Self {
            alg: Arc::clone(alg),
            dim,
            actions,
            generators,
            monomial_actions: OnceLock::new(),
        }
    }

    fn validate(&self) -> Result<(), ModuleError> {
        let n = self.actions.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.actions[i].mul(&self.actions[j]) != self.actions[j].mul(&self.actions[i]) {
                    return Err(ModuleError::NotCommuting(i, j));
                }
            }
        }
        // m^T M = 0
        let full = self.full();
        let mut layer = full;
        for _ in 0..self.alg.truncation() {
            layer = self.maximal_times(&layer);
        }
        if !layer.is_zero() {
            return Err(ModuleError::NotNilpotent);
        }
        for (idx, g) in self.alg.relations().iter().enumerate() {
            let g = g.truncate(self.alg.truncation());
            for k in 0..self.dim {
                let mut e = vec![0; self.dim];
                e[k] = 1;
                let mut acc = vec![0; self.dim];
                let f = self.field();
                for (exps, c) in g.terms() {
                    let mut v = e.clone();
                    for (var, &times) in exps.iter().enumerate() {
                        for _ in 0..times {
                            v = self.actions[var].mul_vec(&v);
                        }
                    }
                    for (a, &x) in acc.iter_mut().zip(&v) {
                        *a = f.mul_add(*a, c, x);
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return Err(ModuleError::RelationViolated(idx));
                }
            }
        }
        Ok(())
    }

    pub fn zero(alg: &Arc<LocalAlgebra>) -> Self {
        let actions = (0..alg.nvars()).map(|_| MatrixFp::zeros(alg.field(), 0, 0)).collect();
        Self::from_parts(alg, 0, actions, Vec::new())
    }

    /// The free module `A^rank`, basis ordered block by block.
    pub fn free(alg: &Arc<LocalAlgebra>, rank: usize) -> Self {
        let d = alg.dim();
        let actions = alg.var_actions().iter().map(|x| block_diagonal(rank, x)).collect();
        let generators = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank * d];
                e[i * d] = 1;
                e
            })
            .collect();
        Self::from_parts(alg, rank * d, actions, generators)
    }

    /// The residue field `k = A/m`.
    pub fn residue_field(alg: &Arc<LocalAlgebra>) -> Self {
        let actions = (0..alg.nvars()).map(|_| MatrixFp::zeros(alg.field(), 1, 1)).collect();
        Self::from_parts(alg, 1, actions, vec![vec![1]])
    }

    /// The Matlis dual `Hom_k(M, k)`, whose actions are the transposes.
    pub fn dual(&self) -> Self {
        let actions = self.actions.iter().map(|x| x.transpose()).collect();
        Self::from_parts(&self.alg, self.dim, actions, Vec::new())
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.alg
    }

    pub fn field(&self) -> crate::linalg::PrimeField {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn actions(&self) -> &[MatrixFp] {
        &self.actions
    }

    /// Distinguished generators from the presentation, if any.
    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.generators
    }

    pub fn act_var(&self, var: usize, v: &[Elem]) -> Vec<Elem> {
        self.actions[var].mul_vec(v)
    }

    fn monomial_matrices(&self) -> &[MatrixFp] {
        self.monomial_actions.get_or_init(|| {
            let mut mats = Vec::with_capacity(self.alg.dim());
            mats.push(MatrixFp::identity(self.field(), self.dim));
            for &(parent, var) in &self.alg.monomial_tree()[1..] {
                let next = self.actions[var].mul(&mats[parent]);
                mats.push(next);
            }
            mats
        })
    }

    /// Matrix of multiplication by the algebra element with the given coordinates.
    pub fn action_matrix(&self, coords: &[Elem]) -> MatrixFp {
        let mut out = MatrixFp::zeros(self.field(), self.dim, self.dim);
        for (&c, m) in coords.iter().zip(self.monomial_matrices()) {
            out.add_scaled(c, m);
        }
        out
    }

    pub fn element_action(&self, a: &AlgebraElement) -> MatrixFp {
        assert!(same_algebra(a.algebra(), &self.alg), "element of a different algebra");
        self.action_matrix(a.coords())
    }

    pub fn act(&self, a: &AlgebraElement, v: &[Elem]) -> Vec<Elem> {
        self.alg.act_with(a.coords(), v, |var, w| self.act_var(var, w))
    }

    pub fn full(&self) -> Submodule {
        Submodule {
            space: SubspaceFp::full(self.field(), self.dim),
        }
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule {
            space: SubspaceFp::zero(self.field(), self.dim),
        }
    }

    /// Wraps a subspace after checking it is stable under every variable.
    pub fn submodule(&self, space: SubspaceFp) -> Result<Submodule, ModuleError> {
        if space.ambient() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                left: space.ambient(),
                right: self.dim,
            }
            .into());
        }
        for b in space.basis() {
            for x in &self.actions {
                if !space.contains(&x.mul_vec(b)) {
                    return Err(ModuleError::NotSubmodule);
                }
            }
        }
        Ok(Submodule { space })
    }

    /// Smallest submodule containing `elems`: the span closed under the variable actions.
    pub fn submodule_generated(&self, elems: &[Vec<Elem>]) -> Submodule {
        let mut space = SubspaceFp::span(self.field(), self.dim, elems.iter().cloned());
        let mut frontier: Vec<Vec<Elem>> = space.basis().to_vec();
        while !frontier.is_empty() {
            let images: Vec<Vec<Elem>> = frontier
                .iter()
                .flat_map(|v| self.actions.iter().map(move |x| x.mul_vec(v)))
                .collect();
            let before = space.dim();
            let grown = space.extend(images.iter().cloned());
            if grown.dim() == before {
                break;
            }
            frontier = images.into_iter().filter(|v| !space.contains(v)).collect();
            space = grown;
        }
        Submodule { space }
    }

    /// `m N`, spanned by the variable images of a basis of `N`.
    pub fn maximal_times(&self, n: &Submodule) -> Submodule {
        Submodule {
            space: SubspaceFp::span(
                self.field(),
                self.dim,
                n.space
                    .basis()
                    .iter()
                    .flat_map(|v| self.actions.iter().map(move |x| x.mul_vec(v))),
            ),
        }
    }

    /// `J N` for a submodule `N`.
    pub fn ideal_times(&self, j: &Ideal, n: &Submodule) -> Submodule {
        assert!(same_algebra(j.algebra(), &self.alg), "ideal of a different algebra");
        if n.is_zero() || j.is_zero() {
            return self.zero_submodule();
        }
        let mats: Vec<MatrixFp> = j.generator_coords().iter().map(|g| self.action_matrix(g)).collect();
        Submodule {
            space: SubspaceFp::span(
                self.field(),
                self.dim,
                n.space
                    .basis()
                    .iter()
                    .flat_map(|v| mats.iter().map(move |m| m.mul_vec(v))),
            ),
        }
    }

    /// `x N` for a submodule `N`.
    pub fn element_times(&self, x: &AlgebraElement, n: &Submodule) -> Submodule {
        let m = self.element_action(x);
        Submodule {
            space: n.space.image(&m),
        }
    }

    /// `(x_1, ..., x_r) M`.
    pub fn sequence_times(&self, xs: &[AlgebraElement]) -> Submodule {
        let full = self.full();
        xs.iter()
            .fold(self.zero_submodule(), |acc, x| acc.sum(&self.element_times(x, &full)))
    }

    /// `(N :_M x)`, the preimage of `N` under multiplication by `x`.
    pub fn colon(&self, n: &Submodule, x: &AlgebraElement) -> Submodule {
        Submodule {
            space: n.space.preimage(&self.element_action(x)),
        }
    }

    /// `(0 :_M m)`.
    pub fn socle(&self) -> Submodule {
        let zero = SubspaceFp::zero(self.field(), self.dim);
        let mut acc = SubspaceFp::full(self.field(), self.dim);
        for x in &self.actions {
            acc = acc.intersect(&zero.preimage(x)).expect("same ambient");
        }
        Submodule { space: acc }
    }

    /// `M/N` with its projection and canonical lifts.
    pub fn quotient(&self, n: &Submodule) -> Result<Quotient, ModuleError> {
        let n = self.submodule(n.space.clone())?;
        let free = n.space.free_columns();
        let f = self.field();
        let mut projection = MatrixFp::zeros(f, free.len(), self.dim);
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            let r = n.space.reduce(&e);
            for (i, &c) in free.iter().enumerate() {
                projection.set(i, j, r[c]);
            }
        }
        let actions = self
            .actions
            .iter()
            .map(|x| {
                let cols: Vec<Vec<Elem>> = free
                    .iter()
                    .map(|&c| projection.mul_vec(&x.column(c)))
                    .collect();
                MatrixFp::from_columns(f, free.len(), &cols)
            })
            .collect();
        let generators = self
            .generators
            .iter()
            .map(|g| projection.mul_vec(g))
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        let module = Self::from_parts(&self.alg, free.len(), actions, generators);
        Ok(Quotient {
            module,
            projection,
            lift_columns: free,
        })
    }

    /// `M/N` together with the projection as a module homomorphism.
    pub fn quotient_module(self: &Arc<Self>, n: &Submodule) -> Result<(Arc<FdModule>, ModuleHom), ModuleError> {
        let q = self.quotient(n)?;
        let target = Arc::new(q.module);
        let hom = ModuleHom {
            source: Arc::clone(self),
            target: Arc::clone(&target),
            matrix: q.projection,
        };
        Ok((target, hom))
    }

    /// `a_J(X) = inf { n : J^n X = 0 }`; `None` when infinite.
    pub fn loewy_length(&self, j: &Ideal, x: &Submodule) -> Option<usize> {
        self.relative_loewy_length(j, x, &self.zero_submodule())
    }

    /// `a_J(X/N)` for submodules `N ⊆ X`: least `n` with `J^n X ⊆ N`.
    pub fn relative_loewy_length(&self, j: &Ideal, x: &Submodule, n: &Submodule) -> Option<usize> {
        debug_assert!(n.is_contained_in(x));
        let mut layer = x.clone();
        let mut steps = 0;
        while layer != *n {
            let next = self.ideal_times(j, &layer).sum(n);
            if next == layer {
                return None;
            }
            layer = next;
            steps += 1;
        }
        Some(steps)
    }

    /// Representatives of a basis of `M / mM`, in canonical echelon form.
    pub fn minimal_generators(&self) -> Vec<Vec<Elem>> {
        let full = self.full();
        let mm = self.maximal_times(&full);
        quotient_basis(&full.space, &mm.space).expect("mM is a subspace of M")
    }

    /// The multiplication map `M/(0 :_M x) -> M`, `a + (0 :_M x) ↦ c a`.
    pub fn induced_multiplication_hom(
        self: &Arc<Self>,
        c: &AlgebraElement,
        x: &AlgebraElement,
    ) -> Result<ModuleHom, ModuleError> {
        if !same_algebra(c.algebra(), &self.alg) || !same_algebra(x.algebra(), &self.alg) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let ann = self.colon(&self.zero_submodule(), x);
        let lc = self.element_action(c);
        if ann.space.basis().iter().any(|v| lc.mul_vec(v).iter().any(|&e| e != 0)) {
            return Err(ModuleError::NotWellDefined);
        }
        let q = self.quotient(&ann)?;
        let cols: Vec<Vec<Elem>> = q.lift_columns.iter().map(|&col| lc.column(col)).collect();
        let matrix = MatrixFp::from_columns(self.field(), self.dim, &cols);
        ModuleHom::new(Arc::new(q.module), Arc::clone(self), matrix)
    }

    /// Direct sum `M ⊕ N`.
    pub fn direct_sum(&self, other: &FdModule) -> FdModule {
        assert!(same_algebra(&self.alg, &other.alg));
        let d = self.dim + other.dim;
        let f = self.field();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = MatrixFp::zeros(f, d, d);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m.set(self.dim + i, self.dim + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        let mut generators: Vec<Vec<Elem>> = self
            .generators
            .iter()
            .map(|g| {
                let mut v = g.clone();
                v.resize(d, 0);
                v
            })
            .collect();
        generators.extend(other.generators.iter().map(|g| {
            let mut v = vec![0; self.dim];
            v.extend_from_slice(g);
            v
        }));
        Self::from_parts(&self.alg, d, actions, generators)
    }
}

/// `A^rank / (A-span of relations)`.
pub fn present_module(
    alg: &Arc<LocalAlgebra>,
    rank: usize,
    relations: &[Vec<AlgebraElement>],
) -> Result<FdModule, ModuleError> {
    let d = alg.dim();
    let free = FdModule::free(alg, rank);
    let mut flat = Vec::with_capacity(relations.len());
    for (index, rel) in relations.iter().enumerate() {
        if rel.len() != rank {
            return Err(ModuleError::RelationLength {
                index,
                expected: rank,
                found: rel.len(),
            });
        }
        let mut v = Vec::with_capacity(rank * d);
        for a in rel {
            if !same_algebra(a.algebra(), alg) {
                return Err(ModuleError::AlgebraMismatch);
            }
            v.extend_from_slice(a.coords());
        }
        flat.push(v);
    }
    let closure = SubspaceFp::span(
        alg.field(),
        rank * d,
        flat.iter()
            .flat_map(|r| alg.monomial_orbit(r, |var, w| free.act_var(var, w))),
    );
    Ok(free.quotient(&Submodule { space: closure })?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, parse_polynomial};
    use crate::linalg::PrimeField;

    fn alg(p: u64, vars: &[&str], t: u32, rels: &[&str]) -> Arc<LocalAlgebra> {
        let f = PrimeField::new(p).unwrap();
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_polynomial(r, &v, f).unwrap()).collect();
        Arc::new(build_algebra(f, v, t, rels).unwrap())
    }

    fn el(a: &Arc<LocalAlgebra>, s: &str) -> AlgebraElement {
        AlgebraElement::parse(a, s).unwrap()
    }

    fn line() -> (Arc<LocalAlgebra>, Arc<FdModule>) {
        let a = alg(2, &["x"], 4, &[]);
        let m = Arc::new(FdModule::free(&a, 1));
        (a, m)
    }

    #[test]
    fn presentations() {
        let (a, _) = line();
        assert_eq!(present_module(&a, 1, &[]).unwrap().dim(), 4);
        assert_eq!(present_module(&a, 1, &[vec![el(&a, "x")]]).unwrap().dim(), 1);
        let diag = present_module(&a, 2, &[vec![el(&a, "1"), el(&a, "1")]]).unwrap();
        assert_eq!(diag.dim(), 4);
        assert_eq!(
            present_module(&a, 2, &[vec![el(&a, "1")]]).unwrap_err(),
            ModuleError::RelationLength {
                index: 0,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn generated_submodules() {
        let (a, m) = line();
        assert!(m.submodule_generated(&[]).is_zero());
        assert_eq!(m.submodule_generated(m.generators()), m.full());
        let xm = m.submodule_generated(&[m.act(&el(&a, "x"), &m.generators()[0])]);
        assert_eq!(xm.dim(), 3);
        assert_eq!(xm, m.sequence_times(&[el(&a, "x")]));
    }

    #[test]
    fn quotients() {
        let (a, m) = line();
        let q = m.quotient(&m.zero_submodule()).unwrap();
        assert_eq!(q.module, *m);
        assert_eq!(q.projection, MatrixFp::identity(a.field(), 4));
        assert_eq!(m.quotient(&m.full()).unwrap().module.dim(), 0);
        let xm = m.sequence_times(&[el(&a, "x")]);
        assert_eq!(m.quotient(&xm).unwrap().module.dim(), 1);
    }

    #[test]
    fn colon_examples() {
        let (a, m) = line();
        let x = el(&a, "x");
        assert_eq!(m.colon(&m.full(), &x), m.full());
        let ann = m.colon(&m.zero_submodule(), &x);
        assert_eq!(ann, m.submodule_generated(&[vec![0, 0, 0, 1]]));
        assert!(m.colon(&m.zero_submodule(), &el(&a, "1 + x")).is_zero());
    }

    #[test]
    fn ideal_times_examples() {
        let (a, m) = line();
        let max = Ideal::maximal(&a);
        assert!(m.ideal_times(&max, &m.zero_submodule()).is_zero());
        let k = FdModule::residue_field(&a);
        assert!(k.ideal_times(&max, &k.full()).is_zero());
        assert_eq!(m.ideal_times(&max, &m.full()), m.sequence_times(&[el(&a, "x")]));
    }

    #[test]
    fn loewy_lengths() {
        let (a, m) = line();
        let max = Ideal::maximal(&a);
        assert_eq!(m.loewy_length(&max, &m.zero_submodule()), Some(0));
        let k = FdModule::residue_field(&a);
        assert_eq!(k.loewy_length(&max, &k.full()), Some(1));
        assert_eq!(m.loewy_length(&max, &m.full()), Some(4));
        assert_eq!(m.loewy_length(&Ideal::unit(&a), &m.full()), None);
    }

    #[test]
    fn multiplication_homs() {
        let (a, m) = line();
        let x = el(&a, "x");
        let zero = m.induced_multiplication_hom(&AlgebraElement::zero(&a), &x).unwrap();
        assert!(zero.matrix().is_zero());
        let phi = m.induced_multiplication_hom(&x, &x).unwrap();
        assert_eq!(phi.source().dim(), 3);
        assert!(phi.kernel().is_zero());
        assert_eq!(phi.image(), m.sequence_times(std::slice::from_ref(&x)));
        let cube = m.induced_multiplication_hom(&el(&a, "x^3"), &x).unwrap();
        assert_eq!(cube.image().dim(), 1);
        // 1 does not kill (0 :_M x) = (x^3)
        assert_eq!(
            m.induced_multiplication_hom(&el(&a, "1"), &x).unwrap_err(),
            ModuleError::NotWellDefined
        );
    }

    #[test]
    fn rejects_bad_actions() {
        let a = alg(3, &["x", "y"], 3, &[]);
        let f = a.field();
        let x = MatrixFp::from_rows(f, 2, &[vec![0, 0], vec![1, 0]]);
        let y = MatrixFp::from_rows(f, 2, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(
            FdModule::new(&a, vec![x.clone(), y], vec![]).unwrap_err(),
            ModuleError::NotCommuting(0, 1)
        );
        let b = alg(3, &["x"], 2, &[]);
        let shift3 = MatrixFp::from_rows(f, 3, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(FdModule::new(&b, vec![shift3], vec![]).unwrap_err(), ModuleError::NotNilpotent);
        let c = alg(3, &["x"], 4, &["x^2"]);
        let shift3 = MatrixFp::from_rows(f, 3, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(FdModule::new(&c, vec![shift3], vec![]).unwrap_err(), ModuleError::RelationViolated(0));
        assert!(FdModule::new(&c, vec![x], vec![]).is_ok());
    }

    #[test]
    fn socle_of_line_is_top_power() {
        let (_, m) = line();
        assert_eq!(m.socle().space().basis(), &[vec![0, 0, 0, 1]]);
    }
}
