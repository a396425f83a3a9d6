//! Minimal free resolutions, Betti and Bass numbers, and maps induced on Tor and Ext.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{same_algebra, AlgebraElement, Ideal, LocalAlgebra};
use crate::fdmodule::{FdModule, ModuleError, ModuleHom};
use crate::linalg::{kernel, quotient_basis, Elem, LinalgError, MatrixFp, SubspaceFp, Subquotient};

/// Default cap on the `k`-dimension of a free module in a resolution.
pub const DEFAULT_FREE_DIM_LIMIT: usize = 2400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("free module in degree {degree} has k-dimension {dim}, above the limit {limit}")]
    SizeCap { degree: usize, dim: usize, limit: usize },
    #[error("Betti number {degree} disagrees: resolution gives {resolution}, Tor(k, M) gives {tor}")]
    RouteMismatch { degree: usize, resolution: usize, tor: usize },
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A matrix with entries in the algebra, stored as coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    // column-major: entries[col][row]
    columns: Vec<Vec<Vec<Elem>>>,
}

impl AlgMatrix {
    fn from_free_columns(rows: usize, alg_dim: usize, cols: &[Vec<Elem>]) -> Self {
        let columns = cols
            .iter()
            .map(|c| c.chunks(alg_dim).map(|e| e.to_vec()).collect())
            .collect();
        Self {
            rows,
            cols: cols.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &[Elem] {
        &self.columns[col][row]
    }

    pub fn element(&self, alg: &Arc<LocalAlgebra>, row: usize, col: usize) -> AlgebraElement {
        AlgebraElement::from_coords(alg, self.entry(row, col).to_vec())
    }

    /// True when every entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.columns.iter().flatten().all(|e| e.first().copied().unwrap_or(0) == 0)
    }

    /// The `k`-linear map `A^cols -> A^rows`.
    pub fn free_matrix(&self, alg: &LocalAlgebra) -> MatrixFp {
        let d = alg.dim();
        let cols: Vec<Vec<Elem>> = self
            .columns
            .iter()
            .flat_map(|col| {
                let flat: Vec<Elem> = col.concat();
                alg.monomial_orbit(&flat, |var, w| free_act(alg, var, w))
            })
            .collect();
        MatrixFp::from_columns(alg.field(), self.rows * d, &cols)
    }

    /// The map `M^cols -> M^rows` with block `(l, i)` equal to the action of entry `(l, i)`.
    pub fn tensor_matrix(&self, m: &FdModule) -> MatrixFp {
        self.block_matrix(m, false)
    }

    /// The map `M^rows -> M^cols` with block `(i, l)` equal to the action of entry `(l, i)`.
    pub fn hom_matrix(&self, m: &FdModule) -> MatrixFp {
        self.block_matrix(m, true)
    }

    fn block_matrix(&self, m: &FdModule, transposed: bool) -> MatrixFp {
        let dm = m.dim();
        let (out_blocks, in_blocks) = if transposed {
            (self.cols, self.rows)
        } else {
            (self.rows, self.cols)
        };
        let mut out = MatrixFp::zeros(m.field(), out_blocks * dm, in_blocks * dm);
        for i in 0..self.cols {
            for l in 0..self.rows {
                let e = self.entry(l, i);
                if e.iter().all(|&c| c == 0) {
                    continue;
                }
                let act = m.action_matrix(e);
                let (bo, bi) = if transposed { (i, l) } else { (l, i) };
                for r in 0..dm {
                    for c in 0..dm {
                        let v = act.get(r, c);
                        if v != 0 {
                            out.set(bo * dm + r, bi * dm + c, v);
                        }
                    }
                }
            }
        }
        out
    }
}

fn free_act(alg: &LocalAlgebra, var: usize, w: &[Elem]) -> Vec<Elem> {
    let x = alg.var_action(var);
    w.chunks(alg.dim()).flat_map(|block| x.mul_vec(block)).collect()
}

fn free_maximal_times(alg: &LocalAlgebra, z: &SubspaceFp) -> SubspaceFp {
    SubspaceFp::span(
        alg.field(),
        z.ambient(),
        z.basis()
            .iter()
            .flat_map(|v| (0..alg.nvars()).map(move |var| free_act(alg, var, v))),
    )
}

/// A minimal free resolution `... -> A^{b_1} -> A^{b_0} -> M -> 0`, truncated at `j_max`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    alg: Arc<LocalAlgebra>,
    j_max: usize,
    ranks: Vec<usize>,
    augmentation: Vec<Vec<Elem>>,
    // differentials[j - 1] = d_j : A^{b_j} -> A^{b_{j-1}}
    differentials: Vec<AlgMatrix>,
}

impl FreeResolution {
    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.alg
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `b_0, ..., b_{j_max}`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, j: usize) -> usize {
        self.ranks.get(j).copied().unwrap_or(0)
    }

    /// Images in `M` of the standard basis of `A^{b_0}`.
    pub fn augmentation(&self) -> &[Vec<Elem>] {
        &self.augmentation
    }

    /// `d_j` for `1 ≤ j ≤ j_max`.
    pub fn differential(&self, j: usize) -> AlgMatrix {
        assert!(j >= 1, "differentials start in degree 1");
        self.differentials.get(j - 1).cloned().unwrap_or_else(|| AlgMatrix {
            rows: self.rank(j - 1),
            cols: self.rank(j),
            columns: vec![vec![vec![0; self.alg.dim()]; self.rank(j - 1)]; self.rank(j)],
        })
    }

    pub fn differentials(&self) -> &[AlgMatrix] {
        &self.differentials
    }

    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().all(AlgMatrix::is_minimal)
    }

    /// Checks `im d_{j+1} = ker d_j` for `1 ≤ j < j_max`, and `d_j d_{j+1} = 0`.
    pub fn is_exact(&self) -> bool {
        (1..self.j_max).all(|j| {
            let dj = self.differential(j).free_matrix(&self.alg);
            let dn = self.differential(j + 1).free_matrix(&self.alg);
            let image = SubspaceFp::full(self.alg.field(), dn.cols()).image(&dn);
            image == kernel(&dj)
        })
    }

    /// Minimal resolution of `M` up to degree `j_max`.
    pub fn of(m: &FdModule, j_max: usize, limit: usize) -> Result<Self, HomologyError> {
        let alg = Arc::clone(m.algebra());
        let d = alg.dim();
        let f = alg.field();
        let augmentation = m.minimal_generators();
        let b0 = augmentation.len();
        if b0 * d > limit {
            return Err(HomologyError::SizeCap {
                degree: 0,
                dim: b0 * d,
                limit,
            });
        }
        let mut ranks = vec![b0];
        let mut differentials = Vec::new();
        if j_max == 0 || b0 == 0 {
            ranks.resize(j_max + 1, 0);
            return Ok(Self {
                alg,
                j_max,
                ranks,
                augmentation,
                differentials,
            });
        }
        let aug_cols: Vec<Vec<Elem>> = augmentation
            .iter()
            .flat_map(|g| alg.monomial_orbit(g, |var, w| m.act_var(var, w)))
            .collect();
        let aug = MatrixFp::from_columns(f, m.dim(), &aug_cols);
        let mut cycles = kernel(&aug);
        for j in 1..=j_max {
            let prev = ranks[j - 1];
            let mz = free_maximal_times(&alg, &cycles);
            let gens = quotient_basis(&cycles, &mz)?;
            let b = gens.len();
            if b == 0 {
                break;
            }
            if b * d > limit {
                return Err(HomologyError::SizeCap {
                    degree: j,
                    dim: b * d,
                    limit,
                });
            }
            ranks.push(b);
            let dj = AlgMatrix::from_free_columns(prev, d, &gens);
            if j < j_max {
                cycles = kernel(&dj.free_matrix(&alg));
            }
            differentials.push(dj);
        }
        ranks.resize(j_max + 1, 0);
        Ok(Self {
            alg,
            j_max,
            ranks,
            augmentation,
            differentials,
        })
    }
}

/// Minimal free resolution with the default size limit.
pub fn minimal_free_resolution(m: &FdModule, j_max: usize) -> Result<FreeResolution, HomologyError> {
    FreeResolution::of(m, j_max, DEFAULT_FREE_DIM_LIMIT)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiTable(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BassTable(pub Vec<usize>);

impl BettiTable {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl BassTable {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// A homological dimension as far as it can be read off a truncated table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimValue {
    Exact(usize),
    /// Every computed entry was nonzero; the dimension is at least the cutoff.
    AtLeastCutoff(usize),
    NegInfinity,
    Infinity,
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Exact(v) => write!(f, "{v}"),
            DimValue::AtLeastCutoff(v) => write!(f, ">= {v}"),
            DimValue::NegInfinity => f.write_str("-inf"),
            DimValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for DimValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DimValue::Exact(v) => s.serialize_u64(*v as u64),
            DimValue::AtLeastCutoff(_) => s.serialize_str("geq_jmax"),
            DimValue::NegInfinity => s.serialize_str("neg_inf"),
            DimValue::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologicalDims {
    pub pd: DimValue,
    pub id: DimValue,
    pub depth: DimValue,
    pub betti: BettiTable,
    pub bass: BassTable,
}

/// One homology group `Z/B` of a complex of modules `M^b`.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: usize,
    pub copies: usize,
    pub group: Subquotient,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// `J Z + B`, the preimage of `J * H` in the cycles.
    pub fn ideal_times_preimage(&self, m: &FdModule, j: &Ideal) -> SubspaceFp {
        let mats: Vec<MatrixFp> = j.generator_coords().iter().map(|g| m.action_matrix(g)).collect();
        let dm = m.dim();
        let images = self.group.sub().basis().iter().flat_map(|z| {
            mats.iter().map(move |a| {
                z.chunks(dm.max(1))
                    .take(self.copies)
                    .flat_map(|block| a.mul_vec(block))
                    .collect::<Vec<Elem>>()
            })
        });
        self.group.quo().extend(images)
    }
}

/// `H_j(F ⊗ M)` for `0 ≤ j ≤ j_max`; `F` must be resolved to `j_max + 1`.
fn tor_groups(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<HomologyGroup> {
    let f = m.field();
    (0..=j_max)
        .map(|j| {
            let n = res.rank(j) * m.dim();
            let cycles = if j == 0 {
                SubspaceFp::full(f, n)
            } else {
                kernel(&res.differential(j).tensor_matrix(m))
            };
            let next = res.differential(j + 1).tensor_matrix(m);
            let boundaries = SubspaceFp::full(f, next.cols()).image(&next);
            HomologyGroup {
                degree: j,
                copies: res.rank(j),
                group: Subquotient::new(cycles, boundaries).expect("d^2 = 0"),
            }
        })
        .collect()
}

/// `H^j(Hom(F, M))` for `0 ≤ j ≤ j_max`; `F` must be resolved to `j_max + 1`.
fn ext_groups(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<HomologyGroup> {
    let f = m.field();
    (0..=j_max)
        .map(|j| {
            let n = res.rank(j) * m.dim();
            let cycles = kernel(&res.differential(j + 1).hom_matrix(m));
            let boundaries = if j == 0 {
                SubspaceFp::zero(f, n)
            } else {
                let prev = res.differential(j).hom_matrix(m);
                SubspaceFp::full(f, prev.cols()).image(&prev)
            };
            HomologyGroup {
                degree: j,
                copies: res.rank(j),
                group: Subquotient::new(cycles, boundaries).expect("d^2 = 0"),
            }
        })
        .collect()
}

fn tor_dims(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (1..=j_max + 1)
        .map(|j| res.differential(j).tensor_matrix(m).rank())
        .collect();
    (0..=j_max)
        .map(|j| {
            let incoming = if j == 0 { 0 } else { ranks[j - 1] };
            res.rank(j) * m.dim() - incoming - ranks[j]
        })
        .collect()
}

fn ext_dims(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (1..=j_max + 1)
        .map(|j| res.differential(j).hom_matrix(m).rank())
        .collect();
    (0..=j_max)
        .map(|j| {
            let incoming = if j == 0 { 0 } else { ranks[j - 1] };
            res.rank(j) * m.dim() - incoming - ranks[j]
        })
        .collect()
}

/// Shared per-algebra data: the resolution of the residue field up to `j_max + 1`.
#[derive(Debug)]
pub struct HomologyContext {
    alg: Arc<LocalAlgebra>,
    j_max: usize,
    limit: usize,
    residue: OnceLock<Result<FreeResolution, HomologyError>>,
}

impl HomologyContext {
    pub fn new(alg: &Arc<LocalAlgebra>, j_max: usize) -> Self {
        Self::with_limit(alg, j_max, DEFAULT_FREE_DIM_LIMIT)
    }

    pub fn with_limit(alg: &Arc<LocalAlgebra>, j_max: usize, limit: usize) -> Self {
        Self {
            alg: Arc::clone(alg),
            j_max,
            limit,
            residue: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.alg
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Minimal resolution of `k`, one degree past `j_max`.
    pub fn residue_resolution(&self) -> Result<&FreeResolution, HomologyError> {
        self.residue
            .get_or_init(|| FreeResolution::of(&FdModule::residue_field(&self.alg), self.j_max + 1, self.limit))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn check(&self, m: &FdModule) -> Result<(), HomologyError> {
        if same_algebra(&self.alg, m.algebra()) {
            Ok(())
        } else {
            Err(HomologyError::AlgebraMismatch)
        }
    }

    pub fn resolve(&self, m: &FdModule) -> Result<FreeResolution, HomologyError> {
        self.check(m)?;
        FreeResolution::of(m, self.j_max, self.limit)
    }

    /// `dim_k Tor_j(k, M)` from the resolution of `k`.
    pub fn betti_via_tor(&self, m: &FdModule) -> Result<BettiTable, HomologyError> {
        self.check(m)?;
        Ok(BettiTable(tor_dims(self.residue_resolution()?, m, self.j_max)))
    }

    /// Betti numbers by the ranks of a minimal resolution, cross-checked against `Tor(k, M)`.
    pub fn betti(&self, m: &FdModule) -> Result<BettiTable, HomologyError> {
        let by_resolution = self.resolve(m)?.ranks().to_vec();
        let by_tor = self.betti_via_tor(m)?;
        for (degree, (&resolution, &tor)) in by_resolution.iter().zip(by_tor.values()).enumerate() {
            if resolution != tor {
                return Err(HomologyError::RouteMismatch { degree, resolution, tor });
            }
        }
        Ok(by_tor)
    }

    /// `dim_k Ext^j(k, M)`.
    pub fn bass(&self, m: &FdModule) -> Result<BassTable, HomologyError> {
        self.check(m)?;
        Ok(BassTable(ext_dims(self.residue_resolution()?, m, self.j_max)))
    }

    pub fn homological_dims(&self, m: &FdModule) -> Result<HomologicalDims, HomologyError> {
        let betti = self.betti(m)?;
        let bass = self.bass(m)?;
        Ok(read_dims(betti, bass, self.j_max))
    }

    /// As [`Self::homological_dims`], with Betti numbers taken from `Tor(k, M)` only.
    pub fn tables(&self, m: &FdModule) -> Result<HomologicalDims, HomologyError> {
        let betti = self.betti_via_tor(m)?;
        let bass = self.bass(m)?;
        Ok(read_dims(betti, bass, self.j_max))
    }
}

fn read_dims(betti: BettiTable, bass: BassTable, j_max: usize) -> HomologicalDims {
    let pd = match betti.values().iter().position(|&b| b == 0) {
        Some(0) => DimValue::NegInfinity,
        Some(z) => DimValue::Exact(z - 1),
        None => DimValue::AtLeastCutoff(j_max),
    };
    let (depth, id) = match bass.values().iter().position(|&u| u > 0) {
        None if betti.values().first() == Some(&0) => (DimValue::Infinity, DimValue::NegInfinity),
        None => (DimValue::AtLeastCutoff(j_max), DimValue::AtLeastCutoff(j_max)),
        Some(depth) => {
            let id = match bass.values()[depth..].iter().position(|&u| u == 0) {
                Some(z) => DimValue::Exact(depth + z - 1),
                None => DimValue::AtLeastCutoff(j_max),
            };
            (DimValue::Exact(depth), id)
        }
    };
    HomologicalDims {
        pd,
        id,
        depth,
        betti,
        bass,
    }
}

pub fn betti(m: &FdModule, j_max: usize) -> Result<BettiTable, HomologyError> {
    HomologyContext::new(m.algebra(), j_max).betti(m)
}

pub fn bass(m: &FdModule, j_max: usize) -> Result<BassTable, HomologyError> {
    HomologyContext::new(m.algebra(), j_max).bass(m)
}

pub fn homological_dims(m: &FdModule, j_max: usize) -> Result<HomologicalDims, HomologyError> {
    HomologyContext::new(m.algebra(), j_max).homological_dims(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    Tor,
    Ext,
}

/// The map induced in one homological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedDegree {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Rows indexed by target basis classes.
    pub matrix: Vec<Vec<Elem>>,
    pub image_in_ideal_times_target: bool,
}

impl InducedDegree {
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&v| v == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMapReport {
    pub functor: Functor,
    pub degrees: Vec<InducedDegree>,
}

impl InducedMapReport {
    pub fn all_contained(&self) -> bool {
        self.degrees.iter().all(|d| d.image_in_ideal_times_target)
    }

    pub fn all_zero(&self) -> bool {
        self.degrees.iter().all(InducedDegree::is_zero)
    }
}

fn induced(
    functor: Functor,
    src_groups: &[HomologyGroup],
    tgt_groups: &[HomologyGroup],
    phi: &ModuleHom,
    ideal: &Ideal,
) -> InducedMapReport {
    let target = phi.target();
    let ds = phi.source().dim();
    let degrees = src_groups
        .iter()
        .zip(tgt_groups)
        .map(|(src, tgt)| {
            let jz = tgt.ideal_times_preimage(target, ideal);
            let mut contained = true;
            let images: Vec<Vec<Elem>> = src
                .group
                .representatives()
                .iter()
                .map(|z| {
                    let w: Vec<Elem> = if ds == 0 {
                        vec![0; tgt.copies * target.dim()]
                    } else {
                        z.chunks(ds).flat_map(|block| phi.apply(block)).collect()
                    };
                    contained &= jz.contains(&w);
                    tgt.group.class_coordinates(&w)
                })
                .collect();
            let matrix = (0..tgt.dim())
                .map(|r| images.iter().map(|col| col[r]).collect())
                .collect();
            InducedDegree {
                degree: src.degree,
                source_dim: src.dim(),
                target_dim: tgt.dim(),
                matrix,
                image_in_ideal_times_target: contained,
            }
        })
        .collect();
    InducedMapReport { functor, degrees }
}

/// Maps `Tor_j(E, source) -> Tor_j(E, target)` induced by `phi`, with containment in `J Tor_j(E, target)`.
pub fn tor_induced(e: &FdModule, phi: &ModuleHom, j_max: usize, ideal: &Ideal) -> Result<InducedMapReport, HomologyError> {
    let res = minimal_free_resolution(e, j_max + 1)?;
    tor_induced_with(&res, phi, j_max, ideal)
}

/// As [`tor_induced`], reusing a resolution of `E` of length at least `j_max + 1`.
pub fn tor_induced_with(
    res: &FreeResolution,
    phi: &ModuleHom,
    j_max: usize,
    ideal: &Ideal,
) -> Result<InducedMapReport, HomologyError> {
    if !same_algebra(res.algebra(), phi.source().algebra()) || !same_algebra(res.algebra(), ideal.algebra()) {
        return Err(HomologyError::AlgebraMismatch);
    }
    let src = tor_groups(res, phi.source(), j_max);
    let tgt = tor_groups(res, phi.target(), j_max);
    Ok(induced(Functor::Tor, &src, &tgt, phi, ideal))
}

/// Maps `Ext^j(E, source) -> Ext^j(E, target)` induced by `phi`, with containment in `J Ext^j(E, target)`.
pub fn ext_induced(e: &FdModule, phi: &ModuleHom, j_max: usize, ideal: &Ideal) -> Result<InducedMapReport, HomologyError> {
    let res = minimal_free_resolution(e, j_max + 1)?;
    ext_induced_with(&res, phi, j_max, ideal)
}

pub fn ext_induced_with(
    res: &FreeResolution,
    phi: &ModuleHom,
    j_max: usize,
    ideal: &Ideal,
) -> Result<InducedMapReport, HomologyError> {
    if !same_algebra(res.algebra(), phi.source().algebra()) || !same_algebra(res.algebra(), ideal.algebra()) {
        return Err(HomologyError::AlgebraMismatch);
    }
    let src = ext_groups(res, phi.source(), j_max);
    let tgt = ext_groups(res, phi.target(), j_max);
    Ok(induced(Functor::Ext, &src, &tgt, phi, ideal))
}

/// `Tor_j(E, M)` as subquotients of `M^{b_j}`.
pub fn tor_modules(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<HomologyGroup> {
    tor_groups(res, m, j_max)
}

/// `Ext^j(E, M)` as subquotients of `M^{b_j}`.
pub fn ext_modules(res: &FreeResolution, m: &FdModule, j_max: usize) -> Vec<HomologyGroup> {
    ext_groups(res, m, j_max)
}
