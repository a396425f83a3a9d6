//! Dense exact linear algebra over prime fields.
//!
//! Every subspace is kept in canonical reduced row-echelon form, so equality of
//! subspaces is plain equality of their bases.

use std::fmt;

use thiserror::Error;

/// Field elements are stored as residues in `[0, p)`.
pub type Elem = u32;

/// Largest modulus accepted by [`PrimeField::new`]; products of two residues fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_PRIME}")]
    ModulusTooLarge(u64),
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("subspace is not contained in the given ambient subspace")]
    NotContained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p > MAX_PRIME {
            return Err(LinalgError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn elem(self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    #[inline]
    pub fn add(self, a: Elem, b: Elem) -> Elem {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as Elem
    }

    #[inline]
    pub fn sub(self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: Elem, b: Elem) -> Elem {
        ((a as u64 * b as u64) % self.p as u64) as Elem
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: Elem, b: Elem, c: Elem) -> Elem {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as Elem
    }

    pub fn pow(self, mut base: Elem, mut exp: u64) -> Elem {
        let mut acc: Elem = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over a prime field. A matrix acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl MatrixFp {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of signed integers, reducing every entry.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = field.elem(v);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        debug_assert!(v < self.field.p());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, b) in self.row(i).iter().zip(v) {
                    if *a != 0 && *b != 0 {
                        acc = (acc + *a as u64 * *b as u64) % p;
                    }
                }
                acc as Elem
            })
            .collect()
    }

    pub fn mul(&self, other: &MatrixFp) -> MatrixFp {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = MatrixFp::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    if b != 0 {
                        *o = f.mul_add(*o, a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MatrixFp) -> MatrixFp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        MatrixFp {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    /// `self + c * other`
    pub fn add_scaled(&mut self, c: Elem, other: &MatrixFp) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.mul_add(*a, c, b);
            }
        }
    }

    pub fn sub(&self, other: &MatrixFp) -> MatrixFp {
        let mut out = self.clone();
        out.add_scaled(self.field.neg(1), other);
        out
    }

    pub fn transpose(&self) -> MatrixFp {
        let mut out = MatrixFp::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        echelonize(self).1
    }
}

/// Subspace of `F_p^ambient` held by its canonical reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceFp {
    field: PrimeField,
    ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl SubspaceFp {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self {
            field,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<I>(field: PrimeField, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut rows: Vec<Vec<Elem>> = vectors
            .into_iter()
            .filter(|v| {
                assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
                v.iter().any(|&x| x != 0)
            })
            .collect();
        let pivots = rref_in_place(field, &mut rows, ambient);
        Self {
            field,
            ambient,
            rows,
            pivots,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that carry no pivot; unit vectors at these columns span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Normal form of `v` modulo this subspace: zero at every pivot column.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let mut out = v.to_vec();
        self.reduce_in_place(&mut out);
        out
    }

    pub fn reduce_in_place(&self, v: &mut [Elem]) {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v[piv..].iter_mut().zip(&row[piv..]) {
                if r != 0 {
                    *x = f.mul_add(*x, nc, r);
                }
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &SubspaceFp) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Coordinates of `v` (assumed in the subspace) with respect to the canonical basis.
    pub fn coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    pub fn sum(&self, other: &SubspaceFp) -> Result<SubspaceFp, LinalgError> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(self.extend(other.rows.iter().cloned()))
    }

    /// Span of this subspace together with extra vectors.
    pub fn extend<I>(&self, vectors: I) -> SubspaceFp
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let extra: Vec<Vec<Elem>> = vectors
            .into_iter()
            .map(|v| self.reduce(&v))
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        if extra.is_empty() {
            return self.clone();
        }
        SubspaceFp::span(self.field, self.ambient, self.rows.iter().cloned().chain(extra))
    }

    pub fn intersect(&self, other: &SubspaceFp) -> Result<SubspaceFp, LinalgError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SubspaceFp::zero(self.field, self.ambient));
        }
        // c lies in the left kernel of the reduced rows iff sum c_i b_i lies in `other`.
        let reduced: Vec<Vec<Elem>> = self.rows.iter().map(|r| other.reduce(r)).collect();
        let relations = left_kernel(self.field, &reduced, self.ambient);
        let f = self.field;
        let vectors = relations.into_iter().map(|c| {
            let mut v = vec![0; self.ambient];
            for (ci, row) in c.iter().zip(&self.rows) {
                if *ci == 0 {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.mul_add(*x, *ci, r);
                    }
                }
            }
            v
        });
        Ok(SubspaceFp::span(self.field, self.ambient, vectors))
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &MatrixFp) -> SubspaceFp {
        assert_eq!(map.cols(), self.ambient);
        SubspaceFp::span(self.field, map.rows(), self.rows.iter().map(|r| map.mul_vec(r)))
    }

    /// Preimage `{v : map(v) in self}` under a map into this ambient space.
    pub fn preimage(&self, map: &MatrixFp) -> SubspaceFp {
        assert_eq!(map.rows(), self.ambient);
        // v maps into self iff the free coordinates of the reduced image vanish.
        let free = self.free_columns();
        let mut composed = MatrixFp::zeros(self.field, free.len(), map.cols());
        for j in 0..map.cols() {
            let col = self.reduce(&map.column(j));
            for (i, &c) in free.iter().enumerate() {
                composed.set(i, j, col[c]);
            }
        }
        kernel(&composed)
    }

    fn check_ambient(&self, other: &SubspaceFp) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

/// Canonical reduced row-echelon form of the row space, with its rank.
pub fn echelonize(m: &MatrixFp) -> (SubspaceFp, usize) {
    let s = SubspaceFp::span(m.field(), m.cols(), m.row_vecs());
    let r = s.dim();
    (s, r)
}

/// Right kernel `{v : m v = 0}`.
pub fn kernel(m: &MatrixFp) -> SubspaceFp {
    let f = m.field();
    let n = m.cols();
    let (rowspace, _) = echelonize(m);
    let free = rowspace.free_columns();
    let vectors = free.iter().map(|&fc| {
        let mut v = vec![0; n];
        v[fc] = 1;
        for (row, &piv) in rowspace.rows.iter().zip(&rowspace.pivots) {
            v[piv] = f.neg(row[fc]);
        }
        v
    });
    SubspaceFp::span(f, n, vectors)
}

/// A solution of `m x = b`, if one exists.
pub fn solve(m: &MatrixFp, b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(b.len(), m.rows());
    let n = m.cols();
    let mut aug: Vec<Vec<Elem>> = (0..m.rows())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    let pivots = rref_in_place_limited(m.field(), &mut aug, n + 1, n);
    if aug[pivots.len()..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (row, &c) in aug.iter().zip(&pivots) {
        x[c] = row[n];
    }
    Some(x)
}

/// Coset representatives of `u` inside `w`, in canonical echelon form with pivots off `u`'s pivots.
pub fn quotient_basis(w: &SubspaceFp, u: &SubspaceFp) -> Result<Vec<Vec<Elem>>, LinalgError> {
    w.check_ambient(u)?;
    if !u.is_subspace_of(w) {
        return Err(LinalgError::NotContained);
    }
    let complement = SubspaceFp::span(w.field, w.ambient, w.rows.iter().map(|r| u.reduce(r)));
    Ok(complement.rows)
}

/// Vectors c with `sum c_i rows_i = 0`, as a list (not canonicalized).
fn left_kernel(field: PrimeField, rows: &[Vec<Elem>], width: usize) -> Vec<Vec<Elem>> {
    let k = rows.len();
    // Augment each row with an identity block and eliminate on the left part only.
    let mut aug: Vec<Vec<Elem>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = Vec::with_capacity(width + k);
            v.extend_from_slice(r);
            v.extend((0..k).map(|j| if i == j { 1 } else { 0 }));
            v
        })
        .collect();
    let pivots = rref_in_place_limited(field, &mut aug, width + k, width);
    let rank_left = pivots.iter().filter(|&&c| c < width).count();
    aug.into_iter().skip(rank_left).map(|v| v[width..].to_vec()).collect()
}

/// Subquotient `sub / quo` of a fixed ambient space, with coordinates on a canonical complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    sub: SubspaceFp,
    quo: SubspaceFp,
    reps: SubspaceFp,
}

impl Subquotient {
    pub fn new(sub: SubspaceFp, quo: SubspaceFp) -> Result<Self, LinalgError> {
        let reps_rows = quotient_basis(&sub, &quo)?;
        let reps = SubspaceFp::span(sub.field, sub.ambient, reps_rows);
        Ok(Self { sub, quo, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn sub(&self) -> &SubspaceFp {
        &self.sub
    }

    pub fn quo(&self) -> &SubspaceFp {
        &self.quo
    }

    /// Representatives of a basis of the subquotient.
    pub fn representatives(&self) -> &[Vec<Elem>] {
        self.reps.basis()
    }

    /// Coordinates of the class of `v`, which must lie in `sub`.
    pub fn class_coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        debug_assert!(self.sub.contains(v));
        let r = self.quo.reduce(v);
        self.reps.coordinates(&r)
    }
}

fn rref_in_place(field: PrimeField, rows: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<usize> {
    rref_in_place_limited(field, rows, ncols, ncols)
}

/// Gauss–Jordan elimination choosing pivots only among the first `pivot_limit` columns.
/// Rows are reordered so that pivot rows come first; zero rows are dropped only when
/// `pivot_limit == ncols`.
fn rref_in_place_limited(
    field: PrimeField,
    rows: &mut Vec<Vec<Elem>>,
    ncols: usize,
    pivot_limit: usize,
) -> Vec<usize> {
    let p = field.p() as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut nz: Vec<usize> = Vec::with_capacity(ncols);
    for c in 0..pivot_limit {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]);
        if inv != 1 {
            for x in rows[r][c..].iter_mut() {
                if *x != 0 {
                    *x = ((*x as u64 * inv as u64) % p) as Elem;
                }
            }
        }
        nz.clear();
        nz.extend((c..ncols).filter(|&k| rows[r][k] != 0));
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            let nf = p - factor as u64;
            for &k in &nz {
                row[k] = ((row[k] as u64 + nf * pivot_row[k] as u64) % p) as Elem;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivot_limit == ncols {
        rows.truncate(r);
    }
    pivots
}
