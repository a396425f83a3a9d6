//! Finite-dimensional local algebras `k[x_1..x_n] / (I + m^T)` over a prime field.

mod ideal;
mod parse;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use ideal::{ideal_power, Ideal};
pub use parse::{parse_polynomial, parse_polynomial_bounded, ParseError};
pub use poly::{grevlex_cmp, total_degree, Exponents, Poly, PolyDisplay};

use crate::linalg::{solve, Elem, MatrixFp, PrimeField, SubspaceFp};

/// Upper bound on the number of monomials of degree `< T`.
pub const MAX_MONOMIALS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("truncation degree must be at least 1")]
    ZeroTruncation,
    #[error("relation {index} has a nonzero constant term")]
    ConstantTerm { index: usize },
    #[error("relation {index} is over a different field or variable set")]
    ForeignRelation { index: usize },
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("{count} monomials of degree < {truncation} exceed the limit {MAX_MONOMIALS}")]
    TooLarge { count: usize, truncation: u32 },
    #[error("elements belong to different algebras")]
    Mismatch,
    #[error("subspace is not closed under multiplication by the variables")]
    NotAnIdeal,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An Artinian local algebra with a canonical monomial basis.
///
/// Basis monomials are the monomials of degree `< T` that are not leading
/// monomials (graded reverse-lex) of the relation space; they are listed by
/// degree, and within a degree in descending grevlex order. Index 0 is `1`.
pub struct LocalAlgebra {
    field: PrimeField,
    vars: Vec<String>,
    truncation: u32,
    relations: Vec<Poly>,
    basis: Vec<Exponents>,
    monomial_index: HashMap<Exponents, usize>,
    normal_forms: Vec<Vec<Elem>>,
    mult: Vec<Vec<Elem>>,
    var_actions: Vec<MatrixFp>,
    // basis index k > 0 equals x_var * basis[parent]
    tree: Vec<(usize, usize)>,
}

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgebra")
            .field("field", &self.field)
            .field("vars", &self.vars)
            .field("truncation", &self.truncation)
            .field("dim", &self.dim())
            .finish()
    }
}

impl PartialEq for LocalAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.vars == other.vars
            && self.truncation == other.truncation
            && self.basis == other.basis
            && self.normal_forms == other.normal_forms
    }
}

impl Eq for LocalAlgebra {}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn monomials_below(nvars: usize, bound: u32) -> Vec<Exponents> {
    fn rec(prefix: &mut Exponents, left: usize, budget: u32, out: &mut Vec<Exponents>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if bound == 0 {
        return out;
    }
    rec(&mut Vec::new(), nvars, bound - 1, &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Builds `A = F_p[vars] / (relations + m^T)`.
pub fn build_algebra(
    field: PrimeField,
    vars: Vec<String>,
    truncation: u32,
    relations: Vec<Poly>,
) -> Result<LocalAlgebra, AlgebraError> {
    if truncation == 0 {
        return Err(AlgebraError::ZeroTruncation);
    }
    for (i, v) in vars.iter().enumerate() {
        if !valid_identifier(v) {
            return Err(AlgebraError::InvalidVariable(v.clone()));
        }
        if vars[..i].contains(v) {
            return Err(AlgebraError::DuplicateVariable(v.clone()));
        }
    }
    let n = vars.len();
    for (index, g) in relations.iter().enumerate() {
        if g.field() != field || g.nvars() != n {
            return Err(AlgebraError::ForeignRelation { index });
        }
        if g.constant_term() != 0 {
            return Err(AlgebraError::ConstantTerm { index });
        }
    }
    let count = binomial(n as u64 + truncation as u64 - 1, n as u64);
    if count > MAX_MONOMIALS as u64 {
        return Err(AlgebraError::TooLarge {
            count: count as usize,
            truncation,
        });
    }

    // Columns ordered by descending grevlex so pivots are leading monomials.
    let mut monomials = monomials_below(n, truncation);
    monomials.sort_by(|a, b| grevlex_cmp(b, a));
    let column: HashMap<Exponents, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let width = monomials.len();

    let to_vector = |p: &Poly| -> Vec<Elem> {
        let mut v = vec![0; width];
        for (e, c) in p.terms() {
            if let Some(&j) = column.get(e) {
                v[j] = c;
            }
        }
        v
    };
    let mut relation_vectors = Vec::new();
    for g in &relations {
        let g = g.truncate(truncation);
        if g.is_zero() {
            continue;
        }
        let low = g.order().unwrap_or(truncation);
        for m in &monomials {
            if total_degree(m) + low >= truncation {
                continue;
            }
            let shifted = Poly::monomial(field, m.clone(), 1).mul_truncated(&g, Some(truncation));
            relation_vectors.push(to_vector(&shifted));
        }
    }
    let rel = SubspaceFp::span(field, width, relation_vectors);
    let mut standard: Vec<Exponents> = rel.free_columns().into_iter().map(|c| monomials[c].clone()).collect();
    standard.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then_with(|| grevlex_cmp(b, a)));
    let basis_pos: HashMap<Exponents, usize> =
        standard.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    debug_assert_eq!(standard[0], vec![0; n]);
    let dim = standard.len();

    // Normal form of every monomial of degree < T.
    let mut pivot_row = vec![None; width];
    for (k, &c) in rel.pivots().iter().enumerate() {
        pivot_row[c] = Some(k);
    }
    let normal_forms: Vec<Vec<Elem>> = monomials
        .iter()
        .enumerate()
        .map(|(c, m)| {
            let mut out = vec![0; dim];
            match pivot_row[c] {
                None => out[basis_pos[m]] = 1,
                Some(k) => {
                    let row = &rel.basis()[k];
                    for (j, &x) in row.iter().enumerate() {
                        if x != 0 && j != c {
                            out[basis_pos[&monomials[j]]] = field.neg(x);
                        }
                    }
                }
            }
            out
        })
        .collect();

    let nf_of = |e: &Exponents| -> Vec<Elem> {
        match column.get(e) {
            Some(&c) => normal_forms[c].clone(),
            None => vec![0; dim],
        }
    };
    let mut mult = Vec::with_capacity(dim * dim);
    for a in &standard {
        for b in &standard {
            let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
            mult.push(nf_of(&e));
        }
    }
    let var_actions = (0..n)
        .map(|v| {
            let cols: Vec<Vec<Elem>> = standard
                .iter()
                .map(|b| {
                    let mut e = b.clone();
                    e[v] += 1;
                    nf_of(&e)
                })
                .collect();
            MatrixFp::from_columns(field, dim, &cols)
        })
        .collect();
    let tree = standard
        .iter()
        .map(|m| match m.iter().position(|&x| x > 0) {
            None => (0, 0),
            Some(v) => {
                let mut parent = m.clone();
                parent[v] -= 1;
                let idx = *basis_pos
                    .get(&parent)
                    .expect("standard monomials are closed under division");
                (idx, v)
            }
        })
        .collect();

    let monomial_index = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    Ok(LocalAlgebra {
        field,
        vars,
        truncation,
        relations,
        basis: standard,
        monomial_index,
        normal_forms,
        mult,
        var_actions,
        tree,
    })
}

impl LocalAlgebra {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Exponents] {
        &self.basis
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|e| Poly::monomial(self.field, e.clone(), 1).display(&self.vars).to_string())
            .collect()
    }

    /// Multiplication by the `i`-th variable in the basis (regular representation).
    pub fn var_action(&self, i: usize) -> &MatrixFp {
        &self.var_actions[i]
    }

    pub fn var_actions(&self) -> &[MatrixFp] {
        &self.var_actions
    }

    /// `(parent, var)` with `basis[k] = x_var * basis[parent]`, for `k >= 1`.
    pub fn monomial_tree(&self) -> &[(usize, usize)] {
        &self.tree
    }

    /// Canonical coordinates of a polynomial.
    pub fn reduce(&self, p: &Poly) -> Vec<Elem> {
        assert_eq!(p.nvars(), self.nvars());
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (e, c) in p.terms() {
            if let Some(&i) = self.monomial_index.get(e) {
                for (o, &x) in out.iter_mut().zip(&self.normal_forms[i]) {
                    if x != 0 {
                        *o = f.mul_add(*o, c, x);
                    }
                }
            }
        }
        out
    }

    /// Product of two coordinate vectors.
    pub fn mul_coords(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let d = self.dim();
        let f = self.field;
        let mut out = vec![0; d];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (o, &x) in out.iter_mut().zip(&self.mult[i * d + j]) {
                    if x != 0 {
                        *o = f.mul_add(*o, c, x);
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `a` on the algebra itself.
    pub fn multiplication_matrix(&self, a: &[Elem]) -> MatrixFp {
        let d = self.dim();
        let cols: Vec<Vec<Elem>> = (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                self.mul_coords(a, &e)
            })
            .collect();
        MatrixFp::from_columns(self.field, d, &cols)
    }

    /// Images `u * w` for every basis monomial `u`, given the action `act(var, v)` of the
    /// variables on some representation.
    pub fn monomial_orbit<F>(&self, w: &[Elem], mut act: F) -> Vec<Vec<Elem>>
    where
        F: FnMut(usize, &[Elem]) -> Vec<Elem>,
    {
        let mut orbit: Vec<Vec<Elem>> = Vec::with_capacity(self.dim());
        orbit.push(w.to_vec());
        for &(parent, var) in &self.tree[1..] {
            let next = act(var, &orbit[parent]);
            orbit.push(next);
        }
        orbit
    }

    /// `a * w` in a representation given by its variable action.
    pub fn act_with<F>(&self, a: &[Elem], w: &[Elem], act: F) -> Vec<Elem>
    where
        F: FnMut(usize, &[Elem]) -> Vec<Elem>,
    {
        let f = self.field;
        let orbit = self.monomial_orbit(w, act);
        let mut out = vec![0; w.len()];
        for (&c, v) in a.iter().zip(&orbit) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(v) {
                if x != 0 {
                    *o = f.mul_add(*o, c, x);
                }
            }
        }
        out
    }

    pub fn coords_to_poly(&self, coords: &[Elem]) -> Poly {
        let mut p = Poly::zero(self.field, self.nvars());
        for (e, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                p = p.add(&Poly::monomial(self.field, e.clone(), c));
            }
        }
        p
    }
}

/// An element of a [`LocalAlgebra`] in canonical coordinates.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<LocalAlgebra>,
    coords: Vec<Elem>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.coords == other.coords
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({})", self)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.alg.coords_to_poly(&self.coords);
        write!(f, "{}", p.display(&self.alg.vars))
    }
}

pub(crate) fn same_algebra(a: &Arc<LocalAlgebra>, b: &Arc<LocalAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(alg: &Arc<LocalAlgebra>) -> Self {
        Self::from_coords(alg, vec![0; alg.dim()])
    }

    pub fn one(alg: &Arc<LocalAlgebra>) -> Self {
        let mut c = vec![0; alg.dim()];
        c[0] = 1;
        Self::from_coords(alg, c)
    }

    pub fn var(alg: &Arc<LocalAlgebra>, i: usize) -> Self {
        let p = Poly::var(alg.field, alg.nvars(), i);
        Self::from_poly(alg, &p)
    }

    pub fn from_poly(alg: &Arc<LocalAlgebra>, p: &Poly) -> Self {
        Self::from_coords(alg, alg.reduce(p))
    }

    pub fn from_coords(alg: &Arc<LocalAlgebra>, coords: Vec<Elem>) -> Self {
        assert_eq!(coords.len(), alg.dim(), "coordinate vector has wrong length");
        debug_assert!(coords.iter().all(|&c| c < alg.field.p()));
        Self {
            alg: Arc::clone(alg),
            coords,
        }
    }

    /// Parses an element written in the algebra's variables.
    pub fn parse(alg: &Arc<LocalAlgebra>, text: &str) -> Result<Self, ParseError> {
        let p = parse_polynomial_bounded(text, &alg.vars, alg.field, Some(alg.truncation))?;
        Ok(Self::from_poly(alg, &p))
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_algebra(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(AlgebraError::Mismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let f = self.alg.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self::from_coords(&self.alg, coords))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.alg.field;
        Self::from_coords(&self.alg, self.coords.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = self.alg.field;
        Self::from_coords(&self.alg, self.coords.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::from_coords(&self.alg, self.alg.mul_coords(&self.coords, &other.coords)))
    }

    /// Units are exactly the elements with nonzero constant coordinate.
    pub fn is_unit(&self) -> bool {
        self.coords[0] != 0
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.coords[0] == 0
    }

    /// Inverse obtained by solving `a * y = 1`.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let l = self.alg.multiplication_matrix(&self.coords);
        let mut one = vec![0; self.alg.dim()];
        one[0] = 1;
        solve(&l, &one).map(|y| Self::from_coords(&self.alg, y))
    }

    pub fn to_poly(&self) -> Poly {
        self.alg.coords_to_poly(&self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn alg(p: u64, vars: &[&str], t: u32, rels: &[&str]) -> Arc<LocalAlgebra> {
        let f = PrimeField::new(p).unwrap();
        let v = names(vars);
        let rels = rels.iter().map(|r| parse_polynomial(r, &v, f).unwrap()).collect();
        Arc::new(build_algebra(f, v, t, rels).unwrap())
    }

    #[test]
    fn truncated_line() {
        let a = alg(2, &["x"], 4, &[]);
        assert_eq!(a.dim(), 4);
        assert_eq!(a.basis_names(), vec!["1", "x", "x^2", "x^3"]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let a = alg(3, &["x", "y"], 2, &[]);
        assert_eq!(a.basis_names(), vec!["1", "x", "y"]);
    }

    #[test]
    fn monomial_relation_by_enumeration() {
        let a = alg(2, &["x", "y"], 3, &["x*y"]);
        // monomials of degree < 3: 1, x, y, x^2, xy, y^2; xy is killed.
        assert_eq!(a.basis_names(), vec!["1", "x", "y", "x^2", "y^2"]);
    }

    #[test]
    fn linear_relation_collapses_a_variable() {
        let a = alg(5, &["x", "y"], 3, &["x + y^2"]);
        // relations x + y^2, x^2, x*y: leading terms y^2, x^2, x*y
        assert_eq!(a.basis_names(), vec!["1", "x", "y"]);
        let x = AlgebraElement::var(&a, 0);
        let y = AlgebraElement::var(&a, 1);
        let y2 = y.mul(&y).unwrap();
        assert_eq!(x.add(&y2).unwrap(), AlgebraElement::zero(&a));
    }

    #[test]
    fn rejects_constant_terms() {
        let f = PrimeField::new(2).unwrap();
        let v = names(&["x"]);
        let r = parse_polynomial("x + 1", &v, f).unwrap();
        assert_eq!(
            build_algebra(f, v, 3, vec![r]).unwrap_err(),
            AlgebraError::ConstantTerm { index: 0 }
        );
    }

    #[test]
    fn multiplication_examples() {
        let a = alg(2, &["x"], 4, &[]);
        let x = AlgebraElement::var(&a, 0);
        let x3 = AlgebraElement::parse(&a, "x^3").unwrap();
        assert!(x.mul(&x3).unwrap().is_zero());
        assert_eq!(x.mul(&AlgebraElement::one(&a)).unwrap(), x);

        let b = alg(2, &["x", "y"], 3, &["x*y"]);
        let s = AlgebraElement::parse(&b, "x + y").unwrap();
        assert_eq!(s.mul(&s).unwrap(), AlgebraElement::parse(&b, "x^2 + y^2").unwrap());
        assert_eq!(s.mul(&x), Err(AlgebraError::Mismatch));
    }

    #[test]
    fn units_and_inverses() {
        let a = alg(2, &["x"], 4, &[]);
        assert!(AlgebraElement::one(&a).is_unit());
        assert!(!AlgebraElement::var(&a, 0).is_unit());
        let u = AlgebraElement::parse(&a, "1 + x^2").unwrap();
        let inv = u.inverse().unwrap();
        assert_eq!(inv, u);
        assert_eq!(u.mul(&inv).unwrap(), AlgebraElement::one(&a));
        assert!(AlgebraElement::var(&a, 0).inverse().is_none());
    }

    #[test]
    fn element_display_round_trips() {
        let a = alg(3, &["x", "y"], 4, &["x^2 - y^3"]);
        let e = AlgebraElement::parse(&a, "2*x*y + y^2 + 1").unwrap();
        let again = AlgebraElement::parse(&a, &e.to_string()).unwrap();
        assert_eq!(e, again);
    }
}
