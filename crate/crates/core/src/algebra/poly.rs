use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{Elem, PrimeField};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Graded reverse-lexicographic comparison.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    match total_degree(a).cmp(&total_degree(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Polynomial in a fixed number of variables with coefficients in `F_p`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Exponents, Elem>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: Elem) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, 1)
    }

    pub fn monomial(field: PrimeField, exponents: Exponents, c: Elem) -> Self {
        let nvars = exponents.len();
        let mut p = Self::zero(field, nvars);
        let c = c % field.p();
        if c != 0 {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Elem {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Elem {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    fn add_term(&mut self, e: Exponents, c: Elem) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (e, &x) in &self.terms {
            out.add_term(e.clone(), f.mul(x, c % f.p()));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, None)
    }

    /// Product with every term of total degree `>= bound` discarded.
    pub fn mul_truncated(&self, other: &Poly, bound: Option<u32>) -> Poly {
        self.check(other);
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if bound.is_some_and(|b| total_degree(&e) >= b) {
                    continue;
                }
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        self.pow_truncated(exp, None)
    }

    pub fn pow_truncated(&self, mut exp: u32, bound: Option<u32>) -> Poly {
        let mut acc = Poly::constant(self.field, self.nvars, 1).truncate_opt(bound);
        let mut base = self.truncate_opt(bound);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_truncated(&base, bound);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_truncated(&base, bound);
            }
        }
        acc
    }

    /// Drops all terms of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) < bound)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    pub(crate) fn truncate_opt(&self, bound: Option<u32>) -> Poly {
        match bound {
            Some(b) => self.truncate(b),
            None => self.clone(),
        }
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials in different variable counts");
    }

    /// Display adapter that prints with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

/// Prints terms in descending grevlex order with residues in `[0, p)`, e.g.
/// `3*x^2*y + x + 2`. The output parses back under the polynomial grammar.
impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponents, Elem)> = self.poly.terms().collect();
        terms.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if c != 1 || e.iter().all(|&x| x == 0) {
                factors.push(c.to_string());
            }
            for (name, &x) in self.names.iter().zip(e.iter()) {
                match x {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{x}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_orders_by_degree_then_reverse_lex() {
        assert_eq!(grevlex_cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        // x^2 > xy > y^2 for x > y
        assert_eq!(grevlex_cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(grevlex_cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        // xz < y^2 in grevlex with x > y > z
        assert_eq!(grevlex_cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn arithmetic_cancels_terms() {
        let f = PrimeField::new(3).unwrap();
        let x = Poly::var(f, 2, 0);
        let y = Poly::var(f, 2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&[1, 1]), 2);
        assert!(x.sub(&x).is_zero());
        assert!(x.scale(3).is_zero());
        assert_eq!(s.pow_truncated(3, Some(3)), Poly::zero(f, 2));
    }

    #[test]
    fn display_is_grevlex_descending() {
        let f = PrimeField::new(5).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let x = Poly::var(f, 2, 0);
        let y = Poly::var(f, 2, 1);
        let p = x.mul(&x).add(&x.mul(&y).scale(3)).add(&Poly::constant(f, 2, 4)).add(&y);
        assert_eq!(p.display(&names).to_string(), "x^2 + 3*x*y + y + 4");
        assert_eq!(Poly::zero(f, 2).display(&names).to_string(), "0");
    }
}
