use std::sync::Arc;

use super::{same_algebra, AlgebraElement, AlgebraError, LocalAlgebra};
use crate::linalg::{quotient_basis, Elem, SubspaceFp};

/// An ideal of a local algebra, stored as a canonical subspace together with a
/// minimal generating set (representatives of a basis of `J / mJ`).
#[derive(Clone, Debug)]
pub struct Ideal {
    alg: Arc<LocalAlgebra>,
    space: SubspaceFp,
    generators: Vec<Vec<Elem>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.space == other.space
    }
}

impl Eq for Ideal {}

impl Ideal {
    /// Wraps a subspace after checking that it is closed under every variable.
    pub fn from_space(alg: &Arc<LocalAlgebra>, space: SubspaceFp) -> Result<Self, AlgebraError> {
        assert_eq!(space.ambient(), alg.dim());
        for b in space.basis() {
            for x in alg.var_actions() {
                if !space.contains(&x.mul_vec(b)) {
                    return Err(AlgebraError::NotAnIdeal);
                }
            }
        }
        Ok(Self::from_closed_space(alg, space))
    }

    fn from_closed_space(alg: &Arc<LocalAlgebra>, space: SubspaceFp) -> Self {
        let m_times = SubspaceFp::span(
            alg.field(),
            alg.dim(),
            space
                .basis()
                .iter()
                .flat_map(|b| alg.var_actions().iter().map(move |x| x.mul_vec(b))),
        );
        let generators = quotient_basis(&space, &m_times).expect("mJ is contained in J");
        Self {
            alg: Arc::clone(alg),
            space,
            generators,
        }
    }

    /// Smallest ideal containing `gens`.
    pub fn generated(alg: &Arc<LocalAlgebra>, gens: &[AlgebraElement]) -> Result<Self, AlgebraError> {
        for g in gens {
            if !same_algebra(g.algebra(), alg) {
                return Err(AlgebraError::Mismatch);
            }
        }
        let d = alg.dim();
        let vectors = gens.iter().flat_map(|g| {
            (0..d).map(move |u| {
                let mut e = vec![0; d];
                e[u] = 1;
                alg.mul_coords(&e, g.coords())
            })
        });
        Ok(Self::from_closed_space(alg, SubspaceFp::span(alg.field(), d, vectors)))
    }

    pub fn zero(alg: &Arc<LocalAlgebra>) -> Self {
        Self::from_closed_space(alg, SubspaceFp::zero(alg.field(), alg.dim()))
    }

    pub fn unit(alg: &Arc<LocalAlgebra>) -> Self {
        Self::from_closed_space(alg, SubspaceFp::full(alg.field(), alg.dim()))
    }

    /// The maximal ideal: all elements with zero constant coordinate.
    pub fn maximal(alg: &Arc<LocalAlgebra>) -> Self {
        let d = alg.dim();
        let vectors = (1..d).map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            e
        });
        Self::from_closed_space(alg, SubspaceFp::span(alg.field(), d, vectors))
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.alg
    }

    pub fn space(&self) -> &SubspaceFp {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    /// Proper iff contained in the maximal ideal.
    pub fn is_proper(&self) -> bool {
        self.space.basis().iter().all(|b| b[0] == 0)
    }

    pub fn contains(&self, a: &AlgebraElement) -> bool {
        same_algebra(a.algebra(), &self.alg) && self.space.contains(a.coords())
    }

    /// Coordinates of a minimal generating set.
    pub fn generator_coords(&self) -> &[Vec<Elem>] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<AlgebraElement> {
        self.generators
            .iter()
            .map(|g| AlgebraElement::from_coords(&self.alg, g.clone()))
            .collect()
    }

    /// Elements of the canonical basis.
    pub fn basis(&self) -> Vec<AlgebraElement> {
        self.space
            .basis()
            .iter()
            .map(|g| AlgebraElement::from_coords(&self.alg, g.clone()))
            .collect()
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        assert!(same_algebra(&self.alg, &other.alg), "ideals of different algebras");
        let alg = &self.alg;
        let vectors = self
            .generators
            .iter()
            .flat_map(|g| other.space.basis().iter().map(move |b| alg.mul_coords(g, b)));
        Self::from_closed_space(alg, SubspaceFp::span(alg.field(), alg.dim(), vectors))
    }

    /// `J^n`, with `J^0` the unit ideal.
    pub fn power(&self, n: usize) -> Ideal {
        let mut acc = Ideal::unit(&self.alg);
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = self.product(&acc);
        }
        acc
    }

    /// Least `n` with `J^n = 0`, or `None` when `J` is the unit ideal.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_proper() {
            return None;
        }
        let mut n = 0;
        let mut acc = Ideal::unit(&self.alg);
        while !acc.is_zero() {
            acc = self.product(&acc);
            n += 1;
        }
        Some(n)
    }
}

/// `(gens)^n` inside `alg`.
pub fn ideal_power(
    alg: &Arc<LocalAlgebra>,
    gens: &[AlgebraElement],
    n: usize,
) -> Result<Ideal, AlgebraError> {
    Ok(Ideal::generated(alg, gens)?.power(n))
}

#[cfg(test)]
mod tests {
    use super::super::{build_algebra, parse_polynomial};
    use super::*;
    use crate::linalg::PrimeField;

    fn alg(p: u64, vars: &[&str], t: u32, rels: &[&str]) -> Arc<LocalAlgebra> {
        let f = PrimeField::new(p).unwrap();
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_polynomial(r, &v, f).unwrap()).collect();
        Arc::new(build_algebra(f, v, t, rels).unwrap())
    }

    #[test]
    fn powers_of_principal_ideal() {
        let a = alg(2, &["x"], 4, &[]);
        let x = AlgebraElement::var(&a, 0);
        let cube = ideal_power(&a, std::slice::from_ref(&x), 3).unwrap();
        assert_eq!(cube.basis(), vec![AlgebraElement::parse(&a, "x^3").unwrap()]);
        let zeroth = ideal_power(&a, &[x], 0).unwrap();
        assert_eq!(zeroth.dim(), 4);
        assert!(!zeroth.is_proper());
    }

    #[test]
    fn square_of_maximal_ideal_in_three_dims() {
        let a = alg(3, &["x", "y"], 3, &[]);
        let gens = vec![AlgebraElement::var(&a, 0), AlgebraElement::var(&a, 1)];
        let sq = ideal_power(&a, &gens, 2).unwrap();
        let expected = Ideal::generated(
            &a,
            &["x^2", "x*y", "y^2"].map(|s| AlgebraElement::parse(&a, s).unwrap()),
        )
        .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(sq.dim(), 3);
        assert_eq!(Ideal::maximal(&a).nilpotency_index(), Some(3));
    }

    #[test]
    fn minimal_generators_of_maximal_ideal() {
        let a = alg(5, &["x", "y", "z"], 3, &["x*y - z^2"]);
        assert_eq!(Ideal::maximal(&a).generators().len(), 3);
        let b = alg(5, &["x", "y"], 4, &["x - y^2"]);
        // x is a square of y, so m is principal
        assert_eq!(Ideal::maximal(&b).generators().len(), 1);
    }

    #[test]
    fn from_space_rejects_non_ideals() {
        let a = alg(2, &["x"], 3, &[]);
        let s = SubspaceFp::span(a.field(), 3, vec![vec![0, 1, 0]]);
        assert_eq!(Ideal::from_space(&a, s).unwrap_err(), AlgebraError::NotAnIdeal);
    }
}
