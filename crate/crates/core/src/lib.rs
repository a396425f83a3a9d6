//! Exact invariants of modules over finite-dimensional local algebras.

pub mod algebra;
pub mod fdmodule;
pub mod grading;
pub mod homology;
pub mod linalg;
pub mod perturb;
