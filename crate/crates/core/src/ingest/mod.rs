//! Algebras and modules from polynomial presentations, computed degree by degree.
//!
//! Quotients are taken per degree (`S_d / I_d`), with no saturation. Bases are the
//! standard monomials for the graded lexicographic order with `x0 > x1 > ...`.

mod module;
mod poly;
mod ring;

pub use module::{ideal_submodule, module_from_presentation, ModulePresentation};
pub use poly::{monomial_name, monomials_of_degree, Exponents, Polynomial};
pub use ring::{coordinate_algebra, CoordinateRing, IdealPresentation};
