//! Finite presentations of derived moduli objects: free graded-commutative dg-algebras,
//! the action classifier, tangent complexes and homotopies.

mod homotopy;
mod presentation;
mod ract;
mod tangent;

pub use presentation::{
    add_into, constant, generator, poly_add, poly_scale, poly_sub, DgaGenerator, FreeDgaPresentation, GcPoly, Monomial,
};
pub use ract::{build_ract_dga, pi0_ideal, vanishes_at, RactPresentation, Slot};
pub use tangent::{
    derived_quot_tangent, module_of_action, rlin_cone, tangent_ract, tangent_rg_cone, TangentComplexReport,
};
pub use homotopy::{m_homotopy_construct, monomials_of_bidegree, HomotopyCheck, MHomotopy, TPoly};
