//! Submodule points, Grassmannian charts of the quotient scheme and classical tangent spaces.

mod chart;
mod classical;

pub use chart::{
    chart_containing, chart_coordinates, chart_equations, chart_point, jacobian_tangent_check, ChartSpec,
    JacobianReport, PolynomialSystem, QuotProblem,
};
pub use classical::{
    extend_submodule, generate_from_bottom, is_submodule, section_values, stability_elements, tangent_classical,
    SubmoduleCheck, SubmoduleWitness, TangentSpace,
};
