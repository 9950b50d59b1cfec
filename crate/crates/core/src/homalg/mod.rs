//! Cochain complexes, bar constructions, free resolutions, Ext and Tor.

mod ainf;
mod bar;
mod complex;
mod resolution;
mod stabilize;
mod tor;

pub use ainf::{
    check_ainf_module, check_ainf_morphism, transport, AInfReport, AInfinityModuleStructure,
    AInfinityMorphismData, BarComodule, Vector,
};
pub use bar::{
    bar_differential, bar_hom_complex, bar_hom_terms, ext_bar, tuples, AugBasis, ExtClass, GradedDims, HomSpace,
    TensorKey,
};
pub use complex::CochainComplex;
pub use resolution::{ext_free, free_resolution_window, hom_direct, tor_free, FreeLayer, FreeResolutionWindow, Unitalization};
pub use tor::{derived_intersection, tor_bar, tor_bar_complex};
pub use stabilize::{stabilization_bound, ModuleSpec, StabilizationReport};
