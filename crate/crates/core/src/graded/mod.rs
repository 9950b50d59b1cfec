//! Graded algebras and modules stored as finite tables on degree windows.

mod algebra;
mod module;
mod submodule;
mod validate;

use serde::{Deserialize, Serialize};

pub use algebra::{AlgebraElement, GradedAlgebraTruncation};
pub use module::GradedModuleWindow;
pub use submodule::{Quotient, SubmodulePoint};
pub use validate::{validate_algebra, validate_module, ValidationReport, Violation, ViolationKind};

/// Bidegree of a homogeneous object: lower (projective) and upper (cohomological) grading.
/// Sign rules only ever look at the cohomological part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiDegree {
    pub projective: i64,
    pub cohomological: i64,
}

impl BiDegree {
    pub fn new(projective: i64, cohomological: i64) -> Self {
        BiDegree { projective, cohomological }
    }

    pub fn is_odd(&self) -> bool {
        self.cohomological.rem_euclid(2) == 1
    }
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::GradedAlgebraTruncation;
    use crate::ingest::{coordinate_algebra, IdealPresentation};

    /// `K[x_0, ..., x_{n-1}]` truncated at degree `d`.
    pub fn polynomial_ring(n: usize, d: usize) -> GradedAlgebraTruncation {
        coordinate_algebra(&IdealPresentation::new(n, vec![], d).unwrap()).unwrap()
    }
}
