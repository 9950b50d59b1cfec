//! Exact computations behind derived Quot schemes at desk scale.
//!
//! The crate works entirely over the rationals. Graded algebras and modules
//! are stored as finite multiplication and action tables; every derived
//! quantity (Ext, Tor, tangent complexes) is computed by exact sparse linear
//! algebra and can be compared against an independently computed classical
//! answer.

pub mod dg;
pub mod error;
pub mod graded;
pub mod homalg;
pub mod ingest;
pub mod linalg;
pub mod quot;

pub use error::{Error, Result};
pub use linalg::{Scalar, SparseMatrix};
