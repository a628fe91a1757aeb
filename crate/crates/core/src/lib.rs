//! Ptolemy varieties of ideal triangulations.
//!
//! The crate turns gluing data into polynomial systems (SL(2), PSL(2) with an
//! obstruction class, and the enhanced boundary-Borel variant), solves the
//! zero-dimensional ones exactly, rebuilds representations from the
//! solutions and extracts A-polynomials.

pub mod decoration;
pub mod doc;
pub mod error;
pub mod ideals;
pub mod mod2;
pub mod moves;
pub mod partition;
pub mod perm;
pub mod pipeline;
pub mod rep;
pub mod trig;

pub use doc::{parse_triangulation, serialize_triangulation, ManifoldDoc};
pub use error::{PtolemyError, Result};
pub use trig::Triangulation;
