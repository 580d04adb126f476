//! Power sum polynomials of point multisets in PG(2,q), their kernel
//! (ghosts) and the inverse problem of recovering a multiset from its
//! polynomial.

pub mod cli;
pub mod elim;
pub mod error;
pub mod field;
pub mod ghost;
pub mod linalg;
pub mod msets;
pub mod plane;
pub mod poly;
pub mod tomo;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use ghost::{ghost_report, is_ghost, GhostReport};
pub use msets::{phi, PointMultiset};
pub use plane::{Plane, ProjLine, ProjPoint};
pub use poly::{power_sum, HomPoly};
pub use tomo::{solve, SolutionCoset};
