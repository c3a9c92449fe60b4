//! Decides whether coordinate-level endo-permutation gluing data on a finite
//! p-group (p odd) can be glued, modulo torsion.
//!
//! The toolkit models the torsion-free part of the Dade group through
//! fixed-point patterns of relative syzygies, maps elements to integer
//! coordinates on rank-2 sections, checks the image conditions with exact
//! integer linear algebra, and runs the obstruction-cocycle pipeline on the
//! poset of elementary abelian subgroups of rank at least 2.

pub mod bits;
pub mod error;
pub mod glue;
pub mod group;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod poset;
pub mod syzygy;

pub use error::{Error, Result};
