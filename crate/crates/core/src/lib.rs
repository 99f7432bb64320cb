//! Supercharacter theories of unipotent groups cut out by anti-involutions
//! (orthogonal, symplectic, unitary, and mirror-poset pattern subgroups) over
//! small finite fields, computed by exact exhaustive enumeration.

pub mod cyclotomic;
pub mod error;
pub mod gf;
pub mod involution_group;
pub mod linalg;
pub mod orbits;
pub mod par;
pub mod sct;
pub mod space;
pub mod triangular;
pub mod unitary;

pub use error::{Error, Result};
