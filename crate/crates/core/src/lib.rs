//! Exact integer lattices and inclusion diagrams of abelian groups, with
//! certified isomorphism decisions and a small intuitionistic Kripke toolkit.

pub mod cancellation;
pub mod diagram;
pub mod error;
pub mod iso;
pub mod lattice;
pub mod logic;
pub mod matrix;
pub mod normal_form;
pub mod order;

pub use error::{Error, Result};
pub use lattice::{AmbientFunctional, GroupInvariants, Lattice};
pub use matrix::IntMatrix;
