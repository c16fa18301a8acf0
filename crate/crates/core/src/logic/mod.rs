//! Intuitionistic propositional formulas and finite Kripke models.

mod formula;
mod kripke;
mod parser;

pub use formula::Formula;
pub use kripke::{classical_tautology, countermodel_search, rooted_posets, KripkeModel};
pub use parser::parse_formula;
