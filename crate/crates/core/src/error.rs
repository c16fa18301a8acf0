use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix entry count {found} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, found: usize },

    #[error("lattice is not contained in the enclosing lattice: generator {generator:?} is missing")]
    NotContained { generator: Vec<BigInt> },

    #[error("vector {vector:?} is not a member of the lattice")]
    NotMember { vector: Vec<BigInt> },

    #[error("functional is not surjective onto Z: image is {image}Z")]
    NotSurjective { image: BigInt },

    #[error("gcd({a}, {b}) = {gcd}, so aR + bR != R")]
    NotCoprime { a: BigInt, b: BigInt, gcd: BigInt },

    #[error("invalid poset: {0}")]
    Poset(String),

    #[error("posets of the two diagrams differ")]
    PosetMismatch,

    #[error("inclusion fails between node {lower} and node {upper}: generator {generator:?} is missing")]
    Inclusion {
        lower: usize,
        upper: usize,
        generator: Vec<BigInt>,
    },

    #[error("sum is not direct at node {node}: {reason}")]
    NotDirect { node: usize, reason: String },

    #[error("invariants differ: {0}")]
    Screen(String),

    #[error("residue enumeration for modulus {modulus} needs {required} points, budget is {budget}")]
    BudgetExceeded {
        modulus: u64,
        required: u128,
        budget: u128,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown world {0}")]
    UnknownWorld(usize),

    #[error("unknown atom {0}")]
    UnknownAtom(String),
}

pub type Result<T> = std::result::Result<T, Error>;
