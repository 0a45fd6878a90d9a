//! Truncated free graded Lie algebra realized inside the tensor algebra.

mod derivation;
mod diffeo;
mod structure;
mod tensor;

pub use derivation::Derivation;
pub use diffeo::PointedDiffeo;
pub use structure::{is_normalised, m2_from_product, CnStructure};
pub use tensor::{Alphabet, TensorElement, Word};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("bracket would produce order {order} beyond truncation {limit}")]
    Truncation { order: usize, limit: usize },
    #[error("order-0 input has no Lie projection")]
    OrderZero,
    #[error("expected {expected} generator images, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("image of {generator} has degree {found}, expected {expected}")]
    Degree { generator: String, expected: i64, found: i64 },
    #[error("image of {0} is not a Lie element")]
    NotLie(String),
    #[error("map is not pointed at generator {0}")]
    NotPointed(String),
    #[error("exponential needs a degree-0 field, got degree {0}")]
    ExpDegree(i64),
    #[error("exponential needs lowest order at least 2")]
    ExpOrder,
    #[error("structure part has degree {0}, expected 1")]
    PartDegree(i64),
    #[error("structure part of order {order} outside 2..={max}")]
    PartOrder { order: usize, max: usize },
}
