pub mod convert;
pub mod datagen;
pub mod dense;
pub mod error;
pub mod generation;
pub mod io;
pub mod lqr;
pub mod mapping;
pub mod propagate;
pub mod release;
pub mod sparse;
pub mod tree;

#[cfg(test)]
mod testutil;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use generation::{DiagonalDecomposition, EigenSide, GenerationMatrix};
pub use mapping::{Direction, MappingMatrix};
pub use release::{ConsistentReleaser, ConstraintMatrix, EquivalentMatrix, ReleaseReport};
pub use sparse::CsrMatrix;
pub use tree::HierarchicalTree;
