//! Dense and sparse matrices plus the reverse-mode computation record used by
//! every loss in the model.

mod dense;
mod gradcheck;
mod sparse;
mod tape;

pub use dense::DenseMatrix;
pub use gradcheck::{finite_difference, relative_error};
pub use sparse::SparseMatrix;
pub use tape::{log_sigmoid, sigmoid, Gradients, PrimitiveKind, Tape, Var};
