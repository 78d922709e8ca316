//! Steinberg-style Gaussian elimination for similitude groups.

pub mod coset;
pub mod eliminate;
pub mod field;
pub mod forms;
pub mod generators;
pub mod harness;
pub mod matrix;
pub mod rowops;
pub mod spinor;

pub use coset::{CosetError, CosetLabel};
pub use eliminate::{decompose, decompose_gl, Decomposition, ElimError, Phase, Terminal};
pub use field::{Field, FieldError, Scalar, SquareClass};
pub use forms::{Family, FormError, GroupDescriptor};
pub use generators::{GenError, Kind, Token, Word};
pub use matrix::{Matrix, MatrixError};
pub use rowops::Side;
pub use spinor::{SpinorError, WallForm};
