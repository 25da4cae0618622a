//! Dense complex Hermitian matrices, register layouts and density operators.

mod eig;
mod layout;
mod matrix;
pub mod ops;
mod state;

pub use eig::{eig_hermitian, spectrum_of, EigenDecomposition, Spectrum};
pub use layout::{Party, Register, SubsystemLayout};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::{ONE, ZERO};
pub use ops::{trace_distance, trace_norm};
pub use state::{DensityOperator, PptReport, Validation};
