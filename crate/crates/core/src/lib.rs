//! Numerics for private randomness repeaters.
//!
//! The crate builds the standard state families (Werner, Bell-diagonal,
//! private and independent states), evaluates entropic quantities in bits,
//! simulates protocols made of local unitaries and dephasing-channel
//! transmissions, and evaluates the upper bounds on randomness that can be
//! repeated through an intermediate station.
//!
//! Start with [`ensembles`] for states, [`entropic`] for entropies,
//! [`clodcc`] for protocols and [`bounds`] for the repeater bounds. The
//! [`werner`] and [`belldiag`] modules hold the closed-form analyses and
//! parameter searches.

pub mod belldiag;
pub mod bounds;
pub mod cli;
pub mod clodcc;
pub mod densop;
pub mod ensembles;
pub mod entropic;
pub mod error;
pub mod format;
pub mod random;
pub mod statespec;
pub mod tolerance;
pub mod verify;
pub mod werner;

pub use densop::{ComplexMatrix, DensityOperator, Party, Register, Spectrum, SubsystemLayout, C64};
pub use error::{Error, Result};
