//! Entanglement, CHSH violation and local-filtering normal forms for
//! two-qubit density matrices.
//!
//! CHSH values use the convention in which the local-realistic bound is 1 and
//! the quantum (Tsirelson) maximum is √2.

pub mod chsh;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod filtering;
pub mod numkernel;
pub mod qstate;
pub mod verify;

pub use chsh::{BellOperator, BellSettings, BetaValue};
pub use config::Tolerances;
pub use entanglement::ConcurrenceValue;
pub use error::{Error, Result};
pub use families::{BoundCurve, ExtremalForm, RegionKind, RegionRecord};
pub use filtering::{LocalFilter, LorentzMatrix, NormalFormResult};
pub use numkernel::{ComplexMatrix, RealMatrix, C64};
pub use qstate::{BellState, CorrBlock, CorrelationMatrix, DensityMatrix, SeedStream, StateKind};
pub use verify::{PropertyReport, Suite, SuiteReport};

/// Seed used by sampling commands when none is given.
pub const DEFAULT_SEED: u64 = 20_020_101;
