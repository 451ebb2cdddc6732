//! Energy shifts of hydrogenlike ions near a planar topological insulator.
//!
//! The image magnetic monopole induced in a θ-medium splits hyperfine levels
//! linearly in `m_f`. This crate evaluates those shifts, the ordinary optical
//! image shifts, circular-Rydberg detectability ratios and the resulting
//! Casimir-Polder potential, with numeric oracles for each closed form.
//!
//! Everything is computed in `f64`. Energies are eV unless a name says otherwise;
//! distances at the API surface are μm.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod angular;
pub mod casimir_polder;
pub mod cli;
pub mod constants;
pub mod data;
pub mod error;
pub mod material;
pub mod numeric;
pub mod output;
pub mod plot;
pub mod radial;
pub mod report;
pub mod rydberg;
pub mod shifts;

pub use angular::{HalfInt, QuantumState};
pub use constants::{ConstantSet, Mode, Unit};
pub use error::{Error, Result};
pub use material::MaterialConfig;
pub use shifts::{IonSpecies, ShiftBreakdown};
