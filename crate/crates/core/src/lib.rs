//! Van der Waals and Casimir–Polder interactions across a planar interface
//! between two magnetodielectric half-spaces.
//!
//! Everything is evaluated on the imaginary frequency axis in reduced units:
//! `ħ = c = 1`, frequencies in a reference frequency `ω_ref`, lengths in
//! `c/ω_ref`, energies in `ħω_ref`.
//!
//! ```
//! use lifshitz_core::greens::AtomPositions;
//! use lifshitz_core::materials::{AtomModel, MaterialModel};
//! use lifshitz_core::planar_optics::HalfSpacePair;
//! use lifshitz_core::quadrature::QuadratureSpec;
//! use lifshitz_core::vdw::{vdw_full, InterfaceSystem};
//!
//! # fn main() -> lifshitz_core::Result<()> {
//! let pair = HalfSpacePair::new(MaterialModel::vacuum(), MaterialModel::lorentz(1.8, 1.5, 0.0)?);
//! let atom = AtomModel::new(1e-3, 1.0)?;
//! let sys = InterfaceSystem::new(pair, atom, atom, AtomPositions::new(-0.5, 0.5)?);
//! let u = vdw_full(&sys, &QuadratureSpec::with_rel_tol(1e-8))?;
//! assert!(u.converged && u.value < 0.0);
//! # Ok(())
//! # }
//! ```

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casimir_polder;
pub mod error;
pub mod greens;
pub mod materials;
pub mod planar_optics;
pub mod quadrature;
pub mod vdw;

pub use error::{Error, Result};
