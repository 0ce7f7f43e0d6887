//! Electron correlation energy and entanglement entropy for small molecular
//! systems.
//!
//! The pipeline: contracted s-Gaussian integrals over hydrogen bases
//! ([`geom_basis`], [`integrals`]), restricted/unrestricted Hartree–Fock
//! ([`scf`]), determinant CI with FCI and CISD truncations ([`detci`]),
//! entropy and correlation measures over the resulting wavefunctions
//! ([`entanglement`]), and scan orchestration plus FCIDUMP/CSV interfaces
//! ([`scan`]). All internal quantities are in atomic units; entropies are
//! in bits.

pub mod detci;
pub mod entanglement;
pub mod error;
pub mod geom_basis;
pub mod integrals;
pub mod scan;
pub mod scf;

pub use error::{Error, Result};
