//! Multiple harmonic sums, shuffle and quasi-shuffle algebra on words over
//! `e_0, e_{z_1}, ..., e_{z_N}`, harmonic Ihara actions in depth at most two,
//! and p-adic multiple zeta values computed from harmonic sums.

pub mod error;
pub mod scalars;
pub mod words;
pub mod mhs;
pub mod ncseries;
pub mod ihara;
pub mod relations;
pub mod pmzv;

pub use error::{Error, Result};
