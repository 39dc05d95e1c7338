//! Interval homotopy-perturbation solver for the MHD squeezing nanofluid
//! problem between parallel disks.
//!
//! The crate is layered bottom-up:
//!
//! - [`interval`]: closed real intervals, endpoint arithmetic and the
//!   single-parameter parametric form used to sample an interval.
//! - [`poly`]: power-basis polynomials in the similarity variable η.
//! - [`hpm`]: the order-k linear boundary-value solves (`u'''' = r`,
//!   `u'' = r`) that every homotopy-perturbation term reduces to.
//! - [`flow`]: the coupled momentum/energy/concentration system, the
//!   perturbation recurrence, series assembly and the Nusselt number.
//! - [`oracle`]: an independent RK4 shooting solver for the same BVP.
//! - [`sweep`]: envelope bands over interval parameter boxes and the
//!   pairwise sensitivity ranking.

pub mod error;
pub mod flow;
pub mod hpm;
pub mod interval;
pub mod oracle;
pub mod poly;
pub mod sweep;

pub use error::{Error, Result};
pub use flow::{FlowParams, HpmOptions, HpmSolution, ProfileTable};
pub use interval::Interval;
pub use oracle::{OracleSolution, ShootOptions};
pub use poly::Polynomial;
pub use sweep::{EnvelopeBand, Field, Pairing, SensitivityReport, UncertainSpec};
