//! Finite-frequency model order reduction.
//!
//! Balanced truncation in the coordinates of a parameterized
//! frequency-dependent mapping, with an a priori error bound over a low,
//! middle or high frequency range.
//!
//! ```
//! use ffmor::analysis::{band_sup, error_system};
//! use ffmor::pfdbt::{pfdbt_lf, Routing};
//! use ffmor::{fixtures, FrequencyRange};
//!
//! let model = fixtures::example2();
//! let band = FrequencyRange::low(1.0)?;
//! let res = pfdbt_lf(&model, band, 4.0, 3, Routing::R1)?;
//! let err = band_sup(&error_system(&model, &res.reduced)?, &band, 600)?;
//! assert!(err <= res.bound);
//! # Ok::<(), ffmor::Error>(())
//! ```

pub mod analysis;
pub mod bt;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod mapping;
pub mod model;
pub mod pfdbt;
pub mod random;

pub use error::{Error, Result};
pub use model::{FrequencyRange, ScalarField, SigmaSweep, StateSpaceModel, SweepDomain, TimeDomain};
