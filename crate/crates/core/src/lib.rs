//! Achievable rate-distortion-cost regions for three-node cascade and
//! cascade-broadcast source-coding networks whose downstream nodes acquire
//! side information through a cost-bearing action (a "vending machine").
//!
//! Everything here is a pure computation over finite alphabets:
//!
//! * [`prob`]: dense joint distributions, channels and information measures.
//! * [`model`]: the network models, cost and distortion tables.
//! * [`cascade`]: the cascade region, its lossless specialization and an optimizer.
//! * [`broadcast`]: the cascade-broadcast regions (lossless, switching side
//!   information, lossy with common reconstruction).
//! * [`fme`]: exact Fourier-Motzkin elimination for rate-splitting systems.
//! * [`oracle`]: brute-force and definitional re-implementations used for
//!   cross-validation only.
//!
//! Regions with adaptive actions coincide with the non-adaptive ones (for the
//! cascade-broadcast case after removing `Z`), so the same evaluators cover
//! both; see [`broadcast::eval_cr_point`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod broadcast;
pub mod cascade;
mod error;
pub mod fme;
pub mod model;
pub mod oracle;
pub mod prob;
mod search;

pub use error::{Error, Result};
pub use search::SearchConfig;
