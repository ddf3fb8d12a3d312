// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Harmonic-ring quantum data bus: Gaussian dynamics of a ring of coupled
//! oscillators with weakly attached probes, effective low-energy models and
//! the single-excitation (spin-chain) limit.
//!
//! Modules, bottom-up:
//! - [`chain`]: potential matrices, disorder and normal modes;
//! - [`gaussian`]: covariance states, exact propagators, logarithmic negativity;
//! - [`effective`]: reduced models, scaling estimates, closed-form three-probe amplitudes;
//! - [`single_excitation`]: RWA/xy hopping matrices, amplitude evolution, W-state overlap;
//! - [`experiments`]: configurable reproduction runs and their serialized output.

// Input checks are written as `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod chain;
pub mod effective;
pub mod error;
pub mod experiments;
pub mod gaussian;
pub mod linalg;
pub mod single_excitation;

pub use error::{Error, Result};

/// Crate version recorded in experiment metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
