// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scripted reproduction runs: transfer, exact-vs-effective comparison,
//! W-state generation, scaling sweeps, disorder sweeps and node parity.
//!
//! Every run is a pure function of its resolved configuration. Sweeps run in
//! parallel but are assembled in sweep order, so outputs are byte-identical
//! across runs and thread counts.

pub mod config;
pub mod result;
mod runs;
mod sampling;

pub use config::{swap_time, ExperimentConfig, ExperimentKind, SweepSpec, TimeGrid};
pub use result::{format_float, ExperimentResult, Metadata, OutputFormat, Table};
pub use runs::{
    run_compare_approx, run_disorder, run_node_parity, run_scaling, run_transfer, run_wstate, TransferProblem,
};
pub use sampling::{sample_rows, Sampled};

use crate::error::Result;

/// Resolves `config` for `kind` and runs it.
pub fn run(kind: ExperimentKind, config: &ExperimentConfig) -> Result<ExperimentResult> {
    let resolved = config.resolve(kind)?;
    match kind {
        ExperimentKind::Transfer => run_transfer(&resolved),
        ExperimentKind::CompareApprox => run_compare_approx(&resolved),
        ExperimentKind::Wstate => run_wstate(&resolved),
        ExperimentKind::Scaling => run_scaling(&resolved),
        ExperimentKind::Disorder => run_disorder(&resolved),
        ExperimentKind::NodeParity => run_node_parity(&resolved),
    }
}
