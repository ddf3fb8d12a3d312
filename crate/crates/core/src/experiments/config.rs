// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Strict JSON experiment configuration with per-experiment defaults.
//!
//! Every field is optional; [`ExperimentConfig::resolve`] fills the gaps from
//! the experiment's preset and validates the result. The resolved config is
//! echoed into every output, and resolving it again is a no-op, so an echoed
//! config reproduces its run.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{quarter_mode_detuning, ChainSpec, Probe};
use crate::effective::Regime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Transfer,
    CompareApprox,
    Wstate,
    Scaling,
    Disorder,
    NodeParity,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Transfer,
        ExperimentKind::CompareApprox,
        ExperimentKind::Wstate,
        ExperimentKind::Scaling,
        ExperimentKind::Disorder,
        ExperimentKind::NodeParity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Transfer => "transfer",
            ExperimentKind::CompareApprox => "compare-approx",
            ExperimentKind::Wstate => "wstate",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Disorder => "disorder",
            ExperimentKind::NodeParity => "node-parity",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Sampling grid. For `wstate` the axis is the scaled time `τ = εt/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl TimeGrid {
    /// Unit spacing over `[0, t_max]`.
    pub fn unit_step(t_max: f64) -> Self {
        Self {
            t_max,
            samples: Some(t_max.floor() as usize + 1),
        }
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(self.t_max.floor() as usize + 1)
    }
}

/// Sweep axes for `scaling` and `disorder`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    /// Probe coupling as a fraction of the regime's weak-coupling bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_fraction: Option<f64>,
    /// Transfer efficiency whose first crossing defines the transfer time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Observation window in units of the swap time `πM/ε`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Samples per ring size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spreads: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    /// Two-mode squeezing `r` of the initial probe/spectator state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squeezing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Real W-state coefficients `(x, y, z)` for the first, second and third probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_target: Option<[f64; 3]>,
    /// Even probe separation for `node-parity`; the odd case uses one more site.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Swap time of two probes through the center-of-mass mode, `πM/ε`.
pub fn swap_time(ring_size: usize, epsilon: f64) -> f64 {
    PI * ring_size as f64 / epsilon
}

fn two_probe_chain(m: usize, c: f64, eps: f64, separation: usize, detuning: f64) -> ChainSpec {
    ChainSpec::ring(m, c)
        .with_probe(Probe::new("a", 1, eps).detuned(detuning))
        .with_probe(Probe::new("b", 1 + separation % m, eps).detuned(detuning))
        .with_spectator()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Default configuration reproducing the reference run of `kind`.
    pub fn preset(kind: ExperimentKind) -> Self {
        Self {
            experiment: Some(kind),
            ..Self::default()
        }
        .resolve(kind)
        .expect("presets are valid")
    }

    /// Fills unspecified fields from the preset of `kind` and validates.
    pub fn resolve(&self, kind: ExperimentKind) -> Result<Self> {
        if let Some(declared) = self.experiment {
            if declared != kind {
                return Err(Error::Config(format!(
                    "config declares experiment `{declared}` but `{kind}` was requested"
                )));
            }
        }
        let mut out = self.clone();
        out.experiment = Some(kind);
        match kind {
            ExperimentKind::Transfer => {
                out.chain
                    .get_or_insert_with(|| two_probe_chain(20, 1.0, 0.015, 10, 0.0));
                out.squeezing.get_or_insert(1.0);
                out.fill_transfer_time()?;
            }
            ExperimentKind::CompareApprox => {
                out.chain
                    .get_or_insert_with(|| two_probe_chain(20, 10.0, 0.021, 10, 0.0));
                out.squeezing.get_or_insert(1.0);
                out.fill_transfer_time()?;
            }
            ExperimentKind::Wstate => {
                out.chain.get_or_insert_with(|| {
                    ChainSpec::ring(70, 10.0)
                        .with_probe(Probe::new("a", 1, 0.021))
                        .with_probe(Probe::new("b", 24, 0.021))
                        .with_probe(Probe::new("c", 48, 0.021))
                });
                let s = 1.0 / 3f64.sqrt();
                out.w_target.get_or_insert([s, -s, -s]);
                let m = out.chain.as_ref().map_or(70, |c| c.ring_size);
                let grid = out.time.get_or_insert(TimeGrid {
                    t_max: 1.4 * PI * m as f64 / 3.0,
                    samples: Some(2001),
                });
                grid.samples.get_or_insert(2001);
            }
            ExperimentKind::Scaling => {
                let sweep = out.sweep.get_or_insert_with(SweepSpec::default);
                let regime = *sweep.regime.get_or_insert(Regime::Com);
                sweep.ring_sizes.get_or_insert_with(|| match regime {
                    Regime::Com => vec![8, 12, 16, 20, 28, 40],
                    Regime::QuarterMode => vec![8, 16, 24, 32, 48],
                });
                sweep.coupling.get_or_insert(1.0);
                sweep.epsilon_fraction.get_or_insert(0.02);
                sweep.threshold.get_or_insert(0.8);
                sweep.window.get_or_insert(1.5);
                sweep.samples.get_or_insert(6000);
                out.squeezing.get_or_insert(1.0);
            }
            ExperimentKind::Disorder => {
                out.chain
                    .get_or_insert_with(|| two_probe_chain(20, 1.0, 0.015, 10, 0.0));
                out.squeezing.get_or_insert(1.0);
                let sweep = out.sweep.get_or_insert_with(SweepSpec::default);
                sweep.spreads.get_or_insert_with(|| vec![0.0, 0.05, 0.1, 0.2]);
                sweep.seed_count.get_or_insert(20);
                out.seed.get_or_insert(0);
                out.fill_transfer_time()?;
            }
            ExperimentKind::NodeParity => {
                out.chain
                    .get_or_insert_with(|| two_probe_chain(16, 1.0, 0.02, 8, quarter_mode_detuning(1.0)));
                let m = out.chain.as_ref().map_or(16, |c| c.ring_size);
                out.separation.get_or_insert(m / 2);
                out.squeezing.get_or_insert(1.0);
                out.fill_transfer_time()?;
            }
        }
        out.validate(kind)?;
        Ok(out)
    }

    fn fill_transfer_time(&mut self) -> Result<()> {
        let chain = self.chain.as_ref().expect("chain filled before time");
        let eps = chain
            .probes
            .first()
            .map(|p| p.epsilon)
            .filter(|e| *e > 0.0)
            .unwrap_or(0.015);
        let grid = self
            .time
            .get_or_insert_with(|| TimeGrid::unit_step((1.5 * swap_time(chain.ring_size, eps)).round()));
        let samples = grid.samples();
        grid.samples = Some(samples);
        Ok(())
    }

    fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if let Some(r) = self.squeezing {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Config(format!("squeezing must be positive, got {r}")));
            }
        }
        if let Some(grid) = &self.time {
            if !(grid.t_max > 0.0) || !grid.t_max.is_finite() {
                return Err(Error::Config(format!(
                    "time.t_max must be positive, got {}",
                    grid.t_max
                )));
            }
            if grid.samples() < 2 {
                return Err(Error::Config("time.samples must be at least 2".into()));
            }
        }
        if let Some(chain) = &self.chain {
            chain.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(sweep) = &self.sweep {
            if let Some(sizes) = &sweep.ring_sizes {
                if kind == ExperimentKind::Scaling && sizes.len() < 3 {
                    return Err(Error::Config(format!(
                        "scaling fit requires at least 3 ring sizes, got {}",
                        sizes.len()
                    )));
                }
                if sizes.iter().any(|&m| m < 3) {
                    return Err(Error::Config("ring sizes must be at least 3".into()));
                }
                if sweep.regime == Some(Regime::QuarterMode) && sizes.iter().any(|m| !m.is_multiple_of(4)) {
                    return Err(Error::Config("quarter-mode ring sizes must be divisible by 4".into()));
                }
            }
            if let Some(spreads) = &sweep.spreads {
                if spreads.is_empty() {
                    return Err(Error::Config("sweep.spreads must not be empty".into()));
                }
                if spreads.iter().any(|s| !(0.0..1.0).contains(s)) {
                    return Err(Error::Config("spreads must lie in [0, 1)".into()));
                }
            }
            if sweep.seed_count == Some(0) {
                return Err(Error::Config("sweep.seed_count must be positive".into()));
            }
            for (name, v) in [
                ("coupling", sweep.coupling),
                ("epsilon_fraction", sweep.epsilon_fraction),
                ("threshold", sweep.threshold),
                ("window", sweep.window),
            ] {
                if let Some(v) = v {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::Config(format!("sweep.{name} must be positive, got {v}")));
                    }
                }
            }
            if sweep.samples.is_some_and(|s| s < 2) {
                return Err(Error::Config("sweep.samples must be at least 2".into()));
            }
        }
        if let Some(w) = self.w_target {
            let norm: f64 = w.iter().map(|x| x * x).sum();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!("w_target must be normalized, |w|² = {norm}")));
            }
        }
        Ok(())
    }

    pub(crate) fn chain(&self) -> &ChainSpec {
        self.chain.as_ref().expect("resolved config has a chain")
    }

    pub(crate) fn grid(&self) -> TimeGrid {
        self.time.expect("resolved config has a time grid")
    }

    pub(crate) fn sweep(&self) -> &SweepSpec {
        self.sweep.as_ref().expect("resolved config has a sweep")
    }
}
