// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ring-plus-probes potential matrices and their normal modes.
//!
//! The Hamiltonian convention is `H = ½(pᵀp + xᵀVx)` with `ħ = ω = m = 1`.
//! Modes are ordered ring sites `1..M` first, then the probes in the order
//! they were declared, then the optional decoupled spectator. Every
//! covariance and amplitude index in the crate inherits this order.
//!
//! Diagonal entries of ring sites are always assembled as
//! `onsite + left_bond + right_bond + ε_1 + ε_2 + ...` (probes in declaration
//! order). The spin-chain builder in [`crate::single_excitation`] relies on
//! that summation order to reproduce the same bits through its own code path.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SymEigen};

fn default_spectator_label() -> String {
    "c".to_string()
}

/// Squared-frequency shift that makes a probe resonant with mode `M/4`.
pub fn quarter_mode_detuning(coupling: f64) -> f64 {
    2.0 * coupling
}

/// A weakly attached oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub label: String,
    /// 1-based ring site the probe couples to.
    pub site: usize,
    pub epsilon: f64,
    /// Additive shift of the probe's bare squared frequency (`ω² = 1 + δ`).
    #[serde(default)]
    pub detuning: f64,
}

impl Probe {
    pub fn new(label: impl Into<String>, site: usize, epsilon: f64) -> Self {
        Self {
            label: label.into(),
            site,
            epsilon,
            detuning: 0.0,
        }
    }

    pub fn detuned(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderModel {
    /// Multiplicative noise on every ring bond, diagonal re-balanced.
    #[default]
    Bond,
    /// Additive noise on the on-site squared frequency. Breaks the exact
    /// frequency-1 center-of-mass mode.
    Site,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disorder {
    #[serde(default)]
    pub model: DisorderModel,
    pub spread: f64,
    pub seed: u64,
}

impl Disorder {
    pub fn bond(spread: f64, seed: u64) -> Self {
        Self {
            model: DisorderModel::Bond,
            spread,
            seed,
        }
    }

    pub fn site(spread: f64, seed: u64) -> Self {
        Self {
            model: DisorderModel::Site,
            spread,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.spread) {
            return Err(Error::InvalidChain(format!(
                "disorder spread must lie in [0, 1), got {}",
                self.spread
            )));
        }
        Ok(())
    }
}

/// Uniform draws in `[-spread, spread]`, one per ring site, from a ChaCha8 stream.
pub fn disorder_draws(spread: f64, seed: u64, count: usize) -> Vec<f64> {
    if spread == 0.0 {
        return vec![0.0; count];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(-spread..=spread)).collect()
}

/// Declarative description of a ring with attached probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub ring_size: usize,
    pub coupling: f64,
    #[serde(default)]
    pub probes: Vec<Probe>,
    /// Append a decoupled unit-frequency oscillator (the entanglement partner).
    #[serde(default)]
    pub include_decoupled_c: bool,
    #[serde(default = "default_spectator_label")]
    pub spectator_label: String,
    #[serde(default)]
    pub allow_shared_sites: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<Disorder>,
}

impl ChainSpec {
    pub fn ring(ring_size: usize, coupling: f64) -> Self {
        Self {
            ring_size,
            coupling,
            probes: Vec::new(),
            include_decoupled_c: false,
            spectator_label: default_spectator_label(),
            allow_shared_sites: false,
            disorder: None,
        }
    }

    pub fn with_probe(mut self, probe: Probe) -> Self {
        self.probes.push(probe);
        self
    }

    pub fn with_spectator(mut self) -> Self {
        self.include_decoupled_c = true;
        self
    }

    pub fn with_disorder(mut self, disorder: Disorder) -> Self {
        self.disorder = Some(disorder);
        self
    }

    pub fn mode_count(&self) -> usize {
        self.ring_size + self.probes.len() + usize::from(self.include_decoupled_c)
    }

    /// Labels in canonical mode order.
    pub fn labels(&self) -> Vec<String> {
        let mut labels = ring_labels(self.ring_size);
        labels.extend(self.probes.iter().map(|p| p.label.clone()));
        if self.include_decoupled_c {
            labels.push(self.spectator_label.clone());
        }
        labels
    }

    pub fn validate(&self) -> Result<()> {
        validate_ring(self.ring_size, self.coupling)?;
        let mut seen_sites = HashSet::new();
        for p in &self.probes {
            if p.site < 1 || p.site > self.ring_size {
                return Err(Error::InvalidChain(format!(
                    "probe `{}` attached to site {} outside 1..={}",
                    p.label, p.site, self.ring_size
                )));
            }
            if !(p.epsilon >= 0.0) || !p.epsilon.is_finite() {
                return Err(Error::InvalidChain(format!(
                    "probe `{}` has invalid coupling {}",
                    p.label, p.epsilon
                )));
            }
            if !(p.detuning >= 0.0) || !p.detuning.is_finite() {
                return Err(Error::InvalidChain(format!(
                    "probe `{}` has invalid detuning {}",
                    p.label, p.detuning
                )));
            }
            if !self.allow_shared_sites && !seen_sites.insert(p.site) {
                return Err(Error::InvalidChain(format!(
                    "site {} carries more than one probe (set allow_shared_sites)",
                    p.site
                )));
            }
        }
        let labels = self.labels();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidChain(format!("duplicate mode label `{l}`")));
            }
        }
        if let Some(d) = &self.disorder {
            d.validate()?;
        }
        Ok(())
    }

    /// Shorthand for [`attach_probes`].
    pub fn build(&self) -> Result<QuadraticHamiltonian> {
        attach_probes(self)
    }
}

fn ring_labels(m: usize) -> Vec<String> {
    (1..=m).map(|k| k.to_string()).collect()
}

fn validate_ring(m: usize, c: f64) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidChain(format!("ring size must be at least 3, got {m}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidChain(format!("ring coupling must be positive, got {c}")));
    }
    Ok(())
}

/// Symmetric potential matrix over labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    labels: Vec<String>,
    potential: DMatrix<f64>,
    ring_size: usize,
}

impl QuadraticHamiltonian {
    /// Wraps a potential matrix whose first `ring_size` modes form the ring.
    pub fn new(labels: Vec<String>, potential: DMatrix<f64>, ring_size: usize) -> Result<Self> {
        let n = linalg::ensure_square(&potential)?;
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        if ring_size > n {
            return Err(Error::InvalidArgument(format!(
                "ring size {ring_size} exceeds mode count {n}"
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate mode label `{l}`")));
            }
        }
        if linalg::max_asymmetry(&potential) != 0.0 {
            return Err(Error::NotSymmetric(linalg::max_asymmetry(&potential)));
        }
        Ok(Self {
            labels,
            potential,
            ring_size,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn potential(&self) -> &DMatrix<f64> {
        &self.potential
    }

    pub fn ring_size(&self) -> usize {
        self.ring_size
    }

    pub fn mode_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Smallest eigenvalue of V.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(SymEigen::new(&self.potential)?.min_value())
    }
}

/// Ring potential: diagonal `1 + 2c`, nearest neighbours and the closing
/// corner `-c`.
pub fn build_ring_potential(ring_size: usize, coupling: f64) -> Result<DMatrix<f64>> {
    validate_ring(ring_size, coupling)?;
    let bonds = vec![coupling; ring_size];
    let onsite = vec![1.0; ring_size];
    let mut v = DMatrix::zeros(ring_size, ring_size);
    write_ring(&mut v, ring_size, &onsite, &bonds, &[]);
    Ok(v)
}

/// Writes ring bonds and ring diagonals into `v`.
///
/// `probe_cols` lists probe columns whose couplings (read from `v`) are added
/// to the ring diagonal after the bonds, in order.
fn write_ring(v: &mut DMatrix<f64>, m: usize, onsite: &[f64], bonds: &[f64], probe_cols: &[usize]) {
    for k in 0..m {
        let next = (k + 1) % m;
        v[(k, next)] = -bonds[k];
        v[(next, k)] = -bonds[k];
    }
    for k in 0..m {
        let left = bonds[(k + m - 1) % m];
        let right = bonds[k];
        let mut diag = onsite[k] + left + right;
        for &p in probe_cols {
            let coupling = -v[(k, p)];
            if coupling != 0.0 {
                diag += coupling;
            }
        }
        v[(k, k)] = diag;
    }
}

/// Expands each probe coupling `ε(x_p - x_s)²/2` into the potential matrix.
///
/// Probe diagonals are `(1 + δ) + ε`; the spectator (if any) contributes a
/// lone unit diagonal. Disorder from the chain description is applied last.
pub fn attach_probes(spec: &ChainSpec) -> Result<QuadraticHamiltonian> {
    spec.validate()?;
    let m = spec.ring_size;
    let n = spec.mode_count();
    let mut v = DMatrix::zeros(n, n);

    let bonds = vec![spec.coupling; m];
    let onsite = vec![1.0; m];
    write_ring(&mut v, m, &onsite, &bonds, &[]);

    for (i, probe) in spec.probes.iter().enumerate() {
        let p = m + i;
        let s = probe.site - 1;
        v[(p, p)] = (1.0 + probe.detuning) + probe.epsilon;
        v[(s, s)] += probe.epsilon;
        v[(p, s)] = -probe.epsilon;
        v[(s, p)] = -probe.epsilon;
    }
    if spec.include_decoupled_c {
        v[(n - 1, n - 1)] = 1.0;
    }

    let h = QuadraticHamiltonian::new(spec.labels(), v, m)?;
    match &spec.disorder {
        Some(d) => apply_disorder(&h, d),
        None => Ok(h),
    }
}

/// Applies seeded disorder to the ring part of `h`, leaving probe couplings intact.
///
/// Bond model: every ring bond `b` becomes `b(1 + u)` with `u` uniform in
/// `[-spread, spread]`, and each ring diagonal is re-assembled as
/// `1 + left + right + Σε`, so the ring rows still sum to one.
/// Site model: bonds are kept and the on-site term becomes `1 + u`.
pub fn apply_disorder(h: &QuadraticHamiltonian, disorder: &Disorder) -> Result<QuadraticHamiltonian> {
    disorder.validate()?;
    let m = h.ring_size;
    if m < 3 {
        return Err(Error::InvalidChain("disorder needs a ring of at least 3 sites".into()));
    }
    let mut v = h.potential.clone();
    let draws = disorder_draws(disorder.spread, disorder.seed, m);
    let old_bonds: Vec<f64> = (0..m).map(|k| -v[(k, (k + 1) % m)]).collect();
    let (onsite, bonds): (Vec<f64>, Vec<f64>) = match disorder.model {
        DisorderModel::Bond => (
            vec![1.0; m],
            old_bonds.iter().zip(&draws).map(|(b, u)| b * (1.0 + u)).collect(),
        ),
        DisorderModel::Site => (draws.iter().map(|u| 1.0 + u).collect(), old_bonds),
    };
    let probe_cols: Vec<usize> = (m..h.mode_count()).collect();
    write_ring(&mut v, m, &onsite, &bonds, &probe_cols);
    QuadraticHamiltonian::new(h.labels.clone(), v, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOrigin {
    AnalyticDft,
    Numeric,
}

/// Normal-mode transform `T` (rows are modes) with `V = T† diag(Λ²) T`.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    pub transform: DMatrix<Complex64>,
    pub frequencies_squared: DVector<f64>,
    pub origin: ModeOrigin,
}

impl ModeBasis {
    /// `T† diag(Λ²) T`
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.frequencies_squared.len();
        let mut scaled = self.transform.clone();
        for k in 0..n {
            let f = Complex64::new(self.frequencies_squared[k], 0.0);
            for l in 0..n {
                scaled[(k, l)] *= f;
            }
        }
        self.transform.adjoint() * scaled
    }

    /// Largest entry of `|T T† - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.transform.nrows();
        let prod = &self.transform * self.transform.adjoint();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Eigenvalues sorted ascending.
    pub fn sorted_frequencies_squared(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.frequencies_squared.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Squared frequency of ring mode `k` (1-based; `k = M` is the center of mass).
pub fn ring_mode_frequency_squared(ring_size: usize, coupling: f64, k: usize) -> f64 {
    1.0 + 2.0 * coupling - 2.0 * coupling * (2.0 * PI * k as f64 / ring_size as f64).cos()
}

/// Analytic Fourier modes of the ordered ring, `Ω_kl = e^{2πikl/M}/√M`.
///
/// Row `k - 1` holds mode `k`; the last row is the center-of-mass mode.
pub fn ring_normal_modes(ring_size: usize, coupling: f64) -> Result<ModeBasis> {
    validate_ring(ring_size, coupling)?;
    let m = ring_size;
    let norm = 1.0 / (m as f64).sqrt();
    let transform = DMatrix::from_fn(m, m, |row, col| {
        let (k, l) = ((row + 1) as f64, (col + 1) as f64);
        Complex64::from_polar(norm, 2.0 * PI * k * l / m as f64)
    });
    let frequencies_squared = DVector::from_fn(m, |row, _| ring_mode_frequency_squared(m, coupling, row + 1));
    Ok(ModeBasis {
        transform,
        frequencies_squared,
        origin: ModeOrigin::AnalyticDft,
    })
}

/// Orthogonal eigendecomposition of a symmetric positive definite potential.
///
/// Eigenvalues ascending; each mode vector has its first non-negligible
/// component positive.
pub fn numeric_normal_modes(v: &DMatrix<f64>) -> Result<ModeBasis> {
    let eig = SymEigen::new(v)?;
    let min = eig.min_value();
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let transform = eig.vectors.transpose().map(|x| Complex64::new(x, 0.0));
    Ok(ModeBasis {
        transform,
        frequencies_squared: eig.values,
        origin: ModeOrigin::Numeric,
    })
}
