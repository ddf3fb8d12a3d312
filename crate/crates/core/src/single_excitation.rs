// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! The single-excitation sector of the chain and its xy spin-chain twin.
//!
//! Writing `x = (a + a†)/√2`, `p = i(a† − a)/√2` at unit frequency and
//! dropping the excitation non-conserving terms turns `½(pᵀp + xᵀVx)` into
//! `Σ h_ij a_i†a_j` with `h = (I + V)/2`. A spin chain with xy couplings
//! `J_ij = V_ij/2` and fields `(1 + V_ii)/2` has the same matrix in its
//! one-flipped-spin sector.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chain::{disorder_draws, ChainSpec, DisorderModel, QuadraticHamiltonian};
use crate::error::{Error, Result};
use crate::linalg::SymEigen;

/// Norm tolerance for amplitude states.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    RwaFromQuadratic,
    XyDirect,
}

/// Real symmetric single-excitation Hamiltonian over labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingMatrix {
    pub labels: Vec<String>,
    pub h: DMatrix<f64>,
    pub derivation: Derivation,
}

impl HoppingMatrix {
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `⟨ψ|h|ψ⟩`
    pub fn energy(&self, psi: &AmplitudeState) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        let mut e = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                e += psi.psi[i].conj() * self.h[(i, j)] * psi.psi[j];
            }
        }
        Ok(e.re)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Rotating-wave reduction: `h_ii = (1 + V_ii)/2`, `h_ij = V_ij/2`.
pub fn rwa_hopping_matrix(h: &QuadraticHamiltonian) -> HoppingMatrix {
    let v = h.potential();
    let n = v.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (1.0 + v[(i, i)]) / 2.0
        } else {
            v[(i, j)] / 2.0
        }
    });
    HoppingMatrix {
        labels: h.labels().to_vec(),
        h: m,
        derivation: Derivation::RwaFromQuadratic,
    }
}

/// Builds the spin-chain matrix straight from the chain description: ring exchange
/// `−b_k/2`, probe exchange `−ε/2`, local fields `(1 + ω²)/2` where `ω²` is
/// the site's total squared frequency (on-site term, adjacent bonds and
/// attached probe couplings, summed in that order).
pub fn xy_direct_matrix(spec: &ChainSpec) -> Result<HoppingMatrix> {
    spec.validate()?;
    let m = spec.ring_size;
    let n = spec.mode_count();

    let (onsite, bonds) = match &spec.disorder {
        None => (vec![1.0; m], vec![spec.coupling; m]),
        Some(d) => {
            let draws = disorder_draws(d.spread, d.seed, m);
            match d.model {
                DisorderModel::Bond => (vec![1.0; m], draws.iter().map(|u| spec.coupling * (1.0 + u)).collect()),
                DisorderModel::Site => (draws.iter().map(|u| 1.0 + u).collect(), vec![spec.coupling; m]),
            }
        }
    };

    let mut exchange = DMatrix::<f64>::zeros(n, n);
    let mut fields = vec![0.0; n];
    for k in 0..m {
        let next = (k + 1) % m;
        exchange[(k, next)] = -bonds[k] / 2.0;
        exchange[(next, k)] = -bonds[k] / 2.0;
    }
    for k in 0..m {
        let mut omega_sq = onsite[k] + bonds[(k + m - 1) % m] + bonds[k];
        for probe in &spec.probes {
            if probe.site - 1 == k && probe.epsilon != 0.0 {
                omega_sq += probe.epsilon;
            }
        }
        fields[k] = (1.0 + omega_sq) / 2.0;
    }
    for (i, probe) in spec.probes.iter().enumerate() {
        let p = m + i;
        let s = probe.site - 1;
        fields[p] = (1.0 + ((1.0 + probe.detuning) + probe.epsilon)) / 2.0;
        exchange[(p, s)] = -probe.epsilon / 2.0;
        exchange[(s, p)] = -probe.epsilon / 2.0;
    }
    if spec.include_decoupled_c {
        // (1 + ω²)/2 with ω² = 1 for the lone spectator.
        fields[n - 1] = 1.0;
    }
    for (k, f) in fields.into_iter().enumerate() {
        exchange[(k, k)] = f;
    }
    Ok(HoppingMatrix {
        labels: spec.labels(),
        h: exchange,
        derivation: Derivation::XyDirect,
    })
}

/// Normalized complex amplitudes over labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    pub labels: Vec<String>,
    pub psi: Vec<Complex64>,
}

impl AmplitudeState {
    pub fn new(labels: Vec<String>, psi: Vec<Complex64>) -> Result<Self> {
        check_dim(labels.len(), psi.len())?;
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("amplitude norm is {norm}, expected 1")));
        }
        Ok(Self { labels, psi })
    }

    /// Single excitation on `label`.
    pub fn basis(labels: Vec<String>, label: &str) -> Result<Self> {
        let k = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let mut psi = vec![Complex64::new(0.0, 0.0); labels.len()];
        psi[k] = Complex64::new(1.0, 0.0);
        Ok(Self { labels, psi })
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn amplitude(&self, label: &str) -> Result<Complex64> {
        Ok(self.psi[self.index_of(label)?])
    }
}

/// Cached eigendecomposition of a hopping matrix for repeated evolution.
#[derive(Debug, Clone)]
pub struct AmplitudeEvolver {
    labels: Vec<String>,
    eig: SymEigen,
}

impl AmplitudeEvolver {
    pub fn new(h: &HoppingMatrix) -> Result<Self> {
        Ok(Self {
            labels: h.labels.clone(),
            eig: SymEigen::new(&h.h)?,
        })
    }

    /// Eigenbasis coefficients of `psi0`, reusable across times.
    pub fn project(&self, psi0: &AmplitudeState) -> Result<Vec<Complex64>> {
        let n = self.labels.len();
        check_dim(n, psi0.dim())?;
        let u = &self.eig.vectors;
        Ok((0..n).map(|k| (0..n).map(|i| psi0.psi[i] * u[(i, k)]).sum()).collect())
    }

    /// Amplitudes at time `t` of the modes in `rows`, given eigenbasis coefficients.
    pub fn amplitudes_at(&self, coeffs: &[Complex64], rows: &[usize], t: f64) -> Vec<Complex64> {
        let u = &self.eig.vectors;
        let phased: Vec<Complex64> = coeffs
            .iter()
            .zip(self.eig.values.iter())
            .map(|(c, l)| c * Complex64::from_polar(1.0, -l * t))
            .collect();
        rows.iter()
            .map(|&i| phased.iter().enumerate().map(|(k, c)| c * u[(i, k)]).sum())
            .collect()
    }

    /// `exp(−iht) ψ₀`
    pub fn evolve(&self, psi0: &AmplitudeState, t: f64) -> Result<AmplitudeState> {
        let coeffs = self.project(psi0)?;
        let rows: Vec<usize> = (0..self.labels.len()).collect();
        Ok(AmplitudeState {
            labels: self.labels.clone(),
            psi: self.amplitudes_at(&coeffs, &rows, t),
        })
    }
}

/// `exp(−iht) ψ₀` through the eigendecomposition of `h`.
pub fn evolve_amplitudes(h: &HoppingMatrix, psi0: &AmplitudeState, t: f64) -> Result<AmplitudeState> {
    AmplitudeEvolver::new(h)?.evolve(psi0, t)
}

/// `|ψ_i|²` per mode.
pub fn site_populations(psi: &AmplitudeState) -> Vec<f64> {
    psi.psi.iter().map(|z| z.norm_sqr()).collect()
}

/// Coefficients `(x, y, z)` of a three-party W state on chosen modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WTarget {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl WTarget {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Result<Self> {
        let norm = x.norm_sqr() + y.norm_sqr() + z.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "W coefficients must be normalized, |x|²+|y|²+|z|² = {norm}"
            )));
        }
        Ok(Self { x, y, z })
    }

    pub fn real(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0))
    }

    /// `(1, −1, −1)/√3`, the state reached from an excitation on the first probe.
    pub fn symmetric_from_first() -> Self {
        let s = 1.0 / 3f64.sqrt();
        Self::real(s, -s, -s).expect("normalized")
    }

    fn coefficients(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Modulus of the projection onto `W ⊗ |0⟩_ring`: `|x*ψ_a + y*ψ_b + z*ψ_c|`.
///
/// Any weight left on the ring counts against the overlap.
pub fn w_overlap(psi: &AmplitudeState, modes: [usize; 3], target: &WTarget) -> Result<f64> {
    Ok(w_projection(psi, modes, target)?.norm())
}

/// Squared projection `|⟨W ⊗ 0|ψ⟩|²`.
pub fn w_fidelity(psi: &AmplitudeState, modes: [usize; 3], target: &WTarget) -> Result<f64> {
    Ok(w_projection(psi, modes, target)?.norm_sqr())
}

/// Overlap after the best local phase rotation on each of the three modes,
/// `Σ |x_i||ψ_i|`.
pub fn phase_optimized_overlap(psi: &AmplitudeState, modes: [usize; 3], target: &WTarget) -> Result<f64> {
    check_modes(psi, modes)?;
    Ok(target
        .coefficients()
        .iter()
        .zip(modes)
        .map(|(w, k)| w.norm() * psi.psi[k].norm())
        .sum())
}

fn check_modes(psi: &AmplitudeState, modes: [usize; 3]) -> Result<()> {
    if modes.iter().any(|&k| k >= psi.dim()) || modes[0] == modes[1] || modes[1] == modes[2] || modes[0] == modes[2] {
        return Err(Error::InvalidArgument(format!("invalid W modes {modes:?}")));
    }
    Ok(())
}

fn w_projection(psi: &AmplitudeState, modes: [usize; 3], target: &WTarget) -> Result<Complex64> {
    check_modes(psi, modes)?;
    Ok(target
        .coefficients()
        .iter()
        .zip(modes)
        .map(|(w, k)| w.conj() * psi.psi[k])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{Disorder, Probe};
    use crate::effective::effective_single_excitation_hamiltonian;
    use proptest::prelude::*;

    fn three_probe_spec(m: usize, c: f64, eps: f64) -> ChainSpec {
        ChainSpec::ring(m, c)
            .with_probe(Probe::new("a", 1, eps))
            .with_probe(Probe::new("b", 1 + m / 3, eps))
            .with_probe(Probe::new("c", 1 + 2 * m / 3, eps))
    }

    #[test]
    fn free_modes_have_unit_energy() {
        let h = QuadraticHamiltonian::new(vec!["x".into(), "y".into()], DMatrix::identity(2, 2), 0).unwrap();
        assert_eq!(rwa_hopping_matrix(&h).h, DMatrix::identity(2, 2));
    }

    #[test]
    fn ring_entries() {
        let h = rwa_hopping_matrix(&ChainSpec::ring(6, 1.5).build().unwrap());
        assert_eq!(h.h[(2, 2)], 2.5);
        assert_eq!(h.h[(2, 3)], -0.75);
        assert_eq!(h.h[(0, 5)], -0.75);
    }

    #[test]
    fn direct_matches_rwa_exactly() {
        let spec = three_probe_spec(12, 1.0, 0.05);
        let a = rwa_hopping_matrix(&spec.build().unwrap());
        let b = xy_direct_matrix(&spec).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.labels, b.labels);
        assert_eq!(b.derivation, Derivation::XyDirect);
    }

    #[test]
    fn decoupled_probe_has_empty_row() {
        let spec = ChainSpec::ring(5, 1.0).with_probe(Probe::new("a", 2, 0.0));
        let h = xy_direct_matrix(&spec).unwrap();
        for j in 0..5 {
            assert_eq!(h.h[(5, j)].abs(), 0.0);
        }
        assert_eq!(h.h[(5, 5)], 1.0);
    }

    #[test]
    fn equality_survives_disorder() {
        for seed in 0..50u64 {
            let model = if seed % 5 == 0 {
                DisorderModel::Site
            } else {
                DisorderModel::Bond
            };
            let spec = three_probe_spec(
                9 + (seed as usize % 7),
                0.5 + seed as f64 * 0.1,
                0.01 * (1 + seed % 4) as f64,
            )
            .with_disorder(Disorder {
                model,
                spread: 0.3,
                seed,
            });
            let a = rwa_hopping_matrix(&spec.build().unwrap());
            let b = xy_direct_matrix(&spec).unwrap();
            assert_eq!(a.h, b.h, "seed {seed}");
        }
    }

    #[test]
    fn uniform_vector_is_eigenvector_under_bond_disorder() {
        let spec = ChainSpec::ring(15, 2.0).with_disorder(Disorder::bond(0.4, 9));
        let h = xy_direct_matrix(&spec).unwrap();
        let ones = nalgebra::DVector::from_element(15, 1.0);
        assert!((&h.h * &ones - &ones).amax() < 1e-13);
    }

    #[test]
    fn projection_reproduces_effective_matrix() {
        // project h onto (a, b, uniform ring vector) and compare with the effective model
        let m = 40;
        for eps in [0.001, 0.004] {
            let spec = ChainSpec::ring(m, 1.0)
                .with_probe(Probe::new("a", 1, eps))
                .with_probe(Probe::new("b", 21, eps));
            let h = rwa_hopping_matrix(&spec.build().unwrap()).h;
            let mut basis = DMatrix::zeros(m + 2, 3);
            basis[(m, 0)] = 1.0;
            basis[(m + 1, 1)] = 1.0;
            for k in 0..m {
                basis[(k, 2)] = 1.0 / (m as f64).sqrt();
            }
            let projected = basis.transpose() * h * &basis;
            let effective = effective_single_excitation_hamiltonian(m, eps, 2).unwrap();
            let dev = crate::effective::max_deviation_modulo_shift(&projected, &effective);
            assert!(dev < eps * eps + 1e-9, "ε={eps}: {dev}");
        }
    }

    #[test]
    fn evolution_basics() {
        let spec = three_probe_spec(12, 1.0, 0.05);
        let h = xy_direct_matrix(&spec).unwrap();
        let psi0 = AmplitudeState::basis(h.labels.clone(), "a").unwrap();
        let at_zero = evolve_amplitudes(&h, &psi0, 0.0).unwrap();
        for (x, y) in at_zero.psi.iter().zip(&psi0.psi) {
            assert!((x - y).norm() < 1e-14);
        }
        let e0 = h.energy(&psi0).unwrap();
        let evolver = AmplitudeEvolver::new(&h).unwrap();
        for t in [1.0, 1e3, 1e5] {
            let psi = evolver.evolve(&psi0, t).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            assert!((h.energy(&psi).unwrap() - e0).abs() < 1e-10);
            let pops = site_populations(&psi);
            assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let wrong = AmplitudeState::basis(vec!["x".into()], "x").unwrap();
        assert!(matches!(
            evolve_amplitudes(&h, &wrong, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn amplitude_state_validation() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(AmplitudeState::new(labels.clone(), vec![Complex64::new(1.0, 0.0); 2]).is_err());
        assert!(AmplitudeState::basis(labels.clone(), "z").is_err());
        let s = AmplitudeState::basis(labels, "b").unwrap();
        assert_eq!(site_populations(&s), vec![0.0, 1.0]);
    }

    #[test]
    fn w_overlap_limits() {
        let labels: Vec<String> = ["1", "2", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let target = WTarget::symmetric_from_first();
        let s = 1.0 / 3f64.sqrt();
        let w = AmplitudeState::new(
            labels.clone(),
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(-s, 0.0),
            ],
        )
        .unwrap();
        assert!((w_overlap(&w, [2, 3, 4], &target).unwrap() - 1.0).abs() < 1e-15);
        let bus = AmplitudeState::basis(labels.clone(), "1").unwrap();
        assert_eq!(w_overlap(&bus, [2, 3, 4], &target).unwrap(), 0.0);
        let start = AmplitudeState::basis(labels, "a").unwrap();
        assert!((w_fidelity(&start, [2, 3, 4], &target).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((w_overlap(&start, [2, 3, 4], &target).unwrap() - s).abs() < 1e-15);
        assert!(WTarget::real(1.0, 1.0, 0.0).is_err());
        assert!(w_overlap(&w, [2, 2, 4], &target).is_err());
    }

    #[test]
    fn phase_optimization_never_hurts() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let psi = AmplitudeState::new(
            labels,
            vec![
                Complex64::new(0.5, 0.1),
                Complex64::new(0.0, -0.6),
                Complex64::from_polar((1.0 - 0.26 - 0.36f64).sqrt(), 2.0),
            ],
        )
        .unwrap();
        let target = WTarget::symmetric_from_first();
        let raw = w_overlap(&psi, [0, 1, 2], &target).unwrap();
        let opt = phase_optimized_overlap(&psi, [0, 1, 2], &target).unwrap();
        assert!(opt >= raw && opt <= 1.0 + 1e-12);
    }

    proptest! {
        #[test]
        fn direct_equals_rwa_on_random_specs(
            m in 3usize..30,
            c in 0.05f64..20.0,
            eps in 0.0f64..0.5,
            delta in 0.0f64..3.0,
            spread in 0.0f64..0.9,
            seed in any::<u64>(),
            site_model in any::<bool>(),
        ) {
            let model = if site_model { DisorderModel::Site } else { DisorderModel::Bond };
            let spec = ChainSpec::ring(m, c)
                .with_probe(Probe::new("a", 1, eps).detuned(delta))
                .with_probe(Probe::new("b", 1 + m / 2, eps * 0.7))
                .with_spectator()
                .with_disorder(Disorder { model, spread, seed });
            let a = rwa_hopping_matrix(&spec.build().unwrap());
            let b = xy_direct_matrix(&spec).unwrap();
            prop_assert_eq!(a.h, b.h);
        }
    }
}
