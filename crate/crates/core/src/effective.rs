// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reduced models of the weakly coupled probes and one resonant collective mode.
//!
//! In the frame rotating with the resonant collective mode, the probes and
//! that mode obey `H = ½(PᵀWP + XᵀWX)`, i.e. `H = Σ W_ij A_i†A_j`. For a probe
//! attached with strength `ε` to site `s` and a collective mode with real
//! profile `u` and frequency `ω₀`, first-order perturbation theory gives
//! probe self-energy `ε/(2ω₀)`, collective shift `Σ ε u_s²/(2ω₀)` and hopping
//! `−ε u_s/(2ω₀)`. For the center-of-mass mode (`u_s = 1/√M`, `ω₀ = 1`) this
//! is a collective diagonal `nε/(2M)` for `n` equal probes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SymEigen};

/// Which collective mode the probes are tuned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Probes resonant with the uniform center-of-mass mode.
    Com,
    /// Probes detuned by `2c` onto the standing wave of mode `M/4`.
    QuarterMode,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Com => "com",
            Regime::QuarterMode => "quarter-mode",
        }
    }
}

/// Quadratic effective model in the rotating frame of the target mode.
///
/// Mode order: spectator `c`, the probes, then the target collective mode.
/// The spectator row and column are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveQuadraticModel {
    pub labels: Vec<String>,
    pub w: DMatrix<f64>,
    pub target_mode_index: usize,
    pub regime: Regime,
    pub ring_size: usize,
    pub epsilon: Vec<f64>,
}

impl EffectiveQuadraticModel {
    pub fn mode_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Rotating-frame propagator `[[cos Wt, sin Wt], [−sin Wt, cos Wt]]`.
    pub fn propagator(&self, t: f64) -> DMatrix<f64> {
        let eig = SymEigen::new(&self.w).expect("effective matrix is symmetric by construction");
        let n = self.mode_count();
        let cos = eig.apply(|l| (l * t).cos());
        let sin = eig.apply(|l| (l * t).sin());
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(&cos);
        s.view_mut((0, n), (n, n)).copy_from(&sin);
        s.view_mut((n, 0), (n, n)).copy_from(&(-&sin));
        s.view_mut((n, n), (n, n)).copy_from(&cos);
        s
    }

    /// Single-excitation block over the probes and the target mode (spectator dropped).
    pub fn single_excitation_block(&self) -> DMatrix<f64> {
        let n = self.mode_count();
        self.w.view((1, 1), (n - 1, n - 1)).into_owned()
    }
}

/// Profile of the collective mode used by the effective model over ring sites `1..M`.
pub fn target_mode_profile(ring_size: usize, regime: Regime, reference_site: usize) -> Result<DVector<f64>> {
    let m = ring_size;
    match regime {
        Regime::Com => Ok(DVector::from_element(m, 1.0 / (m as f64).sqrt())),
        Regime::QuarterMode => {
            if !m.is_multiple_of(4) {
                return Err(Error::InvalidArgument(format!(
                    "quarter-mode regime needs a ring size divisible by 4, got {m}"
                )));
            }
            // standing wave of mode M/4 with an antinode at the reference site
            let norm = (2.0 / m as f64).sqrt();
            Ok(DVector::from_fn(m, |s, _| {
                let d = (s as i64 - (reference_site as i64 - 1)).rem_euclid(4);
                match d {
                    0 => norm,
                    2 => -norm,
                    _ => 0.0,
                }
            }))
        }
    }
}

/// Frequency of the target collective mode.
pub fn target_mode_frequency(coupling: f64, regime: Regime) -> f64 {
    match regime {
        Regime::Com => 1.0,
        Regime::QuarterMode => (1.0 + 2.0 * coupling).sqrt(),
    }
}

/// First-order effective model for probes `(site, ε)` (1-based sites) plus a spectator.
pub fn target_mode_hamiltonian(
    ring_size: usize,
    coupling: f64,
    probes: &[(usize, f64)],
    regime: Regime,
) -> Result<EffectiveQuadraticModel> {
    if ring_size < 3 {
        return Err(Error::InvalidArgument(format!(
            "ring size must be >= 3, got {ring_size}"
        )));
    }
    if probes.is_empty() {
        return Err(Error::InvalidArgument(
            "effective model needs at least one probe".into(),
        ));
    }
    for &(site, eps) in probes {
        if site < 1 || site > ring_size {
            return Err(Error::InvalidArgument(format!(
                "probe site {site} outside 1..={ring_size}"
            )));
        }
        if !(eps >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "probe coupling must be >= 0, got {eps}"
            )));
        }
    }
    let u = target_mode_profile(ring_size, regime, probes[0].0)?;
    let scale = 1.0 / (2.0 * target_mode_frequency(coupling, regime));
    let n = probes.len() + 2;
    let target = n - 1;
    let mut w = DMatrix::zeros(n, n);
    let mut shift = 0.0;
    for (i, &(site, eps)) in probes.iter().enumerate() {
        let p = i + 1;
        let amp = u[site - 1];
        w[(p, p)] = eps * scale;
        w[(p, target)] = -eps * amp * scale;
        w[(target, p)] = -eps * amp * scale;
        shift += eps * amp * amp;
    }
    w[(target, target)] = shift * scale;

    let mut labels = vec!["c".to_string()];
    labels.extend(default_probe_labels(probes.len()));
    labels.push(match regime {
        Regime::Com => "com".to_string(),
        Regime::QuarterMode => "quarter".to_string(),
    });
    Ok(EffectiveQuadraticModel {
        labels,
        w,
        target_mode_index: target,
        regime,
        ring_size,
        epsilon: probes.iter().map(|p| p.1).collect(),
    })
}

fn default_probe_labels(n: usize) -> Vec<String> {
    const NAMES: [&str; 3] = ["a", "b", "c"];
    (0..n)
        .map(|i| {
            if n <= 2 {
                NAMES[i].to_string()
            } else {
                format!("p{}", i + 1)
            }
        })
        .collect()
}

/// Two equal probes on the center-of-mass mode: probe diagonals `ε/2`,
/// collective diagonal `ε/M`, hoppings `−ε/(2√M)`.
pub fn approx_hamiltonian(ring_size: usize, epsilon: f64) -> Result<EffectiveQuadraticModel> {
    // sites are irrelevant for the uniform mode
    target_mode_hamiltonian(ring_size, 1.0, &[(1, epsilon), (1, epsilon)], Regime::Com)
}

/// Two equal probes on mode `M/4`, the second one `separation` sites from the first.
pub fn quarter_mode_hamiltonian(
    ring_size: usize,
    coupling: f64,
    epsilon: f64,
    separation: usize,
) -> Result<EffectiveQuadraticModel> {
    let second = 1 + separation % ring_size;
    target_mode_hamiltonian(
        ring_size,
        coupling,
        &[(1, epsilon), (second, epsilon)],
        Regime::QuarterMode,
    )
}

/// Analytic scaling estimates for one transfer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingEstimate {
    /// Gap between the target mode and its nearest neighbour in the band.
    pub gap: f64,
    /// First-order population leaked into the neighbouring modes.
    pub loss: f64,
    /// Transfer-time estimate `2M/ε`.
    pub time: f64,
    pub regime: Regime,
}

/// Right-hand side of the weak-coupling condition: `4π²c/M^{3/2}` (COM) or `4πc/√M` (quarter mode).
pub fn coupling_bound(ring_size: usize, coupling: f64, regime: Regime) -> f64 {
    let m = ring_size as f64;
    match regime {
        Regime::Com => 4.0 * PI * PI * coupling / m.powf(1.5),
        Regime::QuarterMode => 4.0 * PI * coupling / m.sqrt(),
    }
}

pub fn scaling_estimate(ring_size: usize, coupling: f64, epsilon: f64, regime: Regime) -> Result<ScalingEstimate> {
    if ring_size < 3 || !(coupling > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scaling estimate needs M >= 3, c > 0, ε > 0 (got {ring_size}, {coupling}, {epsilon})"
        )));
    }
    let m = ring_size as f64;
    let amplitude = epsilon * m.sqrt() / 2.0;
    let (gap, loss) = match regime {
        Regime::Com => {
            let gap = 2.0 * PI * PI * coupling / (m * m);
            (gap, (amplitude / (2.0 * gap)).powi(2))
        }
        Regime::QuarterMode => {
            if !ring_size.is_multiple_of(4) {
                return Err(Error::InvalidArgument(format!(
                    "quarter-mode regime needs a ring size divisible by 4, got {ring_size}"
                )));
            }
            // the loss estimate is measured against the band scale 2πc, not the gap
            (2.0 * PI * coupling / m, (amplitude / (2.0 * PI * coupling)).powi(2))
        }
    };
    Ok(ScalingEstimate {
        gap,
        loss,
        time: 2.0 * m / epsilon,
        regime,
    })
}

/// Single-excitation matrix over `(probes…, collective)` with zero probe energy:
/// probe diagonals 0, collective diagonal `nε/(2M) − ε/2`, hoppings `−ε/(2√M)`.
pub fn effective_single_excitation_hamiltonian(ring_size: usize, epsilon: f64, probes: usize) -> Result<DMatrix<f64>> {
    if !(probes == 2 || probes == 3) {
        return Err(Error::InvalidArgument(format!(
            "supported probe counts are 2 and 3, got {probes}"
        )));
    }
    let eps = vec![epsilon; probes];
    let mut h = generalized_probe_matrix(ring_size, &eps)?;
    for k in 0..=probes {
        h[(k, k)] -= epsilon / 2.0;
    }
    Ok(h)
}

fn generalized_probe_matrix(ring_size: usize, eps: &[f64]) -> Result<DMatrix<f64>> {
    if ring_size < 3 {
        return Err(Error::InvalidArgument(format!(
            "ring size must be >= 3, got {ring_size}"
        )));
    }
    let m = ring_size as f64;
    let n = eps.len();
    let mut h = DMatrix::zeros(n + 1, n + 1);
    for (i, &e) in eps.iter().enumerate() {
        h[(i, i)] = e / 2.0;
        h[(i, n)] = -e / (2.0 * m.sqrt());
        h[(n, i)] = -e / (2.0 * m.sqrt());
    }
    h[(n, n)] = eps.iter().sum::<f64>() / (2.0 * m);
    Ok(h)
}

/// Three probes with independent couplings, basis `(a, b, c, collective)`:
/// probe diagonals `ε_i/2`, collective `Σε_i/(2M)`, hoppings `−ε_i/(2√M)`.
pub fn generalized_probe_hamiltonian(eps_a: f64, eps_b: f64, eps_c: f64, ring_size: usize) -> Result<DMatrix<f64>> {
    let eps = [eps_a, eps_b, eps_c];
    if eps.iter().any(|e| !(*e >= 0.0)) {
        return Err(Error::InvalidArgument(format!("couplings must be >= 0, got {eps:?}")));
    }
    if eps.iter().all(|e| *e == 0.0) {
        return Err(Error::InvalidArgument("at least one coupling must be nonzero".into()));
    }
    generalized_probe_matrix(ring_size, &eps)
}

/// Closed-form amplitudes of the three-probe problem started on probe a.
///
/// `a` is the collective (bus) amplitude, `b` probe a, `c` and `d` the other probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeProbeCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub tau: f64,
    pub alpha: f64,
    pub cos_term: f64,
    pub sin_term: f64,
}

impl ThreeProbeCoefficients {
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// `[a, b, c, d]`
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

fn three_probe_check(ring_size: usize) -> Result<(f64, f64)> {
    if ring_size < 4 {
        return Err(Error::InvalidArgument(format!(
            "three-probe model needs M >= 4, got {ring_size}"
        )));
    }
    let m = ring_size as f64;
    Ok((m, (3.0 - m) / m))
}

/// Amplitudes at scaled time `τ = εt/2`, from the two-level reduction of the
/// symmetric probe combination:
///
/// with `α = (3−M)/M`, `κ = √(12 + Mα²)`, `C, S = cos, sin(κτ/(2√M))`:
/// `a = 2i e^{−iατ/2} S/κ`,
/// `b = 2/3 + e^{−iατ/2}/3 · [C + i(α√M/κ) S]`,
/// `c = d = −1/3 + e^{−iατ/2}/3 · [C + i(α√M/κ) S]`.
pub fn three_probe_coefficients(ring_size: usize, tau: f64) -> Result<ThreeProbeCoefficients> {
    let (m, alpha) = three_probe_check(ring_size)?;
    let kappa = (12.0 + m * alpha * alpha).sqrt();
    let arg = kappa * tau / (2.0 * m.sqrt());
    let (cs, sn) = (arg.cos(), arg.sin());
    let phase = Complex64::from_polar(1.0, -alpha * tau / 2.0);
    let a = Complex64::new(0.0, 2.0) * phase * (sn / kappa);
    let sym = phase * Complex64::new(cs, alpha * m.sqrt() / kappa * sn) / 3.0;
    let b = Complex64::new(2.0 / 3.0, 0.0) + sym;
    let c = Complex64::new(-1.0 / 3.0, 0.0) + sym;
    Ok(ThreeProbeCoefficients {
        a,
        b,
        c,
        d: c,
        tau,
        alpha,
        cos_term: cs,
        sin_term: sn,
    })
}

/// The closed form exactly as it circulates in print, kept to document its
/// defects (`a(0) = i/√(12+Mα²) ≠ 0`, norm ≠ 1).
pub fn printed_three_probe_coefficients(ring_size: usize, tau: f64) -> Result<ThreeProbeCoefficients> {
    let (m, alpha) = three_probe_check(ring_size)?;
    let root = (12.0 + m * alpha * alpha).sqrt();
    let arg = ((12.0 + alpha * alpha) / m).sqrt() * tau / 2.0;
    let (cs, sn) = (arg.cos(), arg.sin());
    let phase = Complex64::from_polar(1.0, -alpha * tau / 2.0);
    let a = Complex64::i() * phase * (cs / root);
    let sym = phase * Complex64::new(cs, sn / root) / 3.0;
    let b = Complex64::new(2.0 / 3.0, 0.0) + sym;
    let c = Complex64::new(-1.0 / 3.0, 0.0) + sym;
    Ok(ThreeProbeCoefficients {
        a,
        b,
        c,
        d: c,
        tau,
        alpha,
        cos_term: cs,
        sin_term: sn,
    })
}

/// `exp(−iHt) ψ₀` for a real symmetric `H`, via its eigendecomposition.
pub fn evolve_real_symmetric(h: &DMatrix<f64>, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    let eig = SymEigen::new(h)?;
    let n = eig.values.len();
    if psi0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi0.len(),
        });
    }
    let u = &eig.vectors;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (k, coeff) in coeffs.iter_mut().enumerate() {
        let overlap: Complex64 = (0..n).map(|i| psi0[i] * u[(i, k)]).sum();
        *coeff = overlap * Complex64::from_polar(1.0, -eig.values[k] * t);
    }
    Ok((0..n).map(|i| (0..n).map(|k| coeffs[k] * u[(i, k)]).sum()).collect())
}

/// Brute-force evolution of the effective single-excitation problem started on
/// probe a; returns `[collective, probe a, probe b, (probe c)]`.
pub fn four_level_oracle(ring_size: usize, epsilon: f64, t: f64, probes: usize) -> Result<Vec<Complex64>> {
    let h = effective_single_excitation_hamiltonian(ring_size, epsilon, probes)?;
    let mut psi0 = vec![Complex64::new(0.0, 0.0); probes + 1];
    psi0[0] = Complex64::new(1.0, 0.0);
    let psi = evolve_real_symmetric(&h, &psi0, t)?;
    let mut out = Vec::with_capacity(probes + 1);
    out.push(psi[probes]);
    out.extend_from_slice(&psi[..probes]);
    Ok(out)
}

/// Largest entry of `|A − B − sI|` minimised over the scalar shift `s`.
pub fn max_deviation_modulo_shift(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let diff = a - b;
    let shift = (0..n).map(|k| diff[(k, k)]).sum::<f64>() / n as f64;
    linalg::max_abs(&(diff - DMatrix::from_diagonal_element(n, n, shift)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn approx_hamiltonian_entries() {
        let model = approx_hamiltonian(4, 0.1).unwrap();
        let w = &model.w;
        assert_eq!(model.labels, ["c", "a", "b", "com"]);
        assert!((w[(3, 3)] - 0.025).abs() < 1e-15);
        assert!((w[(1, 3)] + 0.025).abs() < 1e-15);
        assert!((w[(1, 1)] - 0.05).abs() < 1e-15);
        for k in 0..4 {
            assert_eq!(w[(0, k)], 0.0);
            assert_eq!(w[(k, 0)], 0.0);
        }
        assert_eq!(linalg::max_asymmetry(w), 0.0);
    }

    #[test]
    fn approx_hamiltonian_vanishes_with_coupling() {
        let model = approx_hamiltonian(10, 0.0).unwrap();
        assert_eq!(linalg::max_abs(&model.w), 0.0);
        assert!(linalg::max_abs(&(model.propagator(123.0) - DMatrix::identity(8, 8))) < 1e-15);
    }

    #[test]
    fn antisymmetric_probe_mode_decouples() {
        let model = approx_hamiltonian(20, 0.03).unwrap();
        let anti = DVector::from_vec(vec![0.0, 1.0, -1.0, 0.0]) / 2f64.sqrt();
        let image = &model.w * &anti;
        // W·v = (ε/2)·v: an eigenvector with no weight on the target mode
        assert!((image - &anti * 0.015).amax() < 1e-16);
    }

    #[test]
    fn quarter_mode_nodes() {
        let even = quarter_mode_hamiltonian(16, 1.0, 0.02, 2).unwrap();
        let odd = quarter_mode_hamiltonian(16, 1.0, 0.02, 3).unwrap();
        assert!(even.w[(2, 3)].abs() > 1e-3);
        assert_eq!(odd.w[(2, 3)], 0.0);
        assert!(quarter_mode_hamiltonian(18, 1.0, 0.02, 2).is_err());
        let u = target_mode_profile(16, Regime::QuarterMode, 1).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-14);
        // the standing wave is an eigenvector of the ring potential
        let v = crate::chain::build_ring_potential(16, 1.0).unwrap();
        assert!((&v * &u - &u * 3.0).amax() < 1e-14);
    }

    #[test]
    fn scaling_estimate_examples() {
        let est = scaling_estimate(20, 1.0, 0.015, Regime::Com).unwrap();
        assert!((est.time - 2666.6666666666665).abs() < 1e-9);
        for m in [5, 20, 77] {
            let e = scaling_estimate(m, 2.5, 0.01, Regime::Com).unwrap();
            assert!((e.gap * (m * m) as f64 / (2.0 * PI * PI * 2.5) - 1.0).abs() < 1e-15);
        }
        let q = scaling_estimate(16, 1.0, 0.1, Regime::QuarterMode).unwrap();
        assert!((q.loss - (0.4 / (4.0 * PI)).powi(2)).abs() < 1e-15);
        assert!((q.loss - 1.013e-3).abs() < 1e-6);
        let com = scaling_estimate(20, 1.0, 0.015, Regime::Com).unwrap();
        let expected = (0.015 * 20f64.sqrt() / 2.0).powi(2) * (4.0 * PI * PI / 400.0).powi(-2);
        assert!((com.loss - expected).abs() < 1e-12 * expected);
        assert!(scaling_estimate(18, 1.0, 0.1, Regime::QuarterMode).is_err());
        assert!(scaling_estimate(18, 1.0, 0.0, Regime::Com).is_err());
    }

    #[test]
    fn single_excitation_matrices() {
        let h3 = effective_single_excitation_hamiltonian(4, 0.2, 3).unwrap();
        assert!((h3[(3, 3)] - (0.2 * 3.0 / 8.0 - 0.1)).abs() < 1e-15);
        assert_eq!(h3[(0, 0)], 0.0);
        assert!((h3[(0, 3)] + 0.05).abs() < 1e-15);
        assert_eq!(linalg::max_asymmetry(&h3), 0.0);
        let big = effective_single_excitation_hamiltonian(1_000_000, 0.2, 2).unwrap();
        assert!((big[(2, 2)] + 0.1).abs() < 1e-6);
        assert!(big[(0, 2)].abs() < 1e-3);
        assert!(effective_single_excitation_hamiltonian(10, 0.1, 4).is_err());
    }

    #[test]
    fn generalized_reduces_to_equal_couplings() {
        let g = generalized_probe_hamiltonian(0.03, 0.03, 0.03, 70).unwrap();
        let e = effective_single_excitation_hamiltonian(70, 0.03, 3).unwrap();
        let shifted = &e + DMatrix::from_diagonal_element(4, 4, 0.015);
        assert!(linalg::max_abs(&(g - shifted)) < 1e-17);
        assert!(generalized_probe_hamiltonian(0.0, 0.0, 0.0, 10).is_err());
        assert!(generalized_probe_hamiltonian(-0.1, 0.0, 0.1, 10).is_err());
    }

    #[test]
    fn generalized_two_level_block() {
        let g = generalized_probe_hamiltonian(0.05, 0.0, 0.0, 16).unwrap();
        for i in [1, 2] {
            for j in 0..4 {
                assert_eq!(g[(i, j)], 0.0);
            }
        }
        let rabi = four_level_rabi(&g, 0.05, 16);
        assert!(rabi < 1e-12);
    }

    /// Two-level Rabi formula for a↔collective vs brute-force evolution.
    fn four_level_rabi(g: &DMatrix<f64>, eps: f64, m: usize) -> f64 {
        let mut psi0 = vec![Complex64::new(0.0, 0.0); 4];
        psi0[0] = Complex64::new(1.0, 0.0);
        let hop = g[(0, 3)];
        let detune = g[(0, 0)] - g[(3, 3)];
        let omega = (detune * detune / 4.0 + hop * hop).sqrt();
        let _ = (eps, m);
        let mut worst = 0.0_f64;
        for k in 0..50 {
            let t = k as f64 * 37.0;
            let psi = evolve_real_symmetric(g, &psi0, t).unwrap();
            let p_coll = hop * hop / (omega * omega) * (omega * t).sin().powi(2);
            worst = worst.max((psi[3].norm_sqr() - p_coll).abs());
        }
        worst
    }

    #[test]
    fn coefficients_at_time_zero() {
        let c = three_probe_coefficients(70, 0.0).unwrap();
        assert_eq!(c.a, Complex64::new(0.0, 0.0));
        assert!((c.b - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.c.norm() < 1e-15 && c.d.norm() < 1e-15);
    }

    #[test]
    fn printed_form_is_defective() {
        for m in [10, 70, 200] {
            let printed = printed_three_probe_coefficients(m, 0.0).unwrap();
            let alpha = (3.0 - m as f64) / m as f64;
            let expected = 1.0 / (12.0 + m as f64 * alpha * alpha).sqrt();
            assert!((printed.a.im - expected).abs() < 1e-15);
            assert!(printed.a.norm() > 0.05);
            assert!((printed.norm_sqr() - 1.0).abs() > 1e-3);
        }
    }

    #[test]
    fn coefficients_match_oracle() {
        for m in [10usize, 70, 200] {
            let eps = 0.021;
            let mut worst = 0.0_f64;
            for k in 0..=500 {
                let tau = 50.0 * k as f64 / 500.0;
                let closed = three_probe_coefficients(m, tau).unwrap().as_array();
                let oracle = four_level_oracle(m, eps, 2.0 * tau / eps, 3).unwrap();
                for (x, y) in closed.iter().zip(&oracle) {
                    worst = worst.max((x - y).norm());
                }
            }
            assert!(worst < 1e-8, "M={m}: {worst}");
        }
    }

    #[test]
    fn oracle_basics() {
        let psi = four_level_oracle(70, 0.021, 0.0, 3).unwrap();
        assert!((psi[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(psi[0].norm() < 1e-14);
        for k in 0..100 {
            let psi = four_level_oracle(70, 0.021, 97.3 * k as f64, 3).unwrap();
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert_eq!(four_level_oracle(20, 0.01, 5.0, 2).unwrap().len(), 3);
    }

    #[test]
    fn quadratic_and_single_excitation_models_agree() {
        // the quadratic model's single-excitation sector is governed by W itself
        let m = 20;
        let eps = 0.021;
        let model = approx_hamiltonian(m, eps).unwrap();
        let block = model.single_excitation_block();
        let se = effective_single_excitation_hamiltonian(m, eps, 2).unwrap();
        assert!(max_deviation_modulo_shift(&block, &se) < 1e-17);
        let mut psi0 = vec![Complex64::new(0.0, 0.0); 3];
        psi0[0] = Complex64::new(1.0, 0.0);
        for k in 0..40 {
            let t = 50.0 * k as f64;
            let p1 = evolve_real_symmetric(&block, &psi0, t).unwrap();
            let p2 = evolve_real_symmetric(&se, &psi0, t).unwrap();
            for (x, y) in p1.iter().zip(&p2) {
                assert!((x.norm_sqr() - y.norm_sqr()).abs() < 1e-9);
            }
            // the quadratic propagator moves a coherent amplitude the same way
            let s = model.propagator(t);
            let x_b = s[(2, 1)];
            let p_b = s[(2 + 4, 1)];
            let amp_sqr = x_b * x_b + p_b * p_b;
            assert!((amp_sqr - p1[1].norm_sqr()).abs() < 1e-9);
        }
    }

    #[test]
    fn scaling_monotone_in_ring_size() {
        let mut prev = scaling_estimate(8, 1.0, 0.01, Regime::Com).unwrap();
        for m in (12..200).step_by(4) {
            let e = scaling_estimate(m, 1.0, 0.01, Regime::Com).unwrap();
            assert!(e.time > prev.time && e.loss > prev.loss);
            prev = e;
        }
    }

    proptest! {
        #[test]
        fn coefficient_norm_and_symmetry(m in 4usize..400, tau in 0.0f64..500.0) {
            let c = three_probe_coefficients(m, tau).unwrap();
            prop_assert!((c.norm_sqr() - 1.0).abs() < 1e-8);
            prop_assert_eq!(c.c, c.d);
        }

        #[test]
        fn effective_propagator_is_symplectic(m in 3usize..100, eps in 0.0f64..0.2, t in 0.0f64..1e4) {
            let model = approx_hamiltonian(m, eps).unwrap();
            let s = model.propagator(t);
            let j = linalg::symplectic_form(4);
            prop_assert!(linalg::max_abs(&(s.transpose() * &j * &s - j)) < 1e-12);
        }
    }
}
