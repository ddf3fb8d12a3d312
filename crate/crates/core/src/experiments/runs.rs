// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::config::{swap_time, ExperimentConfig, ExperimentKind};
use super::result::{ExperimentResult, Table};
use super::sampling::{sample_rows, PEAK_TOL};
use crate::analysis;
use crate::chain::{quarter_mode_detuning, ChainSpec, Disorder, Probe};
use crate::effective::{coupling_bound, scaling_estimate, target_mode_hamiltonian, EffectiveQuadraticModel, Regime};
use crate::error::{Error, Result};
use crate::gaussian::{log_negativity, two_mode_squeezed_with_labels, Bipartition, ChainDynamics, CovarianceState};
use crate::single_excitation::{
    phase_optimized_overlap, rwa_hopping_matrix, w_overlap, AmplitudeEvolver, AmplitudeState, Derivation,
    HoppingMatrix, WTarget,
};

/// Entanglement transfer from probe a to probe b, with the squeezed partner
/// being the decoupled spectator.
///
/// The first declared probe is the sender, the second the receiver.
#[derive(Debug, Clone)]
pub struct TransferProblem {
    dynamics: ChainDynamics,
    state: CovarianceState,
    sender: usize,
    receiver: usize,
    spectator: usize,
    initial: f64,
}

impl TransferProblem {
    pub fn new(spec: &ChainSpec, squeezing: f64) -> Result<Self> {
        if spec.probes.len() != 2 {
            return Err(Error::Config(format!(
                "transfer needs exactly two probes, got {}",
                spec.probes.len()
            )));
        }
        if !spec.include_decoupled_c {
            return Err(Error::Config(
                "transfer needs the decoupled spectator (include_decoupled_c)".into(),
            ));
        }
        if spec.probes[0].site == spec.probes[1].site {
            return Err(Error::Config("receiver must not share the sender's site".into()));
        }
        let h = spec.build()?;
        let m = spec.ring_size;
        let (sender, receiver, spectator) = (m, m + 1, m + 2);
        let state = two_mode_squeezed_with_labels(squeezing, sender, spectator, h.labels().to_vec())?;
        let dynamics = ChainDynamics::new(&h)?;
        let mut problem = Self {
            dynamics,
            state,
            sender,
            receiver,
            spectator,
            initial: 1.0,
        };
        problem.initial = problem.entanglement(sender, 0.0)?;
        Ok(problem)
    }

    /// `E_N(probe : spectator)` at time `t`.
    pub fn entanglement(&self, probe: usize, t: f64) -> Result<f64> {
        let reduced = self.dynamics.evolve_reduced(&self.state, &[probe, self.spectator], t)?;
        log_negativity(&reduced, &Bipartition::new(vec![0], vec![1]))
    }

    pub fn initial_entanglement(&self) -> f64 {
        self.initial
    }

    pub fn sender_entanglement(&self, t: f64) -> Result<f64> {
        self.entanglement(self.sender, t)
    }

    pub fn receiver_entanglement(&self, t: f64) -> Result<f64> {
        self.entanglement(self.receiver, t)
    }

    /// Received over initial entanglement.
    pub fn efficiency(&self, t: f64) -> Result<f64> {
        Ok(self.receiver_entanglement(t)? / self.initial)
    }

    pub fn dynamics(&self) -> &ChainDynamics {
        &self.dynamics
    }

    pub fn initial_state(&self) -> &CovarianceState {
        &self.state
    }
}

fn grid_of(cfg: &ExperimentConfig) -> Vec<f64> {
    let g = cfg.grid();
    analysis::uniform_grid(g.t_max, g.samples())
}

fn squeezing(cfg: &ExperimentConfig) -> f64 {
    cfg.squeezing.unwrap_or(1.0)
}

fn warn_if_at_edge(result: &mut ExperimentResult, name: &str, t: f64, t_max: f64) {
    if t >= t_max {
        result.warnings.push(format!(
            "{name}: maximum sits at the end of the window (t = {t}); extend time.t_max"
        ));
    }
}

/// Gaussian entanglement transfer through the chain.
pub fn run_transfer(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let spec = cfg.chain();
    let problem = TransferProblem::new(spec, squeezing(cfg))?;
    let e0 = problem.initial_entanglement();
    let grid = grid_of(cfg);
    let sampled = sample_rows(
        &grid,
        3,
        |t| {
            let ea = problem.sender_entanglement(t)?;
            let eb = problem.receiver_entanglement(t)?;
            Ok(vec![ea, eb, eb / e0])
        },
        &[2],
    )?;
    let (peak_t, peak_eff) = sampled.peaks[0];

    let mut result = ExperimentResult::new(ExperimentKind::Transfer, cfg.clone());
    result.tables.push(Table::new(
        "entanglement",
        vec![
            ("t", sampled.times.clone()),
            ("en_sender", sampled.columns[0].clone()),
            ("en_receiver", sampled.columns[1].clone()),
            ("efficiency", sampled.columns[2].clone()),
        ],
    )?);
    result.set("initial_entanglement", e0);
    result.set("peak_efficiency", peak_eff);
    result.set("peak_time", peak_t);
    result.set("swap_time_estimate", swap_time(spec.ring_size, spec.probes[1].epsilon));
    warn_if_at_edge(&mut result, "efficiency", peak_t, cfg.grid().t_max);
    Ok(result)
}

fn detect_regime(spec: &ChainSpec) -> Result<Regime> {
    let quarter = quarter_mode_detuning(spec.coupling);
    if spec.probes.iter().all(|p| p.detuning == 0.0) {
        Ok(Regime::Com)
    } else if spec.probes.iter().all(|p| p.detuning == quarter) && spec.ring_size.is_multiple_of(4) {
        Ok(Regime::QuarterMode)
    } else {
        Err(Error::Config(
            "effective model needs all probes undetuned or all detuned by 2c on a ring with M divisible by 4".into(),
        ))
    }
}

struct EffectiveTransfer {
    model: EffectiveQuadraticModel,
    state: CovarianceState,
    initial: f64,
}

impl EffectiveTransfer {
    fn new(model: EffectiveQuadraticModel, r: f64) -> Result<Self> {
        let state = two_mode_squeezed_with_labels(r, 1, 0, model.labels.clone())?;
        let mut out = Self {
            model,
            state,
            initial: 1.0,
        };
        out.initial = out.entanglement(1, 0.0)?;
        Ok(out)
    }

    fn entanglement(&self, probe: usize, t: f64) -> Result<f64> {
        let n = self.model.mode_count();
        let s = self.model.propagator(t);
        let idx = [probe, 0, probe + n, n];
        let sel = DMatrix::from_fn(4, 2 * n, |i, j| s[(idx[i], j)]);
        let gamma = crate::linalg::symmetrize(&(&sel * self.state.gamma() * sel.transpose()));
        let reduced = CovarianceState::new(vec!["b".into(), "c".into()], gamma)?;
        log_negativity(&reduced, &Bipartition::new(vec![0], vec![1]))
    }

    fn efficiency(&self, t: f64) -> Result<f64> {
        Ok(self.entanglement(2, t)? / self.initial)
    }
}

/// Exact chain against the first-order effective model, in both the Gaussian
/// and the single-excitation picture.
pub fn run_compare_approx(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let spec = cfg.chain();
    let r = squeezing(cfg);
    let exact = TransferProblem::new(spec, r)?;
    let regime = detect_regime(spec)?;
    let probes: Vec<(usize, f64)> = spec.probes.iter().map(|p| (p.site, p.epsilon)).collect();
    let model = target_mode_hamiltonian(spec.ring_size, spec.coupling, &probes, regime)?;
    let approx = EffectiveTransfer::new(model.clone(), r)?;

    let h = rwa_hopping_matrix(&spec.build()?);
    let exact_evolver = AmplitudeEvolver::new(&h)?;
    let sender = &spec.probes[0].label;
    let exact_coeffs = exact_evolver.project(&AmplitudeState::basis(h.labels.clone(), sender)?)?;
    let receiver_row = h.index_of(&spec.probes[1].label)?;

    let block = HoppingMatrix {
        labels: model.labels[1..].to_vec(),
        h: model.single_excitation_block(),
        derivation: Derivation::RwaFromQuadratic,
    };
    let approx_evolver = AmplitudeEvolver::new(&block)?;
    let approx_coeffs = approx_evolver.project(&AmplitudeState::basis(block.labels.clone(), "a")?)?;

    let grid = grid_of(cfg);
    let sampled = sample_rows(
        &grid,
        4,
        |t| {
            let pe = exact_evolver.amplitudes_at(&exact_coeffs, &[receiver_row], t)[0].norm_sqr();
            let pa = approx_evolver.amplitudes_at(&approx_coeffs, &[1], t)[0].norm_sqr();
            Ok(vec![exact.efficiency(t)?, approx.efficiency(t)?, pe, pa])
        },
        &[0, 1, 2, 3],
    )?;

    let mut result = ExperimentResult::new(ExperimentKind::CompareApprox, cfg.clone());
    result.tables.push(Table::new(
        "comparison",
        vec![
            ("t", sampled.times.clone()),
            ("exact_efficiency", sampled.columns[0].clone()),
            ("approx_efficiency", sampled.columns[1].clone()),
            ("exact_population_receiver", sampled.columns[2].clone()),
            ("approx_population_receiver", sampled.columns[3].clone()),
        ],
    )?);
    let names = [
        "exact_efficiency",
        "approx_efficiency",
        "exact_population",
        "approx_population",
    ];
    for (name, (t, v)) in names.iter().zip(&sampled.peaks) {
        result.set(&format!("{name}_peak"), v);
        result.set(&format!("{name}_peak_time"), t);
        warn_if_at_edge(&mut result, name, *t, cfg.grid().t_max);
    }
    let [(te, ve), (ta, va), (tpe, vpe), (tpa, vpa)] = [0, 1, 2, 3].map(|k| sampled.peaks[k]);
    result.set("regime", regime.as_str());
    result.set("efficiency_peak_time_mismatch", (te - ta).abs() / te);
    result.set("efficiency_peak_height_mismatch", (ve - va).abs());
    result.set("population_peak_time_mismatch", (tpe - tpa).abs() / tpe);
    result.set("population_peak_height_mismatch", (vpe - vpa).abs());
    Ok(result)
}

/// Single-excitation evolution with three probes and the W-state overlap.
pub fn run_wstate(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let spec = cfg.chain();
    if spec.probes.len() != 3 {
        return Err(Error::Config(format!(
            "wstate needs exactly three probes, got {}",
            spec.probes.len()
        )));
    }
    let w = cfg.w_target.expect("resolved");
    let target = WTarget::real(w[0], w[1], w[2]).map_err(|e| Error::Config(e.to_string()))?;
    let eps_ref = spec.probes[0].epsilon;
    if !(eps_ref > 0.0) {
        return Err(Error::Config("the first probe must have a positive coupling".into()));
    }
    let m = spec.ring_size;
    let h = rwa_hopping_matrix(&spec.build()?);
    let evolver = AmplitudeEvolver::new(&h)?;
    let psi0 = AmplitudeState::basis(h.labels.clone(), &spec.probes[0].label)?;
    let coeffs = evolver.project(&psi0)?;
    let all_rows: Vec<usize> = (0..h.dim()).collect();
    let probe_rows = [m, m + 1, m + 2];

    let eps: Vec<f64> = spec.probes.iter().map(|p| p.epsilon).collect();
    let eff = HoppingMatrix {
        labels: vec!["a".into(), "b".into(), "c".into(), "com".into()],
        h: crate::effective::generalized_probe_hamiltonian(eps[0], eps[1], eps[2], m)?,
        derivation: Derivation::RwaFromQuadratic,
    };
    let eff_evolver = AmplitudeEvolver::new(&eff)?;
    let eff_coeffs = eff_evolver.project(&AmplitudeState::basis(eff.labels.clone(), "a")?)?;

    let labels = h.labels.clone();
    let grid = grid_of(cfg);
    let sampled = sample_rows(
        &grid,
        14,
        |tau| {
            let t = 2.0 * tau / eps_ref;
            let psi = AmplitudeState {
                labels: labels.clone(),
                psi: evolver.amplitudes_at(&coeffs, &all_rows, t),
            };
            let pops: Vec<f64> = psi.psi.iter().map(Complex64::norm_sqr).collect();
            let bus: f64 = pops[..m].iter().sum();
            let total: f64 = pops.iter().sum();
            let raw = w_overlap(&psi, probe_rows, &target)?;
            let opt = phase_optimized_overlap(&psi, probe_rows, &target)?;

            let e = eff_evolver.amplitudes_at(&eff_coeffs, &[0, 1, 2, 3], t);
            let eff_psi = AmplitudeState {
                labels: eff.labels.clone(),
                psi: e.clone(),
            };
            let eff_raw = w_overlap(&eff_psi, [0, 1, 2], &target)?;
            Ok(vec![
                t,
                raw,
                opt,
                raw * raw,
                bus,
                pops[m],
                pops[m + 1],
                pops[m + 2],
                total,
                eff_raw,
                e[3].norm_sqr(),
                e[0].norm_sqr(),
                e[1].norm_sqr(),
                e[2].norm_sqr(),
            ])
        },
        &[1, 2, 9],
    )?;
    let col = |k: usize| sampled.columns[k].clone();

    let mut result = ExperimentResult::new(ExperimentKind::Wstate, cfg.clone());
    result.tables.push(Table::new(
        "populations",
        vec![
            ("tau", sampled.times.clone()),
            ("t", col(0)),
            ("overlap", col(1)),
            ("phase_optimized_overlap", col(2)),
            ("fidelity", col(3)),
            ("population_bus", col(4)),
            ("population_a", col(5)),
            ("population_b", col(6)),
            ("population_c", col(7)),
            ("population_total", col(8)),
            ("effective_overlap", col(9)),
            ("effective_population_bus", col(10)),
            ("effective_population_a", col(11)),
            ("effective_population_b", col(12)),
            ("effective_population_c", col(13)),
        ],
    )?);
    let (peak_tau, peak) = sampled.peaks[0];
    let peak_row = sampled.times.iter().position(|&t| t == peak_tau).expect("merged");
    let max_abs_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let norm_defect = sampled.columns[8].iter().map(|p| (p - 1.0).abs()).fold(0.0, f64::max);
    let tracking = (0..4)
        .map(|k| max_abs_diff(&sampled.columns[4 + k], &sampled.columns[10 + k]))
        .fold(0.0, f64::max);

    result.set("peak_overlap", peak);
    result.set("peak_tau", peak_tau);
    result.set("peak_fidelity", sampled.columns[3][peak_row]);
    result.set("bus_population_at_peak", sampled.columns[4][peak_row]);
    result.set("peak_phase_optimized_overlap", sampled.peaks[1].1);
    result.set("peak_phase_optimized_tau", sampled.peaks[1].0);
    result.set("effective_peak_overlap", sampled.peaks[2].1);
    result.set("effective_peak_tau", sampled.peaks[2].0);
    result.set(
        "max_population_asymmetry",
        max_abs_diff(&sampled.columns[6], &sampled.columns[7]),
    );
    result.set("max_norm_defect", norm_defect);
    result.set("max_effective_population_deviation", tracking);
    warn_if_at_edge(&mut result, "overlap", peak_tau, cfg.grid().t_max);
    Ok(result)
}

fn antipodal_spec(m: usize, c: f64, eps: f64, separation: usize, detuning: f64) -> ChainSpec {
    ChainSpec::ring(m, c)
        .with_probe(Probe::new("a", 1, eps).detuned(detuning))
        .with_probe(Probe::new("b", 1 + separation % m, eps).detuned(detuning))
        .with_spectator()
}

struct ScalingRow {
    ring_size: usize,
    epsilon: f64,
    crossing: Option<f64>,
    peak_time: f64,
    peak_efficiency: f64,
    estimate_time: f64,
    estimate_loss: f64,
}

/// Transfer time to a fixed efficiency versus ring size, with a power-law fit.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let sweep = cfg.sweep();
    let regime = sweep.regime.expect("resolved");
    let c = sweep.coupling.expect("resolved");
    let fraction = sweep.epsilon_fraction.expect("resolved");
    let threshold = sweep.threshold.expect("resolved");
    let window = sweep.window.expect("resolved");
    let samples = sweep.samples.expect("resolved");
    let mut sizes = sweep.ring_sizes.clone().expect("resolved");
    sizes.sort_unstable();
    sizes.dedup();
    let r = squeezing(cfg);
    let detuning = match regime {
        Regime::Com => 0.0,
        Regime::QuarterMode => quarter_mode_detuning(c),
    };

    let rows: Vec<ScalingRow> = sizes
        .par_iter()
        .map(|&m| -> Result<ScalingRow> {
            let eps = fraction * coupling_bound(m, c, regime);
            let problem = TransferProblem::new(&antipodal_spec(m, c, eps, m / 2, detuning), r)?;
            let grid = analysis::uniform_grid(window * swap_time(m, eps), samples);
            let values: Vec<f64> = grid.par_iter().map(|&t| problem.efficiency(t)).collect::<Result<_>>()?;
            let crossing = analysis::first_crossing(&grid, &values, |t| problem.efficiency(t), threshold, PEAK_TOL)?;
            let (peak_time, peak_efficiency) =
                analysis::refine_grid_peak(&grid, &values, |t| problem.efficiency(t), PEAK_TOL)?;
            let est = scaling_estimate(m, c, eps, regime)?;
            Ok(ScalingRow {
                ring_size: m,
                epsilon: eps,
                crossing,
                peak_time,
                peak_efficiency,
                estimate_time: est.time,
                estimate_loss: est.loss,
            })
        })
        .collect::<Result<_>>()?;

    let mut result = ExperimentResult::new(ExperimentKind::Scaling, cfg.clone());
    let reached: Vec<&ScalingRow> = rows.iter().filter(|r| r.crossing.is_some()).collect();
    for row in rows.iter().filter(|r| r.crossing.is_none()) {
        result.warnings.push(format!(
            "M = {}: efficiency never reached {threshold} (peak {:.4}); excluded from the fit",
            row.ring_size, row.peak_efficiency
        ));
    }
    result.tables.push(Table::new(
        "sweep",
        vec![
            ("ring_size", rows.iter().map(|r| r.ring_size as f64).collect()),
            ("epsilon", rows.iter().map(|r| r.epsilon).collect()),
            (
                "crossing_time",
                rows.iter().map(|r| r.crossing.unwrap_or(f64::NAN)).collect(),
            ),
            (
                "reached",
                rows.iter().map(|r| f64::from(u8::from(r.crossing.is_some()))).collect(),
            ),
            ("peak_efficiency", rows.iter().map(|r| r.peak_efficiency).collect()),
            ("peak_time", rows.iter().map(|r| r.peak_time).collect()),
            ("estimate_time", rows.iter().map(|r| r.estimate_time).collect()),
            ("estimate_loss", rows.iter().map(|r| r.estimate_loss).collect()),
        ],
    )?);
    result.set("regime", regime.as_str());
    result.set("threshold", threshold);
    result.set("points_used", reached.len());
    if reached.len() >= 3 {
        let xs: Vec<f64> = reached.iter().map(|r| r.ring_size as f64).collect();
        let ys: Vec<f64> = reached.iter().map(|r| r.crossing.expect("filtered")).collect();
        let fit = analysis::power_law_fit(&xs, &ys)?;
        result.set("exponent", fit.exponent);
        result.set("prefactor", fit.prefactor);
        result.set("r_squared", fit.r_squared);
    } else {
        result.set("exponent", serde_json::Value::Null);
        result.warnings.push(format!(
            "only {} ring sizes reached the threshold; no fit",
            reached.len()
        ));
    }
    Ok(result)
}

fn peak_efficiency(problem: &TransferProblem, grid: &[f64]) -> Result<(f64, f64)> {
    let values: Vec<f64> = grid.par_iter().map(|&t| problem.efficiency(t)).collect::<Result<_>>()?;
    analysis::refine_grid_peak(grid, &values, |t| problem.efficiency(t), PEAK_TOL)
}

/// Transfer efficiency over seeded bond disorder.
pub fn run_disorder(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let base = cfg.chain().clone();
    let sweep = cfg.sweep();
    let spreads = sweep.spreads.clone().expect("resolved");
    let seed_count = sweep.seed_count.expect("resolved");
    let seed0 = cfg.seed.unwrap_or(0);
    let r = squeezing(cfg);
    let grid = grid_of(cfg);

    let mut ordered_spec = base.clone();
    ordered_spec.disorder = None;
    let (_, ordered) = peak_efficiency(&TransferProblem::new(&ordered_spec, r)?, &grid)?;

    let jobs: Vec<(usize, u64)> = (0..spreads.len())
        .flat_map(|i| (0..seed_count as u64).map(move |k| (i, seed0.wrapping_add(k))))
        .collect();
    let runs: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let mut spec = base.clone();
            spec.disorder = Some(Disorder::bond(spreads[i], seed));
            peak_efficiency(&TransferProblem::new(&spec, r)?, &grid)
        })
        .collect::<Result<_>>()?;

    let mut result = ExperimentResult::new(ExperimentKind::Disorder, cfg.clone());
    result.tables.push(Table::new(
        "runs",
        vec![
            ("spread", jobs.iter().map(|j| spreads[j.0]).collect()),
            ("seed", jobs.iter().map(|j| j.1 as f64).collect()),
            ("efficiency", runs.iter().map(|r| r.1).collect()),
            ("peak_time", runs.iter().map(|r| r.0).collect()),
        ],
    )?);

    let mut medians = Vec::new();
    let mut mins = Vec::new();
    let mut maxs = Vec::new();
    for i in 0..spreads.len() {
        let effs: Vec<f64> = jobs
            .iter()
            .zip(&runs)
            .filter(|(j, _)| j.0 == i)
            .map(|(_, r)| r.1)
            .collect();
        medians.push(analysis::median(&effs).expect("seed_count > 0"));
        mins.push(effs.iter().cloned().fold(f64::INFINITY, f64::min));
        maxs.push(effs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    }
    result.tables.push(Table::new(
        "by_spread",
        vec![
            ("spread", spreads.clone()),
            ("median", medians.clone()),
            ("min", mins),
            ("max", maxs),
        ],
    )?);
    let mut by_spread: Vec<(f64, f64)> = spreads.iter().copied().zip(medians.iter().copied()).collect();
    by_spread.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nonincreasing = by_spread.windows(2).all(|w| w[1].1 <= w[0].1);
    let zero_exact = jobs
        .iter()
        .zip(&runs)
        .filter(|(j, _)| spreads[j.0] == 0.0)
        .all(|(_, r)| r.1 == ordered);
    result.set("ordered_efficiency", ordered);
    result.set("medians", json!(medians));
    result.set("median_nonincreasing_in_spread", nonincreasing);
    result.set("zero_spread_matches_ordered", zero_exact);
    if !nonincreasing {
        result
            .warnings
            .push("median efficiency is not monotonically non-increasing in spread".to_string());
    }
    Ok(result)
}

/// Quarter-mode transfer at even and odd probe separation, plus an undetuned control.
pub fn run_node_parity(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let chain = cfg.chain();
    let m = chain.ring_size;
    if !m.is_multiple_of(4) {
        return Err(Error::Config(format!("node-parity needs M divisible by 4, got {m}")));
    }
    let d = cfg.separation.expect("resolved");
    if !d.is_multiple_of(2) || d == 0 || d + 1 >= m {
        return Err(Error::Config(format!(
            "separation must be even, positive and below M - 1, got {d}"
        )));
    }
    let eps = chain
        .probes
        .first()
        .map(|p| p.epsilon)
        .ok_or_else(|| Error::Config("node-parity reads ε from the first probe".into()))?;
    let c = chain.coupling;
    let delta = quarter_mode_detuning(c);
    let r = squeezing(cfg);
    let cases = [(d, delta), (d + 1, delta), (d + 1, 0.0)];
    let problems: Vec<TransferProblem> = cases
        .iter()
        .map(|&(sep, det)| TransferProblem::new(&antipodal_spec(m, c, eps, sep, det), r))
        .collect::<Result<_>>()?;

    let grid = grid_of(cfg);
    let sampled = sample_rows(
        &grid,
        3,
        |t| problems.iter().map(|p| p.efficiency(t)).collect(),
        &[0, 1, 2],
    )?;

    let mut result = ExperimentResult::new(ExperimentKind::NodeParity, cfg.clone());
    result.tables.push(Table::new(
        "efficiency",
        vec![
            ("t", sampled.times.clone()),
            ("even_separation", sampled.columns[0].clone()),
            ("odd_separation", sampled.columns[1].clone()),
            ("undetuned_odd_separation", sampled.columns[2].clone()),
        ],
    )?);
    result.tables.push(Table::new(
        "cases",
        vec![
            ("separation", cases.iter().map(|c| c.0 as f64).collect()),
            ("detuning", cases.iter().map(|c| c.1).collect()),
            ("peak_efficiency", sampled.peaks.iter().map(|p| p.1).collect()),
            ("peak_time", sampled.peaks.iter().map(|p| p.0).collect()),
        ],
    )?);
    result.set("even_separation", d);
    result.set("odd_separation", d + 1);
    result.set("even_efficiency", sampled.peaks[0].1);
    result.set("odd_efficiency", sampled.peaks[1].1);
    result.set("control_efficiency", sampled.peaks[2].1);
    result.set("even_peak_time", sampled.peaks[0].0);
    result.set("swap_time_estimate", PI * m as f64 / eps);
    warn_if_at_edge(&mut result, "even_separation", sampled.peaks[0].0, cfg.grid().t_max);
    Ok(result)
}
