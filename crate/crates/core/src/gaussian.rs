// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Zero-mean Gaussian states, exact symplectic evolution and logarithmic negativity.
//!
//! Covariances use the ordering `(x_1..x_N, p_1..p_N)` and the convention
//! that the vacuum is the identity, so physicality reads `Γ + iJ ⪰ 0` and a
//! pure state has all symplectic eigenvalues equal to one.

use nalgebra::DMatrix;

use crate::chain::QuadraticHamiltonian;
use crate::error::{Error, Result};
use crate::linalg::{self, SymEigen};

/// Tolerance for the symmetry check on covariance matrices.
pub const COVARIANCE_SYMMETRY_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of `Γ + iJ`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Symplectic eigenvalues above `1 - SYMPLECTIC_CLIP` contribute nothing to E_N.
pub const SYMPLECTIC_CLIP: f64 = 1e-12;

/// Covariance matrix of a zero-mean Gaussian state over labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    labels: Vec<String>,
    gamma: DMatrix<f64>,
}

impl CovarianceState {
    pub fn new(labels: Vec<String>, gamma: DMatrix<f64>) -> Result<Self> {
        let dim = linalg::ensure_square(&gamma)?;
        if dim != 2 * labels.len() {
            return Err(Error::DimensionMismatch {
                expected: 2 * labels.len(),
                got: dim,
            });
        }
        let asym = linalg::max_asymmetry(&gamma);
        if asym > COVARIANCE_SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { labels, gamma })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
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

    /// Smallest eigenvalue of `Γ + iJ`; non-negative for physical states.
    pub fn physicality_margin(&self) -> Result<f64> {
        let j = linalg::symplectic_form(self.mode_count());
        linalg::min_eigenvalue_hermitian(&self.gamma, &j)
    }

    pub fn is_physical(&self) -> Result<bool> {
        Ok(self.physicality_margin()? >= -PHYSICALITY_TOL)
    }

    /// `Π_j 1/ν_j = 1/√det Γ`; one for pure states.
    pub fn purity(&self) -> Result<f64> {
        Ok(symplectic_eigenvalues(&self.gamma)?.iter().map(|nu| 1.0 / nu).product())
    }

    /// Principal submatrix on the given mode indices (Gaussian partial trace).
    pub fn reduce_indices(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("reduce needs at least one mode".into()));
        }
        let n = self.mode_count();
        for &k in keep {
            if k >= n {
                return Err(Error::InvalidArgument(format!(
                    "mode index {k} out of range for {n} modes"
                )));
            }
        }
        let rows = quadrature_indices(keep, n);
        let gamma = DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.gamma[(rows[i], rows[j])]);
        let labels = keep.iter().map(|&k| self.labels[k].clone()).collect();
        Ok(Self { labels, gamma })
    }
}

/// Row indices of the x and p quadratures of `modes` in a covariance over `n` modes.
fn quadrature_indices(modes: &[usize], n: usize) -> Vec<usize> {
    modes.iter().copied().chain(modes.iter().map(|&k| k + n)).collect()
}

fn numbered_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| k.to_string()).collect()
}

/// Vacuum over `n` modes labeled `1..n`.
pub fn vacuum_state(n: usize) -> Result<CovarianceState> {
    if n == 0 {
        return Err(Error::InvalidArgument("vacuum needs at least one mode".into()));
    }
    vacuum_with_labels(numbered_labels(n))
}

/// Vacuum over the given labels.
pub fn vacuum_with_labels(labels: Vec<String>) -> Result<CovarianceState> {
    let n = labels.len();
    CovarianceState::new(labels, DMatrix::identity(2 * n, 2 * n))
}

/// Two-mode squeezed vacuum on modes `i`, `j` (0-based), vacuum elsewhere.
pub fn two_mode_squeezed(r: f64, i: usize, j: usize, n: usize) -> Result<CovarianceState> {
    two_mode_squeezed_with_labels(r, i, j, numbered_labels(n))
}

pub fn two_mode_squeezed_with_labels(r: f64, i: usize, j: usize, labels: Vec<String>) -> Result<CovarianceState> {
    let n = labels.len();
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("squeezing must be >= 0, got {r}")));
    }
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "squeezed pair ({i}, {j}) invalid for {n} modes"
        )));
    }
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut gamma = DMatrix::identity(2 * n, 2 * n);
    gamma[(i, i)] = ch;
    gamma[(j, j)] = ch;
    gamma[(i, j)] = -sh;
    gamma[(j, i)] = -sh;
    gamma[(n + i, n + i)] = ch;
    gamma[(n + j, n + j)] = ch;
    gamma[(n + i, n + j)] = sh;
    gamma[(n + j, n + i)] = sh;
    CovarianceState::new(labels, gamma)
}

/// Symplectic matrix `S(t)` acting on `(x, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPropagator {
    pub s: DMatrix<f64>,
    pub t: f64,
}

impl SymplecticPropagator {
    /// `‖SᵀJS − J‖∞`
    pub fn symplectic_defect(&self) -> f64 {
        let j = linalg::symplectic_form(self.s.nrows() / 2);
        linalg::max_abs(&(self.s.transpose() * &j * &self.s - j))
    }
}

/// Cached spectral data of a potential, for evaluating `S(t)` at many times.
#[derive(Debug, Clone)]
pub struct ChainDynamics {
    labels: Vec<String>,
    vectors: DMatrix<f64>,
    omega: Vec<f64>,
}

impl ChainDynamics {
    pub fn new(h: &QuadraticHamiltonian) -> Result<Self> {
        Self::from_potential(h.labels().to_vec(), h.potential())
    }

    pub fn from_potential(labels: Vec<String>, v: &DMatrix<f64>) -> Result<Self> {
        let eig = SymEigen::new(v)?;
        if labels.len() != eig.values.len() {
            return Err(Error::DimensionMismatch {
                expected: eig.values.len(),
                got: labels.len(),
            });
        }
        let min = eig.min_value();
        if !(min > 0.0) {
            return Err(Error::NotPositiveDefinite(min));
        }
        Ok(Self {
            labels,
            omega: eig.values.iter().map(|l| l.sqrt()).collect(),
            vectors: eig.vectors,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mode_count(&self) -> usize {
        self.omega.len()
    }

    /// Normal-mode frequencies, ascending.
    pub fn frequencies(&self) -> &[f64] {
        &self.omega
    }

    /// Full propagator `S(t)`.
    pub fn propagator(&self, t: f64) -> SymplecticPropagator {
        let all: Vec<usize> = (0..self.mode_count()).collect();
        SymplecticPropagator {
            s: self.propagator_rows(&all, t),
            t,
        }
    }

    /// Rows of `S(t)` belonging to the x and p quadratures of `modes`.
    ///
    /// Costs `O(k N²)` for `k` modes instead of `O(N³)` for the full matrix.
    pub fn propagator_rows(&self, modes: &[usize], t: f64) -> DMatrix<f64> {
        let n = self.mode_count();
        let k = modes.len();
        let (cos, sin): (Vec<f64>, Vec<f64>) = self.omega.iter().map(|w| ((w * t).cos(), (w * t).sin())).unzip();
        let mut cc = DMatrix::zeros(k, n);
        let mut xp = DMatrix::zeros(k, n);
        let mut px = DMatrix::zeros(k, n);
        for (row, &i) in modes.iter().enumerate() {
            for m in 0..n {
                let u = self.vectors[(i, m)];
                cc[(row, m)] = u * cos[m];
                xp[(row, m)] = u * sin[m] / self.omega[m];
                px[(row, m)] = -u * sin[m] * self.omega[m];
            }
        }
        let ut = self.vectors.transpose();
        let cos_block = &cc * &ut;
        let mut s = DMatrix::zeros(2 * k, 2 * n);
        s.view_mut((0, 0), (k, n)).copy_from(&cos_block);
        s.view_mut((0, n), (k, n)).copy_from(&(&xp * &ut));
        s.view_mut((k, 0), (k, n)).copy_from(&(&px * &ut));
        s.view_mut((k, n), (k, n)).copy_from(&cos_block);
        s
    }

    /// Reduced covariance of `modes` after evolving `state` for time `t`.
    pub fn evolve_reduced(&self, state: &CovarianceState, modes: &[usize], t: f64) -> Result<CovarianceState> {
        let n = self.mode_count();
        if state.mode_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: state.mode_count(),
            });
        }
        if modes.is_empty() || modes.iter().any(|&m| m >= n) {
            return Err(Error::InvalidArgument(format!("invalid mode selection {modes:?}")));
        }
        let s = self.propagator_rows(modes, t);
        let gamma = linalg::symmetrize(&(&s * state.gamma() * s.transpose()));
        let labels = modes.iter().map(|&m| self.labels[m].clone()).collect();
        CovarianceState::new(labels, gamma)
    }
}

/// Exact propagator of `H = ½(pᵀp + xᵀVx)` at time `t`.
pub fn propagator(h: &QuadraticHamiltonian, t: f64) -> Result<SymplecticPropagator> {
    Ok(ChainDynamics::new(h)?.propagator(t))
}

/// `Γ' = S Γ Sᵀ`, symmetrized.
pub fn evolve(state: &CovarianceState, s: &SymplecticPropagator) -> Result<CovarianceState> {
    if s.s.nrows() != state.gamma.nrows() || s.s.ncols() != state.gamma.nrows() {
        return Err(Error::DimensionMismatch {
            expected: state.gamma.nrows(),
            got: s.s.nrows(),
        });
    }
    let gamma = linalg::symmetrize(&(&s.s * &state.gamma * s.s.transpose()));
    CovarianceState::new(state.labels.clone(), gamma)
}

/// Keeps the named modes, in the given order.
pub fn reduce(state: &CovarianceState, keep: &[&str]) -> Result<CovarianceState> {
    let idx = keep.iter().map(|l| state.index_of(l)).collect::<Result<Vec<_>>>()?;
    state.reduce_indices(&idx)
}

/// Symplectic eigenvalues (positive spectrum of `iJΓ`), ascending.
///
/// Evaluated as square roots of the eigenvalues of the symmetric matrix
/// `Γ^{1/2} JᵀΓJ Γ^{1/2}`, which is similar to `−(JΓ)²`; each value appears
/// twice and the pairs are averaged.
pub fn symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = linalg::ensure_square(gamma)?;
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "covariance dimension must be even and positive, got {dim}"
        )));
    }
    let eig = SymEigen::new(gamma)?;
    let min = eig.min_value();
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let root = eig.apply(f64::sqrt);
    let j = linalg::symplectic_form(dim / 2);
    let k = linalg::symmetrize(&(&root * j.transpose() * gamma * &j * &root));
    let sq = SymEigen::new(&k)?.values;
    Ok(sq
        .as_slice()
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
        }
    }
}

/// Split of a state's modes into two sides (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>) -> Self {
        Self { side_a, side_b }
    }

    /// Side A is the first `split` modes, side B the rest.
    pub fn prefix(split: usize, n: usize) -> Self {
        Self::new((0..split).collect(), (split..n).collect())
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &k in self.side_a.iter().chain(&self.side_b) {
            if k >= n || seen[k] {
                return Err(Error::InvalidArgument(format!(
                    "bipartition {self:?} is not a partition of {n} modes"
                )));
            }
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) || self.side_a.is_empty() || self.side_b.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "bipartition {self:?} must cover all {n} modes with two nonempty sides"
            )));
        }
        Ok(())
    }
}

/// Logarithmic negativity across `partition`, natural-log convention.
pub fn log_negativity(state: &CovarianceState, partition: &Bipartition) -> Result<f64> {
    log_negativity_with_base(state, partition, LogBase::Natural)
}

/// Logarithmic negativity: `Σ_j max(0, −log ν̃_j)` over the symplectic
/// eigenvalues of the partially transposed covariance (`p → −p` on side B).
pub fn log_negativity_with_base(state: &CovarianceState, partition: &Bipartition, base: LogBase) -> Result<f64> {
    let n = state.mode_count();
    partition.validate(n)?;
    let margin = state.physicality_margin()?;
    if margin < -PHYSICALITY_TOL {
        return Err(Error::Unphysical(format!("min eigenvalue of Γ + iJ is {margin:e}")));
    }
    let mut pt = state.gamma.clone();
    for &b in &partition.side_b {
        let row = n + b;
        for col in 0..2 * n {
            pt[(row, col)] = -pt[(row, col)];
        }
        for r in 0..2 * n {
            pt[(r, row)] = -pt[(r, row)];
        }
    }
    let nus = symplectic_eigenvalues(&pt)?;
    // Folded from +0.0: an empty float `sum` is −0.0, which would leak into outputs.
    let total = nus
        .iter()
        .filter(|&&nu| nu < 1.0 - SYMPLECTIC_CLIP)
        .fold(0.0, |acc, nu| acc - nu.ln());
    Ok(total / base.ln_scale())
}

/// E_N between the single modes `i` and `j` of `state`, tracing out the rest.
pub fn pair_log_negativity(state: &CovarianceState, i: usize, j: usize, base: LogBase) -> Result<f64> {
    let reduced = state.reduce_indices(&[i, j])?;
    log_negativity_with_base(&reduced, &Bipartition::new(vec![0], vec![1]), base)
}
