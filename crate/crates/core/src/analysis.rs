// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Peak refinement, threshold crossings and power-law fits on sampled curves.

use crate::error::{Error, Result};

/// `n` evenly spaced points from `0` to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let step = t_max / (n - 1) as f64;
    (0..n)
        .map(|k| if k + 1 == n { t_max } else { k as f64 * step })
        .collect()
}

/// Index of the largest value (first one on ties); `None` for empty or all-NaN input.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if values[b] >= *v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search to width `tol`.
///
/// Returns the best point seen, including the endpoints.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb > best.1 {
        best = (b, fb);
    }
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    Ok(best)
}

/// Refines the grid maximum of `values` (sampled at `times`) by golden-section
/// search on `f` between the neighbouring grid points.
pub fn refine_grid_peak<F>(times: &[f64], values: &[f64], f: F, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let i = argmax(values).ok_or_else(|| Error::Numerical("no finite samples to refine".into()))?;
    let lo = times[i.saturating_sub(1)];
    let hi = times[(i + 1).min(times.len() - 1)];
    let (t, v) = golden_section_max(f, lo, hi, tol)?;
    if v >= values[i] {
        Ok((t, v))
    } else {
        Ok((times[i], values[i]))
    }
}

/// First time `f` reaches `threshold`, located on the grid and refined by
/// bisection to width `tol`. `None` if the sampled curve never reaches it.
pub fn first_crossing<F>(times: &[f64], values: &[f64], mut f: F, threshold: f64, tol: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Some(i) = values.iter().position(|&v| v >= threshold) else {
        return Ok(None);
    };
    if i == 0 {
        return Ok(Some(times[0]));
    }
    let (mut lo, mut hi) = (times[i - 1], times[i]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Least-squares fit of `y = A x^k` on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "power-law fit requires at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "power-law fit needs positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("power-law fit needs distinct x values".into()));
    }
    let k = sxy / sxx;
    let intercept = my - k * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(PowerLawFit {
        exponent: k,
        prefactor: intercept.exp(),
        r_squared,
        points: xs.len(),
    })
}

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}
