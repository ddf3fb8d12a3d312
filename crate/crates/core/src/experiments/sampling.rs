// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Grid sampling with refined peaks merged back into the series.

use rayon::prelude::*;

use crate::analysis;
use crate::error::{Error, Result};

/// Golden-section width used for every peak refinement.
pub const PEAK_TOL: f64 = 1e-6;

/// Sampled rows, plus the `(time, value)` peak of each refined column.
///
/// Refined peak times are inserted into `times`, so every peak can be read
/// back from the emitted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub times: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
    pub peaks: Vec<(f64, f64)>,
}

impl Sampled {
    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k]
    }
}

fn evaluate<F>(times: &[f64], width: usize, f: &F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let rows: Vec<Vec<f64>> = times.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::Numerical(format!(
            "sampled row has {} values, expected {width}",
            bad.len()
        )));
    }
    Ok(rows)
}

/// Evaluates `f` (one row of `width` values per time) on `grid`, refines the
/// maxima of the columns listed in `refine`, and merges the refined times in.
pub fn sample_rows<F>(grid: &[f64], width: usize, f: F, refine: &[usize]) -> Result<Sampled>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let rows = evaluate(grid, width, &f)?;
    let column = |k: usize, rows: &[Vec<f64>]| rows.iter().map(|r| r[k]).collect::<Vec<f64>>();

    let mut peak_times = Vec::with_capacity(refine.len());
    for &k in refine {
        let values = column(k, &rows);
        let (t, _) = analysis::refine_grid_peak(grid, &values, |t| Ok(f(t)?[k]), PEAK_TOL)?;
        peak_times.push(t);
    }

    let mut extra: Vec<f64> = peak_times.iter().copied().filter(|t| !grid.contains(t)).collect();
    extra.sort_by(f64::total_cmp);
    extra.dedup();
    let extra_rows = evaluate(&extra, width, &f)?;

    let mut merged: Vec<(f64, Vec<f64>)> = grid
        .iter()
        .copied()
        .zip(rows)
        .chain(extra.into_iter().zip(extra_rows))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));

    let times: Vec<f64> = merged.iter().map(|r| r.0).collect();
    let columns: Vec<Vec<f64>> = (0..width).map(|k| merged.iter().map(|r| r.1[k]).collect()).collect();
    let peaks = refine
        .iter()
        .zip(&peak_times)
        .map(|(&k, &t)| {
            let i = times.iter().position(|&x| x == t).expect("peak time was merged");
            (t, columns[k][i])
        })
        .collect();
    Ok(Sampled { times, columns, peaks })
}
