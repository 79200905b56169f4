//! Double character sums `Σ_{u∈U} Σ_{v∈V} χ(u+v)`, the Karatsuba-type upper
//! bound for them, and the filter sets `U(V) = {u : χ(u+v) = 1 ∀ v ∈ V}`.
//!
//! The implied constants of the bounds are unknown, so nothing here asserts
//! them: the sampling reports evaluate the right-hand sides with constant 1
//! and record the observed ratios.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::sample::{random_subset, sample_rng};
use crate::set::{translate, ElementSet, ResidueShifts};

pub const CHARSUM_CSV_HEADER: [&str; 7] = ["q", "nu", "size_u", "size_v", "lhs", "rhs", "ratio"];
pub const FILTER_CSV_HEADER: [&str; 6] =
    ["q", "epsilon", "v_size", "sample", "size_u", "ratio_sqrt_q"];

/// Default `ε` for filter statistics, giving `#V = ⌊q^{1/4}⌋`.
pub const DEFAULT_EPSILON: f64 = 0.5;

fn check_field(field: &Field, s: &ElementSet) -> Result<()> {
    if s.q() == field.q() {
        Ok(())
    } else {
        Err(Error::FieldMismatch {
            left: s.q(),
            right: field.q(),
        })
    }
}

/// Exact value of `Σ_{u∈U} Σ_{v∈V} χ(u+v)`.
pub fn double_char_sum(field: &Field, u: &ElementSet, v: &ElementSet) -> Result<i64> {
    check_field(field, u)?;
    check_field(field, v)?;
    let residues = field.quadratic_residues();
    let mut nonresidues = ElementSet::full(field.q()).and_not(&residues);
    nonresidues.remove(0);
    let (outer, inner) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    let total = outer
        .iter()
        .map(|x| {
            let shifted = translate(field, inner, x);
            shifted.and_count(&residues) as i64 - shifted.and_count(&nonresidues) as i64
        })
        .sum();
    Ok(total)
}

/// `#U^{1-1/2ν} #V q^{1/4ν} + #U^{1-1/2ν} #V^{1/2} q^{1/2ν}` with implied
/// constant 1.
pub fn karatsuba_rhs(q: u32, size_u: usize, size_v: usize, nu: u32) -> Result<f64> {
    if size_u == 0 || size_v == 0 {
        return Err(Error::Domain("set sizes must be positive".into()));
    }
    if nu == 0 {
        return Err(Error::Domain("nu must be at least 1".into()));
    }
    let (q, su, sv, nu) = (q as f64, size_u as f64, size_v as f64, nu as f64);
    let u_part = su.powf(1.0 - 1.0 / (2.0 * nu));
    Ok(u_part * sv * q.powf(1.0 / (4.0 * nu)) + u_part * sv.sqrt() * q.powf(1.0 / (2.0 * nu)))
}

/// `U(V)`: the AND over `v ∈ V` of the residue indicator shifted by `v`.
pub fn filter_set(field: &Field, v: &ElementSet) -> Result<ElementSet> {
    check_field(field, v)?;
    if v.is_empty() {
        return Err(Error::EmptyV);
    }
    Ok(ResidueShifts::new(field).intersect_shifts(v))
}

/// `⌊q^{ε/2}⌋`, guarded against `powf` landing just below an integer.
pub fn filter_v_size(q: u32, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let size = ((q as f64).powf(epsilon / 2.0) + 1e-9).floor() as usize;
    if size == 0 {
        return Err(Error::Domain("q^(epsilon/2) < 1".into()));
    }
    Ok(size)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharSumSample {
    pub size_u: usize,
    pub size_v: usize,
    pub lhs: i64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharSumReport {
    pub q: u32,
    pub nu: u32,
    pub samples: Vec<CharSumSample>,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSample {
    pub sample: usize,
    /// The sampled `V`; it is also regenerated by `sample_rng(seed, sample)`.
    pub v: ElementSet,
    pub size_u: usize,
    pub ratio_sqrt_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterStats {
    pub q: u32,
    pub epsilon: f64,
    pub v_size: usize,
    pub seed: u64,
    pub samples: Vec<FilterSample>,
    pub max_ratio_to_sqrt_q: f64,
}

/// Regenerates the `V` drawn for sample `index` of a filter-statistics run.
pub fn filter_sample_v(q: u32, v_size: usize, seed: u64, index: usize) -> ElementSet {
    random_subset(q, v_size, &mut sample_rng(seed, index as u64))
}

pub fn sample_filter_stats(
    field: &Field,
    epsilon: f64,
    num_samples: usize,
    seed: u64,
) -> Result<FilterStats> {
    let v_size = filter_v_size(field.q(), epsilon)?;
    if num_samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let q = field.q();
    let shifts = ResidueShifts::new(field);
    let sqrt_q = (q as f64).sqrt();
    let samples: Vec<FilterSample> = (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let v = filter_sample_v(q, v_size, seed, i);
            let size_u = shifts.intersect_shifts(&v).len();
            FilterSample {
                sample: i,
                v,
                size_u,
                ratio_sqrt_q: size_u as f64 / sqrt_q,
            }
        })
        .collect();
    let max_ratio_to_sqrt_q = samples.iter().map(|s| s.ratio_sqrt_q).fold(0.0, f64::max);
    Ok(FilterStats {
        q,
        epsilon,
        v_size,
        seed,
        samples,
        max_ratio_to_sqrt_q,
    })
}

/// Draws `num_samples` random pairs `(U, V)` for each `(#U, #V)` in the grid.
/// Sample `g * num_samples + s` of grid entry `g` uses its own sub-seed.
pub fn sample_charsum_report(
    field: &Field,
    nu: u32,
    num_samples: usize,
    size_grid: &[(usize, usize)],
    seed: u64,
) -> Result<CharSumReport> {
    let q = field.q();
    if nu == 0 {
        return Err(Error::Domain("nu must be at least 1".into()));
    }
    if num_samples == 0 || size_grid.is_empty() {
        return Err(Error::Domain(
            "need at least one sample and one grid entry".into(),
        ));
    }
    if let Some(bad) = size_grid
        .iter()
        .find(|&&(su, sv)| su == 0 || sv == 0 || su > q as usize || sv > q as usize)
    {
        return Err(Error::Domain(format!(
            "grid entry {bad:?} outside [1, {q}]"
        )));
    }
    let jobs: Vec<(usize, (usize, usize))> = size_grid
        .iter()
        .enumerate()
        .flat_map(|(g, &sizes)| (0..num_samples).map(move |s| (g * num_samples + s, sizes)))
        .collect();
    let samples = jobs
        .into_par_iter()
        .map(|(index, (su, sv))| {
            let mut rng = sample_rng(seed, index as u64);
            let u = random_subset(q, su, &mut rng);
            let v = random_subset(q, sv, &mut rng);
            let lhs = double_char_sum(field, &u, &v)?;
            let rhs = karatsuba_rhs(q, su, sv, nu)?;
            Ok(CharSumSample {
                size_u: su,
                size_v: sv,
                lhs,
                rhs,
                ratio: lhs.unsigned_abs() as f64 / rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    Ok(CharSumReport {
        q,
        nu,
        samples,
        max_ratio,
    })
}

pub fn write_charsum_csv<W: Write>(report: &CharSumReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(CHARSUM_CSV_HEADER).map_err(io)?;
    for s in &report.samples {
        w.write_record([
            report.q.to_string(),
            report.nu.to_string(),
            s.size_u.to_string(),
            s.size_v.to_string(),
            s.lhs.to_string(),
            s.rhs.to_string(),
            s.ratio.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Domain(format!("csv: {e}")))
}

pub fn write_filter_csv<W: Write>(stats: &FilterStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(FILTER_CSV_HEADER).map_err(io)?;
    for s in &stats.samples {
        w.write_record([
            stats.q.to_string(),
            stats.epsilon.to_string(),
            stats.v_size.to_string(),
            s.sample.to_string(),
            s.size_u.to_string(),
            s.ratio_sqrt_q.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Domain(format!("csv: {e}")))
}
