//! Spread of Birkhoff averages over a grid of starting points.

use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::birkhoff::birkhoff_averages;
use super::functions::TestFunction;
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::system::DynamicalSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UeVerdict {
    UniquelyErgodicEvidence,
    NotUniquelyErgodic,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UeThresholds {
    /// Every final gap below this counts as evidence.
    pub pass: f64,
    /// A gap above this across the top half of the schedule is a failure.
    pub fail: f64,
}

impl Default for UeThresholds {
    fn default() -> Self {
        UeThresholds { pass: 0.01, fail: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub function_id: String,
    pub n: u128,
    pub gap: f64,
    /// Index into the start grid of the largest average.
    pub max_start: usize,
    /// Index of the smallest average.
    pub min_start: usize,
    pub max_value: f64,
    pub min_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UeReport {
    pub rows: Vec<GapRow>,
    pub verdict: UeVerdict,
    pub thresholds: UeThresholds,
    pub starts: usize,
    pub schedule: Vec<u128>,
}

impl UeReport {
    /// Rows for one function, in schedule order.
    pub fn rows_for(&self, id: &str) -> Vec<&GapRow> {
        self.rows.iter().filter(|r| r.function_id == id).collect()
    }

    /// `function_id,n,gap,max_start,min_start` with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("function_id,n,gap,max_start,min_start\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.function_id, r.n, sig12(r.gap), r.max_start, r.min_start);
        }
        s
    }
}

/// Builds the report from `averages[start][f][h]`.
pub fn gap_report(
    averages: &[Vec<Vec<f64>>],
    fs: &[TestFunction],
    schedule: &[u128],
    thresholds: UeThresholds,
) -> Result<UeReport> {
    if averages.is_empty() {
        return Err(Error::invalid("start grid must be nonempty"));
    }
    let mut rows = Vec::with_capacity(fs.len() * schedule.len());
    for (fi, f) in fs.iter().enumerate() {
        for (h, &n) in schedule.iter().enumerate() {
            let (mut max_start, mut min_start) = (0, 0);
            for (s, a) in averages.iter().enumerate() {
                if a[fi][h] > averages[max_start][fi][h] {
                    max_start = s;
                }
                if a[fi][h] < averages[min_start][fi][h] {
                    min_start = s;
                }
            }
            let (hi, lo) = (averages[max_start][fi][h], averages[min_start][fi][h]);
            rows.push(GapRow { function_id: f.id(), n, gap: hi - lo, max_start, min_start, max_value: hi, min_value: lo });
        }
    }
    let k = schedule.len();
    let top_half = k / 2;
    let failed = rows.chunks(k).any(|fr| fr[top_half..].iter().all(|r| r.gap > thresholds.fail));
    let passed = rows.chunks(k).all(|fr| fr[k - 1].gap < thresholds.pass);
    let verdict = if failed {
        UeVerdict::NotUniquelyErgodic
    } else if passed {
        UeVerdict::UniquelyErgodicEvidence
    } else {
        UeVerdict::Inconclusive
    };
    Ok(UeReport { rows, verdict, thresholds, starts: averages.len(), schedule: schedule.to_vec() })
}

pub(crate) fn check_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("horizon schedule must be positive and strictly increasing"));
    }
    Ok(())
}

pub fn ue_gap<S: DynamicalSystem>(
    sys: &S,
    starts: &[S::Point],
    fs: &[TestFunction],
    schedule: &[usize],
    thresholds: UeThresholds,
) -> Result<UeReport> {
    if starts.is_empty() || fs.is_empty() {
        return Err(Error::invalid("start grid and dictionary must be nonempty"));
    }
    check_schedule(schedule)?;
    let averages: Vec<Vec<Vec<f64>>> =
        starts.par_iter().map(|x| birkhoff_averages(sys, x, fs, schedule)).collect::<Result<_>>()?;
    let sched: Vec<u128> = schedule.iter().map(|&n| n as u128).collect();
    gap_report(&averages, fs, &sched, thresholds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{CirclePoint, RotationSystem};
    use crate::ergodicity::functions::Coord;
    use crate::ergodicity::grids::{rotation_grid, skew_grid};
    use crate::skew::{Cocycle, FiberSpace, SkewSystem};

    #[test]
    fn rotation_gaps_vanish() {
        let rot = RotationSystem::golden();
        let fs = vec![TestFunction::cos(Coord::Z, 1), TestFunction::sin(Coord::Z, 1)];
        let r = ue_gap(&rot, &rotation_grid(32), &fs, &[1_000, 10_000, 100_000, 1_000_000], UeThresholds::default())
            .unwrap();
        assert_eq!(r.verdict, UeVerdict::UniquelyErgodicEvidence);
        // Gap times n stays below a fixed constant for golden alpha.
        for row in &r.rows {
            assert!(row.gap * row.n as f64 <= 4.0, "{row:?}");
        }
    }

    #[test]
    fn frozen_fiber_fails() {
        let sys = SkewSystem::new(RotationSystem::golden(), Cocycle::identity(FiberSpace::Circle));
        let fs = vec![TestFunction::sin(Coord::Y1, 1)];
        let r = ue_gap(&sys, &skew_grid(8, 16), &fs, &[100, 1000, 10_000], UeThresholds::default()).unwrap();
        assert_eq!(r.verdict, UeVerdict::NotUniquelyErgodic);
        assert!(r.rows.iter().all(|row| row.gap > 1.9));
        let csv = r.to_csv();
        assert!(csv.starts_with("function_id,n,gap,max_start,min_start\nsin:y1,100,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn constant_shift_leaves_gaps_alone() {
        let sys = SkewSystem::new(RotationSystem::golden(), Cocycle::constant_rotation(0.5f64.sqrt()));
        let starts = skew_grid(4, 4);
        let f = TestFunction::cos(Coord::Y1, 1);
        let shifted = TestFunction::Custom {
            id: "shifted".into(),
            f: std::sync::Arc::new(|o: &crate::system::Observation| (2.0 * std::f64::consts::PI * o.y1).cos() + 0.25),
            depends_on_z: false,
        };
        let a = ue_gap(&sys, &starts, &[f], &[500, 5000], UeThresholds::default()).unwrap();
        let b = ue_gap(&sys, &starts, &[shifted], &[500, 5000], UeThresholds::default()).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.gap - y.gap).abs() < 1e-12);
        }
        let _ = CirclePoint::ZERO;
    }
}
