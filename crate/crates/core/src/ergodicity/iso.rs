//! The isomorphic-extension test: unique ergodicity of the relative product.

use rayon::prelude::*;
use serde::Serialize;

use super::functions::TestFunction;
use super::ue::{gap_report, UeReport, UeThresholds, UeVerdict};
use crate::base::RotationSystem;
use crate::coboundary::{relative_averages, Engine};
use crate::error::{Error, Result};
use crate::skew::{Cocycle, RelState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoVerdict {
    IsomorphicEvidence,
    NotIsomorphic,
    Inconclusive,
}

impl From<UeVerdict> for IsoVerdict {
    fn from(v: UeVerdict) -> Self {
        match v {
            UeVerdict::UniquelyErgodicEvidence => IsoVerdict::IsomorphicEvidence,
            UeVerdict::NotUniquelyErgodic => IsoVerdict::NotIsomorphic,
            UeVerdict::Inconclusive => IsoVerdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub verdict: IsoVerdict,
    pub engine: Engine,
    /// A finite horizon can certify failure through a conserved quantity
    /// but never unique ergodicity itself.
    pub one_sided: bool,
    pub ue: UeReport,
}

pub fn isomorphic_extension_test(
    g: &Cocycle,
    base: &RotationSystem,
    fs: &[TestFunction],
    starts: &[RelState],
    schedule: &[u128],
    thresholds: UeThresholds,
) -> Result<IsoReport> {
    if !fs.iter().any(|f| f.separates_diagonal() || matches!(f, TestFunction::Custom { .. })) {
        return Err(Error::invalid("dictionary needs a function of y1 - y2"));
    }
    if starts.is_empty() {
        return Err(Error::invalid("start grid must be nonempty"));
    }
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("horizon schedule must be positive and strictly increasing"));
    }
    let runs: Vec<(Vec<Vec<f64>>, Engine)> = starts
        .par_iter()
        .map(|s| {
            let (mut a, e) = relative_averages(g, base, fs, s.z, &[(s.y1, s.y2)], schedule)?;
            Ok((a.pop().expect("one fiber start"), e))
        })
        .collect::<Result<_>>()?;
    let engine = runs[0].1;
    let averages: Vec<Vec<Vec<f64>>> = runs.into_iter().map(|r| r.0).collect();
    let ue = gap_report(&averages, fs, schedule, thresholds)?;
    Ok(IsoReport { verdict: ue.verdict.into(), engine, one_sided: true, ue })
}
