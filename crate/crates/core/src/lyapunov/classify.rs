//! Three-way classification of `SL(2,R)` cocycles over a rotation: zero
//! exponent; positive exponent with measurable invariant directions;
//! positive exponent with continuous invariant directions.

use serde::Serialize;

use super::directions::{direction_field, DirectionEstimate};
use super::exponent::{lyapunov_estimate, uniformity_gap};
use crate::base::{CirclePoint, RotationSystem};
use crate::ergodicity::{skew_grid, ue_gap, Coord, TestFunction, UeThresholds, UeVerdict};
use crate::error::{Error, Result};
use crate::skew::{Cocycle, SkewSystem};

/// Spread of finite-time exponents of the Herman cocycle with `lambda = 2`
/// over the golden rotation, at `n = 10^4` over `10^3` uniform starts.
pub const HERMAN_GAP_BASELINE: f64 = 1.198e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub lambda_horizon: usize,
    pub lambda_threshold: f64,
    pub gap_horizon: usize,
    pub gap_starts: usize,
    /// A smaller spread counts as uniform convergence.
    pub gap_threshold: f64,
    /// Largest angular jump (radians) of a continuous direction field.
    pub jump_threshold: f64,
    pub field_points: usize,
    pub pullback: usize,
    /// Horizon of the unique-ergodicity cross-check on the projective skew
    /// product when the exponent vanishes; 0 skips it.
    pub ue_horizon: usize,
    pub ue_base_points: usize,
    pub ue_fiber_points: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            lambda_horizon: 1_000_000,
            lambda_threshold: 0.01,
            gap_horizon: 10_000,
            gap_starts: 1_000,
            gap_threshold: HERMAN_GAP_BASELINE / 4.0,
            jump_threshold: 0.1,
            field_points: 1_000,
            pullback: 50,
            ue_horizon: 1_000_000,
            ue_base_points: 8,
            ue_fiber_points: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrichotomyClass {
    Case1,
    Case2a,
    Case2b,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionSummary {
    pub max_jump_plus: f64,
    pub max_jump_minus: f64,
    pub low_confidence_count: usize,
    pub at_zero: DirectionEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct UeCorroboration {
    pub verdict: UeVerdict,
    pub max_final_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrichotomyReport {
    pub lambda_hat: f64,
    pub uniformity_gap: Option<f64>,
    pub directions: Option<DirectionSummary>,
    pub corroboration: Option<UeCorroboration>,
    pub assigned_class: TrichotomyClass,
    pub config: ClassifyConfig,
    /// Direction samples, kept out of the serialised summary.
    #[serde(skip)]
    pub field: Vec<DirectionEstimate>,
}

pub fn furman_classify(rho: &Cocycle, base: &RotationSystem, cfg: &ClassifyConfig) -> Result<TrichotomyReport> {
    if cfg.lambda_horizon == 0 || cfg.gap_horizon == 0 || cfg.gap_starts == 0 || cfg.field_points < 2 {
        return Err(Error::invalid("classification horizons and grids must be positive"));
    }
    let lambda_hat = lyapunov_estimate(rho, base, CirclePoint::ZERO, cfg.lambda_horizon)?.lambda_hat;
    if lambda_hat < cfg.lambda_threshold {
        let corroboration = if cfg.ue_horizon > 0 {
            let sys = SkewSystem::new(base.clone(), rho.clone());
            let fs = vec![TestFunction::cos(Coord::Y1, 1), TestFunction::sin(Coord::Y1, 1), TestFunction::cos(Coord::Z, 1)];
            let mut schedule: Vec<usize> = vec![cfg.ue_horizon / 100, cfg.ue_horizon / 10, cfg.ue_horizon];
            schedule.retain(|&n| n > 0);
            schedule.dedup();
            let starts = skew_grid(cfg.ue_base_points, cfg.ue_fiber_points);
            let r = ue_gap(&sys, &starts, &fs, &schedule, UeThresholds::default())?;
            let last = *schedule.last().expect("nonempty") as u128;
            let max_final_gap = r.rows.iter().filter(|x| x.n == last).map(|x| x.gap).fold(0.0, f64::max);
            Some(UeCorroboration { verdict: r.verdict, max_final_gap })
        } else {
            None
        };
        return Ok(TrichotomyReport {
            lambda_hat,
            uniformity_gap: None,
            directions: None,
            corroboration,
            assigned_class: TrichotomyClass::Case1,
            config: *cfg,
            field: Vec::new(),
        });
    }
    let starts: Vec<CirclePoint> =
        (0..cfg.gap_starts).map(|i| CirclePoint::from_f64(i as f64 / cfg.gap_starts as f64)).collect();
    let gap = uniformity_gap(rho, base, &starts, cfg.gap_horizon)?;
    let field = direction_field(rho, base, cfg.field_points, cfg.pullback)?;
    let continuous = field.max_jump_plus < cfg.jump_threshold && field.max_jump_minus < cfg.jump_threshold;
    let trusted = field.low_confidence_count == 0;
    let uniform = gap < cfg.gap_threshold;
    let class = if trusted && continuous && uniform {
        TrichotomyClass::Case2b
    } else if (trusted && !continuous) || !uniform {
        TrichotomyClass::Case2a
    } else {
        TrichotomyClass::Undetermined
    };
    Ok(TrichotomyReport {
        lambda_hat,
        uniformity_gap: Some(gap),
        directions: Some(DirectionSummary {
            max_jump_plus: field.max_jump_plus,
            max_jump_minus: field.max_jump_minus,
            low_confidence_count: field.low_confidence_count,
            at_zero: field.samples[0],
        }),
        corroboration: None,
        assigned_class: class,
        config: *cfg,
        field: field.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::Mat2;

    fn quick() -> ClassifyConfig {
        ClassifyConfig { lambda_horizon: 20_000, ue_horizon: 20_000, gap_starts: 200, field_points: 200, ..Default::default() }
    }

    #[test]
    fn three_cases() {
        let rot = RotationSystem::golden();
        let r = furman_classify(&Cocycle::constant_matrix(Mat2::rotation(0.9)), &rot, &quick()).unwrap();
        assert_eq!(r.assigned_class, TrichotomyClass::Case1);
        let r = furman_classify(&Cocycle::constant_matrix(Mat2::diag(2.0, 0.5)), &rot, &quick()).unwrap();
        assert_eq!(r.assigned_class, TrichotomyClass::Case2b);
        assert_eq!(r.uniformity_gap, Some(0.0));
        let r = furman_classify(&Cocycle::herman(2.0), &rot, &quick()).unwrap();
        assert_eq!(r.assigned_class, TrichotomyClass::Case2a);
    }
}
