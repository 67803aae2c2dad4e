//! Uniform start grids.

use crate::base::CirclePoint;
use crate::skew::{RelState, SkewState};

pub fn rotation_grid(nz: usize) -> Vec<CirclePoint> {
    (0..nz).map(|i| CirclePoint::from_f64(i as f64 / nz as f64)).collect()
}

pub fn skew_grid(nz: usize, ny: usize) -> Vec<SkewState> {
    rotation_grid(nz)
        .into_iter()
        .flat_map(|z| (0..ny).map(move |j| SkewState { z, y: j as f64 / ny as f64 }))
        .collect()
}

pub fn relative_grid(nz: usize, ny: usize) -> Vec<RelState> {
    rotation_grid(nz)
        .into_iter()
        .flat_map(|z| {
            (0..ny).flat_map(move |i| (0..ny).map(move |j| RelState { z, y1: i as f64 / ny as f64, y2: j as f64 / ny as f64 }))
        })
        .collect()
}

/// Starts on the diagonal `y1 = y2`.
pub fn diagonal_grid(nz: usize, ny: usize) -> Vec<RelState> {
    skew_grid(nz, ny).into_iter().map(|s| RelState { z: s.z, y1: s.y, y2: s.y }).collect()
}
