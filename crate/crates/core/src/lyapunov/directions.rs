//! The expanding and contracting directions `u+(z)`, `u-(z)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::exponent::{ScaledProduct, RENORMALIZE_EVERY};
use crate::base::{CirclePoint, RotationSystem};
use crate::error::Result;
use crate::skew::{mobius_act, Cocycle, ProjectivePoint};

/// Probe directions, as multiples of `pi`.
const PROBES: [f64; 3] = [0.1, 0.4, 0.7];
/// Probe spread above which a direction is not trusted.
pub const LOW_CONFIDENCE_DIAMETER: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectionEstimate {
    pub z: f64,
    /// Angle of `u+` in `[0, pi)`.
    pub u_plus: f64,
    pub u_minus: f64,
    /// Projective diameter of the images of the probes (largest of the two).
    pub contraction_diag: f64,
    pub low_confidence: bool,
}

fn probe_diameter(p: &ScaledProduct) -> f64 {
    let imgs: Vec<ProjectivePoint> = PROBES.iter().map(|&t| mobius_act(&p.m, ProjectivePoint::new(t * PI))).collect();
    let mut d = 0.0f64;
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            d = d.max(imgs[i].distance(&imgs[j]));
        }
    }
    d
}

pub fn invariant_directions(rho: &Cocycle, base: &RotationSystem, z: CirclePoint, n_pullback: usize) -> Result<DirectionEstimate> {
    // rho(S^{-1} z) ... rho(S^{-n} z) pushes everything towards u+(z).
    let mut plus = ScaledProduct::default();
    let mut w = z;
    for i in 0..n_pullback {
        w = base.step_back(w);
        plus.push_right(&rho.matrix(w, base)?);
        if (i + 1) % RENORMALIZE_EVERY == 0 {
            plus.renormalize()?;
        }
    }
    // rho(z)^{-1} ... rho(S^{n-1} z)^{-1} pushes towards u-(z).
    let mut minus = ScaledProduct::default();
    let mut w = z;
    for i in 0..n_pullback {
        minus.push_right(&rho.matrix(w, base)?.inverse());
        w = base.step(w);
        if (i + 1) % RENORMALIZE_EVERY == 0 {
            minus.renormalize()?;
        }
    }
    let diag = probe_diameter(&plus).max(probe_diameter(&minus));
    Ok(DirectionEstimate {
        z: z.value(),
        u_plus: ProjectivePoint::new(plus.m.top_left_singular_angle()).theta(),
        u_minus: ProjectivePoint::new(minus.m.top_left_singular_angle()).theta(),
        contraction_diag: diag,
        low_confidence: diag > LOW_CONFIDENCE_DIAMETER,
    })
}

/// Angular distance between two lines, in radians.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionField {
    pub samples: Vec<DirectionEstimate>,
    /// Largest angular jump between neighbouring grid points, cyclically.
    pub max_jump_plus: f64,
    pub max_jump_minus: f64,
    pub low_confidence_count: usize,
}

pub fn direction_field(rho: &Cocycle, base: &RotationSystem, points: usize, n_pullback: usize) -> Result<DirectionField> {
    let samples: Vec<DirectionEstimate> = (0..points)
        .into_par_iter()
        .map(|i| invariant_directions(rho, base, CirclePoint::from_f64(i as f64 / points as f64), n_pullback))
        .collect::<Result<_>>()?;
    let jump = |f: fn(&DirectionEstimate) -> f64| {
        (0..samples.len())
            .map(|i| angle_gap(f(&samples[i]), f(&samples[(i + 1) % samples.len()])))
            .fold(0.0, f64::max)
    };
    Ok(DirectionField {
        max_jump_plus: jump(|d| d.u_plus),
        max_jump_minus: jump(|d| d.u_minus),
        low_confidence_count: samples.iter().filter(|d| d.low_confidence).count(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::Mat2;

    #[test]
    fn diagonal_eigendirections() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::constant_matrix(Mat2::diag(2.0, 0.5));
        let d = invariant_directions(&rho, &rot, CirclePoint::from_f64(0.4), 50).unwrap();
        assert!(angle_gap(d.u_plus, 0.0) < 1e-6);
        assert!(angle_gap(d.u_minus, PI / 2.0) < 1e-6);
        assert!(!d.low_confidence);
    }

    #[test]
    fn hyperbolic_eigendirections() {
        // Eigenvectors at angles phi1, phi2: M = V diag(3, 1/3) V^{-1}.
        let (p1, p2) = (0.3f64, 1.9f64);
        let v = Mat2::new(p1.cos(), p2.cos(), p1.sin(), p2.sin());
        let m = v.mul(&Mat2::diag(3.0, 1.0 / 3.0)).mul(&v.inverse());
        let rot = RotationSystem::golden();
        let d = invariant_directions(&Cocycle::constant_matrix(m), &rot, CirclePoint::ZERO, 50).unwrap();
        assert!(angle_gap(d.u_plus, p1) < 1e-6);
        assert!(angle_gap(d.u_minus, p2) < 1e-6);
    }

    #[test]
    fn probe_spread_shrinks_with_pullback() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::constant_matrix(Mat2::new(2.0, 1.0, 1.0, 1.0));
        let mut prev = f64::INFINITY;
        for n in [2, 4, 8, 16] {
            let d = invariant_directions(&rho, &rot, CirclePoint::ZERO, n).unwrap().contraction_diag;
            assert!(d <= prev * 1.1);
            prev = d;
        }
    }
}
