//! Finite-time exponents `(1/(n+1)) log ||rho(S^n z) ... rho(z)||`.

use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::base::{CirclePoint, RotationSystem};
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::skew::{Cocycle, Mat2};

/// Steps between renormalisations of the running product.
pub const RENORMALIZE_EVERY: usize = 32;

/// A product of matrices with its scale kept separately as a logarithm.
#[derive(Clone, Copy, Debug)]
pub struct ScaledProduct {
    pub m: Mat2,
    pub log_scale: f64,
    pub renormalizations: u64,
}

impl Default for ScaledProduct {
    fn default() -> Self {
        ScaledProduct { m: Mat2::IDENTITY, log_scale: 0.0, renormalizations: 0 }
    }
}

impl ScaledProduct {
    /// Replaces the product `P` by `a P`.
    pub fn push_left(&mut self, a: &Mat2) {
        self.m = a.mul(&self.m);
    }

    /// Replaces the product `P` by `P a`.
    pub fn push_right(&mut self, a: &Mat2) {
        self.m = self.m.mul(a);
    }

    pub fn renormalize(&mut self) -> Result<()> {
        let n = self.m.op_norm();
        if !(n.is_finite() && n > 0.0) || !self.m.is_finite() {
            return Err(Error::Numeric("matrix product left the representable range".into()));
        }
        self.m = self.m.scale(1.0 / n);
        self.log_scale += n.ln();
        self.renormalizations += 1;
        Ok(())
    }

    pub fn log_norm(&self) -> Result<f64> {
        let n = self.m.op_norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Numeric("matrix product left the representable range".into()));
        }
        Ok(self.log_scale + n.ln())
    }
}

/// `rho(S^{n} z) ... rho(z)`, renormalised every few steps.
pub fn forward_product(rho: &Cocycle, base: &RotationSystem, z0: CirclePoint, n: usize) -> Result<ScaledProduct> {
    let mut p = ScaledProduct::default();
    let mut z = z0;
    for i in 0..=n {
        p.push_left(&rho.matrix(z, base)?);
        if (i + 1) % RENORMALIZE_EVERY == 0 {
            p.renormalize()?;
        }
        z = base.step(z);
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StartExponent {
    pub start_z: f64,
    /// Angle of the initial direction stretched most by the product.
    pub start_theta: f64,
    pub n: usize,
    pub exponent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    /// Mean of the per-start exponents.
    pub lambda_hat: f64,
    pub per_start: Vec<StartExponent>,
    pub horizon: usize,
    pub renormalizations: u64,
}

impl LyapunovEstimate {
    /// `start_z,start_theta,n,exponent` with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("start_z,start_theta,n,exponent\n");
        for r in &self.per_start {
            let _ = writeln!(s, "{},{},{},{}", sig12(r.start_z), sig12(r.start_theta), r.n, sig12(r.exponent));
        }
        s
    }

    pub fn spread(&self) -> f64 {
        let hi = self.per_start.iter().map(|r| r.exponent).fold(f64::NEG_INFINITY, f64::max);
        let lo = self.per_start.iter().map(|r| r.exponent).fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

fn check_matrix(rho: &Cocycle) -> Result<()> {
    if !rho.is_matrix_valued() {
        return Err(Error::invalid("exponents need a matrix-valued cocycle"));
    }
    Ok(())
}

fn one_start(rho: &Cocycle, base: &RotationSystem, z: CirclePoint, n: usize) -> Result<(StartExponent, u64)> {
    let p = forward_product(rho, base, z, n)?;
    let exponent = p.log_norm()? / (n as f64 + 1.0);
    Ok((
        StartExponent { start_z: z.value(), start_theta: p.m.top_right_singular_angle(), n, exponent },
        p.renormalizations,
    ))
}

pub fn lyapunov_estimate(rho: &Cocycle, base: &RotationSystem, z0: CirclePoint, n: usize) -> Result<LyapunovEstimate> {
    lyapunov_estimates(rho, base, &[z0], n)
}

pub fn lyapunov_estimates(
    rho: &Cocycle,
    base: &RotationSystem,
    starts: &[CirclePoint],
    n: usize,
) -> Result<LyapunovEstimate> {
    check_matrix(rho)?;
    if n == 0 || starts.is_empty() {
        return Err(Error::invalid("need n >= 1 and at least one start"));
    }
    let rows: Vec<(StartExponent, u64)> =
        starts.par_iter().map(|&z| one_start(rho, base, z, n)).collect::<Result<_>>()?;
    let lambda_hat = rows.iter().map(|r| r.0.exponent).sum::<f64>() / rows.len() as f64;
    let renormalizations = rows.iter().map(|r| r.1).sum();
    Ok(LyapunovEstimate { lambda_hat, per_start: rows.into_iter().map(|r| r.0).collect(), horizon: n, renormalizations })
}

/// `max - min` of the finite-time exponents over the starts.
pub fn uniformity_gap(rho: &Cocycle, base: &RotationSystem, starts: &[CirclePoint], n: usize) -> Result<f64> {
    Ok(lyapunov_estimates(rho, base, starts, n)?.spread())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodicity::rotation_grid;

    #[test]
    fn diagonal_constant_is_exact() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::constant_matrix(Mat2::diag(2.0, 0.5));
        for n in [1, 7, 31, 32, 33, 1000] {
            let e = lyapunov_estimate(&rho, &rot, CirclePoint::from_f64(0.1), n).unwrap();
            assert!((e.lambda_hat - 2f64.ln()).abs() < 1e-9);
        }
        assert_eq!(uniformity_gap(&rho, &rot, &rotation_grid(10), 500).unwrap(), 0.0);
    }

    #[test]
    fn rotations_have_zero_exponent() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::constant_matrix(Mat2::rotation(0.77));
        let e = lyapunov_estimate(&rho, &rot, CirclePoint::ZERO, 1000).unwrap();
        assert!(e.lambda_hat.abs() <= 1e-9);
        assert!(uniformity_gap(&rho, &rot, &rotation_grid(10), 1000).unwrap() < 1e-12);
    }

    #[test]
    fn renormalised_matches_naive_product() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::herman(2.0);
        for n in [1usize, 10, 50, 200] {
            let z = CirclePoint::from_f64(0.31);
            let mut m = Mat2::IDENTITY;
            let mut w = z;
            for _ in 0..=n {
                m = rho.matrix(w, &rot).unwrap().mul(&m);
                w = rot.step(w);
            }
            let naive = m.op_norm().ln() / (n as f64 + 1.0);
            let e = lyapunov_estimate(&rho, &rot, z, n).unwrap();
            assert!((naive - e.lambda_hat).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn time_reversal_preserves_the_exponent() {
        let rot = RotationSystem::golden();
        let rho = Cocycle::herman(2.0);
        let n = 100_000;
        let z = CirclePoint::from_f64(0.2);
        let fwd = lyapunov_estimate(&rho, &rot, z, n).unwrap().lambda_hat;
        // rho(S^{-1} .)^{-1} over S^{-1}.
        let mut p = ScaledProduct::default();
        let mut w = z;
        for i in 0..=n {
            w = rot.step_back(w);
            p.push_left(&rho.matrix(w, &rot).unwrap().inverse());
            if (i + 1) % RENORMALIZE_EVERY == 0 {
                p.renormalize().unwrap();
            }
        }
        let back = p.log_norm().unwrap() / (n as f64 + 1.0);
        assert!((fwd - back).abs() < 1e-3, "{fwd} vs {back}");
        assert!(lyapunov_estimate(&Cocycle::constant_rotation(0.1), &rot, z, 10).is_err());
    }
}
