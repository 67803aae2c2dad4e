//! Irrational circle rotations `z -> z + alpha`.

use super::circle::{Alpha, CirclePoint};
use super::contfrac::{continued_fraction, ContinuedFraction, Convergent};
use crate::error::{Error, Result};

/// Maximum number of convergents kept alongside a rotation.
const CF_DEPTH: usize = 256;

#[derive(Clone, Debug)]
pub struct RotationSystem {
    alpha: Alpha,
    cf: ContinuedFraction,
}

impl RotationSystem {
    /// Builds the rotation; exact rationals are rejected since they are not
    /// minimal.
    pub fn new(alpha: Alpha) -> Result<Self> {
        if let Some((p, q)) = alpha.exact_rational() {
            return Err(Error::invalid(format!("rotation by {p}/{q} is periodic, not strictly ergodic")));
        }
        let cf = continued_fraction(&alpha, CF_DEPTH);
        Ok(RotationSystem { alpha, cf })
    }

    pub fn golden() -> Self {
        Self::new(Alpha::golden()).expect("golden mean is irrational")
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn alpha_units(&self) -> u128 {
        self.alpha.units()
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.value()
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.cf.convergents
    }

    pub fn step(&self, z: CirclePoint) -> CirclePoint {
        z.add_units(self.alpha.units())
    }

    pub fn step_back(&self, z: CirclePoint) -> CirclePoint {
        z.sub_units(self.alpha.units())
    }

    /// `z + n*alpha` for any signed `n`, exact in the representation.
    pub fn iterate(&self, z: CirclePoint, n: i128) -> CirclePoint {
        z.add_units((n as u128).wrapping_mul(self.alpha.units()))
    }

    /// `||q alpha||`, the distance from `q*alpha` to the nearest integer.
    pub fn norm_of_multiple(&self, q: u128) -> f64 {
        CirclePoint::from_units(q.wrapping_mul(self.alpha.units())).distance(CirclePoint::ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterating_q_k_returns_close() {
        let rot = RotationSystem::golden();
        let z = CirclePoint::from_f64(0.3141);
        let cs = rot.convergents();
        for k in 0..30 {
            let qk = cs[k].q;
            let qk1 = cs[k + 1].q;
            // Walk the orbit step by step (independent of `iterate`).
            let mut w = z;
            for _ in 0..qk {
                w = rot.step(w);
            }
            let err = w.distance(z);
            assert!(err < 1.0 / qk1 as f64, "k={k}: {err}");
            assert!((err - rot.norm_of_multiple(qk)).abs() < 1e-15);
            // Best approximation bound.
            let a = rot.alpha_f64();
            assert!((a - cs[k].value()).abs() < 1.0 / (qk as f64 * qk1 as f64));
        }
    }

    #[test]
    fn negative_iterates() {
        let rot = RotationSystem::golden();
        let z = CirclePoint::from_f64(0.7);
        assert_eq!(rot.iterate(rot.iterate(z, 12345), -12345), z);
        assert_eq!(rot.iterate(z, -1), rot.step_back(z));
    }

    #[test]
    fn rational_rejected() {
        assert!(RotationSystem::new(Alpha::rational(1, 3).unwrap()).is_err());
    }
}
