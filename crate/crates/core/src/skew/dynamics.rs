//! Skew products `T_G(z, y) = (Sz, G_z y)` and relative products.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::cocycle::Cocycle;
use super::fiber::FiberSpace;
use crate::base::{CirclePoint, RotationSystem};
use crate::error::{Error, Result};
use crate::system::{DynamicalSystem, Observation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewState {
    pub z: CirclePoint,
    pub y: f64,
}

/// A point `(z, y1, y2)` of the relative product `X x_Z X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelState {
    pub z: CirclePoint,
    pub y1: f64,
    pub y2: f64,
}

impl RelState {
    pub fn first(&self) -> SkewState {
        SkewState { z: self.z, y: self.y1 }
    }

    pub fn second(&self) -> SkewState {
        SkewState { z: self.z, y: self.y2 }
    }
}

fn with_z<T>(z: CirclePoint, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Numeric(format!("cocycle evaluation failed at z = {}: {e}", z.value())))
}

pub fn skew_step(state: SkewState, g: &Cocycle, base: &RotationSystem) -> Result<SkewState> {
    let y = with_z(state.z, g.apply(state.z, state.y, base))?;
    Ok(SkewState { z: base.step(state.z), y })
}

pub fn relative_step(state: RelState, g: &Cocycle, base: &RotationSystem) -> Result<RelState> {
    let m = with_z(state.z, g.resolve(state.z, base))?;
    Ok(RelState { z: base.step(state.z), y1: m.apply(state.y1), y2: m.apply(state.y2) })
}

/// Offset of size `< r` in either direction.
fn jitter(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    (rng.gen::<f64>() * 2.0 - 1.0) * r
}

fn wrap(y: f64) -> f64 {
    let f = y.rem_euclid(1.0);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn fiber_radius(space: FiberSpace, delta: f64) -> f64 {
    match space {
        FiberSpace::Circle => delta.min(0.5),
        FiberSpace::Projective => (delta / 2.0).min(0.5),
    }
}

/// The skew product over a rotation, with the max metric on `Z x Y`.
#[derive(Clone, Debug)]
pub struct SkewSystem {
    pub base: RotationSystem,
    pub cocycle: Cocycle,
}

impl SkewSystem {
    pub fn new(base: RotationSystem, cocycle: Cocycle) -> Self {
        SkewSystem { base, cocycle }
    }

    pub fn space(&self) -> FiberSpace {
        self.cocycle.space()
    }
}

impl DynamicalSystem for SkewSystem {
    type Point = SkewState;

    fn name(&self) -> String {
        format!("skew({}, {})", self.base.alpha().label(), self.space().name())
    }

    fn step(&self, p: &SkewState) -> Result<SkewState> {
        skew_step(*p, &self.cocycle, &self.base)
    }

    fn distance(&self, a: &SkewState, b: &SkewState) -> f64 {
        a.z.distance(b.z).max(self.space().distance(a.y, b.y))
    }

    fn diameter(&self) -> f64 {
        0.5f64.max(self.space().diameter())
    }

    fn observe(&self, p: &SkewState) -> Observation {
        Observation { z: p.z.value(), y1: p.y, y2: p.y }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> SkewState {
        SkewState { z: CirclePoint::from_units(rng.gen()), y: rng.gen() }
    }

    fn sample_near(&self, x: &SkewState, delta: f64, rng: &mut ChaCha8Rng) -> Option<SkewState> {
        let y = SkewState {
            z: CirclePoint::from_f64(x.z.value() + jitter(rng, delta.min(0.5))),
            y: wrap(x.y + jitter(rng, fiber_radius(self.space(), delta))),
        };
        (self.distance(x, &y) < delta).then_some(y)
    }
}

/// The relative product `T~_G(z, y1, y2) = (Sz, G_z y1, G_z y2)`.
#[derive(Clone, Debug)]
pub struct RelativeSystem {
    pub base: RotationSystem,
    pub cocycle: Cocycle,
}

impl RelativeSystem {
    pub fn new(base: RotationSystem, cocycle: Cocycle) -> Self {
        RelativeSystem { base, cocycle }
    }

    pub fn space(&self) -> FiberSpace {
        self.cocycle.space()
    }
}

impl DynamicalSystem for RelativeSystem {
    type Point = RelState;

    fn name(&self) -> String {
        format!("relative({}, {})", self.base.alpha().label(), self.space().name())
    }

    fn step(&self, p: &RelState) -> Result<RelState> {
        relative_step(*p, &self.cocycle, &self.base)
    }

    fn distance(&self, a: &RelState, b: &RelState) -> f64 {
        let s = self.space();
        a.z.distance(b.z).max(s.distance(a.y1, b.y1)).max(s.distance(a.y2, b.y2))
    }

    fn diameter(&self) -> f64 {
        0.5f64.max(self.space().diameter())
    }

    fn observe(&self, p: &RelState) -> Observation {
        Observation { z: p.z.value(), y1: p.y1, y2: p.y2 }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> RelState {
        RelState { z: CirclePoint::from_units(rng.gen()), y1: rng.gen(), y2: rng.gen() }
    }

    fn sample_near(&self, x: &RelState, delta: f64, rng: &mut ChaCha8Rng) -> Option<RelState> {
        let r = fiber_radius(self.space(), delta);
        let y = RelState {
            z: CirclePoint::from_f64(x.z.value() + jitter(rng, delta.min(0.5))),
            y1: wrap(x.y1 + jitter(rng, r)),
            y2: wrap(x.y2 + jitter(rng, r)),
        };
        (self.distance(x, &y) < delta).then_some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::{CircleHomeo, HomeoPath, Mat2, ParamMap};
    use std::sync::Arc;

    #[test]
    fn constant_steps() {
        let rot = RotationSystem::golden();
        let s = SkewState { z: CirclePoint::from_f64(0.2), y: 0.9 };
        let id = skew_step(s, &Cocycle::identity(FiberSpace::Circle), &rot).unwrap();
        assert_eq!(id.y, 0.9);
        assert_eq!(id.z, rot.step(s.z));
        let r = skew_step(s, &Cocycle::constant_rotation(0.25), &rot).unwrap();
        assert!((r.y - 0.15).abs() < 1e-15);
    }

    #[test]
    fn relative_product_projects_to_skew_product() {
        let rot = RotationSystem::golden();
        let g = CircleHomeo::new(vec![0.0, 0.25, 1.0], vec![0.3, 0.5, 1.3]).unwrap();
        let path = HomeoPath::new(vec![0.0, 1.0], vec![CircleHomeo::rotation(0.1), g]).unwrap();
        for cocycle in [
            Cocycle::Homeo { param: ParamMap::Cosine, path: Arc::new(path) },
            Cocycle::herman(2.0),
            Cocycle::constant_matrix(Mat2::diag(3.0, 1.0 / 3.0)),
        ] {
            let mut r = RelState { z: CirclePoint::from_f64(0.41), y1: 0.2, y2: 0.7 };
            let (mut a, mut b) = (r.first(), r.second());
            for _ in 0..500 {
                r = relative_step(r, &cocycle, &rot).unwrap();
                a = skew_step(a, &cocycle, &rot).unwrap();
                b = skew_step(b, &cocycle, &rot).unwrap();
                assert_eq!(r.first(), a);
                assert_eq!(r.second(), b);
            }
        }
    }

    #[test]
    fn diagonal_and_differences_are_preserved() {
        let rot = RotationSystem::golden();
        let mut r = RelState { z: CirclePoint::from_f64(0.1), y1: 0.3, y2: 0.3 };
        for _ in 0..1000 {
            r = relative_step(r, &Cocycle::herman(2.0), &rot).unwrap();
            assert_eq!(r.y1, r.y2);
        }
        let mut r = RelState { z: CirclePoint::from_f64(0.1), y1: 0.3, y2: 0.55 };
        for _ in 0..1000 {
            r = relative_step(r, &Cocycle::constant_rotation(0.3819), &rot).unwrap();
        }
        assert!((crate::base::circle_distance(r.y1 - r.y2, -0.25)).abs() < 1e-9);
    }
}
