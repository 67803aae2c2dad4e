//! The interface shared by every simulated system.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::base::{CirclePoint, RotationSystem};
use crate::error::Result;

/// Real coordinates of a state, fed to test functions.
///
/// Unused coordinates are zero: a base point only fills `z`, a skew state
/// fills `z` and `y1 = y2 = y`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Observation {
    pub z: f64,
    pub y1: f64,
    pub y2: f64,
}

/// A compact metric system `(X, T)` with a way to sample its points.
pub trait DynamicalSystem: Sync {
    type Point: Clone + Send + Sync + std::fmt::Debug;

    fn name(&self) -> String;

    fn step(&self, p: &Self::Point) -> Result<Self::Point>;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn diameter(&self) -> f64;

    fn observe(&self, p: &Self::Point) -> Observation;

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Point;

    /// A point at distance `< delta` from `x`, if one is found.
    fn sample_near(&self, x: &Self::Point, delta: f64, rng: &mut ChaCha8Rng) -> Option<Self::Point>;

    /// Pairs at distance `< delta` known to stay apart on average.
    fn adversarial_pairs(
        &self,
        _delta: f64,
        _count: usize,
        _rng: &mut ChaCha8Rng,
    ) -> Vec<(Self::Point, Self::Point)> {
        Vec::new()
    }

    /// `d(T^i x, T^i y)` for `i < n`.
    fn distance_sequence(&self, x: &Self::Point, y: &Self::Point, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        let (mut a, mut b) = (x.clone(), y.clone());
        for i in 0..n {
            out.push(self.distance(&a, &b));
            if i + 1 < n {
                a = self.step(&a)?;
                b = self.step(&b)?;
            }
        }
        Ok(out)
    }

    /// `T^i x` for `i < n`.
    fn orbit(&self, x: &Self::Point, n: usize) -> Result<Vec<Self::Point>> {
        let mut out = Vec::with_capacity(n);
        let mut p = x.clone();
        for i in 0..n {
            let next = if i + 1 < n { Some(self.step(&p)?) } else { None };
            out.push(p);
            match next {
                Some(q) => p = q,
                None => break,
            }
        }
        Ok(out)
    }
}

impl DynamicalSystem for RotationSystem {
    type Point = CirclePoint;

    fn name(&self) -> String {
        format!("rotation({})", self.alpha().label())
    }

    fn step(&self, p: &CirclePoint) -> Result<CirclePoint> {
        Ok(RotationSystem::step(self, *p))
    }

    fn distance(&self, a: &CirclePoint, b: &CirclePoint) -> f64 {
        a.distance(*b)
    }

    fn diameter(&self) -> f64 {
        0.5
    }

    fn observe(&self, p: &CirclePoint) -> Observation {
        Observation { z: p.value(), ..Default::default() }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> CirclePoint {
        CirclePoint::from_units(rng.gen())
    }

    fn sample_near(&self, x: &CirclePoint, delta: f64, rng: &mut ChaCha8Rng) -> Option<CirclePoint> {
        let r: f64 = rng.gen::<f64>() * delta.min(0.5);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let y = CirclePoint::from_f64(x.value() + sign * r);
        (x.distance(y) < delta).then_some(y)
    }

    /// Orbit distances are constant, so the sequence is filled directly.
    fn distance_sequence(&self, x: &CirclePoint, y: &CirclePoint, n: usize) -> Result<Vec<f64>> {
        Ok(vec![x.distance(*y); n])
    }
}
