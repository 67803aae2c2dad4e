//! Fiber spaces and single fiber maps.

use super::homeo::CircleHomeo;
use super::projective::{mobius_act, Mat2, ProjectivePoint};
use crate::base::circle_distance;

/// The fiber `Y`, with points encoded as reals in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberSpace {
    /// The circle `R/Z` with its arc metric (diameter 1/2).
    Circle,
    /// The projective line, `y = theta / pi`, with the angular metric
    /// normalised to diameter 1.
    Projective,
}

impl FiberSpace {
    pub fn distance(&self, a: f64, b: f64) -> f64 {
        match self {
            FiberSpace::Circle => circle_distance(a, b),
            FiberSpace::Projective => 2.0 * circle_distance(a, b),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            FiberSpace::Circle => 0.5,
            FiberSpace::Projective => 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FiberSpace::Circle => "circle",
            FiberSpace::Projective => "projective",
        }
    }
}

/// One homeomorphism of the fiber.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberMap {
    Mobius(Mat2),
    Homeo(CircleHomeo),
}

impl FiberMap {
    pub fn space(&self) -> FiberSpace {
        match self {
            FiberMap::Mobius(_) => FiberSpace::Projective,
            FiberMap::Homeo(_) => FiberSpace::Circle,
        }
    }

    pub fn apply(&self, y: f64) -> f64 {
        match self {
            FiberMap::Mobius(m) => mobius_act(m, ProjectivePoint::from_unit(y)).unit(),
            FiberMap::Homeo(h) => h.apply(y),
        }
    }

    pub fn apply_inverse(&self, y: f64) -> f64 {
        match self {
            FiberMap::Mobius(m) => mobius_act(&m.inverse(), ProjectivePoint::from_unit(y)).unit(),
            FiberMap::Homeo(h) => h.apply_inverse(y),
        }
    }
}
