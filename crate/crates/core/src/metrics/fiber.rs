//! Diameters of the fibers of a factor map.

use crate::base::{sturmian_fiber, CirclePoint, RotationSystem, SymbolicPoint, SymbolicSystem, ThueMorsePoint};
use crate::error::{Error, Result};
use crate::skew::FiberSpace;
use crate::system::DynamicalSystem;

/// A factor map whose fibers can be listed or approximated by a net.
#[derive(Clone, Debug)]
pub enum FactorMap {
    /// `(z, y) -> z` on a skew product; every fiber is a copy of `Y`.
    SkewProjection(FiberSpace),
    /// Sturmian subshift onto the rotation; ties are resolved over orbit
    /// indices `|n| <= window`.
    SturmianCoding { rot: RotationSystem, window: u64 },
    /// Thue–Morse onto its quotient by complementation. A sample `z` in
    /// `[0, 1)` selects the point with offset `floor(z * 2^40)`.
    ThueMorseComplement,
    /// A map with no fiber description.
    Opaque(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberDiameterProfile {
    /// `(z, diam of the fiber over z)`.
    pub samples: Vec<(f64, f64)>,
    pub inf_estimate: f64,
}

/// Diameter of a fiber given as an explicit finite set.
fn set_diameter<S: DynamicalSystem>(sys: &S, pts: &[S::Point]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(sys.distance(a, b));
        }
    }
    d
}

pub fn fiber_diameter_profile(map: &FactorMap, z_samples: &[f64], resolution: usize) -> Result<FiberDiameterProfile> {
    if z_samples.is_empty() {
        return Err(Error::invalid("no base samples"));
    }
    let samples: Vec<(f64, f64)> = match map {
        FactorMap::SkewProjection(space) => {
            // The fiber metrics are rotation invariant, so the diameter of
            // an even net is the largest distance from its first point.
            let res = (resolution.max(2) + 1) & !1;
            let diam = (0..res)
                .map(|j| space.distance(0.0, j as f64 / res as f64))
                .fold(0.0, f64::max);
            z_samples.iter().map(|&z| (z, diam)).collect()
        }
        FactorMap::SturmianCoding { rot, window } => {
            let sys = SymbolicSystem::Sturmian(rot.clone());
            z_samples
                .iter()
                .map(|&z| {
                    let f = sturmian_fiber(rot, CirclePoint::from_f64(z), *window);
                    (z, set_diameter(&sys, &f.points))
                })
                .collect()
        }
        FactorMap::ThueMorseComplement => {
            let sys = SymbolicSystem::ThueMorse;
            z_samples
                .iter()
                .map(|&z| {
                    let offset = (z.rem_euclid(1.0) * (1u64 << 40) as f64) as i64;
                    let p = ThueMorsePoint::new(offset);
                    let pts = [SymbolicPoint::ThueMorse(p), SymbolicPoint::ThueMorse(p.complemented())];
                    (z, set_diameter(&sys, &pts))
                })
                .collect()
        }
        FactorMap::Opaque(name) => {
            return Err(Error::Unsupported(format!("factor map {name:?} does not expose its fibers")));
        }
    };
    let inf_estimate = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    Ok(FiberDiameterProfile { samples, inf_estimate })
}
