//! Finite families of homeomorphisms that move every point out of `Y \ V`
//! most of the time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::skew::CircleHomeo;

/// Arcs shorter than this cannot be expanded reliably in `f64`.
pub const MIN_ARC: f64 = 1e-9;

pub(crate) fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// The open arc `(start, start + len)` of the fiber circle. `len = 1` is the
/// circle minus the point `start`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberArc {
    pub start: f64,
    pub len: f64,
}

impl FiberArc {
    pub fn new(start: f64, len: f64) -> Result<Self> {
        if !start.is_finite() || !(len > 0.0 && len <= 1.0) {
            return Err(Error::invalid(format!("arc length must lie in (0, 1], got {len}")));
        }
        Ok(FiberArc { start: frac(start), len })
    }

    pub fn centered(centre: f64, len: f64) -> Result<Self> {
        Self::new(centre - len / 2.0, len)
    }

    /// The circle with one point removed.
    pub fn punctured(point: f64) -> Self {
        FiberArc { start: frac(point), len: 1.0 }
    }

    pub fn is_punctured_circle(&self) -> bool {
        self.len >= 1.0
    }

    pub fn centre(&self) -> f64 {
        frac(self.start + self.len / 2.0)
    }

    pub fn contains(&self, y: f64) -> bool {
        let o = frac(y - self.start);
        o > 0.0 && o < self.len
    }
}

/// `h_1, ..., h_M` with `#{j : y in h_j(Y \ V)} <= eps M` for every `y`.
#[derive(Clone, Debug)]
pub struct ConditionAFamily {
    pub homeos: Vec<CircleHomeo>,
    pub v: FiberArc,
    pub eps: f64,
    /// The expanding map `g_V`; `h_j = R_{j/M} ∘ g_V`.
    pub expander: CircleHomeo,
}

impl ConditionAFamily {
    pub fn m(&self) -> usize {
        self.homeos.len()
    }

    /// Number of `j` with `y` outside `h_j(V)`.
    pub fn violations(&self, y: f64) -> usize {
        let (a, l) = (self.v.start, self.v.len);
        self.homeos
            .iter()
            .filter(|h| {
                let lo = h.lift(a);
                let len = h.lift(a + l) - lo;
                let o = frac(y - lo);
                !(o > 0.0 && o < len)
            })
            .count()
    }

    /// Largest violation fraction over `n` midpoints `(i + 1/2) / n`.
    pub fn max_violation_fraction(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| self.violations((i as f64 + 0.5) / n as f64) as f64 / self.m() as f64)
            .fold(0.0, f64::max)
    }
}

/// Piecewise-linear map fixing `0`, sending `(-l/2, l/2)` onto `(-L/2, L/2)`.
fn expander_at_zero(l: f64, target: f64) -> Result<CircleHomeo> {
    CircleHomeo::new(
        vec![0.0, l / 2.0, 1.0 - l / 2.0, 1.0],
        vec![0.0, target / 2.0, 1.0 - target / 2.0, 1.0],
    )
}

pub fn condition_a_family(v: FiberArc, eps: f64) -> Result<ConditionAFamily> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if !(v.len >= MIN_ARC) {
        return Err(Error::invalid(format!("arc of length {} is below resolution", v.len)));
    }
    if eps >= 1.0 || v.is_punctured_circle() {
        let id = CircleHomeo::identity();
        return Ok(ConditionAFamily { homeos: vec![id.clone()], v, eps, expander: id });
    }
    let m = (4.0 / eps).ceil() as usize;
    let target = 1.0 - eps / 2.0;
    let c = v.centre();
    let g0 = expander_at_zero(v.len, target)?;
    let g = CircleHomeo::rotation(c).compose(&g0.compose(&CircleHomeo::rotation(-c))?)?;
    let homeos = (1..=m).map(|j| g.post_rotate(j as f64 / m as f64)).collect();
    Ok(ConditionAFamily { homeos, v, eps, expander: g })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_for_an_arc_of_length_three_tenths() {
        let v = FiberArc::new(0.2, 0.3).unwrap();
        let fam = condition_a_family(v, 0.1).unwrap();
        assert_eq!(fam.m(), 40);
        assert!(fam.max_violation_fraction(1000) <= 0.1);
        // Each image of V is an arc of length 1 - eps/2.
        for h in &fam.homeos {
            let len = h.lift(0.5) - h.lift(0.2);
            assert!((len - 0.95).abs() < 1e-12);
        }
    }

    #[test]
    fn violation_counts_match_direct_membership() {
        let v = FiberArc::new(0.9, 0.25).unwrap();
        let fam = condition_a_family(v, 0.2).unwrap();
        for i in 0..200 {
            let y = (i as f64 + 0.37) / 200.0;
            let direct = fam.homeos.iter().filter(|h| !v.contains(h.apply_inverse(y))).count();
            assert_eq!(direct, fam.violations(y));
        }
    }

    #[test]
    fn punctured_circle_and_vacuous_eps() {
        let fam = condition_a_family(FiberArc::punctured(0.3), 0.05).unwrap();
        assert_eq!(fam.m(), 1);
        assert_eq!(fam.max_violation_fraction(1000), 0.0);
        let fam = condition_a_family(FiberArc::new(0.0, 0.1).unwrap(), 1.0).unwrap();
        assert_eq!(fam.m(), 1);
        assert!(condition_a_family(FiberArc { start: 0.0, len: 1e-12 }, 0.1).is_err());
    }
}
