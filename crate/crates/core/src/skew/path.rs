//! Continuous one-parameter families `t -> h_t` of circle homeomorphisms.

use super::homeo::CircleHomeo;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
struct Segment {
    plateau: bool,
    xs: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
}

/// Anchors `h_{t_0}, ..., h_{t_K}` on `0 = t_0 < ... < t_K = 1` with the
/// lifts interpolated linearly in between.
#[derive(Clone, Debug, PartialEq)]
pub struct HomeoPath {
    knots: Vec<f64>,
    homeos: Vec<CircleHomeo>,
    segments: Vec<Segment>,
}

impl HomeoPath {
    pub fn new(knots: Vec<f64>, homeos: Vec<CircleHomeo>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != homeos.len() {
            return Err(Error::invalid("a path needs at least two anchors, one per knot"));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 || knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("path knots must increase strictly from 0 to 1"));
        }
        let segments = homeos
            .windows(2)
            .map(|w| {
                let xs = w[0].union_breakpoints(&w[1]);
                let g = xs.iter().map(|&x| w[0].lift(x)).collect();
                let h = xs.iter().map(|&x| w[1].lift(x)).collect();
                Segment { plateau: w[0] == w[1], xs, g, h }
            })
            .collect();
        Ok(HomeoPath { knots, homeos, segments })
    }

    /// The constant path at one map.
    pub fn constant(h: CircleHomeo) -> Self {
        Self::new(vec![0.0, 1.0], vec![h.clone(), h]).expect("valid constant path")
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn anchors(&self) -> &[CircleHomeo] {
        &self.homeos
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn is_plateau(&self, i: usize) -> bool {
        self.segments[i].plateau
    }

    /// Segment index and the interpolation weight of `t` (clamped to `[0, 1]`).
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let t = t.clamp(0.0, 1.0);
        let i = self.knots.partition_point(|&k| k <= t).saturating_sub(1).min(self.segments.len() - 1);
        let s = (t - self.knots[i]) / (self.knots[i + 1] - self.knots[i]);
        (i, s.clamp(0.0, 1.0))
    }

    pub fn at(&self, t: f64) -> CircleHomeo {
        let (i, s) = self.locate(t);
        if self.segments[i].plateau || s == 0.0 {
            return self.homeos[i].clone();
        }
        if s == 1.0 {
            return self.homeos[i + 1].clone();
        }
        self.homeos[i].interpolate_lifts(&self.homeos[i + 1], s)
    }

    pub fn lift_at(&self, t: f64, x: f64) -> f64 {
        let (i, s) = self.locate(t);
        if self.segments[i].plateau {
            return self.homeos[i].lift(x);
        }
        (1.0 - s) * self.homeos[i].lift(x) + s * self.homeos[i + 1].lift(x)
    }

    pub fn lift_inverse_at(&self, t: f64, y: f64) -> f64 {
        let (i, s) = self.locate(t);
        let seg = &self.segments[i];
        if seg.plateau {
            return self.homeos[i].lift_inverse(y);
        }
        let val = |j: usize| (1.0 - s) * seg.g[j] + s * seg.h[j];
        let k = (y - val(0)).floor();
        let v = y - k;
        let last = seg.xs.len() - 1;
        // Largest j with val(j) <= v.
        let (mut lo, mut hi) = (0usize, last);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if val(mid) <= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (y0, y1) = (val(lo), val(lo + 1));
        seg.xs[lo] + (seg.xs[lo + 1] - seg.xs[lo]) * ((v - y0) / (y1 - y0)) + k
    }

    pub fn apply_at(&self, t: f64, x: f64) -> f64 {
        let v = self.lift_at(t, x);
        let f = v - v.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }

    pub fn apply_inverse_at(&self, t: f64, y: f64) -> f64 {
        let v = self.lift_inverse_at(t, y);
        let f = v - v.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }

    /// Lipschitz constant of `t -> F_t` in the sup norm on lifts.
    pub fn lipschitz_t(&self) -> f64 {
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.plateau)
            .map(|(i, s)| {
                let d = s.g.iter().zip(&s.h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                d / (self.knots[i + 1] - self.knots[i])
            })
            .fold(0.0, f64::max)
    }

    /// Smallest slope of any `h_t`; interpolation never goes below the anchors.
    pub fn min_slope(&self) -> f64 {
        self.homeos.iter().map(|h| h.min_slope()).fold(f64::INFINITY, f64::min)
    }

    /// Lipschitz constant shared by every `h_t^{-1}`.
    pub fn inverse_lipschitz(&self) -> f64 {
        1.0 / self.min_slope()
    }

    /// Bound on `sup_y d(h_t^{-1} h_s (y), y)` for `|t - s| <= eta`.
    pub fn modulus(&self, eta: f64) -> f64 {
        self.inverse_lipschitz() * self.lipschitz_t() * eta
    }
}
