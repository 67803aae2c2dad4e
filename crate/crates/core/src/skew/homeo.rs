//! Orientation-preserving piecewise-linear circle homeomorphisms.
//!
//! A map is stored by its lift `F` on `[0, 1]`: breakpoints
//! `0 = x_0 < ... < x_m = 1` with strictly increasing values and
//! `F(1) = F(0) + 1`, extended to `R` by `F(x + k) = F(x) + k`.

use crate::error::{Error, Result};

/// Segments whose slope falls below this are rejected.
pub const MIN_SLOPE: f64 = 1e-12;
/// Breakpoints closer than this are merged.
const MERGE_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct CircleHomeo {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl CircleHomeo {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::invalid("a lift needs at least two matching breakpoints"));
        }
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 {
            return Err(Error::invalid("lift breakpoints must start at 0 and end at 1"));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite breakpoint"));
        }
        let m = xs.len() - 1;
        if ((ys[m] - ys[0]) - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("lift must gain exactly 1 over [0,1], gains {}", ys[m] - ys[0])));
        }
        let mut ys = ys;
        ys[m] = ys[0] + 1.0;
        let h = CircleHomeo { xs, ys };
        if h.xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("lift breakpoints must be strictly increasing"));
        }
        let s = h.min_slope();
        if !(s >= MIN_SLOPE) {
            return Err(Error::SlopeUnderflow(s));
        }
        Ok(h)
    }

    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    pub fn rotation(beta: f64) -> Self {
        CircleHomeo { xs: vec![0.0, 1.0], ys: vec![beta, beta + 1.0] }
    }

    pub fn breakpoints(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Adds an integer to the lift (same circle map).
    pub fn with_lift_shift(mut self, k: f64) -> Self {
        for y in &mut self.ys {
            *y += k;
        }
        self
    }

    /// `R_beta ∘ self`, keeping the lift unreduced.
    pub fn post_rotate(&self, beta: f64) -> Self {
        self.clone().with_lift_shift(beta)
    }

    pub fn lift_at_zero(&self) -> f64 {
        self.ys[0]
    }

    fn segment(&self, x: f64) -> usize {
        // Index i with xs[i] <= x < xs[i+1].
        let i = self.xs.partition_point(|&v| v <= x);
        i.saturating_sub(1).min(self.xs.len() - 2)
    }

    /// `F(x)` for real `x`.
    pub fn lift(&self, x: f64) -> f64 {
        let k = x.floor();
        let u = x - k;
        let i = self.segment(u);
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        y0 + (y1 - y0) * ((u - x0) / (x1 - x0)) + k
    }

    pub fn apply(&self, x: f64) -> f64 {
        frac(self.lift(x))
    }

    /// `F^{-1}(y)` for real `y`.
    pub fn lift_inverse(&self, y: f64) -> f64 {
        let k = (y - self.ys[0]).floor();
        let v = y - k;
        let i = self.ys.partition_point(|&w| w <= v).saturating_sub(1).min(self.ys.len() - 2);
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        x0 + (x1 - x0) * ((v - y0) / (y1 - y0)) + k
    }

    pub fn apply_inverse(&self, y: f64) -> f64 {
        frac(self.lift_inverse(y))
    }

    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
    }

    pub fn min_slope(&self) -> f64 {
        self.slopes().fold(f64::INFINITY, f64::min)
    }

    pub fn max_slope(&self) -> f64 {
        self.slopes().fold(0.0, f64::max)
    }

    fn from_samples(mut pts: Vec<(f64, f64)>) -> Result<Self> {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut xs: Vec<f64> = Vec::with_capacity(pts.len());
        let mut ys: Vec<f64> = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            if let Some(&last) = xs.last() {
                if x - last < MERGE_TOL && x != 1.0 {
                    continue;
                }
                if x == 1.0 && x - last < MERGE_TOL && xs.len() > 1 {
                    xs.pop();
                    ys.pop();
                }
            }
            xs.push(x);
            ys.push(y);
        }
        Self::new(xs, ys)
    }

    /// `self ∘ h`.
    pub fn compose(&self, h: &CircleHomeo) -> Result<CircleHomeo> {
        let lo = h.ys[0];
        let hi = h.ys[h.ys.len() - 1];
        let mut pts: Vec<(f64, f64)> = h.xs.iter().map(|&x| (x, self.lift(h.lift(x)))).collect();
        for &g in &self.xs[..self.xs.len() - 1] {
            let mut u = g + (lo - g).ceil();
            while u < hi {
                if u > lo {
                    let x = h.lift_inverse(u);
                    if x > 0.0 && x < 1.0 {
                        pts.push((x, self.lift(u)));
                    }
                }
                u += 1.0;
            }
        }
        let mut out = Self::from_samples(pts)?;
        let m = out.ys.len() - 1;
        out.ys[m] = out.ys[0] + 1.0;
        Ok(out)
    }

    pub fn inverse(&self) -> Result<CircleHomeo> {
        let base = self.lift_inverse(0.0);
        let mut pts: Vec<(f64, f64)> = vec![(0.0, base), (1.0, base + 1.0)];
        for &y in &self.ys[..self.ys.len() - 1] {
            let v = frac(y);
            if v > 0.0 {
                pts.push((v, self.lift_inverse(v)));
            }
        }
        Self::from_samples(pts)
    }

    /// All breakpoints of `self` and `other` in `[0, 1]`.
    pub fn union_breakpoints(&self, other: &CircleHomeo) -> Vec<f64> {
        let mut xs: Vec<f64> = self.xs.iter().chain(&other.xs).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// `sup_x d(self(x), other(x))` with the circle distance, exactly.
    pub fn sup_distance(&self, other: &CircleHomeo) -> f64 {
        let xs = self.union_breakpoints(other);
        let diffs: Vec<f64> = xs.iter().map(|&x| self.lift(x) - other.lift(x)).collect();
        let mut best = 0.0f64;
        for (i, &d) in diffs.iter().enumerate() {
            let f = frac(d);
            best = best.max(f.min(1.0 - f));
            if i + 1 < diffs.len() {
                // Crossing a half-integer between breakpoints means distance 1/2.
                let (a, b) = (d - 0.5, diffs[i + 1] - 0.5);
                if a.floor() != b.floor() {
                    return 0.5;
                }
            }
        }
        best
    }

    /// `sup_x |F(x) - G(x)|` for the lifts themselves.
    pub fn sup_lift_difference(&self, other: &CircleHomeo) -> f64 {
        self.union_breakpoints(other)
            .iter()
            .map(|&x| (self.lift(x) - other.lift(x)).abs())
            .fold(0.0, f64::max)
    }

    /// The lift `(1 - s) F + s G`.
    pub fn interpolate_lifts(&self, other: &CircleHomeo, s: f64) -> CircleHomeo {
        let xs = self.union_breakpoints(other);
        let ys = xs.iter().map(|&x| (1.0 - s) * self.lift(x) + s * other.lift(x)).collect();
        let mut out = CircleHomeo { xs, ys };
        let m = out.ys.len() - 1;
        out.ys[m] = out.ys[0] + 1.0;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;
    use rand::Rng;

    pub(crate) fn random_homeo(rng: &mut impl Rng, m: usize) -> CircleHomeo {
        let mut xs: Vec<f64> = (0..m - 1).map(|_| rng.gen::<f64>()).collect();
        xs.push(0.0);
        xs.push(1.0);
        xs.sort_by(f64::total_cmp);
        let mut ys: Vec<f64> = (0..m - 1).map(|_| rng.gen::<f64>()).collect();
        ys.push(0.0);
        ys.push(1.0);
        ys.sort_by(f64::total_cmp);
        let shift: f64 = rng.gen::<f64>() * 3.0 - 1.5;
        CircleHomeo::new(xs, ys.into_iter().map(|y| y + shift).collect()).unwrap()
    }

    #[test]
    fn rotations_compose() {
        let g = CircleHomeo::rotation(0.3).compose(&CircleHomeo::rotation(0.45)).unwrap();
        assert!(g.sup_distance(&CircleHomeo::rotation(0.75)) < 1e-15);
        assert!((CircleHomeo::rotation(0.1).sup_distance(&CircleHomeo::rotation(0.9)) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn inverse_is_inverse() {
        let mut rng = task_rng(3, 0);
        for _ in 0..50 {
            let g = random_homeo(&mut rng, 10);
            let gi = g.inverse().unwrap();
            let id = g.compose(&gi).unwrap();
            assert!(id.sup_distance(&CircleHomeo::identity()) < 1e-12);
            let id = gi.compose(&g).unwrap();
            assert!(id.sup_distance(&CircleHomeo::identity()) < 1e-12);
            for j in 0..100 {
                let y = j as f64 / 100.0;
                let d = crate::base::circle_distance(g.apply(g.apply_inverse(y)), y);
                assert!(d < 1e-12);
            }
        }
    }

    #[test]
    fn composition_is_pointwise_and_bounded() {
        let mut rng = task_rng(4, 0);
        for _ in 0..50 {
            let g = random_homeo(&mut rng, 10);
            let h = random_homeo(&mut rng, 10);
            let gh = g.compose(&h).unwrap();
            assert!(gh.len() <= g.len() + h.len());
            let back = gh.compose(&h.inverse().unwrap()).unwrap();
            for i in 0..10_000 {
                let x = i as f64 / 10_000.0;
                assert!(crate::base::circle_distance(gh.apply(x), g.apply(h.apply(x))) < 1e-10);
                assert!(crate::base::circle_distance(back.apply(x), g.apply(x)) < 1e-10);
            }
        }
    }

    #[test]
    fn sup_distance_is_exact_on_a_grid_oracle() {
        let mut rng = task_rng(5, 0);
        for _ in 0..20 {
            let g = random_homeo(&mut rng, 6);
            let h = random_homeo(&mut rng, 6);
            let exact = g.sup_distance(&h);
            let grid = (0..=20_000)
                .map(|i| crate::base::circle_distance(g.apply(i as f64 / 20_000.0), h.apply(i as f64 / 20_000.0)))
                .fold(0.0, f64::max);
            assert!(exact >= grid - 1e-12 && exact - grid < 1e-3, "{exact} {grid}");
        }
    }

    #[test]
    fn slope_underflow_is_reported() {
        let r = CircleHomeo::new(vec![0.0, 0.5, 1.0], vec![0.0, 1e-14, 1.0]);
        assert!(matches!(r, Err(Error::SlopeUnderflow(_))));
    }
}
