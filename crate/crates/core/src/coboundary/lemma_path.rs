//! A continuous path `t -> h_t` through a condition-(A) family, held
//! constant on most of each parameter subinterval.

use super::family::{condition_a_family, ConditionAFamily, FiberArc};
use crate::error::{Error, Result};
use crate::skew::{CircleHomeo, HomeoPath};

#[derive(Clone, Debug)]
pub struct LemmaPath {
    pub path: HomeoPath,
    pub v: FiberArc,
    pub gamma: f64,
    pub family: ConditionAFamily,
}

/// Good parameters `s` in `[0, 1]` for `A + s B < C`.
fn half_line(a: f64, b: f64, c: f64) -> (f64, f64) {
    if b == 0.0 {
        if a < c {
            (0.0, 1.0)
        } else {
            (1.0, 0.0)
        }
    } else if b > 0.0 {
        (0.0, ((c - a) / b).min(1.0))
    } else {
        (((c - a) / b).max(0.0), 1.0)
    }
}

/// Measure of `{s in [0,1] : y in F_s(V)}` where `F_s = (1-s) G + s H`.
fn good_fraction(g: &CircleHomeo, h: &CircleHomeo, v: FiberArc, y: f64) -> f64 {
    let (a, b) = (v.start, v.start + v.len);
    let (ga, ha, gb, hb) = (g.lift(a), h.lift(a), g.lift(b), h.lift(b));
    let lo = ga.min(ha);
    let hi = gb.max(hb);
    let k0 = (lo - y).floor() as i64;
    let k1 = (hi - y).ceil() as i64;
    let mut total = 0.0;
    for k in k0..=k1 {
        let target = y + k as f64;
        // F_s(a) < target and target < F_s(b).
        let (l1, h1) = half_line(ga, ha - ga, target);
        let (l2, h2) = half_line(-gb, -(hb - gb), -target);
        let l = l1.max(l2);
        let r = h1.min(h2);
        if r > l {
            total += r - l;
        }
    }
    total.min(1.0)
}

impl LemmaPath {
    /// `λ{t : h_t^{-1}(y) ∉ V}`, summed segment by segment exactly.
    pub fn bad_measure(&self, y: f64) -> f64 {
        let knots = self.path.knots();
        let anchors = self.path.anchors();
        let mut bad = 0.0;
        for i in 0..knots.len() - 1 {
            let width = knots[i + 1] - knots[i];
            let good = good_fraction(&anchors[i], &anchors[i + 1], self.v, y);
            bad += width * (1.0 - good);
        }
        bad
    }

    /// Largest bad measure over `n` grid points `i / n`.
    pub fn max_bad_measure(&self, n: usize) -> f64 {
        (0..n).map(|i| self.bad_measure(i as f64 / n as f64)).fold(0.0, f64::max)
    }

    /// Lipschitz constant of `t -> h_t` on lifts.
    pub fn modulus_slope(&self) -> f64 {
        self.path.lipschitz_t()
    }
}

pub fn lemma_la_path(v: FiberArc, gamma: f64) -> Result<LemmaPath> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let family = condition_a_family(v, gamma / 2.0)?;
    let m = family.m();
    if m == 1 {
        let path = HomeoPath::constant(family.homeos[0].clone());
        return Ok(LemmaPath { path, v, gamma, family });
    }
    let mf = m as f64;
    let pad = gamma / (4.0 * mf);
    let mut knots = vec![0.0];
    let mut anchors = vec![family.homeos[0].clone()];
    for (i, h) in family.homeos.iter().enumerate() {
        knots.push(i as f64 / mf + pad);
        anchors.push(h.clone());
        knots.push((i + 1) as f64 / mf - pad);
        anchors.push(h.clone());
    }
    knots.push(1.0);
    anchors.push(family.homeos[m - 1].clone());
    let path = HomeoPath::new(knots, anchors)?;
    Ok(LemmaPath { path, v, gamma, family })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_bound_holds_and_matches_sampling() {
        let v = FiberArc::new(0.1, 0.3).unwrap();
        let lp = lemma_la_path(v, 0.2).unwrap();
        assert!(lp.max_bad_measure(1000) < 0.2);
        let ts = 10_000;
        for i in 0..25 {
            let y = i as f64 / 25.0 + 0.013;
            let sampled = (0..ts)
                .filter(|&j| !v.contains(lp.path.apply_inverse_at((j as f64 + 0.5) / ts as f64, y)))
                .count() as f64
                / ts as f64;
            assert!((sampled - lp.bad_measure(y)).abs() < 2e-3, "y={y}");
        }
    }

    #[test]
    fn transitions_are_moving_rotations() {
        let lp = lemma_la_path(FiberArc::new(0.4, 0.2).unwrap(), 0.1).unwrap();
        let m = lp.family.m() as f64;
        let gap = 0.1 / (2.0 * m);
        assert!((lp.modulus_slope() - (1.0 / m) / gap).abs() < 1e-6);
    }

    #[test]
    fn punctured_circle_gives_constant_identity() {
        let lp = lemma_la_path(FiberArc::punctured(0.123_456), 0.5).unwrap();
        assert_eq!(lp.path.lipschitz_t(), 0.0);
        assert_eq!(lp.max_bad_measure(100), 0.0);
    }
}
