//! The parameter map `theta`: a CDF on the tower base, copied up the
//! columns, then averaged over `N` backward steps.

use crate::base::{build_rokhlin_tower, Alpha, CirclePoint, RokhlinTower, RotationSystem, TowerSlot};
use crate::error::{Error, Result};
use crate::base::tower::TowerLayout;

/// Everything needed to rebuild a [`ThetaMap`] bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaParams {
    /// Rotation number in [`Alpha::to_spec`] form.
    pub alpha: String,
    pub n: u64,
    /// Tower leak bound.
    pub gamma: f64,
}

/// A maximal stretch of the orbit on which `theta_tilde` is constant:
/// it holds at `w - i alpha` for `i <= back` and `w + i alpha` for `i <= fwd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub value: f64,
    pub back: u128,
    pub fwd: u128,
}

#[derive(Clone, Copy, Debug)]
struct Place {
    arc: usize,
    offset: u128,
    back: u128,
    fwd: u128,
}

#[derive(Clone, Debug)]
pub struct ThetaMap {
    params: ThetaParams,
    rot: RotationSystem,
    tower: RokhlinTower,
    /// Margin kept at each end of every level arc for the interpolation.
    zeta: u128,
    /// Cumulative core length before each base arc; one extra entry at the end.
    core_cum: Vec<u128>,
    seg_len: Vec<u128>,
}

pub fn build_theta(tower: &RokhlinTower, base: &RotationSystem, n: u64) -> Result<ThetaMap> {
    if n < 2 {
        return Err(Error::invalid("theta needs N >= 2"));
    }
    if tower.n != n || tower.height != (n as u128) * (n as u128) {
        return Err(Error::invalid(format!("tower of height {} does not match N = {n}", tower.height)));
    }
    if !matches!(tower.layout, TowerLayout::TwoTower { .. }) || tower.alpha_units() != base.alpha_units() {
        return Err(Error::invalid("tower was not built over this rotation"));
    }
    let min_len = tower.base_arcs.iter().map(|a| a.len).min().unwrap_or(0);
    let zeta = (min_len >> 24).max(1);
    if min_len <= 2 * zeta {
        return Err(Error::Precision { required_q: 0, available_bits: base.alpha().precision_bits() });
    }
    let mut core_cum = Vec::with_capacity(tower.base_arcs.len() + 1);
    let mut acc = 0u128;
    core_cum.push(0);
    for a in &tower.base_arcs {
        acc += a.len - 2 * zeta;
        core_cum.push(acc);
    }
    let seg_len = (0..tower.base_arcs.len()).map(|j| tower.segment_len(j)).collect();
    Ok(ThetaMap {
        params: ThetaParams { alpha: base.alpha().to_spec(), n, gamma: tower.gamma },
        rot: base.clone(),
        tower: tower.clone(),
        zeta,
        core_cum,
        seg_len,
    })
}

impl ThetaMap {
    pub fn from_params(p: &ThetaParams) -> Result<Self> {
        let rot = RotationSystem::new(Alpha::from_spec(&p.alpha)?)?;
        let tower = build_rokhlin_tower(&rot, p.n, p.gamma)?;
        build_theta(&tower, &rot, p.n)
    }

    pub fn params(&self) -> ThetaParams {
        self.params.clone()
    }

    pub fn n(&self) -> u64 {
        self.params.n
    }

    pub fn tower(&self) -> &RokhlinTower {
        &self.tower
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rot
    }

    /// Bound on the Kolmogorov distance between the push-forward of the
    /// normalised measure on `K` and Lebesgue: the margin mass fraction.
    pub fn ks_bound(&self) -> f64 {
        let total: u128 = self.tower.base_arcs.iter().map(|a| a.len).sum();
        let margins = 2 * self.zeta * self.tower.base_arcs.len() as u128;
        margins as f64 / total as f64
    }

    fn place(&self, w: CirclePoint) -> Place {
        let (arc, level, base_point) = match self.tower.slot(w) {
            TowerSlot::Covered { arc, level, base_point } | TowerSlot::Leak { arc, level, base_point } => {
                (arc, level, base_point)
            }
        };
        let offset = self.tower.base_arcs[arc].offset(base_point);
        Place { arc, offset, back: level, fwd: self.seg_len[arc] - 1 - level }
    }

    fn core_value(&self, cum: u128) -> f64 {
        cum as f64 / self.core_cum[self.core_cum.len() - 1] as f64
    }

    pub fn run_at(&self, w: CirclePoint) -> Run {
        let p = self.place(w);
        let len = self.tower.base_arcs[p.arc].len;
        let z = self.zeta;
        if p.offset >= z && p.offset < len - z {
            let value = self.core_value(self.core_cum[p.arc] + (p.offset - z));
            return Run { value, back: p.back, fwd: p.fwd };
        }
        // Linear across [B - zeta, B + zeta] around the level boundary B.
        let (left, right, t, nb) = if p.offset < z {
            let nb = self.place(w.sub_units(p.offset).sub_units(1));
            let left = self.core_value(self.core_cum[nb.arc + 1]);
            let right = self.core_value(self.core_cum[p.arc]);
            (left, right, (z + p.offset) as f64 / (2 * z) as f64, nb)
        } else {
            let nb = self.place(w.add_units(len - p.offset));
            let left = self.core_value(self.core_cum[p.arc + 1]);
            let right = self.core_value(self.core_cum[nb.arc]);
            (left, right, (p.offset - (len - z)) as f64 / (2 * z) as f64, nb)
        };
        Run { value: left + (right - left) * t, back: p.back.min(nb.back), fwd: p.fwd.min(nb.fwd) }
    }

    pub fn theta_tilde(&self, w: CirclePoint) -> f64 {
        self.run_at(w).value
    }

    /// `(1/N) sum_{i<N} theta_tilde(z - i alpha)`.
    pub fn theta(&self, z: CirclePoint) -> f64 {
        let n = self.params.n as u128;
        let a = self.rot.alpha_units();
        let mut w = z;
        let mut left = n;
        let mut sum = 0.0;
        while left > 0 {
            let r = self.run_at(w);
            let take = (r.back + 1).min(left);
            sum += r.value * take as f64;
            left -= take;
            w = w.sub_units(take.wrapping_mul(a));
        }
        sum / n as f64
    }

    /// Runs covering `count` consecutive orbit points from `w` on, as
    /// `(length, value)` pairs.
    pub fn forward_runs(&self, w: CirclePoint, count: u128) -> Vec<(u128, f64)> {
        let a = self.rot.alpha_units();
        let mut out = Vec::new();
        let mut w = w;
        let mut left = count;
        while left > 0 {
            let r = self.run_at(w);
            let take = (r.fwd + 1).min(left);
            out.push((take, r.value));
            left -= take;
            w = w.add_units(take.wrapping_mul(a));
        }
        out
    }

    /// Largest `|theta(Sz) - theta(z)|` over the given points.
    pub fn max_increment(&self, zs: &[CirclePoint]) -> f64 {
        zs.iter()
            .map(|&z| (self.theta(self.rot.step(z)) - self.theta(z)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;
    use rand::Rng;

    fn small() -> ThetaMap {
        let rot = RotationSystem::golden();
        let tower = build_rokhlin_tower(&rot, 6, 0.1).unwrap();
        build_theta(&tower, &rot, 6).unwrap()
    }

    #[test]
    fn runs_agree_with_pointwise_values() {
        let t = small();
        let a = t.rot.alpha_units();
        let mut rng = task_rng(11, 0);
        for _ in 0..300 {
            let w = CirclePoint::from_units(rng.gen());
            let r = t.run_at(w);
            let back = r.back.min(50);
            let fwd = r.fwd.min(50);
            for i in 0..=back {
                assert_eq!(t.theta_tilde(w.sub_units(i.wrapping_mul(a))), r.value);
            }
            for i in 0..=fwd {
                assert_eq!(t.theta_tilde(w.add_units(i.wrapping_mul(a))), r.value);
            }
        }
    }

    #[test]
    fn theta_tilde_is_continuous_and_onto() {
        let t = small();
        let a = t.rot.alpha_units();
        let mut rng = task_rng(12, 0);
        // Across level boundaries, including every image of the base arcs.
        let mut edges: Vec<CirclePoint> = Vec::new();
        for k in &t.tower.base_arcs {
            for lvl in 0..t.tower.height + 3 {
                edges.push(k.start.add_units(lvl.wrapping_mul(a)));
                edges.push(k.end().add_units(lvl.wrapping_mul(a)));
            }
        }
        edges.extend((0..2000).map(|_| CirclePoint::from_units(rng.gen())));
        for w in edges {
            let d = (t.theta_tilde(w) - t.theta_tilde(w.sub_units(1))).abs();
            assert!(d < 1e-9, "jump {d} at {w:?}");
        }
        let vals: Vec<f64> = (0..100_000).map(|_| t.theta_tilde(CirclePoint::from_units(rng.gen()))).collect();
        let lo = vals.iter().copied().fold(1.0, f64::min);
        let hi = vals.iter().copied().fold(0.0, f64::max);
        assert!(lo < 1e-3 && hi > 1.0 - 1e-3 && lo >= 0.0 && hi <= 1.0);
    }

    #[test]
    fn single_arc_base_is_affine() {
        let t = small();
        let k = t.tower.base_arcs[0];
        let total: u128 = t.tower.base_arcs.iter().map(|a| a.len).sum();
        for i in 1..100u128 {
            let o = k.len / 100 * i;
            let v = t.theta_tilde(k.start.add_units(o));
            assert!((v - o as f64 / total as f64).abs() < 1e-6);
        }
        assert!(t.ks_bound() < 1e-6);
    }

    #[test]
    fn averaged_increment_is_small() {
        let t = small();
        let zs: Vec<CirclePoint> = (0..10_000).map(|i| CirclePoint::from_f64(i as f64 / 10_000.0)).collect();
        assert!(t.max_increment(&zs) <= 2.0 / 6.0 + 1e-12);
        let direct = |z: CirclePoint| {
            (0..6u128).map(|i| t.theta_tilde(z.sub_units(i.wrapping_mul(t.rot.alpha_units())))).sum::<f64>() / 6.0
        };
        for &z in zs.iter().step_by(97) {
            assert!((t.theta(z) - direct(z)).abs() < 1e-12);
        }
    }

    #[test]
    fn rebuild_from_params_is_identical() {
        let t = small();
        let u = ThetaMap::from_params(&t.params()).unwrap();
        for i in 0..1000 {
            let z = CirclePoint::from_f64(i as f64 / 1000.0);
            assert_eq!(t.theta(z).to_bits(), u.theta(z).to_bits());
        }
        let rot = RotationSystem::golden();
        let tower = build_rokhlin_tower(&rot, 6, 0.1).unwrap();
        assert!(build_theta(&tower, &rot, 5).is_err());
    }
}
