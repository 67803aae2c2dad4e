//! Kakutani–Rokhlin towers for circle rotations.
//!
//! At continued-fraction scale `k` the circle splits into two towers over
//! the arcs `J1` (between `0` and `q_{k-1} alpha`, height `q_k`) and `J2`
//! (between `0` and `q_k alpha`, height `q_{k-1}`). Grouping each tower's
//! levels into blocks of `N^2` and keeping the block-start levels gives a
//! set `K` whose first `N^2` images are pairwise disjoint.

use super::circle::{units_to_f64, Arc, CirclePoint, UNITS_PER_TURN};
use super::rotation::RotationSystem;
use crate::error::{Error, Result};

/// Arc enumerations larger than this are checked structurally instead.
const ENUMERATION_LIMIT: u128 = 1 << 22;

/// `q alpha` reduced mod 1, as a signed displacement from 0.
fn delta(q: u128, alpha: u128) -> u128 {
    q.wrapping_mul(alpha)
}

/// The arc between 0 and `d = q_j alpha mod 1`, which lies to the right of
/// 0 for even `j` and to the left for odd `j`.
fn arc_toward(d: u128, j: usize) -> Arc {
    if j % 2 == 0 {
        Arc::new(CirclePoint::ZERO, d)
    } else {
        Arc::new(CirclePoint::from_units(d), d.wrapping_neg())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    First,
    Second,
}

/// The two-tower partition at one scale.
#[derive(Clone, Debug)]
pub struct KrScale {
    pub k: usize,
    pub q_k: u128,
    pub q_km1: u128,
    /// `q_k alpha mod 1` in units.
    pub delta_k: u128,
    pub delta_km1: u128,
    /// Base of the tall tower (height `q_k`).
    pub base1: Arc,
    /// Base of the short tower (height `q_{k-1}`).
    pub base2: Arc,
}

impl KrScale {
    fn new(rot: &RotationSystem, k: usize) -> Option<Self> {
        let cf = rot.continued_fraction();
        let q_k = cf.q(k)?;
        let q_km1 = cf.q(k - 1)?;
        let a = rot.alpha_units();
        let delta_k = delta(q_k, a);
        let delta_km1 = delta(q_km1, a);
        Some(KrScale {
            k,
            q_k,
            q_km1,
            delta_k,
            delta_km1,
            base1: arc_toward(delta_km1, k - 1),
            base2: arc_toward(delta_k, k),
        })
    }

    pub fn in_base(&self, x: CirclePoint) -> bool {
        self.base1.contains(x) || self.base2.contains(x)
    }

    pub fn height(&self, c: Column) -> u128 {
        match c {
            Column::First => self.q_k,
            Column::Second => self.q_km1,
        }
    }

    pub fn base(&self, c: Column) -> Arc {
        match c {
            Column::First => self.base1,
            Column::Second => self.base2,
        }
    }

    /// `q_k |J1| + q_{k-1} |J2| == 1`, exactly.
    pub fn partition_identity_holds(&self) -> bool {
        let a = self.q_k.checked_mul(self.base1.len);
        let b = self.q_km1.checked_mul(self.base2.len);
        match (a, b) {
            (Some(a), Some(b)) => a.overflowing_add(b) == (0, true),
            _ => false,
        }
    }
}

/// Position of a point inside the two-tower partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerPosition {
    pub column: Column,
    pub level: u128,
    /// The point of the base lying `level` steps below.
    pub base_point: CirclePoint,
}

/// The nested sequence of two-tower partitions up to a scale.
#[derive(Clone, Debug)]
pub struct KrChain {
    alpha: u128,
    scales: Vec<KrScale>,
}

impl KrChain {
    pub fn new(rot: &RotationSystem, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("tower scale must be at least 1"));
        }
        let mut scales = Vec::with_capacity(k);
        for j in 1..=k {
            let s = KrScale::new(rot, j).ok_or(Error::Precision {
                required_q: rot.continued_fraction().convergents.last().map_or(1, |c| c.q) + 1,
                available_bits: rot.alpha().precision_bits(),
            })?;
            scales.push(s);
        }
        Ok(KrChain { alpha: rot.alpha_units(), scales })
    }

    pub fn top(&self) -> &KrScale {
        self.scales.last().expect("chain is nonempty")
    }

    pub fn scale(&self) -> usize {
        self.scales.len()
    }

    /// Finds the column, level and base point of `w` at the top scale.
    pub fn locate(&self, w: CirclePoint) -> TowerPosition {
        let s1 = &self.scales[0];
        let (mut x, mut h) = if s1.base2.contains(w) {
            (w.units(), 0u128)
        } else {
            let j = w.units() / self.alpha;
            (w.units() - j * self.alpha, j)
        };
        for pair in self.scales.windows(2) {
            let (s, next) = (&pair[0], &pair[1]);
            while !next.in_base(CirclePoint::from_units(x)) {
                let back = x.wrapping_sub(s.delta_k);
                if s.base1.contains(CirclePoint::from_units(back)) {
                    x = back;
                    h += s.q_k;
                } else {
                    x = x.wrapping_sub(s.delta_km1);
                    h += s.q_km1;
                }
            }
        }
        let top = self.top();
        let base_point = CirclePoint::from_units(x);
        let column = if top.base1.contains(base_point) { Column::First } else { Column::Second };
        TowerPosition { column, level: h, base_point }
    }
}

#[derive(Clone, Debug)]
pub enum TowerLayout {
    /// Height one: `K` is a single arc.
    SingleArc,
    TwoTower {
        chain: KrChain,
        /// Number of `N^2` blocks in each column.
        blocks: [u128; 2],
    },
}

/// A set `K` (finite union of arcs) with `N^2` pairwise disjoint images.
#[derive(Clone, Debug)]
pub struct RokhlinTower {
    pub n: u64,
    pub height: u128,
    pub gamma: f64,
    pub base_arcs: Vec<Arc>,
    /// Measure of the complement of the `N^2` images, in units.
    pub leak_units: u128,
    pub layout: TowerLayout,
}

/// Where a circle point sits relative to a [`RokhlinTower`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerSlot {
    /// `w = S^level(p)` with `p` in `base_arcs[arc]`.
    Covered { arc: usize, level: u128, base_point: CirclePoint },
    /// In the leftover top levels of a column; `arc` is the column's
    /// last block and `level >= height` counts from that block's start.
    Leak { arc: usize, level: u128, base_point: CirclePoint },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMethod {
    Enumerated,
    Structural,
}

#[derive(Clone, Copy, Debug)]
pub struct TowerCheck {
    pub method: CheckMethod,
    pub disjoint: bool,
    pub covered_measure: f64,
}

impl RokhlinTower {
    pub fn covered_measure(&self) -> f64 {
        1.0 - units_to_f64(self.leak_units)
    }

    pub fn leak(&self) -> f64 {
        units_to_f64(self.leak_units)
    }

    /// Continued-fraction scale used, if any.
    pub fn scale(&self) -> Option<usize> {
        match &self.layout {
            TowerLayout::SingleArc => None,
            TowerLayout::TwoTower { chain, .. } => Some(chain.scale()),
        }
    }

    /// Total measure of `K`.
    pub fn base_measure(&self) -> f64 {
        self.base_arcs.iter().map(|a| a.length()).sum()
    }

    /// Number of consecutive levels whose [`TowerSlot`] names `arc`: the
    /// block height, or for a column's last block the height plus leftovers.
    pub fn segment_len(&self, arc: usize) -> u128 {
        match &self.layout {
            TowerLayout::SingleArc => 1,
            TowerLayout::TwoTower { chain, blocks } => {
                let top = chain.top();
                let (col, b) = if (arc as u128) < blocks[0] {
                    (0, arc as u128)
                } else {
                    (1, arc as u128 - blocks[0])
                };
                if b + 1 < blocks[col] {
                    self.height
                } else {
                    let h = if col == 0 { top.q_k } else { top.q_km1 };
                    h - b * self.height
                }
            }
        }
    }

    /// Rotation step in units.
    pub fn alpha_units(&self) -> u128 {
        self.step_units()
    }

    pub fn slot(&self, w: CirclePoint) -> TowerSlot {
        match &self.layout {
            TowerLayout::SingleArc => {
                let arc = self.base_arcs[0];
                if arc.contains(w) {
                    TowerSlot::Covered { arc: 0, level: 0, base_point: w }
                } else {
                    TowerSlot::Leak { arc: 0, level: 1, base_point: w }
                }
            }
            TowerLayout::TwoTower { chain, blocks, .. } => {
                let pos = chain.locate(w);
                let (col, offset) = match pos.column {
                    Column::First => (0, 0usize),
                    Column::Second => (1, blocks[0] as usize),
                };
                let b = pos.level / self.height;
                let a = chain.alpha;
                if b < blocks[col] {
                    let level = pos.level % self.height;
                    let base_point = w.sub_units(level.wrapping_mul(a));
                    TowerSlot::Covered { arc: offset + b as usize, level, base_point }
                } else {
                    let last = blocks[col] - 1;
                    let level = pos.level - last * self.height;
                    let base_point = w.sub_units(level.wrapping_mul(a));
                    TowerSlot::Leak { arc: offset + last as usize, level, base_point }
                }
            }
        }
    }

    /// Checks disjointness and coverage exactly.
    ///
    /// Small towers are checked by sorting every image arc; large ones via the
    /// partition identity of the underlying two-tower decomposition plus the
    /// block bookkeeping.
    pub fn verify(&self) -> TowerCheck {
        let total = self.height.saturating_mul(self.base_arcs.len() as u128);
        let (method, disjoint) = if total <= ENUMERATION_LIMIT {
            (CheckMethod::Enumerated, self.verify_enumerated())
        } else {
            (CheckMethod::Structural, self.verify_structural())
        };
        TowerCheck { method, disjoint, covered_measure: self.covered_measure() }
    }

    fn step_units(&self) -> u128 {
        match &self.layout {
            TowerLayout::SingleArc => 0,
            TowerLayout::TwoTower { chain, .. } => chain.alpha,
        }
    }

    fn verify_enumerated(&self) -> bool {
        let a = self.step_units();
        let mut arcs: Vec<Arc> = Vec::with_capacity((self.height as usize) * self.base_arcs.len());
        for arc in &self.base_arcs {
            for i in 0..self.height {
                arcs.push(arc.shifted(i.wrapping_mul(a)));
            }
        }
        arcs.sort_by_key(|a| a.start.units());
        let mut sum: u128 = 0;
        let mut overflowed = false;
        for (i, arc) in arcs.iter().enumerate() {
            let next = arcs[(i + 1) % arcs.len()];
            let gap = next.start.units().wrapping_sub(arc.start.units());
            if arcs.len() > 1 && gap < arc.len {
                return false;
            }
            let (s, o) = sum.overflowing_add(arc.len);
            sum = s;
            overflowed |= o;
        }
        // Covered measure equals 1 - leak exactly.
        if self.leak_units == 0 {
            overflowed && sum == 0
        } else {
            !overflowed && sum == self.leak_units.wrapping_neg()
        }
    }

    fn verify_structural(&self) -> bool {
        let TowerLayout::TwoTower { chain, blocks } = &self.layout else {
            return self.base_arcs.len() == 1;
        };
        let top = chain.top();
        if !top.partition_identity_holds() {
            return false;
        }
        // Returning to J after q_k (resp. q_{k-1}) steps lands in J, so the
        // tower levels tile the circle; blocks then split each column.
        let j_len = top.base1.len + top.base2.len;
        let j_start = if top.base1.start == CirclePoint::ZERO { top.base2.start } else { top.base1.start };
        let j = Arc::new(j_start, j_len);
        let lands = |arc: Arc, d: u128| {
            let s = arc.shifted(d);
            j.contains(s.start) && j.offset(s.start) + s.len <= j.len
        };
        if !lands(top.base1, top.delta_k) || !lands(top.base2, top.delta_km1) {
            return false;
        }
        let h = self.height;
        if blocks[0] == 0 || blocks[1] == 0 || blocks[0] * h > top.q_k || blocks[1] * h > top.q_km1 {
            return false;
        }
        let leak = (top.q_k - blocks[0] * h) * top.base1.len + (top.q_km1 - blocks[1] * h) * top.base2.len;
        leak == self.leak_units
    }
}

/// Large partial quotients can force a huge number of blocks.
pub const MAX_BASE_ARCS: u128 = 1 << 22;

/// Builds `K` with `N^2` disjoint images covering at least `1 - gamma`.
pub fn build_rokhlin_tower(rot: &RotationSystem, n: u64, gamma: f64) -> Result<RokhlinTower> {
    if n == 0 {
        return Err(Error::invalid("tower parameter N must be positive"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if n == 1 {
        let len = ((1.0 - gamma / 2.0) * UNITS_PER_TURN) as u128;
        return Ok(RokhlinTower {
            n,
            height: 1,
            gamma,
            base_arcs: vec![Arc::new(CirclePoint::ZERO, len)],
            leak_units: len.wrapping_neg(),
            layout: TowerLayout::SingleArc,
        });
    }
    let height = (n as u128) * (n as u128);
    let bound = 2.0 * height as f64 / gamma;
    if !(bound < 1e36) {
        return Err(Error::invalid(format!("tower height bound {bound:e} is out of range")));
    }
    let required_q = bound.floor() as u128 + 1;
    let cf = rot.continued_fraction();
    let k = (1..=cf.convergents.len())
        .find(|&k| cf.q(k - 1).is_some_and(|q| q >= required_q))
        .ok_or(Error::Precision { required_q, available_bits: rot.alpha().precision_bits() })?;
    let chain = KrChain::new(rot, k)?;
    let top = chain.top().clone();
    let blocks = [top.q_k / height, top.q_km1 / height];
    if blocks[0] + blocks[1] > MAX_BASE_ARCS {
        return Err(Error::Numeric(format!(
            "tower needs {} base arcs, more than the limit {MAX_BASE_ARCS}",
            blocks[0] + blocks[1]
        )));
    }
    let step = height.wrapping_mul(rot.alpha_units());
    let mut base_arcs = Vec::with_capacity((blocks[0] + blocks[1]) as usize);
    for (col, base) in [(0, top.base1), (1, top.base2)] {
        for b in 0..blocks[col] {
            base_arcs.push(base.shifted(b.wrapping_mul(step)));
        }
    }
    let leak_units =
        (top.q_k % height) * top.base1.len + (top.q_km1 % height) * top.base2.len;
    Ok(RokhlinTower {
        n,
        height,
        gamma,
        base_arcs,
        leak_units,
        layout: TowerLayout::TwoTower { chain, blocks },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::circle::Alpha;

    #[test]
    fn partition_identity_along_golden_chain() {
        let rot = RotationSystem::golden();
        let chain = KrChain::new(&rot, 40).unwrap();
        for s in &chain.scales {
            assert!(s.partition_identity_holds(), "scale {}", s.k);
        }
    }

    fn check_locate(rot: &RotationSystem, k: usize, samples: u64) {
        let chain = KrChain::new(rot, k).unwrap();
        let top = chain.top();
        let a = rot.alpha_units();
        let step = u128::MAX / samples as u128;
        for i in 0..samples {
            let w = CirclePoint::from_units(step.wrapping_mul(i as u128).wrapping_add(i as u128 * 7919));
            let pos = chain.locate(w);
            assert!(top.base(pos.column).contains(pos.base_point));
            assert!(pos.level < top.height(pos.column), "level {} at scale {k}", pos.level);
            assert_eq!(pos.base_point.add_units(pos.level.wrapping_mul(a)), w);
        }
    }

    #[test]
    fn locate_inverts_the_orbit() {
        check_locate(&RotationSystem::golden(), 1, 500);
        check_locate(&RotationSystem::golden(), 12, 5000);
        check_locate(&RotationSystem::new(Alpha::parse("sqrt(2)").unwrap()).unwrap(), 9, 5000);
        // 1/pi has a partial quotient 292.
        let inv_pi = Alpha::from_f64(1.0 / std::f64::consts::PI).unwrap();
        check_locate(&RotationSystem::new(inv_pi).unwrap(), 5, 5000);
    }

    #[test]
    fn two_tower_levels_tile_the_circle() {
        // Sort every level arc at a small scale and check they abut exactly.
        let rot = RotationSystem::golden();
        let chain = KrChain::new(&rot, 10).unwrap();
        let top = chain.top();
        let a = rot.alpha_units();
        let mut arcs = Vec::new();
        for c in [Column::First, Column::Second] {
            for i in 0..top.height(c) {
                arcs.push(top.base(c).shifted(i.wrapping_mul(a)));
            }
        }
        arcs.sort_by_key(|x| x.start.units());
        for i in 0..arcs.len() {
            let next = arcs[(i + 1) % arcs.len()];
            assert_eq!(arcs[i].end(), next.start);
        }
    }

    #[test]
    fn golden_n3_tower() {
        let t = build_rokhlin_tower(&RotationSystem::golden(), 3, 0.2).unwrap();
        assert_eq!(t.height, 9);
        let c = t.verify();
        assert_eq!(c.method, CheckMethod::Enumerated);
        assert!(c.disjoint);
        assert!(c.covered_measure >= 0.8);
        assert!(t.verify_structural());
    }

    #[test]
    fn height_one_tower() {
        let t = build_rokhlin_tower(&RotationSystem::golden(), 1, 0.5).unwrap();
        assert_eq!(t.height, 1);
        assert!(t.base_arcs[0].length() >= 0.5);
        assert!(t.verify().disjoint);
    }

    #[test]
    fn huge_partial_quotient_is_refused() {
        let rot = RotationSystem::new(Alpha::from_units((1 << 88) + 12_345, 128).unwrap()).unwrap();
        assert!(matches!(build_rokhlin_tower(&rot, 2, 0.5), Err(Error::Numeric(_))));
    }

    #[test]
    fn low_precision_fails_with_required_q() {
        let rot = RotationSystem::new(Alpha::parse("0.61803").unwrap()).unwrap();
        match build_rokhlin_tower(&rot, 3, 1e-9) {
            Err(Error::Precision { required_q, .. }) => assert!(required_q > 1_000_000_000),
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn slot_matches_block_layout() {
        let rot = RotationSystem::golden();
        let t = build_rokhlin_tower(&rot, 3, 0.2).unwrap();
        let a = rot.alpha_units();
        let mut leaks = 0;
        for i in 0..20000u128 {
            let w = CirclePoint::from_units(i.wrapping_mul(0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c834));
            match t.slot(w) {
                TowerSlot::Covered { arc, level, base_point } => {
                    assert!(t.base_arcs[arc].contains(base_point));
                    assert!(level < t.height);
                    assert_eq!(base_point.add_units(level.wrapping_mul(a)), w);
                }
                TowerSlot::Leak { arc, level, base_point } => {
                    leaks += 1;
                    assert!(t.base_arcs[arc].contains(base_point));
                    assert!(level >= t.height && level < 2 * t.height);
                }
            }
        }
        let frac = leaks as f64 / 20000.0;
        assert!((frac - t.leak()).abs() < 0.02, "{frac} vs {}", t.leak());
    }
}
