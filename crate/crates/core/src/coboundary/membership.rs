//! Checking membership of a cocycle in the open set `E_{f,eps}`: some
//! horizon `n` at which the averages `(1/(n+1)) sum_{k<=n} f(T_G^k w)` are
//! uniformly within `eps` of one constant.

use rayon::prelude::*;
use serde::Serialize;

use super::engine::{relative_averages, telescoping_parts, Engine};
use crate::base::{CirclePoint, RotationSystem};
use crate::ergodicity::functions::TestFunction;
use crate::error::{Error, Result};
use crate::skew::Cocycle;

/// Start points: `z_count` base points times `y_count^2` fiber pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipGrid {
    pub z_count: usize,
    pub y_count: usize,
}

impl Default for MembershipGrid {
    fn default() -> Self {
        MembershipGrid { z_count: 16, y_count: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipRow {
    pub n: u128,
    /// Grid median of the averages, used as the constant.
    pub median: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub function_id: String,
    pub eps: f64,
    pub grid: MembershipGrid,
    pub engine: Engine,
    pub rows: Vec<MembershipRow>,
    pub best_n: u128,
    pub best_deviation: f64,
    pub member: bool,
}

/// `N^2, 4 N^2, 16 N^2` for a tower-built coboundary, else `10^2 .. 10^4`.
pub fn default_schedule(g: &Cocycle) -> Vec<u128> {
    match telescoping_parts(g) {
        Some((t, _)) => {
            let h = (t.n() as u128).pow(2);
            vec![h, 4 * h, 16 * h]
        }
        None => vec![100, 1_000, 10_000],
    }
}

pub(crate) fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn verify_e_membership(
    g: &Cocycle,
    f: &TestFunction,
    eps: f64,
    base: &RotationSystem,
    schedule: &[u128],
    grid: MembershipGrid,
) -> Result<MembershipReport> {
    if grid.z_count == 0 || grid.y_count == 0 {
        return Err(Error::invalid("membership grid must be nonempty"));
    }
    let mut schedule = schedule.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    if schedule.is_empty() {
        return Err(Error::invalid("empty horizon schedule"));
    }
    let counts: Vec<u128> = schedule.iter().map(|n| n + 1).collect();
    let fibers: Vec<(f64, f64)> = (0..grid.y_count)
        .flat_map(|i| (0..grid.y_count).map(move |j| (i, j)))
        .map(|(i, j)| (i as f64 / grid.y_count as f64, j as f64 / grid.y_count as f64))
        .collect();
    let fs = std::slice::from_ref(f);
    let per_z: Vec<(Vec<Vec<Vec<f64>>>, Engine)> = (0..grid.z_count)
        .into_par_iter()
        .map(|i| {
            let z = CirclePoint::from_f64(i as f64 / grid.z_count as f64);
            relative_averages(g, base, fs, z, &fibers, &counts)
        })
        .collect::<Result<_>>()?;
    let engine = per_z[0].1;
    let mut rows = Vec::with_capacity(schedule.len());
    for (h, &n) in schedule.iter().enumerate() {
        let mut vals: Vec<f64> = per_z.iter().flat_map(|(a, _)| a.iter().map(move |s| s[0][h])).collect();
        let med = median(&mut vals);
        let deviation = vals.iter().map(|v| (v - med).abs()).fold(0.0, f64::max);
        rows.push(MembershipRow { n, median: med, deviation });
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.deviation.total_cmp(&b.deviation))
        .expect("nonempty schedule");
    Ok(MembershipReport {
        function_id: f.id(),
        eps,
        grid,
        engine,
        best_n: best.n,
        best_deviation: best.deviation,
        member: best.deviation < eps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodicity::functions::TestFunction;
    use crate::skew::FiberSpace;

    #[test]
    fn identity_is_not_a_member_for_the_diagonal_cosine() {
        let rot = RotationSystem::golden();
        let g = Cocycle::identity(FiberSpace::Circle);
        let r = verify_e_membership(&g, &TestFunction::DiagCos, 0.3, &rot, &[10, 100], MembershipGrid::default())
            .unwrap();
        assert!(!r.member);
        assert!(r.rows.iter().all(|row| row.deviation >= 0.5 - 1e-12));
    }

    #[test]
    fn constants_are_members_at_once() {
        let rot = RotationSystem::golden();
        let g = Cocycle::constant_rotation(0.2);
        let r = verify_e_membership(&g, &TestFunction::Const(0.5), 0.01, &rot, &[1], MembershipGrid::default())
            .unwrap();
        assert!(r.member);
        assert_eq!(r.best_deviation, 0.0);
    }
}
