//! Orbit averages on the relative product `T_G(z, y1, y2)`.
//!
//! For `G = H_S^{-1} H` with `H_z = h_{theta(z)}` the orbit telescopes:
//! `T_G^k(z, y) = (S^k z, h_{theta_k}^{-1}(h_{theta_0}(y)))` with
//! `theta_k = theta(S^k z)`. Along the orbit `theta_k` is piecewise linear
//! in `k`, constant on long stretches, and the path is constant on most of
//! `[0, 1]`, so sums over `10^12` steps cost a few thousand evaluations.

use std::f64::consts::PI;

use serde::Serialize;

use super::theta::ThetaMap;
use crate::base::{CirclePoint, RotationSystem};
use crate::ergodicity::functions::{Coord, TestFunction, Wave};
use crate::error::{Error, Result};
use crate::skew::{relative_step, Cocycle, HomeoPath, ParamMap, RelState};
use crate::metrics::pseudometric::Neumaier as Acc;
use crate::system::Observation;

/// Longest orbit the step-by-step engine will run.
pub const STEPWISE_LIMIT: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Telescoped,
    Stepwise,
}

/// The `theta` map and path of a telescoping coboundary, if `g` is one.
pub fn telescoping_parts(g: &Cocycle) -> Option<(&ThetaMap, &HomeoPath)> {
    match g {
        Cocycle::Coboundary(h) => match h.as_ref() {
            Cocycle::Homeo { param: ParamMap::Theta(t), path } => Some((t.as_ref(), path.as_ref())),
            _ => None,
        },
        _ => None,
    }
}

fn mixed(f: &TestFunction) -> bool {
    f.depends_on_z() && f.depends_on_fiber()
}

/// Which engine [`relative_averages`] will use.
pub fn engine_for(g: &Cocycle, fs: &[TestFunction]) -> Engine {
    if telescoping_parts(g).is_some() && !fs.iter().any(mixed) {
        Engine::Telescoped
    } else {
        Engine::Stepwise
    }
}

/// `(1/m) sum_{k<m} f(z + k alpha)` in closed form for trigonometric `f`.
fn base_average(f: &TestFunction, z: CirclePoint, base: &RotationSystem, m: u128) -> Option<f64> {
    let TestFunction::Trig { coord: Coord::Z, wave, k } = f else {
        return None;
    };
    let a = base.alpha_units();
    let ku = *k as i128 as u128;
    // e(k z) * (1 - e(k m alpha)) / (1 - e(k alpha)), angles reduced exactly.
    let phase = |units: u128| 2.0 * PI * CirclePoint::from_units(units).value();
    let kz = phase(z.units().wrapping_mul(ku));
    let ka = phase(a.wrapping_mul(ku));
    let kma = phase(a.wrapping_mul(ku).wrapping_mul(m));
    let (nr, ni) = (1.0 - kma.cos(), -kma.sin());
    let (dr, di) = (1.0 - ka.cos(), -ka.sin());
    let den = dr * dr + di * di;
    let (qr, qi) = ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
    let (er, ei) = (kz.cos(), kz.sin());
    let (sr, si) = (er * qr - ei * qi, er * qi + ei * qr);
    Some(match wave {
        Wave::Cos => sr / m as f64,
        Wave::Sin => si / m as f64,
    })
}

/// Linear pieces of `k -> theta(S^k z)` for `k < total`.
struct ThetaPieces {
    /// `(k_start, len, theta_start, slope)`.
    pieces: Vec<(u128, u128, f64, f64)>,
}

fn theta_pieces(t: &ThetaMap, z: CirclePoint, total: u128, cuts: &[u128]) -> ThetaPieces {
    let n = t.n() as u128;
    let a = t.rotation().alpha_units();
    // Index i of the run list is orbit index i - (N - 1).
    let runs = t.forward_runs(z.sub_units((n - 1).wrapping_mul(a)), total + n - 1);
    let mut starts = Vec::with_capacity(runs.len());
    let mut s = 0u128;
    for &(len, _) in &runs {
        starts.push(s);
        s += len;
    }
    let value_at = |i: u128| runs[starts.partition_point(|&x| x <= i) - 1].1;
    let window = |k: u128| {
        let (lo, hi) = (k, k + n);
        let mut r = starts.partition_point(|&x| x <= lo) - 1;
        let mut sum = 0.0;
        while r < runs.len() && starts[r] < hi {
            let from = starts[r].max(lo);
            let to = (starts[r] + runs[r].0).min(hi);
            sum += runs[r].1 * (to - from) as f64;
            r += 1;
        }
        sum / n as f64
    };
    let mut bps: Vec<u128> = vec![0];
    for &s in &starts {
        bps.push(s);
        if s >= n {
            bps.push(s - n);
        }
    }
    bps.extend(cuts.iter().copied());
    bps.retain(|&k| k < total);
    bps.sort_unstable();
    bps.dedup();
    let mut pieces = Vec::with_capacity(bps.len());
    for (i, &ka) in bps.iter().enumerate() {
        let kb = bps.get(i + 1).copied().unwrap_or(total);
        let len = kb - ka;
        let slope = if len > 1 { (value_at(ka + n) - value_at(ka)) / n as f64 } else { 0.0 };
        pieces.push((ka, len, window(ka), slope));
    }
    ThetaPieces { pieces }
}

/// Adds `f(h_theta^{-1} u1, h_theta^{-1} u2)` over one linear piece.
fn piece_sums(path: &HomeoPath, fs: &[&TestFunction], u: (f64, f64), piece: (u128, f64, f64), accs: &mut [Acc]) {
    let (len, th0, slope) = piece;
    let eval = |theta: f64, accs: &mut [Acc], weight: f64| {
        let o = Observation { z: 0.0, y1: path.apply_inverse_at(theta, u.0), y2: path.apply_inverse_at(theta, u.1) };
        for (acc, f) in accs.iter_mut().zip(fs) {
            acc.add(f.eval(&o) * weight);
        }
    };
    if slope == 0.0 {
        eval(th0, accs, len as f64);
        return;
    }
    let theta = |j: u128| th0 + j as f64 * slope;
    let seg = |j: u128| path.locate(theta(j)).0;
    let knots = path.knots();
    let mut j = 0u128;
    while j < len {
        let i = seg(j);
        if !path.is_plateau(i) {
            eval(theta(j), accs, 1.0);
            j += 1;
            continue;
        }
        let room = if slope > 0.0 { knots[i + 1] - theta(j) } else { theta(j) - knots[i] };
        let guess = (room / slope.abs()).floor().max(0.0);
        let mut end = if guess >= (len - 1 - j) as f64 { len - 1 } else { j + guess as u128 };
        while end + 1 < len && seg(end + 1) == i {
            end += 1;
        }
        while end > j && seg(end) != i {
            end -= 1;
        }
        eval(theta(j), accs, (end - j + 1) as f64);
        j = end + 1;
    }
}

/// Averages over the first `m` orbit points, for every `m` in `term_counts`
/// (ascending) and every start; `out[start][f][m]`.
pub fn relative_averages(
    g: &Cocycle,
    base: &RotationSystem,
    fs: &[TestFunction],
    z: CirclePoint,
    fibers: &[(f64, f64)],
    term_counts: &[u128],
) -> Result<(Vec<Vec<Vec<f64>>>, Engine)> {
    if term_counts.is_empty() || term_counts.windows(2).any(|w| w[0] >= w[1]) || term_counts[0] == 0 {
        return Err(Error::invalid("horizons must be positive and strictly increasing"));
    }
    let engine = engine_for(g, fs);
    let out = match engine {
        Engine::Telescoped => telescoped(g, base, fs, z, fibers, term_counts)?,
        Engine::Stepwise => fibers
            .iter()
            .map(|&(y1, y2)| stepwise(g, base, fs, RelState { z, y1, y2 }, term_counts))
            .collect::<Result<_>>()?,
    };
    Ok((out, engine))
}

fn telescoped(
    g: &Cocycle,
    base: &RotationSystem,
    fs: &[TestFunction],
    z: CirclePoint,
    fibers: &[(f64, f64)],
    term_counts: &[u128],
) -> Result<Vec<Vec<Vec<f64>>>> {
    let (t, path) = telescoping_parts(g).expect("checked by engine_for");
    let total = *term_counts.last().expect("nonempty");
    let fiber_fs: Vec<&TestFunction> = fs.iter().filter(|f| f.depends_on_fiber()).collect();
    let pieces = if fiber_fs.is_empty() { None } else { Some(theta_pieces(t, z, total, term_counts)) };
    let mut base_vals: Vec<Option<Vec<f64>>> = Vec::with_capacity(fs.len());
    for f in fs {
        if f.depends_on_fiber() {
            base_vals.push(None);
        } else if !f.depends_on_z() {
            let c = f.eval(&Observation::default());
            base_vals.push(Some(vec![c; term_counts.len()]));
        } else if let Some(v) = term_counts.iter().map(|&m| base_average(f, z, base, m)).collect::<Option<Vec<f64>>>() {
            base_vals.push(Some(v));
        } else if total <= STEPWISE_LIMIT {
            let mut acc = Acc::default();
            let mut w = z;
            let mut v = Vec::with_capacity(term_counts.len());
            let mut next = 0;
            for k in 0..total {
                acc.add(f.eval(&Observation { z: w.value(), y1: 0.0, y2: 0.0 }));
                w = base.step(w);
                if k + 1 == term_counts[next] {
                    v.push(acc.value() / term_counts[next] as f64);
                    next += 1;
                }
            }
            base_vals.push(Some(v));
        } else {
            return Err(Error::Unsupported(format!("no closed form for {} at horizon {total}", f.id())));
        }
    }
    let mut out = Vec::with_capacity(fibers.len());
    for &(y1, y2) in fibers {
        let mut fiber_avgs: Vec<Vec<f64>> = vec![Vec::with_capacity(term_counts.len()); fiber_fs.len()];
        if let Some(p) = &pieces {
            let th0 = p.pieces[0].2;
            let u = (path.apply_at(th0, y1), path.apply_at(th0, y2));
            let mut accs = vec![Acc::default(); fiber_fs.len()];
            let mut next = 0;
            for &(ka, len, th, slope) in &p.pieces {
                while next < term_counts.len() && term_counts[next] == ka {
                    for (v, a) in fiber_avgs.iter_mut().zip(&accs) {
                        v.push(a.value() / ka as f64);
                    }
                    next += 1;
                }
                piece_sums(path, &fiber_fs, u, (len, th, slope), &mut accs);
            }
            for (v, a) in fiber_avgs.iter_mut().zip(&accs) {
                v.push(a.value() / total as f64);
            }
        }
        let mut it = fiber_avgs.into_iter();
        let per_f = base_vals
            .iter()
            .map(|b| match b {
                Some(v) => v.clone(),
                None => it.next().expect("one per fiber function"),
            })
            .collect();
        out.push(per_f);
    }
    Ok(out)
}

fn stepwise(
    g: &Cocycle,
    base: &RotationSystem,
    fs: &[TestFunction],
    start: RelState,
    term_counts: &[u128],
) -> Result<Vec<Vec<f64>>> {
    let total = *term_counts.last().expect("nonempty");
    if total > STEPWISE_LIMIT {
        return Err(Error::Unsupported(format!("horizon {total} is beyond step-by-step evaluation")));
    }
    let mut accs = vec![Acc::default(); fs.len()];
    let mut out = vec![Vec::with_capacity(term_counts.len()); fs.len()];
    let mut st = start;
    let mut next = 0;
    for k in 0..total {
        let o = Observation { z: st.z.value(), y1: st.y1, y2: st.y2 };
        for (a, f) in accs.iter_mut().zip(fs) {
            a.add(f.eval(&o));
        }
        if k + 1 == term_counts[next] {
            for (v, a) in out.iter_mut().zip(&accs) {
                v.push(a.value() / term_counts[next] as f64);
            }
            next += 1;
            if next == term_counts.len() {
                break;
            }
        }
        st = relative_step(st, g, base)?;
    }
    Ok(out)
}
