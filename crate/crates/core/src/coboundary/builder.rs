//! Building a coboundary `G = H_S^{-1} H` close to the identity whose
//! relative product averages `f` almost uniformly.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::family::FiberArc;
use super::lemma_path::lemma_la_path;
use super::theta::{build_theta, ThetaMap};
use crate::base::{build_rokhlin_tower, CirclePoint, RotationSystem};
use crate::ergodicity::functions::TestFunction;
use crate::error::{Error, Result};
use crate::skew::{cocycle_distance, uniform_y_grid, uniform_z_grid, Cocycle, FiberSpace, HomeoPath, ParamMap};
use crate::system::Observation;

/// Verification grid sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateGrids {
    /// Base points for the distance to the identity.
    pub distance_z: usize,
    /// Fiber points for the distance to the identity.
    pub distance_y: usize,
    /// Base points for the integral criterion.
    pub integral_z: usize,
    /// Fiber points per coordinate for the integral criterion.
    pub integral_y: usize,
}

impl Default for CertificateGrids {
    fn default() -> Self {
        CertificateGrids { distance_z: 1000, distance_y: 1000, integral_z: 1000, integral_y: 64 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub function_id: String,
    pub eps: f64,
    pub delta: f64,
    pub alpha: String,
    pub v_start: f64,
    pub v_len: f64,
    pub oscillation: f64,
    pub gamma: f64,
    pub m: usize,
    pub lipschitz_t: f64,
    pub inverse_lipschitz: f64,
    pub eta: f64,
    pub n: u64,
    pub tower_scale: Option<usize>,
    pub tower_q: Option<String>,
    pub tower_covered: f64,
    pub ks_bound: f64,
    pub path_bad_measure: f64,
    pub grids: CertificateGrids,
    pub c: f64,
    pub distance: f64,
    pub integral_deviation: f64,
    pub distance_passed: bool,
    pub integral_passed: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.distance_passed && self.integral_passed
    }
}

#[derive(Clone, Debug)]
pub struct CoboundaryBuild {
    pub h: Cocycle,
    pub g: Cocycle,
    pub certificate: Certificate,
}

const V_CENTRES: usize = 64;
const V_SAMPLES: usize = 17;
const OSC_Z: usize = 16;
const MIN_DYADIC: u32 = 30;

/// `max_z (max - min)` of `f(z, v1, v2)` over sampled `v1, v2` in `v`.
fn oscillation(f: &TestFunction, v: FiberArc) -> f64 {
    let vs: Vec<f64> = (0..V_SAMPLES)
        .map(|i| v.start + v.len * (i as f64 + 0.5) / V_SAMPLES as f64 * (1.0 - 1e-12))
        .chain([v.start + v.len * 1e-12, v.start + v.len * (1.0 - 1e-12)])
        .collect();
    (0..OSC_Z)
        .map(|i| {
            let z = i as f64 / OSC_Z as f64;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &a in &vs {
                for &b in &vs {
                    let x = f.eval(&Observation { z, y1: a, y2: b });
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// The largest arc (punctured circle, then dyadic lengths) on which `f`
/// oscillates by less than `bound`; centres scanned on a uniform grid.
pub fn choose_arc(f: &TestFunction, bound: f64) -> Result<(FiberArc, f64)> {
    let whole = FiberArc::punctured(0.0);
    let osc = oscillation(f, whole);
    if osc < bound {
        return Ok((whole, osc));
    }
    for k in 1..=MIN_DYADIC {
        let len = 0.5f64.powi(k as i32);
        for c in 0..V_CENTRES {
            let v = FiberArc::centered(c as f64 / V_CENTRES as f64, len)?;
            let osc = oscillation(f, v);
            if osc < bound {
                return Ok((v, osc));
            }
        }
    }
    Err(Error::Numeric("f too oscillatory in fiber".into()))
}

fn theta_of(g: &Cocycle) -> Option<(&ThetaMap, &HomeoPath)> {
    super::engine::telescoping_parts(g)
}

/// `max |∫ f(z, H_z^{-1} y1, H_z^{-1} y2) dz - c|` over the fiber grid, the
/// integral taken as a mean over a uniform base grid.
pub fn integral_deviation(h: &Cocycle, f: &TestFunction, c: f64, base: &RotationSystem, nz: usize, ny: usize) -> Result<f64> {
    let zs = uniform_z_grid(nz);
    let ys = uniform_y_grid(ny);
    let maps: Vec<_> = zs.par_iter().map(|&z| h.resolve(z, base)).collect::<Result<_>>()?;
    let pulled: Vec<Vec<f64>> = maps.iter().map(|m| ys.iter().map(|&y| m.apply_inverse(y)).collect()).collect();
    let worst = (0..ny * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / ny, idx % ny);
            let sum: f64 = zs
                .iter()
                .zip(&pulled)
                .map(|(z, p)| f.eval(&Observation { z: z.value(), y1: p[i], y2: p[j] }))
                .sum();
            (sum / nz as f64 - c).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `∫ f(z, v, v) dz` as a mean over a uniform base grid.
pub fn diagonal_integral(f: &TestFunction, v: f64, nz: usize) -> f64 {
    uniform_z_grid(nz).iter().map(|z| f.eval(&Observation { z: z.value(), y1: v, y2: v })).sum::<f64>() / nz as f64
}

/// Recomputes both certificate values for a saved coboundary.
pub fn recertify(
    g: &Cocycle,
    f: &TestFunction,
    v_centre: f64,
    base: &RotationSystem,
    grids: CertificateGrids,
) -> Result<(f64, f64, f64)> {
    let Cocycle::Coboundary(h) = g else {
        return Err(Error::Unsupported("cocycle is not a coboundary".into()));
    };
    let distance = cocycle_distance(
        g,
        &Cocycle::identity(FiberSpace::Circle),
        &uniform_z_grid(grids.distance_z),
        &uniform_y_grid(grids.distance_y),
        base,
    )?;
    let c = diagonal_integral(f, v_centre, grids.integral_z);
    let dev = integral_deviation(h, f, c, base, grids.integral_z, grids.integral_y)?;
    Ok((distance, c, dev))
}

pub fn build_coboundary(
    base: &RotationSystem,
    f: &TestFunction,
    eps: f64,
    delta: f64,
    grids: CertificateGrids,
) -> Result<CoboundaryBuild> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("eps and delta must lie in (0, 1), got {eps} and {delta}")));
    }
    let (v, osc) = choose_arc(f, eps / 2.0)?;
    let gamma = eps / 16.0;
    let lp = lemma_la_path(v, gamma)?;
    let bad = lp.max_bad_measure(1000);
    let l_t = lp.path.lipschitz_t();
    let l_inv = lp.path.inverse_lipschitz();
    // |t - t'| < eta keeps h_t^{-1} h_{t'} within delta of the identity.
    let eta = if l_t == 0.0 { f64::INFINITY } else { delta / (l_t * l_inv) };
    let n_f = (1.0 / (eta / 2.0).min(gamma)).floor() + 1.0;
    if !(n_f < 1e9) {
        return Err(Error::Numeric(format!("tower size N = {n_f:e} is out of range")));
    }
    let n = n_f as u64;
    let tower = build_rokhlin_tower(base, n, gamma)?;
    let theta = build_theta(&tower, base, n)?;
    let ks = theta.ks_bound();
    let m = lp.family.m();
    let h = Cocycle::Homeo { param: ParamMap::Theta(Arc::new(theta)), path: Arc::new(lp.path) };
    let g = Cocycle::coboundary_of(h.clone());
    let (distance, c, dev) = recertify(&g, f, v.centre(), base, grids)?;
    if !(distance < delta) {
        return Err(Error::Certificate(format!("distance to the identity {distance} is not below {delta}")));
    }
    let certificate = Certificate {
        function_id: f.id(),
        eps,
        delta,
        alpha: base.alpha().to_spec(),
        v_start: v.start,
        v_len: v.len,
        oscillation: osc,
        gamma,
        m,
        lipschitz_t: l_t,
        inverse_lipschitz: l_inv,
        eta,
        n,
        tower_scale: tower.scale(),
        tower_q: tower.scale().map(|k| base.continued_fraction().q(k).unwrap_or(0).to_string()),
        tower_covered: tower.covered_measure(),
        ks_bound: ks,
        path_bad_measure: bad,
        grids,
        c,
        distance,
        integral_deviation: dev,
        distance_passed: true,
        integral_passed: dev < eps,
    };
    debug_assert!(theta_of(&g).is_some());
    Ok(CoboundaryBuild { h, g, certificate })
}

/// `h_{theta(Sz)}^{-1} h_{theta(z)} y`, evaluated from the parts.
pub fn telescoped_value(g: &Cocycle, z: CirclePoint, y: f64, base: &RotationSystem) -> Option<f64> {
    let (t, path) = theta_of(g)?;
    let a = t.theta(z);
    let b = t.theta(base.step(z));
    Some(path.apply_inverse_at(b, path.apply_at(a, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodicity::functions::Coord;

    #[test]
    fn arc_choice_for_the_diagonal_cosine() {
        let (v, osc) = choose_arc(&TestFunction::DiagCos, 0.125).unwrap();
        assert_eq!(v.len, 1.0 / 16.0);
        assert!(osc < 0.125);
        let (v, osc) = choose_arc(&TestFunction::Const(0.3), 0.01).unwrap();
        assert!(v.is_punctured_circle());
        assert_eq!(osc, 0.0);
    }

    #[test]
    fn fiber_free_functions_give_identity_paths() {
        let rot = RotationSystem::golden();
        let grids = CertificateGrids { distance_z: 50, distance_y: 50, integral_z: 200, integral_y: 8 };
        let f = TestFunction::cos(Coord::Z, 1);
        let b = build_coboundary(&rot, &f, 0.2, 0.2, grids).unwrap();
        assert_eq!(b.certificate.distance, 0.0);
        assert!(b.certificate.integral_deviation < 1e-12);
        assert!(b.certificate.passed());
    }

    #[test]
    fn rejects_bad_parameters() {
        let rot = RotationSystem::golden();
        assert!(build_coboundary(&rot, &TestFunction::DiagCos, 0.0, 0.2, CertificateGrids::default()).is_err());
        assert!(build_coboundary(&rot, &TestFunction::DiagCos, 0.2, 1.0, CertificateGrids::default()).is_err());
    }
}
