//! Cocycles `z -> G_z` over a circle rotation.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::fiber::{FiberMap, FiberSpace};
use super::homeo::CircleHomeo;
use super::path::HomeoPath;
use super::projective::{mobius_act, Mat2, ProjectivePoint};
use crate::base::{CirclePoint, RotationSystem};
use crate::coboundary::ThetaMap;
use crate::error::{Error, Result};

/// Continuous parametrisations `z -> t` in `[0, 1]` for path-valued cocycles.
#[derive(Clone)]
pub enum ParamMap {
    /// `t = (1 + cos 2 pi z) / 2`.
    Cosine,
    /// The tower-averaged map of the coboundary construction.
    Theta(Arc<ThetaMap>),
}

impl ParamMap {
    pub fn eval(&self, z: CirclePoint) -> f64 {
        match self {
            ParamMap::Cosine => 0.5 * (1.0 + (2.0 * PI * z.value()).cos()),
            ParamMap::Theta(t) => t.theta(z),
        }
    }
}

impl fmt::Debug for ParamMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamMap::Cosine => write!(f, "Cosine"),
            ParamMap::Theta(t) => write!(f, "Theta({:?})", t.params()),
        }
    }
}

impl PartialEq for ParamMap {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ParamMap::Cosine, ParamMap::Cosine) => true,
            (ParamMap::Theta(a), ParamMap::Theta(b)) => Arc::ptr_eq(a, b) || a.params() == b.params(),
            _ => false,
        }
    }
}

/// Matrix-valued families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MobiusFamily {
    /// `R_{2 pi z} diag(lambda, 1/lambda)`.
    Herman { lambda: f64 },
}

impl MobiusFamily {
    pub fn matrix(&self, z: CirclePoint) -> Mat2 {
        match *self {
            MobiusFamily::Herman { lambda } => Mat2::rotation(2.0 * PI * z.value()).mul(&Mat2::diag(lambda, 1.0 / lambda)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cocycle {
    Constant(FiberMap),
    Mobius(MobiusFamily),
    /// `G_z = h_{t(z)}` along a stored path.
    Homeo { param: ParamMap, path: Arc<HomeoPath> },
    /// `G_z = H_{Sz}^{-1} ∘ H_z`.
    Coboundary(Box<Cocycle>),
}

/// One factor of a resolved fiber map.
#[derive(Clone, Debug)]
enum Step {
    Map(FiberMap),
    Path { path: Arc<HomeoPath>, t: f64 },
}

/// `G_z` for one fixed `z`: a composition of steps, each possibly inverted.
#[derive(Clone, Debug)]
pub struct ResolvedMap {
    space: FiberSpace,
    /// Applied first to last.
    steps: Vec<(Step, bool)>,
}

impl ResolvedMap {
    fn apply_step(step: &Step, inverse: bool, y: f64) -> f64 {
        match (step, inverse) {
            (Step::Map(m), false) => m.apply(y),
            (Step::Map(m), true) => m.apply_inverse(y),
            (Step::Path { path, t }, false) => path.apply_at(*t, y),
            (Step::Path { path, t }, true) => path.apply_inverse_at(*t, y),
        }
    }

    pub fn space(&self) -> FiberSpace {
        self.space
    }

    pub fn apply(&self, y: f64) -> f64 {
        self.steps.iter().fold(y, |y, (s, inv)| Self::apply_step(s, *inv, y))
    }

    pub fn apply_inverse(&self, y: f64) -> f64 {
        self.steps.iter().rev().fold(y, |y, (s, inv)| Self::apply_step(s, !*inv, y))
    }

    fn inverted(mut self) -> Self {
        self.steps.reverse();
        for s in &mut self.steps {
            s.1 = !s.1;
        }
        self
    }
}

impl Cocycle {
    pub fn identity(space: FiberSpace) -> Self {
        match space {
            FiberSpace::Circle => Cocycle::Constant(FiberMap::Homeo(CircleHomeo::identity())),
            FiberSpace::Projective => Cocycle::Constant(FiberMap::Mobius(Mat2::IDENTITY)),
        }
    }

    pub fn constant_rotation(beta: f64) -> Self {
        Cocycle::Constant(FiberMap::Homeo(CircleHomeo::rotation(beta)))
    }

    pub fn constant_matrix(m: Mat2) -> Self {
        Cocycle::Constant(FiberMap::Mobius(m))
    }

    pub fn herman(lambda: f64) -> Self {
        Cocycle::Mobius(MobiusFamily::Herman { lambda })
    }

    pub fn coboundary_of(h: Cocycle) -> Self {
        Cocycle::Coboundary(Box::new(h))
    }

    pub fn space(&self) -> FiberSpace {
        match self {
            Cocycle::Constant(m) => m.space(),
            Cocycle::Mobius(_) => FiberSpace::Projective,
            Cocycle::Homeo { .. } => FiberSpace::Circle,
            Cocycle::Coboundary(h) => h.space(),
        }
    }

    pub fn is_matrix_valued(&self) -> bool {
        match self {
            Cocycle::Constant(FiberMap::Mobius(_)) | Cocycle::Mobius(_) => true,
            Cocycle::Coboundary(h) => h.is_matrix_valued(),
            _ => false,
        }
    }

    /// `G_z` with every parameter evaluated.
    pub fn resolve(&self, z: CirclePoint, base: &RotationSystem) -> Result<ResolvedMap> {
        let steps = match self {
            Cocycle::Constant(m) => vec![(Step::Map(m.clone()), false)],
            Cocycle::Mobius(f) => {
                let m = f.matrix(z);
                if !m.is_finite() {
                    return Err(Error::Numeric(format!("non-finite matrix at z = {}", z.value())));
                }
                vec![(Step::Map(FiberMap::Mobius(m)), false)]
            }
            Cocycle::Homeo { param, path } => {
                let t = param.eval(z);
                if !t.is_finite() {
                    return Err(Error::Numeric(format!("non-finite path parameter at z = {}", z.value())));
                }
                vec![(Step::Path { path: path.clone(), t }, false)]
            }
            Cocycle::Coboundary(h) => {
                let mut first = h.resolve(z, base)?;
                let second = h.resolve(base.step(z), base)?.inverted();
                first.steps.extend(second.steps);
                first.steps
            }
        };
        Ok(ResolvedMap { space: self.space(), steps })
    }

    pub fn apply(&self, z: CirclePoint, y: f64, base: &RotationSystem) -> Result<f64> {
        Ok(self.resolve(z, base)?.apply(y))
    }

    pub fn apply_inverse(&self, z: CirclePoint, y: f64, base: &RotationSystem) -> Result<f64> {
        Ok(self.resolve(z, base)?.apply_inverse(y))
    }

    /// `G_z` as a matrix, for matrix-valued cocycles.
    pub fn matrix(&self, z: CirclePoint, base: &RotationSystem) -> Result<Mat2> {
        match self {
            Cocycle::Constant(FiberMap::Mobius(m)) => Ok(*m),
            Cocycle::Mobius(f) => Ok(f.matrix(z)),
            Cocycle::Coboundary(h) if h.is_matrix_valued() => {
                let a = h.matrix(z, base)?;
                let b = h.matrix(base.step(z), base)?;
                Ok(b.inverse().mul(&a).renormalized())
            }
            _ => Err(Error::Unsupported("cocycle is not matrix-valued".into())),
        }
    }

    /// Acts on a projective point; only for matrix-valued cocycles.
    pub fn act_projective(&self, z: CirclePoint, p: ProjectivePoint, base: &RotationSystem) -> Result<ProjectivePoint> {
        Ok(mobius_act(&self.matrix(z, base)?, p))
    }
}

/// Largest fiber distance between `G_z`, `G'_z` and between their inverses
/// over the grids.
pub fn cocycle_distance(
    g: &Cocycle,
    h: &Cocycle,
    z_grid: &[CirclePoint],
    y_grid: &[f64],
    base: &RotationSystem,
) -> Result<f64> {
    if z_grid.is_empty() || y_grid.is_empty() {
        return Err(Error::invalid("distance grids must be nonempty"));
    }
    let space = g.space();
    if h.space() != space {
        return Err(Error::invalid(format!(
            "cocycles act on different fibers ({} vs {})",
            space.name(),
            h.space().name()
        )));
    }
    let per_z: Vec<f64> = z_grid
        .par_iter()
        .map(|&z| -> Result<f64> {
            let a = g.resolve(z, base)?;
            let b = h.resolve(z, base)?;
            Ok(y_grid.iter().fold(0.0f64, |m, &y| {
                let fwd = space.distance(a.apply(y), b.apply(y));
                let inv = space.distance(a.apply_inverse(y), b.apply_inverse(y));
                m.max(fwd).max(inv)
            }))
        })
        .collect::<Result<_>>()?;
    Ok(per_z.into_iter().fold(0.0, f64::max))
}

pub fn uniform_z_grid(n: usize) -> Vec<CirclePoint> {
    (0..n).map(|i| CirclePoint::from_f64(i as f64 / n as f64)).collect()
}

pub fn uniform_y_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine_path_cocycle() -> Cocycle {
        let g = CircleHomeo::new(vec![0.0, 0.4, 1.0], vec![0.05, 0.8, 1.05]).unwrap();
        let h = CircleHomeo::new(vec![0.0, 0.7, 1.0], vec![-0.1, 0.2, 0.9]).unwrap();
        let path = HomeoPath::new(vec![0.0, 1.0], vec![g, h]).unwrap();
        Cocycle::Homeo { param: ParamMap::Cosine, path: Arc::new(path) }
    }

    #[test]
    fn distances_between_constants() {
        let rot = RotationSystem::golden();
        let zs = uniform_z_grid(10);
        let ys = uniform_y_grid(10);
        let a = Cocycle::constant_rotation(0.1);
        let b = Cocycle::constant_rotation(0.35);
        assert_eq!(cocycle_distance(&a, &a, &zs, &ys, &rot).unwrap(), 0.0);
        let d = cocycle_distance(&a, &b, &zs, &ys, &rot).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        assert_eq!(d, cocycle_distance(&b, &a, &zs, &ys, &rot).unwrap());
        let p = Cocycle::identity(FiberSpace::Projective);
        assert!(cocycle_distance(&a, &p, &zs, &ys, &rot).is_err());
    }

    #[test]
    fn coboundary_telescopes() {
        let rot = RotationSystem::golden();
        let h = cosine_path_cocycle();
        let g = Cocycle::coboundary_of(h.clone());
        for i in 0..20 {
            let z0 = CirclePoint::from_f64(i as f64 / 20.0 + 0.013);
            for j in 0..10 {
                let y0 = j as f64 / 10.0;
                let (mut z, mut y) = (z0, y0);
                for n in 1..=100 {
                    y = g.apply(z, y, &rot).unwrap();
                    z = rot.step(z);
                    let direct = h.apply_inverse(z, h.apply(z0, y0, &rot).unwrap(), &rot).unwrap();
                    assert!(crate::base::circle_distance(y, direct) < 1e-9, "n={n}");
                }
            }
        }
    }

    #[test]
    fn matrix_coboundary_is_conjugate_product() {
        let rot = RotationSystem::golden();
        let g = Cocycle::coboundary_of(Cocycle::herman(2.0));
        let z = CirclePoint::from_f64(0.3);
        let m = g.matrix(z, &rot).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-12);
        let p = ProjectivePoint::new(0.4);
        let direct = g.apply(z, p.unit(), &rot).unwrap();
        assert!(crate::base::circle_distance(mobius_act(&m, p).unit(), direct) < 1e-12);
    }
}
