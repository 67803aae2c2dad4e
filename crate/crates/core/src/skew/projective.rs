//! `SL(2, R)` matrices and their action on the projective line.
//!
//! A line through the origin is stored by its angle `theta` in `[0, pi)`.
//! As a fiber coordinate it is rescaled to `y = theta / pi` in `[0, 1)`.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Counterclockwise rotation by `phi`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn diag(l1: f64, l2: f64) -> Self {
        Mat2::new(l1, 0.0, 0.0, l2)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// Divides by `sqrt(|det|)` so the determinant is back to `+-1`.
    pub fn renormalized(&self) -> Mat2 {
        let det = self.det().abs();
        if det > 0.0 && det.is_finite() {
            self.scale(1.0 / det.sqrt())
        } else {
            *self
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Largest singular value, in closed form.
    pub fn op_norm(&self) -> f64 {
        let t = self.frobenius_sq();
        let det = self.det();
        let disc = ((t - 2.0 * det) * (t + 2.0 * det)).max(0.0);
        ((t + disc.sqrt()) / 2.0).sqrt()
    }

    /// Angle in `[0, pi)` of the top right-singular vector, i.e. the
    /// direction stretched most.
    pub fn top_right_singular_angle(&self) -> f64 {
        // Eigenvector of M^T M for its top eigenvalue.
        let p = self.a * self.a + self.c * self.c;
        let q = self.a * self.b + self.c * self.d;
        let r = self.b * self.b + self.d * self.d;
        let angle = 0.5 * (2.0 * q).atan2(p - r);
        angle.rem_euclid(PI)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    /// Angle of the top left-singular vector: where the most stretched
    /// direction lands.
    pub fn top_left_singular_angle(&self) -> f64 {
        self.transpose().top_right_singular_angle()
    }

    pub fn apply_vec(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

/// A line through the origin of `R^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    theta: f64,
}

impl ProjectivePoint {
    pub fn new(theta: f64) -> Self {
        let t = theta.rem_euclid(PI);
        ProjectivePoint { theta: if t >= PI { 0.0 } else { t } }
    }

    /// From the fiber coordinate `y = theta / pi`.
    pub fn from_unit(y: f64) -> Self {
        Self::new(y * PI)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn unit(&self) -> f64 {
        let y = self.theta / PI;
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    }

    /// Angular distance scaled so the diameter is 1.
    pub fn distance(&self, o: &ProjectivePoint) -> f64 {
        let d = (self.theta - o.theta).abs();
        d.min(PI - d) / (PI / 2.0)
    }
}

/// `theta -> angle of M (cos theta, sin theta)`, reduced mod `pi`.
pub fn mobius_act(m: &Mat2, p: ProjectivePoint) -> ProjectivePoint {
    let (s, c) = p.theta.sin_cos();
    let (x, y) = m.apply_vec((c, s));
    ProjectivePoint::new(y.atan2(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_actions() {
        let p = ProjectivePoint::new(0.7);
        assert_eq!(mobius_act(&Mat2::IDENTITY, p).theta(), 0.7);
        assert_eq!(mobius_act(&Mat2::diag(2.0, 0.5), ProjectivePoint::new(0.0)).theta(), 0.0);
        let r = mobius_act(&Mat2::rotation(2.9), p);
        assert!(r.distance(&ProjectivePoint::new(3.6)) < 1e-12);
    }

    #[test]
    fn norm_matches_singular_values() {
        let m = Mat2::diag(3.0, 1.0 / 3.0);
        assert!((m.op_norm() - 3.0).abs() < 1e-14);
        assert!((Mat2::rotation(1.1).op_norm() - 1.0).abs() < 1e-14);
        let m = Mat2::new(1.0, 2.0, 0.5, 2.0);
        // Power iteration oracle on M^T M.
        let mut v = (1.0, 0.3);
        for _ in 0..200 {
            let w = m.apply_vec(v);
            let u = (m.a * w.0 + m.c * w.1, m.b * w.0 + m.d * w.1);
            let n = (u.0 * u.0 + u.1 * u.1).sqrt();
            v = (u.0 / n, u.1 / n);
        }
        let w = m.apply_vec(v);
        assert!(((w.0 * w.0 + w.1 * w.1).sqrt() - m.op_norm()).abs() < 1e-12);
        let ang = m.top_right_singular_angle();
        assert!(ProjectivePoint::new(ang).distance(&ProjectivePoint::new(v.1.atan2(v.0))) < 1e-9);
    }

    #[test]
    fn metric_has_unit_diameter() {
        let a = ProjectivePoint::new(0.0);
        assert!((a.distance(&ProjectivePoint::new(PI / 2.0)) - 1.0).abs() < 1e-15);
        assert!(a.distance(&ProjectivePoint::new(PI - 1e-9)) < 1e-8);
    }
}
