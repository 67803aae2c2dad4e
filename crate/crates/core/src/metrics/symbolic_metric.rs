//! The truncated product metric on two-sided binary sequences.
//!
//! `d(u, v) = sum_{|k| <= 64} 2^-|k| |u_k - v_k| / sum_{|k| <= 64} 2^-|k|`,
//! which has diameter 1. Sums are carried exactly in units of `2^-64`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::base::{symbolic_point, CirclePoint, Coding, SymbolicPoint, SymbolicSystem, ThueMorsePoint};
use crate::error::Result;
use crate::system::{DynamicalSystem, Observation};

pub const RADIUS: i64 = 64;

/// `sum_{|k| <= 64} 2^{64-|k|}`.
const NORM_UNITS: u128 = 3 * (1u128 << 64) - 2;

fn to_distance(units: u128) -> f64 {
    units as f64 / NORM_UNITS as f64
}

/// Weighted disagreement of two words centred at index `RADIUS`.
fn centred_units(u: &[u8], v: &[u8]) -> u128 {
    let mut s = 0u128;
    for k in -RADIUS..=RADIUS {
        let j = (k + RADIUS) as usize;
        if u[j] != v[j] {
            s += 1u128 << (64 - k.unsigned_abs());
        }
    }
    s
}

pub fn symbolic_distance(sys: &SymbolicSystem, a: &SymbolicPoint, b: &SymbolicPoint) -> Result<f64> {
    let u = symbolic_point(sys, a, -RADIUS..RADIUS + 1)?;
    let v = symbolic_point(sys, b, -RADIUS..RADIUS + 1)?;
    Ok(to_distance(centred_units(&u, &v)))
}

/// `d(T^i x, T^i y)` for `i < n`, in linear time.
pub fn symbolic_distance_sequence(
    sys: &SymbolicSystem,
    x: &SymbolicPoint,
    y: &SymbolicPoint,
    n: usize,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = RADIUS as usize;
    let u = symbolic_point(sys, x, -RADIUS..n as i64 + RADIUS)?;
    let v = symbolic_point(sys, y, -RADIUS..n as i64 + RADIUS)?;
    let diff: Vec<u128> = u.iter().zip(&v).map(|(a, b)| u128::from(a != b)).collect();
    // Position i of the orbit sits at index i + r of `diff`.
    let mut right = vec![0u128; n];
    let mut acc: u128 = (0..=r).map(|k| diff[n - 1 + r + k] << (64 - k)).sum();
    right[n - 1] = acc;
    for i in (0..n - 1).rev() {
        acc = (diff[i + r] << 64) + ((acc - diff[i + 2 * r + 1]) >> 1);
        right[i] = acc;
    }
    let mut out = Vec::with_capacity(n);
    let mut left: u128 = (1..=r).map(|k| diff[r - k] << (64 - k)).sum();
    for i in 0..n {
        out.push(to_distance(left + right[i]));
        left = (diff[i + r] << 63) + ((left - diff[i]) >> 1);
    }
    Ok(out)
}

impl DynamicalSystem for SymbolicSystem {
    type Point = SymbolicPoint;

    fn name(&self) -> String {
        match self {
            SymbolicSystem::Sturmian(rot) => format!("sturmian({})", rot.alpha().label()),
            SymbolicSystem::ThueMorse => "thue-morse".into(),
        }
    }

    fn step(&self, p: &SymbolicPoint) -> Result<SymbolicPoint> {
        Ok(self.shift(p, 1))
    }

    fn distance(&self, a: &SymbolicPoint, b: &SymbolicPoint) -> f64 {
        symbolic_distance(self, a, b).expect("points belong to the system")
    }

    fn diameter(&self) -> f64 {
        1.0
    }

    fn observe(&self, p: &SymbolicPoint) -> Observation {
        Observation { z: f64::from(self.coordinate(p, 0)), ..Default::default() }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> SymbolicPoint {
        match self {
            SymbolicSystem::Sturmian(_) => SymbolicPoint::Sturmian {
                intercept: CirclePoint::from_units(rng.gen()),
                coding: Coding::Lower,
            },
            SymbolicSystem::ThueMorse => SymbolicPoint::ThueMorse(ThueMorsePoint {
                left: rng.gen(),
                complement: rng.gen(),
                offset: rng.gen_range(0..1i64 << 40),
            }),
        }
    }

    fn sample_near(&self, x: &SymbolicPoint, delta: f64, rng: &mut ChaCha8Rng) -> Option<SymbolicPoint> {
        // Agreement on |k| <= r forces d < 2^{1-r} / 3.
        let r = ((2.0 / (3.0 * delta)).log2().ceil().max(0.0) as u32 + 1).min(62);
        for attempt in 0..64 {
            let y = match (self, x) {
                (SymbolicSystem::Sturmian(_), SymbolicPoint::Sturmian { intercept, coding }) => {
                    let scale = 0.5f64.powi(2 * r as i32 + attempt / 4 + 2);
                    let eps = (rng.gen::<f64>() - 0.5) * scale;
                    SymbolicPoint::Sturmian {
                        intercept: CirclePoint::from_f64(intercept.value() + eps),
                        coding: *coding,
                    }
                }
                (SymbolicSystem::ThueMorse, SymbolicPoint::ThueMorse(t)) => {
                    let s = r + 2 + rng.gen_range(0..6);
                    let j = rng.gen_range(1..1i64 << 16);
                    SymbolicPoint::ThueMorse(ThueMorsePoint { offset: t.offset + (j << s), ..*t })
                }
                _ => return None,
            };
            if self.distance(x, &y) < delta {
                return Some(y);
            }
        }
        None
    }

    /// Thue–Morse: `x = T^m t` against the complement of `T^{m + 2^k} t`
    /// with `m = 2^{k+1} j + 2^{k-1}`. The two agree on the central
    /// `2^{k-1}` coordinates yet differ on a positive fraction of the orbit.
    /// Sturmian: the two codings of a point of the critical orbit.
    fn adversarial_pairs(
        &self,
        delta: f64,
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<(SymbolicPoint, SymbolicPoint)> {
        let mut out = Vec::with_capacity(count);
        match self {
            SymbolicSystem::ThueMorse => {
                let mut k = 2u32;
                while k < 40 {
                    let m = 1i64 << (k + 1);
                    let x = ThueMorsePoint::new(m + (1 << (k - 1)));
                    let y = ThueMorsePoint { complement: true, ..ThueMorsePoint::new(x.offset + (1 << k)) };
                    if self.distance(&SymbolicPoint::ThueMorse(x), &SymbolicPoint::ThueMorse(y)) < delta {
                        break;
                    }
                    k += 1;
                }
                for _ in 0..count {
                    let j: i64 = rng.gen_range(1..1 << 16);
                    let x = ThueMorsePoint::new((j << (k + 1)) + (1 << (k - 1)));
                    let y = ThueMorsePoint { complement: true, ..ThueMorsePoint::new(x.offset + (1 << k)) };
                    let (px, py) = (SymbolicPoint::ThueMorse(x), SymbolicPoint::ThueMorse(y));
                    if self.distance(&px, &py) < delta {
                        out.push((px, py));
                    }
                }
            }
            SymbolicSystem::Sturmian(rot) => {
                for _ in 0..count {
                    let m: i64 = rng.gen_range(-1_000_000..1_000_000);
                    let z = rot.iterate(CirclePoint::ZERO, -(m as i128));
                    let px = SymbolicPoint::Sturmian { intercept: z, coding: Coding::Lower };
                    let py = SymbolicPoint::Sturmian { intercept: z, coding: Coding::Upper };
                    if self.distance(&px, &py) < delta {
                        out.push((px, py));
                    }
                }
            }
        }
        out
    }

    fn distance_sequence(&self, x: &SymbolicPoint, y: &SymbolicPoint, n: usize) -> Result<Vec<f64>> {
        symbolic_distance_sequence(self, x, y, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::RotationSystem;
    use crate::rng::task_rng;

    /// Direct evaluation with f64 weights, no recurrences.
    fn oracle(sys: &SymbolicSystem, x: &SymbolicPoint, y: &SymbolicPoint, i: i64) -> f64 {
        let mut s = 0.0;
        let mut norm = 0.0;
        for k in -RADIUS..=RADIUS {
            let w = 0.5f64.powi(k.abs() as i32);
            norm += w;
            if sys.coordinate(x, i + k) != sys.coordinate(y, i + k) {
                s += w;
            }
        }
        s / norm
    }

    #[test]
    fn sequence_matches_direct_sum() {
        let mut rng = task_rng(1, 0);
        for sys in [SymbolicSystem::ThueMorse, SymbolicSystem::Sturmian(RotationSystem::golden())] {
            for _ in 0..5 {
                let x = sys.sample(&mut rng);
                let y = sys.sample(&mut rng);
                let seq = sys.distance_sequence(&x, &y, 300).unwrap();
                for (i, d) in seq.iter().enumerate() {
                    assert!((d - oracle(&sys, &x, &y, i as i64)).abs() < 1e-15);
                }
                let step = sys.distance(&sys.shift(&x, 7), &sys.shift(&y, 7));
                assert_eq!(step, seq[7]);
            }
        }
    }

    #[test]
    fn complement_is_at_distance_one() {
        let x = SymbolicPoint::ThueMorse(ThueMorsePoint::new(12345));
        let y = SymbolicPoint::ThueMorse(ThueMorsePoint::new(12345).complemented());
        let seq = SymbolicSystem::ThueMorse.distance_sequence(&x, &y, 1000).unwrap();
        assert!(seq.iter().all(|&d| d == 1.0));
    }

    #[test]
    fn near_samples_are_near() {
        let mut rng = task_rng(2, 0);
        for sys in [SymbolicSystem::ThueMorse, SymbolicSystem::Sturmian(RotationSystem::golden())] {
            for delta in [0.3, 0.05, 0.01] {
                let x = sys.sample(&mut rng);
                let y = sys.sample_near(&x, delta, &mut rng).expect("found");
                assert!(sys.distance(&x, &y) < delta);
            }
            for (a, b) in sys.adversarial_pairs(0.02, 10, &mut rng) {
                assert!(sys.distance(&a, &b) < 0.02);
            }
        }
    }
}
