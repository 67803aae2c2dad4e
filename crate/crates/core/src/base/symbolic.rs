//! Sturmian and Thue–Morse subshifts over `{0, 1}`.

use std::ops::Range;

use super::circle::CirclePoint;
use super::rotation::RotationSystem;
use crate::error::{Error, Result};

/// Which endpoint convention is used when coding a rotation orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coding {
    /// `x[n] = floor((n+1)a + r) - floor(n a + r)`.
    Lower,
    /// `x[n] = ceil((n+1)a + r) - ceil(n a + r)`.
    Upper,
}

/// A two-sided Thue–Morse sequence.
///
/// With `t` the one-sided Thue–Morse word, the point is
/// `x[n] = complement ^ t(n + offset)` for `n + offset >= 0`, and
/// `x[n] = complement ^ left ^ t(-1 - (n + offset))` otherwise. The four
/// choices of `(left, complement)` are the fixed points of the squared
/// substitution, and `offset` shifts along the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThueMorsePoint {
    pub left: bool,
    pub complement: bool,
    pub offset: i64,
}

impl ThueMorsePoint {
    pub fn new(offset: i64) -> Self {
        ThueMorsePoint { left: false, complement: false, offset }
    }

    pub fn complemented(self) -> Self {
        ThueMorsePoint { complement: !self.complement, ..self }
    }

    pub fn coordinate(&self, n: i64) -> u8 {
        let i = n as i128 + self.offset as i128;
        let bit = if i >= 0 {
            thue_morse(i as u128)
        } else {
            thue_morse((-1 - i) as u128) ^ u8::from(self.left)
        };
        bit ^ u8::from(self.complement)
    }
}

/// Parity of the binary digit sum.
pub fn thue_morse(i: u128) -> u8 {
    (i.count_ones() & 1) as u8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolicPoint {
    Sturmian { intercept: CirclePoint, coding: Coding },
    ThueMorse(ThueMorsePoint),
}

#[derive(Clone, Debug)]
pub enum SymbolicSystem {
    Sturmian(RotationSystem),
    ThueMorse,
}

impl SymbolicSystem {
    pub fn name(&self) -> &'static str {
        match self {
            SymbolicSystem::Sturmian(_) => "sturmian",
            SymbolicSystem::ThueMorse => "thue-morse",
        }
    }

    fn check(&self, p: &SymbolicPoint) -> Result<()> {
        match (self, p) {
            (SymbolicSystem::Sturmian(_), SymbolicPoint::Sturmian { .. })
            | (SymbolicSystem::ThueMorse, SymbolicPoint::ThueMorse(_)) => Ok(()),
            _ => Err(Error::invalid(format!("point {p:?} does not belong to the {} system", self.name()))),
        }
    }

    /// Coordinate `x[n]`. The point must belong to this system.
    pub fn coordinate(&self, p: &SymbolicPoint, n: i64) -> u8 {
        match (self, p) {
            (SymbolicSystem::Sturmian(rot), SymbolicPoint::Sturmian { intercept, coding }) => {
                sturmian_bit(rot.iterate(*intercept, n as i128).units(), rot.alpha_units(), *coding)
            }
            (_, SymbolicPoint::ThueMorse(t)) => t.coordinate(n),
            _ => panic!("point {p:?} does not belong to the {} system", self.name()),
        }
    }

    /// The left shift applied `k` times.
    pub fn shift(&self, p: &SymbolicPoint, k: i64) -> SymbolicPoint {
        match (self, p) {
            (SymbolicSystem::Sturmian(rot), SymbolicPoint::Sturmian { intercept, coding }) => {
                SymbolicPoint::Sturmian { intercept: rot.iterate(*intercept, k as i128), coding: *coding }
            }
            (_, SymbolicPoint::ThueMorse(t)) => {
                SymbolicPoint::ThueMorse(ThueMorsePoint { offset: t.offset.wrapping_add(k), ..*t })
            }
            _ => panic!("point {p:?} does not belong to the {} system", self.name()),
        }
    }
}

fn sturmian_bit(p: u128, a: u128, coding: Coding) -> u8 {
    let threshold = a.wrapping_neg();
    match coding {
        Coding::Lower => u8::from(p >= threshold),
        Coding::Upper => u8::from(p > threshold || p == 0),
    }
}

/// Coordinates `x[m..n)` of a point; an empty or reversed range gives an
/// empty word.
pub fn symbolic_point(sys: &SymbolicSystem, point: &SymbolicPoint, range: Range<i64>) -> Result<Vec<u8>> {
    sys.check(point)?;
    if range.start >= range.end {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity((range.end - range.start) as usize);
    match (sys, point) {
        (SymbolicSystem::Sturmian(rot), SymbolicPoint::Sturmian { intercept, coding }) => {
            let a = rot.alpha_units();
            let mut p = rot.iterate(*intercept, range.start as i128).units();
            for _ in range {
                out.push(sturmian_bit(p, a, *coding));
                p = p.wrapping_add(a);
            }
        }
        (_, SymbolicPoint::ThueMorse(t)) => out.extend(range.map(|n| t.coordinate(n))),
        _ => unreachable!(),
    }
    Ok(out)
}

/// The codings of a rotation point.
#[derive(Clone, Debug)]
pub struct SturmianFiber {
    pub points: Vec<SymbolicPoint>,
    /// Index `n0` with `z + n0 alpha = 0`, when it lies in the window.
    pub critical_index: Option<i128>,
}

impl SturmianFiber {
    pub fn cardinality(&self) -> usize {
        self.points.len()
    }
}

/// Multiplicative inverse of an odd `a` modulo `2^128`.
fn inverse_mod_2_128(a: u128) -> u128 {
    debug_assert!(a & 1 == 1);
    let mut x = a;
    for _ in 0..7 {
        x = x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

/// The `n` of smallest magnitude with `z + n a = 0` in the representation.
pub fn critical_index(z: CirclePoint, a: u128) -> Option<i128> {
    let s = a.trailing_zeros();
    let target = z.units().wrapping_neg();
    if s >= 128 || target.trailing_zeros() < s {
        return if target == 0 { Some(0) } else { None };
    }
    let modulus_bits = 128 - s;
    let n = (target >> s).wrapping_mul(inverse_mod_2_128(a >> s));
    let n = if modulus_bits == 128 {
        n
    } else {
        n & ((1u128 << modulus_bits) - 1)
    };
    let half = if modulus_bits == 128 { 1u128 << 127 } else { 1u128 << (modulus_bits - 1) };
    let signed = if n >= half {
        if modulus_bits == 128 {
            n as i128
        } else {
            n as i128 - (1i128 << modulus_bits)
        }
    } else {
        n as i128
    };
    Some(signed)
}

/// Fiber of the factor map from the Sturmian subshift onto the rotation.
///
/// The lower and upper codings of `z` coincide unless the orbit of `z`
/// hits `0` (equivalently `-alpha`), which is decided exactly for orbit
/// indices with `|n| <= window`.
pub fn sturmian_fiber(rot: &RotationSystem, z: CirclePoint, window: u64) -> SturmianFiber {
    let lower = SymbolicPoint::Sturmian { intercept: z, coding: Coding::Lower };
    let upper = SymbolicPoint::Sturmian { intercept: z, coding: Coding::Upper };
    match critical_index(z, rot.alpha_units()) {
        Some(n0) if n0.unsigned_abs() <= window as u128 => {
            SturmianFiber { points: vec![lower, upper], critical_index: Some(n0) }
        }
        _ => SturmianFiber { points: vec![lower], critical_index: None },
    }
}

/// The two Thue–Morse points over the same point of the complement factor.
pub fn thue_morse_fiber(p: ThueMorsePoint) -> [ThueMorsePoint; 2] {
    [p, p.complemented()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn golden() -> SymbolicSystem {
        SymbolicSystem::Sturmian(RotationSystem::golden())
    }

    #[test]
    fn sturmian_golden_prefix() {
        let sys = golden();
        let p = SymbolicPoint::Sturmian { intercept: CirclePoint::ZERO, coding: Coding::Lower };
        // Oracle: floor((n+1)a) - floor(n a) in f64 (far from ties here).
        let a = (5f64.sqrt() - 1.0) / 2.0;
        let oracle: Vec<u8> =
            (0..6).map(|n| (((n + 1) as f64 * a).floor() - (n as f64 * a).floor()) as u8).collect();
        assert_eq!(symbolic_point(&sys, &p, 0..6).unwrap(), oracle);
        assert_eq!(symbolic_point(&sys, &p, 0..5).unwrap(), vec![0, 1, 0, 1, 1]);
        assert_eq!(symbolic_point(&sys, &p, 1..6).unwrap(), vec![1, 0, 1, 1, 0]);
        let up = SymbolicPoint::Sturmian { intercept: CirclePoint::ZERO, coding: Coding::Upper };
        assert_eq!(symbolic_point(&sys, &up, 0..5).unwrap(), vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn thue_morse_prefix_and_empty() {
        let p = SymbolicPoint::ThueMorse(ThueMorsePoint::new(0));
        let w = symbolic_point(&SymbolicSystem::ThueMorse, &p, 0..8).unwrap();
        assert_eq!(w, vec![0, 1, 1, 0, 1, 0, 0, 1]);
        assert!(symbolic_point(&SymbolicSystem::ThueMorse, &p, 5..5).unwrap().is_empty());
        assert!(symbolic_point(&golden(), &p, 0..3).is_err());
    }

    #[test]
    fn sturmian_complexity_is_l_plus_one() {
        let sys = golden();
        let p = SymbolicPoint::Sturmian { intercept: CirclePoint::from_f64(0.123), coding: Coding::Lower };
        let w = symbolic_point(&sys, &p, 0..20000).unwrap();
        for l in 1..=12 {
            let words: HashSet<&[u8]> = w.windows(l).collect();
            assert_eq!(words.len(), l + 1, "length {l}");
        }
    }

    #[test]
    fn thue_morse_words_are_legal_on_both_sides() {
        // Every factor of the two-sided point must occur in the one-sided word.
        let one_sided: Vec<u8> = (0..1 << 14).map(|i| thue_morse(i)).collect();
        let legal: HashSet<&[u8]> = one_sided.windows(8).collect();
        for left in [false, true] {
            let p = ThueMorsePoint { left, complement: false, offset: 0 };
            let w: Vec<u8> = (-300..300).map(|n| p.coordinate(n)).collect();
            assert!(w.windows(8).all(|f| legal.contains(f)));
        }
    }

    #[test]
    fn complement_commutes_with_generation() {
        let p = ThueMorsePoint { left: true, complement: false, offset: -37 };
        for n in -100..100 {
            assert_eq!(p.complemented().coordinate(n), 1 - p.coordinate(n));
        }
    }

    #[test]
    fn zero_has_a_two_point_fiber() {
        let rot = RotationSystem::golden();
        let f = sturmian_fiber(&rot, CirclePoint::ZERO, 1000);
        assert_eq!(f.cardinality(), 2);
        let sys = SymbolicSystem::Sturmian(rot);
        let a = symbolic_point(&sys, &f.points[0], -50..50).unwrap();
        let b = symbolic_point(&sys, &f.points[1], -50..50).unwrap();
        let diff: Vec<i64> = (0..100).filter(|&i| a[i] != b[i]).map(|i| i as i64 - 50).collect();
        assert_eq!(diff, vec![-1, 0]);
    }

    #[test]
    fn critical_orbit_points_are_found() {
        let rot = RotationSystem::golden();
        for n0 in [-5000i128, -1, 3, 777] {
            let z = rot.iterate(CirclePoint::ZERO, -n0);
            assert_eq!(critical_index(z, rot.alpha_units()), Some(n0));
            assert_eq!(sturmian_fiber(&rot, z, 10_000).critical_index, Some(n0));
        }
        let generic = sturmian_fiber(&rot, CirclePoint::from_f64(0.3), 1 << 40);
        assert_eq!(generic.cardinality(), 1);
    }
}
