//! Exact circle arithmetic on `R/Z` in 128-bit fixed point.
//!
//! A point is stored as an integer number of units of `2^-128`, so addition
//! of rotation numbers is a wrapping add and reduction mod 1 is free. Every
//! orbit point `z + n*alpha` is therefore exact in the representation, which
//! is what makes tower disjointness and coding ties decidable.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `2^128` as an `f64`.
pub const UNITS_PER_TURN: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of the circle `R/Z`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CirclePoint(u128);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0);

    pub const fn from_units(units: u128) -> Self {
        CirclePoint(units)
    }

    pub const fn units(self) -> u128 {
        self.0
    }

    /// Reduces `x` mod 1. The conversion is exact for every finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        let r = x.rem_euclid(1.0);
        if !(r < 1.0) || r.is_nan() {
            return CirclePoint(0);
        }
        CirclePoint((r * UNITS_PER_TURN) as u128)
    }

    pub fn value(self) -> f64 {
        units_to_f64(self.0)
    }

    pub fn add_units(self, units: u128) -> Self {
        CirclePoint(self.0.wrapping_add(units))
    }

    pub fn sub_units(self, units: u128) -> Self {
        CirclePoint(self.0.wrapping_sub(units))
    }

    /// Signed displacement `self - other` taken in `[-1/2, 1/2)`.
    pub fn signed_offset(self, other: CirclePoint) -> f64 {
        let d = self.0.wrapping_sub(other.0) as i128;
        d as f64 / UNITS_PER_TURN
    }

    /// `min(|a-b|, 1-|a-b|)`, symmetric and at most `1/2`.
    pub fn distance(self, other: CirclePoint) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        units_to_f64(d.min(d.wrapping_neg()))
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CirclePoint({})", self.value())
    }
}

pub fn units_to_f64(units: u128) -> f64 {
    units as f64 / UNITS_PER_TURN
}

/// `x * 2^128` rounded down, for `x` in `[0, 1)`.
pub fn f64_to_units(x: f64) -> u128 {
    CirclePoint::from_f64(x).units()
}

/// Circle distance between two reals read mod 1.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    // The absolute value first keeps the result exactly symmetric.
    let d = (a - b).abs().rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Half-open arc `[start, start + len)` of the circle, `len < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Arc {
    pub start: CirclePoint,
    pub len: u128,
}

impl Arc {
    pub fn new(start: CirclePoint, len: u128) -> Self {
        Arc { start, len }
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        p.units().wrapping_sub(self.start.units()) < self.len
    }

    /// Offset of `p` from the start of the arc (meaningful when contained).
    pub fn offset(&self, p: CirclePoint) -> u128 {
        p.units().wrapping_sub(self.start.units())
    }

    pub fn end(&self) -> CirclePoint {
        self.start.add_units(self.len)
    }

    pub fn shifted(&self, units: u128) -> Arc {
        Arc { start: self.start.add_units(units), len: self.len }
    }

    pub fn length(&self) -> f64 {
        units_to_f64(self.len)
    }

    pub fn intersects(&self, other: &Arc) -> bool {
        if self.len == 0 || other.len == 0 {
            return false;
        }
        self.contains(other.start) || other.contains(self.start)
    }
}

/// A rotation number in `(0, 1)` together with how many of its bits are
/// trustworthy.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Alpha {
    units: u128,
    precision_bits: u32,
    rational: Option<(u128, u128)>,
    label: String,
}

impl Alpha {
    pub fn from_units(units: u128, precision_bits: u32) -> Result<Self> {
        if units == 0 {
            return Err(Error::invalid("rotation number must lie in (0, 1)"));
        }
        Ok(Alpha {
            units,
            precision_bits: precision_bits.min(128),
            rational: None,
            label: format!("0x{units:032x}"),
        })
    }

    /// The fractional part of `(sqrt(5) - 1) / 2`, correct to 128 bits.
    pub fn golden() -> Self {
        let units = sqrt_fraction_units(5) ;
        // (sqrt5 - 1)/2 = (frac(sqrt5) + 1)/2 since floor(sqrt5) = 2.
        let half = (units >> 1) | (1u128 << 127);
        Alpha { units: half, precision_bits: 127, rational: None, label: "golden".into() }
    }

    /// `sqrt(2) - 1`.
    pub fn silver() -> Self {
        let mut a = Self::sqrt_frac(2).expect("2 is not a square");
        a.label = "silver".into();
        a
    }

    /// Fractional part of `sqrt(n)` for a non-square `n`.
    pub fn sqrt_frac(n: u64) -> Result<Self> {
        let r = (n as f64).sqrt().round() as u64;
        if r * r == n {
            return Err(Error::invalid(format!("sqrt({n}) is an integer")));
        }
        Ok(Alpha {
            units: sqrt_fraction_units(n),
            precision_bits: 128,
            rational: None,
            label: format!("sqrt({n})"),
        })
    }

    /// Exact rational `p/q` in `(0, 1)`.
    pub fn rational(p: u128, q: u128) -> Result<Self> {
        if q == 0 || p == 0 || p >= q {
            return Err(Error::invalid(format!("{p}/{q} is not in (0, 1)")));
        }
        let num = BigUint::from(p) << 128u32;
        let units = (num / BigUint::from(q)).to_u128().unwrap_or(u128::MAX);
        Ok(Alpha { units, precision_bits: 128, rational: Some((p, q)), label: format!("{p}/{q}") })
    }

    /// Exact binary value of an `f64` (53 significant bits).
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::invalid(format!("rotation number {x} not in (0, 1)")));
        }
        let mut a = Self::from_units(f64_to_units(x), 53)?;
        a.label = format!("{x}");
        Ok(a)
    }

    /// Parses `golden`, `silver`, `sqrt(n)`, `p/q` or a decimal `0.ddd…`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "golden" => return Ok(Self::golden()),
            "silver" => return Ok(Self::silver()),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let n: u64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::parse("alpha", format!("bad sqrt argument {inner:?}")))?;
            return Self::sqrt_frac(n);
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: u128 = p.trim().parse().map_err(|_| Error::parse("alpha", "bad numerator"))?;
            let q: u128 = q.trim().parse().map_err(|_| Error::parse("alpha", "bad denominator"))?;
            return Self::rational(p, q);
        }
        if let Some(hex) = s.strip_prefix("0x") {
            let units = u128::from_str_radix(hex, 16)
                .map_err(|_| Error::parse("alpha", format!("bad hex literal {s:?}")))?;
            return Self::from_units(units, 128);
        }
        Self::parse_decimal(s)
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix("0.")
            .or_else(|| s.strip_prefix('.'))
            .ok_or_else(|| Error::parse("alpha", format!("expected a decimal in (0,1), got {s:?}")))?;
        if digits.is_empty() || digits.len() > 200 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse("alpha", format!("bad decimal digits in {s:?}")));
        }
        let num = BigUint::parse_bytes(digits.as_bytes(), 10)
            .ok_or_else(|| Error::parse("alpha", "bad decimal"))?;
        if num.is_zero() {
            return Err(Error::invalid("rotation number must lie in (0, 1)"));
        }
        let den = num_traits::pow(BigUint::from(10u32), digits.len());
        let units = ((num << 128u32) / den).to_u128().unwrap_or(u128::MAX);
        let bits = ((digits.len() as f64) * std::f64::consts::LOG2_10).floor() as u32;
        let mut a = Self::from_units(units, bits.min(128))?;
        a.label = s.to_string();
        Ok(a)
    }

    pub fn units(&self) -> u128 {
        self.units
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn exact_rational(&self) -> Option<(u128, u128)> {
        self.rational
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self) -> f64 {
        units_to_f64(self.units)
    }

    /// Canonical text form that reparses to the same bits.
    pub fn to_spec(&self) -> String {
        match self.rational {
            Some((p, q)) => format!("{p}/{q}"),
            None => format!("0x{:032x}@{}", self.units, self.precision_bits),
        }
    }

    /// Inverse of [`Alpha::to_spec`]; also accepts anything [`Alpha::parse`] does.
    pub fn from_spec(s: &str) -> Result<Self> {
        if let Some((hex, bits)) = s.split_once('@') {
            let hex = hex
                .strip_prefix("0x")
                .ok_or_else(|| Error::parse("alpha", "expected 0x prefix"))?;
            let units = u128::from_str_radix(hex, 16)
                .map_err(|_| Error::parse("alpha", format!("bad hex literal {hex:?}")))?;
            let bits: u32 = bits.parse().map_err(|_| Error::parse("alpha", "bad precision"))?;
            let mut a = Self::from_units(units, bits)?;
            a.label = s.to_string();
            return Ok(a);
        }
        Self::parse(s)
    }
}

/// `frac(sqrt(n)) * 2^128`, rounded down.
fn sqrt_fraction_units(n: u64) -> u128 {
    let scaled = BigUint::from(n) << 256u32;
    let root = scaled.sqrt();
    let mask = (BigUint::one() << 128u32) - BigUint::one();
    (root & mask).to_u128().expect("masked to 128 bits")
}

/// Rotation `z -> z + alpha`.
pub fn rotation_step(z: CirclePoint, alpha: &Alpha) -> CirclePoint {
    z.add_units(alpha.units())
}
