//! Banach-density statistics of visits to a set.

use crate::error::{Error, Result};
use crate::system::DynamicalSystem;

/// Smallest and largest visit frequency of `indicator` over all windows of
/// length `w` inside `[0, n)`.
pub fn banach_visit_density<S, F>(sys: &S, x: &S::Point, indicator: F, n: usize, w: usize) -> Result<(f64, f64)>
where
    S: DynamicalSystem,
    F: Fn(&S::Point) -> bool,
{
    if w == 0 || w > n {
        return Err(Error::invalid(format!("window length {w} must lie in [1, {n}]")));
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u64);
    let mut p = x.clone();
    for i in 0..n {
        let last = *prefix.last().unwrap();
        prefix.push(last + u64::from(indicator(&p)));
        if i + 1 < n {
            p = sys.step(&p)?;
        }
    }
    let (mut lo, mut hi) = (u64::MAX, 0u64);
    for s in 0..=n - w {
        let c = prefix[s + w] - prefix[s];
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok((lo as f64 / w as f64, hi as f64 / w as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Arc, CirclePoint, RotationSystem};
    use crate::base::circle::f64_to_units;

    #[test]
    fn constant_indicators() {
        let rot = RotationSystem::golden();
        assert_eq!(banach_visit_density(&rot, &CirclePoint::ZERO, |_| true, 100, 10).unwrap(), (1.0, 1.0));
        assert_eq!(banach_visit_density(&rot, &CirclePoint::ZERO, |_| false, 100, 10).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn arc_visits_match_length() {
        let rot = RotationSystem::golden();
        let arc = Arc::new(CirclePoint::from_f64(0.2), f64_to_units(0.3));
        let (lo, hi) = banach_visit_density(&rot, &CirclePoint::from_f64(0.77), |p| arc.contains(*p), 100_000, 10_000)
            .unwrap();
        assert!(lo <= hi);
        assert!((lo - 0.3).abs() < 1e-2 && (hi - 0.3).abs() < 1e-2, "{lo} {hi}");
    }
}
