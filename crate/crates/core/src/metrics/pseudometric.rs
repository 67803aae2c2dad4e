//! Finite-horizon Besicovitch and Weyl estimates.
//!
//! Both estimators run on an explicit sequence of orbit distances
//! `d_i = d(T^i x, T^i y)`, so they can be exercised without a system.

use crate::error::{Error, Result};
use crate::system::DynamicalSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowScheme {
    /// Prefix averages `[0, m)`.
    Prefix,
    /// Windows of length `w` placed every `stride` steps.
    Sliding { w: usize, stride: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudometricEstimate {
    pub value: f64,
    pub horizon: usize,
    pub scheme: WindowScheme,
    /// Prefix averages at the horizons `n/4, n/2, n`.
    pub checkpoints: Vec<(usize, f64)>,
    /// Largest window averages `(start, len, average)`, best first.
    pub top_windows: Vec<(usize, usize, f64)>,
}

/// Compensated sum; exact for the constant sequences produced by isometries
/// up to the final rounding.
/// Compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

pub fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut acc = Neumaier::default();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

fn mean(xs: &[f64]) -> f64 {
    neumaier_sum(xs) / xs.len() as f64
}

fn checkpoint_lengths(n: usize) -> Vec<usize> {
    let mut v = vec![(n / 4).max(1), (n / 2).max(1), n];
    v.dedup();
    v
}

/// Largest prefix average over the checkpoints `n/4, n/2, n`.
pub fn besicovitch_from_distances(d: &[f64]) -> Result<PseudometricEstimate> {
    let n = d.len();
    if n == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let checkpoints: Vec<(usize, f64)> = checkpoint_lengths(n).into_iter().map(|m| (m, mean(&d[..m]))).collect();
    let value = checkpoints.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(PseudometricEstimate { value, horizon: n, scheme: WindowScheme::Prefix, checkpoints, top_windows: Vec::new() })
}

/// Largest average over windows of length `w` (stride `ceil(w/4)`, plus the
/// final window), also counting the prefix checkpoint windows so the value
/// never falls below the Besicovitch estimate at the same horizon.
pub fn weyl_from_distances(d: &[f64], w: usize) -> Result<PseudometricEstimate> {
    let n = d.len();
    if w == 0 {
        return Err(Error::invalid("window length must be at least 1"));
    }
    if w > n {
        return Err(Error::invalid(format!("window length {w} exceeds horizon {n}")));
    }
    let stride = w.div_ceil(4);
    let mut starts: Vec<usize> = (0..=n - w).step_by(stride).collect();
    if *starts.last().unwrap() != n - w {
        starts.push(n - w);
    }
    let mut windows: Vec<(usize, usize, f64)> = starts.into_iter().map(|s| (s, w, mean(&d[s..s + w]))).collect();
    let b = besicovitch_from_distances(d)?;
    windows.extend(b.checkpoints.iter().map(|&(m, v)| (0, m, v)));
    windows.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let value = windows[0].2;
    windows.truncate(3);
    Ok(PseudometricEstimate {
        value,
        horizon: n,
        scheme: WindowScheme::Sliding { w, stride },
        checkpoints: b.checkpoints,
        top_windows: windows,
    })
}

pub fn besicovitch_estimate<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    n: usize,
) -> Result<PseudometricEstimate> {
    if n == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    besicovitch_from_distances(&sys.distance_sequence(x, y, n)?)
}

pub fn weyl_estimate<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    n: usize,
    w: usize,
) -> Result<PseudometricEstimate> {
    if w == 0 || w > n {
        return Err(Error::invalid(format!("window length {w} must lie in [1, {n}]")));
    }
    weyl_from_distances(&sys.distance_sequence(x, y, n)?, w)
}

/// Weyl estimates for `w = n/2, n/4, ...` down to `min_w`, reported as a
/// sweep rather than a limit.
pub fn weyl_sweep<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    n: usize,
    min_w: usize,
) -> Result<Vec<PseudometricEstimate>> {
    let d = sys.distance_sequence(x, y, n)?;
    let mut out = Vec::new();
    let mut w = n / 2;
    while w >= min_w.max(1) {
        out.push(weyl_from_distances(&d, w)?);
        w /= 2;
    }
    Ok(out)
}

/// Reads a stream of non-negative reals separated by whitespace or commas.
/// Lines starting with `#` are ignored.
pub fn parse_distance_stream(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse("distance stream", format!("line {}: bad number {tok:?}", ln + 1)))?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parse("distance stream", format!("line {}: {v} is not a distance", ln + 1)));
            }
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn late_separation_is_seen_by_windows_only_partly_by_prefixes() {
        let n = 4096;
        let d: Vec<f64> = (0..n).map(|i| if i >= n / 2 { 1.0 } else { 0.0 }).collect();
        let b = besicovitch_from_distances(&d).unwrap();
        let w = weyl_from_distances(&d, n / 4).unwrap();
        assert_eq!(b.value, 0.5);
        assert_eq!(w.value, 1.0);
        assert!(w.top_windows[0].0 >= n / 2);
    }

    #[test]
    fn constant_sequence_is_reproduced() {
        let d = vec![0.1; 10_000];
        assert!((besicovitch_from_distances(&d).unwrap().value - 0.1).abs() < 1e-15);
        assert!((weyl_from_distances(&d, 777).unwrap().value - 0.1).abs() < 1e-15);
    }

    #[test]
    fn window_longer_than_horizon_is_rejected() {
        assert!(weyl_from_distances(&[0.0; 10], 11).is_err());
        assert!(besicovitch_from_distances(&[]).is_err());
    }

    #[test]
    fn distance_stream_parsing() {
        assert_eq!(parse_distance_stream("# header\n0.5, 1\n  2e-1\t0\n").unwrap(), vec![0.5, 1.0, 0.2, 0.0]);
        assert!(parse_distance_stream("0.1 -3").is_err());
        assert!(parse_distance_stream("nan").is_err());
        assert!(parse_distance_stream("abc").is_err());
    }
}
