//! Birkhoff averages along single orbits.

use serde::Serialize;

use super::functions::TestFunction;
use crate::error::{Error, Result};
use crate::metrics::Neumaier;
use crate::system::DynamicalSystem;

/// `(1/n) sum_{i<n} f(T^i x)`.
pub fn birkhoff_average<S: DynamicalSystem>(sys: &S, x: &S::Point, f: &TestFunction, n: usize) -> Result<f64> {
    Ok(birkhoff_averages(sys, x, std::slice::from_ref(f), &[n])?[0][0])
}

/// Averages of every function at every horizon in one pass; `out[f][h]`.
pub fn birkhoff_averages<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    fs: &[TestFunction],
    horizons: &[usize],
) -> Result<Vec<Vec<f64>>> {
    if horizons.is_empty() || horizons[0] == 0 || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("horizons must be positive and strictly increasing"));
    }
    let total = *horizons.last().expect("nonempty");
    let mut accs = vec![Neumaier::default(); fs.len()];
    let mut out = vec![Vec::with_capacity(horizons.len()); fs.len()];
    let mut p = x.clone();
    let mut next = 0;
    for i in 0..total {
        let o = sys.observe(&p);
        for (a, f) in accs.iter_mut().zip(fs) {
            a.add(f.eval(&o));
        }
        if i + 1 == horizons[next] {
            for (v, a) in out.iter_mut().zip(&accs) {
                v.push(a.value() / horizons[next] as f64);
            }
            next += 1;
        }
        if i + 1 < total {
            p = sys.step(&p)?;
        }
    }
    Ok(out)
}

/// Averages of a fixed dictionary along one orbit at one horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasure {
    pub function_ids: Vec<String>,
    pub averages: Vec<f64>,
    pub horizon: usize,
}

pub fn empirical_measure<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    fs: &[TestFunction],
    n: usize,
) -> Result<EmpiricalMeasure> {
    let avgs = birkhoff_averages(sys, x, fs, &[n])?;
    Ok(EmpiricalMeasure {
        function_ids: fs.iter().map(|f| f.id()).collect(),
        averages: avgs.into_iter().map(|v| v[0]).collect(),
        horizon: n,
    })
}
