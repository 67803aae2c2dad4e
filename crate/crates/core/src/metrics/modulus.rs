//! Empirical modulus of mean equicontinuity.

use rayon::prelude::*;

use super::pseudometric::{besicovitch_from_distances, weyl_from_distances};
use crate::error::{Error, Result};
use crate::rng::task_rng;
use crate::system::DynamicalSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct ModulusRow {
    pub eps: f64,
    /// Largest grid `delta` whose sampled pairs all had `d_B < eps`; 0 if none.
    pub delta_hat: f64,
}

/// One sampled pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairRecord {
    /// Index into the grid of the ball radius the pair was drawn for.
    pub ball: usize,
    pub adversarial: bool,
    pub d: f64,
    pub d_b: f64,
    /// Weyl estimate with windows of a quarter horizon.
    pub d_w: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModulusProfile {
    pub rows: Vec<ModulusRow>,
    /// Running maximum of `d_B` over pairs with `d < delta_j`.
    pub worst: Vec<f64>,
    pub pair_budget: usize,
    pub horizon: usize,
    pub pairs: Vec<PairRecord>,
}

pub fn mean_equicontinuity_modulus<S: DynamicalSystem>(
    sys: &S,
    eps_grid: &[f64],
    pair_budget: usize,
    horizon: usize,
    seed: u64,
) -> Result<ModulusProfile> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("eps grid is empty"));
    }
    if eps_grid.windows(2).any(|w| !(w[0] < w[1])) || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::invalid("eps grid must be positive and strictly increasing"));
    }
    if pair_budget < 100 {
        return Err(Error::invalid(format!("pair budget {pair_budget} is below 100")));
    }
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let w = (horizon / 4).max(1);
    let grid = eps_grid;

    let evaluate = |ball: usize, adversarial: bool, x: &S::Point, y: &S::Point| -> Result<PairRecord> {
        let seq = sys.distance_sequence(x, y, horizon)?;
        Ok(PairRecord {
            ball,
            adversarial,
            d: sys.distance(x, y),
            d_b: besicovitch_from_distances(&seq)?.value,
            d_w: weyl_from_distances(&seq, w)?.value,
        })
    };

    let mut pairs = Vec::new();
    for (j, &delta) in grid.iter().enumerate() {
        let stream_base = (j as u64) << 32;
        let sampled: Vec<Option<PairRecord>> = (0..pair_budget)
            .into_par_iter()
            .map(|p| {
                let mut rng = task_rng(seed, stream_base + p as u64);
                let x = sys.sample(&mut rng);
                match sys.sample_near(&x, delta, &mut rng) {
                    Some(y) => evaluate(j, false, &x, &y).map(Some),
                    None => Ok(None),
                }
            })
            .collect::<Result<_>>()?;
        pairs.extend(sampled.into_iter().flatten());
        let mut rng = task_rng(seed, stream_base + (1 << 31));
        let adv = sys.adversarial_pairs(delta, (pair_budget / 10).max(10), &mut rng);
        let adv: Vec<PairRecord> =
            adv.par_iter().map(|(x, y)| evaluate(j, true, x, y)).collect::<Result<_>>()?;
        pairs.extend(adv);
    }

    // Pairs drawn for a smaller ball also lie in every larger one.
    let mut worst = vec![0.0f64; grid.len()];
    for p in &pairs {
        let j = grid.iter().position(|&g| p.d < g).unwrap_or(grid.len());
        for wj in worst.iter_mut().skip(j) {
            *wj = wj.max(p.d_b);
        }
    }

    let mut rows: Vec<ModulusRow> = grid
        .iter()
        .map(|&eps| {
            let delta_hat = grid
                .iter()
                .zip(&worst)
                .filter(|(_, &wv)| wv < eps)
                .map(|(&g, _)| g)
                .fold(0.0, f64::max);
            ModulusRow { eps, delta_hat }
        })
        .collect();
    for i in (0..rows.len().saturating_sub(1)).rev() {
        rows[i].delta_hat = rows[i].delta_hat.min(rows[i + 1].delta_hat);
    }
    Ok(ModulusProfile { rows, worst, pair_budget, horizon, pairs })
}
