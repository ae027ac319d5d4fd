use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::policy::CostPolicy;
use super::scenario::{seeded, ScenarioSampler, SeededRng};
use super::solution::StageDecision;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl MonteCarloEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = samples.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            trials: n,
        }
    }
}

/// Mean and standard error of `cost` over `trials` sampled scenarios.
///
/// Trial `t` runs on its own stream seeded with `seed + t`, so the result
/// does not depend on how trials are spread over threads.
pub fn monte_carlo<S, F>(
    sampler: &S,
    trials: usize,
    seed: u64,
    cost: F,
) -> Result<MonteCarloEstimate>
where
    S: ScenarioSampler,
    F: Fn(&[usize], &mut SeededRng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded(seed.wrapping_add(t as u64));
            let clients = sampler.draw(&mut rng)?;
            cost(&clients, &mut rng)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MonteCarloEstimate::from_samples(&samples))
}

/// Monte Carlo estimate of the two-stage objective for a fixed reservation
/// and a second-stage decision rule.
pub fn monte_carlo_cost<S, F>(
    reserved: &std::collections::BTreeSet<usize>,
    respond: F,
    policy: &CostPolicy<f64>,
    sampler: &S,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate>
where
    S: ScenarioSampler,
    F: Fn(&[usize], &mut SeededRng) -> Result<StageDecision> + Sync,
{
    let price = |items: &std::collections::BTreeSet<usize>| {
        policy
            .weight_of(items)
            .ok_or_else(|| Error::Structure("item without weight".into()))
    };
    let first = policy.sigma() * price(reserved)?;
    monte_carlo(sampler, trials, seed, |clients, rng| {
        let d = respond(clients, rng)?;
        if !d.exercised.is_subset(reserved) {
            return Err(Error::Structure("exercised item was never reserved".into()));
        }
        Ok(first
            + (1.0 - policy.sigma()) * price(&d.exercised)?
            + policy.lambda() * price(&d.recoursed)?)
    })
}
