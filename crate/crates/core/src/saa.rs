//! Sample average approximation: turning a sampler into explicit scenarios.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, ScenarioSampler, ScenarioSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaaConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub k_reps: usize,
    pub n_samples: usize,
    pub c_k: f64,
    pub c_n: f64,
}

impl SaaConfig {
    /// `⌈c_k ε⁻¹ ln δ⁻¹⌉`, at least 1.
    pub fn repetitions(epsilon: f64, delta: f64, c_k: f64) -> Result<usize> {
        check_unit("epsilon", epsilon)?;
        check_unit("delta", delta)?;
        if !(c_k > 0.0) {
            return Err(Error::Parameter(format!("c_k = {c_k} must be positive")));
        }
        Ok(((c_k / epsilon * (1.0 / delta).ln()).ceil() as usize).max(1))
    }

    /// Derives both counts. `num_decisions` is the number of binary
    /// first-stage decisions, so `ln|X| = num_decisions · ln 2`.
    pub fn derive(
        epsilon: f64,
        delta: f64,
        lambda: f64,
        num_decisions: usize,
        c_k: f64,
        c_n: f64,
    ) -> Result<Self> {
        let k_reps = Self::repetitions(epsilon, delta, c_k)?;
        if !(c_n > 0.0) {
            return Err(Error::Parameter(format!("c_N = {c_n} must be positive")));
        }
        if !(lambda > 1.0) {
            return Err(Error::Parameter(format!("lambda = {lambda} must exceed 1")));
        }
        let ln_x = num_decisions.max(1) as f64 * std::f64::consts::LN_2;
        let n =
            c_n * lambda * lambda * epsilon.powi(-4) * k_reps as f64 * ln_x * (1.0 / delta).ln();
        Ok(Self {
            epsilon,
            delta,
            k_reps,
            n_samples: (n.ceil() as usize).max(1),
            c_k,
            c_n,
        })
    }

    /// Fixed counts, bypassing the derivation.
    pub fn with_counts(k_reps: usize, n_samples: usize) -> Result<Self> {
        if k_reps == 0 || n_samples == 0 {
            return Err(Error::Parameter(
                "k_reps and n_samples must be at least 1".into(),
            ));
        }
        Ok(Self {
            epsilon: f64::NAN,
            delta: f64::NAN,
            k_reps,
            n_samples,
            c_k: 1.0,
            c_n: 1.0,
        })
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {v} must lie in (0,1)")))
    }
}

/// Empirical distribution of `n` draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaaSample {
    /// Distinct drawn client sets in sorted order, probability `count / n`.
    pub scenarios: ScenarioSet,
    /// Draw count per scenario; sums to `n` exactly.
    pub multiplicities: Vec<usize>,
    pub n: usize,
}

pub fn saa_build<S: ScenarioSampler + ?Sized>(
    sampler: &S,
    n: usize,
    seed: u64,
) -> Result<SaaSample> {
    if n == 0 {
        return Err(Error::Parameter("SAA needs at least one sample".into()));
    }
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for mut clients in sampler.draw_many(n, seed)? {
        clients.sort_unstable();
        *counts.entry(clients).or_default() += 1;
    }
    let multiplicities: Vec<usize> = counts.values().copied().collect();
    let scenarios = counts
        .into_iter()
        .map(|(clients, c)| Scenario::new(c as f64 / n as f64, clients))
        .collect::<Result<Vec<_>>>()?;
    Ok(SaaSample {
        scenarios: ScenarioSet::new(scenarios)?,
        multiplicities,
        n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaaCandidate<S> {
    pub rep: usize,
    pub solution: S,
    /// Objective of `solution` on its own sample.
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaaOutcome<S> {
    /// Index into `candidates` of the lowest estimate.
    pub chosen: usize,
    pub candidates: Vec<SaaCandidate<S>>,
}

impl<S> SaaOutcome<S> {
    pub fn chosen(&self) -> &SaaCandidate<S> {
        &self.candidates[self.chosen]
    }
}

/// Solves `k_reps` independent sample instances and keeps the solution with
/// the lowest estimate on its own sample; ties go to the earlier repetition.
///
/// Repetition `r` samples with seed `seed + r` and passes that seed to
/// `inner` as well.
pub fn repeating_saa<Sm, S, F>(
    sampler: &Sm,
    cfg: &SaaConfig,
    seed: u64,
    inner: F,
) -> Result<SaaOutcome<S>>
where
    Sm: ScenarioSampler + ?Sized,
    S: Send,
    F: Fn(&SaaSample, u64) -> Result<(S, f64)> + Sync,
{
    if cfg.k_reps == 0 {
        return Err(Error::Parameter("k_reps must be at least 1".into()));
    }
    let results: Vec<Result<SaaCandidate<S>>> = (0..cfg.k_reps)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = seed.wrapping_add(rep as u64);
            let sample = saa_build(sampler, cfg.n_samples, rep_seed)?;
            let (solution, estimate) = inner(&sample, rep_seed)?;
            Ok(SaaCandidate {
                rep,
                solution,
                estimate,
            })
        })
        .collect();
    let mut candidates = Vec::with_capacity(results.len());
    for (rep, r) in results.into_iter().enumerate() {
        candidates.push(r.map_err(|e| Error::Repetition {
            rep,
            source: Box::new(e),
        })?);
    }
    let mut chosen = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.estimate < candidates[chosen].estimate {
            chosen = i;
        }
    }
    Ok(SaaOutcome { chosen, candidates })
}
