use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic, platform-stable RNG used by every randomized routine.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// One realizable client set and its probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(rename = "p", alias = "probability")]
    pub probability: f64,
    /// Sorted, duplicate-free client ids.
    pub clients: Vec<usize>,
}

impl Scenario {
    pub fn new(probability: f64, clients: impl IntoIterator<Item = usize>) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability) || !probability.is_finite() {
            return Err(Error::Scenario(format!(
                "probability {probability} outside [0,1]"
            )));
        }
        let mut clients: Vec<usize> = clients.into_iter().collect();
        clients.sort_unstable();
        if let Some(w) = clients.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Scenario(format!(
                "client {} listed twice in one scenario",
                w[0]
            )));
        }
        Ok(Self {
            probability,
            clients,
        })
    }

    pub fn contains(&self, client: usize) -> bool {
        self.clients.binary_search(&client).is_ok()
    }
}

/// Explicit finite scenario distribution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Scenario>", into = "Vec<Scenario>")]
pub struct ScenarioSet {
    scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn new(scenarios: Vec<Scenario>) -> Result<Self> {
        let scenarios = scenarios
            .into_iter()
            .map(|s| Scenario::new(s.probability, s.clients))
            .collect::<Result<Vec<_>>>()?;
        if !scenarios.is_empty() {
            let total: f64 = scenarios.iter().map(|s| s.probability).sum();
            if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
                return Err(Error::Scenario(format!(
                    "probabilities sum to {total}, expected 1"
                )));
            }
        }
        Ok(Self { scenarios })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Single scenario with probability one.
    pub fn certain(clients: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(vec![Scenario::new(1.0, clients)?])
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&Scenario> {
        self.scenarios.get(k)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scenario> {
        self.scenarios.iter()
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    /// Largest client id mentioned, if any.
    pub fn max_client(&self) -> Option<usize> {
        self.scenarios
            .iter()
            .filter_map(|s| s.clients.last().copied())
            .max()
    }

    /// Inverse-CDF draw of a scenario index.
    pub fn sample_index(&self, rng: &mut SeededRng) -> Option<usize> {
        if self.scenarios.is_empty() {
            return None;
        }
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (k, s) in self.scenarios.iter().enumerate() {
            acc += s.probability;
            if u < acc {
                return Some(k);
            }
        }
        // rounding slack at the top of the CDF
        self.scenarios.iter().rposition(|s| s.probability > 0.0)
    }
}

impl TryFrom<Vec<Scenario>> for ScenarioSet {
    type Error = Error;
    fn try_from(v: Vec<Scenario>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ScenarioSet> for Vec<Scenario> {
    fn from(s: ScenarioSet) -> Self {
        s.scenarios
    }
}

impl<'a> IntoIterator for &'a ScenarioSet {
    type Item = &'a Scenario;
    type IntoIter = std::slice::Iter<'a, Scenario>;
    fn into_iter(self) -> Self::IntoIter {
        self.scenarios.iter()
    }
}

/// Anything that can produce realized client sets on demand.
pub trait ScenarioSampler: Sync {
    fn draw(&self, rng: &mut SeededRng) -> Result<Vec<usize>>;

    /// `n` draws from a fresh stream seeded with `seed`.
    fn draw_many(&self, n: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
        let mut rng = seeded(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

impl ScenarioSampler for ScenarioSet {
    fn draw(&self, rng: &mut SeededRng) -> Result<Vec<usize>> {
        self.sample_index(rng)
            .map(|k| self.scenarios[k].clients.clone())
            .ok_or_else(|| Error::Sampler("empty scenario set".into()))
    }
}

/// Sampling-only view of a distribution.
///
/// Wraps an explicit set so that SAA results can be compared against the
/// known ground truth, while the algorithms under test only see draws.
#[derive(Clone, Debug)]
pub struct BlackBox {
    truth: ScenarioSet,
}

impl BlackBox {
    pub fn new(truth: ScenarioSet) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::Sampler(
                "black box needs at least one scenario".into(),
            ));
        }
        Ok(Self { truth })
    }

    pub fn ground_truth(&self) -> &ScenarioSet {
        &self.truth
    }
}

impl ScenarioSampler for BlackBox {
    fn draw(&self, rng: &mut SeededRng) -> Result<Vec<usize>> {
        self.truth.draw(rng)
    }
}
