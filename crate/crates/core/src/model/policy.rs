use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reservation ratio, inflation factor and per-item ground weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostPolicy<T = f64> {
    sigma: T,
    lambda: T,
    weights: Vec<T>,
}

impl<T: Scalar> CostPolicy<T> {
    pub fn new(sigma: T, lambda: T, weights: Vec<T>) -> Result<Self> {
        if !(sigma > T::zero() && sigma < T::one()) {
            return Err(Error::Policy(format!("sigma = {sigma} must lie in (0,1)")));
        }
        if !(lambda > T::one()) || !lambda.is_finite() {
            return Err(Error::Policy(format!("lambda = {lambda} must exceed 1")));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w >= T::zero()) || !w.is_finite())
        {
            return Err(Error::Policy(format!("weight of item {i} is {w}")));
        }
        Ok(Self {
            sigma,
            lambda,
            weights,
        })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn num_items(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, item: usize) -> Option<T> {
        self.weights.get(item).copied()
    }

    pub fn reserve_price(&self, item: usize) -> T {
        self.sigma * self.weights[item]
    }

    pub fn exercise_price(&self, item: usize) -> T {
        (T::one() - self.sigma) * self.weights[item]
    }

    pub fn recourse_price(&self, item: usize) -> T {
        self.lambda * self.weights[item]
    }

    /// Total ground weight of a set of items; `None` if any item is unpriced.
    pub fn weight_of<'a>(&self, items: impl IntoIterator<Item = &'a usize>) -> Option<T> {
        items
            .into_iter()
            .try_fold(T::zero(), |acc, &i| self.weight(i).map(|w| acc + w))
    }

    pub fn with_sigma(&self, sigma: T) -> Result<Self> {
        Self::new(sigma, self.lambda, self.weights.clone())
    }

    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.sigma,
            self.lambda,
            self.weights.iter().map(|&w| w * factor).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enforces_ranges() {
        assert!(CostPolicy::new(0.0, 2.0, vec![1.0]).is_err());
        assert!(CostPolicy::new(1.0, 2.0, vec![1.0]).is_err());
        assert!(CostPolicy::new(0.5, 1.0, vec![1.0]).is_err());
        assert!(CostPolicy::new(0.5, 2.0, vec![-1.0]).is_err());
        assert!(CostPolicy::new(0.5, f64::NAN, vec![1.0]).is_err());
        assert!(CostPolicy::new(0.5f32, 1.5f32, vec![1.0]).is_ok());
    }

    #[test]
    fn prices() {
        let p = CostPolicy::new(0.25, 3.0, vec![4.0]).unwrap();
        assert_eq!(p.reserve_price(0), 1.0);
        assert_eq!(p.exercise_price(0), 3.0);
        assert_eq!(p.recourse_price(0), 12.0);
    }
}
