use std::f64::consts::E;

use serde::{Deserialize, Serialize};

/// `e / (e - 1)`: expected cost inflation of redrawing a cluster until
/// it is nonempty.
pub const ETA: f64 = E / (E - 1.0);

/// Ratio guaranteed by the single-stage filtering rounding: `max(1/α, 3/(1-α))`.
pub fn deterministic_bound(alpha: f64) -> f64 {
    (1.0 / alpha).max(3.0 / (1.0 - alpha))
}

/// `max{3/(1-α), 1/(αβ), 1/(α(1-β))}`.
pub fn five_approx_bound(alpha: f64, beta: f64) -> f64 {
    (3.0 / (1.0 - alpha))
        .max(1.0 / (alpha * beta))
        .max(1.0 / (alpha * (1.0 - beta)))
}

/// Terms of the clustered rounding's guarantee.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImprovedBound {
    /// `r η / θ`: reservation and exercise cost.
    pub facility: f64,
    /// `(1 + e^{-r}(r+1)/(r-1)) / θ`: first-stage connection cost.
    pub connection: f64,
    /// `ρ / (1 - θ)`: second-stage pairs.
    pub second_stage: f64,
    pub max: f64,
}

/// Guarantee for filtering ratio `r = 1/γ`, split `theta`, and a
/// single-stage subroutine with ratio `rho`.
pub fn improved_bound(r: f64, theta: f64, rho: f64) -> ImprovedBound {
    let facility = r * ETA / theta;
    let connection = (1.0 + (-r).exp() * (r + 1.0) / (r - 1.0)) / theta;
    let second_stage = rho / (1.0 - theta);
    ImprovedBound {
        facility,
        connection,
        second_stage,
        max: facility.max(connection).max(second_stage),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ufl::DEFAULT_THETA;

    #[test]
    fn eta_is_positive_form() {
        assert!((ETA - 1.0 / (1.0 - 1.0 / E)).abs() < 1e-15);
        assert!((ETA - 1.5820).abs() < 1e-4);
    }

    #[test]
    fn five() {
        assert!((five_approx_bound(0.4, 0.5) - 5.0).abs() < 1e-12);
        assert!((deterministic_bound(0.4) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn improved_terms() {
        let b = improved_bound(1.447, DEFAULT_THETA, 1.52);
        assert!((b.facility - 3.809).abs() < 2e-3, "{b:?}");
        assert!((b.connection - 3.806).abs() < 2e-3, "{b:?}");
        assert!((b.second_stage - 3.810).abs() < 2e-3, "{b:?}");
        assert!((b.max - 3.81).abs() < 0.01);
    }

    #[test]
    fn substituted_subroutine_bound() {
        let b = improved_bound(1.447, DEFAULT_THETA, 5.0);
        assert!((b.max - 5.0 / (1.0 - DEFAULT_THETA)).abs() < 1e-12);
    }
}
