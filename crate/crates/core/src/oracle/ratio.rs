use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub pass: bool,
    /// `bound * opt - cost`; negative when the bound is violated.
    pub slack: f64,
}

/// Passes iff `cost <= bound * opt + 1e-9`.
pub fn verify_ratio(cost: f64, opt: f64, bound: f64) -> RatioCheck {
    let slack = bound * opt - cost;
    RatioCheck {
        pass: slack >= -1e-9,
        slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(verify_ratio(4.9, 1.0, 5.0).pass);
        let r = verify_ratio(5.1, 1.0, 5.0);
        assert!(!r.pass);
        assert!((r.slack + 0.1).abs() < 1e-12);
        assert!(verify_ratio(0.0, 0.0, 5.0).pass);
        assert!(!verify_ratio(0.5, 0.0, 5.0).pass);
    }
}
