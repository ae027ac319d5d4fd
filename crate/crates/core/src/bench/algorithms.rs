use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cover::{
    buy_all_reserved_reduction, double_randomized_round, preprocess_half,
    srinivasan_round_set_cover, srinivasan_round_vertex_cover, threshold_round_vertex_cover,
    CoverRecourseSolver, FractionalCoverSolution, RecourseSolver,
};
use crate::error::{Error, Result};
use crate::instance::{Problem, ProblemKind, StochasticInstance};
use crate::model::RRSolution;
use crate::steiner::{sampling_bound, sampling_solution, BoostedSamplingSolver, STEINER_APPROX};
use crate::ufl::{
    five_approx_bound, round_5approx, round_improved, FractionalUflSolution, ImprovedParams,
    DEFAULT_THETA,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Double,
    Threshold,
    SriniSc,
    SriniVc,
    Buyall,
    Ufl5,
    UflImproved,
    SteinerSample,
    SteinerBuyall,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Self::Double,
        Self::Threshold,
        Self::SriniSc,
        Self::SriniVc,
        Self::Buyall,
        Self::Ufl5,
        Self::UflImproved,
        Self::SteinerSample,
        Self::SteinerBuyall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Double => "double",
            Self::Threshold => "threshold",
            Self::SriniSc => "srini-sc",
            Self::SriniVc => "srini-vc",
            Self::Buyall => "buyall",
            Self::Ufl5 => "ufl5",
            Self::UflImproved => "ufl-improved",
            Self::SteinerSample => "steiner-sample",
            Self::SteinerBuyall => "steiner-buyall",
        }
    }

    pub fn supports(self, kind: ProblemKind) -> bool {
        use ProblemKind::*;
        match self {
            Self::Double | Self::SriniSc | Self::Buyall => matches!(kind, SetCover | VertexCover),
            Self::Threshold | Self::SriniVc => kind == VertexCover,
            Self::Ufl5 | Self::UflImproved => kind == Ufl,
            Self::SteinerSample | Self::SteinerBuyall => kind == Steiner,
        }
    }

    pub fn is_randomized(self) -> bool {
        !matches!(self, Self::Threshold | Self::Ufl5)
    }

    /// Registered algorithms applicable to `kind`.
    pub fn for_kind(kind: ProblemKind) -> Vec<Algorithm> {
        Self::ALL.into_iter().filter(|a| a.supports(kind)).collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    /// Filtering radius for `ufl5` and the single-stage step of `ufl-improved`.
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub gamma: f64,
    /// Overrides the default `ψ(n)` of `srini-sc`.
    pub psi: Option<f64>,
}

impl Default for AlgoParams {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            beta: 0.5,
            theta: DEFAULT_THETA,
            gamma: 1.0 / 1.447,
            psi: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Lp,
    Oracle,
}

/// Worst-case factor an algorithm promises on every run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guarantee {
    pub reference: Reference,
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoRun {
    pub solution: RRSolution,
    pub cost: f64,
    pub guarantee: Option<Guarantee>,
}

/// An instance with its LP relaxation solved once for repeated rounding.
#[derive(Clone, Debug)]
pub struct Prepared<'a> {
    pub instance: &'a StochasticInstance,
    cover: Option<FractionalCoverSolution>,
    ufl: Option<FractionalUflSolution>,
    /// `None` when the relaxation exceeds its size cap.
    pub lp_opt: Option<f64>,
}

impl<'a> Prepared<'a> {
    pub fn new(instance: &'a StochasticInstance) -> Result<Self> {
        let scen = &instance.scenarios;
        let (mut cover, mut ufl) = (None, None);
        let lp_opt = match &instance.problem {
            Problem::Cover {
                instance: ci,
                policy,
            } => {
                let (sol, opt) = FractionalCoverSolution::solve(ci, policy, scen)?;
                cover = Some(sol);
                Some(opt)
            }
            Problem::Ufl { instance: ui } => {
                let (sol, opt) = FractionalUflSolution::solve(ui, scen)?;
                ufl = Some(sol);
                Some(opt)
            }
            Problem::Steiner { .. } => match instance.lp_opt() {
                Ok(v) => Some(v),
                Err(Error::OracleCap(_)) => None,
                Err(e) => return Err(e),
            },
        };
        Ok(Self {
            instance,
            cover,
            ufl,
            lp_opt,
        })
    }

    pub fn cover_lp(&self) -> Option<&FractionalCoverSolution> {
        self.cover.as_ref()
    }

    pub fn ufl_lp(&self) -> Option<&FractionalUflSolution> {
        self.ufl.as_ref()
    }
}

pub fn run_algorithm(
    prep: &Prepared,
    algo: Algorithm,
    params: &AlgoParams,
    seed: u64,
) -> Result<AlgoRun> {
    let inst = prep.instance;
    if !algo.supports(inst.kind()) {
        return Err(Error::Parameter(format!(
            "{algo} does not apply to {}",
            inst.kind()
        )));
    }
    let scen = &inst.scenarios;
    let vs_lp = |factor| {
        Some(Guarantee {
            reference: Reference::Lp,
            factor,
        })
    };
    let vs_oracle = |factor| {
        Some(Guarantee {
            reference: Reference::Oracle,
            factor,
        })
    };
    let (solution, guarantee) = match (&inst.problem, algo) {
        (Problem::Cover { instance, policy }, _) => {
            let frac = prep.cover.as_ref().expect("cover LP prepared");
            match algo {
                Algorithm::Double => {
                    let (pre, report) = preprocess_half(frac, instance, policy, scen);
                    (
                        double_randomized_round(&pre, &report, instance, policy, scen, seed)?.0,
                        None,
                    )
                }
                Algorithm::Threshold => {
                    let (pre, report) = preprocess_half(frac, instance, policy, scen);
                    let sol = threshold_round_vertex_cover(&pre, &report, instance, policy, scen)?;
                    (sol, vs_lp(4.0 * report.k_bound()))
                }
                Algorithm::SriniSc => (
                    srinivasan_round_set_cover(frac, instance, policy, scen, params.psi, seed)?.0,
                    None,
                ),
                Algorithm::SriniVc => (
                    srinivasan_round_vertex_cover(frac, instance, policy, scen, seed)?,
                    None,
                ),
                Algorithm::Buyall => {
                    let solver = CoverRecourseSolver { instance };
                    let sol = buy_all_reserved_reduction(&solver, policy, scen)?;
                    (sol, vs_oracle(solver.beta() / policy.sigma()))
                }
                _ => unreachable!("support checked above"),
            }
        }
        (Problem::Ufl { instance }, Algorithm::Ufl5) => {
            let frac = prep.ufl.as_ref().expect("UFL LP prepared");
            let out = round_5approx(frac, instance, scen, params.alpha, params.beta)?;
            (
                out.solution,
                vs_lp(five_approx_bound(params.alpha, params.beta)),
            )
        }
        (Problem::Ufl { instance }, Algorithm::UflImproved) => {
            let frac = prep.ufl.as_ref().expect("UFL LP prepared");
            let ip = ImprovedParams {
                theta: params.theta,
                gamma: params.gamma,
                det_alpha: params.alpha,
            };
            (
                round_improved(frac, instance, scen, &ip, seed)?.solution,
                None,
            )
        }
        (Problem::Steiner { graph, policy }, Algorithm::SteinerSample) => (
            sampling_solution(graph, policy, scen, seed)?,
            vs_oracle(sampling_bound(STEINER_APPROX, policy.sigma())),
        ),
        (Problem::Steiner { graph, policy }, Algorithm::SteinerBuyall) => {
            let solver = BoostedSamplingSolver { graph, seed };
            let sol = buy_all_reserved_reduction(&solver, policy, scen)?;
            (sol, vs_oracle(solver.beta() / policy.sigma()))
        }
        _ => unreachable!("support checked above"),
    };
    let cost = inst.evaluate(&solution)?;
    Ok(AlgoRun {
        solution,
        cost,
        guarantee,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_value(a).unwrap(), a.name());
        }
        assert!("simplex".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::for_kind(ProblemKind::VertexCover).len(), 5);
    }
}
