use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algorithms::{run_algorithm, AlgoParams, Algorithm, Prepared, Reference};
use crate::error::{Error, Result};
use crate::instance::{ProblemKind, StochasticInstance};
use crate::oracle::verify_ratio;

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    /// `(instance_id, instance)`
    pub instances: Vec<(String, StochasticInstance)>,
    /// Empty means every registered algorithm that applies.
    pub algorithms: Vec<Algorithm>,
    pub params: AlgoParams,
    pub trials: usize,
    /// Trial `t` runs with seed `base_seed + t`.
    pub base_seed: u64,
    pub with_oracle: bool,
    /// Fill `runtime_ms`; off by default so reruns stay byte-identical.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance_id: String,
    pub kind: ProblemKind,
    pub sigma: f64,
    pub lambda: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub lp_opt: Option<f64>,
    pub oracle_opt: Option<f64>,
    pub cost: f64,
    pub ratio_vs_lp: Option<f64>,
    pub ratio_vs_oracle: Option<f64>,
    pub feasible: bool,
    pub runtime_ms: Option<f64>,
    /// Guarantee check; `None` when the algorithm promises nothing per run
    /// or its reference value is unavailable.
    #[serde(skip)]
    pub within_bound: Option<bool>,
}

impl ResultRow {
    pub const HEADER: &'static str =
        "instance_id,kind,sigma,lambda,algorithm,seed,lp_opt,oracle_opt,cost,\
ratio_vs_lp,ratio_vs_oracle,feasible,runtime_ms";

    fn key(&self) -> (&str, Algorithm, u64) {
        (&self.instance_id, self.algorithm, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub rows: usize,
    pub infeasible: usize,
    pub mean_ratio_vs_lp: Option<f64>,
    pub max_ratio_vs_lp: Option<f64>,
    pub mean_ratio_vs_oracle: Option<f64>,
    pub max_ratio_vs_oracle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentReport {
    pub fn infeasible_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.feasible).count()
    }

    pub fn bound_violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.within_bound == Some(false))
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(ResultRow::HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.instance_id,
                r.kind,
                r.sigma,
                r.lambda,
                r.algorithm,
                r.seed,
                opt(r.lp_opt),
                opt(r.oracle_opt),
                r.cost,
                opt(r.ratio_vs_lp),
                opt(r.ratio_vs_oracle),
                u8::from(r.feasible),
                opt(r.runtime_ms),
            );
        }
        out.push_str("\nalgorithm,rows,infeasible,mean_ratio_vs_lp,max_ratio_vs_lp,mean_ratio_vs_oracle,max_ratio_vs_oracle\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.algorithm,
                s.rows,
                s.infeasible,
                opt(s.mean_ratio_vs_lp),
                opt(s.max_ratio_vs_lp),
                opt(s.mean_ratio_vs_oracle),
                opt(s.max_ratio_vs_oracle),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn ratio(cost: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        cost / reference
    } else if cost <= 1e-12 {
        1.0
    } else {
        f64::INFINITY
    }
}

struct Baseline {
    lp_opt: Option<f64>,
    oracle_opt: Option<f64>,
}

/// Runs every (instance, algorithm, trial) row on the current rayon pool.
/// Rows come back sorted by `(instance_id, algorithm, seed)`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let baselines: Vec<(Prepared, Baseline)> = spec
        .instances
        .par_iter()
        .map(|(_, inst)| {
            let prep = Prepared::new(inst)?;
            let oracle_opt = if spec.with_oracle {
                match inst.oracle() {
                    Ok(r) => Some(r.optimal_cost),
                    Err(Error::OracleCap(_)) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            let lp_opt = prep.lp_opt;
            Ok((prep, Baseline { lp_opt, oracle_opt }))
        })
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (idx, (id, inst)) in spec.instances.iter().enumerate() {
        let algos = if spec.algorithms.is_empty() {
            Algorithm::for_kind(inst.kind())
        } else {
            spec.algorithms.clone()
        };
        for algo in algos {
            if !algo.supports(inst.kind()) {
                return Err(Error::Parameter(format!(
                    "{algo} does not apply to instance {id} ({})",
                    inst.kind()
                )));
            }
            let trials = if algo.is_randomized() { spec.trials } else { 1 };
            for t in 0..trials {
                jobs.push((idx, algo, spec.base_seed.wrapping_add(t as u64)));
            }
        }
    }

    let mut rows = jobs
        .par_iter()
        .map(|&(idx, algo, seed)| {
            let (id, inst) = &spec.instances[idx];
            let (prep, base) = &baselines[idx];
            let start = Instant::now();
            let run = run_algorithm(prep, algo, &spec.params, seed)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let feasible = inst.check(&run.solution).is_feasible();
            let within_bound = run.guarantee.and_then(|g| {
                let reference = match g.reference {
                    Reference::Lp => base.lp_opt,
                    Reference::Oracle => base.oracle_opt,
                }?;
                Some(verify_ratio(run.cost, reference, g.factor).pass)
            });
            Ok(ResultRow {
                instance_id: id.clone(),
                kind: inst.kind(),
                sigma: inst.sigma(),
                lambda: inst.lambda(),
                algorithm: algo,
                seed,
                lp_opt: base.lp_opt,
                oracle_opt: base.oracle_opt,
                cost: run.cost,
                ratio_vs_lp: base.lp_opt.map(|lp| ratio(run.cost, lp)),
                ratio_vs_oracle: base.oracle_opt.map(|o| ratio(run.cost, o)),
                feasible,
                runtime_ms: spec.timing.then_some(elapsed),
                within_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    let summary = summarize(&rows);
    Ok(ExperimentReport { rows, summary })
}

fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut by_algo: BTreeMap<Algorithm, Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        by_algo.entry(r.algorithm).or_default().push(r);
    }
    let stats = |v: Vec<f64>| {
        if v.is_empty() {
            (None, None)
        } else {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            (
                Some(mean),
                Some(v.into_iter().fold(f64::NEG_INFINITY, f64::max)),
            )
        }
    };
    by_algo
        .into_iter()
        .map(|(algorithm, rs)| {
            let (mean_ratio_vs_lp, max_ratio_vs_lp) =
                stats(rs.iter().filter_map(|r| r.ratio_vs_lp).collect());
            let (mean_ratio_vs_oracle, max_ratio_vs_oracle) =
                stats(rs.iter().filter_map(|r| r.ratio_vs_oracle).collect());
            SummaryRow {
                algorithm,
                rows: rs.len(),
                infeasible: rs.iter().filter(|r| !r.feasible).count(),
                mean_ratio_vs_lp,
                max_ratio_vs_lp,
                mean_ratio_vs_oracle,
                max_ratio_vs_oracle,
            }
        })
        .collect()
}

/// Worker pool capped by the `RR_THREADS` environment variable when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("RR_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("RR_THREADS = {v:?} is not a count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{generate_instance, GenParams};

    fn spec(trials: usize) -> ExperimentSpec {
        let inst =
            generate_instance(&GenParams::new(ProblemKind::VertexCover, 5, 0, 2), 3).unwrap();
        ExperimentSpec {
            instances: vec![("vc".into(), inst)],
            algorithms: vec![],
            params: AlgoParams::default(),
            trials,
            base_seed: 7,
            with_oracle: true,
            timing: false,
        }
    }

    #[test]
    fn rows_sorted_and_reproducible() {
        let a = run_experiment(&spec(3)).unwrap();
        // 4 randomized algorithms x 3 trials + threshold once
        assert_eq!(a.rows.len(), 13);
        assert!(a.rows.windows(2).all(|w| w[0].key() <= w[1].key()));
        assert_eq!(a.to_csv(), run_experiment(&spec(3)).unwrap().to_csv());
        assert_eq!(a.infeasible_rows(), 0);
        assert!(a.rows.iter().all(|r| r.ratio_vs_lp.unwrap() >= 1.0 - 1e-7));
        assert!(a.rows.iter().all(|r| r.runtime_ms.is_none()));
    }

    #[test]
    fn csv_shape() {
        let csv = run_experiment(&spec(1)).unwrap().to_csv();
        let first = csv.lines().nth(1).unwrap();
        assert_eq!(first.split(',').count(), 13);
        assert!(csv.starts_with("instance_id,kind,"));
    }
}
