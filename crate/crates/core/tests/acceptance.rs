//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use rr_core::bench::{
    generate_instance, run_algorithm, run_experiment, AlgoParams, Algorithm, ExperimentSpec,
    GenParams, Prepared, UflMetric,
};
use rr_core::cover::{
    default_psi, preprocess_half, scale_factor, srinivasan_round_set_cover,
    srinivasan_round_vertex_cover, FractionalCoverSolution,
};
use rr_core::instance::{Problem, ProblemKind, StochasticInstance};
use rr_core::lp::{complementary_slackness_gap, solve_lp, LinearProgram, Sense};
use rr_core::model::{monte_carlo, seeded, BlackBox, CostPolicy, Scenario, ScenarioSet};
use rr_core::oracle::verify_ratio;
use rr_core::saa::{repeating_saa, saa_build, SaaConfig};
use rr_core::steiner::{
    prim_cost_shares, sampling_bound, sampling_heuristic, MetricGraph, STEINER_APPROX,
};
use rr_core::ufl::{
    cs_round_deterministic_ufl, improved_bound, prepare_cs, round_5approx, round_improved,
    DeterministicUfl, FractionalUflSolution, ImprovedParams, UflInstance, DEFAULT_THETA,
};

/// Ratio of a 1.52-approximate single-stage subroutine (the in-repo one has ratio 5).
const SUBROUTINE_RATIO_152: f64 = 1.52;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Oracle-sized corpus: 15 generated instances per problem kind.
fn corpus() -> Vec<(String, StochasticInstance)> {
    let mut out = Vec::new();
    for kind in ProblemKind::ALL {
        let mut p = match kind {
            ProblemKind::SetCover => GenParams::new(kind, 10, 6, 3),
            ProblemKind::VertexCover => GenParams::new(kind, 6, 0, 3),
            ProblemKind::Ufl => GenParams::new(kind, 5, 4, 3),
            ProblemKind::Steiner => GenParams::new(kind, 6, 0, 3),
        };
        p.density = match kind {
            ProblemKind::VertexCover => 0.6,
            ProblemKind::Steiner => 0.35,
            _ => 0.25,
        };
        p.inclusion = 0.7;
        for i in 0..15u64 {
            // alternate metrics so some facility-location LPs are fractional
            p.metric = if i % 2 == 0 {
                UflMetric::Euclidean
            } else {
                UflMetric::Incidence
            };
            p.sigma = [0.3, 0.5, 0.8][i as usize % 3];
            p.lambda = [1.5, 2.0, 3.0][i as usize / 5];
            out.push((
                format!("{kind}-{i:02}"),
                generate_instance(&p, 1000 + i).expect("generator"),
            ));
        }
    }
    out
}

fn random_lp(seed: u64) -> LinearProgram<f64> {
    let mut rng = seeded(seed);
    let nv = rng.gen_range(2..=20);
    let nr = rng.gen_range(1..=30);
    let x0: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.0..3.0)).collect();
    let objective: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.0..5.0)).collect();
    let rows = (0..nr)
        .map(|_| {
            let a: Vec<f64> = (0..nv)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        rng.gen_range(-2.0..4.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            let act: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
            match rng.gen_range(0..5) {
                0 => (a, Sense::Eq, act),
                1 | 2 => (a, Sense::Le, act + rng.gen_range(0.0..2.0)),
                _ => (a, Sense::Ge, act - rng.gen_range(0.0..2.0)),
            }
        })
        .collect();
    LinearProgram::from_dense(objective, rows)
}

fn c1_lp_engine() -> Outcome {
    let (mut worst_gap, mut worst_cs, mut worst_dual, mut bad) = (0f64, 0f64, 0f64, 0);
    for seed in 0..100 {
        let lp = random_lp(seed);
        let (p, d) = solve_lp(&lp);
        if !p.is_optimal() {
            bad += 1;
            continue;
        }
        worst_gap = worst_gap
            .max((p.objective_value - d.objective_value).abs() / (1.0 + p.objective_value.abs()));
        worst_cs = worst_cs.max(complementary_slackness_gap(&lp, &p, &d));
        worst_dual = worst_dual.max(d.max_violation(&lp));
    }
    outcome(
        bad == 0 && worst_gap <= 1e-6 && worst_cs <= 1e-6 && worst_dual <= 1e-6,
        format!("100 LPs, non-optimal {bad}, max rel gap {worst_gap:.2e}, max CS {worst_cs:.2e}, max dual infeas {worst_dual:.2e}"),
    )
}

fn c2_lower_bound_chain(corpus: &[(String, StochasticInstance)]) -> Outcome {
    let failures: Vec<String> = corpus
        .par_iter()
        .flat_map(|(id, inst)| {
            let prep = Prepared::new(inst).expect("LP");
            let lp = prep.lp_opt.expect("LP within cap");
            let opt = inst.oracle().expect("oracle").optimal_cost;
            let mut bad = Vec::new();
            if lp > opt + 1e-7 {
                bad.push(format!("{id}: LP {lp} > OPT {opt}"));
            }
            for algo in Algorithm::for_kind(inst.kind()) {
                for seed in 0..5 {
                    let run = run_algorithm(&prep, algo, &AlgoParams::default(), seed)
                        .expect("algorithm");
                    if run.cost < opt - 1e-7 || !inst.check(&run.solution).is_feasible() {
                        bad.push(format!(
                            "{id}/{algo}/{seed}: cost {} vs OPT {opt}",
                            run.cost
                        ));
                    }
                }
            }
            bad
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{} instances, all algorithms x5 seeds; violations: {:?}",
            corpus.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn ufl_suite(count: u64, base: u64) -> Vec<StochasticInstance> {
    (0..count)
        .map(|i| {
            let mut p = GenParams::new(ProblemKind::Ufl, 6, 4, 3);
            p.sigma = [0.3, 0.5, 0.7][i as usize % 3];
            p.lambda = [1.5, 2.5][i as usize % 2];
            p.metric = if i % 4 < 2 {
                UflMetric::Incidence
            } else {
                UflMetric::Euclidean
            };
            generate_instance(&p, base + i).expect("generator")
        })
        .collect()
}

fn ufl_parts(inst: &StochasticInstance) -> &UflInstance {
    match &inst.problem {
        Problem::Ufl { instance } => instance,
        _ => unreachable!(),
    }
}

fn c3_ufl5() -> Outcome {
    let (alpha, beta) = (0.4, 0.5);
    let mut worst_ratio = 0f64;
    let mut worst_dist = 0f64;
    let mut fails = 0;
    for inst in ufl_suite(20, 300) {
        let ui = ufl_parts(&inst);
        let (frac, lp) = FractionalUflSolution::solve(ui, &inst.scenarios).unwrap();
        let out = round_5approx(&frac, ui, &inst.scenarios, alpha, beta).unwrap();
        let cost = inst.evaluate(&out.solution).unwrap();
        let dist = out.worst_distance_ratio(ui);
        worst_ratio = worst_ratio.max(cost / lp);
        worst_dist = worst_dist.max(dist);
        if !verify_ratio(cost, lp, 5.0).pass
            || dist > 3.0 / (1.0 - alpha) + 1e-9
            || !inst.check(&out.solution).is_feasible()
        {
            fails += 1;
        }
    }
    outcome(fails == 0, format!("20 instances, max cost/LP {worst_ratio:.4} (bound 5), max d/c* {worst_dist:.4} (bound 5)"))
}

fn c4_srini_vc() -> Outcome {
    let mut worst = 0f64;
    let mut infeasible = 0usize;
    for i in 0..10u64 {
        let mut p = GenParams::new(ProblemKind::VertexCover, 7, 0, 3);
        p.density = 0.5;
        p.sigma = [0.3, 0.6][i as usize % 2];
        let inst = generate_instance(&p, 400 + i).unwrap();
        let Problem::Cover { instance, policy } = &inst.problem else {
            unreachable!()
        };
        let (frac, lp) = FractionalCoverSolution::solve(instance, policy, &inst.scenarios).unwrap();
        let runs: Vec<(f64, bool)> = (0..2000u64)
            .into_par_iter()
            .map(|s| {
                let sol =
                    srinivasan_round_vertex_cover(&frac, instance, policy, &inst.scenarios, s)
                        .unwrap();
                (inst.evaluate(&sol).unwrap(), inst.check(&sol).is_feasible())
            })
            .collect();
        infeasible += runs.iter().filter(|r| !r.1).count();
        let mean = runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64;
        worst = worst.max(mean / (2.0 * lp));
    }
    outcome(
        infeasible == 0 && worst <= 1.05,
        format!("10 instances x 2000 seeds, max mean/(2 LP) {worst:.4} (limit 1.05), infeasible runs {infeasible}"),
    )
}

/// First generated set-cover instances whose first-stage LP optimum is fractional.
fn fractional_set_covers(count: usize) -> Vec<StochasticInstance> {
    let mut p = GenParams::new(ProblemKind::SetCover, 10, 6, 3);
    p.density = 0.25;
    p.inclusion = 0.7;
    (500..)
        .map(|seed| generate_instance(&p, seed).unwrap())
        .filter(|inst| {
            let Problem::Cover { instance, policy } = &inst.problem else {
                unreachable!()
            };
            let (frac, _) =
                FractionalCoverSolution::solve(instance, policy, &inst.scenarios).unwrap();
            frac.x.iter().any(|&v| v > 1e-6 && v < 1.0 - 1e-6)
        })
        .take(count)
        .collect()
}

fn c5_srini_sc() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for inst in fractional_set_covers(3) {
        let Problem::Cover { instance, policy } = &inst.problem else {
            unreachable!()
        };
        let n = instance.num_elements();
        let psi = default_psi(n);
        let (frac, lp) = FractionalCoverSolution::solve(instance, policy, &inst.scenarios).unwrap();
        let stats: Vec<(f64, f64)> = (0..2000u64)
            .into_par_iter()
            .map(|s| {
                let (_, st) =
                    srinivasan_round_set_cover(&frac, instance, policy, &inst.scenarios, None, s)
                        .unwrap();
                (st.repair_probability(&inst.scenarios), st.pre_repair_cost)
            })
            .collect();
        let freq = stats.iter().map(|s| s.0).sum::<f64>() / 2000.0;
        let pre = stats.iter().map(|s| s.1).sum::<f64>() / 2000.0;
        let limit_freq = (-psi).exp() + 0.02;
        let limit_cost = scale_factor(n, psi) * lp * 1.05;
        pass &= freq <= limit_freq && pre <= limit_cost;
        lines.push(format!(
            "repair {:.4}<={limit_freq:.4}, pre-repair {pre:.3}<={limit_cost:.3}",
            freq.abs()
        ));
    }
    outcome(
        pass,
        format!("3 instances x 2000 seeds: {}", lines.join("; ")),
    )
}

fn c6_improved() -> Outcome {
    let r = 1.447;
    let theta = 2.29 / (2.29 + 1.52);
    let arith = improved_bound(r, theta, SUBROUTINE_RATIO_152).max;
    let arith_ok = (arith - 3.81).abs() <= 0.01;
    let bound = improved_bound(r, DEFAULT_THETA, 5.0).max;
    let params = ImprovedParams::default();
    let mut worst = 0f64;
    let mut broken = 0usize;
    let mut infeasible = 0usize;
    for inst in ufl_suite(10, 600) {
        let ui = ufl_parts(&inst);
        let (frac, lp) = FractionalUflSolution::solve(ui, &inst.scenarios).unwrap();
        let runs: Vec<(f64, bool, bool)> = (0..5000u64)
            .into_par_iter()
            .map(|s| {
                let out = round_improved(&frac, ui, &inst.scenarios, &params, s).unwrap();
                let feasible = inst.check(&out.solution).is_feasible();
                (
                    inst.evaluate(&out.solution).unwrap(),
                    out.exactly_one_per_cluster(),
                    feasible,
                )
            })
            .collect();
        broken += runs.iter().filter(|r| !r.1).count();
        infeasible += runs.iter().filter(|r| !r.2).count();
        let mean = runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64;
        worst = worst.max(mean / lp);
    }
    outcome(
        arith_ok && worst <= bound * 1.1 && broken == 0 && infeasible == 0,
        format!(
            "bound(1.447, θ, ρ=1.52) = {arith:.4}; 10 instances x 5000 seeds, max mean/LP {worst:.4} \
             (limit {:.3} with ρ=5), cluster breaches {broken}, infeasible {infeasible}",
            bound * 1.1
        ),
    )
}

fn deterministic_ufl(seed: u64) -> DeterministicUfl {
    let mut rng = seeded(seed);
    let (nf, nc) = (4, 5);
    let pts = |rng: &mut rr_core::model::SeededRng, n| {
        (0..n)
            .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
            .collect::<Vec<_>>()
    };
    let f = pts(&mut rng, nf);
    let c = pts(&mut rng, nc);
    DeterministicUfl {
        opening_cost: (0..nf).map(|_| rng.gen_range(0.1..0.8)).collect(),
        dist: f
            .iter()
            .map(|a| {
                c.iter()
                    .map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt())
                    .collect()
            })
            .collect(),
        demand: vec![1.0; nc],
    }
}

fn c7_cs_lemma() -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    let mut fails = 0;
    for i in 0..5u64 {
        let inst = deterministic_ufl(700 + i);
        let input = prepare_cs(&inst).unwrap();
        let runs: Vec<Vec<f64>> = (0..5000u64)
            .into_par_iter()
            .map(|s| {
                let r = cs_round_deterministic_ufl(&inst, &input, s).unwrap();
                (0..inst.num_clients()).map(|j| r.connection[&j]).collect()
            })
            .collect();
        for j in 0..inst.num_clients() {
            let xs: Vec<f64> = runs.iter().map(|r| r[j]).collect();
            let est = rr_core::model::MonteCarloEstimate::from_samples(&xs);
            let limit = input.service[j]
                + 2.0 / std::f64::consts::E * input.alpha[j]
                + 3.0 * est.stderr
                + 1e-9;
            worst_excess = worst_excess.max(est.mean - limit);
            if est.mean > limit {
                fails += 1;
            }
        }
    }
    outcome(fails == 0, format!("5 instances x 5000 seeds, clients over bound {fails}, max mean - limit {worst_excess:.4}"))
}

fn c8_preprocess(corpus: &[(String, StochasticInstance)]) -> Outcome {
    let mut worst_slack = f64::INFINITY;
    let mut worst_mass = 0f64;
    let mut runs = 0;
    for (_, inst) in corpus {
        let Problem::Cover { instance, policy } = &inst.problem else {
            continue;
        };
        for sigma in [0.2, 0.5, 0.9] {
            let policy = policy.with_sigma(sigma).unwrap();
            let (frac, _) =
                FractionalCoverSolution::solve(instance, &policy, &inst.scenarios).unwrap();
            let (pre, report) = preprocess_half(&frac, instance, &policy, &inst.scenarios);
            runs += 1;
            worst_slack =
                worst_slack.min(report.k_stated.max(report.k_corrected) - report.inflation);
            for a in 0..frac.num_scenarios() {
                for s in 0..frac.num_sets() {
                    let before = frac.y[a][s] + frac.z[a][s];
                    let after = pre.y[a][s] + pre.z[a][s];
                    worst_mass = worst_mass.max((before - after).abs());
                }
            }
        }
    }
    outcome(
        worst_slack >= -1e-12 && worst_mass == 0.0,
        format!(
            "{runs} runs, min (k bound - inflation) {worst_slack:.4}, max |Δ(y+z)| {worst_mass:e}"
        ),
    )
}

fn c9_steiner(corpus: &[(String, StochasticInstance)]) -> Outcome {
    let steiner: Vec<&StochasticInstance> = corpus
        .iter()
        .filter(|(_, i)| i.kind() == ProblemKind::Steiner)
        .map(|(_, i)| i)
        .collect();
    // feasibility over 500 macro-trials
    let infeasible: usize = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let inst = steiner[t as usize % steiner.len()];
            let Problem::Steiner { graph, policy } = &inst.problem else {
                unreachable!()
            };
            let plan = sampling_heuristic(
                graph,
                policy,
                &BlackBox::new(inst.scenarios.clone()).unwrap(),
                t,
            )
            .unwrap();
            let prep = Prepared::new(inst).unwrap();
            let run =
                run_algorithm(&prep, Algorithm::SteinerSample, &AlgoParams::default(), t).unwrap();
            usize::from(
                !inst.check(&run.solution).is_feasible()
                    || plan.reserved.iter().any(|&e| e >= graph.num_edges()),
            )
        })
        .sum();
    let mut worst_ratio = 0f64;
    let mut ratio_fails = 0;
    for inst in &steiner {
        let opt = inst.oracle().unwrap().optimal_cost;
        let prep = Prepared::new(inst).unwrap();
        let bound = sampling_bound(STEINER_APPROX, inst.sigma());
        for seed in 0..20 {
            let cost = run_algorithm(
                &prep,
                Algorithm::SteinerSample,
                &AlgoParams::default(),
                seed,
            )
            .unwrap()
            .cost;
            worst_ratio = worst_ratio.max(cost / bound / opt);
            if !verify_ratio(cost, opt, bound).pass {
                ratio_fails += 1;
            }
        }
    }
    let mut sets = 0;
    let mut conservation_fails = 0;
    for inst in &steiner {
        let Problem::Steiner { graph, .. } = &inst.problem else {
            unreachable!()
        };
        let exact = MetricGraph::new(
            graph.num_vertices(),
            graph.edges().to_vec(),
            graph
                .weights()
                .iter()
                .map(|&w| Ratio::from_integer(w as i64))
                .collect(),
            graph.root(),
        )
        .unwrap();
        let others: Vec<usize> = (0..graph.num_vertices())
            .filter(|&v| v != graph.root())
            .collect();
        for mask in 0..1u32 << others.len() {
            let k: BTreeSet<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let ledger = prim_cost_shares(&exact, &k).unwrap();
            sets += 1;
            if ledger.total() * Ratio::from_integer(2) != ledger.mst_cost {
                conservation_fails += 1;
            }
        }
    }
    outcome(
        infeasible == 0 && ratio_fails == 0 && conservation_fails == 0,
        format!(
            "500 trials infeasible {infeasible}; {} instances x 20 seeds, max ratio/bound {worst_ratio:.4}; \
             cost shares exact on {sets} client sets, mismatches {conservation_fails}",
            steiner.len()
        ),
    )
}

fn c10_saa() -> Outcome {
    // items: {0,1}, {1,2}, {0}, {1}, {2}; reserving set 0 and 1 dominates
    let inst = StochasticInstance::new(
        Problem::Cover {
            instance: rr_core::cover::CoverInstance::set_cover(
                3,
                vec![vec![0, 1], vec![1, 2], vec![0], vec![1], vec![2]],
            )
            .unwrap(),
            policy: CostPolicy::new(0.4, 2.0, vec![2.0, 2.0, 1.5, 1.5, 1.5]).unwrap(),
        },
        ScenarioSet::new(vec![
            Scenario::new(0.5, [0, 1]).unwrap(),
            Scenario::new(0.3, [1, 2]).unwrap(),
            Scenario::new(0.2, [0, 2]).unwrap(),
        ])
        .unwrap(),
    )
    .unwrap();
    let cfg = SaaConfig::derive(0.2, 0.1, inst.lambda(), inst.num_items(), 1.0, 1.0).unwrap();
    let black_box = BlackBox::new(inst.scenarios.clone()).unwrap();
    let mut good = 0;
    for trial in 0..50u64 {
        let out = repeating_saa(&black_box, &cfg, trial * 1_000, |sample, _| {
            let r = inst.with_scenarios(sample.scenarios.clone())?.oracle()?;
            Ok((r.optimal_solution.reserved, r.optimal_cost))
        })
        .unwrap();
        let truth: Vec<f64> = out
            .candidates
            .iter()
            .map(|c| inst.first_stage_value(&c.solution).unwrap())
            .collect();
        let best = truth.iter().copied().fold(f64::INFINITY, f64::min);
        if truth[out.chosen] <= 1.25 * best + 1e-12 {
            good += 1;
        }
    }
    outcome(
        good >= 45,
        format!(
            "k = {}, N = {}; chosen within 1.25x of best candidate in {good}/50 trials (need 45)",
            cfg.k_reps, cfg.n_samples
        ),
    )
}

fn c11_buyall(corpus: &[(String, StochasticInstance)]) -> Outcome {
    let mut worst = 0f64;
    let mut fails = 0;
    let mut runs = 0;
    for (_, inst) in corpus {
        let algo = match inst.kind() {
            ProblemKind::SetCover | ProblemKind::VertexCover => Algorithm::Buyall,
            ProblemKind::Steiner => Algorithm::SteinerBuyall,
            ProblemKind::Ufl => continue,
        };
        let opt = inst.oracle().unwrap().optimal_cost;
        let prep = Prepared::new(inst).unwrap();
        for seed in 0..5 {
            let run = run_algorithm(&prep, algo, &AlgoParams::default(), seed).unwrap();
            let g = run.guarantee.expect("reduction states its factor");
            runs += 1;
            worst = worst.max(run.cost / opt / g.factor);
            if !verify_ratio(run.cost, opt, g.factor).pass {
                fails += 1;
            }
        }
    }
    outcome(
        fails == 0,
        format!("{runs} runs, max (cost/OPT)/(β/σ) {worst:.4}, violations {fails}"),
    )
}

fn c12_reproducible(corpus: &[(String, StochasticInstance)]) -> Outcome {
    let mut mismatches = Vec::new();
    let mut check = |name: &str, a: String, b: String| {
        if a != b {
            mismatches.push(name.to_string());
        }
    };
    for (id, inst) in corpus.iter().step_by(5) {
        let prep = Prepared::new(inst).unwrap();
        for algo in Algorithm::for_kind(inst.kind()) {
            let run = |s| {
                serde_json::to_string(
                    &run_algorithm(&prep, algo, &AlgoParams::default(), s).unwrap(),
                )
                .unwrap()
            };
            check(&format!("{id}/{algo}"), run(17), run(17));
        }
    }
    for kind in ProblemKind::ALL {
        let p = GenParams::new(kind, 6, 4, 3);
        check(
            &format!("gen {kind}"),
            generate_instance(&p, 5).unwrap().to_json(),
            generate_instance(&p, 5).unwrap().to_json(),
        );
    }
    let spec = ExperimentSpec {
        instances: corpus.iter().step_by(7).cloned().collect(),
        algorithms: vec![],
        params: AlgoParams::default(),
        trials: 3,
        base_seed: 11,
        with_oracle: true,
        timing: false,
    };
    check(
        "bench csv",
        run_experiment(&spec).unwrap().to_csv(),
        run_experiment(&spec).unwrap().to_csv(),
    );
    let black_box = BlackBox::new(corpus[0].1.scenarios.clone()).unwrap();
    let saa = || serde_json::to_string(&saa_build(&black_box, 500, 3).unwrap()).unwrap();
    check("saa_build", saa(), saa());
    let mc = || {
        let est = monte_carlo(&black_box, 1000, 4, |c, rng| {
            Ok(c.len() as f64 + rng.gen::<f64>())
        })
        .unwrap();
        format!("{est:?}")
    };
    check("monte_carlo", mc(), mc());
    let det = deterministic_ufl(9);
    let input = prepare_cs(&det).unwrap();
    let cs =
        || serde_json::to_string(&cs_round_deterministic_ufl(&det, &input, 8).unwrap()).unwrap();
    check("cs rounding", cs(), cs());
    let ufl = &ufl_suite(1, 900)[0];
    let ui = ufl_parts(ufl);
    let (frac, _) = FractionalUflSolution::solve(ui, &ufl.scenarios).unwrap();
    let imp = || {
        format!(
            "{:?}",
            round_improved(&frac, ui, &ufl.scenarios, &ImprovedParams::default(), 2).unwrap()
        )
    };
    check("round_improved", imp(), imp());
    let five = || {
        format!(
            "{:?}",
            round_5approx(&frac, ui, &ufl.scenarios, 0.4, 0.5).unwrap()
        )
    };
    check("round_5approx", five(), five());
    outcome(
        mismatches.is_empty(),
        format!("pipelines rerun with equal seeds; mismatches {mismatches:?}"),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "LP engine strong duality and complementary slackness",
            Box::new(c1_lp_engine),
        ),
        (
            "LP <= oracle <= algorithm cost on the oracle corpus",
            Box::new(|| c2_lower_bound_chain(&corpus)),
        ),
        (
            "ufl5 within 5x LP and per-pair distance bound",
            Box::new(c3_ufl5),
        ),
        (
            "srini-vc mean within 2x LP (+5%), always feasible",
            Box::new(c4_srini_vc),
        ),
        (
            "srini-sc repair frequency and pre-repair cost",
            Box::new(c5_srini_sc),
        ),
        (
            "clustered UFL rounding bound and exactly-one invariant",
            Box::new(c6_improved),
        ),
        (
            "clustered single-stage rounding per-client expectation",
            Box::new(c7_cs_lemma),
        ),
        (
            "half-mass preprocessing inflation and mass",
            Box::new(|| c8_preprocess(&corpus)),
        ),
        (
            "Steiner sampling feasibility, ratio and cost shares",
            Box::new(|| c9_steiner(&corpus)),
        ),
        (
            "repeated SAA picks a near-best candidate",
            Box::new(c10_saa),
        ),
        (
            "buy-all-reserved reduction within beta/sigma",
            Box::new(|| c11_buyall(&corpus)),
        ),
        (
            "seeded pipelines are byte-identical on rerun",
            Box::new(|| c12_reproducible(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
