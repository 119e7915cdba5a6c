//! Experiment drivers: perturb-and-compare stability runs and
//! assortativity sweeps, plus their multi-seed aggregation and file
//! formats.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{self, CentralityError, Measure};
use crate::graph::Graph;
use crate::par::{self, Execution};
use crate::randomize::{
    self, rng_from_seed, Direction, NoiseModel, PerturbError, PerturbationPlan, PerturbationTrace, Progress, Rewiring,
};
use crate::stability::{self, rank_nodes, RankVector, StabilityError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Centrality(#[from] CentralityError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error("invalid sweep schedule: {0}")]
    Schedule(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Stability of one measure under one perturbed instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub measure: Measure,
    pub mu: f64,
    pub sigma: f64,
    pub jaccard_top_k: f64,
    pub k: usize,
    pub swaps_applied: u64,
    pub r_before: Option<f64>,
    pub r_after: Option<f64>,
    pub seed: u64,
}

impl StabilityReport {
    /// `1/μ`, infinite for an unchanged ranking.
    pub fn inverse_mu(&self) -> f64 {
        1.0 / self.mu
    }

    pub fn inverse_sigma(&self) -> f64 {
        1.0 / self.sigma
    }
}

/// Original and perturbed ranks of every node for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RankScatter {
    pub measure: Measure,
    pub original: RankVector,
    pub perturbed: RankVector,
}

#[derive(Debug, Clone)]
pub struct StabilityRun {
    pub seed: u64,
    pub reports: Vec<StabilityReport>,
    pub scatter: Vec<RankScatter>,
    pub trace: PerturbationTrace,
}

/// Rankings of the unperturbed graph, shared by every seed.
#[derive(Debug, Clone)]
pub struct Baseline {
    pub measures: Vec<Measure>,
    pub ranks: Vec<RankVector>,
    pub assortativity: Option<f64>,
}

impl Baseline {
    pub fn new(g: &Graph, measures: &[Measure], exec: Execution) -> Result<Self, ExperimentError> {
        let vectors = centrality::compute_all(g, measures, exec)?;
        Ok(Baseline {
            measures: measures.to_vec(),
            ranks: vectors.iter().map(rank_nodes).collect(),
            assortativity: g.assortativity(),
        })
    }
}

fn compare(
    baseline: &Baseline,
    perturbed: &Graph,
    k: usize,
    exec: Execution,
) -> Result<Vec<(Measure, RankVector)>, ExperimentError> {
    let vectors = centrality::compute_all(perturbed, &baseline.measures, exec)?;
    let ranks: Vec<_> = vectors.iter().map(|v| (v.measure, rank_nodes(v))).collect();
    if let Some(original) = baseline.ranks.first() {
        if k > original.len() {
            return Err(StabilityError::TopKTooLarge { k, n: original.len() }.into());
        }
    }
    Ok(ranks)
}

/// Perturbs `g` once according to `plan` and compares every measure's
/// ranking before and after.
pub fn run_stability_experiment(
    g: &Graph,
    measures: &[Measure],
    plan: &PerturbationPlan,
    k: usize,
    exec: Execution,
) -> Result<StabilityRun, ExperimentError> {
    let baseline = Baseline::new(g, measures, exec)?;
    run_with_baseline(g, &baseline, plan, k, exec)
}

pub fn run_with_baseline(
    g: &Graph,
    baseline: &Baseline,
    plan: &PerturbationPlan,
    k: usize,
    exec: Execution,
) -> Result<StabilityRun, ExperimentError> {
    if k > g.node_count() {
        return Err(StabilityError::TopKTooLarge { k, n: g.node_count() }.into());
    }
    let (perturbed, trace) = randomize::perturb(g, plan, 1)?;
    let r_after = perturbed.assortativity();
    let ranks = compare(baseline, &perturbed, k, exec)?;
    let mut reports = Vec::with_capacity(ranks.len());
    let mut scatter = Vec::with_capacity(ranks.len());
    for ((measure, y), x) in ranks.into_iter().zip(&baseline.ranks) {
        reports.push(StabilityReport {
            measure,
            mu: stability::mean_bias(x, &y)?,
            sigma: stability::std_bias(x, &y)?,
            jaccard_top_k: stability::jaccard_top_k(x, &y, k)?,
            k,
            swaps_applied: trace.successful_steps,
            r_before: baseline.assortativity,
            r_after,
            seed: plan.seed,
        });
        scatter.push(RankScatter {
            measure,
            original: x.clone(),
            perturbed: y,
        });
    }
    Ok(StabilityRun {
        seed: plan.seed,
        reports,
        scatter,
        trace,
    })
}

/// One run per seed, sharing the baseline rankings. Output order follows
/// `seeds` regardless of how the runs are scheduled.
pub fn run_seeds(
    g: &Graph,
    measures: &[Measure],
    template: &PerturbationPlan,
    seeds: &[u64],
    k: usize,
    exec: Execution,
) -> Result<Vec<StabilityRun>, ExperimentError> {
    let baseline = Baseline::new(g, measures, exec)?;
    par::map_slice(exec, seeds, |&seed| {
        let plan = PerturbationPlan { seed, ..*template };
        run_with_baseline(g, &baseline, &plan, k, Execution::Sequential)
    })
    .into_iter()
    .collect()
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation; needs two or more values.
fn sample_sd(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

/// Multi-seed aggregate for one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub measure: Measure,
    pub runs: usize,
    pub mu_mean: f64,
    pub mu_sd: Option<f64>,
    pub sigma_mean: f64,
    pub sigma_sd: Option<f64>,
    pub jaccard_mean: f64,
    pub jaccard_sd: Option<f64>,
    /// Mean of `1/μ` over runs with `μ > 0`.
    pub inverse_mu_mean: Option<f64>,
    /// Mean of `1/σ` over runs with `σ > 0`.
    pub inverse_sigma_mean: Option<f64>,
}

/// Mean ± sample standard deviation per measure, in first-seen order.
pub fn summarize(reports: &[StabilityReport]) -> Vec<MeasureSummary> {
    let mut order: Vec<Measure> = Vec::new();
    for r in reports {
        if !order.contains(&r.measure) {
            order.push(r.measure);
        }
    }
    order
        .into_iter()
        .map(|measure| {
            let rs: Vec<_> = reports.iter().filter(|r| r.measure == measure).collect();
            let col = |f: fn(&StabilityReport) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let (mu, sigma, jac) = (col(|r| r.mu), col(|r| r.sigma), col(|r| r.jaccard_top_k));
            let finite_inverse = |xs: &[f64]| {
                let inv: Vec<f64> = xs.iter().filter(|&&x| x > 0.0).map(|x| 1.0 / x).collect();
                mean(&inv)
            };
            MeasureSummary {
                measure,
                runs: rs.len(),
                mu_mean: mean(&mu).unwrap_or(0.0),
                mu_sd: sample_sd(&mu),
                sigma_mean: mean(&sigma).unwrap_or(0.0),
                sigma_sd: sample_sd(&sigma),
                jaccard_mean: mean(&jac).unwrap_or(0.0),
                jaccard_sd: sample_sd(&jac),
                inverse_mu_mean: finite_inverse(&mu),
                inverse_sigma_mean: finite_inverse(&sigma),
            }
        })
        .collect()
}

/// Swap counts at which a sweep takes readings. Strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSchedule(Vec<u64>);

impl SweepSchedule {
    pub fn explicit(counts: Vec<u64>) -> Result<Self, ExperimentError> {
        if counts.is_empty() {
            return Err(ExperimentError::Schedule("no checkpoints".into()));
        }
        if counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::Schedule(format!(
                "checkpoint swap counts must be strictly increasing: {counts:?}"
            )));
        }
        Ok(SweepSchedule(counts))
    }

    /// `checkpoints` readings evenly spaced over `0..=max_steps`, both ends
    /// included. `max_steps = 0` collapses to the single reading `[0]`.
    pub fn even(max_steps: u64, checkpoints: usize) -> Result<Self, ExperimentError> {
        if checkpoints < 2 {
            return Err(ExperimentError::Schedule(
                "a sweep needs at least two checkpoints".into(),
            ));
        }
        let intervals = (checkpoints - 1) as u64;
        let mut counts: Vec<u64> = (0..=intervals).map(|i| max_steps * i / intervals).collect();
        counts.dedup();
        Ok(SweepSchedule(counts))
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub swap_count: u64,
    pub r: Option<f64>,
    /// Top-k Jaccard against the original ranking, per measure in request order.
    pub jaccard: Vec<(Measure, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub seed: u64,
    pub direction: Direction,
    pub k: usize,
    pub points: Vec<SweepPoint>,
    pub attempted_steps: u64,
    /// Steering stopped finding valid rewirings before the last checkpoint;
    /// the final point sits at the swap count actually reached.
    pub saturated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub direction: Direction,
    pub k: usize,
    pub seed: u64,
    pub max_attempts_factor: u64,
}

/// Applies steered rewiring cumulatively and records assortativity plus
/// per-measure top-k Jaccard against the original ranking at every
/// checkpoint of `schedule`.
pub fn run_assortativity_sweep(
    g: &Graph,
    measures: &[Measure],
    schedule: &SweepSchedule,
    config: &SweepConfig,
    exec: Execution,
) -> Result<SweepResult, ExperimentError> {
    let baseline = Baseline::new(g, measures, exec)?;
    sweep_with_baseline(g, &baseline, schedule, config, exec)
}

pub fn sweep_with_baseline(
    g: &Graph,
    baseline: &Baseline,
    schedule: &SweepSchedule,
    config: &SweepConfig,
    exec: Execution,
) -> Result<SweepResult, ExperimentError> {
    if config.k > g.node_count() {
        return Err(StabilityError::TopKTooLarge {
            k: config.k,
            n: g.node_count(),
        }
        .into());
    }
    let last = *schedule.counts().last().expect("non-empty schedule");
    if last > 0 && g.edge_count() < 2 {
        return Err(PerturbError::TooFewEdges(g.edge_count()).into());
    }
    let budget = config.max_attempts_factor.saturating_mul(last);
    let model = NoiseModel::Steered(config.direction);
    let mut rng = rng_from_seed(config.seed);
    let mut state = Rewiring::new(g);
    let mut progress = Progress::default();
    let mut points = Vec::with_capacity(schedule.counts().len());
    let mut saturated = false;
    for &target in schedule.counts() {
        let reached = state.advance(model, target, budget, &mut progress, &mut rng);
        if !reached {
            saturated = true;
            if points
                .last()
                .is_some_and(|p: &SweepPoint| p.swap_count == progress.successful)
            {
                break;
            }
        }
        let snapshot = state.snapshot();
        let ranks = compare(baseline, &snapshot, config.k, exec)?;
        let jaccard = ranks
            .iter()
            .zip(&baseline.ranks)
            .map(|((m, y), x)| Ok((*m, stability::jaccard_top_k(x, y, config.k)?)))
            .collect::<Result<Vec<_>, StabilityError>>()?;
        points.push(SweepPoint {
            swap_count: progress.successful,
            r: state.assortativity(),
            jaccard,
        });
        if saturated {
            break;
        }
    }
    Ok(SweepResult {
        seed: config.seed,
        direction: config.direction,
        k: config.k,
        points,
        attempted_steps: progress.attempted,
        saturated,
    })
}

/// Independent sweeps, one per seed, in seed order.
pub fn sweep_seeds(
    g: &Graph,
    measures: &[Measure],
    schedule: &SweepSchedule,
    template: &SweepConfig,
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<SweepResult>, ExperimentError> {
    let baseline = Baseline::new(g, measures, exec)?;
    par::map_slice(exec, seeds, |&seed| {
        let config = SweepConfig { seed, ..*template };
        sweep_with_baseline(g, &baseline, schedule, &config, Execution::Sequential)
    })
    .into_iter()
    .collect()
}

/// One line of the sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub swap_count: u64,
    pub r: Option<f64>,
    pub measure: Measure,
    pub jaccard: f64,
}

/// Mean over sweeps of `r` and each measure's Jaccard, grouped by swap
/// count. Swap counts only some sweeps reached (after saturation) average
/// over those sweeps.
pub fn aggregate_sweeps(sweeps: &[SweepResult]) -> Vec<SweepRow> {
    let mut counts: Vec<u64> = sweeps
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.swap_count))
        .collect();
    counts.sort_unstable();
    counts.dedup();
    let mut rows = Vec::new();
    for count in counts {
        let points: Vec<&SweepPoint> = sweeps
            .iter()
            .filter_map(|s| s.points.iter().find(|p| p.swap_count == count))
            .collect();
        let rs: Vec<f64> = points.iter().filter_map(|p| p.r).collect();
        let r = mean(&rs);
        for (i, &(measure, _)) in points[0].jaccard.iter().enumerate() {
            let js: Vec<f64> = points.iter().map(|p| p.jaccard[i].1).collect();
            rows.push(SweepRow {
                swap_count: count,
                r,
                measure,
                jaccard: mean(&js).unwrap_or(0.0),
            });
        }
    }
    rows
}

fn optional(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `swap_count,r,measure,jaccard`; an undefined `r` is left empty.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<(), ExperimentError> {
    writeln!(out, "swap_count,r,measure,jaccard")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.swap_count,
            optional(row.r),
            row.measure,
            row.jaccard
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `node,rank_original,rank_perturbed,measure`.
pub fn write_scatter_csv<W: Write>(g: &Graph, scatter: &[RankScatter], mut out: W) -> Result<(), ExperimentError> {
    writeln!(out, "node,rank_original,rank_perturbed,measure")?;
    for s in scatter {
        for (v, (x, y)) in s.original.ranks().iter().zip(s.perturbed.ranks()).enumerate() {
            writeln!(out, "{},{},{},{}", g.label(v), x, y, s.measure)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::randomize::Steps;

    fn small_world() -> Graph {
        // Ring of 30 with chords every 3 nodes: irregular and rewirable.
        let mut edges: Vec<_> = (0..30).map(|i| (i, (i + 1) % 30)).collect();
        edges.extend((0..30).step_by(3).map(|i| (i, (i + 7) % 30)));
        edges.extend([(0, 15), (0, 20), (0, 25), (5, 17)]);
        Graph::from_edges(30, &edges).unwrap()
    }

    #[test]
    fn zero_steps_gives_perfect_stability() {
        let g = small_world();
        let plan = PerturbationPlan::uniform(Steps::Exact(0), 4);
        let run = run_stability_experiment(&g, &Measure::ALL, &plan, 10, Execution::Sequential).unwrap();
        assert_eq!(run.reports.len(), 6);
        for r in &run.reports {
            assert_eq!((r.mu, r.sigma, r.jaccard_top_k), (0.0, 0.0, 1.0));
            assert_eq!(r.r_before, r.r_after);
            assert!(r.inverse_mu().is_infinite());
        }
    }

    #[test]
    fn reports_carry_plan_details() {
        let g = small_world();
        let plan = PerturbationPlan::uniform(Steps::Exact(25), 8);
        let run =
            run_stability_experiment(&g, &[Measure::HIndex, Measure::Leverage], &plan, 5, Execution::Parallel).unwrap();
        for r in &run.reports {
            assert_eq!((r.swaps_applied, r.k, r.seed), (25, 5, 8));
            assert!(r.mu >= 0.0 && r.sigma >= 0.0 && (0.0..=1.0).contains(&r.jaccard_top_k));
        }
        assert_eq!(run.scatter[1].measure, Measure::Leverage);
        assert_eq!(run.scatter[1].original.len(), 30);
    }

    #[test]
    fn top_k_larger_than_graph_is_rejected() {
        let plan = PerturbationPlan::uniform(Steps::Exact(0), 0);
        let err = run_stability_experiment(&triangle(), &[Measure::HIndex], &plan, 4, Execution::Sequential);
        assert!(matches!(
            err,
            Err(ExperimentError::Stability(StabilityError::TopKTooLarge { .. }))
        ));
    }

    #[test]
    fn seeds_run_in_order_and_match_single_runs() {
        let g = small_world();
        let plan = PerturbationPlan::uniform(Steps::Exact(40), 0);
        let seeds = [5, 1, 9];
        let runs = run_seeds(&g, &Measure::ALL, &plan, &seeds, 5, Execution::Parallel).unwrap();
        for (run, &seed) in runs.iter().zip(&seeds) {
            let single = run_stability_experiment(
                &g,
                &Measure::ALL,
                &PerturbationPlan { seed, ..plan },
                5,
                Execution::Sequential,
            )
            .unwrap();
            assert_eq!(run.reports, single.reports);
        }
    }

    #[test]
    fn summary_statistics() {
        let base = StabilityReport {
            measure: Measure::HIndex,
            mu: 0.0,
            sigma: 0.0,
            jaccard_top_k: 1.0,
            k: 25,
            swaps_applied: 0,
            r_before: None,
            r_after: None,
            seed: 0,
        };
        let reports = vec![
            StabilityReport {
                mu: 0.0,
                sigma: 0.0,
                ..base.clone()
            },
            StabilityReport {
                mu: 0.5,
                sigma: 0.25,
                jaccard_top_k: 0.5,
                ..base.clone()
            },
            StabilityReport {
                mu: 0.25,
                sigma: 0.5,
                jaccard_top_k: 0.0,
                ..base.clone()
            },
            StabilityReport {
                measure: Measure::Leverage,
                mu: 0.1,
                ..base.clone()
            },
        ];
        let s = summarize(&reports);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].runs, 3);
        assert_eq!(s[0].mu_mean, 0.25);
        assert_eq!(s[0].mu_sd, Some(0.25));
        assert_eq!(s[0].jaccard_mean, 0.5);
        assert_eq!(s[0].inverse_mu_mean, Some(3.0));
        assert_eq!(s[0].inverse_sigma_mean, Some(3.0));
        assert_eq!(s[1].mu_sd, None);
        assert_eq!(s[1].inverse_sigma_mean, None);
    }

    #[test]
    fn schedules() {
        assert_eq!(
            SweepSchedule::even(2000, 5).unwrap().counts(),
            &[0, 500, 1000, 1500, 2000]
        );
        assert_eq!(SweepSchedule::even(0, 4).unwrap().counts(), &[0]);
        assert!(SweepSchedule::even(10, 1).is_err());
        assert!(SweepSchedule::explicit(vec![0, 5, 5]).is_err());
        assert!(SweepSchedule::explicit(vec![]).is_err());
        assert_eq!(
            SweepSchedule::explicit(vec![0, 500, 1000, 2000])
                .unwrap()
                .counts()
                .len(),
            4
        );
    }

    #[test]
    fn empty_sweep_is_the_original() {
        let g = small_world();
        let config = SweepConfig {
            direction: Direction::Increase,
            k: 5,
            seed: 1,
            max_attempts_factor: 100,
        };
        let res = run_assortativity_sweep(
            &g,
            &Measure::ALL,
            &SweepSchedule::even(0, 3).unwrap(),
            &config,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(res.points.len(), 1);
        assert_eq!(res.points[0].r, g.assortativity());
        assert!(res.points[0].jaccard.iter().all(|&(_, j)| j == 1.0));
    }

    #[test]
    fn increasing_sweep_is_monotone() {
        let g = small_world();
        for seed in 0..5 {
            let config = SweepConfig {
                direction: Direction::Increase,
                k: 5,
                seed,
                max_attempts_factor: 100,
            };
            let schedule = SweepSchedule::explicit(vec![0, 5, 10, 20]).unwrap();
            let res =
                run_assortativity_sweep(&g, &[Measure::HIndex], &schedule, &config, Execution::Sequential).unwrap();
            let rs: Vec<f64> = res.points.iter().map(|p| p.r.unwrap()).collect();
            assert!(rs.windows(2).all(|w| w[0] <= w[1]), "{rs:?}");
        }
    }

    #[test]
    fn saturated_sweep_is_flagged() {
        let config = SweepConfig {
            direction: Direction::Decrease,
            k: 2,
            seed: 3,
            max_attempts_factor: 10,
        };
        let schedule = SweepSchedule::explicit(vec![0, 2, 4]).unwrap();
        let res =
            run_assortativity_sweep(&star(4), &[Measure::HIndex], &schedule, &config, Execution::Sequential).unwrap();
        assert!(res.saturated);
        assert_eq!(res.points.len(), 1);
        assert_eq!(res.points[0].swap_count, 0);
    }

    #[test]
    fn sweep_aggregation_and_csv() {
        let point = |count, r, j| SweepPoint {
            swap_count: count,
            r,
            jaccard: vec![(Measure::HIndex, j)],
        };
        let sweep = |points| SweepResult {
            seed: 0,
            direction: Direction::Increase,
            k: 1,
            points,
            attempted_steps: 0,
            saturated: false,
        };
        let rows = aggregate_sweeps(&[
            sweep(vec![point(0, Some(-0.5), 1.0), point(10, Some(-0.25), 0.5)]),
            sweep(vec![point(0, Some(-0.5), 1.0), point(10, None, 0.0)]),
        ]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].r, Some(-0.25));
        assert_eq!(rows[1].jaccard, 0.25);
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "swap_count,r,measure,jaccard\n0,-0.5,h,1\n10,-0.25,h,0.25\n"
        );
    }

    #[test]
    fn scatter_csv_layout() {
        let g = path(3);
        let plan = PerturbationPlan::uniform(Steps::Exact(0), 0);
        let run = run_stability_experiment(&g, &[Measure::HIndex], &plan, 1, Execution::Sequential).unwrap();
        let mut out = Vec::new();
        write_scatter_csv(&g, &run.scatter, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "node,rank_original,rank_perturbed,measure\n0,1,1,h\n1,2,2,h\n2,3,3,h\n"
        );
    }
}
