use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use netstab::centrality::{self, format_significant, CentralityError, Measure};
use netstab::experiment::{
    self, aggregate_sweeps, summarize, ExperimentError, MeasureSummary, StabilityReport, SweepConfig, SweepSchedule,
};
use netstab::generate::{self, DegreeModel, GenerateError, GeneratorSpec};
use netstab::randomize::{self, PerturbError};
use netstab::{load_edge_list, save_edge_list, Direction, Execution, GraphError, LoadedGraph, PerturbationPlan, Steps};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::plot;

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| CliError::usage("a seed is required: pass --seed or set NETSTAB_SEED"))
}

fn seed_list(args: &SeedListArgs) -> Result<Vec<u64>> {
    if !args.seeds.is_empty() {
        return Ok(args.seeds.clone());
    }
    let base = require_seed(args.seed)?;
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    Ok((0..args.runs).map(|i| base.wrapping_add(i)).collect())
}

fn ensure_distinct(input: &Path, outputs: &[&Path]) -> Result<()> {
    for (i, out) in outputs.iter().enumerate() {
        if *out == input || outputs[..i].contains(out) {
            return Err(CliError::usage(format!("path {} is used twice", out.display())));
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

/// `dir/stem.suffix` for an output path `dir/stem.ext`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn graph_error(path: &Path, e: GraphError) -> CliError {
    match e {
        GraphError::Io(source) => CliError::io(path, source),
        other => CliError::usage(format!("{}: {other}", path.display())),
    }
}

fn experiment_error(path: &Path, e: ExperimentError) -> CliError {
    match e {
        ExperimentError::Io(source) => CliError::io(path, source),
        ExperimentError::Perturb(p) => perturb_error(p),
        other => CliError::usage(other.to_string()),
    }
}

fn perturb_error(e: PerturbError) -> CliError {
    match e {
        PerturbError::Saturated { .. } => CliError::Saturated(e.to_string()),
        other => CliError::usage(other.to_string()),
    }
}

fn measures(spec: &str) -> Result<Vec<Measure>> {
    Measure::parse_list(spec).map_err(|e| CliError::usage(e.to_string()))
}

/// Reads a graph and its SHA-256 content hash.
fn load(path: &Path) -> Result<(LoadedGraph, String)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let hash = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let loaded = load_edge_list(BufReader::new(bytes.as_slice())).map_err(|e| graph_error(path, e))?;
    Ok((loaded, hash))
}

fn save_graph(path: &Path, g: &netstab::Graph) -> Result<()> {
    save_edge_list(g, create(path)?).map_err(|e| graph_error(path, e))
}

fn direction(d: DirectionArg) -> Direction {
    match d {
        DirectionArg::Increase => Direction::Increase,
        DirectionArg::Decrease => Direction::Decrease,
    }
}

fn plan_from(args: &PlanArgs, seed: u64) -> Result<PerturbationPlan> {
    let steps: Steps = args
        .steps
        .parse()
        .map_err(|e: PerturbError| CliError::usage(e.to_string()))?;
    let mut plan = match (args.model, args.direction) {
        (1, None) => PerturbationPlan::uniform(steps, seed),
        (1, Some(_)) => return Err(CliError::usage("--direction only applies to --model 2")),
        (_, Some(d)) => PerturbationPlan::steered(direction(d), steps, seed),
        (_, None) => return Err(CliError::usage("--model 2 requires --direction increase|decrease")),
    };
    plan.max_attempts_factor = args.max_attempts_factor;
    Ok(plan)
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let seed = require_seed(args.seed.seed)?;
    let mut spec = match args.model {
        ModelKind::ScaleFree => {
            let gamma = args
                .gamma
                .ok_or_else(|| CliError::usage("--model scale-free requires --gamma"))?;
            GeneratorSpec::scale_free(args.nodes, gamma, seed)
        }
        ModelKind::Exponential => {
            let mean = args
                .mean_degree
                .ok_or_else(|| CliError::usage("--model exponential requires --mean-degree"))?;
            GeneratorSpec::exponential(args.nodes, mean, seed)
        }
    };
    if let Some(k_min) = args.k_min {
        spec.k_min = k_min;
    }
    let net = generate::generate(&spec).map_err(|e: GenerateError| CliError::usage(e.to_string()))?;
    let meta_path = sibling(&args.out, "meta.json");
    save_graph(&args.out, &net.graph)?;
    write_json(&meta_path, &net.metadata)?;
    let gamma = match spec.model {
        DegreeModel::ScaleFree { gamma } => format!(" gamma={gamma}"),
        DegreeModel::Exponential { mean_degree } => format!(" mean_degree={mean_degree}"),
    };
    eprintln!(
        "generated {}{gamma}: n={} m={} (target m={}) r={:?}",
        net.metadata.model, net.metadata.n_target, net.metadata.m_realized, net.metadata.m_target, net.metadata.r
    );
    Ok(())
}

#[derive(Serialize)]
struct NodeScore<'a> {
    node: &'a str,
    score: f64,
}

#[derive(Serialize)]
struct MeasureScores<'a> {
    measure: Measure,
    scores: Vec<NodeScore<'a>>,
}

pub fn centrality(args: &CentralityArgs, exec: Execution) -> Result<()> {
    let measures = measures(&args.measure)?;
    let (loaded, _) = load(&args.input)?;
    let g = &loaded.graph;
    let vectors = centrality::compute_all(g, &measures, exec).map_err(|e| CliError::usage(e.to_string()))?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => {
            ensure_distinct(&args.input, &[path])?;
            Box::new(create(path)?)
        }
        None => Box::new(std::io::stdout().lock()),
    };
    let target = args.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    match args.format {
        TableFormat::Csv => centrality::write_csv(g, &vectors, &mut sink).map_err(|e| match e {
            CentralityError::Io(source) => CliError::io(&target, source),
            other => CliError::usage(other.to_string()),
        }),
        TableFormat::Json => {
            let body: Vec<MeasureScores> = vectors
                .iter()
                .map(|v| MeasureScores {
                    measure: v.measure,
                    scores: v
                        .scores
                        .iter()
                        .enumerate()
                        .map(|(i, &score)| NodeScore {
                            node: g.label(i),
                            score,
                        })
                        .collect(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut sink, &body).map_err(|e| CliError::io(&target, e.into()))?;
            writeln!(sink)
                .and_then(|_| sink.flush())
                .map_err(|e| CliError::io(&target, e))
        }
    }
}

pub fn perturb(args: &PerturbArgs) -> Result<()> {
    let seed = require_seed(args.seed.seed)?;
    let plan = plan_from(&args.plan, seed)?;
    let trace_path = args.trace.clone().unwrap_or_else(|| sibling(&args.out, "trace.json"));
    ensure_distinct(&args.input, &[&args.out, &trace_path])?;
    let (loaded, _) = load(&args.input)?;
    match randomize::perturb(&loaded.graph, &plan, args.checkpoints) {
        Ok((out, trace)) => {
            save_graph(&args.out, &out)?;
            write_json(&trace_path, &trace)?;
            eprintln!(
                "applied {} rewires in {} attempts",
                trace.successful_steps, trace.attempted_steps
            );
            Ok(())
        }
        Err(PerturbError::Saturated { trace, partial }) => {
            write_json(&trace_path, &trace)?;
            drop(partial);
            Err(CliError::Saturated(format!(
                "rewiring saturated after {} of {} requested steps ({} attempts); partial trace in {}",
                trace.successful_steps,
                plan.steps.resolve(loaded.graph.node_count()),
                trace.attempted_steps,
                trace_path.display()
            )))
        }
        Err(e) => Err(perturb_error(e)),
    }
}

#[derive(Serialize)]
struct PlanRecord {
    model: u8,
    steps: Steps,
    steps_resolved: u64,
    direction: Option<Direction>,
    max_attempts_factor: u64,
}

#[derive(Serialize)]
struct ExperimentMetadata<'a> {
    input: String,
    graph_sha256: &'a str,
    nodes: usize,
    edges: usize,
    duplicates_dropped: usize,
    self_loops_dropped: usize,
    plan: PlanRecord,
    seeds: &'a [u64],
    top_k: usize,
    measures: &'a [Measure],
}

#[derive(Serialize)]
struct ReportFile<'a> {
    metadata: ExperimentMetadata<'a>,
    reports: &'a [StabilityReport],
    summary: &'a [MeasureSummary],
}

fn write_report_csv(path: &Path, reports: &[StabilityReport]) -> Result<()> {
    let mut out = create(path)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut body = String::from("measure,seed,mu,sigma,jaccard_top_k,k,swaps_applied,r_before,r_after\n");
    for r in reports {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.measure,
            r.seed,
            r.mu,
            r.sigma,
            r.jaccard_top_k,
            r.k,
            r.swaps_applied,
            opt(r.r_before),
            opt(r.r_after)
        ));
    }
    out.write_all(body.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

pub fn stability(args: &StabilityArgs, exec: Execution) -> Result<()> {
    let measures = measures(&args.measure)?;
    let seeds = seed_list(&args.seeds)?;
    let plan = plan_from(&args.plan, seeds[0])?;
    ensure_distinct(&args.input, &[&args.out])?;
    let (loaded, hash) = load(&args.input)?;
    let g = &loaded.graph;
    let runs = experiment::run_seeds(g, &measures, &plan, &seeds, args.top_k, exec)
        .map_err(|e| experiment_error(&args.out, e))?;

    let reports: Vec<StabilityReport> = runs.iter().flat_map(|r| r.reports.iter().cloned()).collect();
    let summary = summarize(&reports);
    match args.format {
        TableFormat::Json => {
            let file = ReportFile {
                metadata: ExperimentMetadata {
                    input: args.input.display().to_string(),
                    graph_sha256: &hash,
                    nodes: g.node_count(),
                    edges: g.edge_count(),
                    duplicates_dropped: loaded.duplicates_dropped,
                    self_loops_dropped: loaded.self_loops_dropped,
                    plan: PlanRecord {
                        model: plan.model.number(),
                        steps: plan.steps,
                        steps_resolved: plan.steps.resolve(g.node_count()),
                        direction: plan.model.direction(),
                        max_attempts_factor: plan.max_attempts_factor,
                    },
                    seeds: &seeds,
                    top_k: args.top_k,
                    measures: &measures,
                },
                reports: &reports,
                summary: &summary,
            };
            write_json(&args.out, &file)?;
        }
        TableFormat::Csv => write_report_csv(&args.out, &reports)?,
    }

    let scatter_dir = match &args.scatter_dir {
        Some(dir) => dir.clone(),
        None => args.out.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let stem = args
        .out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for run in &runs {
        for scatter in &run.scatter {
            let path = scatter_dir.join(format!("{stem}.scatter.{}.seed{}.csv", scatter.measure, run.seed));
            experiment::write_scatter_csv(g, std::slice::from_ref(scatter), create(&path)?)
                .map_err(|e| experiment_error(&path, e))?;
        }
    }

    for s in &summary {
        eprintln!(
            "{:>4}: mu={} sigma={} jaccard@{}={} (runs={})",
            s.measure.id(),
            format_significant(s.mu_mean, 6),
            format_significant(s.sigma_mean, 6),
            args.top_k,
            format_significant(s.jaccard_mean, 6),
            s.runs
        );
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, exec: Execution) -> Result<()> {
    let measures = measures(&args.measure)?;
    let seeds = seed_list(&args.seeds)?;
    ensure_distinct(&args.input, &[&args.out])?;
    let (loaded, _) = load(&args.input)?;
    let g = &loaded.graph;
    let schedule = if args.at.is_empty() {
        let max: Steps = args
            .max_steps
            .parse()
            .map_err(|e: PerturbError| CliError::usage(e.to_string()))?;
        SweepSchedule::even(max.resolve(g.node_count()), args.checkpoints)
    } else {
        SweepSchedule::explicit(args.at.clone())
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    let config = SweepConfig {
        direction: direction(args.direction),
        k: args.top_k,
        seed: seeds[0],
        max_attempts_factor: args.max_attempts_factor,
    };
    let sweeps = experiment::sweep_seeds(g, &measures, &schedule, &config, &seeds, exec)
        .map_err(|e| experiment_error(&args.out, e))?;
    let rows = aggregate_sweeps(&sweeps);
    experiment::write_sweep_csv(&rows, create(&args.out)?).map_err(|e| experiment_error(&args.out, e))?;
    let saturated: Vec<u64> = sweeps.iter().filter(|s| s.saturated).map(|s| s.seed).collect();
    if !saturated.is_empty() {
        return Err(CliError::Saturated(format!(
            "steering saturated before the last checkpoint for seeds {saturated:?}; partial sweep written to {}",
            args.out.display()
        )));
    }
    Ok(())
}

pub fn plot(args: &PlotArgs) -> Result<()> {
    if !args.format.eq_ignore_ascii_case("svg") {
        return Err(CliError::usage(format!(
            "unsupported plot format `{}` (only svg)",
            args.format
        )));
    }
    ensure_distinct(&args.input, &[&args.out])?;
    let svg = match args.kind {
        PlotKind::Scatter => plot::scatter_svg(&plot::read_scatter(&args.input)?),
        PlotKind::Bars => plot::bars_svg(&plot::read_report(&args.input)?),
        PlotKind::Sweep => plot::sweep_svg(&plot::read_sweep(&args.input)?),
    };
    let mut out = create(&args.out)?;
    out.write_all(svg.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(&args.out, e))
}
