// SPDX-License-Identifier: Apache-2.0

//! Stage implementations. Each stage reads its upstream artifacts from the
//! run directory, writes its own artifacts there, and records itself in the
//! manifest.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use collabnet::community::{
    assortativity, detect_communities, write_communities_csv, CommunitySummary,
};
use collabnet::forest::{run_experiment, ExperimentReports, ForestParams};
use collabnet::graph::{
    connected_components, gcc_summary, project_bipartite, read_edge_list, write_edge_list,
    CollabGraph,
};
use collabnet::measures::{
    all_measures_with, read_measures_csv, write_measures_csv, MeasureOptions, MeasureRow,
};
use collabnet::model::{combined_visit_frequency, load_dataset, save_dataset, Dataset};
use collabnet::stats::{
    correlation_table, join_success, quantile_trend, trend_svg, write_correlation_csv,
    write_trend_csv, AnalysisRow, MEASURE_COLUMNS, PROXY_COLUMNS,
};
use collabnet::synth::{describe, generate, SuccessModel, SynthConfig};

use crate::error::CliError;
use crate::manifest::record_stage;
use crate::report::render_report;
use crate::RunArgs;

/// Resolved artifact locations for one run directory.
pub struct RunPaths {
    pub out: PathBuf,
    groups: Option<PathBuf>,
    success: Option<PathBuf>,
}

impl RunPaths {
    pub fn new(out: &Path, groups: Option<PathBuf>, success: Option<PathBuf>) -> Self {
        RunPaths {
            out: out.to_path_buf(),
            groups,
            success,
        }
    }

    pub fn groups(&self) -> PathBuf {
        self.groups.clone().unwrap_or_else(|| self.out.join("groups.jsonl"))
    }

    pub fn success(&self) -> PathBuf {
        self.success.clone().unwrap_or_else(|| self.out.join("success.jsonl"))
    }

    pub fn edges(&self) -> PathBuf {
        self.out.join("edges.csv")
    }

    pub fn isolates(&self) -> PathBuf {
        self.out.join("isolates.csv")
    }

    pub fn components(&self) -> PathBuf {
        self.out.join("components.json")
    }

    pub fn measures(&self) -> PathBuf {
        self.out.join("measures.csv")
    }

    pub fn communities_csv(&self) -> PathBuf {
        self.out.join("communities.csv")
    }

    pub fn communities_json(&self) -> PathBuf {
        self.out.join("communities.json")
    }

    pub fn correlations(&self) -> PathBuf {
        self.out.join("correlations.csv")
    }

    pub fn trends_dir(&self) -> PathBuf {
        self.out.join("trends")
    }

    pub fn predictions(&self) -> PathBuf {
        self.out.join("predictions.csv")
    }

    pub fn evaluation(&self) -> PathBuf {
        self.out.join("evaluation.json")
    }

    pub fn report(&self) -> PathBuf {
        self.out.join("report.md")
    }

    fn ensure_out(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out)?;
        Ok(())
    }
}

fn require(path: PathBuf, hint: &str) -> Result<PathBuf, CliError> {
    if path.exists() {
        Ok(path)
    } else {
        Err(CliError::Upstream {
            missing: path,
            hint: hint.to_string(),
        })
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn load_inputs(paths: &RunPaths) -> Result<Dataset, CliError> {
    let groups = require(paths.groups(), "run `synth` first or pass --groups")?;
    let success = require(paths.success(), "run `synth` first or pass --success")?;
    Ok(load_dataset(&groups, Some(&success))?)
}

fn load_graph(paths: &RunPaths) -> Result<CollabGraph, CliError> {
    let edges = require(paths.edges(), "run `build` first")?;
    let isolates = require(paths.isolates(), "run `build` first")?;
    Ok(read_edge_list(&edges, &isolates)?)
}

#[derive(Args, Clone)]
pub struct SynthArgs {
    /// Number of groups
    #[arg(long, default_value_t = 4560)]
    groups_count: usize,

    /// Number of distinct performers
    #[arg(long, default_value_t = 16329)]
    performers: usize,

    /// Planted community blocks
    #[arg(long, default_value_t = 40)]
    communities: usize,

    /// Target fraction of performers in more than one group
    #[arg(long, default_value_t = 0.22)]
    multi_fraction: f64,

    /// Closeness weight in the planted success model
    #[arg(long, default_value_t = 3.0)]
    closeness_weight: f64,

    /// Degree-centrality weight in the planted success model
    #[arg(long, default_value_t = 0.2)]
    degree_weight: f64,

    /// Clustering coefficient at which the planted visit response peaks
    #[arg(long, default_value_t = 0.25)]
    parabola_peak: f64,

    /// Noise standard deviation in the planted success model
    #[arg(long, default_value_t = 0.45)]
    noise_sd: f64,
}

pub fn cmd_synth(paths: &RunPaths, run: &RunArgs, args: &SynthArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let cfg = SynthConfig {
        n_groups: args.groups_count,
        n_performers: args.performers,
        community_count: args.communities,
        multi_membership_fraction: args.multi_fraction,
        success: SuccessModel {
            closeness_weight: args.closeness_weight,
            degree_weight: args.degree_weight,
            clustering_parabola_peak: args.parabola_peak,
            noise_sd: args.noise_sd,
        },
        seed: run.seed,
        ..Default::default()
    };
    let ds = generate(&cfg)?;
    let groups_path = paths.out.join("groups.jsonl");
    let success_path = paths.out.join("success.jsonl");
    save_dataset(&ds, &groups_path, &success_path)?;
    let summary = describe(&ds);
    let summary_path = paths.out.join("dataset.json");
    write_json(&summary, &summary_path)?;
    record_stage(
        &paths.out,
        "synth",
        run.seed,
        &[
            ("groups", cfg.n_groups.to_string()),
            ("performers", cfg.n_performers.to_string()),
            ("communities", cfg.community_count.to_string()),
            ("multi_fraction", cfg.multi_membership_fraction.to_string()),
            ("closeness_weight", cfg.success.closeness_weight.to_string()),
            ("degree_weight", cfg.success.degree_weight.to_string()),
            ("parabola_peak", cfg.success.clustering_parabola_peak.to_string()),
            ("noise_sd", cfg.success.noise_sd.to_string()),
        ],
        &[],
        &[&groups_path, &success_path, &summary_path],
    )?;
    println!(
        "synth: {} groups, {} performers, gcc fraction {:.3}",
        summary.n_groups, summary.n_performers, summary.gcc_fraction
    );
    Ok(())
}

#[derive(Serialize)]
struct ComponentsArtifact {
    n_nodes: usize,
    n_edges: usize,
    n_components: usize,
    gcc_fraction: f64,
    max_island_size: usize,
}

pub fn cmd_build(paths: &RunPaths, run: &RunArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let groups = require(paths.groups(), "run `synth` first or pass --groups")?;
    let success = paths.success();
    let ds = load_dataset(&groups, success.exists().then_some(success.as_path()))?;
    let g = project_bipartite(&ds);
    let comps = connected_components(&g);
    let summary = gcc_summary(&comps)?;
    write_edge_list(&g, &paths.edges(), &paths.isolates())?;
    let artifact = ComponentsArtifact {
        n_nodes: g.node_count(),
        n_edges: g.edge_count(),
        n_components: comps.num_components(),
        gcc_fraction: summary.gcc_fraction,
        max_island_size: summary.max_island_size,
    };
    write_json(&artifact, &paths.components())?;
    record_stage(
        &paths.out,
        "build",
        run.seed,
        &[],
        &[&groups],
        &[&paths.edges(), &paths.isolates(), &paths.components()],
    )?;
    println!(
        "build: {} nodes, {} edges, {} components, gcc {:.3}, max island {}",
        artifact.n_nodes,
        artifact.n_edges,
        artifact.n_components,
        artifact.gcc_fraction,
        artifact.max_island_size
    );
    Ok(())
}

pub fn cmd_measures(paths: &RunPaths, run: &RunArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let groups = require(paths.groups(), "run `synth` first or pass --groups")?;
    let ds = load_dataset(&groups, None)?;
    let g = load_graph(paths)?;
    let g = if run.gcc_only {
        let comps = connected_components(&g);
        let keep: Vec<bool> = comps
            .component_of
            .iter()
            .map(|&c| c == comps.largest)
            .collect();
        g.induced_subgraph(&keep).0
    } else {
        g
    };
    let rows = all_measures_with(&g, &ds, &MeasureOptions::default())?;
    write_measures_csv(&rows, &paths.measures())?;
    record_stage(
        &paths.out,
        "measures",
        run.seed,
        &[("gcc_only", run.gcc_only.to_string())],
        &[&groups, &paths.edges(), &paths.isolates()],
        &[&paths.measures()],
    )?;
    println!("measures: {} rows", rows.len());
    Ok(())
}

#[derive(Serialize)]
struct CommunitiesArtifact {
    #[serde(flatten)]
    summary: CommunitySummary,
    assortativity_pagerank: Option<f64>,
    assortativity_visit_frequency: Option<f64>,
}

pub fn cmd_communities(paths: &RunPaths, run: &RunArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let ds = load_inputs(paths)?;
    let g = load_graph(paths)?;
    let partition = detect_communities(&g, run.seed);
    write_communities_csv(&g, &partition, &paths.communities_csv())?;

    let pagerank_attr: Vec<Option<f64>> = (0..g.node_count())
        .map(|v| ds.success.get(g.group_id(v)).map(|s| s.pagerank as f64))
        .collect();
    let visit_attr: Vec<Option<f64>> = (0..g.node_count())
        .map(|v| {
            ds.success
                .get(g.group_id(v))
                .and_then(|s| combined_visit_frequency(s).ok())
        })
        .collect();
    // Degenerate inputs (no usable edges, constant attribute) leave the
    // coefficient undefined; the partition output is still valid.
    let assort = |attr: &[Option<f64>], label: &str| match assortativity(&g, attr) {
        Ok(r) => Some(r),
        Err(e) => {
            eprintln!("warning: assortativity ({label}) unavailable: {e}");
            None
        }
    };
    let artifact = CommunitiesArtifact {
        summary: CommunitySummary::from_partition(&partition),
        assortativity_pagerank: assort(&pagerank_attr, "pagerank"),
        assortativity_visit_frequency: assort(&visit_attr, "visit frequency"),
    };
    write_json(&artifact, &paths.communities_json())?;
    record_stage(
        &paths.out,
        "communities",
        run.seed,
        &[],
        &[&paths.groups(), &paths.success(), &paths.edges(), &paths.isolates()],
        &[&paths.communities_csv(), &paths.communities_json()],
    )?;
    println!(
        "communities: {} communities, modularity {}",
        artifact.summary.num_communities,
        artifact
            .summary
            .modularity
            .map_or("undefined".to_string(), |q| format!("{q:.4}"))
    );
    Ok(())
}

fn load_joined_rows(paths: &RunPaths) -> Result<(Vec<MeasureRow>, Vec<AnalysisRow>), CliError> {
    let measures_path = require(paths.measures(), "run `measures` first")?;
    let rows = read_measures_csv(&measures_path)?;
    let ds = load_inputs(paths)?;
    let joined = join_success(&rows, &ds)?;
    Ok((rows, joined))
}

#[derive(Args, Clone)]
pub struct CorrelateArgs {
    /// Also emit an SVG scatter of bin means next to each trend CSV
    #[arg(long)]
    svg: bool,
}

pub fn cmd_correlate(paths: &RunPaths, run: &RunArgs, args: &CorrelateArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let (_, joined) = load_joined_rows(paths)?;
    let table = correlation_table(&joined)?;
    write_correlation_csv(&table, &paths.correlations())?;

    let trends_dir = paths.trends_dir();
    std::fs::create_dir_all(&trends_dir)?;
    let mut outputs: Vec<PathBuf> = vec![paths.correlations()];
    for (measure_name, measure) in MEASURE_COLUMNS {
        let x: Vec<f64> = joined.iter().map(|r| measure(&r.measures)).collect();
        for (proxy_name, proxy) in PROXY_COLUMNS {
            let y: Vec<f64> = joined.iter().map(proxy).collect();
            let trend = quantile_trend(&x, &y, run.bins)?;
            let csv_path = trends_dir.join(format!("trend_{measure_name}_{proxy_name}.csv"));
            write_trend_csv(&trend, &csv_path)?;
            if args.svg {
                let svg_path = trends_dir.join(format!("trend_{measure_name}_{proxy_name}.svg"));
                std::fs::write(&svg_path, trend_svg(&trend, measure_name, proxy_name))?;
                outputs.push(svg_path);
            }
            outputs.push(csv_path);
        }
    }
    let output_refs: Vec<&Path> = outputs.iter().map(|p| p.as_path()).collect();
    record_stage(
        &paths.out,
        "correlate",
        run.seed,
        &[("bins", run.bins.to_string()), ("svg", args.svg.to_string())],
        &[&paths.measures(), &paths.groups(), &paths.success()],
        &output_refs,
    )?;
    println!(
        "correlate: {} joined rows, {} trend tables",
        joined.len(),
        MEASURE_COLUMNS.len() * PROXY_COLUMNS.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluationArtifact {
    without_group_size: ExperimentReports,
    with_group_size: ExperimentReports,
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

pub fn cmd_predict(paths: &RunPaths, run: &RunArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let (_, joined) = load_joined_rows(paths)?;
    let params = ForestParams {
        n_trees: run.trees,
        seed: run.seed,
        ..Default::default()
    };
    let without = run_experiment(&joined, false, &params)?;
    let with = run_experiment(&joined, true, &params)?;

    let mut w = csv::Writer::from_path(paths.predictions()).map_err(CliError::internal)?;
    let rows: [[String; 5]; 3] = [
        [
            "pagerank".into(),
            fmt3(without.pagerank.train_score),
            fmt3(without.pagerank.test_score),
            fmt3(with.pagerank.train_score),
            fmt3(with.pagerank.test_score),
        ],
        [
            "pagerank_within_1".into(),
            "n/a".into(),
            fmt3(without.pagerank.test_score_within_1.unwrap_or(f64::NAN)),
            "n/a".into(),
            fmt3(with.pagerank.test_score_within_1.unwrap_or(f64::NAN)),
        ],
        [
            "visit_hi_lo".into(),
            fmt3(without.visit.train_score),
            fmt3(without.visit.test_score),
            fmt3(with.visit.train_score),
            fmt3(with.visit.test_score),
        ],
    ];
    w.write_record([
        "task",
        "train_without_group_size",
        "test_without_group_size",
        "train_with_group_size",
        "test_with_group_size",
    ])
    .map_err(CliError::internal)?;
    for row in &rows {
        w.write_record(row).map_err(CliError::internal)?;
    }
    w.flush()?;

    let artifact = EvaluationArtifact {
        without_group_size: without,
        with_group_size: with,
    };
    write_json(&artifact, &paths.evaluation())?;
    record_stage(
        &paths.out,
        "predict",
        run.seed,
        &[
            ("trees", run.trees.to_string()),
            ("with_group_size_variant", "both".to_string()),
        ],
        &[&paths.measures(), &paths.groups(), &paths.success()],
        &[&paths.predictions(), &paths.evaluation()],
    )?;
    println!(
        "predict: pagerank test {:.3} (within-1 {:.3}), visit hi/lo test {:.3}",
        artifact.without_group_size.pagerank.test_score,
        artifact
            .without_group_size
            .pagerank
            .test_score_within_1
            .unwrap_or(f64::NAN),
        artifact.without_group_size.visit.test_score
    );
    Ok(())
}

pub fn cmd_report(paths: &RunPaths, run: &RunArgs) -> Result<(), CliError> {
    paths.ensure_out()?;
    let report = render_report(paths, run.bins, run.with_group_size)?;
    std::fs::write(paths.report(), &report)?;
    record_stage(
        &paths.out,
        "report",
        run.seed,
        &[("with_group_size", run.with_group_size.to_string())],
        &[
            &paths.components(),
            &paths.communities_json(),
            &paths.correlations(),
            &paths.predictions(),
            &paths.evaluation(),
        ],
        &[&paths.report()],
    )?;
    println!("report: {}", paths.report().display());
    Ok(())
}

pub fn require_artifact(path: PathBuf, hint: &str) -> Result<PathBuf, CliError> {
    require(path, hint)
}
