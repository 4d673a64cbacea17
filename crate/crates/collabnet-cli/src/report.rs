// SPDX-License-Identifier: Apache-2.0

//! Markdown report assembly from cached stage artifacts. The report is a
//! pure function of the artifact bytes, so regenerating it is byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::commands::{require_artifact, RunPaths};
use crate::error::CliError;

fn read_json(path: &Path) -> Result<Value, CliError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn read_csv_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(CliError::internal)?;
    let header = rdr
        .headers()
        .map_err(CliError::internal)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(CliError::internal)?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn md_table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}|", vec!["---"; header.len()].join("|"));
    for row in rows {
        let _ = writeln!(out, "| {} |", row.join(" | "));
    }
}

fn json_num(v: &Value, key: &str) -> String {
    match &v[key] {
        Value::Number(n) => n.to_string(),
        Value::Null => "undefined".to_string(),
        other => other.to_string(),
    }
}

fn fmt_opt_f64(v: &Value, key: &str, digits: usize) -> String {
    v[key]
        .as_f64()
        .map_or("undefined".to_string(), |x| format!("{x:.digits$}"))
}

pub fn render_report(paths: &RunPaths, bins: usize, with_group_size: bool) -> Result<String, CliError> {
    let components = read_json(&require_artifact(paths.components(), "run `build` first")?)?;
    let communities = read_json(&require_artifact(
        paths.communities_json(),
        "run `communities` first",
    )?)?;
    let correlations_path = require_artifact(paths.correlations(), "run `correlate` first")?;
    let predictions_path = require_artifact(paths.predictions(), "run `predict` first")?;
    let evaluation = read_json(&require_artifact(paths.evaluation(), "run `predict` first")?)?;

    let mut md = String::new();
    let _ = writeln!(md, "# Collaboration network report\n");

    let _ = writeln!(md, "## Network\n");
    let _ = writeln!(md, "- nodes: {}", json_num(&components, "n_nodes"));
    let _ = writeln!(md, "- edges: {}", json_num(&components, "n_edges"));
    let _ = writeln!(md, "- connected components: {}", json_num(&components, "n_components"));
    let _ = writeln!(
        md,
        "- giant component fraction: {}",
        fmt_opt_f64(&components, "gcc_fraction", 4)
    );
    let _ = writeln!(
        md,
        "- largest island outside the giant component: {} nodes",
        json_num(&components, "max_island_size")
    );

    let _ = writeln!(md, "\n## Communities\n");
    let _ = writeln!(md, "- communities: {}", json_num(&communities, "num_communities"));
    let _ = writeln!(md, "- modularity: {}", fmt_opt_f64(&communities, "modularity", 4));
    let sizes: Vec<u64> = communities["sizes"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_u64).collect())
        .unwrap_or_default();
    let mut sorted_sizes = sizes.clone();
    sorted_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let top: Vec<String> = sorted_sizes.iter().take(10).map(u64::to_string).collect();
    let _ = writeln!(md, "- largest community sizes: {}", top.join(", "));
    let _ = writeln!(
        md,
        "- assortativity (pagerank): {}",
        fmt_opt_f64(&communities, "assortativity_pagerank", 4)
    );
    let _ = writeln!(
        md,
        "- assortativity (visit frequency): {}",
        fmt_opt_f64(&communities, "assortativity_visit_frequency", 4)
    );

    let _ = writeln!(md, "\n## Correlations\n");
    let _ = writeln!(
        md,
        "Pearson correlation of each network measure with the success proxies \
         (stars: * p<0.05, ** p<0.01, *** p<0.001).\n"
    );
    let (header, rows) = read_csv_rows(&correlations_path)?;
    md_table(&mut md, &header, &rows);

    let _ = writeln!(md, "\n## Clustering trend\n");
    let _ = writeln!(
        md,
        "Mean success proxy per clustering-coefficient quantile bin ({bins} bins); \
         the relationship is non-monotone, peaking at an interior bin.\n"
    );
    for proxy in ["pagerank", "visit_frequency", "log_visit_frequency"] {
        let path = paths.trends_dir().join(format!("trend_clustering_{proxy}.csv"));
        if !path.exists() {
            continue;
        }
        let _ = writeln!(md, "### clustering vs {proxy}\n");
        let (header, rows) = read_csv_rows(&path)?;
        md_table(&mut md, &header, &rows);
        let _ = writeln!(md);
    }

    let _ = writeln!(md, "## Prediction scores\n");
    let _ = writeln!(
        md,
        "Random decision forest, 75/25 train/test split; exact-match scores, \
         plus rank agreement within one step.\n"
    );
    let (header, rows) = read_csv_rows(&predictions_path)?;
    md_table(&mut md, &header, &rows);

    let _ = writeln!(md, "\n## Feature importances\n");
    let (variant_key, variant_label) = if with_group_size {
        ("with_group_size", "with group size")
    } else {
        ("without_group_size", "without group size")
    };
    for (title, task) in [("pagerank task", "pagerank"), ("visit hi/lo task", "visit")] {
        let map = &evaluation[variant_key][task]["feature_importances"];
        if let Some(obj) = map.as_object() {
            let mut entries: Vec<(&String, f64)> = obj
                .iter()
                .filter_map(|(k, v)| v.as_f64().map(|x| (k, x)))
                .collect();
            entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
            let line: Vec<String> = entries
                .iter()
                .map(|(k, v)| format!("{k} {v:.3}"))
                .collect();
            let _ = writeln!(md, "- {title} ({variant_label}): {}", line.join(", "));
        }
    }

    Ok(md)
}
