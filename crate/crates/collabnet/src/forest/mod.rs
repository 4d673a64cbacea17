// SPDX-License-Identifier: Apache-2.0

//! Random decision forest classifier and the success-prediction experiment
//! harness.
//!
//! Trees are CART (Gini impurity) fit on bootstrap samples with a random
//! feature subset searched at every split; prediction is a majority vote.
//! All randomness derives from one master seed through a counter-based
//! stream per tree, so growing the forest never perturbs existing trees,
//! and bootstrap indices are drawn against rows sorted by key, so row order
//! does not matter.

mod tree;

pub use tree::DecisionTree;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parallel;
use crate::stats::{median_binarize, AnalysisRow, HiLo};

const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("degenerate labels: training data contains a single class")]
    DegenerateLabels,
    #[error("need at least {min} rows, got {got}")]
    TooFewRows { got: usize, min: usize },
    #[error("split fraction must be in (0, 1), got {0}")]
    BadFraction(f64),
    #[error("split leaves an empty {0} set")]
    EmptySplitSide(&'static str),
    #[error("prediction and actual lengths differ: {preds} vs {actual}")]
    LengthMismatch { preds: usize, actual: usize },
    #[error("labels are empty")]
    EmptyLabels,
    #[error("label {0:?} is not integer-valued")]
    NonIntegerLabel(String),
    #[error("row {key:?} has {got} features, expected {expected}")]
    FeatureCountMismatch {
        key: String,
        got: usize,
        expected: usize,
    },
    #[error("row {key:?} has a non-finite feature value")]
    NonFiniteFeature { key: String },
    #[error("max_features {requested} out of range for {features} features")]
    BadMaxFeatures { requested: usize, features: usize },
    #[error("unknown class {0:?} in prediction input")]
    UnknownClass(String),
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Rule for the number of features searched per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// floor(sqrt(feature count)), at least 1. The canonical default.
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    fn resolve(self, n_features: usize) -> Result<usize, ForestError> {
        let k = match self {
            MaxFeatures::Sqrt => ((n_features as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::All => n_features,
            MaxFeatures::Fixed(k) => k,
        };
        if k == 0 || k > n_features {
            return Err(ForestError::BadMaxFeatures {
                requested: k,
                features: n_features,
            });
        }
        Ok(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_features: MaxFeatures::Sqrt,
            min_leaf: 1,
            max_depth: None,
            seed: 0,
        }
    }
}

/// One training/prediction row: a stable key, a feature vector, and a
/// categorical label.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub key: String,
    pub features: Vec<f64>,
    pub label: String,
}

/// A trained ensemble, serializable as a versioned JSON dump. Reloading
/// reproduces predictions exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    version: u32,
    pub feature_names: Vec<String>,
    /// Class labels, sorted; vote ties resolve to the smaller label.
    pub classes: Vec<String>,
    trees: Vec<DecisionTree>,
}

/// Seeded shuffle split: the first ceil(fraction * n) rows train, the rest
/// test. Rows are canonically sorted by key before shuffling, so the split
/// depends only on (rows, fraction, seed).
pub fn train_test_split(
    rows: &[Sample],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<Sample>, Vec<Sample>), ForestError> {
    if rows.len() < 4 {
        return Err(ForestError::TooFewRows {
            got: rows.len(),
            min: 4,
        });
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(ForestError::BadFraction(fraction));
    }
    let mut sorted: Vec<Sample> = rows.to_vec();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sorted.shuffle(&mut rng);
    let n_train = (fraction * rows.len() as f64).ceil() as usize;
    if n_train == 0 {
        return Err(ForestError::EmptySplitSide("train"));
    }
    if n_train >= rows.len() {
        return Err(ForestError::EmptySplitSide("test"));
    }
    let test = sorted.split_off(n_train);
    Ok((sorted, test))
}

fn validate_rows(rows: &[Sample], n_features: usize) -> Result<(), ForestError> {
    for row in rows {
        if row.features.len() != n_features {
            return Err(ForestError::FeatureCountMismatch {
                key: row.key.clone(),
                got: row.features.len(),
                expected: n_features,
            });
        }
        if row.features.iter().any(|v| !v.is_finite()) {
            return Err(ForestError::NonFiniteFeature {
                key: row.key.clone(),
            });
        }
    }
    Ok(())
}

/// Trains a forest. Rows are canonically sorted by key first, each tree is
/// fit on a seeded bootstrap sample (n draws with replacement), and tree t
/// draws from stream t of the master seed.
pub fn train(
    rows: &[Sample],
    feature_names: &[String],
    params: &ForestParams,
) -> Result<ForestModel, ForestError> {
    if rows.len() < 2 {
        return Err(ForestError::TooFewRows {
            got: rows.len(),
            min: 2,
        });
    }
    let n_features = feature_names.len();
    validate_rows(rows, n_features)?;
    let max_features = params.max_features.resolve(n_features)?;

    let mut sorted: Vec<&Sample> = rows.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));

    let mut classes: Vec<String> = sorted.iter().map(|r| r.label.clone()).collect();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(ForestError::DegenerateLabels);
    }
    let class_index: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();

    let x: Vec<Vec<f64>> = sorted.iter().map(|r| r.features.clone()).collect();
    let y: Vec<usize> = sorted.iter().map(|r| class_index[r.label.as_str()]).collect();
    let n = x.len();
    let n_classes = classes.len();
    let (min_leaf, max_depth, seed) = (params.min_leaf.max(1), params.max_depth, params.seed);

    let trees: Vec<DecisionTree> = parallel::install(|| {
        (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64 + 1);
                let bootstrap: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                DecisionTree::fit(
                    &x,
                    &y,
                    &bootstrap,
                    n_classes,
                    n_features,
                    max_features,
                    min_leaf,
                    max_depth,
                    &mut rng,
                )
            })
            .collect()
    });

    Ok(ForestModel {
        version: MODEL_FORMAT_VERSION,
        feature_names: feature_names.to_vec(),
        classes,
        trees,
    })
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Majority vote over trees; exact vote ties go to the smaller label.
    pub fn predict(&self, features: &[f64]) -> Result<&str, ForestError> {
        if features.len() != self.feature_names.len() {
            return Err(ForestError::FeatureCountMismatch {
                key: String::new(),
                got: features.len(),
                expected: self.feature_names.len(),
            });
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(ForestError::NonFiniteFeature { key: String::new() });
        }
        let mut votes = vec![0usize; self.classes.len()];
        for tree in &self.trees {
            votes[tree.predict(features)] += 1;
        }
        let mut best = 0usize;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        Ok(&self.classes[best])
    }

    /// Parallel over rows; output order matches input order.
    pub fn predict_batch(&self, rows: &[Sample]) -> Result<Vec<String>, ForestError> {
        parallel::install(|| {
            rows.par_iter()
                .map(|r| self.predict(&r.features).map(str::to_string))
                .collect()
        })
    }

    /// Mean decrease in Gini impurity per feature, weighted by node sample
    /// counts, averaged over trees, normalized to sum to one.
    pub fn feature_importance(&self) -> BTreeMap<String, f64> {
        let n_features = self.feature_names.len();
        let mut mean = vec![0.0f64; n_features];
        for tree in &self.trees {
            let total: f64 = tree.importance.iter().sum();
            if total > 0.0 {
                for (m, &v) in mean.iter_mut().zip(&tree.importance) {
                    *m += v / total;
                }
            }
        }
        let total: f64 = mean.iter().sum();
        if total > 0.0 {
            for m in &mut mean {
                *m /= total;
            }
        } else {
            // No tree split anywhere; report a flat profile.
            mean.fill(1.0 / n_features as f64);
        }
        self.feature_names
            .iter()
            .cloned()
            .zip(mean)
            .collect()
    }

    pub fn save_json(&self, path: &Path) -> Result<(), ForestError> {
        let file = std::fs::File::create(path).map_err(|source| ForestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::to_writer(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<ForestModel, ForestError> {
        let file = std::fs::File::open(path).map_err(|source| ForestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let model: ForestModel = serde_json::from_reader(std::io::BufReader::new(file))?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(ForestError::UnsupportedVersion(model.version));
        }
        Ok(model)
    }
}

/// Fraction of predictions equal to the actual label.
pub fn score_exact(preds: &[String], actual: &[String]) -> Result<f64, ForestError> {
    if preds.len() != actual.len() {
        return Err(ForestError::LengthMismatch {
            preds: preds.len(),
            actual: actual.len(),
        });
    }
    if preds.is_empty() {
        return Err(ForestError::EmptyLabels);
    }
    let hits = preds.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(hits as f64 / preds.len() as f64)
}

/// Fraction of integer-valued predictions within `tol` of the actual rank.
pub fn score_within(preds: &[String], actual: &[String], tol: i64) -> Result<f64, ForestError> {
    if preds.len() != actual.len() {
        return Err(ForestError::LengthMismatch {
            preds: preds.len(),
            actual: actual.len(),
        });
    }
    if preds.is_empty() {
        return Err(ForestError::EmptyLabels);
    }
    let parse = |s: &String| {
        s.parse::<i64>()
            .map_err(|_| ForestError::NonIntegerLabel(s.clone()))
    };
    let mut hits = 0usize;
    for (p, a) in preds.iter().zip(actual) {
        if (parse(p)? - parse(a)?).abs() <= tol {
            hits += 1;
        }
    }
    Ok(hits as f64 / preds.len() as f64)
}

/// Scores of one trained model on its train/test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub train_score: f64,
    pub test_score: f64,
    /// Only the rank task reports a within-one test score.
    pub test_score_within_1: Option<f64>,
    pub feature_importances: BTreeMap<String, f64>,
}

/// Reports for the two prediction tasks: the 11-class rank task and the
/// binary hi/lo visit-frequency task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReports {
    pub pagerank: EvalReport,
    pub visit: EvalReport,
}

/// Feature names used by [`run_experiment`], without the control variable.
pub const EXPERIMENT_FEATURES: [&str; 6] = [
    "degree_centrality",
    "avg_neighbor_degree",
    "closeness",
    "betweenness",
    "eigenvector",
    "clustering",
];

fn feature_vector(row: &AnalysisRow, with_group_size: bool) -> Vec<f64> {
    let m = &row.measures;
    let mut v = vec![
        m.degree_centrality,
        m.avg_neighbor_degree,
        m.closeness,
        m.betweenness,
        m.eigenvector,
        m.clustering,
    ];
    if with_group_size {
        v.push(m.group_size as f64);
    }
    v
}

fn eval_task(
    samples: Vec<Sample>,
    feature_names: &[String],
    params: &ForestParams,
    within_one: bool,
) -> Result<EvalReport, ForestError> {
    let (train_rows, test_rows) = train_test_split(&samples, 0.75, params.seed)?;
    let model = train(&train_rows, feature_names, params)?;
    let train_preds = model.predict_batch(&train_rows)?;
    let test_preds = model.predict_batch(&test_rows)?;
    let train_actual: Vec<String> = train_rows.iter().map(|r| r.label.clone()).collect();
    let test_actual: Vec<String> = test_rows.iter().map(|r| r.label.clone()).collect();
    Ok(EvalReport {
        train_score: score_exact(&train_preds, &train_actual)?,
        test_score: score_exact(&test_preds, &test_actual)?,
        test_score_within_1: if within_one {
            Some(score_within(&test_preds, &test_actual, 1)?)
        } else {
            None
        },
        feature_importances: model.feature_importance(),
    })
}

/// Runs the two prediction tasks on joined analysis rows: an 11-class rank
/// task scored exactly and within +-1, and a binary hi/lo task on the
/// median-binarized combined visit frequency. Group size joins the feature
/// set when `with_group_size` is set.
pub fn run_experiment(
    rows: &[AnalysisRow],
    with_group_size: bool,
    params: &ForestParams,
) -> Result<ExperimentReports, ForestError> {
    let mut sorted: Vec<&AnalysisRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.group_id.cmp(&b.group_id));

    let mut feature_names: Vec<String> =
        EXPERIMENT_FEATURES.iter().map(|s| s.to_string()).collect();
    if with_group_size {
        feature_names.push("group_size".to_string());
    }

    let rank_samples: Vec<Sample> = sorted
        .iter()
        .map(|r| Sample {
            key: r.group_id.clone(),
            features: feature_vector(r, with_group_size),
            label: r.pagerank.to_string(),
        })
        .collect();

    let frequencies: Vec<f64> = sorted.iter().map(|r| r.visit_frequency).collect();
    let labels = median_binarize(&frequencies);
    let visit_samples: Vec<Sample> = sorted
        .iter()
        .zip(&labels)
        .map(|(r, hl)| Sample {
            key: r.group_id.clone(),
            features: feature_vector(r, with_group_size),
            label: match hl {
                HiLo::Hi => "hi".to_string(),
                HiLo::Lo => "lo".to_string(),
            },
        })
        .collect();

    Ok(ExperimentReports {
        pagerank: eval_task(rank_samples, &feature_names, params, true)?,
        visit: eval_task(visit_samples, &feature_names, params, false)?,
    })
}
