// SPDX-License-Identifier: Apache-2.0

//! Seeded synthetic dataset generator with a planted measure -> success
//! dependence, for end-to-end testing without real data.
//!
//! Construction is performer-centric: the configured number of performers
//! all appear in the output, a configured fraction of them join more than
//! one group, and membership is biased toward a performer's home community
//! block so the projected graph is clustered. Success values are planted on
//! the true measures of the generated graph (closeness and degree
//! centrality linearly, clustering through a concave term peaking at a
//! configurable coefficient), so downstream correlation and prediction
//! stages recover signal by construction.

use std::collections::BTreeSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::community::detect_communities;
use crate::graph::{connected_components, gcc_summary, project_bipartite};
use crate::measures::{clustering_coefficient, closeness_centrality, degree_centrality};
use crate::model::{Dataset, GroupRecord, SuccessRecord, SAMPLE_YEARS};

const MAX_GROUP_SIZE: usize = 64;
// Fraction of membership slots placed outside the home community.
const CROSS_COMMUNITY_FRACTION: f64 = 0.05;
// Multi-performer membership counts: 2 + tail of {0, 1, 2} extra.
const MULTI_EXTRA_P1: f64 = 0.15;
const MULTI_EXTRA_P2: f64 = 0.10;
// Success plant shape.
const PAGERANK_CENTER: f64 = 5.0;
const PAGERANK_SPREAD: f64 = 1.6;
const VISIT_BASE: f64 = 3.0;
const VISIT_LINEAR: f64 = 1.5;
const VISIT_PARABOLA: f64 = 1.6;
const YEAR_JITTER: f64 = 0.15;

const LANGUAGES: [&str; 7] = ["ru", "et", "uk", "lv", "lt", "be", "ro"];
const GENRES: [&str; 8] = [
    "rock", "pop", "folk", "jazz", "punk", "metal", "electronic", "disco",
];

/// Coefficients of the planted success model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessModel {
    pub closeness_weight: f64,
    pub degree_weight: f64,
    /// Clustering coefficient at which the planted visit response peaks.
    pub clustering_parabola_peak: f64,
    pub noise_sd: f64,
}

impl Default for SuccessModel {
    fn default() -> Self {
        SuccessModel {
            closeness_weight: 3.0,
            degree_weight: 0.2,
            clustering_parabola_peak: 0.25,
            noise_sd: 0.45,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_groups: usize,
    pub n_performers: usize,
    /// Documented target for distinct performers per group; the defaults
    /// make this n_performers / n_groups. Also bounds the feasibility check.
    pub mean_members_per_group: f64,
    /// Target fraction of performers appearing in more than one group.
    pub multi_membership_fraction: f64,
    /// Number of planted community blocks.
    pub community_count: usize,
    pub success: SuccessModel,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_groups: 4560,
            n_performers: 16329,
            mean_members_per_group: 3.6,
            multi_membership_fraction: 0.22,
            community_count: 40,
            success: SuccessModel::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible config: {slots} planned memberships exceed capacity {capacity}")]
    Infeasible { slots: usize, capacity: usize },
    #[error("invalid config: {0}")]
    BadConfig(String),
}

fn validate(cfg: &SynthConfig) -> Result<(), SynthError> {
    let bad = |m: &str| Err(SynthError::BadConfig(m.to_string()));
    if cfg.n_groups == 0 {
        return bad("n_groups must be positive");
    }
    if cfg.n_performers == 0 {
        return bad("n_performers must be positive");
    }
    if cfg.community_count == 0 {
        return bad("community_count must be positive");
    }
    if cfg.mean_members_per_group <= 0.0 {
        return bad("mean_members_per_group must be positive");
    }
    if !(0.0..=1.0).contains(&cfg.multi_membership_fraction) {
        return bad("multi_membership_fraction must lie in [0, 1]");
    }
    let peak = cfg.success.clustering_parabola_peak;
    if !(peak > 0.0 && peak < 1.0) {
        return bad("clustering_parabola_peak must lie in (0, 1)");
    }
    if cfg.success.noise_sd < 0.0 {
        return bad("noise_sd must be non-negative");
    }
    Ok(())
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn z_scores(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 {
        return vec![0.0; values.len()];
    }
    let sd = var.sqrt();
    values.iter().map(|v| (v - mean) / sd).collect()
}

// Weighted index draw over a cumulative weight table.
fn weighted_choice(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cumulative.last().expect("non-empty weights");
    let r = rng.random::<f64>() * total;
    cumulative.partition_point(|&c| c <= r).min(cumulative.len() - 1)
}

/// Generates a dataset from the config. Deterministic: the same seed yields
/// byte-identical files through [`crate::model::save_dataset`].
pub fn generate(cfg: &SynthConfig) -> Result<Dataset, SynthError> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_groups = cfg.n_groups;
    let n_performers = cfg.n_performers;

    // Community blocks with mildly uneven sizes.
    let comm_weights: Vec<f64> = (0..cfg.community_count)
        .map(|_| rng.random_range(0.5..1.5))
        .collect();
    let mut cum = Vec::with_capacity(comm_weights.len());
    let mut acc = 0.0;
    for w in &comm_weights {
        acc += w;
        cum.push(acc);
    }
    let group_community: Vec<usize> = (0..n_groups).map(|_| weighted_choice(&cum, &mut rng)).collect();
    let mut community_groups: Vec<Vec<usize>> = vec![Vec::new(); cfg.community_count];
    for (g, &c) in group_community.iter().enumerate() {
        community_groups[c].push(g);
    }

    // Performer plan: the first n_multi performers join several groups.
    let n_multi = (cfg.multi_membership_fraction * n_performers as f64).round() as usize;
    let memberships_of = |rng: &mut ChaCha8Rng| {
        let r: f64 = rng.random();
        if r < MULTI_EXTRA_P2 {
            4
        } else if r < MULTI_EXTRA_P2 + MULTI_EXTRA_P1 {
            3
        } else {
            2
        }
    };
    let multiplicities: Vec<usize> = (0..n_performers)
        .map(|p| if p < n_multi { memberships_of(&mut rng) } else { 1 })
        .collect();

    let planned_slots: usize = multiplicities.iter().sum();
    let capacity = n_groups * MAX_GROUP_SIZE;
    if planned_slots > capacity {
        return Err(SynthError::Infeasible {
            slots: planned_slots,
            capacity,
        });
    }

    // Home community draw weighted by block size, so membership pressure is
    // even across groups.
    let mut comm_size_cum = Vec::with_capacity(cfg.community_count);
    let mut acc = 0.0;
    for groups in &community_groups {
        acc += groups.len() as f64;
        comm_size_cum.push(acc);
    }

    let mut members: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_groups];
    for (p, &m) in multiplicities.iter().enumerate() {
        let home = weighted_choice(&comm_size_cum, &mut rng);
        for _ in 0..m {
            let mut placed = false;
            for _ in 0..64 {
                let cross = rng.random::<f64>() < CROSS_COMMUNITY_FRACTION;
                let g = if cross || community_groups[home].is_empty() {
                    rng.random_range(0..n_groups)
                } else {
                    let slot = rng.random_range(0..community_groups[home].len());
                    community_groups[home][slot]
                };
                if members[g].len() < MAX_GROUP_SIZE && members[g].insert(p) {
                    placed = true;
                    break;
                }
            }
            if !placed {
                // Deterministic fallback: first group that can take p.
                if let Some(g) = (0..n_groups)
                    .find(|&g| members[g].len() < MAX_GROUP_SIZE && !members[g].contains(&p))
                {
                    members[g].insert(p);
                }
            }
        }
    }

    let mut groups = Vec::with_capacity(n_groups);
    for g in 0..n_groups {
        let community = group_community[g];
        let language = LANGUAGES[community % LANGUAGES.len()].to_string();
        let n_genres = rng.random_range(0..=2);
        let genres: Vec<String> = (0..n_genres)
            .map(|_| GENRES[rng.random_range(0..GENRES.len())].to_string())
            .collect();
        let creation_year = if rng.random::<f64>() < 0.5 {
            Some(rng.random_range(1960..=2015))
        } else {
            None
        };
        groups.push(GroupRecord {
            group_id: format!("g{g:04}"),
            name: format!("Group {g:04}"),
            creation_year,
            genres,
            languages: vec![language],
            members: members[g].iter().map(|&p| format!("p{p:05}")).collect(),
        });
    }

    let mut ds = Dataset {
        groups,
        success: Default::default(),
    };

    // Plant success on the true measures of the projected graph.
    let graph = project_bipartite(&ds);
    let closeness: Vec<f64> = (0..graph.node_count())
        .map(|v| closeness_centrality(&graph, v))
        .collect();
    let degree_cent: Vec<f64> = (0..graph.node_count())
        .map(|v| degree_centrality(&graph, v))
        .collect();
    let clustering: Vec<f64> = (0..graph.node_count())
        .map(|v| clustering_coefficient(&graph, v))
        .collect();
    let z_clo = z_scores(&closeness);
    let z_deg = z_scores(&degree_cent);

    let sm = &cfg.success;
    // Sharp enough that the high-clustering penalty offsets the structural
    // tendency of clustered nodes to sit in the well-connected core.
    let parab_scale = 0.58 * sm.clustering_parabola_peak.max(1.0 - sm.clustering_parabola_peak);
    for v in 0..graph.node_count() {
        let group_id = graph.group_id(v).to_string();
        let signal = sm.closeness_weight * z_clo[v] + sm.degree_weight * z_deg[v];

        let rank_raw = PAGERANK_CENTER + PAGERANK_SPREAD * signal + sm.noise_sd * normal(&mut rng);
        let pagerank = rank_raw.round().clamp(0.0, 10.0) as u8;

        let offset = (clustering[v] - sm.clustering_parabola_peak) / parab_scale;
        let parabola = 1.0 - offset * offset;
        let level = VISIT_BASE
            + VISIT_LINEAR * signal
            + VISIT_PARABOLA * parabola
            + sm.noise_sd * normal(&mut rng);
        let total_visits = level.exp();

        let mut visits = std::collections::BTreeMap::new();
        for year in SAMPLE_YEARS {
            let year_total = total_visits * (YEAR_JITTER * normal(&mut rng)).exp();
            let n_pages = rng.random_range(1..=3);
            let raw: Vec<f64> = (0..n_pages).map(|_| rng.random::<f64>() + 0.05).collect();
            let total_raw: f64 = raw.iter().sum();
            let pages: Vec<f64> = raw.iter().map(|r| year_total * r / total_raw).collect();
            visits.insert(year, pages);
        }
        ds.success.insert(
            group_id.clone(),
            SuccessRecord {
                group_id,
                pagerank,
                visits,
            },
        );
    }

    Ok(ds)
}

/// Corpus statistics recomputed from a dataset.
#[derive(Debug, Clone, Serialize)]
pub struct DatasetSummary {
    pub n_groups: usize,
    /// Distinct performers appearing in at least one member list.
    pub n_performers: usize,
    /// Distinct performers per group.
    pub mean_members: f64,
    /// Fraction of appearing performers in more than one group.
    pub multi_membership_fraction: f64,
    pub gcc_fraction: f64,
    pub modularity_of_detected_partition: Option<f64>,
}

/// Recomputes the headline statistics. Community detection runs with a
/// fixed seed of 0 so the summary is reproducible.
pub fn describe(ds: &Dataset) -> DatasetSummary {
    let mut appearances: std::collections::BTreeMap<&str, usize> = Default::default();
    for g in &ds.groups {
        for m in &g.members {
            *appearances.entry(m.as_str()).or_default() += 1;
        }
    }
    let n_performers = appearances.len();
    let multi = appearances.values().filter(|&&c| c > 1).count();
    let graph = project_bipartite(ds);
    let gcc_fraction = if graph.node_count() == 0 {
        0.0
    } else {
        gcc_summary(&connected_components(&graph))
            .map(|s| s.gcc_fraction)
            .unwrap_or(0.0)
    };
    let modularity = detect_communities(&graph, 0).modularity;
    DatasetSummary {
        n_groups: ds.groups.len(),
        n_performers,
        mean_members: if ds.groups.is_empty() {
            0.0
        } else {
            n_performers as f64 / ds.groups.len() as f64
        },
        multi_membership_fraction: if n_performers == 0 {
            0.0
        } else {
            multi as f64 / n_performers as f64
        },
        gcc_fraction,
        modularity_of_detected_partition: modularity,
    }
}
