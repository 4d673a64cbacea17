// SPDX-License-Identifier: Apache-2.0

//! Modularity scoring, Louvain community detection, and numeric attribute
//! assortativity.
//!
//! Detection is deterministic for a fixed seed: the node sweep order comes
//! from a seeded RNG and every tie in modularity gain breaks toward the
//! smallest candidate community id.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::CollabGraph;

/// A node -> community assignment with its modularity score.
///
/// `modularity` is `None` exactly when the graph has no edges, where the
/// score is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityPartition {
    pub community_of: Vec<usize>,
    pub num_communities: usize,
    pub modularity: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("modularity undefined: graph has no edges")]
    ModularityUndefined,
    #[error("partition length {got} does not match node count {expected}")]
    PartitionSizeMismatch { got: usize, expected: usize },
    #[error("assortativity undefined: no edge has the attribute on both endpoints")]
    AssortativityNoEdges,
    #[error("assortativity undefined (constant attribute)")]
    AssortativityConstantAttribute,
    #[error("attribute length {got} does not match node count {expected}")]
    AttributeSizeMismatch { got: usize, expected: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

/// Newman modularity of a partition: sum over communities of
/// e_c/m - (d_c/2m)^2, with e_c the intra-community edge count, d_c the
/// total degree of the community, and m the edge count.
pub fn modularity(g: &CollabGraph, community_of: &[usize]) -> Result<f64, CommunityError> {
    if community_of.len() != g.node_count() {
        return Err(CommunityError::PartitionSizeMismatch {
            got: community_of.len(),
            expected: g.node_count(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(CommunityError::ModularityUndefined);
    }
    let mut intra: BTreeMap<usize, usize> = BTreeMap::new();
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..g.node_count() {
        *degree.entry(community_of[v]).or_default() += g.degree(v);
    }
    for (u, v) in g.edges() {
        if community_of[u] == community_of[v] {
            *intra.entry(community_of[u]).or_default() += 1;
        }
    }
    let m = m as f64;
    let mut q = 0.0;
    for (&c, &d_c) in &degree {
        let e_c = intra.get(&c).copied().unwrap_or(0) as f64;
        let half = d_c as f64 / (2.0 * m);
        q += e_c / m - half * half;
    }
    Ok(q)
}

// Weighted working graph for Louvain levels. After aggregation, a self-loop
// of weight w stands for w intra-community edges of the level below and
// contributes 2w to the node degree.
struct LevelGraph {
    adj: Vec<BTreeMap<usize, f64>>,
    total_weight: f64, // m
}

impl LevelGraph {
    fn from_collab(g: &CollabGraph) -> Self {
        let mut adj = vec![BTreeMap::new(); g.node_count()];
        for (u, v) in g.edges() {
            adj[u].insert(v, 1.0);
            adj[v].insert(u, 1.0);
        }
        LevelGraph {
            adj,
            total_weight: g.edge_count() as f64,
        }
    }

    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v]
            .iter()
            .map(|(&u, &w)| if u == v { 2.0 * w } else { w })
            .sum()
    }

    fn aggregate(&self, community_of: &[usize]) -> (LevelGraph, Vec<usize>) {
        // Renumber communities in ascending id order.
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in community_of {
            let next = remap.len();
            remap.entry(c).or_insert(next);
        }
        let count = remap.len();
        let mut adj = vec![BTreeMap::new(); count];
        for (v, nbrs) in self.adj.iter().enumerate() {
            let cv = remap[&community_of[v]];
            for (&u, &w) in nbrs {
                if u < v {
                    continue; // each undirected pair once; keep self-loops (u == v)
                }
                let cu = remap[&community_of[u]];
                if cu == cv {
                    *adj[cv].entry(cv).or_insert(0.0) += w;
                } else {
                    *adj[cv].entry(cu).or_insert(0.0) += w;
                    *adj[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        let node_map = community_of.iter().map(|c| remap[c]).collect();
        (
            LevelGraph {
                adj,
                total_weight: self.total_weight,
            },
            node_map,
        )
    }
}

// One Louvain sweep phase: move nodes between communities until no move
// improves modularity. Returns whether anything moved.
fn one_level(level: &LevelGraph, community_of: &mut [usize], rng: &mut ChaCha8Rng) -> bool {
    let n = level.node_count();
    let m = level.total_weight;
    let degrees: Vec<f64> = (0..n).map(|v| level.weighted_degree(v)).collect();
    let mut sigma_tot: Vec<f64> = vec![0.0; n];
    for v in 0..n {
        sigma_tot[community_of[v]] += degrees[v];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut any_moved = false;
    loop {
        let mut moved = false;
        for &v in &order {
            let current = community_of[v];
            sigma_tot[current] -= degrees[v];

            // Edge weight from v to each adjacent community (self-loops
            // excluded; they move with the node).
            let mut to_comm: BTreeMap<usize, f64> = BTreeMap::new();
            to_comm.insert(current, 0.0);
            for (&u, &w) in &level.adj[v] {
                if u != v {
                    *to_comm.entry(community_of[u]).or_insert(0.0) += w;
                }
            }

            // gain(c) = e(v,c)/m - k_v * sigma_tot(c) / (2 m^2); candidates
            // scanned in ascending community id so exact ties keep the
            // smallest id.
            let mut best_comm = current;
            let mut best_gain = f64::NEG_INFINITY;
            for (&c, &w_vc) in &to_comm {
                let gain = w_vc / m - degrees[v] * sigma_tot[c] / (2.0 * m * m);
                if gain > best_gain {
                    best_gain = gain;
                    best_comm = c;
                }
            }

            sigma_tot[best_comm] += degrees[v];
            community_of[v] = best_comm;
            if best_comm != current {
                moved = true;
                any_moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    any_moved
}

/// Louvain-style greedy modularity maximization.
///
/// Edgeless graphs yield the all-singletons partition with undefined
/// modularity. Community ids are renumbered by first appearance in node
/// order, so the result is stable and byte-identical for a fixed seed.
pub fn detect_communities(g: &CollabGraph, seed: u64) -> CommunityPartition {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return CommunityPartition {
            community_of: (0..n).collect(),
            num_communities: n,
            modularity: None,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = LevelGraph::from_collab(g);
    // membership[v] = current community of original node v, tracked through
    // the aggregation chain.
    let mut membership: Vec<usize> = (0..n).collect();
    for _ in 0..64 {
        let mut community_of: Vec<usize> = (0..level.node_count()).collect();
        let moved = one_level(&level, &mut community_of, &mut rng);
        if !moved {
            break;
        }
        let (next, node_map) = level.aggregate(&community_of);
        for entry in membership.iter_mut() {
            *entry = node_map[*entry];
        }
        if next.node_count() == level.node_count() {
            break;
        }
        level = next;
    }

    // Final relabel by first appearance in node order.
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let mut community_of = Vec::with_capacity(n);
    for &c in &membership {
        let next = relabel.len();
        let id = *relabel.entry(c).or_insert(next);
        community_of.push(id);
    }
    let q = modularity(g, &community_of).ok();
    CommunityPartition {
        num_communities: relabel.len(),
        community_of,
        modularity: q,
    }
}

/// Newman numeric assortativity of a node attribute: the Pearson correlation
/// of (attr(u), attr(v)) over the doubled edge list. Edges with a missing
/// endpoint attribute are skipped.
pub fn assortativity(g: &CollabGraph, attr: &[Option<f64>]) -> Result<f64, CommunityError> {
    if attr.len() != g.node_count() {
        return Err(CommunityError::AttributeSizeMismatch {
            got: attr.len(),
            expected: g.node_count(),
        });
    }
    // Two passes with centered moments; the raw-moment form cancels badly.
    let mut n = 0.0f64;
    let mut sum = 0.0;
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (attr[u], attr[v]) {
            n += 2.0;
            sum += a + b;
        }
    }
    if n == 0.0 {
        return Err(CommunityError::AssortativityNoEdges);
    }
    let mean = sum / n;
    let mut var = 0.0;
    let mut cov = 0.0;
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (attr[u], attr[v]) {
            let da = a - mean;
            let db = b - mean;
            var += da * da + db * db;
            cov += 2.0 * da * db;
        }
    }
    if var <= 0.0 {
        return Err(CommunityError::AssortativityConstantAttribute);
    }
    Ok(cov / var)
}

/// Summary emitted next to the per-node partition CSV.
#[derive(Debug, Clone, Serialize)]
pub struct CommunitySummary {
    pub num_communities: usize,
    pub modularity: Option<f64>,
    /// Community sizes indexed by community id.
    pub sizes: Vec<usize>,
}

impl CommunitySummary {
    pub fn from_partition(p: &CommunityPartition) -> Self {
        let mut sizes = vec![0usize; p.num_communities];
        for &c in &p.community_of {
            sizes[c] += 1;
        }
        CommunitySummary {
            num_communities: p.num_communities,
            modularity: p.modularity,
            sizes,
        }
    }
}

/// Writes `group_id,community_id` rows in node order.
pub fn write_communities_csv(
    g: &CollabGraph,
    p: &CommunityPartition,
    path: &Path,
) -> Result<(), CommunityError> {
    let csv_err = |source| CommunityError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["group_id", "community_id"]).map_err(csv_err)?;
    for v in 0..g.node_count() {
        w.write_record([g.group_id(v), &p.community_of[v].to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|source| CommunityError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
