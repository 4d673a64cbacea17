// SPDX-License-Identifier: Apache-2.0

//! Collaboration graph: bipartite projection of group-performer membership
//! into a simple undirected group graph, plus component analysis.
//!
//! One node per group; an edge joins two groups iff they share at least one
//! performer. The graph is simple: no self-loops, no parallel edges, and no
//! edge weights (multiplicity from several shared performers is discarded).

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::model::Dataset;

/// Immutable undirected simple graph over group nodes.
///
/// Nodes are densely indexed 0..n-1; adjacency lists are sorted. Safe for
/// concurrent reads once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollabGraph {
    group_ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop on group {0:?}")]
    SelfLoop(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("duplicate group id {0:?}")]
    DuplicateGroupId(String),
    #[error("empty graph")]
    EmptyGraph,
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
    #[error("{path}: edge row must have exactly two fields")]
    BadEdgeRow { path: PathBuf },
}

impl CollabGraph {
    /// Builds a simple graph from group ids and an edge iterator over node
    /// indices. Duplicate edges collapse; self-loops are rejected.
    pub fn from_edges<I>(group_ids: Vec<String>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = group_ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in group_ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateGroupId(id.clone()));
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::IndexOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(GraphError::SelfLoop(group_ids[u].clone()));
            }
            if sets[u].insert(v) {
                sets[v].insert(u);
                edge_count += 1;
            }
        }
        let adj = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(CollabGraph {
            group_ids,
            index,
            adj,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.group_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbor indices of `v`, sorted ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn group_id(&self, v: usize) -> &str {
        &self.group_ids[v]
    }

    pub fn group_ids(&self) -> &[String] {
        &self.group_ids
    }

    pub fn index_of(&self, group_id: &str) -> Option<usize> {
        self.index.get(group_id).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) pairs with u < v, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by the nodes where `keep` is true. Returns the
    /// subgraph and, per new node, its index in the original graph.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (CollabGraph, Vec<usize>) {
        assert_eq!(keep.len(), self.node_count());
        let original: Vec<usize> = (0..self.node_count()).filter(|&v| keep[v]).collect();
        let mut new_index = vec![usize::MAX; self.node_count()];
        for (new, &old) in original.iter().enumerate() {
            new_index[old] = new;
        }
        let ids = original.iter().map(|&v| self.group_ids[v].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_index[u], new_index[v]));
        let sub = CollabGraph::from_edges(ids, edges).expect("induced subgraph is valid");
        (sub, original)
    }
}

/// Projects group-performer membership onto the group graph.
///
/// Runs through a performer -> groups inverted index, so cost is the sum of
/// squared per-performer group counts rather than all group pairs. Groups
/// without members become isolated nodes.
pub fn project_bipartite(ds: &Dataset) -> CollabGraph {
    let group_ids: Vec<String> = ds.groups.iter().map(|g| g.group_id.clone()).collect();
    let mut by_performer: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, g) in ds.groups.iter().enumerate() {
        for m in &g.members {
            by_performer.entry(m.as_str()).or_default().push(i);
        }
    }
    let mut edges = Vec::new();
    for groups in by_performer.values() {
        for (a, &u) in groups.iter().enumerate() {
            for &v in &groups[a + 1..] {
                edges.push((u, v));
            }
        }
    }
    CollabGraph::from_edges(group_ids, edges).expect("projection yields a valid simple graph")
}

/// Partition of nodes into connected components.
///
/// Component ids are deterministic: ordered by the smallest node index the
/// component contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component id per node.
    pub component_of: Vec<usize>,
    /// Node count per component id.
    pub sizes: Vec<usize>,
    /// Id of the largest component (smallest id wins ties).
    pub largest: usize,
}

impl ComponentPartition {
    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }
}

/// Standard BFS component labeling.
pub fn connected_components(g: &CollabGraph) -> ComponentPartition {
    let n = g.node_count();
    let mut component_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0usize;
        component_of[start] = id;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(v) {
                if component_of[w] == usize::MAX {
                    component_of[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    let largest = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    ComponentPartition {
        component_of,
        sizes,
        largest,
    }
}

/// Headline connectivity numbers: share of nodes in the largest component
/// and the size of the largest remaining "island".
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GccSummary {
    pub gcc_fraction: f64,
    pub max_island_size: usize,
}

pub fn gcc_summary(p: &ComponentPartition) -> Result<GccSummary, GraphError> {
    let n: usize = p.sizes.iter().sum();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let gcc = p.sizes[p.largest];
    let max_island = p
        .sizes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p.largest)
        .map(|(_, &s)| s)
        .max()
        .unwrap_or(0);
    Ok(GccSummary {
        gcc_fraction: gcc as f64 / n as f64,
        max_island_size: max_island,
    })
}

/// Writes the graph as an edge-list CSV (`group_id_u,group_id_v`) plus an
/// isolate list, one group id per line under a `group_id` header.
pub fn write_edge_list(g: &CollabGraph, edges_path: &Path, isolates_path: &Path) -> Result<(), GraphError> {
    let csv_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| GraphError::Csv {
            path: path.clone(),
            source,
        }
    };
    let mut w = csv::Writer::from_path(edges_path).map_err(csv_err(edges_path))?;
    w.write_record(["group_id_u", "group_id_v"]).map_err(csv_err(edges_path))?;
    for (u, v) in g.edges() {
        w.write_record([g.group_id(u), g.group_id(v)]).map_err(csv_err(edges_path))?;
    }
    w.flush().map_err(|source| GraphError::Io {
        path: edges_path.to_path_buf(),
        source,
    })?;

    let mut w = csv::Writer::from_path(isolates_path).map_err(csv_err(isolates_path))?;
    w.write_record(["group_id"]).map_err(csv_err(isolates_path))?;
    for v in 0..g.node_count() {
        if g.degree(v) == 0 {
            w.write_record([g.group_id(v)]).map_err(csv_err(isolates_path))?;
        }
    }
    w.flush().map_err(|source| GraphError::Io {
        path: isolates_path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Rebuilds a graph from a previously exported edge list, bypassing
/// projection. Nodes appear in first-encounter order: edge rows first, then
/// isolates. Self-loop rows are rejected; duplicate edges collapse.
pub fn read_edge_list(edges_path: &Path, isolates_path: &Path) -> Result<CollabGraph, GraphError> {
    let csv_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| GraphError::Csv {
            path: path.clone(),
            source,
        }
    };
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let intern = |id: &str, ids: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        if let Some(&i) = index.get(id) {
            i
        } else {
            let i = ids.len();
            ids.push(id.to_string());
            index.insert(id.to_string(), i);
            i
        }
    };

    let mut edges = Vec::new();
    let mut rdr = csv::Reader::from_path(edges_path).map_err(csv_err(edges_path))?;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(edges_path))?;
        if rec.len() != 2 {
            return Err(GraphError::BadEdgeRow {
                path: edges_path.to_path_buf(),
            });
        }
        let u = intern(&rec[0], &mut ids, &mut index);
        let v = intern(&rec[1], &mut ids, &mut index);
        edges.push((u, v));
    }
    let mut rdr = csv::Reader::from_path(isolates_path).map_err(csv_err(isolates_path))?;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(isolates_path))?;
        intern(&rec[0], &mut ids, &mut index);
    }
    CollabGraph::from_edges(ids, edges)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::GroupRecord;

    pub(crate) fn dataset_from_members(groups: &[(&str, &[&str])]) -> Dataset {
        Dataset {
            groups: groups
                .iter()
                .map(|(id, members)| GroupRecord {
                    group_id: id.to_string(),
                    name: id.to_string(),
                    creation_year: None,
                    genres: vec![],
                    languages: vec![],
                    members: members.iter().map(|m| m.to_string()).collect(),
                })
                .collect(),
            success: Default::default(),
        }
    }

    #[test]
    fn projection_links_only_sharing_groups() {
        let ds = dataset_from_members(&[("A", &["p1"]), ("B", &["p1"]), ("C", &["p2"])]);
        let g = project_bipartite(&ds);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn shared_performer_is_transitive_in_projection() {
        let ds = dataset_from_members(&[("A", &["p1"]), ("B", &["p1"]), ("C", &["p1"])]);
        let g = project_bipartite(&ds);
        assert_eq!(g.edge_count(), 3);
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn multiple_shared_performers_still_one_edge() {
        let ds = dataset_from_members(&[("A", &["p1", "p2"]), ("B", &["p1", "p2"])]);
        let g = project_bipartite(&ds);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn adjacency_is_symmetric_and_loop_free() {
        let ds = dataset_from_members(&[
            ("A", &["p1", "p2"]),
            ("B", &["p2", "p3"]),
            ("C", &["p3", "p1"]),
            ("D", &[]),
        ]);
        let g = project_bipartite(&ds);
        for u in 0..g.node_count() {
            assert!(!g.has_edge(u, u));
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
        assert!(g.edge_count() <= g.node_count() * (g.node_count() - 1) / 2);
    }

    #[test]
    fn components_of_edgeless_graph() {
        let g = CollabGraph::from_edges(vec!["a".into(), "b".into(), "c".into()], []).unwrap();
        let p = connected_components(&g);
        assert_eq!(p.sizes, vec![1, 1, 1]);
        assert_eq!(p.component_of, vec![0, 1, 2]);
    }

    #[test]
    fn components_triangle_plus_isolate() {
        let g = CollabGraph::from_edges(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            [(0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        let p = connected_components(&g);
        let mut sizes = p.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3]);
        assert_eq!(p.largest, 0);
        let s = gcc_summary(&p).unwrap();
        assert_eq!(s.gcc_fraction, 0.75);
        assert_eq!(s.max_island_size, 1);
    }

    #[test]
    fn gcc_summary_single_component() {
        let g = CollabGraph::from_edges(
            vec!["a".into(), "b".into(), "c".into()],
            [(0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        let s = gcc_summary(&connected_components(&g)).unwrap();
        assert_eq!(s.gcc_fraction, 1.0);
        assert_eq!(s.max_island_size, 0);
    }

    #[test]
    fn gcc_summary_rejects_empty_graph() {
        let g = CollabGraph::from_edges(vec![], []).unwrap();
        assert!(matches!(
            gcc_summary(&connected_components(&g)),
            Err(GraphError::EmptyGraph)
        ));
    }

    #[test]
    fn edge_list_round_trip_preserves_structure() {
        let dir = tempfile::tempdir().unwrap();
        let ds = dataset_from_members(&[
            ("A", &["p1"]),
            ("B", &["p1", "p2"]),
            ("C", &["p2"]),
            ("lonely", &[]),
        ]);
        let g = project_bipartite(&ds);
        let ep = dir.path().join("edges.csv");
        let ip = dir.path().join("isolates.csv");
        write_edge_list(&g, &ep, &ip).unwrap();
        let h = read_edge_list(&ep, &ip).unwrap();
        assert_eq!(h.node_count(), g.node_count());
        assert_eq!(h.edge_count(), g.edge_count());
        for (u, v) in g.edges() {
            let hu = h.index_of(g.group_id(u)).unwrap();
            let hv = h.index_of(g.group_id(v)).unwrap();
            assert!(h.has_edge(hu, hv));
        }
        assert!(h.index_of("lonely").is_some());
    }

    #[test]
    fn induced_subgraph_keeps_selected_edges() {
        let g = CollabGraph::from_edges(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            [(0, 1), (1, 2), (2, 3)],
        )
        .unwrap();
        let (sub, orig) = g.induced_subgraph(&[true, true, false, true]);
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(orig, vec![0, 1, 3]);
        assert!(sub.has_edge(0, 1));
    }
}
