// SPDX-License-Identifier: Apache-2.0

//! Domain types and dataset file I/O.
//!
//! A dataset couples group-membership records with optional per-group
//! success records (a 0-10 page-importance rank and sampled page visit
//! counts). Files are JSON-lines, one object per line, UTF-8.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Years in which page visit counts were sampled.
pub const SAMPLE_YEARS: [u16; 3] = [2011, 2013, 2015];

/// One group with its membership roster and descriptive metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRecord {
    /// Unique key within a dataset.
    pub group_id: String,
    pub name: String,
    pub creation_year: Option<i32>,
    pub genres: Vec<String>,
    pub languages: Vec<String>,
    /// Performer ids; a set, so no duplicate membership.
    pub members: BTreeSet<String>,
}

/// Success descriptors for one group.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessRecord {
    pub group_id: String,
    /// Page-importance rank, an integer 0..=10.
    pub pagerank: u8,
    /// Sample year -> per-page visit counts (one entry per language page).
    /// Absent years were not sampled; they are skipped, not zero-filled.
    pub visits: BTreeMap<u16, Vec<f64>>,
}

/// Groups plus success records covering a (possibly strict) subset of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub groups: Vec<GroupRecord>,
    pub success: BTreeMap<String, SuccessRecord>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("duplicate group_id {0:?}")]
    DuplicateGroupId(String),
    #[error("duplicate success record for group_id {0:?}")]
    DuplicateSuccess(String),
    #[error("success record references unknown group_id {0:?}")]
    UnknownGroupId(String),
    #[error("group {group_id:?}: pagerank must be an integer in 0..=10, got {value}")]
    InvalidPagerank { group_id: String, value: String },
    #[error("group {group_id:?}: visit year {year:?} is not one of 2011/2013/2015")]
    InvalidVisitYear { group_id: String, year: String },
    #[error("group {group_id:?}: negative visit count in year {year}")]
    NegativeVisitCount { group_id: String, year: u16 },
    #[error("no visit data")]
    NoVisitData,
    #[error("visit frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),
}

impl Dataset {
    /// Map from group_id to position in `groups`.
    pub fn group_index(&self) -> HashMap<&str, usize> {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, g)| (g.group_id.as_str(), i))
            .collect()
    }

    /// Checks referential integrity and value ranges.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for g in &self.groups {
            if !seen.insert(g.group_id.as_str()) {
                return Err(ModelError::DuplicateGroupId(g.group_id.clone()));
            }
        }
        for (id, rec) in &self.success {
            if !seen.contains(id.as_str()) {
                return Err(ModelError::UnknownGroupId(id.clone()));
            }
            if rec.pagerank > 10 {
                return Err(ModelError::InvalidPagerank {
                    group_id: id.clone(),
                    value: rec.pagerank.to_string(),
                });
            }
            for (&year, counts) in &rec.visits {
                if !SAMPLE_YEARS.contains(&year) {
                    return Err(ModelError::InvalidVisitYear {
                        group_id: id.clone(),
                        year: year.to_string(),
                    });
                }
                if counts.iter().any(|&c| c < 0.0) {
                    return Err(ModelError::NegativeVisitCount {
                        group_id: id.clone(),
                        year,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawGroup {
    group_id: String,
    name: String,
    year: Option<i32>,
    genres: Vec<String>,
    languages: Vec<String>,
    members: Vec<String>,
}

#[derive(Deserialize)]
struct RawSuccess {
    group_id: String,
    pagerank: serde_json::Value,
    visits: BTreeMap<String, Vec<f64>>,
}

fn open_lines(path: &Path) -> Result<impl Iterator<Item = (usize, std::io::Result<String>)>, ModelError> {
    let file = File::open(path).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(BufReader::new(file)
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l)))
}

/// Loads a dataset from a groups file and an optional success file.
///
/// Groups with empty member sets are retained; they become isolated nodes
/// in the projected graph. Every success row must refer to a loaded group.
pub fn load_dataset(groups_path: &Path, success_path: Option<&Path>) -> Result<Dataset, ModelError> {
    let mut groups = Vec::new();
    let mut ids = BTreeSet::new();
    for (line_no, line) in open_lines(groups_path)? {
        let line = line.map_err(|source| ModelError::Io {
            path: groups_path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawGroup = serde_json::from_str(&line).map_err(|e| ModelError::Parse {
            path: groups_path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        if !ids.insert(raw.group_id.clone()) {
            return Err(ModelError::DuplicateGroupId(raw.group_id));
        }
        groups.push(GroupRecord {
            group_id: raw.group_id,
            name: raw.name,
            creation_year: raw.year,
            genres: raw.genres,
            languages: raw.languages,
            members: raw.members.into_iter().collect(),
        });
    }

    let mut success = BTreeMap::new();
    if let Some(path) = success_path {
        for (line_no, line) in open_lines(path)? {
            let line = line.map_err(|source| ModelError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let raw: RawSuccess = serde_json::from_str(&line).map_err(|e| ModelError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: e.to_string(),
            })?;
            if !ids.contains(&raw.group_id) {
                return Err(ModelError::UnknownGroupId(raw.group_id));
            }
            let pagerank = match raw.pagerank.as_i64() {
                Some(v) if (0..=10).contains(&v) => v as u8,
                _ => {
                    return Err(ModelError::InvalidPagerank {
                        group_id: raw.group_id,
                        value: raw.pagerank.to_string(),
                    })
                }
            };
            let mut visits = BTreeMap::new();
            for (year_key, counts) in raw.visits {
                let year: u16 = year_key.parse().map_err(|_| ModelError::InvalidVisitYear {
                    group_id: raw.group_id.clone(),
                    year: year_key.clone(),
                })?;
                if !SAMPLE_YEARS.contains(&year) {
                    return Err(ModelError::InvalidVisitYear {
                        group_id: raw.group_id.clone(),
                        year: year_key,
                    });
                }
                if counts.iter().any(|&c| c < 0.0) {
                    return Err(ModelError::NegativeVisitCount {
                        group_id: raw.group_id.clone(),
                        year,
                    });
                }
                visits.insert(year, counts);
            }
            let rec = SuccessRecord {
                group_id: raw.group_id.clone(),
                pagerank,
                visits,
            };
            if success.insert(raw.group_id.clone(), rec).is_some() {
                return Err(ModelError::DuplicateSuccess(raw.group_id));
            }
        }
    }

    Ok(Dataset { groups, success })
}

#[derive(Serialize)]
struct GroupLine<'a> {
    group_id: &'a str,
    name: &'a str,
    year: Option<i32>,
    genres: &'a [String],
    languages: &'a [String],
    members: Vec<&'a String>,
}

#[derive(Serialize)]
struct SuccessLine<'a> {
    group_id: &'a str,
    pagerank: u8,
    visits: BTreeMap<String, &'a [f64]>,
}

/// Writes the dataset back out in the JSON-lines formats `load_dataset` reads.
///
/// Output is deterministic: groups in dataset order, members sorted, success
/// rows sorted by group_id, visit years ascending.
pub fn save_dataset(ds: &Dataset, groups_path: &Path, success_path: &Path) -> Result<(), ModelError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ModelError::Io {
            path: path.clone(),
            source,
        }
    };

    let mut out = BufWriter::new(File::create(groups_path).map_err(io_err(groups_path))?);
    for g in &ds.groups {
        let line = GroupLine {
            group_id: &g.group_id,
            name: &g.name,
            year: g.creation_year,
            genres: &g.genres,
            languages: &g.languages,
            members: g.members.iter().collect(),
        };
        serde_json::to_writer(&mut out, &line).map_err(|e| ModelError::Parse {
            path: groups_path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        out.write_all(b"\n").map_err(io_err(groups_path))?;
    }
    out.flush().map_err(io_err(groups_path))?;

    let mut out = BufWriter::new(File::create(success_path).map_err(io_err(success_path))?);
    for rec in ds.success.values() {
        let line = SuccessLine {
            group_id: &rec.group_id,
            pagerank: rec.pagerank,
            visits: rec
                .visits
                .iter()
                .map(|(y, v)| (y.to_string(), v.as_slice()))
                .collect(),
        };
        serde_json::to_writer(&mut out, &line).map_err(|e| ModelError::Parse {
            path: success_path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        out.write_all(b"\n").map_err(io_err(success_path))?;
    }
    out.flush().map_err(io_err(success_path))?;
    Ok(())
}

/// Combined visit frequency: the mean over present sample years of the
/// within-year sum of per-page counts. Missing years are skipped.
pub fn combined_visit_frequency(rec: &SuccessRecord) -> Result<f64, ModelError> {
    if rec.visits.is_empty() {
        return Err(ModelError::NoVisitData);
    }
    let total: f64 = rec.visits.values().map(|v| v.iter().sum::<f64>()).sum();
    Ok(total / rec.visits.len() as f64)
}

/// Log visit frequency, shifted as ln(1 + f) so zero-visit groups stay finite.
pub fn log_visit_frequency(f: f64) -> Result<f64, ModelError> {
    if f < 0.0 {
        return Err(ModelError::NegativeFrequency(f));
    }
    Ok((1.0 + f).ln())
}
