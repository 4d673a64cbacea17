// SPDX-License-Identifier: Apache-2.0

// Indexed loops over dense node ids are the dominant idiom here.
#![allow(clippy::needless_range_loop)]

//! Collaboration-network analytics.
//!
//! The pipeline: load group-membership records ([`model`]), project them
//! onto a simple undirected group graph ([`graph`]), compute node-level
//! network measures ([`measures`]), detect communities and attribute
//! assortativity ([`community`]), relate measures to success proxies with
//! correlations and quantile trends ([`stats`]), and predict the proxies
//! with a from-scratch random decision forest ([`forest`]). The [`synth`]
//! module generates calibrated synthetic datasets with planted signal for
//! end-to-end testing; [`oracle`] holds naive reference implementations
//! used to validate the fast paths.

pub mod community;
pub mod fmt;
pub mod forest;
pub mod graph;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod parallel;
pub mod stats;
pub mod synth;

pub use graph::CollabGraph;
pub use model::Dataset;
