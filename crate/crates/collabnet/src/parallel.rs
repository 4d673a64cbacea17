// SPDX-License-Identifier: Apache-2.0

//! Worker-pool plumbing. The `COLLABNET_THREADS` environment variable caps
//! the number of workers; unset means the rayon default.
//!
//! All parallel kernels in this crate reduce partial results in a fixed
//! order, so outputs are bit-identical regardless of the worker count.

use std::sync::OnceLock;

static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();

/// Runs `f` inside the configured thread pool (read once per process).
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let pool = POOL.get_or_init(|| {
        std::env::var("COLLABNET_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .map(|n| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .expect("thread pool construction failed")
            })
    });
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}
