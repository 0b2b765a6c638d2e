//! Order-preserving parallel map over utterances.

use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{bail, Context};
use rayon::prelude::*;

pub struct Pool {
    pool: rayon::ThreadPool,
    fail_fast: bool,
}

/// Per-utterance results, in input order.
pub struct Settled<R> {
    /// Successful results with their input index.
    pub ok: Vec<(usize, R)>,
    pub failed: usize,
    /// A failure occurred under `--fail-fast`; nothing should be written.
    pub aborted: bool,
}

impl Pool {
    pub fn new(jobs: Option<usize>, fail_fast: bool) -> anyhow::Result<Self> {
        let threads = match jobs {
            Some(0) => bail!("--jobs must be at least 1"),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("cannot start the worker pool")?;
        Ok(Pool { pool, fail_fast })
    }

    /// Applies `f` to every item and reports failures on stderr as
    /// `<id>: <error>`. Under `--fail-fast`, items after the earliest
    /// failure are skipped, but every item before it is still processed, so
    /// the reported failure is the same whatever the scheduling.
    pub fn map<T, R, F>(&self, items: &[T], id: impl Fn(&T) -> &str, f: F) -> Settled<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> latcomb::Result<R> + Sync,
    {
        let first_failure = AtomicUsize::new(usize::MAX);
        let results: Vec<Option<latcomb::Result<R>>> = self.pool.install(|| {
            items
                .par_iter()
                .enumerate()
                .map(|(i, item)| {
                    if self.fail_fast && i > first_failure.load(Ordering::Relaxed) {
                        return None;
                    }
                    let r = f(item);
                    if r.is_err() {
                        first_failure.fetch_min(i, Ordering::Relaxed);
                    }
                    Some(r)
                })
                .collect()
        });

        let mut settled = Settled { ok: Vec::with_capacity(items.len()), failed: 0, aborted: false };
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Some(Ok(v)) => settled.ok.push((i, v)),
                Some(Err(e)) => {
                    eprintln!("{}: {e}", id(&items[i]));
                    settled.failed += 1;
                    if self.fail_fast {
                        settled.aborted = true;
                        break;
                    }
                }
                None => {}
            }
        }
        settled
    }
}
