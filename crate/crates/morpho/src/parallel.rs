//! Population evaluation on a rayon pool.

use morpho_core::evolution::Evaluator;
use morpho_core::objectives::{evaluate, ObjectiveVector};
use morpho_core::{Genotype, HoverOptions, PhysicalParams};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Environment variable capping evaluation threads.
pub const THREADS_ENV: &str = "MORPHO_THREADS";

/// Thread count from [`THREADS_ENV`]; `None` when unset.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::validation(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Evaluates batches on a dedicated pool. Results come back in input order,
/// so the thread count never changes a run.
pub struct PoolEvaluator {
    pool: rayon::ThreadPool,
}

impl PoolEvaluator {
    /// `threads = None` uses rayon's default (one per core).
    pub fn new(threads: Option<usize>) -> Self {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        Self {
            pool: builder.build().expect("thread pool"),
        }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Evaluator for PoolEvaluator {
    fn evaluate_batch(
        &self,
        genotypes: &[Genotype],
        params: &PhysicalParams,
        opts: &HoverOptions,
    ) -> Vec<ObjectiveVector> {
        self.pool
            .install(|| genotypes.par_iter().map(|g| evaluate(g, params, opts)).collect())
    }
}
