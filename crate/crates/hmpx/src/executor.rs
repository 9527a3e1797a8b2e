use std::num::NonZeroUsize;
use std::sync::Arc;

use hmpx_core::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Runs tasks on a dedicated rayon pool. Results come back in task order,
/// so reductions over them do not depend on the worker count.
#[derive(Debug, Clone)]
pub struct ThreadExecutor {
    pool: Arc<ThreadPool>,
}

impl ThreadExecutor {
    pub fn new(workers: NonZeroUsize) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers.get())
            .thread_name(|i| format!("hmpx-worker-{i}"))
            .build()
            .expect("thread pool starts");
        Self { pool: Arc::new(pool) }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN))
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for ThreadExecutor {
    fn run<T, F>(&self, tasks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.pool.install(|| (0..tasks).into_par_iter().map(&job).collect())
    }
}
