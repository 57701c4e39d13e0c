//! Multi-threaded trial execution.

use advseq_core::sim::{TrialJob, TrialRunner, TrialTally};
use advseq_core::Result;

/// Splits the trial range into `workers` contiguous chunks, one scoped
/// thread each. Tallies are integer sums, so the merged result is the same
/// for every worker count.
#[derive(Clone, Copy, Debug)]
pub struct ThreadRunner {
    pub workers: usize,
}

impl ThreadRunner {
    pub fn new(workers: usize) -> Self {
        ThreadRunner { workers: workers.max(1) }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

impl TrialRunner for ThreadRunner {
    fn run(&self, job: &TrialJob<'_>) -> Result<TrialTally> {
        let n = job.trials;
        let w = (self.workers as u64).min(n).max(1);
        if w == 1 {
            return job.run_range(0..n);
        }
        let bounds: Vec<(u64, u64)> = (0..w).map(|i| (i * n / w, (i + 1) * n / w)).collect();
        let parts: Vec<Result<TrialTally>> = std::thread::scope(|s| {
            let handles: Vec<_> = bounds.iter().map(|&(a, b)| s.spawn(move || job.run_range(a..b))).collect();
            handles.into_iter().map(|h| h.join().expect("trial worker panicked")).collect()
        });
        let mut total = TrialTally::default();
        for p in parts {
            total.merge(&p?);
        }
        Ok(total)
    }
}
