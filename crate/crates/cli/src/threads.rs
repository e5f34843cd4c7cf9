//! Threaded runner for the independent per-minor certificate searches.

use exteria_core::localize::{ClaimContext, ClaimStep, SearchRunner, StepCertificate};
use exteria_core::relations::MinorSymbol;
use exteria_core::Result;

/// Splits the minors of a stage across a fixed number of worker threads.
/// Results come back in input order, so reports stay deterministic.
pub struct ThreadedRunner {
    pub threads: usize,
}

impl SearchRunner for ThreadedRunner {
    fn run(
        &self,
        ctx: &ClaimContext,
        step: ClaimStep,
        minors: &[MinorSymbol],
    ) -> Vec<Result<Option<StepCertificate>>> {
        let workers = self.threads.max(1).min(minors.len().max(1));
        if workers <= 1 || minors.len() <= 1 {
            return minors.iter().map(|m| ctx.search(m, step, &[])).collect();
        }
        let chunk = minors.len().div_ceil(workers);
        let mut out = Vec::with_capacity(minors.len());
        std::thread::scope(|scope| {
            let handles: Vec<_> = minors
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|m| ctx.search(m, step, &[]))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                out.extend(h.join().expect("search worker panicked"));
            }
        });
        out
    }
}
