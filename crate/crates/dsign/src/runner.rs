//! Parallel sweeps: lemma verification over index ranges and batch
//! construction over many instances.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::time::Instant;

use dsign_core::lemma_lab::{self, LabError, LemmaId, Scope};
use rayon::prelude::*;
use serde::Serialize;

/// Pieces per worker; small enough to balance uneven ranges.
const CHUNKS_PER_WORKER: u64 = 32;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    /// Lifts the cap on exhaustive domain size.
    pub allow_large: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub index: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub claim: String,
    pub scope: String,
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub domain_size: u64,
    pub scanned: u64,
    pub passed: bool,
    pub violations: Vec<ViolationRecord>,
    pub stats: BTreeMap<String, u64>,
    pub elapsed_secs: f64,
    pub jobs: usize,
}

/// How many violations the text rendering lists before summarizing.
const SHOWN_VIOLATIONS: usize = 20;

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict} {} over {}", self.lemma, self.scope)?;
        writeln!(f, "  claim:      {}", self.claim)?;
        writeln!(f, "  domain:     {}", self.domain)?;
        writeln!(f, "  scanned:    {} of {}", self.scanned, self.domain_size)?;
        writeln!(f, "  violations: {}", self.violations.len())?;
        for v in self.violations.iter().take(SHOWN_VIOLATIONS) {
            writeln!(f, "    #{}: {}", v.index, v.message)?;
        }
        if self.violations.len() > SHOWN_VIOLATIONS {
            writeln!(f, "    ... and {} more", self.violations.len() - SHOWN_VIOLATIONS)?;
        }
        for (k, v) in &self.stats {
            writeln!(f, "  {k}: {v}")?;
        }
        write!(f, "  elapsed:    {:.3} s on {} worker(s)", self.elapsed_secs, self.jobs)
    }
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Splits `0..size` into contiguous ranges for the current pool.
pub fn index_chunks(size: u64) -> Vec<Range<u64>> {
    let pieces = (rayon::current_num_threads() as u64 * CHUNKS_PER_WORKER).max(1);
    let step = size.div_ceil(pieces).max(1);
    (0..size).step_by(step as usize).map(|s| s..(s + step).min(size)).collect()
}

/// Maps `f` over index chunks of `0..size` in parallel, results in index order.
pub fn par_ranges<T: Send>(size: u64, f: impl Fn(Range<u64>) -> T + Sync + Send) -> Vec<T> {
    index_chunks(size).into_par_iter().map(f).collect()
}

/// Checks `id` over `scope`, splitting the domain across workers. Output is
/// independent of the worker count.
pub fn verify(id: LemmaId, scope: &Scope, opts: VerifyOptions) -> Result<VerificationReport, LabError> {
    lemma_lab::validate(id, scope, opts.allow_large)?;
    let start = Instant::now();
    let (outcome, jobs) = with_jobs(opts.jobs, || {
        let parts = par_ranges(scope.domain_size(), |r| lemma_lab::check_range(id, scope, r));
        let mut total = lemma_lab::RangeOutcome::default();
        for part in parts {
            total.merge(part?);
        }
        Ok::<_, LabError>((total, rayon::current_num_threads()))
    })?;
    let elapsed_secs = start.elapsed().as_secs_f64();
    let seed = match *scope {
        Scope::Random { seed, .. } => Some(seed),
        _ => None,
    };
    Ok(VerificationReport {
        lemma: id.to_string(),
        claim: id.claim().to_string(),
        scope: scope.to_string(),
        domain: scope.description(),
        seed,
        domain_size: scope.domain_size(),
        scanned: outcome.scanned,
        passed: outcome.passed(),
        violations: outcome
            .violations
            .into_iter()
            .map(|v| ViolationRecord { index: v.index, message: v.message })
            .collect(),
        stats: outcome.stats.0,
        elapsed_secs,
        jobs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_the_domain_in_order() {
        for size in [0, 1, 7, 4096, 1_000_003] {
            let chunks = with_jobs(Some(3), || index_chunks(size));
            let mut next = 0;
            for c in &chunks {
                assert_eq!(c.start, next);
                assert!(c.end > c.start);
                next = c.end;
            }
            assert_eq!(next, size);
        }
    }

    #[test]
    fn report_is_independent_of_worker_count() {
        let scope = Scope::ExhaustiveNormalized(5);
        let one = verify(LemmaId::Lemma5, &scope, VerifyOptions { jobs: Some(1), allow_large: false }).unwrap();
        let four = verify(LemmaId::Lemma5, &scope, VerifyOptions { jobs: Some(4), allow_large: false }).unwrap();
        assert_eq!(one.scanned, 4096);
        assert_eq!(one.scanned, four.scanned);
        assert_eq!(one.stats, four.stats);
        assert_eq!(one.violations, four.violations);
        assert!(one.passed);
    }
}
