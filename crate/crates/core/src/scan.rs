//! Parameter-grid scans.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;

use crate::congruences::{
    check_hypothesis, max_bernoulli_index, verify, CaseSpec, TheoremId, TierMode,
};
use crate::error::{Error, Result};
use crate::primes::primes_in;
use crate::report::ReportRecord;
use crate::Context;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanJob {
    pub theorem: TheoremId,
    pub p_range: RangeInclusive<u64>,
    pub grid: BTreeMap<String, RangeInclusive<u64>>,
    pub tier: TierMode,
}

impl ScanJob {
    pub fn new(theorem: TheoremId, p_range: RangeInclusive<u64>) -> Self {
        ScanJob {
            theorem,
            p_range,
            grid: BTreeMap::new(),
            tier: TierMode::Auto,
        }
    }

    pub fn param(mut self, name: &str, range: RangeInclusive<u64>) -> Self {
        self.grid.insert(name.to_string(), range);
        self
    }

    /// Every grid point, sorted.
    pub fn cases(&self) -> Result<Vec<CaseSpec>> {
        let names = self.theorem.param_names();
        if let Some(missing) = names.iter().find(|n| !self.grid.contains_key(**n)) {
            return Err(Error::InvalidArgument(format!(
                "{} needs a range for `{missing}`",
                self.theorem
            )));
        }
        if let Some(extra) = self.grid.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "{} does not take parameter `{extra}`",
                self.theorem
            )));
        }
        let mut cases: Vec<CaseSpec> = primes_in(*self.p_range.start(), *self.p_range.end())
            .into_iter()
            .map(|p| CaseSpec::new(self.theorem, p))
            .collect();
        for (name, range) in &self.grid {
            cases = cases
                .into_iter()
                .flat_map(|c| range.clone().map(move |v| c.clone().with(name, v)))
                .collect();
        }
        cases.sort();
        Ok(cases)
    }
}

/// Runs a job. Cases whose hypotheses fail are reported as skipped.
///
/// The Bernoulli index each admissible case needs is estimated first; the job
/// is refused before any evaluation if one exceeds the cache ceiling. The cache
/// is then warmed serially so the parallel phase only reads it.
pub fn scan(job: &ScanJob, ctx: &Context) -> Result<Vec<ReportRecord>> {
    let cases = job.cases()?;
    let admissible: Vec<bool> = cases.iter().map(|c| check_hypothesis(c).is_ok()).collect();
    let mut needed = 0;
    for (case, &ok) in cases.iter().zip(&admissible) {
        if ok {
            let idx = max_bernoulli_index(case)?;
            ctx.bernoulli.check_index(idx)?;
            needed = needed.max(idx);
        }
    }
    ctx.bernoulli.ensure(needed)?;

    cases
        .par_iter()
        .zip(admissible.par_iter())
        .map(|(case, &ok)| {
            if !ok {
                return Ok(ReportRecord::skipped(case));
            }
            let start = Instant::now();
            match verify(case, job.tier, ctx) {
                Ok(v) => Ok(ReportRecord::from_verdict(
                    &v,
                    start.elapsed().as_millis() as u64,
                )),
                Err(Error::HypothesisViolated(_)) => Ok(ReportRecord::skipped(case)),
                Err(e) => Err(e),
            }
        })
        .collect()
}
