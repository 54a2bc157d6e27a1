//! Per-trace and set-level property checks.
//!
//! [`check_pointwise`] is the trace-property baseline: its verdict on a set
//! is the conjunction of independent per-trace verdicts. The other two are
//! genuine hyperproperties: average response time depends on all traces'
//! response times at once, and noninterference asks whether each trace's low
//! observation is reproducible by some trace of the set that contains no
//! High inputs.

use std::collections::HashSet;

use crate::error::{Error, Result};

use super::{PropertyVerdict, Trace};

/// Passes iff every trace satisfies `predicate`; vacuously true on the empty
/// set. On failure the detail is the first failing trace in set order.
pub fn check_pointwise<F>(s: &[Trace], predicate: F) -> PropertyVerdict
where
    F: Fn(&Trace) -> bool,
{
    match s.iter().find(|t| !predicate(t)) {
        None => PropertyVerdict::pass(),
        Some(t) => PropertyVerdict::fail_trace(t.clone()),
    }
}

/// Per-trace predicate "every response time is at most `bound`", the
/// pointwise counterpart of the average-response-time hyperproperty.
pub fn max_rt_at_most(bound: f64) -> impl Fn(&Trace) -> bool {
    move |t: &Trace| t.response_times().all(|rt| rt <= bound)
}

/// Passes iff the grand mean of all response times across all traces is at
/// most `bound`. Requires a non-empty set in which every trace carries at
/// least one response time (otherwise the mean is undefined). On failure the
/// detail is the computed mean.
pub fn check_avg_response_time(s: &[Trace], bound: f64) -> Result<PropertyVerdict> {
    if bound <= 0.0 || !bound.is_finite() {
        return Err(Error::invalid(format!(
            "response-time bound must be > 0, got {bound}"
        )));
    }
    if s.is_empty() {
        return Err(Error::invalid(
            "average response time is undefined on an empty trace set",
        ));
    }
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for (i, t) in s.iter().enumerate() {
        let mut any = false;
        for rt in t.response_times() {
            sum += rt;
            count += 1;
            any = true;
        }
        if !any {
            return Err(Error::invalid(format!(
                "trace {i} carries no response times"
            )));
        }
    }
    let mean = sum / count as f64;
    if mean <= bound {
        Ok(PropertyVerdict::pass())
    } else {
        Ok(PropertyVerdict::fail_statistic(mean))
    }
}

/// Purge-style noninterference: passes iff for every trace `t` of the set
/// there is some trace in the set with no High Input events whose low
/// observation equals `t`'s. Vacuously true on the empty set. On failure the
/// detail is the first trace (in set order) whose low observation no
/// High-input-free trace reproduces.
pub fn check_noninterference(s: &[Trace]) -> PropertyVerdict {
    let high_free_obs: HashSet<Vec<&super::Event>> = s
        .iter()
        .filter(|t| !t.has_high_input())
        .map(|t| t.low_observation())
        .collect();
    match s
        .iter()
        .find(|t| !high_free_obs.contains(&t.low_observation()))
    {
        None => PropertyVerdict::pass(),
        Some(t) => PropertyVerdict::fail_trace(t.clone()),
    }
}
