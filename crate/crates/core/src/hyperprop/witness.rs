//! Brute-force witnesses that a set-level predicate is not a trace property.
//!
//! A trace's membership in a passing system tells you nothing in isolation:
//! a witness exhibits one trace `t` inside both a passing set and a failing
//! set, so no examination of `t` alone can decide the verdict of a system
//! containing it. The search enumerates subsets of a candidate pool as
//! bitmasks in ascending order (bit `i` = pool index `i`), evaluates the
//! predicate once per subset, and returns the first witness in the canonical
//! order: passing sets ascending, then failing sets ascending, with `t` the
//! lowest-index shared trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Trace;

/// Hard cap on the candidate pool for exhaustive search.
pub const MAX_WITNESS_POOL: usize = 20;
/// Hard cap on `max_set_size`; together with the pool cap this keeps the
/// enumeration under ~10^5 predicate evaluations.
pub const MAX_WITNESS_SET_SIZE: usize = 6;

/// Evidence that a set-level predicate cannot be checked per trace: the same
/// trace belongs to a set the predicate accepts and one it rejects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// The shared trace.
    pub trace: Trace,
    /// A set containing `trace` on which the predicate passes.
    pub passing_set: Vec<Trace>,
    /// A set containing `trace` on which the predicate fails.
    pub failing_set: Vec<Trace>,
}

/// Searches subsets of `pool` (non-empty, size at most `max_set_size`) for a
/// witness. Returns the canonically first witness, or `None` if the
/// predicate is consistent with per-trace checking over this pool. The
/// predicate must be total over the enumerated subsets; its errors
/// propagate.
pub fn witness_non_trace_property<F>(
    pool: &[Trace],
    max_set_size: usize,
    hyper: F,
) -> Result<Option<Witness>>
where
    F: Fn(&[Trace]) -> Result<bool>,
{
    if max_set_size < 2 {
        return Err(Error::invalid("max_set_size must be >= 2"));
    }
    if max_set_size > MAX_WITNESS_SET_SIZE {
        return Err(Error::capacity(format!(
            "max_set_size {max_set_size} exceeds the exhaustive cap {MAX_WITNESS_SET_SIZE}"
        )));
    }
    if pool.len() > MAX_WITNESS_POOL {
        return Err(Error::capacity(format!(
            "candidate pool of {} traces exceeds the exhaustive cap {MAX_WITNESS_POOL}",
            pool.len()
        )));
    }

    let n = pool.len();
    let mut passing: Vec<u32> = Vec::new();
    let mut failing: Vec<u32> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) > max_set_size {
            continue;
        }
        let subset = materialize(pool, mask);
        if hyper(&subset)? {
            passing.push(mask);
        } else {
            failing.push(mask);
        }
    }

    for &s1 in &passing {
        for &s2 in &failing {
            let shared = s1 & s2;
            if shared != 0 {
                let t = shared.trailing_zeros() as usize;
                return Ok(Some(Witness {
                    trace: pool[t].clone(),
                    passing_set: materialize(pool, s1),
                    failing_set: materialize(pool, s2),
                }));
            }
        }
    }
    Ok(None)
}

fn materialize(pool: &[Trace], mask: u32) -> Vec<Trace> {
    (0..pool.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| pool[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::checks::{check_avg_response_time, check_pointwise, max_rt_at_most};
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn avg_rt_yields_the_expected_witness() {
        let pool = vec![rt_trace(1.0), rt_trace(10.0)];
        let w =
            witness_non_trace_property(&pool, 2, |s| Ok(check_avg_response_time(s, 2.5)?.passed))
                .unwrap()
                .expect("witness exists");
        assert_eq!(w.trace, rt_trace(1.0));
        assert_eq!(w.passing_set, vec![rt_trace(1.0)]);
        assert_eq!(w.failing_set, vec![rt_trace(1.0), rt_trace(10.0)]);
    }

    #[test]
    fn witness_invariants_recheck() {
        let pool = vec![rt_trace(1.0), rt_trace(2.0), rt_trace(10.0)];
        let hyper = |s: &[Trace]| Ok(check_avg_response_time(s, 2.5)?.passed);
        let w = witness_non_trace_property(&pool, 3, hyper)
            .unwrap()
            .expect("witness exists");
        assert!(w.passing_set.contains(&w.trace));
        assert!(w.failing_set.contains(&w.trace));
        assert!(hyper(&w.passing_set).unwrap());
        assert!(!hyper(&w.failing_set).unwrap());
    }

    #[test]
    fn pointwise_admits_no_witness_over_conforming_pools() {
        // every trace satisfies "all rt <= 5": all subsets pass
        let pool = vec![rt_trace(1.0), rt_trace(2.0), rt_trace(5.0)];
        let found = witness_non_trace_property(&pool, 3, |s| {
            Ok(check_pointwise(s, max_rt_at_most(5.0)).passed)
        })
        .unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn pointwise_admits_no_witness_over_violating_pools() {
        // every trace violates: all subsets fail
        let pool = vec![rt_trace(7.0), rt_trace(9.0), rt_trace(100.0)];
        let found = witness_non_trace_property(&pool, 3, |s| {
            Ok(check_pointwise(s, max_rt_at_most(5.0)).passed)
        })
        .unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn caps_are_enforced() {
        let pool = vec![rt_trace(1.0); 21];
        let err = witness_non_trace_property(&pool, 2, |_| Ok(true)).unwrap_err();
        assert_eq!(err.category(), "capacity-error");

        let pool = vec![rt_trace(1.0)];
        let err = witness_non_trace_property(&pool, 7, |_| Ok(true)).unwrap_err();
        assert_eq!(err.category(), "capacity-error");
        let err = witness_non_trace_property(&pool, 1, |_| Ok(true)).unwrap_err();
        assert_eq!(err.category(), "invalid-argument");
    }

    #[test]
    fn empty_pool_has_no_witness() {
        let found = witness_non_trace_property(&[], 2, |_| Ok(true)).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn predicate_errors_propagate() {
        let pool = vec![trace(vec![lout(0)])]; // no response times
        let err =
            witness_non_trace_property(&pool, 2, |s| Ok(check_avg_response_time(s, 2.5)?.passed))
                .unwrap_err();
        assert_eq!(err.category(), "invalid-argument");
    }
}
