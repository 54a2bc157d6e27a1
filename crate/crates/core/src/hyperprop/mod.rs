//! Trace properties vs hyperproperties over finite trace universes.
//!
//! A trace property can be decided one trace at a time; a hyperproperty is a
//! predicate on whole trace *sets*, so verifying it must examine traces
//! jointly. This module provides event traces with High/Low clearance
//! levels, per-trace and set-level checks ([`checks`]), a finite-horizon
//! safety/liveness decomposition ([`finite`]), and a brute-force search for
//! witnesses that a set-level predicate is not per-trace checkable
//! ([`witness`]).

pub mod checks;
pub mod finite;
pub mod witness;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clearance level of the process that produced an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "H")]
    High,
    #[serde(rename = "L")]
    Low,
}

/// Direction of an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "in")]
    Input,
    #[serde(rename = "out")]
    Output,
}

/// One observable event. A response time may only be attached to outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "EventRaw", into = "EventRaw")]
pub struct Event {
    level: Level,
    kind: Kind,
    value: i64,
    response_time: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
struct EventRaw {
    level: Level,
    kind: Kind,
    value: i64,
    #[serde(rename = "rt", skip_serializing_if = "Option::is_none")]
    response_time: Option<f64>,
}

impl TryFrom<EventRaw> for Event {
    type Error = Error;
    fn try_from(raw: EventRaw) -> Result<Event> {
        match raw.kind {
            Kind::Input if raw.response_time.is_some() => Err(Error::parse(
                "event: response time is only allowed on output events",
            )),
            _ => Ok(Event {
                level: raw.level,
                kind: raw.kind,
                value: raw.value,
                response_time: raw.response_time,
            }),
        }
    }
}

impl From<Event> for EventRaw {
    fn from(e: Event) -> EventRaw {
        EventRaw {
            level: e.level,
            kind: e.kind,
            value: e.value,
            response_time: e.response_time,
        }
    }
}

impl Event {
    pub fn input(level: Level, value: i64) -> Self {
        Event {
            level,
            kind: Kind::Input,
            value,
            response_time: None,
        }
    }

    pub fn output(level: Level, value: i64, response_time: Option<f64>) -> Self {
        Event {
            level,
            kind: Kind::Output,
            value,
            response_time,
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn response_time(&self) -> Option<f64> {
        self.response_time
    }

    fn rt_bits(&self) -> Option<u64> {
        self.response_time.map(f64::to_bits)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.kind == other.kind
            && self.value == other.value
            && self.rt_bits() == other.rt_bits()
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.level, self.kind, self.value)
            .cmp(&(other.level, other.kind, other.value))
            .then_with(|| match (self.response_time, other.response_time) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => a.total_cmp(&b),
            })
    }
}

impl Hash for Event {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.level, self.kind, self.value, self.rt_bits()).hash(state);
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Level::High => "H",
            Level::Low => "L",
        };
        let kind = match self.kind {
            Kind::Input => "in",
            Kind::Output => "out",
        };
        match self.response_time {
            Some(rt) => write!(f, "{level}.{kind}({}|rt={rt})", self.value),
            None => write!(f, "{level}.{kind}({})", self.value),
        }
    }
}

/// A finite sequence of events; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<Event>,
}

impl Trace {
    pub fn new(events: Vec<Event>) -> Self {
        Trace { events }
    }

    /// Response times of all output events, in order.
    pub fn response_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.events.iter().filter_map(Event::response_time)
    }

    /// The subsequence of Low-level events (the low observation).
    pub fn low_observation(&self) -> Vec<&Event> {
        self.events
            .iter()
            .filter(|e| e.level == Level::Low)
            .collect()
    }

    pub fn has_high_input(&self) -> bool {
        self.events
            .iter()
            .any(|e| e.level == Level::High && e.kind == Kind::Input)
    }

    /// The trace with High Input events removed.
    pub fn purge(&self) -> Trace {
        Trace {
            events: self
                .events
                .iter()
                .filter(|e| !(e.level == Level::High && e.kind == Kind::Input))
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Outcome of a property check. `detail` is present exactly when the check
/// failed and names either the first offending trace (in canonical order,
/// i.e. the order of the input set) or the computed statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<VerdictDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictDetail {
    OffendingTrace(Trace),
    Statistic(f64),
}

impl PropertyVerdict {
    pub fn pass() -> Self {
        PropertyVerdict {
            passed: true,
            detail: None,
        }
    }

    pub fn fail_trace(t: Trace) -> Self {
        PropertyVerdict {
            passed: false,
            detail: Some(VerdictDetail::OffendingTrace(t)),
        }
    }

    pub fn fail_statistic(x: f64) -> Self {
        PropertyVerdict {
            passed: false,
            detail: Some(VerdictDetail::Statistic(x)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TraceSetFile {
    traces: Vec<Trace>,
}

/// Serializes a trace set to the `{"traces": [...]}` schema.
pub fn trace_set_to_json(traces: &[Trace]) -> String {
    let mut s = serde_json::to_string_pretty(&TraceSetFile {
        traces: traces.to_vec(),
    })
    .expect("trace serialization cannot fail");
    s.push('\n');
    s
}

/// Parses a trace set; exact duplicate traces are dropped, keeping the first
/// occurrence (the file order is the canonical order of the set).
pub fn trace_set_from_json(text: &str) -> Result<Vec<Trace>> {
    let file: TraceSetFile =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("trace set: {e}")))?;
    let mut seen = std::collections::HashSet::new();
    Ok(file
        .traces
        .into_iter()
        .filter(|t| seen.insert(t.clone()))
        .collect())
}

pub fn read_trace_set(path: &Path) -> Result<Vec<Trace>> {
    let text = std::fs::read_to_string(path)?;
    trace_set_from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_trace_set(traces: &[Trace], path: &Path) -> Result<()> {
    std::fs::write(path, trace_set_to_json(traces))?;
    Ok(())
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn hin(v: i64) -> Event {
        Event::input(Level::High, v)
    }

    pub fn lin(v: i64) -> Event {
        Event::input(Level::Low, v)
    }

    pub fn hout(v: i64) -> Event {
        Event::output(Level::High, v, None)
    }

    pub fn lout(v: i64) -> Event {
        Event::output(Level::Low, v, None)
    }

    pub fn lout_rt(v: i64, rt: f64) -> Event {
        Event::output(Level::Low, v, Some(rt))
    }

    pub fn trace(events: Vec<Event>) -> Trace {
        Trace::new(events)
    }

    /// A trace containing a single Low output with the given response time.
    pub fn rt_trace(rt: f64) -> Trace {
        trace(vec![lout_rt(0, rt)])
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn response_time_only_on_outputs() {
        let json = r#"{"traces":[{"events":[{"level":"H","kind":"in","value":1,"rt":2.0}]}]}"#;
        let err = trace_set_from_json(json).unwrap_err();
        assert_eq!(err.category(), "parse-error");
        assert!(err.to_string().contains("output"));

        let json = r#"{"traces":[{"events":[{"level":"L","kind":"out","value":1,"rt":2.0}]}]}"#;
        let traces = trace_set_from_json(json).unwrap();
        assert_eq!(traces[0].events[0].response_time(), Some(2.0));
    }

    #[test]
    fn trace_set_round_trips_and_dedups() {
        let traces = vec![
            trace(vec![hin(1), lout_rt(0, 2.5)]),
            trace(vec![lout(0)]),
            trace(vec![hin(1), lout_rt(0, 2.5)]), // duplicate
        ];
        let parsed = trace_set_from_json(&trace_set_to_json(&traces)).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0], traces[0]);
        assert_eq!(parsed[1], traces[1]);
    }

    #[test]
    fn purge_removes_exactly_high_inputs() {
        let t = trace(vec![hin(1), lin(2), hout(3), lout(4)]);
        let purged = t.purge();
        assert_eq!(purged.events, vec![lin(2), hout(3), lout(4)]);
        assert_eq!(t.low_observation(), vec![&lin(2), &lout(4)]);
    }

    #[test]
    fn event_ordering_is_total_on_response_times() {
        let a = lout_rt(0, 1.0);
        let b = lout_rt(0, 2.0);
        let c = lout(0);
        assert!(a < b);
        assert!(c < a); // missing rt sorts first
        assert_eq!(a.cmp(&a), std::cmp::Ordering::Equal);
    }
}
