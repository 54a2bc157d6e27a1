//! Parsing for `--property` selectors and `--sigma` event alphabets.

use std::str::FromStr;

use cyberdyn_core::error::{Error, Result};
use cyberdyn_core::hyperprop::checks::{
    check_avg_response_time, check_noninterference, check_pointwise, max_rt_at_most,
};
use cyberdyn_core::hyperprop::{Event, Kind, Level, PropertyVerdict, Trace};

/// A property selector from the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertySpec {
    /// `avg-rt:<bound>`: grand mean response time at most the bound.
    AvgResponseTime(f64),
    /// `noninterference`: purge-style noninterference.
    Noninterference,
    /// `pointwise:max-rt:<bound>`: every response time of every trace at
    /// most the bound (a trace property, for contrast).
    PointwiseMaxRt(f64),
}

impl FromStr for PropertySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "noninterference" {
            return Ok(PropertySpec::Noninterference);
        }
        if let Some(bound) = s.strip_prefix("avg-rt:") {
            let bound = bound
                .parse()
                .map_err(|_| Error::invalid(format!("property: bad bound in `{s}`")))?;
            return Ok(PropertySpec::AvgResponseTime(bound));
        }
        if let Some(bound) = s.strip_prefix("pointwise:max-rt:") {
            let bound = bound
                .parse()
                .map_err(|_| Error::invalid(format!("property: bad bound in `{s}`")))?;
            return Ok(PropertySpec::PointwiseMaxRt(bound));
        }
        Err(Error::invalid(format!(
            "property must be `avg-rt:<bound>`, `noninterference`, or `pointwise:max-rt:<bound>`, got `{s}`"
        )))
    }
}

impl PropertySpec {
    pub fn check(&self, traces: &[Trace]) -> Result<PropertyVerdict> {
        match self {
            PropertySpec::AvgResponseTime(bound) => check_avg_response_time(traces, *bound),
            PropertySpec::Noninterference => Ok(check_noninterference(traces)),
            PropertySpec::PointwiseMaxRt(bound) => {
                Ok(check_pointwise(traces, max_rt_at_most(*bound)))
            }
        }
    }

    /// Boolean form used by the witness search.
    pub fn passes(&self, traces: &[Trace]) -> Result<bool> {
        Ok(self.check(traces)?.passed)
    }
}

/// Parses one event symbol: `<H|L><in|out>:<value>[:rt=<ms>]`,
/// e.g. `Hin:1`, `Lout:0`, `Lout:0:rt=2.5`.
fn parse_event(symbol: &str) -> Result<Event> {
    let bad = || {
        Error::invalid(format!(
            "sigma: event `{symbol}` must look like `Hin:1`, `Lout:0`, or `Lout:0:rt=2.5`"
        ))
    };
    let mut parts = symbol.split(':');
    let head = parts.next().ok_or_else(bad)?;
    let (level, kind) = match head {
        "Hin" => (Level::High, Kind::Input),
        "Hout" => (Level::High, Kind::Output),
        "Lin" => (Level::Low, Kind::Input),
        "Lout" => (Level::Low, Kind::Output),
        _ => return Err(bad()),
    };
    let value: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let rt = match parts.next() {
        None => None,
        Some(rt_part) => {
            let rt: f64 = rt_part
                .strip_prefix("rt=")
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            Some(rt)
        }
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    match kind {
        Kind::Input => {
            if rt.is_some() {
                return Err(Error::invalid(format!(
                    "sigma: event `{symbol}`: response time is only allowed on output events"
                )));
            }
            Ok(Event::input(level, value))
        }
        Kind::Output => Ok(Event::output(level, value, rt)),
    }
}

/// Builds the candidate pool: every sequence of length `len` over the
/// comma-separated event alphabet, in lexicographic alphabet order. The pool
/// must fit the witness-search cap, so `|sigma|^len <= 20`.
pub fn event_pool(sigma: &str, len: usize) -> Result<Vec<Trace>> {
    let alphabet: Vec<Event> = sigma
        .split(',')
        .map(|s| parse_event(s.trim()))
        .collect::<Result<_>>()?;
    if alphabet.is_empty() {
        return Err(Error::invalid("sigma must list at least one event"));
    }
    if len == 0 {
        return Err(Error::invalid("len must be >= 1"));
    }
    let size = alphabet
        .len()
        .checked_pow(len as u32)
        .filter(|s| *s <= cyberdyn_core::hyperprop::witness::MAX_WITNESS_POOL)
        .ok_or_else(|| {
            Error::capacity(format!(
                "pool size {}^{len} exceeds the witness-search cap {}",
                alphabet.len(),
                cyberdyn_core::hyperprop::witness::MAX_WITNESS_POOL
            ))
        })?;
    let mut pool: Vec<Vec<Event>> = vec![Vec::new()];
    for _ in 0..len {
        pool = pool
            .into_iter()
            .flat_map(|seq| {
                alphabet.iter().map(move |e| {
                    let mut next = seq.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect();
    }
    debug_assert_eq!(pool.len(), size);
    Ok(pool.into_iter().map(Trace::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_property_specs() {
        assert_eq!(
            "avg-rt:2.5".parse::<PropertySpec>().unwrap(),
            PropertySpec::AvgResponseTime(2.5)
        );
        assert_eq!(
            "noninterference".parse::<PropertySpec>().unwrap(),
            PropertySpec::Noninterference
        );
        assert_eq!(
            "pointwise:max-rt:5".parse::<PropertySpec>().unwrap(),
            PropertySpec::PointwiseMaxRt(5.0)
        );
        assert!("bogus".parse::<PropertySpec>().is_err());
        assert!("avg-rt:x".parse::<PropertySpec>().is_err());
    }

    #[test]
    fn parses_event_symbols() {
        assert_eq!(parse_event("Hin:1").unwrap(), Event::input(Level::High, 1));
        assert_eq!(
            parse_event("Lout:0:rt=2.5").unwrap(),
            Event::output(Level::Low, 0, Some(2.5))
        );
        assert!(parse_event("Hin:1:rt=2").is_err()); // rt on input
        assert!(parse_event("Xin:1").is_err());
        assert!(parse_event("Hin").is_err());
    }

    #[test]
    fn event_pool_enumerates_and_caps() {
        let pool = event_pool("Hin:1,Lout:0", 2).unwrap();
        assert_eq!(pool.len(), 4);
        // lexicographic: HH, HL, LH, LL
        assert_eq!(pool[0].events[0], Event::input(Level::High, 1));
        assert_eq!(pool[0].events[1], Event::input(Level::High, 1));
        assert_eq!(pool[3].events[0], Event::output(Level::Low, 0, None));

        let err = event_pool("Hin:1,Lout:0", 5).unwrap_err();
        assert_eq!(err.category(), "capacity-error");
    }
}
