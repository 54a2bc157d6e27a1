//! Safety/liveness machinery over finite trace universes.
//!
//! The classical definitions live on infinite traces; here they are
//! finite-horizon: a *completed* trace has length exactly `L`, a *partial*
//! trace has length `< L`. A property is *safety* when every excluded
//! completed trace is refutable early, meaning some partial prefix of it has
//! no completion inside the property. A property is *liveness* when no
//! partial trace is ever doomed, meaning each has at least one completion
//! inside the property. Refutation prefixes are proper (partial) prefixes: a violation
//! must be observable before the trace completes, otherwise every property
//! would count as safety and the decomposition would be vacuous.
//!
//! Under these definitions the classical decomposition theorem holds
//! exactly: `p = safety_closure(p) ∩ (p ∪ (universe \ safety_closure(p)))`,
//! with a safety left factor and a liveness right factor, checkable by
//! exhaustive enumeration.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe (`|alphabet|^len`) the exhaustive operations accept.
pub const MAX_UNIVERSE_SIZE: usize = 1 << 20;

/// All symbol sequences of length exactly `len` over a finite alphabet,
/// together with their partial prefixes (length `< len`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceUniverse<S> {
    alphabet: Vec<S>,
    len: usize,
}

impl<S: Clone + Ord + Debug> TraceUniverse<S> {
    /// The alphabet is sorted and deduplicated; must be non-empty, `len >= 1`,
    /// and `|alphabet|^len` at most [`MAX_UNIVERSE_SIZE`].
    pub fn new(alphabet: impl IntoIterator<Item = S>, len: usize) -> Result<Self> {
        let mut alphabet: Vec<S> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(Error::invalid("universe alphabet must be non-empty"));
        }
        if len == 0 {
            return Err(Error::invalid("universe horizon must be >= 1"));
        }
        let mut size: usize = 1;
        for _ in 0..len {
            size = size
                .checked_mul(alphabet.len())
                .filter(|s| *s <= MAX_UNIVERSE_SIZE)
                .ok_or_else(|| {
                    Error::capacity(format!(
                        "universe size {}^{len} exceeds the exhaustive cap {MAX_UNIVERSE_SIZE}",
                        alphabet.len()
                    ))
                })?;
        }
        Ok(TraceUniverse { alphabet, len })
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    /// The horizon: length of every completed trace.
    pub fn horizon(&self) -> usize {
        self.len
    }

    /// `|alphabet|^len`.
    pub fn size(&self) -> usize {
        self.alphabet.len().pow(self.len as u32)
    }

    /// All completed traces, lexicographic in alphabet order.
    pub fn completed(&self) -> Vec<Vec<S>> {
        self.sequences_of(self.len)
    }

    /// All partial traces (length `< len`, including the empty trace),
    /// shortest first, lexicographic within each length.
    pub fn partials(&self) -> Vec<Vec<S>> {
        (0..self.len).flat_map(|l| self.sequences_of(l)).collect()
    }

    fn sequences_of(&self, len: usize) -> Vec<Vec<S>> {
        let mut out: Vec<Vec<S>> = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|seq| {
                    self.alphabet.iter().map(move |s| {
                        let mut next = seq.clone();
                        next.push(s.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn contains(&self, t: &[S]) -> bool {
        t.len() == self.len && t.iter().all(|s| self.alphabet.binary_search(s).is_ok())
    }
}

/// An explicit subset of a universe's completed traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteProperty<S> {
    universe: TraceUniverse<S>,
    members: BTreeSet<Vec<S>>,
}

impl<S: Clone + Ord + Debug> FiniteProperty<S> {
    pub fn new(
        universe: TraceUniverse<S>,
        members: impl IntoIterator<Item = Vec<S>>,
    ) -> Result<Self> {
        let members: BTreeSet<Vec<S>> = members.into_iter().collect();
        for m in &members {
            if !universe.contains(m) {
                return Err(Error::invalid(format!(
                    "member {m:?} is not a completed trace of the universe"
                )));
            }
        }
        Ok(FiniteProperty { universe, members })
    }

    pub fn universe(&self) -> &TraceUniverse<S> {
        &self.universe
    }

    pub fn members(&self) -> &BTreeSet<Vec<S>> {
        &self.members
    }

    pub fn contains(&self, t: &[S]) -> bool {
        self.members.contains(t)
    }

    /// Every prefix (any length, including the member itself) of a member.
    fn member_prefixes(&self) -> BTreeSet<Vec<S>> {
        let mut prefixes = BTreeSet::new();
        for m in &self.members {
            for l in 0..=m.len() {
                prefixes.insert(m[..l].to_vec());
            }
        }
        prefixes
    }

    /// True when every excluded completed trace has a partial prefix none of
    /// whose completions are members (a finitely refutable bad prefix).
    pub fn is_safety(&self) -> bool {
        let live = self.member_prefixes();
        self.universe
            .completed()
            .into_iter()
            .filter(|u| !self.members.contains(u))
            .all(|u| (0..u.len()).any(|l| !live.contains(&u[..l])))
    }

    /// True when every partial trace has at least one completion that is a
    /// member ("good thing" stays reachable until the horizon).
    pub fn is_liveness(&self) -> bool {
        let live = self.member_prefixes();
        self.universe.partials().iter().all(|b| live.contains(b))
    }

    /// Smallest safety property containing this one: the completed traces
    /// whose every partial prefix is a prefix of some member. Extensive,
    /// monotone, and idempotent.
    pub fn safety_closure(&self) -> FiniteProperty<S> {
        let live = self.member_prefixes();
        let members = self
            .universe
            .completed()
            .into_iter()
            .filter(|u| (0..u.len()).all(|l| live.contains(&u[..l])))
            .collect();
        FiniteProperty {
            universe: self.universe.clone(),
            members,
        }
    }

    /// Splits into `(safe, live)` with `safe ∩ live = self`, `safe` a safety
    /// property and `live` a liveness property.
    pub fn decompose(&self) -> (FiniteProperty<S>, FiniteProperty<S>) {
        let safe = self.safety_closure();
        let mut live_members = self.members.clone();
        for u in self.universe.completed() {
            if !safe.members.contains(&u) {
                live_members.insert(u);
            }
        }
        let live = FiniteProperty {
            universe: self.universe.clone(),
            members: live_members,
        };
        (safe, live)
    }

    /// Intersection with another property over the same universe.
    pub fn intersect(&self, other: &FiniteProperty<S>) -> FiniteProperty<S> {
        FiniteProperty {
            universe: self.universe.clone(),
            members: self.members.intersection(&other.members).cloned().collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PropertyFile {
    sigma: Vec<String>,
    #[serde(rename = "L")]
    len: usize,
    members: Vec<Vec<String>>,
}

/// Serializes to the property file schema
/// `{"sigma": [..], "L": n, "members": [[..], ..]}`.
pub fn property_to_json(p: &FiniteProperty<String>) -> String {
    let file = PropertyFile {
        sigma: p.universe.alphabet.clone(),
        len: p.universe.len,
        members: p.members.iter().cloned().collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("property serialization cannot fail");
    s.push('\n');
    s
}

pub fn property_from_json(text: &str) -> Result<FiniteProperty<String>> {
    let file: PropertyFile =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("property file: {e}")))?;
    let universe = TraceUniverse::new(file.sigma, file.len)?;
    FiniteProperty::new(universe, file.members)
        .map_err(|e| Error::parse(format!("property file: {e}")))
}

pub fn read_property(path: &Path) -> Result<FiniteProperty<String>> {
    let text = std::fs::read_to_string(path)?;
    property_from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
