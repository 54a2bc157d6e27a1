//! Attack-defense dynamics: stochastic simulation and mean-field iteration.
//!
//! The stochastic model updates synchronously from the state at time `t`:
//! a node compromised at `t` is cured with probability `beta`; a node secure
//! at `t` becomes compromised with probability `1 - (1-gamma)^k`, where `k`
//! is its number of compromised-at-`t` neighbors. A node cured in step `t`
//! cannot be re-compromised within step `t`.
//!
//! Draw contract (see [`crate::rng`]): each step consumes exactly one uniform
//! `u_i` per node, ascending node id, whether or not any event fires. A
//! compromised node is cured iff `u_i < beta`; a secure node is compromised
//! iff `u_i >= (1-gamma)^k`. Both readings of the same draw have the exact
//! model marginals, and because curing tests the lower tail while infection
//! tests the upper tail, runs that share a seed are coupled: raising `gamma`
//! (or lowering `beta`) can only grow the compromised set, step by step,
//! whenever `beta <= (1-gamma)^k` for every attainable `k`. This makes the
//! monotonicity checks in the test suite exact rather than statistical.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{split, SplitMix64};
use crate::spectral::DynamicsParams;

/// Per-node security state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeState {
    Secure,
    Compromised,
}

/// States of all nodes at one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    states: Vec<NodeState>,
}

impl StateVector {
    pub fn all_compromised(n: usize) -> Self {
        StateVector {
            states: vec![NodeState::Compromised; n],
        }
    }

    pub fn all_secure(n: usize) -> Self {
        StateVector {
            states: vec![NodeState::Secure; n],
        }
    }

    /// All nodes secure except the listed ones; ids must be `< n`.
    pub fn with_compromised(n: usize, nodes: &[usize]) -> Result<Self> {
        let mut states = vec![NodeState::Secure; n];
        for &i in nodes {
            if i >= n {
                return Err(Error::invalid(format!(
                    "initial node id {i} out of range (n = {n})"
                )));
            }
            states[i] = NodeState::Compromised;
        }
        Ok(StateVector { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn is_compromised(&self, i: usize) -> bool {
        self.states[i] == NodeState::Compromised
    }

    pub fn compromised_count(&self) -> usize {
        self.states
            .iter()
            .filter(|s| **s == NodeState::Compromised)
            .count()
    }
}

/// Tag mixed into a master seed for initial-state sampling, so that
/// [`InitPolicy::Random`] draws never collide with replicate streams.
const INIT_STREAM_TAG: u64 = 0x1BAD_5EED_0F01_0CA5;

/// Seed for [`InitPolicy::realize`] on the graph at `graph_index` of an
/// experiment with the given master seed.
pub fn init_stream_seed(master_seed: u64, graph_index: u64) -> u64 {
    split(master_seed ^ INIT_STREAM_TAG, graph_index)
}

/// How to build the initial state for a graph of `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitPolicy {
    /// Every node compromised (the default; maximizes the chance of
    /// observing persistence in small systems).
    All,
    /// `k` distinct nodes compromised, drawn by a seeded partial
    /// Fisher-Yates shuffle (deterministic per seed).
    Random { k: usize },
    /// Exactly the listed nodes compromised.
    Nodes(Vec<usize>),
}

impl InitPolicy {
    pub fn realize(&self, n: usize, seed: u64) -> Result<StateVector> {
        match self {
            InitPolicy::All => Ok(StateVector::all_compromised(n)),
            InitPolicy::Random { k } => {
                if *k > n {
                    return Err(Error::invalid(format!(
                        "random init k = {k} exceeds node count {n}"
                    )));
                }
                let mut ids: Vec<usize> = (0..n).collect();
                let mut rng = SplitMix64::new(seed);
                for i in 0..*k {
                    let j = i + (rng.next_u64() % (n - i) as u64) as usize;
                    ids.swap(i, j);
                }
                StateVector::with_compromised(n, &ids[..*k])
            }
            InitPolicy::Nodes(nodes) => StateVector::with_compromised(n, nodes),
        }
    }
}

/// One simulation run: per-step compromised counts, ending at the horizon or
/// at extinction (compromised count 0 is absorbing, so the trace stops there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimTrace {
    pub seed: u64,
    /// `(step index, compromised count)`, step indices contiguous from 0.
    pub steps: Vec<(usize, usize)>,
    /// First step at which the count reached 0, if it did.
    pub extinction_step: Option<usize>,
}

/// Returns the step at which the trace went extinct, if it did.
pub fn extinction_time(trace: &SimTrace) -> Option<usize> {
    trace.extinction_step
}

/// Aggregate over replicate runs that share a master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub replicates: usize,
    /// Per-replicate extinction step, in replicate order.
    pub extinction_steps: Vec<Option<usize>>,
    /// Fraction of replicates still alive at the horizon.
    pub survival_fraction_at_horizon: f64,
    /// Mean compromised fraction at each step `0..=horizon` (extinct
    /// replicates contribute zero).
    pub mean_compromised_fraction: Vec<f64>,
}

impl EnsembleSummary {
    /// Aggregates traces in replicate order; `n` is the node count.
    pub fn from_traces(traces: &[SimTrace], n: usize, horizon: usize) -> Self {
        let replicates = traces.len();
        let extinction_steps: Vec<Option<usize>> =
            traces.iter().map(|t| t.extinction_step).collect();
        let survived = extinction_steps.iter().filter(|e| e.is_none()).count();
        let mut mean = vec![0.0f64; horizon + 1];
        if n > 0 && replicates > 0 {
            for trace in traces {
                for &(step, count) in &trace.steps {
                    mean[step] += count as f64;
                }
            }
            let scale = 1.0 / (n as f64 * replicates as f64);
            for m in &mut mean {
                *m *= scale;
            }
        }
        EnsembleSummary {
            replicates,
            extinction_steps,
            survival_fraction_at_horizon: if replicates == 0 {
                0.0
            } else {
                survived as f64 / replicates as f64
            },
            mean_compromised_fraction: mean,
        }
    }

    /// Mean extinction step over the replicates that went extinct, if any.
    pub fn mean_extinction_step(&self) -> Option<f64> {
        let ext: Vec<usize> = self.extinction_steps.iter().flatten().copied().collect();
        if ext.is_empty() {
            None
        } else {
            Some(ext.iter().sum::<usize>() as f64 / ext.len() as f64)
        }
    }
}

/// Runs one stochastic trace.
///
/// `init` must have exactly `g.node_count()` entries. The trace records the
/// compromised count at step 0 and after each synchronous update, stopping
/// early at extinction.
pub fn simulate(
    g: &Graph,
    params: DynamicsParams,
    init: &StateVector,
    horizon: usize,
    seed: u64,
) -> Result<SimTrace> {
    if init.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "initial state has {} entries but the graph has {} nodes",
            init.len(),
            g.node_count()
        )));
    }
    Ok(simulate_unchecked(g, params, init, horizon, seed))
}

/// Advances `state` by one synchronous step, consuming one draw per node in
/// ascending id. Returns the new compromised count.
fn advance(
    state: &mut Vec<bool>,
    next: &mut Vec<bool>,
    adj: &[Vec<usize>],
    params: DynamicsParams,
    rng: &mut SplitMix64,
) -> usize {
    for i in 0..state.len() {
        let u = rng.next_f64();
        if state[i] {
            next[i] = u >= params.beta;
        } else {
            let k = adj[i].iter().filter(|&&j| state[j]).count();
            // P(u >= (1-gamma)^k) = 1 - (1-gamma)^k
            next[i] = k > 0 && u >= (1.0 - params.gamma).powi(k as i32);
        }
    }
    std::mem::swap(state, next);
    state.iter().filter(|c| **c).count()
}

fn simulate_unchecked(
    g: &Graph,
    params: DynamicsParams,
    init: &StateVector,
    horizon: usize,
    seed: u64,
) -> SimTrace {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut rng = SplitMix64::new(seed);

    let mut state: Vec<bool> = init
        .states()
        .iter()
        .map(|s| *s == NodeState::Compromised)
        .collect();
    let mut count = state.iter().filter(|c| **c).count();
    let mut steps = vec![(0usize, count)];
    let mut extinction_step = if count == 0 { Some(0) } else { None };

    let mut next = vec![false; n];
    let mut step = 0usize;
    while extinction_step.is_none() && step < horizon {
        step += 1;
        count = advance(&mut state, &mut next, &adj, params, &mut rng);
        steps.push((step, count));
        if count == 0 {
            extinction_step = Some(step);
        }
    }

    SimTrace {
        seed,
        steps,
        extinction_step,
    }
}

/// Like [`simulate`] but returns the full per-step state history (index 0 is
/// the initial state). Same draw contract and therefore the exact same
/// trajectory as [`simulate`] for equal arguments.
pub fn simulate_states(
    g: &Graph,
    params: DynamicsParams,
    init: &StateVector,
    horizon: usize,
    seed: u64,
) -> Result<Vec<StateVector>> {
    if init.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "initial state has {} entries but the graph has {} nodes",
            init.len(),
            g.node_count()
        )));
    }
    let n = g.node_count();
    let adj = g.adjacency();
    let mut rng = SplitMix64::new(seed);
    let mut state: Vec<bool> = init
        .states()
        .iter()
        .map(|s| *s == NodeState::Compromised)
        .collect();
    let mut next = vec![false; n];
    let as_vector = |state: &[bool]| StateVector {
        states: state
            .iter()
            .map(|c| {
                if *c {
                    NodeState::Compromised
                } else {
                    NodeState::Secure
                }
            })
            .collect(),
    };

    let mut history = vec![as_vector(&state)];
    let mut count = state.iter().filter(|c| **c).count();
    let mut step = 0usize;
    while count > 0 && step < horizon {
        step += 1;
        count = advance(&mut state, &mut next, &adj, params, &mut rng);
        history.push(as_vector(&state));
    }
    Ok(history)
}

/// Runs `replicates` independent traces; replicate `r` is seeded with
/// `split(master_seed, r)`. Replicates execute in parallel but are
/// aggregated in replicate order, so the result does not depend on the
/// worker count.
pub fn run_replicate_traces(
    g: &Graph,
    params: DynamicsParams,
    init: &StateVector,
    horizon: usize,
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<SimTrace>> {
    if replicates == 0 {
        return Err(Error::invalid("replicates must be >= 1"));
    }
    if init.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "initial state has {} entries but the graph has {} nodes",
            init.len(),
            g.node_count()
        )));
    }
    Ok((0..replicates)
        .into_par_iter()
        .map(|r| simulate_unchecked(g, params, init, horizon, split(master_seed, r as u64)))
        .collect())
}

/// [`run_replicate_traces`] followed by aggregation.
pub fn run_replicates(
    g: &Graph,
    params: DynamicsParams,
    init: &StateVector,
    horizon: usize,
    replicates: usize,
    master_seed: u64,
) -> Result<EnsembleSummary> {
    let traces = run_replicate_traces(g, params, init, horizon, replicates, master_seed)?;
    Ok(EnsembleSummary::from_traces(
        &traces,
        g.node_count(),
        horizon,
    ))
}

/// Deterministic mean-field trajectory of per-node compromise probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldTrace {
    /// `p(0), p(1), ...` including the initial vector; entries in `[0, 1]`.
    pub steps: Vec<Vec<f64>>,
    /// Whether the fixed-point stop criterion was met before the horizon.
    pub converged: bool,
    /// Sum of the last probability vector.
    pub final_total: f64,
}

impl MeanFieldTrace {
    pub fn final_probabilities(&self) -> &[f64] {
        self.steps.last().expect("trace always holds p(0)")
    }
}

/// Iterates `p_i <- (1-beta) p_i + (1 - p_i)(1 - prod_{j in N(i)} (1 - gamma p_j))`
/// from `p0`, stopping early once `max_i |p_i(t+1) - p_i(t)| <= fixed_point_tol`.
///
/// The linearization at zero has spectral radius `1 - beta + gamma lambda1`,
/// so totals decay geometrically exactly when `lambda1 < beta/gamma`.
pub fn mean_field_iterate(
    g: &Graph,
    params: DynamicsParams,
    p0: &[f64],
    horizon: usize,
    fixed_point_tol: f64,
) -> Result<MeanFieldTrace> {
    if p0.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "p0 has {} entries but the graph has {} nodes",
            p0.len(),
            g.node_count()
        )));
    }
    for (i, &p) in p0.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p0[{i}] = {p} outside [0, 1]")));
        }
    }
    if fixed_point_tol <= 0.0 || !fixed_point_tol.is_finite() {
        return Err(Error::invalid(format!(
            "fixed_point_tol must be > 0, got {fixed_point_tol}"
        )));
    }

    let n = g.node_count();
    let adj = g.adjacency();
    let mut steps = vec![p0.to_vec()];
    let mut converged = false;

    for _ in 0..horizon {
        let p = steps.last().expect("nonempty");
        let mut next = vec![0.0f64; n];
        let mut max_diff = 0.0f64;
        for i in 0..n {
            let mut survive = 1.0f64;
            for &j in &adj[i] {
                survive *= 1.0 - params.gamma * p[j];
            }
            let v = (1.0 - params.beta) * p[i] + (1.0 - p[i]) * (1.0 - survive);
            debug_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            let v = v.clamp(0.0, 1.0);
            max_diff = max_diff.max((v - p[i]).abs());
            next[i] = v;
        }
        steps.push(next);
        if max_diff <= fixed_point_tol {
            converged = true;
            break;
        }
    }

    let final_total = steps.last().expect("nonempty").iter().sum();
    Ok(MeanFieldTrace {
        steps,
        converged,
        final_total,
    })
}
