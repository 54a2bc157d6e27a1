//! The central experiment: threshold verdicts for components vs their
//! composition, with attached simulation evidence and an emergence verdict.
//!
//! A property is emergent when the composed system has it and none of the
//! components do. Here the property is attack persistence: the report sets
//! `emergent = true` exactly when every component verdict is `DieOut` and
//! the composite verdict is `Persist`. The verdict comes from the spectral
//! inequality alone; ensemble statistics are attached as evidence but cannot
//! overturn it, because finite stochastic systems eventually go extinct in
//! every regime.

use serde::{Deserialize, Serialize};

use crate::dynamics::{init_stream_seed, run_replicates, EnsembleSummary, InitPolicy};
use crate::error::{Error, Result};
use crate::graph::{bridge_interconnect, disjoint_union, full_interconnect, Graph};
use crate::spectral::{threshold_verdict, DynamicsParams, Regime, ThresholdVerdict};

/// How components are interconnected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionOp {
    /// Disjoint union: no interaction.
    Union,
    /// Full interconnection: every cross pair becomes an edge.
    Join,
    /// Exactly the listed cross edges (two components only).
    Bridge,
}

impl std::fmt::Display for CompositionOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CompositionOp::Union => "union",
            CompositionOp::Join => "join",
            CompositionOp::Bridge => "bridge",
        })
    }
}

/// Simulation settings for the attached Monte Carlo evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub horizon: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub init: InitPolicy,
}

/// Full configuration for [`evaluate_emergence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergenceConfig {
    pub params: DynamicsParams,
    pub critical_tol: f64,
    pub spectral_tol: f64,
    pub max_iter: usize,
    pub sim: SimSettings,
}

/// Verdict and evidence for one system (a component or the composite).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub nodes: usize,
    pub edges: usize,
    pub lambda1: f64,
    pub verdict: ThresholdVerdict,
    pub ensemble: EnsembleSummary,
}

/// Machine-checkable record of one emergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergenceReport {
    pub components: Vec<SystemReport>,
    pub composite: SystemReport,
    pub composition_op: CompositionOp,
    pub params: DynamicsParams,
    pub emergent: bool,
    pub narrative: String,
}

fn report_system(g: &Graph, cfg: &EmergenceConfig, graph_index: u64) -> Result<SystemReport> {
    let verdict = threshold_verdict(
        g,
        cfg.params,
        cfg.critical_tol,
        cfg.spectral_tol,
        cfg.max_iter,
    )?;
    let init = cfg.sim.init.realize(
        g.node_count(),
        init_stream_seed(cfg.sim.master_seed, graph_index),
    )?;
    let ensemble = run_replicates(
        g,
        cfg.params,
        &init,
        cfg.sim.horizon,
        cfg.sim.replicates,
        cfg.sim.master_seed,
    )?;
    Ok(SystemReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        lambda1: verdict.lambda1,
        verdict,
        ensemble,
    })
}

/// Builds the composition of `components` under `op`.
pub fn compose(
    components: &[Graph],
    op: CompositionOp,
    bridge_edges: Option<&[(usize, usize)]>,
) -> Result<Graph> {
    if components.len() < 2 {
        return Err(Error::invalid("composition requires at least 2 components"));
    }
    match op {
        CompositionOp::Union => Ok(components[1..]
            .iter()
            .fold(components[0].clone(), |acc, g| disjoint_union(&acc, g))),
        CompositionOp::Join => Ok(components[1..]
            .iter()
            .fold(components[0].clone(), |acc, g| full_interconnect(&acc, g))),
        CompositionOp::Bridge => {
            let edges = bridge_edges
                .ok_or_else(|| Error::invalid("bridge composition requires a bridge edge list"))?;
            if components.len() != 2 {
                return Err(Error::invalid(
                    "bridge composition supports exactly 2 components",
                ));
            }
            bridge_interconnect(&components[0], &components[1], edges)
        }
    }
}

/// Evaluates every component and the composition, attaches ensemble evidence,
/// and issues the emergence verdict. Deterministic for a fixed
/// `cfg.sim.master_seed`.
pub fn evaluate_emergence(
    components: &[Graph],
    op: CompositionOp,
    bridge_edges: Option<&[(usize, usize)]>,
    cfg: &EmergenceConfig,
) -> Result<EmergenceReport> {
    if components.len() < 2 {
        return Err(Error::invalid(
            "emergence evaluation requires at least 2 components",
        ));
    }
    let composite_graph = compose(components, op, bridge_edges)?;

    let mut component_reports = Vec::with_capacity(components.len());
    for (i, g) in components.iter().enumerate() {
        component_reports.push(report_system(g, cfg, i as u64)?);
    }
    let composite = report_system(&composite_graph, cfg, components.len() as u64)?;

    let all_die_out = component_reports
        .iter()
        .all(|r| r.verdict.regime == Regime::DieOut);
    let emergent = all_die_out && composite.verdict.regime == Regime::Persist;
    let narrative = narrate(&component_reports, &composite, op, emergent);

    Ok(EmergenceReport {
        components: component_reports,
        composite,
        composition_op: op,
        params: cfg.params,
        emergent,
        narrative,
    })
}

fn narrate(
    components: &[SystemReport],
    composite: &SystemReport,
    op: CompositionOp,
    emergent: bool,
) -> String {
    let ratio = composite.verdict.ratio;
    if emergent {
        return format!(
            "emergent: attacks die out in each of the {} components (every lambda1 < {ratio} = beta/gamma) \
             yet persist in the {op} composite (lambda1 = {} > {ratio})",
            components.len(),
            composite.lambda1,
        );
    }
    if let Some((i, r)) = components
        .iter()
        .enumerate()
        .find(|(_, r)| r.verdict.regime != Regime::DieOut)
    {
        return format!(
            "not emergent: component {i} is already {:?} (lambda1 = {}, beta/gamma = {ratio}), \
             so persistence in the {op} composite would not be a new property",
            r.verdict.regime, r.lambda1,
        );
    }
    format!(
        "not emergent: all components die out and the {op} composite is {:?} \
         (lambda1 = {} vs beta/gamma = {ratio})",
        composite.verdict.regime, composite.lambda1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{DEFAULT_CRITICAL_TOL, DEFAULT_MAX_ITER, DEFAULT_TOL};

    fn cfg(beta: f64, gamma: f64, seed: u64) -> EmergenceConfig {
        EmergenceConfig {
            params: DynamicsParams::new(beta, gamma).unwrap(),
            critical_tol: DEFAULT_CRITICAL_TOL,
            spectral_tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            sim: SimSettings {
                horizon: 200,
                replicates: 20,
                master_seed: seed,
                init: InitPolicy::All,
            },
        }
    }

    #[test]
    fn join_of_two_k6_is_emergent() {
        let k6 = Graph::complete(6).unwrap();
        let report = evaluate_emergence(
            &[k6.clone(), k6],
            CompositionOp::Join,
            None,
            &cfg(0.4, 0.05, 42),
        )
        .unwrap();
        assert!(report.emergent);
        for c in &report.components {
            assert_eq!(c.verdict.regime, Regime::DieOut);
            assert!((c.lambda1 - 5.0).abs() <= 1e-8);
        }
        assert_eq!(report.composite.verdict.regime, Regime::Persist);
        assert!((report.composite.lambda1 - 11.0).abs() <= 1e-8);
        assert_eq!(report.composite.nodes, 12);
        assert!(report.narrative.starts_with("emergent"));
    }

    #[test]
    fn union_preserves_die_out() {
        let k6 = Graph::complete(6).unwrap();
        let report = evaluate_emergence(
            &[k6.clone(), k6],
            CompositionOp::Union,
            None,
            &cfg(0.4, 0.05, 42),
        )
        .unwrap();
        assert!(!report.emergent);
        assert_eq!(report.composite.verdict.regime, Regime::DieOut);
        assert!((report.composite.lambda1 - 5.0).abs() <= 1e-8);
    }

    #[test]
    fn already_persistent_components_are_not_emergent() {
        let k12 = Graph::complete(12).unwrap();
        let report = evaluate_emergence(
            &[k12.clone(), k12],
            CompositionOp::Join,
            None,
            &cfg(0.4, 0.05, 42),
        )
        .unwrap();
        assert!(!report.emergent);
        assert!(report.narrative.contains("already Persist"));
    }

    #[test]
    fn bridge_requires_edge_list_and_two_components() {
        let k3 = Graph::complete(3).unwrap();
        let err = evaluate_emergence(
            &[k3.clone(), k3.clone()],
            CompositionOp::Bridge,
            None,
            &cfg(0.4, 0.05, 1),
        )
        .unwrap_err();
        assert_eq!(err.category(), "invalid-argument");

        let err = evaluate_emergence(
            &[k3.clone(), k3.clone(), k3.clone()],
            CompositionOp::Bridge,
            Some(&[(0, 0)]),
            &cfg(0.4, 0.05, 1),
        )
        .unwrap_err();
        assert_eq!(err.category(), "invalid-argument");

        let report = evaluate_emergence(
            &[k3.clone(), k3],
            CompositionOp::Bridge,
            Some(&[(0, 0)]),
            &cfg(0.4, 0.05, 1),
        )
        .unwrap();
        assert_eq!(report.composite.edges, 7);
    }

    #[test]
    fn fewer_than_two_components_rejected() {
        let k3 = Graph::complete(3).unwrap();
        assert!(evaluate_emergence(&[k3], CompositionOp::Join, None, &cfg(0.4, 0.05, 1)).is_err());
    }

    #[test]
    fn composite_node_count_is_component_sum() {
        let a = Graph::erdos_renyi(7, 0.4, 1).unwrap();
        let b = Graph::star(5).unwrap();
        let c = Graph::path(4).unwrap();
        for op in [CompositionOp::Union, CompositionOp::Join] {
            let report = evaluate_emergence(
                &[a.clone(), b.clone(), c.clone()],
                op,
                None,
                &cfg(0.4, 0.05, 9),
            )
            .unwrap();
            assert_eq!(report.composite.nodes, 7 + 5 + 4);
            // join never lowers lambda1 below the best component
            if op == CompositionOp::Join {
                let max_comp = report
                    .components
                    .iter()
                    .map(|r| r.lambda1)
                    .fold(0.0, f64::max);
                assert!(report.composite.lambda1 >= max_comp - 1e-8);
            }
        }
    }

    #[test]
    fn join_of_completes_has_summed_eigenvalue() {
        // lambda1 of a join of complete graphs is (sum of sizes) - 1
        let parts = [
            Graph::complete(3).unwrap(),
            Graph::complete(5).unwrap(),
            Graph::complete(4).unwrap(),
        ];
        let report =
            evaluate_emergence(&parts, CompositionOp::Join, None, &cfg(0.4, 0.05, 2)).unwrap();
        assert!((report.composite.lambda1 - 11.0).abs() <= 1e-8);
        assert_eq!(report.composite.nodes, 12);
    }

    #[test]
    fn report_is_deterministic_and_round_trips() {
        let k6 = Graph::complete(6).unwrap();
        let config = cfg(0.4, 0.05, 7);
        let a = evaluate_emergence(
            &[k6.clone(), k6.clone()],
            CompositionOp::Join,
            None,
            &config,
        )
        .unwrap();
        let b = evaluate_emergence(&[k6.clone(), k6], CompositionOp::Join, None, &config).unwrap();
        assert_eq!(a, b);

        let json = serde_json::to_string(&a).unwrap();
        let back: EmergenceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn critical_blocks_emergence() {
        // K_11 with beta/gamma = 10 sits exactly on the threshold
        let k11 = Graph::complete(11).unwrap();
        let k6 = Graph::complete(6).unwrap();
        let mut config = cfg(0.5, 0.05, 3);
        config.critical_tol = 1e-6;
        let report = evaluate_emergence(&[k6, k11], CompositionOp::Join, None, &config).unwrap();
        assert_eq!(report.components[1].verdict.regime, Regime::Critical);
        assert!(!report.emergent);
    }
}
