//! Spectral radius of the adjacency structure and the die-out threshold.
//!
//! The attack dies out when `lambda1 < beta/gamma`, where `lambda1` is the
//! largest adjacency eigenvalue. `lambda1` is computed by power iteration on
//! the shifted operator `A + I` from the all-ones start vector: for any graph
//! `A + I` has spectral radius `lambda1 + 1` with a nonnegative eigenvector,
//! the shift removes the bipartite `±lambda1` oscillation (paths, stars), and
//! the positive start vector never loses the dominant component, so the
//! iteration is deterministic and converges without an eigenvalue library.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default infinity-norm residual tolerance for power iteration.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration budget for power iteration.
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Default half-width of the Critical band around `beta/gamma = lambda1`.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-9;

/// Converged spectral-radius estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Largest adjacency eigenvalue estimate (non-negative).
    pub lambda1: f64,
    /// Matrix-vector products performed.
    pub iterations: usize,
    /// `max_i |(A+I)v - mu v|_i` at termination, `v` normalized to unit
    /// infinity norm.
    pub residual: f64,
}

/// Defense capability `beta` (per-node, per-step cure probability) and attack
/// capability `gamma` (per-edge, per-step compromise probability).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub beta: f64,
    pub gamma: f64,
}

impl DynamicsParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::invalid(format!(
                "beta must be in [0, 1], got {beta}"
            )));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!(
                "gamma must be in [0, 1], got {gamma}"
            )));
        }
        Ok(DynamicsParams { beta, gamma })
    }
}

/// Which side of the die-out threshold a system is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `beta/gamma - lambda1 > critical_tol`: attacks are eventually wiped out.
    DieOut,
    /// `beta/gamma - lambda1 < -critical_tol`: attacks cannot be wiped out.
    Persist,
    /// Within `critical_tol` of the threshold; no call is made.
    Critical,
}

/// Threshold comparison `lambda1` vs `beta/gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdVerdict {
    pub regime: Regime,
    pub lambda1: f64,
    /// `beta / gamma`.
    pub ratio: f64,
    /// `ratio - lambda1`; positive means die-out.
    pub margin: f64,
}

/// Computes the spectral radius of `g`'s adjacency matrix.
///
/// Power iteration on `A + I` from the all-ones vector, normalized to unit
/// infinity norm each step; converges when the infinity-norm residual drops
/// to `tol`. The reported `lambda1` is the converged eigenvalue of `A + I`
/// minus one. Deterministic. An edgeless or empty graph reports
/// `lambda1 = 0` immediately.
pub fn spectral_radius(g: &Graph, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::invalid(format!("tol must be > 0, got {tol}")));
    }
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return Ok(SpectralResult {
            lambda1: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }

    let adj = g.adjacency();
    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut mu = 1.0;
    let mut residual = f64::INFINITY;

    for it in 1..=max_iter {
        // w = (A + I) v
        for i in 0..n {
            let mut acc = v[i];
            for &j in &adj[i] {
                acc += v[j];
            }
            w[i] = acc;
        }
        // v is entrywise positive and nonzero, so mu = max_i w_i > 0.
        mu = w.iter().cloned().fold(0.0, f64::max);
        residual = v
            .iter()
            .zip(&w)
            .map(|(vi, wi)| (wi - mu * vi).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(SpectralResult {
                lambda1: mu - 1.0,
                iterations: it,
                residual,
            });
        }
        for i in 0..n {
            v[i] = w[i] / mu;
        }
    }

    Err(Error::Convergence {
        iterations: max_iter,
        estimate: mu - 1.0,
        residual,
    })
}

/// Compares `lambda1(g)` against `beta/gamma`.
///
/// Requires `gamma > 0` (with `gamma = 0` the ratio is undefined; attacks
/// then trivially die out, which the dynamics module reports directly).
/// Results within `critical_tol` of the threshold are reported as
/// [`Regime::Critical`] rather than forced to either side.
pub fn threshold_verdict(
    g: &Graph,
    params: DynamicsParams,
    critical_tol: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ThresholdVerdict> {
    if params.gamma <= 0.0 {
        return Err(Error::invalid("gamma must be > 0"));
    }
    if critical_tol < 0.0 || !critical_tol.is_finite() {
        return Err(Error::invalid(format!(
            "critical_tol must be >= 0, got {critical_tol}"
        )));
    }
    let spectral = spectral_radius(g, tol, max_iter)?;
    let ratio = params.beta / params.gamma;
    let margin = ratio - spectral.lambda1;
    let regime = if margin > critical_tol {
        Regime::DieOut
    } else if margin < -critical_tol {
        Regime::Persist
    } else {
        Regime::Critical
    };
    Ok(ThresholdVerdict {
        regime,
        lambda1: spectral.lambda1,
        ratio,
        margin,
    })
}

/// Standard sandwich bounds for the adjacency spectral radius:
/// `max(average degree, sqrt(max degree)) <= lambda1 <= max degree`.
pub fn lambda1_bounds(g: &Graph) -> (f64, f64) {
    let n = g.node_count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as f64;
    let avg_deg = 2.0 * g.edge_count() as f64 / n as f64;
    (avg_deg.max(max_deg.sqrt()), max_deg)
}
