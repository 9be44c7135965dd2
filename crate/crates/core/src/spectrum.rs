//! Closed-form Jaynes-Cummings spectrum, ground-state identification
//! across coupling and detuning, and phase-diagram generation.
//!
//! Manifold n ≥ 1 couples {|e,n−1⟩, |g,n⟩} through a 2×2 block with
//! eigenvalues E_{n,±} = ω_c(n − 1/2) ± √(δ²/4 + n g²); the uncoupled
//! vacuum |g,0⟩ sits at −ω₀/2. The ground state hops |g,0⟩ → |1,−⟩ →
//! |2,−⟩ → … as g grows; at resonance the crossings are at
//! g_n = ω_c/(√(n+1) − √n).

use serde::Serialize;

use crate::model::ModelParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// One analytic JC level: the uncoupled vacuum or a dressed level of
/// manifold n with its 2-component eigenvector on {|e,n−1⟩, |g,n⟩}.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum JCEigenLevel {
    Vacuum {
        energy: f64,
    },
    Dressed {
        n: usize,
        branch: Branch,
        energy: f64,
        weight_e: f64,
        weight_g: f64,
    },
}

impl JCEigenLevel {
    pub fn energy(&self) -> f64 {
        match *self {
            JCEigenLevel::Vacuum { energy } => energy,
            JCEigenLevel::Dressed { energy, .. } => energy,
        }
    }

    /// Manifold label: 0 for |g,0⟩, n for |n,±⟩.
    pub fn manifold(&self) -> usize {
        match *self {
            JCEigenLevel::Vacuum { .. } => 0,
            JCEigenLevel::Dressed { n, .. } => n,
        }
    }
}

/// Eigenvector of the n-manifold block [[δ/2, g√n], [g√n, −δ/2]] for the
/// given branch, as (weight on |e,n−1⟩, weight on |g,n⟩), normalized.
fn dressed_weights(delta: f64, gn: f64, branch: Branch) -> (f64, f64) {
    let omega = (delta * delta / 4.0 + gn * gn).sqrt();
    if gn == 0.0 {
        // decoupled: the block is diagonal
        return match branch {
            Branch::Plus => {
                if delta >= 0.0 {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            }
            Branch::Minus => {
                if delta >= 0.0 {
                    (0.0, 1.0)
                } else {
                    (1.0, 0.0)
                }
            }
        };
    }
    match branch {
        Branch::Plus => {
            let v = (delta / 2.0 + omega, gn);
            let norm = (v.0 * v.0 + v.1 * v.1).sqrt();
            (v.0 / norm, v.1 / norm)
        }
        Branch::Minus => {
            let v = (-gn, delta / 2.0 + omega);
            let norm = (v.0 * v.0 + v.1 * v.1).sqrt();
            (v.0 / norm, v.1 / norm)
        }
    }
}

/// Analytic spectrum: |g,0⟩ plus both branches of manifolds 1..=n_max.
pub fn jc_levels(params: &ModelParams, n_max: usize) -> Vec<JCEigenLevel> {
    let delta = params.delta();
    let mut out = Vec::with_capacity(2 * n_max + 1);
    out.push(JCEigenLevel::Vacuum {
        energy: -params.omega_0 / 2.0,
    });
    for n in 1..=n_max {
        let gn = params.g * (n as f64).sqrt();
        let omega = (delta * delta / 4.0 + gn * gn).sqrt();
        let center = params.omega_c * (n as f64 - 0.5);
        for branch in [Branch::Minus, Branch::Plus] {
            let sign = if branch == Branch::Minus { -1.0 } else { 1.0 };
            let (we, wg) = dressed_weights(delta, gn, branch);
            out.push(JCEigenLevel::Dressed {
                n,
                branch,
                energy: center + sign * omega,
                weight_e: we,
                weight_g: wg,
            });
        }
    }
    out
}

/// Ground-state classification at one (δ, g) point. `delta` and `g` are
/// quoted in units of ω_c; `ground_label` is the manifold hosting the
/// ground state (0 for |g,0⟩) and `p_e` its TLS excited-state population.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhasePoint {
    pub delta: f64,
    pub g: f64,
    pub ground_label: usize,
    pub ground_energy: f64,
    pub p_e: f64,
    pub boundary: bool,
}

/// Degeneracy window for flagging a point as sitting on a phase boundary.
const BOUNDARY_EPS: f64 = 1e-9;

/// Identify the global energy minimum among |g,0⟩ and the |n,−⟩ levels.
/// Errors if the minimum lands on the n_max manifold (cutoff too small to
/// trust). Exact degeneracies resolve to the lower manifold and set the
/// boundary flag.
pub fn ground_state(params: &ModelParams, n_max: usize) -> Result<PhasePoint> {
    if n_max < 1 {
        return Err(Error::InvalidParams("n_max must be >= 1".to_owned()));
    }
    let delta = params.delta();
    let mut best_label = 0usize;
    let mut best_energy = -params.omega_0 / 2.0;
    let mut runner_up = f64::INFINITY;
    for n in 1..=n_max {
        let gn = params.g * (n as f64).sqrt();
        let e = params.omega_c * (n as f64 - 0.5) - (delta * delta / 4.0 + gn * gn).sqrt();
        if e < best_energy - BOUNDARY_EPS {
            runner_up = best_energy;
            best_energy = e;
            best_label = n;
        } else {
            runner_up = runner_up.min(e);
        }
    }
    if best_label == n_max {
        return Err(Error::NMaxBoundary(n_max));
    }
    let p_e = if best_label == 0 {
        0.0
    } else {
        let gn = params.g * (best_label as f64).sqrt();
        let (we, _) = dressed_weights(delta, gn, Branch::Minus);
        we * we
    };
    Ok(PhasePoint {
        delta: delta / params.omega_c,
        g: params.g / params.omega_c,
        ground_label: best_label,
        ground_energy: best_energy,
        p_e,
        boundary: (runner_up - best_energy).abs() <= BOUNDARY_EPS,
    })
}

/// Model at detuning δ and coupling g in units of ω_c = 1 (so ω₀ = 1 + δ),
/// with the modulation off; the phase diagram probes the ideal JC model.
pub fn jc_point(delta: f64, g: f64) -> Result<ModelParams> {
    ModelParams::new(1.0 + delta, 1.0, g, 0.0, 0.0)
}

/// Ground-state label over a (δ, g) grid; row-major over δ (outer), g
/// (inner). Cells where the label changes from the previous g are flagged
/// as boundary cells in addition to exact degeneracies.
pub fn phase_diagram(
    delta_grid: &[f64],
    g_grid: &[f64],
    n_max: usize,
) -> Result<Vec<Vec<PhasePoint>>> {
    let mut rows = Vec::with_capacity(delta_grid.len());
    for &delta in delta_grid {
        let mut row: Vec<PhasePoint> = Vec::with_capacity(g_grid.len());
        for &g in g_grid {
            let mut point = ground_state(&jc_point(delta, g)?, n_max)?;
            if let Some(prev) = row.last() {
                if prev.ground_label != point.ground_label {
                    point.boundary = true;
                }
            }
            row.push(point);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Resonant crossing g_n = ω_c/(√(n+1) − √n) where the ground state hops
/// from manifold n to n+1 (n = 0 meaning |g,0⟩ → |1,−⟩).
pub fn resonant_crossing(n: usize, omega_c: f64) -> f64 {
    let n = n as f64;
    omega_c / ((n + 1.0).sqrt() - n.sqrt())
}
