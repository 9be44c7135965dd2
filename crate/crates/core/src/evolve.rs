//! Fixed-step RK4 propagation of i d|ψ⟩/dt = H(t)|ψ⟩ on a time grid.
//!
//! The step is constrained so the fastest phase in the generator is
//! resolved; the norm is monitored and never silently renormalized —
//! drift beyond budget is an error, because the fidelity claims this
//! crate exists to check are accuracy-sensitive. Local error is audited
//! by step-doubling on a deterministic pseudo-random subset of steps.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::hamiltonian::{FrameLabel, TimeDependentHamiltonian};
use crate::hilbert::{inner_product, HilbertDims, QuantumState, C_ONE, C_ZERO};
use crate::model::ModelParams;
use crate::{Error, Result};

/// Norm-squared drift budget over a full trajectory.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Fidelity upper slack: F must stay within [0, 1 + this].
pub const FIDELITY_SLACK: f64 = 1e-9;
/// Default integration substeps per period of the fastest phase.
const STEPS_PER_CYCLE: f64 = 200.0;
/// Number of step-doubling audit points per run.
const AUDIT_POINTS: usize = 16;

/// Propagation grid and accuracy targets.
#[derive(Debug, Clone, Copy)]
pub struct PropagationConfig {
    pub t_start: f64,
    pub t_end: f64,
    /// Base step; the actual step is span/ceil(span/dt) ≤ dt.
    pub dt: f64,
    /// Record every k-th step (the final step is always recorded).
    pub sampling_stride: usize,
    /// Target local error per step, audited by step-doubling.
    pub tolerance: f64,
    /// Keep full states at every sample (record-only otherwise).
    pub retain_states: bool,
}

impl PropagationConfig {
    /// Config with the step derived from the generator's fastest phase.
    pub fn for_hamiltonian(h: &TimeDependentHamiltonian, t_start: f64, t_end: f64) -> Self {
        Self {
            t_start,
            t_end,
            dt: suggested_dt(h),
            sampling_stride: 1,
            tolerance: 1e-8,
            retain_states: false,
        }
    }

    pub fn validate(&self, params: &ModelParams, dims: HilbertDims) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt > 0.0) {
            return fail(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.t_end > self.t_start) {
            return fail(format!(
                "t_end ({}) must exceed t_start ({})",
                self.t_end, self.t_start
            ));
        }
        if self.sampling_stride < 1 {
            return fail("sampling_stride must be >= 1".to_owned());
        }
        if !(self.tolerance > 0.0) {
            return fail("tolerance must be > 0".to_owned());
        }
        let bound = spec_dt_bound(params, dims);
        if self.dt > bound {
            return fail(format!(
                "dt = {:.3e} exceeds the resolution bound {:.3e} \
                 (1/50 of the fastest problem period)",
                self.dt, bound
            ));
        }
        Ok(())
    }
}

/// Hard upper bound on dt: (1/50)·min(2π/ν_eff, 2π/ω₀, 2π/ω_c, π/(g√N_c))
/// with ν_eff = max(ν, ω₀).
pub fn spec_dt_bound(params: &ModelParams, dims: HilbertDims) -> f64 {
    let nu_eff = params.nu.max(params.omega_0);
    let mut m = (TAU / nu_eff).min(TAU / params.omega_0).min(TAU / params.omega_c);
    if params.g > 0.0 {
        m = m.min(std::f64::consts::PI / (params.g * (dims.fock_cutoff() as f64).sqrt()));
    }
    m / 50.0
}

/// Step small enough to resolve both the coefficient oscillations and the
/// spectral radius of the generator in its frame.
pub fn suggested_dt(h: &TimeDependentHamiltonian) -> f64 {
    let p = h.params();
    let dims = h.dims();
    let nc = dims.fock_cutoff() as f64;
    let coupling = 2.0 * p.g * (nc + 1.0).sqrt();
    let mut f_max = p
        .omega_0
        .max(p.omega_c)
        .max(p.nu)
        .max(p.delta().abs())
        .max(p.omega_sum() + 2.0 * p.xi * p.nu)
        .max(coupling);
    match h.label() {
        FrameLabel::Lab => {
            f_max = f_max.max(p.omega_0 / 2.0 + nc * (p.omega_c + p.xi * p.nu) + coupling);
        }
        FrameLabel::RabiStatic | FrameLabel::JcStatic => {
            f_max = f_max.max(p.omega_0 / 2.0 + nc * p.omega_c + coupling);
        }
        _ => {}
    }
    (TAU / (STEPS_PER_CYCLE * f_max)).min(spec_dt_bound(p, dims))
}

/// Per-sample observable records.
#[derive(Debug, Clone, Default)]
pub struct Records {
    pub norm_sq: Vec<f64>,
    pub norm_sq_target: Option<Vec<f64>>,
    pub fidelity: Option<Vec<f64>>,
}

/// Time grid plus per-sample records; full states retained on request.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Option<Vec<QuantumState>>,
    pub target_states: Option<Vec<QuantumState>>,
    pub records: Records,
    pub final_state: QuantumState,
    pub final_target_state: Option<QuantumState>,
}

struct Rk4Stepper<'a> {
    h: &'a TimeDependentHamiltonian,
    is_static: bool,
    h_start: DMatrix<Complex64>,
    h_mid: DMatrix<Complex64>,
    h_end: DMatrix<Complex64>,
    cached_end_t: f64,
    k1: DVector<Complex64>,
    k2: DVector<Complex64>,
    k3: DVector<Complex64>,
    k4: DVector<Complex64>,
    tmp: DVector<Complex64>,
}

impl<'a> Rk4Stepper<'a> {
    fn new(h: &'a TimeDependentHamiltonian) -> Self {
        let d = h.dims().dim();
        let mut s = Self {
            h,
            is_static: h.is_effectively_static(),
            h_start: DMatrix::zeros(d, d),
            h_mid: DMatrix::zeros(d, d),
            h_end: DMatrix::zeros(d, d),
            cached_end_t: f64::NAN,
            k1: DVector::zeros(d),
            k2: DVector::zeros(d),
            k3: DVector::zeros(d),
            k4: DVector::zeros(d),
            tmp: DVector::zeros(d),
        };
        if s.is_static {
            s.h.eval_into(0.0, &mut s.h_start);
        }
        s
    }

    /// One RK4 step of i y' = H y, in place.
    fn step(&mut self, t: f64, dt: f64, y: &mut DVector<Complex64>) {
        let minus_i = Complex64::new(0.0, -1.0);
        if self.is_static {
            Self::stages(
                &self.h_start,
                &self.h_start,
                &self.h_start,
                dt,
                y,
                &mut self.k1,
                &mut self.k2,
                &mut self.k3,
                &mut self.k4,
                &mut self.tmp,
                minus_i,
            );
            return;
        }
        if self.cached_end_t.to_bits() == t.to_bits() {
            std::mem::swap(&mut self.h_start, &mut self.h_end);
        } else {
            self.h.eval_into(t, &mut self.h_start);
        }
        self.h.eval_into(t + dt / 2.0, &mut self.h_mid);
        self.h.eval_into(t + dt, &mut self.h_end);
        self.cached_end_t = t + dt;
        Self::stages(
            &self.h_start,
            &self.h_mid,
            &self.h_end,
            dt,
            y,
            &mut self.k1,
            &mut self.k2,
            &mut self.k3,
            &mut self.k4,
            &mut self.tmp,
            minus_i,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn stages(
        h0: &DMatrix<Complex64>,
        hm: &DMatrix<Complex64>,
        h1: &DMatrix<Complex64>,
        dt: f64,
        y: &mut DVector<Complex64>,
        k1: &mut DVector<Complex64>,
        k2: &mut DVector<Complex64>,
        k3: &mut DVector<Complex64>,
        k4: &mut DVector<Complex64>,
        tmp: &mut DVector<Complex64>,
        minus_i: Complex64,
    ) {
        let half = Complex64::new(dt / 2.0, 0.0);
        let full = Complex64::new(dt, 0.0);
        k1.gemv(minus_i, h0, y, C_ZERO);
        tmp.copy_from(y);
        tmp.axpy(half, k1, C_ONE);
        k2.gemv(minus_i, hm, tmp, C_ZERO);
        tmp.copy_from(y);
        tmp.axpy(half, k2, C_ONE);
        k3.gemv(minus_i, hm, tmp, C_ZERO);
        tmp.copy_from(y);
        tmp.axpy(full, k3, C_ONE);
        k4.gemv(minus_i, h1, tmp, C_ZERO);
        let w = Complex64::new(dt / 6.0, 0.0);
        y.axpy(w, k1, C_ONE);
        y.axpy(w * 2.0, k2, C_ONE);
        y.axpy(w * 2.0, k3, C_ONE);
        y.axpy(w, k4, C_ONE);
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic audit subset: up to AUDIT_POINTS distinct step indices.
fn audit_steps(n_steps: usize) -> Vec<usize> {
    let mut state = 0x5eed_c0de_u64;
    let mut picks: Vec<usize> = (0..AUDIT_POINTS.min(n_steps))
        .map(|_| (splitmix64(&mut state) % n_steps as u64) as usize)
        .collect();
    picks.sort_unstable();
    picks.dedup();
    picks
}

struct Run<'a> {
    steppers: Vec<Rk4Stepper<'a>>,
    states: Vec<DVector<Complex64>>,
}

fn norm_drift_error(drift: f64, dt: f64) -> Error {
    Error::AccuracyFailure {
        what: format!("norm-squared drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:.0e}"),
        dt,
        suggested_dt: dt / 2.0,
    }
}

struct RawRun {
    times: Vec<f64>,
    sampled: Vec<Vec<QuantumState>>,
    norms: Vec<Vec<f64>>,
    fids: Vec<Vec<f64>>,
    finals: Vec<QuantumState>,
}

fn propagate_impl(
    hs: &[&TimeDependentHamiltonian],
    psi0: &QuantumState,
    cfg: &PropagationConfig,
) -> Result<RawRun> {
    let dims = hs[0].dims();
    for h in hs {
        if h.dims() != dims || psi0.dims() != dims {
            return Err(Error::DimensionMismatch {
                left: h.dims().dim(),
                right: psi0.dims().dim(),
            });
        }
        cfg.validate(h.params(), dims)?;
    }
    let norm0 = psi0.norm_sq();
    if (norm0 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "initial state not normalized: norm^2 = {norm0}"
        )));
    }

    let span = cfg.t_end - cfg.t_start;
    let n_steps = (span / cfg.dt).ceil().max(1.0) as usize;
    let dt = span / n_steps as f64;
    let audits = audit_steps(n_steps);
    let mut next_audit = 0usize;

    let mut run = Run {
        steppers: hs.iter().map(|h| Rk4Stepper::new(h)).collect(),
        states: vec![psi0.amplitudes().clone(); hs.len()],
    };

    let mut times = Vec::new();
    let mut sampled: Vec<Vec<QuantumState>> = vec![Vec::new(); hs.len()];
    let mut norms: Vec<Vec<f64>> = vec![Vec::new(); hs.len()];
    let mut fids: Vec<Vec<f64>> = Vec::new();
    if hs.len() == 2 {
        fids.push(Vec::new());
    }

    let mut record =
        |k: usize, run: &Run, times: &mut Vec<f64>, sampled: &mut Vec<Vec<QuantumState>>,
         norms: &mut Vec<Vec<f64>>, fids: &mut Vec<Vec<f64>>|
         -> Result<()> {
            let t = cfg.t_start + k as f64 * dt;
            times.push(t);
            for (s, y) in run.states.iter().enumerate() {
                let n2 = y.norm_squared();
                if (n2 - 1.0).abs() > NORM_DRIFT_LIMIT {
                    return Err(norm_drift_error((n2 - 1.0).abs(), dt));
                }
                norms[s].push(n2);
                if cfg.retain_states {
                    sampled[s].push(QuantumState::from_amplitudes(y.clone(), dims)?);
                }
            }
            if run.states.len() == 2 {
                let f = run.states[1].dotc(&run.states[0]).norm_sqr();
                if !(-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(&f) {
                    return Err(Error::AccuracyFailure {
                        what: format!("fidelity {f} outside [0, 1+{FIDELITY_SLACK:.0e}]"),
                        dt,
                        suggested_dt: dt / 2.0,
                    });
                }
                fids[0].push(f);
            }
            Ok(())
        };

    record(0, &run, &mut times, &mut sampled, &mut norms, &mut fids)?;

    for k in 0..n_steps {
        let t = cfg.t_start + k as f64 * dt;
        let audit_now = next_audit < audits.len() && audits[next_audit] == k;
        if audit_now {
            next_audit += 1;
            while next_audit < audits.len() && audits[next_audit] == k {
                next_audit += 1;
            }
        }
        for (stepper, y) in run.steppers.iter_mut().zip(run.states.iter_mut()) {
            if audit_now {
                // step-doubling estimate of this step's local error
                let mut half = y.clone();
                stepper.step(t, dt / 2.0, &mut half);
                stepper.step(t + dt / 2.0, dt / 2.0, &mut half);
                stepper.step(t, dt, y);
                let err = (&*y - &half).norm();
                if err > cfg.tolerance {
                    return Err(Error::AccuracyFailure {
                        what: format!(
                            "step-doubling local error {err:.3e} exceeds tolerance {:.3e} at t = {t:.6}",
                            cfg.tolerance
                        ),
                        dt,
                        suggested_dt: dt / 2.0,
                    });
                }
            } else {
                stepper.step(t, dt, y);
            }
        }
        if (k + 1) % cfg.sampling_stride == 0 || k + 1 == n_steps {
            record(k + 1, &run, &mut times, &mut sampled, &mut norms, &mut fids)?;
        }
    }

    let finals = run
        .states
        .into_iter()
        .map(|y| QuantumState::from_amplitudes(y, dims))
        .collect::<Result<Vec<_>>>()?;
    Ok(RawRun {
        times,
        sampled,
        norms,
        fids,
        finals,
    })
}

/// Propagate |ψ₀⟩ under H on [t_start, t_end].
pub fn propagate(
    h: &TimeDependentHamiltonian,
    psi0: &QuantumState,
    cfg: &PropagationConfig,
) -> Result<Trajectory> {
    let mut raw = propagate_impl(&[h], psi0, cfg)?;
    let states = cfg.retain_states.then(|| std::mem::take(&mut raw.sampled[0]));
    Ok(Trajectory {
        times: raw.times,
        states,
        target_states: None,
        records: Records {
            norm_sq: std::mem::take(&mut raw.norms[0]),
            norm_sq_target: None,
            fidelity: None,
        },
        final_state: raw.finals.remove(0),
        final_target_state: None,
    })
}

/// Co-propagate the exact and target states on one grid, recording
/// F(t) = |⟨φ(t)|ψ(t)⟩|² per sample.
pub fn propagate_pair(
    h_exact: &TimeDependentHamiltonian,
    h_target: &TimeDependentHamiltonian,
    psi0: &QuantumState,
    cfg: &PropagationConfig,
) -> Result<Trajectory> {
    let mut raw = propagate_impl(&[h_exact, h_target], psi0, cfg)?;
    let (states, target_states) = if cfg.retain_states {
        let target = raw.sampled.pop();
        let exact = raw.sampled.pop();
        (exact, target)
    } else {
        (None, None)
    };
    let final_target = raw.finals.pop().expect("two states");
    let final_state = raw.finals.pop().expect("two states");
    Ok(Trajectory {
        times: raw.times,
        states,
        target_states,
        records: Records {
            norm_sq: std::mem::take(&mut raw.norms[0]),
            norm_sq_target: Some(std::mem::take(&mut raw.norms[1])),
            fidelity: Some(std::mem::take(&mut raw.fids[0])),
        },
        final_state,
        final_target_state: Some(final_target),
    })
}

/// Exact closed-form evolution under H_JC^I by 2×2 diagonalization per
/// excitation manifold (generalized Rabi frequency √(δ²/4 + n g²) in
/// manifold n); |g,0⟩ and the unpaired top state |e,N_c⟩ are stationary.
pub fn analytic_jc_evolution(
    params: &ModelParams,
    psi0: &QuantumState,
    t: f64,
) -> Result<QuantumState> {
    use crate::hilbert::QubitLevel::{Excited, Ground};
    let dims = psi0.dims();
    let nc = dims.fock_cutoff();
    let delta = params.delta();
    let g = params.g;
    let mut out = psi0.clone();
    for n in 1..=nc {
        let ie = dims.encode(Excited, n - 1)?;
        let ig = dims.encode(Ground, n)?;
        let gn = g * (n as f64).sqrt();
        let omega = (delta * delta / 4.0 + gn * gn).sqrt();
        let (cos_t, sinc) = if omega < 1e-300 {
            (1.0, t) // sin(Ωt)/Ω → t
        } else {
            ((omega * t).cos(), (omega * t).sin() / omega)
        };
        let a_e = psi0.amplitudes()[ie];
        let a_g = psi0.amplitudes()[ig];
        let diag = Complex64::new(cos_t, -delta / 2.0 * sinc);
        let off = Complex64::new(0.0, -gn * sinc);
        let half_phase = Complex64::new(0.0, delta * t / 2.0).exp();
        out.amplitudes_mut()[ie] = half_phase * (diag * a_e + off * a_g);
        out.amplitudes_mut()[ig] = half_phase.conj() * (off * a_e + diag.conj() * a_g);
    }
    Ok(out)
}

/// |⟨a|b⟩|², bounds-checked.
pub fn state_fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr())
}
