//! Every Hamiltonian of the model as a time-dependent matrix generator.
//!
//! Static pieces: the Rabi Hamiltonian ω₀/2·σ_z + ω_c·a†a + g(σ₊+σ₋)(a+a†),
//! its Jaynes-Cummings part (rotating-wave coupling only) and the
//! counter-rotating remainder. Modulated pieces: the lab-frame H(t) with
//! ω_a(t) = ω₀ + ξν cos(νt), ω_c(t) = ω_c + ξν cos(νt), and the rotating
//! frame obtained from the diagonal unitary
//! exp{−i[ω_c t + ξ sin(νt)]a†a − i[ω₀ t + ξ sin(νt)]σ_z/2}, in which
//!
//!   H₁(t) = g(σ₊a e^{iδt} + h.c.) + g(σ₊a† e^{i(ω₀+ω_c)t} e^{i2ξ sin(νt)} + h.c.)
//!
//! with δ = ω₀ − ω_c. The counter-rotating remainder keeps its exact
//! closed form here; the Jacobi-Anger sideband truncation lives only in
//! the analysis module, so dynamics measure RWA quality instead of
//! assuming it.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hilbert::{build_elementary_ops, HilbertDims, OperatorMatrix};
use crate::model::ModelParams;

/// Which frame/model a generator represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameLabel {
    Lab,
    Rotating,
    JcInteraction,
    CrOnly,
    RabiStatic,
    JcStatic,
}

/// Scalar coefficient c(t) multiplying a constant matrix block.
#[derive(Debug, Clone, Copy)]
enum Coeff {
    /// amp · cos(freq · t), real.
    CosWave { amp: f64, freq: f64 },
    /// exp{i[linear·t + sin_amp·sin(sin_freq·t)]}.
    ExpPhase {
        linear: f64,
        sin_amp: f64,
        sin_freq: f64,
    },
}

impl Coeff {
    fn eval(&self, t: f64) -> Complex64 {
        match *self {
            Coeff::CosWave { amp, freq } => Complex64::new(amp * (freq * t).cos(), 0.0),
            Coeff::ExpPhase {
                linear,
                sin_amp,
                sin_freq,
            } => {
                let phase = wrap_phase(linear * t) + sin_amp * (sin_freq * t).sin();
                Complex64::new(phase.cos(), phase.sin())
            }
        }
    }

    fn is_constant(&self) -> bool {
        match *self {
            Coeff::CosWave { amp, freq } => amp == 0.0 || freq == 0.0,
            Coeff::ExpPhase {
                linear,
                sin_amp,
                sin_freq,
            } => linear == 0.0 && (sin_amp == 0.0 || sin_freq == 0.0),
        }
    }
}

/// Reduce a linear phase modulo 2π before trigonometric evaluation; the
/// time argument is absolute and low-frequency runs can reach large ν·t
/// products.
fn wrap_phase(x: f64) -> f64 {
    if x.abs() > 1e6 {
        x % TAU
    } else {
        x
    }
}

/// One time-dependent term: coefficient × sparse constant block.
#[derive(Debug, Clone)]
struct Term {
    coeff: Coeff,
    entries: Vec<(usize, usize, Complex64)>,
}

/// Hermitian time-dependent generator H(t) = static + Σ_k c_k(t)·M_k,
/// where the M_k come in adjoint pairs so every evaluation is Hermitian.
#[derive(Debug, Clone)]
pub struct TimeDependentHamiltonian {
    label: FrameLabel,
    params: ModelParams,
    dims: HilbertDims,
    static_part: DMatrix<Complex64>,
    terms: Vec<Term>,
    /// Evaluation maps t → time_offset + time_scale·t, then multiplies by
    /// overall_sign; identity by default, used by [`Self::reversed`].
    time_offset: f64,
    time_scale: f64,
    overall_sign: f64,
}

impl TimeDependentHamiltonian {
    fn new(
        label: FrameLabel,
        params: ModelParams,
        dims: HilbertDims,
        static_part: DMatrix<Complex64>,
        terms: Vec<Term>,
    ) -> Self {
        Self {
            label,
            params,
            dims,
            static_part,
            terms,
            time_offset: 0.0,
            time_scale: 1.0,
            overall_sign: 1.0,
        }
    }

    pub fn label(&self) -> FrameLabel {
        self.label
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dims(&self) -> HilbertDims {
        self.dims
    }

    /// True when every coefficient is time-independent (the evaluation at
    /// t = 0 is valid for all t); the propagator uses this to skip
    /// re-evaluation.
    pub(crate) fn is_effectively_static(&self) -> bool {
        self.terms.iter().all(|term| term.coeff.is_constant())
    }

    /// Evaluate into a preallocated dim×dim buffer.
    pub(crate) fn eval_into(&self, t: f64, out: &mut DMatrix<Complex64>) {
        let t = self.time_offset + self.time_scale * t;
        out.copy_from(&self.static_part);
        for term in &self.terms {
            let c = term.coeff.eval(t);
            for &(i, j, v) in &term.entries {
                out[(i, j)] += c * v;
            }
        }
        if self.overall_sign < 0.0 {
            out.iter_mut().for_each(|z| *z = -*z);
        }
    }

    /// H(t) as a Hermitian [`OperatorMatrix`].
    pub fn at(&self, t: f64) -> OperatorMatrix {
        let mut m = DMatrix::zeros(self.dims.dim(), self.dims.dim());
        self.eval_into(t, &mut m);
        OperatorMatrix::new(m, self.dims, true)
    }

    /// The generator −H(pivot − t): forward evolution under it from 0 to
    /// pivot exactly inverts forward evolution under H from 0 to pivot.
    pub fn reversed(&self, pivot: f64) -> Self {
        let mut rev = self.clone();
        rev.time_offset = self.time_offset + self.time_scale * pivot;
        rev.time_scale = -self.time_scale;
        rev.overall_sign = -self.overall_sign;
        rev
    }
}

fn entries_of(m: &DMatrix<Complex64>) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

struct Blocks {
    /// ω₀/2·σ_z + ω_c·a†a
    diagonal: DMatrix<Complex64>,
    /// σ_z/2 + a†a (modulation generator)
    modulation: DMatrix<Complex64>,
    /// g·σ₊a (rotating-wave half)
    jc_half: DMatrix<Complex64>,
    /// g·σ₊a† (counter-rotating half)
    cr_half: DMatrix<Complex64>,
}

fn blocks(params: &ModelParams, dims: HilbertDims) -> Blocks {
    let ops = build_elementary_ops(dims);
    let sz = ops.sigma_z.entries();
    let num = ops.number_op.entries();
    let g = Complex64::new(params.g, 0.0);
    Blocks {
        diagonal: sz * Complex64::new(params.omega_0 / 2.0, 0.0)
            + num * Complex64::new(params.omega_c, 0.0),
        modulation: sz * Complex64::new(0.5, 0.0) + num,
        jc_half: ops.sigma_plus.entries() * ops.a.entries() * g,
        cr_half: ops.sigma_plus.entries() * ops.a_dag.entries() * g,
    }
}

/// H_Rabi = ω₀/2·σ_z + ω_c·a†a + g(σ₊+σ₋)(a+a†), constant.
pub fn build_rabi(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let h = b.diagonal + &b.jc_half + b.jc_half.adjoint() + &b.cr_half + b.cr_half.adjoint();
    TimeDependentHamiltonian::new(FrameLabel::RabiStatic, *params, dims, h, Vec::new())
}

/// H_JC = ω₀/2·σ_z + ω_c·a†a + g(aσ₊ + a†σ₋), constant; block-diagonal in
/// the total excitation number.
pub fn build_jc(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let h = b.diagonal + &b.jc_half + b.jc_half.adjoint();
    TimeDependentHamiltonian::new(FrameLabel::JcStatic, *params, dims, h, Vec::new())
}

/// Lab-frame H(t) = ω_a(t)σ_z/2 + ω_c(t)a†a + g(σ₊+σ₋)(a+a†); reduces to
/// H_Rabi for all t when the modulation amplitude ξν vanishes.
pub fn build_lab_frame(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let static_part =
        b.diagonal + &b.jc_half + b.jc_half.adjoint() + &b.cr_half + b.cr_half.adjoint();
    let terms = vec![Term {
        coeff: Coeff::CosWave {
            amp: params.xi * params.nu,
            freq: params.nu,
        },
        entries: entries_of(&b.modulation),
    }];
    TimeDependentHamiltonian::new(FrameLabel::Lab, *params, dims, static_part, terms)
}

fn jc_interaction_terms(params: &ModelParams, b: &Blocks) -> Vec<Term> {
    let delta = params.delta();
    vec![
        Term {
            coeff: Coeff::ExpPhase {
                linear: delta,
                sin_amp: 0.0,
                sin_freq: 0.0,
            },
            entries: entries_of(&b.jc_half),
        },
        Term {
            coeff: Coeff::ExpPhase {
                linear: -delta,
                sin_amp: 0.0,
                sin_freq: 0.0,
            },
            entries: entries_of(&b.jc_half.adjoint()),
        },
    ]
}

fn cr_remainder_terms(params: &ModelParams, b: &Blocks) -> Vec<Term> {
    vec![
        Term {
            coeff: Coeff::ExpPhase {
                linear: params.omega_sum(),
                sin_amp: 2.0 * params.xi,
                sin_freq: params.nu,
            },
            entries: entries_of(&b.cr_half),
        },
        Term {
            coeff: Coeff::ExpPhase {
                linear: -params.omega_sum(),
                sin_amp: -2.0 * params.xi,
                sin_freq: params.nu,
            },
            entries: entries_of(&b.cr_half.adjoint()),
        },
    ]
}

/// Rotating-frame H₁(t) = H_JC^I(t) + ε̂(t).
pub fn build_rotating_frame(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let d = dims.dim();
    let mut terms = jc_interaction_terms(params, &b);
    terms.extend(cr_remainder_terms(params, &b));
    TimeDependentHamiltonian::new(
        FrameLabel::Rotating,
        *params,
        dims,
        DMatrix::zeros(d, d),
        terms,
    )
}

/// H_JC^I(t) = g(σ₊a e^{iδt} + a†σ₋ e^{−iδt}); time-independent at δ = 0.
pub fn build_jc_interaction(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let d = dims.dim();
    TimeDependentHamiltonian::new(
        FrameLabel::JcInteraction,
        *params,
        dims,
        DMatrix::zeros(d, d),
        jc_interaction_terms(params, &b),
    )
}

/// The isolated counter-rotating remainder
/// ε̂(t) = g(σ₊a† e^{i(ω₀+ω_c)t} e^{i2ξ sin(νt)} + h.c.).
pub fn build_cr_remainder(params: &ModelParams, dims: HilbertDims) -> TimeDependentHamiltonian {
    let b = blocks(params, dims);
    let d = dims.dim();
    TimeDependentHamiltonian::new(
        FrameLabel::CrOnly,
        *params,
        dims,
        DMatrix::zeros(d, d),
        cr_remainder_terms(params, &b),
    )
}

/// Diagonal frame unitary
/// U(t) = exp{−i[ω_c t + ξ sin(νt)]a†a − i[ω₀ t + ξ sin(νt)]σ_z/2};
/// U(0) = identity. Rotating-frame states are U†(t)·(lab-frame states).
pub fn frame_unitary(params: &ModelParams, dims: HilbertDims, t: f64) -> OperatorMatrix {
    let s = params.xi * (params.nu * t).sin();
    let theta_c = wrap_phase(params.omega_c * t) + s;
    let theta_a = wrap_phase(params.omega_0 * t) + s;
    let d = dims.dim();
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        let (q, n) = dims.decode(i);
        let qz = match q {
            crate::hilbert::QubitLevel::Excited => 1.0,
            crate::hilbert::QubitLevel::Ground => -1.0,
        };
        let phase = -(theta_c * n as f64) - theta_a * qz / 2.0;
        m[(i, i)] = Complex64::new(phase.cos(), phase.sin());
    }
    OperatorMatrix::new(m, dims, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{make_basis_state, QubitLevel};
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};

    fn dims() -> HilbertDims {
        HilbertDims::new(5).unwrap()
    }

    fn matrix_max(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn element(
        h: &TimeDependentHamiltonian,
        t: f64,
        bra: (QubitLevel, usize),
        ket: (QubitLevel, usize),
    ) -> Complex64 {
        let d = h.dims();
        let i = d.encode(bra.0, bra.1).unwrap();
        let j = d.encode(ket.0, ket.1).unwrap();
        h.at(t).entries()[(i, j)]
    }

    #[test]
    fn rabi_decoupled_limit_is_diagonal() {
        let p = ModelParams::new(1.0, 0.7, 0.0, 0.0, 0.0).unwrap();
        let h = build_rabi(&p, dims()).at(0.0);
        for i in 0..h.dims().dim() {
            for j in 0..h.dims().dim() {
                if i != j {
                    assert_eq!(h.entries()[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
            let (q, n) = h.dims().decode(i);
            let qz = if q == QubitLevel::Excited { 1.0 } else { -1.0 };
            let expect = 0.7 * n as f64 + qz * 0.5;
            assert!((h.entries()[(i, i)].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn rabi_counter_rotating_element() {
        let p = ModelParams::resonant(0.5, 0.0, 0.0).unwrap();
        let h = build_rabi(&p, dims());
        let v = element(&h, 0.0, (QubitLevel::Excited, 1), (QubitLevel::Ground, 0));
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rabi_equals_jc_plus_cr() {
        let p = ModelParams::new(1.0, 0.8, 0.45, 0.0, 0.0).unwrap();
        let d = dims();
        let rabi = build_rabi(&p, d).at(0.0);
        let jc = build_jc(&p, d).at(0.0);
        // independent CR construction from elementary operators
        let ops = build_elementary_ops(d);
        let cr = (ops.sigma_plus.entries() * ops.a_dag.entries()
            + ops.sigma_minus.entries() * ops.a.entries())
            * Complex64::new(p.g, 0.0);
        let resid = rabi.entries() - jc.entries() - cr;
        assert!(matrix_max(&resid) < 1e-14);
    }

    #[test]
    fn jc_conserves_excitation_number() {
        let p = ModelParams::new(1.0, 0.8, 0.45, 0.0, 0.0).unwrap();
        let d = dims();
        let h = build_jc(&p, d).at(0.0);
        // N_exc = a†a + |e><e|
        let ops = build_elementary_ops(d);
        let n_exc = ops.number_op.entries()
            + (ops.sigma_z.entries() + DMatrix::identity(d.dim(), d.dim()))
                * Complex64::new(0.5, 0.0);
        let comm = h.entries() * &n_exc - n_exc * h.entries();
        assert!(matrix_max(&comm) < 1e-12);

        let h = build_jc(&p, d);
        let v = element(&h, 0.0, (QubitLevel::Ground, 1), (QubitLevel::Excited, 0));
        assert!((v - Complex64::new(0.45, 0.0)).norm() < 1e-14);
        let v = element(&h, 0.0, (QubitLevel::Excited, 1), (QubitLevel::Ground, 0));
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn lab_frame_unmodulated_equals_rabi() {
        let p = ModelParams::new(1.0, 1.0, 0.5, 0.0, 5.0).unwrap();
        let d = dims();
        let lab = build_lab_frame(&p, d);
        let rabi = build_rabi(&p, d);
        for t in [0.0, 0.3, 1.7] {
            let resid = lab.at(t).entries() - rabi.at(t).entries();
            assert!(matrix_max(&resid) < 1e-14);
        }
    }

    #[test]
    fn lab_frame_diagonal_shift_at_t0() {
        let p = ModelParams::resonant(0.5, 2.76, 5.0).unwrap();
        let d = dims();
        let lab = build_lab_frame(&p, d).at(0.0);
        let rabi = build_rabi(&p, d).at(0.0);
        // cos(0) = 1: shift is xi*nu on both sigma_z/2 and a†a parts
        let shift = p.xi * p.nu;
        for i in 0..d.dim() {
            let (q, n) = d.decode(i);
            let qz = if q == QubitLevel::Excited { 1.0 } else { -1.0 };
            let expect = shift * (qz / 2.0 + n as f64);
            let got = (lab.entries()[(i, i)] - rabi.entries()[(i, i)]).re;
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn lab_frame_periodicity() {
        let p = ModelParams::resonant(0.5, 2.76, 5.0).unwrap();
        let lab = build_lab_frame(&p, dims());
        let period = TAU / p.nu;
        let resid = lab.at(period).entries() - lab.at(0.0).entries();
        assert!(matrix_max(&resid) < 1e-12);
    }

    #[test]
    fn rotating_frame_resonant_jc_part_static() {
        let p = ModelParams::resonant(0.5, 1.3, 4.0).unwrap();
        let d = dims();
        let jci = build_jc_interaction(&p, d);
        let ops = build_elementary_ops(d);
        let expect = (ops.sigma_plus.entries() * ops.a.entries()
            + ops.a_dag.entries() * ops.sigma_minus.entries())
            * Complex64::new(p.g, 0.0);
        for t in [0.0, 0.37, 2.9] {
            assert!(matrix_max(&(jci.at(t).entries() - &expect)) < 1e-13);
        }
        assert!(jci.is_effectively_static());
    }

    #[test]
    fn cr_remainder_examples() {
        let d = dims();
        // xi = 0: epsilon(t) = g(sigma_+ a† e^{i(w0+wc)t} + h.c.)
        let p = ModelParams::resonant(0.5, 0.0, 3.0).unwrap();
        let cr = build_cr_remainder(&p, d);
        let t = 0.77;
        let v = element(&cr, t, (QubitLevel::Excited, 1), (QubitLevel::Ground, 0));
        let expect = Complex64::new(0.0, 2.0 * t).exp() * 0.5;
        assert!((v - expect).norm() < 1e-13);

        // any xi: <e,1|eps(0)|g,0> = g since sin 0 = 0
        for xi in [0.0, 2.76, 40.0] {
            let p = ModelParams::resonant(0.5, xi, 5.0).unwrap();
            let cr = build_cr_remainder(&p, d);
            let v = element(&cr, 0.0, (QubitLevel::Excited, 1), (QubitLevel::Ground, 0));
            assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotating_decomposition_identity() {
        let p = ModelParams::new(1.0, 0.85, 0.5, 2.76, 5.0).unwrap();
        let d = dims();
        let rot = build_rotating_frame(&p, d);
        let jci = build_jc_interaction(&p, d);
        let cr = build_cr_remainder(&p, d);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t: f64 = rng.random_range(0.0..50.0);
            let resid = rot.at(t).entries() - jci.at(t).entries() - cr.at(t).entries();
            assert!(matrix_max(&resid) < 1e-14);
        }
    }

    #[test]
    fn every_builder_hermitian_at_random_times() {
        let p = ModelParams::new(1.0, 0.8, 0.6, 2.76, 5.0).unwrap();
        let d = dims();
        let hs = [
            build_rabi(&p, d),
            build_jc(&p, d),
            build_lab_frame(&p, d),
            build_rotating_frame(&p, d),
            build_jc_interaction(&p, d),
            build_cr_remainder(&p, d),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let t: f64 = rng.random_range(0.0..200.0);
            for h in &hs {
                assert!(h.at(t).adjoint_defect() < 1e-12, "{:?} at t={t}", h.label());
            }
        }
    }

    #[test]
    fn frame_unitary_identity_and_phases() {
        let d = dims();
        let p = ModelParams::resonant(0.5, 2.76, 5.0).unwrap();
        let u0 = frame_unitary(&p, d, 0.0);
        for i in 0..d.dim() {
            assert!((u0.entries()[(i, i)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }

        // xi = 0, omega_0 = omega_c, t = 2pi/omega_c: Fock phases 1, qubit phases e^{∓iπ}
        let p = ModelParams::resonant(0.5, 0.0, 0.0).unwrap();
        let u = frame_unitary(&p, d, TAU);
        for n in 0..=d.fock_cutoff() {
            let ie = d.encode(QubitLevel::Excited, n).unwrap();
            let ig = d.encode(QubitLevel::Ground, n).unwrap();
            let e_phase = Complex64::new(0.0, -std::f64::consts::PI).exp();
            assert!((u.entries()[(ie, ie)] - e_phase).norm() < 1e-12);
            assert!((u.entries()[(ig, ig)] - e_phase.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn frame_unitary_is_unitary() {
        let d = dims();
        let p = ModelParams::new(1.0, 0.8, 0.5, 2.76, 5.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let t: f64 = rng.random_range(0.0..100.0);
            let u = frame_unitary(&p, d, t);
            let prod = u.entries() * u.entries().adjoint();
            let resid = prod - DMatrix::<Complex64>::identity(d.dim(), d.dim());
            assert!(matrix_max(&resid) < 1e-12);
        }
    }

    #[test]
    fn reversed_generator_negates_and_reflects() {
        let p = ModelParams::resonant(0.5, 2.76, 5.0).unwrap();
        let d = dims();
        let h = build_rotating_frame(&p, d);
        let rev = h.reversed(3.0);
        for t in [0.0, 0.4, 1.9, 3.0] {
            let resid = rev.at(t).entries() + h.at(3.0 - t).entries();
            assert!(matrix_max(&resid) < 1e-14);
        }
    }

    #[test]
    fn single_excitation_block_eigenvalues_at_resonance() {
        // the 2x2 block {|e,0>, |g,1>} of H_JC^I at delta = 0 has eigenvalues ±g
        let p = ModelParams::resonant(0.5, 0.0, 0.0).unwrap();
        let d = dims();
        let h = build_jc_interaction(&p, d).at(0.0);
        let ie = d.encode(QubitLevel::Excited, 0).unwrap();
        let ig = d.encode(QubitLevel::Ground, 1).unwrap();
        let block = DMatrix::from_row_slice(2, 2, &[
            h.entries()[(ie, ie)],
            h.entries()[(ie, ig)],
            h.entries()[(ig, ie)],
            h.entries()[(ig, ig)],
        ]);
        let eig = block.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 0.5).abs() < 1e-12);
        assert!((vals[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basis_state_matrix_element_sanity() {
        // <e,1|H_CR(0)|g,0> routes through apply() as well
        let p = ModelParams::resonant(0.5, 2.76, 5.0).unwrap();
        let d = dims();
        let cr = build_cr_remainder(&p, d).at(0.0);
        let g0 = make_basis_state(QubitLevel::Ground, 0, d).unwrap();
        let out = cr.apply(&g0).unwrap();
        let i = d.encode(QubitLevel::Excited, 1).unwrap();
        assert!((out.amplitudes()[i] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let zero = DVector::<Complex64>::zeros(d.dim());
        let mut diff = out.amplitudes().clone();
        diff[i] = Complex64::new(0.0, 0.0);
        assert!((diff - zero).norm() < 1e-14);
    }
}
