//! Truncated qubit ⊗ Fock Hilbert space: states, basis bookkeeping,
//! elementary operators and inner products.
//!
//! Basis ordering is qubit-major: index = q·(N_c+1) + n with q ∈ {g=0, e=1}
//! and n the Fock number, so the qubit-ground block occupies the first
//! N_c+1 amplitudes. Everything is dense; the dimension never exceeds a
//! few dozen for the experiments this crate targets.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Zero and one shorthands used throughout the numeric kernels.
pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Qubit level, `Ground` = g, `Excited` = e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitLevel {
    Ground,
    Excited,
}

impl QubitLevel {
    fn index(self) -> usize {
        match self {
            QubitLevel::Ground => 0,
            QubitLevel::Excited => 1,
        }
    }
}

/// Dimensions of the truncated space: Fock numbers 0..=fock_cutoff on the
/// mode, total dimension 2·(fock_cutoff+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertDims {
    fock_cutoff: usize,
}

impl HilbertDims {
    /// Default Fock cutoff used by every preset; initial states carry at
    /// most one excitation or alpha = 0.1, and acceptance runs re-check
    /// convergence by cutoff doubling.
    pub const DEFAULT_FOCK_CUTOFF: usize = 20;

    pub fn new(fock_cutoff: usize) -> Result<Self> {
        if fock_cutoff < 1 {
            return Err(Error::InvalidParams(
                "fock_cutoff must be >= 1".to_owned(),
            ));
        }
        Ok(Self { fock_cutoff })
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    /// Total dimension 2·(N_c+1).
    pub fn dim(&self) -> usize {
        2 * (self.fock_cutoff + 1)
    }

    /// Basis index of |q, n⟩ (qubit-major).
    pub fn encode(&self, q: QubitLevel, n: usize) -> Result<usize> {
        if n > self.fock_cutoff {
            return Err(Error::FockOutOfRange {
                n,
                cutoff: self.fock_cutoff,
            });
        }
        Ok(q.index() * (self.fock_cutoff + 1) + n)
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(&self, index: usize) -> (QubitLevel, usize) {
        let block = self.fock_cutoff + 1;
        let q = if index / block == 0 {
            QubitLevel::Ground
        } else {
            QubitLevel::Excited
        };
        (q, index % block)
    }

    /// Same cutoff doubled; used by convergence checks.
    pub fn doubled(&self) -> Self {
        Self {
            fock_cutoff: 2 * self.fock_cutoff,
        }
    }
}

/// Pure state on the truncated space.
#[derive(Debug, Clone)]
pub struct QuantumState {
    amplitudes: DVector<Complex64>,
    dims: HilbertDims,
}

impl QuantumState {
    /// Wrap a raw amplitude vector (no normalization applied).
    pub fn from_amplitudes(amplitudes: DVector<Complex64>, dims: HilbertDims) -> Result<Self> {
        if amplitudes.len() != dims.dim() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: dims.dim(),
            });
        }
        Ok(Self { amplitudes, dims })
    }

    pub fn dims(&self) -> HilbertDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut DVector<Complex64> {
        &mut self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Population |⟨q,n|ψ⟩|².
    pub fn population(&self, q: QubitLevel, n: usize) -> Result<f64> {
        let i = self.dims.encode(q, n)?;
        Ok(self.amplitudes[i].norm_sqr())
    }

    /// Qubit marginal: sum of |amplitude|² over the block of `q`.
    pub fn qubit_population(&self, q: QubitLevel) -> f64 {
        let block = self.dims.fock_cutoff + 1;
        let start = q.index() * block;
        self.amplitudes
            .as_slice()[start..start + block]
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Expectation of the total excitation number a†a + |e⟩⟨e|.
    pub fn excitation_expectation(&self) -> f64 {
        let mut acc = 0.0;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let (q, n) = self.dims.decode(i);
            acc += z.norm_sqr() * (n as f64 + q.index() as f64);
        }
        acc
    }
}

/// ⟨ψ|φ⟩ with conjugation on the first argument.
pub fn inner_product(psi: &QuantumState, phi: &QuantumState) -> Result<Complex64> {
    if psi.dims != phi.dims {
        return Err(Error::DimensionMismatch {
            left: psi.dims.dim(),
            right: phi.dims.dim(),
        });
    }
    Ok(psi.amplitudes.dotc(&phi.amplitudes))
}

/// Dense operator on the truncated space.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    dims: HilbertDims,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, dims: HilbertDims, hermitian: bool) -> Self {
        debug_assert_eq!(entries.nrows(), dims.dim());
        debug_assert_eq!(entries.ncols(), dims.dim());
        debug_assert!(!hermitian || adjoint_defect(&entries) < 1e-12);
        Self {
            entries,
            dims,
            hermitian,
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dims(&self) -> HilbertDims {
        self.dims
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    /// Max-entry deviation from self-adjointness.
    pub fn adjoint_defect(&self) -> f64 {
        adjoint_defect(&self.entries)
    }

    /// Apply to a state: M|ψ⟩.
    pub fn apply(&self, psi: &QuantumState) -> Result<QuantumState> {
        if psi.dims != self.dims {
            return Err(Error::DimensionMismatch {
                left: self.dims.dim(),
                right: psi.dims.dim(),
            });
        }
        QuantumState::from_amplitudes(&self.entries * &psi.amplitudes, self.dims)
    }
}

pub(crate) fn adjoint_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Matrix representations of the elementary operators.
pub struct ElementaryOps {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub sigma_z: OperatorMatrix,
    pub sigma_plus: OperatorMatrix,
    pub sigma_minus: OperatorMatrix,
    pub number_op: OperatorMatrix,
}

/// Build a, a†, σ_z, σ₊, σ₋ and a†a on the truncated space.
///
/// a|n⟩ = √n|n−1⟩ and σ₊|g⟩ = |e⟩; the truncated commutator [a, a†]
/// equals the identity on every basis vector with n < N_c.
pub fn build_elementary_ops(dims: HilbertDims) -> ElementaryOps {
    let d = dims.dim();
    let nc = dims.fock_cutoff;
    let block = nc + 1;

    let mut a = DMatrix::<Complex64>::zeros(d, d);
    let mut sz = DMatrix::<Complex64>::zeros(d, d);
    let mut sp = DMatrix::<Complex64>::zeros(d, d);
    let mut num = DMatrix::<Complex64>::zeros(d, d);

    for q in 0..2usize {
        let base = q * block;
        for n in 0..=nc {
            let i = base + n;
            sz[(i, i)] = Complex64::new(if q == 1 { 1.0 } else { -1.0 }, 0.0);
            num[(i, i)] = Complex64::new(n as f64, 0.0);
            if n >= 1 {
                // a |q, n> = sqrt(n) |q, n-1>
                a[(i - 1, i)] = Complex64::new((n as f64).sqrt(), 0.0);
            }
        }
    }
    for n in 0..=nc {
        // sigma_+ |g, n> = |e, n>
        sp[(block + n, n)] = C_ONE;
    }

    let a_dag = a.adjoint();
    let sm = sp.adjoint();

    ElementaryOps {
        a: OperatorMatrix::new(a, dims, false),
        a_dag: OperatorMatrix::new(a_dag, dims, false),
        sigma_z: OperatorMatrix::new(sz, dims, true),
        sigma_plus: OperatorMatrix::new(sp, dims, false),
        sigma_minus: OperatorMatrix::new(sm, dims, false),
        number_op: OperatorMatrix::new(num, dims, true),
    }
}

/// Unit basis state |q, n⟩.
pub fn make_basis_state(q: QubitLevel, n: usize, dims: HilbertDims) -> Result<QuantumState> {
    let i = dims.encode(q, n)?;
    let mut amps = DVector::zeros(dims.dim());
    amps[i] = C_ONE;
    QuantumState::from_amplitudes(amps, dims)
}

/// Qubit factor of a product state: a level or a (renormalized)
/// superposition with the given g/e weights.
#[derive(Debug, Clone, Copy)]
pub enum QubitAmplitudes {
    Level(QubitLevel),
    Superposition { g: Complex64, e: Complex64 },
}

impl QubitAmplitudes {
    /// (|g⟩+|e⟩)/√2.
    pub fn equal_superposition() -> Self {
        QubitAmplitudes::Superposition { g: C_ONE, e: C_ONE }
    }

    fn weights(self) -> Result<(Complex64, Complex64)> {
        match self {
            QubitAmplitudes::Level(QubitLevel::Ground) => Ok((C_ONE, C_ZERO)),
            QubitAmplitudes::Level(QubitLevel::Excited) => Ok((C_ZERO, C_ONE)),
            QubitAmplitudes::Superposition { g, e } => {
                let norm = (g.norm_sqr() + e.norm_sqr()).sqrt();
                if norm == 0.0 {
                    return Err(Error::InvalidParams(
                        "qubit superposition weights are both zero".to_owned(),
                    ));
                }
                Ok((g / norm, e / norm))
            }
        }
    }
}

/// Product state (qubit factor) ⊗ |α⟩ with the coherent amplitudes
/// e^{−|α|²/2} αⁿ/√(n!), renormalized on the truncated space.
///
/// Requires |α|² ≤ N_c/4 so that truncation error stays negligible;
/// otherwise reports the minimum acceptable cutoff.
pub fn make_coherent_state(
    qubit: QubitAmplitudes,
    alpha: Complex64,
    dims: HilbertDims,
) -> Result<QuantumState> {
    let alpha_sq = alpha.norm_sqr();
    let nc = dims.fock_cutoff;
    if alpha_sq > nc as f64 / 4.0 {
        return Err(Error::CutoffTooSmall {
            alpha_sq,
            cutoff: nc,
            suggested: (4.0 * alpha_sq).ceil() as usize,
        });
    }
    let (wg, we) = qubit.weights()?;

    // c_0 = e^{-|alpha|^2/2}, c_n = c_{n-1} * alpha / sqrt(n)
    let mut fock = Vec::with_capacity(nc + 1);
    let mut c = Complex64::new((-alpha_sq / 2.0).exp(), 0.0);
    fock.push(c);
    for n in 1..=nc {
        c *= alpha / (n as f64).sqrt();
        fock.push(c);
    }
    let fock_norm = fock.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut amps = DVector::zeros(dims.dim());
    for (n, &cn) in fock.iter().enumerate() {
        amps[n] = wg * cn / fock_norm;
        amps[nc + 1 + n] = we * cn / fock_norm;
    }
    QuantumState::from_amplitudes(amps, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dims(nc: usize) -> HilbertDims {
        HilbertDims::new(nc).unwrap()
    }

    #[test]
    fn basis_state_examples() {
        let d = dims(5);
        let s = make_basis_state(QubitLevel::Ground, 0, d).unwrap();
        assert_eq!(s.amplitudes()[0], C_ONE);
        assert!((s.norm_sq() - 1.0).abs() < 1e-15);

        // qubit-major: |e,1> sits at 1*6 + 1 = 7
        let s = make_basis_state(QubitLevel::Excited, 1, d).unwrap();
        assert_eq!(s.amplitudes()[7], C_ONE);

        assert!(matches!(
            make_basis_state(QubitLevel::Ground, 6, d),
            Err(Error::FockOutOfRange { n: 6, cutoff: 5 })
        ));
    }

    #[test]
    fn encode_decode_round_trip() {
        let d = dims(7);
        for q in [QubitLevel::Ground, QubitLevel::Excited] {
            for n in 0..=7 {
                let i = d.encode(q, n).unwrap();
                assert_eq!(d.decode(i), (q, n));
            }
        }
        assert_eq!(d.dim(), 16);
    }

    #[test]
    fn coherent_vacuum_limit() {
        let d = dims(10);
        let s = make_coherent_state(
            QubitAmplitudes::Level(QubitLevel::Ground),
            C_ZERO,
            d,
        )
        .unwrap();
        let expected = make_basis_state(QubitLevel::Ground, 0, d).unwrap();
        let overlap = inner_product(&expected, &s).unwrap();
        assert!((overlap.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_amplitude_alpha_0_1() {
        // closed form: fock-0 amplitude e^{-0.005} = 0.99501247919268232
        // before renormalization; truncation at N_c = 10 changes it below 1e-12.
        let d = dims(10);
        let s = make_coherent_state(
            QubitAmplitudes::Level(QubitLevel::Ground),
            Complex64::new(0.1, 0.0),
            d,
        )
        .unwrap();
        assert!((s.amplitudes()[0].re - 0.995_012_479_192_682_32).abs() < 1e-9);
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_superposition_normalized() {
        let d = dims(10);
        let s = make_coherent_state(
            QubitAmplitudes::equal_superposition(),
            Complex64::new(0.1, 0.0),
            d,
        )
        .unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        // qubit marginal is split evenly
        assert!((s.qubit_population(QubitLevel::Ground) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coherent_cutoff_guard() {
        let d = dims(5);
        let err = make_coherent_state(
            QubitAmplitudes::Level(QubitLevel::Ground),
            Complex64::new(1.2, 0.0),
            d,
        )
        .unwrap_err();
        match err {
            Error::CutoffTooSmall { suggested, .. } => assert_eq!(suggested, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn coherent_cutoff_convergence() {
        // raising N_c from 5 to 10 changes any shared amplitude by < 1e-10
        let a = Complex64::new(0.1, 0.0);
        let s5 = make_coherent_state(QubitAmplitudes::Level(QubitLevel::Ground), a, dims(5))
            .unwrap();
        let s10 = make_coherent_state(QubitAmplitudes::Level(QubitLevel::Ground), a, dims(10))
            .unwrap();
        for n in 0..=5 {
            let d = (s5.amplitudes()[n] - s10.amplitudes()[n]).norm();
            assert!(d < 1e-10, "amplitude {n} differs by {d:.2e}");
        }
    }

    #[test]
    fn inner_product_basics() {
        let d = dims(5);
        let g0 = make_basis_state(QubitLevel::Ground, 0, d).unwrap();
        let e0 = make_basis_state(QubitLevel::Excited, 0, d).unwrap();
        assert_eq!(inner_product(&g0, &g0).unwrap(), C_ONE);
        assert_eq!(inner_product(&g0, &e0).unwrap(), C_ZERO);

        let other = make_basis_state(QubitLevel::Ground, 0, dims(6)).unwrap();
        assert!(inner_product(&g0, &other).is_err());
    }

    #[test]
    fn elementary_ops_relations() {
        let d = dims(6);
        let ops = build_elementary_ops(d);

        // a a† - a† a = I on the subspace n < N_c
        let comm = ops.a.entries() * ops.a_dag.entries() - ops.a_dag.entries() * ops.a.entries();
        for q in [QubitLevel::Ground, QubitLevel::Excited] {
            for n in 0..6 {
                let i = d.encode(q, n).unwrap();
                assert!((comm[(i, i)] - C_ONE).norm() < 1e-14);
            }
        }

        // sigma_z eigenvalues
        for n in 0..=6 {
            let ie = d.encode(QubitLevel::Excited, n).unwrap();
            let ig = d.encode(QubitLevel::Ground, n).unwrap();
            assert_eq!(ops.sigma_z.entries()[(ie, ie)], C_ONE);
            assert_eq!(ops.sigma_z.entries()[(ig, ig)], -C_ONE);
        }

        // a†a |g,3> = 3 |g,3>
        let g3 = make_basis_state(QubitLevel::Ground, 3, d).unwrap();
        let out = ops.number_op.apply(&g3).unwrap();
        let i = d.encode(QubitLevel::Ground, 3).unwrap();
        assert!((out.amplitudes()[i] - Complex64::new(3.0, 0.0)).norm() < 1e-14);

        // adjoint pairs to 1e-14
        assert!(adjoint_defect(&(ops.a_dag.entries() - ops.a.entries().adjoint())) < 1e-14);
        let sp_minus_sm_dag = ops.sigma_plus.entries() - ops.sigma_minus.entries().adjoint();
        assert!(sp_minus_sm_dag.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14);

        // sigma_+ |g,2> = |e,2>
        let g2 = make_basis_state(QubitLevel::Ground, 2, d).unwrap();
        let e2 = ops.sigma_plus.apply(&g2).unwrap();
        let overlap = inner_product(
            &make_basis_state(QubitLevel::Excited, 2, d).unwrap(),
            &e2,
        )
        .unwrap();
        assert!((overlap - C_ONE).norm() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inner_product_conjugate_symmetry(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = dims(4);
            let mut draw = |_| {
                let amps = DVector::from_iterator(
                    d.dim(),
                    (0..d.dim()).map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    }),
                );
                let norm = amps.norm();
                QuantumState::from_amplitudes(amps / Complex64::new(norm, 0.0), d).unwrap()
            };
            let psi = draw(0);
            let phi = draw(1);
            let lhs = inner_product(&psi, &phi).unwrap();
            let rhs = inner_product(&phi, &psi).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-12);
            prop_assert!(lhs.norm() <= 1.0 + 1e-9);
        }

        #[test]
        fn basis_index_round_trips(nc in 1usize..40, idx in 0usize..80) {
            let d = dims(nc);
            let idx = idx % d.dim();
            let (q, n) = d.decode(idx);
            prop_assert_eq!(d.encode(q, n).unwrap(), idx);
        }
    }
}
