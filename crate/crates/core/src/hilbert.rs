//! Finite-dimensional complex linear algebra: states, Hermitian operators,
//! exact unitary propagators and density matrices.
//!
//! Natural units are used throughout (ħ = 1), so times are measured in
//! inverse-energy units. Propagators come from a cached Hermitian
//! eigendecomposition, `U(t) = V diag(exp(-i λ t)) V†`, which is unitary to
//! round-off for every `t` and costs O(d²) per time once `V` is known.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance on state normalization.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on Hermiticity, scaled by `max(1, max |H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on unit trace and positivity of density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerance on basis orthonormality.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Largest imaginary part an expectation value of a Hermitian operator may carry.
pub const IMAG_TOL: f64 = 1e-10;

/// A normalized vector of probability amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Builds a state from amplitudes that must already have unit norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let amplitudes = CVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let amplitudes = CVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// The `k`-th standard basis vector of a `d`-dimensional space.
    pub fn basis(d: usize, k: usize) -> Self {
        assert!(k < d, "basis index {k} out of range for dimension {d}");
        let mut amplitudes = CVector::zeros(d);
        amplitudes[k] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

/// A Hermitian Hamiltonian with a lazily computed eigendecomposition.
#[derive(Debug)]
pub struct HamiltonianOperator {
    matrix: CMatrix,
    eigen: OnceLock<Eigensystem>,
}

impl Clone for HamiltonianOperator {
    fn clone(&self) -> Self {
        let eigen = OnceLock::new();
        if let Some(e) = self.eigen.get() {
            let _ = eigen.set(e.clone());
        }
        Self {
            matrix: self.matrix.clone(),
            eigen,
        }
    }
}

impl PartialEq for HamiltonianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HamiltonianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        Ok(Self {
            matrix,
            eigen: OnceLock::new(),
        })
    }

    /// Builds an operator from a real symmetric matrix given row-major.
    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: entries.len(),
            });
        }
        Self::new(CMatrix::from_row_iterator(
            d,
            d,
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    pub fn diagonal(energies: &[f64]) -> Self {
        let d = energies.len();
        let matrix = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(energies[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            matrix,
            eigen: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The cached eigendecomposition; computed on first use.
    pub fn eigen(&self) -> &Eigensystem {
        self.eigen.get_or_init(|| eigendecompose(&self.matrix))
    }

    /// `U(t) = exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> Propagator {
        propagator(self, t)
    }

    /// `⟨γ|H|γ⟩` for the `n`-th basis vector.
    pub fn diagonal_energy(&self, basis: &MixtureBasis, n: usize) -> f64 {
        let g = basis.column(n);
        (g.adjoint() * &self.matrix * g)[(0, 0)].re
    }
}

fn check_hermitian(matrix: &CMatrix) -> Result<()> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let tol = HERMITIAN_TOL * scale;
    for i in 0..rows {
        for j in i..cols {
            let deviation = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
            if deviation > tol || !deviation.is_finite() {
                return Err(Error::NotHermitian {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

fn eigendecompose(matrix: &CMatrix) -> Eigensystem {
    let d = matrix.nrows();
    let is_diagonal =
        (0..d).all(|i| (0..d).all(|j| i == j || matrix[(i, j)] == C64::new(0.0, 0.0)));
    let (values, vectors) = if is_diagonal {
        // Already diagonal: eigenvectors are exact standard basis vectors.
        (
            DVector::from_fn(d, |i, _| matrix[(i, i)].re),
            CMatrix::identity(d, d),
        )
    } else {
        let eig = SymmetricEigen::new(matrix.clone());
        (eig.eigenvalues, eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Eigensystem {
        values: DVector::from_fn(d, |i, _| values[order[i]]),
        vectors: CMatrix::from_fn(d, d, |r, c| vectors[(r, order[c])]),
    }
}

/// Ascending eigenvalues and unitary eigenvectors of `h`.
pub fn hermitian_eigendecompose(h: &HamiltonianOperator) -> (DVector<f64>, CMatrix) {
    let e = h.eigen();
    (e.values.clone(), e.vectors.clone())
}

/// A unitary time-evolution operator for a fixed duration.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    matrix: CMatrix,
    duration: f64,
}

impl Propagator {
    pub fn identity(d: usize) -> Self {
        Self {
            matrix: CMatrix::identity(d, d),
            duration: 0.0,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `⟨γ_n|U|γ_m⟩` for basis vectors `n` and `m`.
    pub fn element(&self, basis: &MixtureBasis, n: usize, m: usize) -> C64 {
        (basis.column(n).adjoint() * &self.matrix * basis.column(m))[(0, 0)]
    }

    /// The full matrix `⟨γ_n|U|γ_m⟩` in the given basis.
    pub fn in_basis(&self, basis: &MixtureBasis) -> CMatrix {
        if basis.is_standard() {
            return self.matrix.clone();
        }
        basis.vectors.adjoint() * &self.matrix * &basis.vectors
    }
}

/// `exp(-i H t)` built from the eigendecomposition of `h`.
pub fn propagator(h: &HamiltonianOperator, t: f64) -> Propagator {
    let d = h.dim();
    if t == 0.0 {
        return Propagator::identity(d);
    }
    let eig = h.eigen();
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -lambda * t))
        .collect();
    // V · diag(phases) · V†
    let mut scaled = eig.vectors.clone();
    for (c, phase) in phases.iter().enumerate() {
        for r in 0..d {
            scaled[(r, c)] *= phase;
        }
    }
    Propagator {
        matrix: scaled * eig.vectors.adjoint(),
        duration: t,
    }
}

pub fn evolve_state(u: &Propagator, psi: &StateVector) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi.dim(),
        });
    }
    Ok(StateVector::from_vector_unchecked(
        &u.matrix * psi.amplitudes(),
    ))
}

pub fn evolve_density(u: &Propagator, w: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: w.dim(),
        });
    }
    let evolved = &u.matrix * &w.matrix * u.matrix.adjoint();
    Ok(DensityMatrix::from_matrix_unchecked(hermitize(evolved)))
}

/// `⟨v|H|v⟩`, rejecting results with a non-negligible imaginary part.
pub fn energy_expectation(v: &StateVector, h: &HamiltonianOperator) -> Result<f64> {
    if v.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: v.dim(),
        });
    }
    let value = v.amplitudes().dotc(&(h.matrix() * v.amplitudes()));
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ComplexExpectation(value.im));
    }
    Ok(value.re)
}

fn hermitize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).unscale(2.0)
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix).map_err(|e| Error::InvalidDensity(e.to_string()))?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} != 1")));
        }
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        Self {
            matrix: a * a.adjoint(),
        }
    }

    /// `Σ_n |γ_n⟩ p_n ⟨γ_n|`.
    pub fn from_populations(basis: &MixtureBasis, populations: &[f64]) -> Result<Self> {
        if populations.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: populations.len(),
            });
        }
        let d = basis.dim();
        let matrix = if basis.is_standard() {
            CMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(populations[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        } else {
            let mut m = CMatrix::zeros(d, d);
            for (n, &p) in populations.iter().enumerate() {
                if p != 0.0 {
                    let g = basis.column(n);
                    m += (&g * g.adjoint()).scale(p);
                }
            }
            m
        };
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(W H)`.
    pub fn energy(&self, h: &HamiltonianOperator) -> f64 {
        (&self.matrix * h.matrix()).trace().re
    }

    /// Diagonal elements `⟨γ_n|W|γ_n⟩` in the given basis.
    pub fn populations(&self, basis: &MixtureBasis) -> Vec<f64> {
        if basis.is_standard() {
            return (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect();
        }
        (0..basis.len())
            .map(|n| {
                let g = basis.column(n);
                (g.adjoint() * &self.matrix * g)[(0, 0)].re
            })
            .collect()
    }

    /// Largest off-diagonal magnitude of `W` expressed in the given basis.
    pub fn max_off_diagonal(&self, basis: &MixtureBasis) -> f64 {
        let m = if basis.is_standard() {
            self.matrix.clone()
        } else {
            basis.vectors.adjoint() * &self.matrix * &basis.vectors
        };
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Element-wise max-norm distance to another density matrix.
    pub fn max_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// An orthonormal basis `{|γ_n⟩}` stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureBasis {
    vectors: CMatrix,
    standard: bool,
}

impl MixtureBasis {
    pub fn standard(d: usize) -> Self {
        Self {
            vectors: CMatrix::identity(d, d),
            standard: true,
        }
    }

    /// Uses the columns of `vectors` as the basis; they must be orthonormal.
    pub fn from_columns(vectors: CMatrix) -> Result<Self> {
        let (rows, cols) = vectors.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let gram = vectors.adjoint() * &vectors;
        for i in 0..rows {
            for j in 0..rows {
                let delta = if i == j { 1.0 } else { 0.0 };
                let deviation = (gram[(i, j)] - C64::new(delta, 0.0)).norm();
                if deviation > ORTHONORMAL_TOL {
                    return Err(Error::NotOrthonormal { i, j, deviation });
                }
            }
        }
        let standard = vectors == CMatrix::identity(rows, rows);
        Ok(Self { vectors, standard })
    }

    pub fn from_states(states: &[StateVector]) -> Result<Self> {
        let d = states.first().map_or(0, StateVector::dim);
        if states.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: states.len(),
            });
        }
        let cols: Vec<CVector> = states.iter().map(|s| s.amplitudes().clone()).collect();
        Self::from_columns(CMatrix::from_columns(&cols))
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn column(&self, n: usize) -> CVector {
        self.vectors.column(n).into_owned()
    }

    pub fn state(&self, n: usize) -> StateVector {
        StateVector::from_vector_unchecked(self.column(n))
    }

    /// Amplitudes `⟨γ_n|ψ⟩` for all `n`.
    pub fn coefficients(&self, psi: &StateVector) -> CVector {
        if self.standard {
            return psi.amplitudes().clone();
        }
        self.vectors.adjoint() * psi.amplitudes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn rabi(omega: f64) -> HamiltonianOperator {
        HamiltonianOperator::from_real(2, &[0.0, omega, omega, 0.0]).unwrap()
    }

    #[test]
    fn diagonal_hamiltonian_has_identity_eigenvectors() {
        let h = HamiltonianOperator::diagonal(&[0.0, 1.0]);
        let (values, vectors) = hermitian_eigendecompose(&h);
        assert_eq!(values.as_slice(), &[0.0, 1.0]);
        assert_eq!(vectors, CMatrix::identity(2, 2));
    }

    #[test]
    fn zero_hamiltonian_returns_identity() {
        let h = HamiltonianOperator::new(CMatrix::zeros(3, 3)).unwrap();
        let (values, vectors) = hermitian_eigendecompose(&h);
        assert!(values.iter().all(|&v| v == 0.0));
        assert_eq!(vectors, CMatrix::identity(3, 3));
    }

    #[test]
    fn two_level_eigensystem_closed_form() {
        let omega = 0.7;
        let h = rabi(omega);
        let (values, vectors) = hermitian_eigendecompose(&h);
        assert!((values[0] + omega).abs() < 1e-14);
        assert!((values[1] - omega).abs() < 1e-14);
        // columns proportional to (1, -1)/√2 and (1, 1)/√2 up to phase
        let s = 1.0 / 2f64.sqrt();
        let lower = vectors.column(0);
        let upper = vectors.column(1);
        let overlap_lower = (lower[0] * s - lower[1] * s).norm();
        let overlap_upper = (upper[0] * s + upper[1] * s).norm();
        assert!((overlap_lower - 1.0).abs() < 1e-12);
        assert!((overlap_upper - 1.0).abs() < 1e-12);
        let unitary_defect = &vectors.adjoint() * &vectors - CMatrix::identity(2, 2);
        assert!(max_abs(&unitary_defect) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(2.0), c(0.0)]);
        match HamiltonianOperator::new(m) {
            Err(Error::NotHermitian { row: 0, col: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_duration_is_exact_identity() {
        let u = rabi(1.3).propagator(0.0);
        assert_eq!(u.matrix(), &CMatrix::identity(2, 2));
    }

    #[test]
    fn rabi_transfer_probability() {
        let omega = 1.1;
        let h = rabi(omega);
        for &t in &[0.1, 0.5, 1.0, 2.7, 10.0] {
            let u = h.propagator(t);
            let expected = (omega * t).sin().powi(2);
            assert!((u.matrix()[(0, 1)].norm_sqr() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_propagator_is_phases() {
        let energies = [0.3, -1.2, 2.0];
        let h = HamiltonianOperator::diagonal(&energies);
        let t = 1.7;
        let u = h.propagator(t);
        for (i, &e) in energies.iter().enumerate() {
            let expected = C64::from_polar(1.0, -e * t);
            assert!((u.matrix()[(i, i)] - expected).norm() < 1e-15);
            assert!((u.matrix()[(i, i)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn half_period_transfers_population() {
        let omega = 2.0;
        let u = rabi(omega).propagator(PI / (2.0 * omega));
        let psi = evolve_state(&u, &StateVector::basis(2, 0)).unwrap();
        assert!(psi.amplitudes()[0].norm() < 1e-12);
        // amplitude is -i up to round-off
        assert!((psi.amplitudes()[1] - C64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn evolve_rejects_dimension_mismatch() {
        let u = Propagator::identity(3);
        let err = evolve_state(&u, &StateVector::basis(2, 0)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn pure_density_evolution_matches_state_evolution() {
        let h = rabi(0.9);
        let u = h.propagator(0.77);
        let psi = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let via_density = evolve_density(&u, &DensityMatrix::pure(&psi)).unwrap();
        let via_state = DensityMatrix::pure(&evolve_state(&u, &psi).unwrap());
        assert!(via_density.max_distance(&via_state) < 1e-14);
        assert!((via_density.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_expectation_examples() {
        let h = HamiltonianOperator::diagonal(&[0.0, 1.0]);
        assert_eq!(
            energy_expectation(&StateVector::basis(2, 1), &h).unwrap(),
            1.0
        );

        let omega = 0.4;
        let v = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let e = energy_expectation(&v, &rabi(omega)).unwrap();
        assert!((e - omega).abs() < 1e-14);
    }

    #[test]
    fn eigenvector_expectation_is_eigenvalue() {
        let h = HamiltonianOperator::from_real(3, &[1.0, 0.2, 0.0, 0.2, -0.5, 0.3, 0.0, 0.3, 2.0])
            .unwrap();
        let eig = h.eigen();
        for k in 0..3 {
            let v = StateVector::from_vector_unchecked(eig.vectors.column(k).into_owned());
            let e = energy_expectation(&v, &h).unwrap();
            assert!((e - eig.values[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn density_validation() {
        let bad_trace = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.6)]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidDensity(_))
        ));
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::InvalidDensity(_))
        ));
        let ok = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        assert!(DensityMatrix::new(ok).is_ok());
    }

    #[test]
    fn basis_validation() {
        let skew = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.1), c(0.0), c(1.0)]);
        assert!(matches!(
            MixtureBasis::from_columns(skew),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(MixtureBasis::from_columns(CMatrix::identity(3, 3))
            .unwrap()
            .is_standard());
    }

    #[test]
    fn state_normalization() {
        assert!(matches!(
            StateVector::new(vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(
            StateVector::normalized(vec![c(0.0), c(0.0)]),
            Err(Error::ZeroNorm)
        );
        let s = StateVector::from_real(&[3.0, 4.0]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
