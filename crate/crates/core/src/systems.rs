//! Small model systems used by presets, tests and benchmarks.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::hilbert::{CMatrix, HamiltonianOperator, MixtureBasis, StateVector, C64};

/// `H = [[0, Ω], [Ω, 0]]`; populations oscillate as `sin²(Ωt)`.
pub fn rabi_hamiltonian(omega: f64) -> HamiltonianOperator {
    HamiltonianOperator::from_real(2, &[0.0, omega, omega, 0.0]).expect("symmetric")
}

/// `{(|0⟩ + |1⟩)/√2, (|0⟩ - |1⟩)/√2}`.
pub fn hadamard_basis() -> MixtureBasis {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    MixtureBasis::from_columns(CMatrix::from_row_slice(2, 2, &[s, s, s, -s])).expect("orthonormal")
}

/// Two levels with coupling `g` and detuning `delta`, starting in level 0.
///
/// The level-1 amplitude vanishes only when `U(t)` is a multiple of the
/// identity, so every zero is a transition to a pure state.
pub fn detuned_pair(coupling: f64, detuning: f64) -> (HamiltonianOperator, StateVector) {
    let h =
        HamiltonianOperator::from_real(2, &[0.0, coupling, coupling, detuning]).expect("symmetric");
    (h, StateVector::basis(2, 0))
}

/// Three-level system: a degenerate doublet `{|γ₁⟩, |γ₂⟩}` at energy 0
/// with internal coupling `omega`, and a third level at `detuning`
/// coupled with strength `coupling` to both doublet states.
///
/// The third level couples only to the symmetric doublet combination, so
/// its amplitude from either doublet state vanishes simultaneously at
/// multiples of `2π / R` with `R = sqrt((δ - Ω)² + 8 g²)`. The system
/// starts in `|γ₂⟩` (index 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demo3 {
    pub omega: f64,
    pub detuning: f64,
    pub coupling: f64,
}

impl Default for Demo3 {
    fn default() -> Self {
        Self {
            omega: 1.0,
            detuning: 5.0,
            coupling: 0.05,
        }
    }
}

impl Demo3 {
    pub fn hamiltonian(&self) -> HamiltonianOperator {
        let (o, d, g) = (self.omega, self.detuning, self.coupling);
        HamiltonianOperator::from_real(3, &[0.0, o, g, o, 0.0, g, g, g, d]).expect("symmetric")
    }

    pub fn initial_state(&self) -> StateVector {
        StateVector::basis(3, 1)
    }

    /// First positive time at which the third level decouples.
    pub fn decoupling_period(&self) -> f64 {
        let r = ((self.detuning - self.omega).powi(2) + 8.0 * self.coupling.powi(2)).sqrt();
        2.0 * PI / r
    }
}

/// One excited state (index 0) resonantly coupled to `couplings.len()`
/// degenerate decay channels.
pub fn star(energy: f64, couplings: &[f64]) -> HamiltonianOperator {
    let d = couplings.len() + 1;
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(energy, 0.0);
    }
    for (k, &g) in couplings.iter().enumerate() {
        m[(0, k + 1)] = C64::new(g, 0.0);
        m[(k + 1, 0)] = C64::new(g, 0.0);
    }
    HamiltonianOperator::new(m).expect("symmetric")
}

/// Two-level decay model with `Δt₀ / τ = dt_over_tau` and lifetime `tau`.
///
/// Returns the Hamiltonian and the spacing `Δt₀`. The coupling solves
/// `sin²(g Δt₀) / Δt₀ = 1 / τ`.
pub fn two_level_decay(dt_over_tau: f64, tau: f64) -> (HamiltonianOperator, f64) {
    assert!(
        dt_over_tau > 0.0 && dt_over_tau <= 1.0,
        "dt/tau must be in (0, 1]"
    );
    let spacing = dt_over_tau * tau;
    let coupling = dt_over_tau.sqrt().asin() / spacing;
    (rabi_hamiltonian(coupling), spacing)
}
