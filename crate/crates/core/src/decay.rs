//! Exponential decay of an excited state from repeated transitions.
//!
//! In the open model the absorption terms are dropped, so the excited
//! population shrinks by the survival probability `|⟨γ_i|U(Δt₀)|γ_i⟩|²`
//! at every transition and `1/τ` is the leakage probability per unit
//! time. The closed model keeps the full chain, including returns to
//! the excited state.

use crate::error::{Error, Result};
use crate::hilbert::{HamiltonianOperator, MixtureBasis};
use crate::markov::{step_populations, transition_matrix, PopulationVector, TransitionMatrix};

/// Ratios `Δt₀ / τ` above this are reported as outside the regime in
/// which the recurrence approximates an exponential.
pub const VALIDITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayRegime {
    /// Absorption terms dropped: geometric survival.
    Open,
    /// Full closed-system chain.
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayModel {
    pub initial_index: usize,
    pub survival_amplitude_sq: f64,
    /// Infinite for a stable state.
    pub lifetime: f64,
    pub spacing: f64,
    /// `|⟨γ_m|U(Δt₀)|γ_i⟩|²` for every `m`, including `m = i`.
    pub leakage: Vec<f64>,
    transitions: TransitionMatrix,
}

impl DecayModel {
    pub fn is_stable(&self) -> bool {
        self.lifetime.is_infinite()
    }

    pub fn dt_over_tau(&self) -> f64 {
        self.spacing / self.lifetime
    }

    pub fn transition_matrix(&self) -> &TransitionMatrix {
        &self.transitions
    }

    /// Excited-state population at `t_k = k Δt₀`, `k = 0..=k_max`.
    pub fn survival(&self, k_max: usize, regime: DecayRegime) -> Vec<f64> {
        match regime {
            DecayRegime::Open => survival_recurrence(self, k_max),
            DecayRegime::Closed => {
                let d = self.transitions.dim();
                let mut p = PopulationVector::indicator(d, self.initial_index);
                let mut out = Vec::with_capacity(k_max + 1);
                out.push(1.0);
                for _ in 0..k_max {
                    p = step_populations(&self.transitions, &p).expect("dimensions agree");
                    out.push(p.as_slice()[self.initial_index]);
                }
                out
            }
        }
    }
}

pub fn build_decay_model(
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    initial_index: usize,
    spacing: f64,
) -> Result<DecayModel> {
    if spacing <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    if initial_index >= basis.len() {
        return Err(Error::InvalidParameter(format!(
            "initial index {initial_index} out of range for dimension {}",
            basis.len()
        )));
    }
    let transitions = transition_matrix(h, basis, spacing)?;
    let leakage: Vec<f64> = transitions
        .entries()
        .column(initial_index)
        .iter()
        .copied()
        .collect();
    let survival_amplitude_sq = leakage[initial_index].clamp(0.0, 1.0);
    let escape: f64 = leakage
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != initial_index)
        .map(|(_, p)| p)
        .sum();
    let completeness = (survival_amplitude_sq - (1.0 - escape)).abs();
    if completeness > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "survival and leakage do not sum to one (defect {completeness:e})"
        )));
    }
    let lifetime = if escape > 0.0 {
        spacing / escape
    } else {
        f64::INFINITY
    };
    Ok(DecayModel {
        initial_index,
        survival_amplitude_sq,
        lifetime,
        spacing,
        leakage,
        transitions,
    })
}

/// `p_i(t_k) = s^k` with `s` the survival probability.
pub fn survival_recurrence(model: &DecayModel, k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut p = 1.0;
    out.push(p);
    for _ in 0..k_max {
        p *= model.survival_amplitude_sq;
        out.push(p);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialComparison {
    /// `max_k |p_i(t_k) - e^{-t_k/τ}| / e^{-t_k/τ}`.
    pub max_relative_deviation: f64,
    pub dt_over_tau: f64,
    /// Whether `Δt₀ / τ` is small enough for the exponential law to apply.
    pub within_validity: bool,
}

/// Compares the open-model recurrence with `e^{-t/τ}` for `k ≤ k_max`.
pub fn exponential_compare(model: &DecayModel, k_max: usize) -> ExponentialComparison {
    let series = survival_recurrence(model, k_max);
    let max_relative_deviation = series
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let t = k as f64 * model.spacing;
            let reference = (-t / model.lifetime).exp();
            ((p - reference) / reference).abs()
        })
        .fold(0.0, f64::max);
    let dt_over_tau = model.dt_over_tau();
    ExponentialComparison {
        max_relative_deviation,
        dt_over_tau,
        within_validity: dt_over_tau <= VALIDITY_LIMIT,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems;

    #[test]
    fn diagonal_hamiltonian_is_stable() {
        let h = HamiltonianOperator::diagonal(&[1.0, 0.0, 0.0]);
        let m = build_decay_model(&h, &MixtureBasis::standard(3), 0, 0.5).unwrap();
        assert_eq!(m.survival_amplitude_sq, 1.0);
        assert!(m.is_stable());
        assert!(survival_recurrence(&m, 10).iter().all(|&p| p == 1.0));
    }

    #[test]
    fn two_level_closed_form() {
        let g = 0.3;
        let dt = 0.4;
        let m = build_decay_model(
            &systems::rabi_hamiltonian(g),
            &MixtureBasis::standard(2),
            0,
            dt,
        )
        .unwrap();
        assert!((m.survival_amplitude_sq - (g * dt).cos().powi(2)).abs() < 1e-14);
        assert!((1.0 / m.lifetime - (g * dt).sin().powi(2) / dt).abs() < 1e-13);
    }

    #[test]
    fn star_lifetime_sums_leakage() {
        let couplings = [0.1, 0.2, 0.15, 0.05];
        let h = systems::star(0.0, &couplings);
        let dt = 0.3;
        let m = build_decay_model(&h, &MixtureBasis::standard(5), 0, dt).unwrap();
        let leak: f64 = m.leakage[1..].iter().sum();
        assert!((1.0 / m.lifetime - leak / dt).abs() < 1e-13);
        // Resonant star: the excited amplitude is cos(G t) with G² = Σ g².
        let big_g = couplings.iter().map(|g| g * g).sum::<f64>().sqrt();
        assert!((m.survival_amplitude_sq - (big_g * dt).cos().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn recurrence_power_law() {
        let (h, dt) = systems::two_level_decay(0.01, 1.0);
        let m = build_decay_model(&h, &MixtureBasis::standard(2), 0, dt).unwrap();
        assert!((m.survival_amplitude_sq - 0.99).abs() < 1e-12);
        let s = survival_recurrence(&m, 100);
        assert!((s[100] - 0.99f64.powi(100)).abs() < 1e-12);
        assert!((s[100] - 0.3660).abs() < 1e-4);
        assert!(s.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn large_ratio_is_flagged() {
        let (h, dt) = systems::two_level_decay(0.5, 1.0);
        let m = build_decay_model(&h, &MixtureBasis::standard(2), 0, dt).unwrap();
        let cmp = exponential_compare(&m, 10);
        assert!(!cmp.within_validity);
        assert!(cmp.max_relative_deviation > 0.5);
    }

    #[test]
    fn closed_regime_recurs() {
        let (h, dt) = systems::two_level_decay(0.3, 1.0);
        let m = build_decay_model(&h, &MixtureBasis::standard(2), 0, dt).unwrap();
        let closed = m.survival(50, DecayRegime::Closed);
        let open = m.survival(50, DecayRegime::Open);
        assert!((closed[50] - 0.5).abs() < 1e-6);
        assert!(open[50] < 1e-6);
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = systems::rabi_hamiltonian(1.0);
        assert!(build_decay_model(&h, &MixtureBasis::standard(2), 2, 0.1).is_err());
        assert!(build_decay_model(&h, &MixtureBasis::standard(2), 0, 0.0).is_err());
    }
}
