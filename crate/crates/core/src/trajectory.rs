//! Monte Carlo trajectories: each realization jumps to a single mixture
//! state at every transition, chosen by the Born rule conditioned on the
//! state it currently occupies.
//!
//! Trajectory `i` of an ensemble is seeded with `base_seed + i` using
//! ChaCha8, so ensembles are reproducible bit for bit and independent of
//! execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{
    evolve_density, evolve_state, DensityMatrix, HamiltonianOperator, MixtureBasis, StateVector,
};
use crate::transition::{born_probabilities, run_sequence, FinderConfig};

/// Name of the generator, recorded in run metadata.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(base_seed + index)";

/// When transitions happen.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// Every `Δt₀`, starting at `t₁ = Δt₀`.
    Fixed(f64),
    /// Times from the transition-time finder applied to the ensemble.
    Finder(FinderConfig),
}

impl Schedule {
    /// Transition times `t_1 .. t_k` (possibly fewer than `k_max`).
    pub fn resolve(
        &self,
        psi0: &StateVector,
        h: &HamiltonianOperator,
        basis: &MixtureBasis,
        k_max: usize,
    ) -> Result<Vec<f64>> {
        match self {
            Schedule::Fixed(spacing) => {
                if !(*spacing > 0.0 && spacing.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "spacing must be positive, got {spacing}"
                    )));
                }
                Ok((1..=k_max).map(|k| k as f64 * spacing).collect())
            }
            Schedule::Finder(cfg) => Ok(run_sequence(psi0, h, basis, k_max, cfg)?.times()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub jumps: Vec<Jump>,
    /// State after the last jump; `None` when no jump happened.
    pub final_index: Option<usize>,
}

/// Conditional jump probabilities from each basis state over each interval.
struct JumpTables {
    first: Vec<f64>,
    /// `intervals[k][m][n] = |⟨γ_n|U(t_{k+1} - t_k)|γ_m⟩|²` for `k ≥ 1`.
    intervals: Vec<Vec<Vec<f64>>>,
}

impl JumpTables {
    fn build(
        psi0: &StateVector,
        h: &HamiltonianOperator,
        basis: &MixtureBasis,
        times: &[f64],
    ) -> Result<Self> {
        let first = match times.first() {
            Some(&t1) => {
                let u = h.propagator(t1);
                born_probabilities(&evolve_state(&u, psi0)?, basis)?
            }
            None => Vec::new(),
        };
        let mut intervals = Vec::new();
        for pair in times.windows(2) {
            let u = h.propagator(pair[1] - pair[0]).in_basis(basis);
            let d = basis.len();
            intervals.push(
                (0..d)
                    .map(|m| (0..d).map(|n| u[(n, m)].norm_sqr()).collect())
                    .collect(),
            );
        }
        Ok(Self { first, intervals })
    }
}

fn sample_index(rng: &mut ChaCha8Rng, probabilities: &[f64]) -> usize {
    let u: f64 = rng.random();
    let total: f64 = probabilities.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_nonzero = i;
        acc += p;
        if target < acc {
            return i;
        }
    }
    last_nonzero
}

fn sample_with_tables(tables: &JumpTables, times: &[f64], seed: u64) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jumps = Vec::with_capacity(times.len());
    let mut current = None;
    for (k, &time) in times.iter().enumerate() {
        let probabilities = match current {
            None => &tables.first,
            Some(m) => &tables.intervals[k - 1][m],
        };
        let index = sample_index(&mut rng, probabilities);
        jumps.push(Jump { time, index });
        current = Some(index);
    }
    Trajectory {
        seed,
        jumps,
        final_index: current,
    }
}

/// Samples one trajectory with up to `k_max` jumps.
pub fn sample_trajectory(
    psi0: &StateVector,
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    schedule: &Schedule,
    k_max: usize,
    seed: u64,
) -> Result<Trajectory> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let times = schedule.resolve(psi0, h, basis, k_max)?;
    let tables = JumpTables::build(psi0, h, basis, &times)?;
    Ok(sample_with_tables(&tables, &times, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Empirical populations over an ensemble.
///
/// Row 0 holds the Born populations of the initial state; row `k ≥ 1`
/// holds the fraction of trajectories in each state right after `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate {
    pub n_trajectories: usize,
    pub base_seed: u64,
    /// `t_0 = 0, t_1, ..`.
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub standard_errors: Vec<Vec<f64>>,
}

#[allow(clippy::too_many_arguments)]
pub fn ensemble_populations(
    psi0: &StateVector,
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    schedule: &Schedule,
    k_max: usize,
    n_trajectories: usize,
    base_seed: u64,
    execution: Execution,
) -> Result<EnsembleEstimate> {
    if n_trajectories == 0 {
        return Err(Error::InvalidParameter(
            "need at least one trajectory".into(),
        ));
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let times = schedule.resolve(psi0, h, basis, k_max)?;
    let tables = JumpTables::build(psi0, h, basis, &times)?;
    let d = basis.len();
    let steps = times.len();

    let count_one = |i: usize| {
        let traj = sample_with_tables(&tables, &times, base_seed.wrapping_add(i as u64));
        let mut counts = vec![0u64; steps * d];
        for (k, jump) in traj.jumps.iter().enumerate() {
            counts[k * d + jump.index] += 1;
        }
        counts
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    let counts = match execution {
        Execution::Serial => (0..n_trajectories)
            .map(count_one)
            .fold(vec![0u64; steps * d], merge),
        Execution::Parallel => (0..n_trajectories)
            .into_par_iter()
            .map(count_one)
            .reduce(|| vec![0u64; steps * d], merge),
    };

    let n = n_trajectories as f64;
    let mut populations = vec![born_probabilities(psi0, basis)?];
    populations.extend((0..steps).map(|k| {
        (0..d)
            .map(|j| counts[k * d + j] as f64 / n)
            .collect::<Vec<_>>()
    }));
    let standard_errors = populations
        .iter()
        .map(|row| {
            row.iter()
                .map(|&p| (p * (1.0 - p) / n).max(0.0).sqrt())
                .collect()
        })
        .collect();
    let mut all_times = vec![0.0];
    all_times.extend(times);
    Ok(EnsembleEstimate {
        n_trajectories,
        base_seed,
        times: all_times,
        populations,
        standard_errors,
    })
}

/// Exact ensemble populations at `0, t_1, ..` via density-matrix collapse.
pub fn exact_populations(
    psi0: &StateVector,
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    times: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let mut rows = vec![born_probabilities(psi0, basis)?];
    let mut prev_time = 0.0;
    let mut w = DensityMatrix::pure(psi0);
    for &t in times {
        w = evolve_density(&h.propagator(t - prev_time), &w)?;
        let pops = w.populations(basis);
        w = DensityMatrix::from_populations(basis, &pops)?;
        rows.push(pops);
        prev_time = t;
    }
    Ok(rows)
}
