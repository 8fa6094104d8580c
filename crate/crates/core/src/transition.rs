//! Stochastic transitions in a closed system.
//!
//! A transition replaces `W₋ = U W₊ U†` by its diagonal in the mixture
//! basis. Energy conservation restricts the final mixture to basis states
//! whose diagonal energy equals the initial energy; the transition time is
//! the earliest positive time at which every energy-violating amplitude
//! vanishes, skipping times at which the collapse would leave a single
//! state (those are ordinary unitary evolution, not transitions).

use crate::error::{Error, Result};
use crate::hilbert::{
    energy_expectation, evolve_density, CVector, DensityMatrix, HamiltonianOperator, MixtureBasis,
    StateVector,
};
use crate::minimize::golden_section;

/// Tolerances and search parameters for the transition-time finder.
#[derive(Debug, Clone, PartialEq)]
pub struct FinderConfig {
    /// Length of the search window following each transition.
    pub window: f64,
    /// Number of grid intervals scanned across the window.
    pub grid_points: usize,
    /// Largest violating amplitude accepted as zero.
    pub amp_tol: f64,
    /// Energy tolerance, relative to the spectral range of `H`.
    pub energy_tol: f64,
    /// Populations at or below this are treated as empty.
    pub pop_tol: f64,
    /// Equal-spacing tolerance, relative to the first interval.
    pub timing_tol: f64,
    /// Max-norm tolerance for the commutator of successive mixtures.
    pub commute_tol: f64,
    /// Grid minima above this objective value are not refined.
    pub coarse_threshold: f64,
}

impl Default for FinderConfig {
    fn default() -> Self {
        Self {
            window: 10.0,
            grid_points: 2000,
            amp_tol: 1e-8,
            energy_tol: 1e-9,
            pop_tol: 1e-9,
            timing_tol: 1e-6,
            commute_tol: 1e-10,
            coarse_threshold: 1.0,
        }
    }
}

impl FinderConfig {
    /// Absolute energy tolerance for `h`.
    pub fn absolute_energy_tol(&self, h: &HamiltonianOperator) -> f64 {
        let values = &h.eigen().values;
        let range = if values.is_empty() {
            0.0
        } else {
            values[values.len() - 1] - values[0]
        };
        if range > 0.0 {
            self.energy_tol * range
        } else {
            self.energy_tol
        }
    }
}

/// Partition of the mixture basis by diagonal energy relative to `E₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySectors {
    pub reference_energy: f64,
    pub diagonal_energies: Vec<f64>,
    pub conserving: Vec<usize>,
    pub violating: Vec<usize>,
    pub energy_tol: f64,
}

impl EnergySectors {
    pub fn is_conserving(&self, n: usize) -> bool {
        self.conserving.binary_search(&n).is_ok()
    }

    /// True when no basis state shares the initial energy, so no final
    /// mixture can ever be formed.
    pub fn no_conserving_states(&self) -> bool {
        self.conserving.is_empty()
    }

    /// Whether basis states `m` and `n` have equal diagonal energy.
    pub fn same_energy(&self, m: usize, n: usize) -> bool {
        (self.diagonal_energies[m] - self.diagonal_energies[n]).abs() <= self.energy_tol
    }
}

/// One stochastic transition.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRecord {
    /// 1-based transition index.
    pub index: usize,
    pub time: f64,
    pub populations: Vec<f64>,
    pub pre_density: DensityMatrix,
    pub post_density: DensityMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceStatus {
    /// `k_max` transitions were recorded.
    Completed,
    /// The finder found no admissible time in the window.
    NoFurtherTransitions,
    /// No basis state conserves the initial energy.
    NoConservingStates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceResult {
    pub records: Vec<TransitionRecord>,
    pub sectors: EnergySectors,
    /// Every pair of successive post-transition mixtures commutes.
    pub commuting: bool,
    /// Common interval between transitions, set when the sequence is
    /// commuting and equally spaced.
    pub spacing: Option<f64>,
    pub status: SequenceStatus,
}

impl SequenceResult {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    /// Intervals `t_k - t_{k-1}` with `t_0 = 0`.
    pub fn intervals(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.records
            .iter()
            .map(|r| {
                let dt = r.time - prev;
                prev = r.time;
                dt
            })
            .collect()
    }
}

/// What a transition starts from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    State(&'a StateVector),
    /// A post-transition mixture, diagonal in the mixture basis.
    Mixture(&'a DensityMatrix),
}

/// Outcome of the transition-time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Timing {
    /// Earliest admissible elapsed time.
    At(f64),
    /// No admissible time in the window.
    NoTransition,
    /// The amplitude condition holds identically; timing is undefined.
    Vacuous,
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `p_n = |⟨γ_n|ψ⟩|²`.
pub fn born_probabilities(psi: &StateVector, basis: &MixtureBasis) -> Result<Vec<f64>> {
    check_dim(basis.dim(), psi.dim())?;
    Ok(basis
        .coefficients(psi)
        .iter()
        .map(|a| a.norm_sqr())
        .collect())
}

/// Collapse of a pure state onto the mixture basis.
pub fn collapse_pure(psi: &StateVector, basis: &MixtureBasis) -> Result<DensityMatrix> {
    let p = born_probabilities(psi, basis)?;
    DensityMatrix::from_populations(basis, &p)
}

/// Collapse of a mixture: keep only the diagonal in the mixture basis.
pub fn collapse_mixture(w: &DensityMatrix, basis: &MixtureBasis) -> Result<DensityMatrix> {
    check_dim(basis.dim(), w.dim())?;
    DensityMatrix::from_populations(basis, &w.populations(basis))
}

pub fn classify_energy_sectors(
    basis: &MixtureBasis,
    h: &HamiltonianOperator,
    psi0: &StateVector,
    energy_tol: f64,
) -> Result<EnergySectors> {
    check_dim(h.dim(), basis.dim())?;
    if energy_tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "energy_tol must be positive, got {energy_tol}"
        )));
    }
    let reference_energy = energy_expectation(psi0, h)?;
    let diagonal_energies: Vec<f64> = (0..basis.len())
        .map(|n| h.diagonal_energy(basis, n))
        .collect();
    let (conserving, violating) = (0..basis.len())
        .partition(|&n| (diagonal_energies[n] - reference_energy).abs() <= energy_tol);
    Ok(EnergySectors {
        reference_energy,
        diagonal_energies,
        conserving,
        violating,
        energy_tol,
    })
}

/// Exactly one population above `pop_tol`, and that one above `1 - pop_tol`.
pub fn is_pure_populations(populations: &[f64], pop_tol: f64) -> bool {
    let mut occupied = populations.iter().filter(|&&p| p > pop_tol);
    match (occupied.next(), occupied.next()) {
        (Some(&p), None) => p > 1.0 - pop_tol,
        _ => false,
    }
}

pub fn is_pure_transition(psi: &StateVector, basis: &MixtureBasis, pop_tol: f64) -> Result<bool> {
    Ok(is_pure_populations(
        &born_probabilities(psi, basis)?,
        pop_tol,
    ))
}

/// Max-norm of `[W_a, W_b]` below `tol`.
pub fn commuting_check(w_a: &DensityMatrix, w_b: &DensityMatrix, tol: f64) -> Result<bool> {
    check_dim(w_a.dim(), w_b.dim())?;
    let (a, b) = (w_a.matrix(), w_b.matrix());
    let commutator = a * b - b * a;
    Ok(commutator.iter().all(|z| z.norm() < tol))
}

/// Evaluates the timing objective and the would-be final populations.
struct TimingProblem<'a> {
    h: &'a HamiltonianOperator,
    basis: &'a MixtureBasis,
    violating: Vec<CVector>,
    sources: Vec<CVector>,
    /// `None` for a pure source, otherwise the populations of each source.
    weights: Option<Vec<f64>>,
}

impl TimingProblem<'_> {
    /// `max |⟨γ_n|U(t)|s⟩|²` over violating `n` and sources `s`.
    fn objective(&self, t: f64) -> f64 {
        let u = self.h.propagator(t);
        let mut worst = 0.0_f64;
        for s in &self.sources {
            let evolved = u.matrix() * s;
            for g in &self.violating {
                worst = worst.max(g.dotc(&evolved).norm_sqr());
            }
        }
        worst
    }

    fn final_populations(&self, t: f64) -> Vec<f64> {
        let u = self.h.propagator(t);
        let n = self.basis.len();
        let mut pops = vec![0.0; n];
        for (k, s) in self.sources.iter().enumerate() {
            let weight = self.weights.as_ref().map_or(1.0, |w| w[k]);
            let evolved = u.matrix() * s;
            for (i, p) in pops.iter_mut().enumerate() {
                *p += weight * self.basis.column(i).dotc(&evolved).norm_sqr();
            }
        }
        pops
    }
}

/// Searches `(t_lo, t_hi]` for the earliest time at which every
/// energy-violating amplitude from the source vanishes.
///
/// The objective is non-negative with touching zeros, so the window is
/// scanned on a uniform grid, each grid-local minimum is refined by
/// golden-section search, and the first refined minimum below `amp_tol²`
/// is accepted unless it lies within one grid step of `t_lo` or the
/// resulting mixture would be a single state.
pub fn find_transition_time(
    source: Source<'_>,
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    sectors: &EnergySectors,
    window: (f64, f64),
    cfg: &FinderConfig,
) -> Result<Timing> {
    let (t_lo, t_hi) = window;
    if !(t_lo >= 0.0 && t_hi > t_lo && t_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "invalid search window ({t_lo}, {t_hi})"
        )));
    }
    if cfg.grid_points < 100 {
        return Err(Error::InvalidParameter(format!(
            "grid_points must be at least 100, got {}",
            cfg.grid_points
        )));
    }
    check_dim(h.dim(), basis.dim())?;
    if sectors.violating.is_empty() {
        return Ok(Timing::Vacuous);
    }

    let (sources, weights) = match source {
        Source::State(psi) => {
            check_dim(basis.dim(), psi.dim())?;
            (vec![psi.amplitudes().clone()], None)
        }
        Source::Mixture(w) => {
            check_dim(basis.dim(), w.dim())?;
            let off = w.max_off_diagonal(basis);
            if off > 1e-10 {
                return Err(Error::NotDiagonalInBasis(off));
            }
            let pops = w.populations(basis);
            let occupied: Vec<usize> = (0..pops.len()).filter(|&m| pops[m] > cfg.pop_tol).collect();
            (
                occupied.iter().map(|&m| basis.column(m)).collect(),
                Some(occupied.iter().map(|&m| pops[m]).collect()),
            )
        }
    };
    let problem = TimingProblem {
        h,
        basis,
        violating: sectors.violating.iter().map(|&n| basis.column(n)).collect(),
        sources,
        weights,
    };

    let n = cfg.grid_points;
    let step = (t_hi - t_lo) / n as f64;
    let grid_time = |i: usize| if i == n { t_hi } else { t_lo + step * i as f64 };
    let values: Vec<f64> = (0..=n).map(|i| problem.objective(grid_time(i))).collect();
    let accept = cfg.amp_tol * cfg.amp_tol;
    if values.iter().all(|&v| v < accept) {
        return Ok(Timing::Vacuous);
    }

    let earliest = t_lo + step;
    for i in 1..=n {
        let is_local_min = values[i] <= values[i - 1] && (i == n || values[i] <= values[i + 1]);
        if !is_local_min || values[i] >= cfg.coarse_threshold {
            continue;
        }
        let a = grid_time(i - 1);
        let b = grid_time((i + 1).min(n));
        let x_tol = (step * 1e-12).max(f64::EPSILON * b.abs() * 4.0);
        let m = golden_section(|t| problem.objective(t), a, b, x_tol, 400);
        if m.value >= accept || m.x <= earliest {
            continue;
        }
        if is_pure_populations(&problem.final_populations(m.x), cfg.pop_tol) {
            continue;
        }
        return Ok(Timing::At(m.x));
    }
    Ok(Timing::NoTransition)
}

/// Runs up to `k_max` transitions from `psi0`, each searched within
/// `cfg.window` of the previous one.
pub fn run_sequence(
    psi0: &StateVector,
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    k_max: usize,
    cfg: &FinderConfig,
) -> Result<SequenceResult> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    check_dim(h.dim(), psi0.dim())?;
    let sectors = classify_energy_sectors(basis, h, psi0, cfg.absolute_energy_tol(h))?;
    let mut records: Vec<TransitionRecord> = Vec::new();
    if sectors.no_conserving_states() {
        return Ok(SequenceResult {
            records,
            sectors,
            commuting: true,
            spacing: None,
            status: SequenceStatus::NoConservingStates,
        });
    }

    let mut status = SequenceStatus::Completed;
    let mut now = 0.0;
    let initial = DensityMatrix::pure(psi0);
    for k in 1..=k_max {
        let timing = match records.last() {
            None => find_transition_time(
                Source::State(psi0),
                h,
                basis,
                &sectors,
                (0.0, cfg.window),
                cfg,
            )?,
            Some(prev) => find_transition_time(
                Source::Mixture(&prev.post_density),
                h,
                basis,
                &sectors,
                (0.0, cfg.window),
                cfg,
            )?,
        };
        let dt = match timing {
            Timing::At(dt) => dt,
            Timing::NoTransition => {
                status = SequenceStatus::NoFurtherTransitions;
                break;
            }
            Timing::Vacuous => return Err(Error::TimingUndefined),
        };
        let before = records.last().map_or(&initial, |r| &r.post_density);
        let pre_density = evolve_density(&h.propagator(dt), before)?;
        let populations = pre_density.populations(basis);
        let post_density = DensityMatrix::from_populations(basis, &populations)?;
        now += dt;
        records.push(TransitionRecord {
            index: k,
            time: now,
            populations,
            pre_density,
            post_density,
        });
    }

    let mut commuting = true;
    for pair in records.windows(2) {
        if !commuting_check(
            &pair[0].post_density,
            &pair[1].post_density,
            cfg.commute_tol,
        )? {
            commuting = false;
            break;
        }
    }
    let mut result = SequenceResult {
        records,
        sectors,
        commuting,
        spacing: None,
        status,
    };
    if commuting {
        let intervals = result.intervals();
        if let Some(&first) = intervals.first() {
            let tol = cfg.timing_tol * first;
            if intervals.iter().all(|dt| (dt - first).abs() < tol) {
                result.spacing = Some(first);
            }
        }
    }
    Ok(result)
}
