//! The population Markov chain of a commuting transition sequence.
//!
//! With equally spaced transitions the populations obey
//! `p(t_{k+1}) = T p(t_k)` where `T_nm = |⟨γ_n|U(Δt₀)|γ_m⟩|²`. Unitarity
//! makes `T` doubly stochastic, so the uniform distribution is always
//! stationary. Rates `w_mn = T_mn / Δt₀` feed the Pauli rate equations,
//! the continuum approximation of the chain.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{HamiltonianOperator, MixtureBasis};
use crate::transition::EnergySectors;

/// Row and column sums of a transition matrix must be within this of 1.
pub const STOCHASTIC_TOL: f64 = 1e-10;
/// Population vectors must sum to 1 within this.
pub const POPULATION_SUM_TOL: f64 = 1e-10;
/// Entries below this are treated as absent edges in the chain graph.
pub const EDGE_TOL: f64 = 1e-12;

/// `T_nm = |⟨γ_n|U(Δt₀)|γ_m⟩|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: DMatrix<f64>,
    spacing: f64,
}

impl TransitionMatrix {
    /// Wraps explicit entries, checking that they form a doubly stochastic matrix.
    pub fn from_entries(entries: DMatrix<f64>, spacing: f64) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if entries
            .iter()
            .any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x))
        {
            return Err(Error::InvalidParameter(
                "transition entries must lie in [0, 1]".into(),
            ));
        }
        let t = Self { entries, spacing };
        let defect = t.stochastic_defect();
        if defect > STOCHASTIC_TOL {
            return Err(Error::InvalidParameter(format!(
                "matrix is not doubly stochastic (defect {defect:e})"
            )));
        }
        Ok(t)
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest deviation of any row or column sum from 1.
    /// Largest `T_nm` with `n ≠ m`.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|ij| self.entries[ij])
            .fold(0.0, f64::max)
    }

    pub fn stochastic_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            worst = worst.max((self.entries.row(i).sum() - 1.0).abs());
            worst = worst.max((self.entries.column(i).sum() - 1.0).abs());
        }
        worst
    }
}

pub fn transition_matrix(
    h: &HamiltonianOperator,
    basis: &MixtureBasis,
    spacing: f64,
) -> Result<TransitionMatrix> {
    if !(spacing >= 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "spacing must be non-negative, got {spacing}"
        )));
    }
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: basis.dim(),
        });
    }
    let u = h.propagator(spacing).in_basis(basis);
    Ok(TransitionMatrix {
        entries: u.map(|z| z.norm_sqr()),
        spacing,
    })
}

/// `w_mn = T_mn / Δt₀`, in inverse time units.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    entries: DMatrix<f64>,
    spacing: f64,
}

impl RateMatrix {
    pub fn from_transition(t: &TransitionMatrix) -> Result<Self> {
        if t.spacing <= 0.0 {
            return Err(Error::InvalidParameter(
                "rates need a positive spacing".into(),
            ));
        }
        Ok(Self {
            entries: t.entries.map(|x| x.max(0.0) / t.spacing),
            spacing: t.spacing,
        })
    }

    /// Rates given directly; `spacing` only records the chain step they came from.
    pub fn from_entries(entries: DMatrix<f64>, spacing: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "rates must be finite and non-negative".into(),
            ));
        }
        Ok(Self { entries, spacing })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Total rate out of state `n`, `Σ_{m≠n} w_mn`.
    pub fn exit_rate(&self, n: usize) -> f64 {
        (0..self.dim())
            .filter(|&m| m != n)
            .map(|m| self.entries[(m, n)])
            .sum()
    }

    /// Generator `Q` of the Pauli equations, `dp/dt = Q p`.
    pub fn generator(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |n, m| {
            if n == m {
                -self.exit_rate(n)
            } else {
                self.entries[(n, m)]
            }
        })
    }

    /// `1 / gap`, where the gap is the smallest nonzero decay rate of the
    /// generator. `None` when every mode is stationary.
    pub fn relaxation_time(&self) -> Option<f64> {
        let eig = self.generator().complex_eigenvalues();
        let scale = (0..self.dim())
            .map(|n| self.exit_rate(n))
            .fold(0.0, f64::max);
        let floor = 1e-9 * scale.max(f64::MIN_POSITIVE);
        eig.iter()
            .map(|z| -z.re)
            .filter(|&r| r > floor)
            .fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.min(r)))
            })
            .map(|gap| 1.0 / gap)
    }
}

/// A normalized, non-negative probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector(Vec<f64>);

impl PopulationVector {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|&p| p < -1e-12 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "populations must be non-negative".into(),
            ));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > POPULATION_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "populations sum to {sum}, not 1"
            )));
        }
        Ok(Self(probabilities))
    }

    pub fn uniform(d: usize) -> Self {
        Self(vec![1.0 / d as f64; d])
    }

    pub fn indicator(d: usize, k: usize) -> Self {
        let mut p = vec![0.0; d];
        p[k] = 1.0;
        Self(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn max_distance(&self, other: &PopulationVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_pair(d: usize, p: &PopulationVector) -> Result<()> {
    if d != p.len() {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    Ok(())
}

fn apply(t: &TransitionMatrix, p: &[f64]) -> Vec<f64> {
    let v = &t.entries * DVector::from_column_slice(p);
    v.iter().copied().collect()
}

/// `p'_n = Σ_m T_nm p_m`.
pub fn step_populations(t: &TransitionMatrix, p: &PopulationVector) -> Result<PopulationVector> {
    check_pair(t.dim(), p)?;
    Ok(PopulationVector(apply(t, &p.0)))
}

/// Net probability flow per unit time, `(T p - p) / Δt₀`.
pub fn net_balance(t: &TransitionMatrix, p: &PopulationVector) -> Result<Vec<f64>> {
    check_pair(t.dim(), p)?;
    if t.spacing <= 0.0 {
        return Err(Error::InvalidParameter(
            "net balance needs a positive spacing".into(),
        ));
    }
    Ok(apply(t, &p.0)
        .iter()
        .zip(&p.0)
        .map(|(next, now)| (next - now) / t.spacing)
        .collect())
}

/// `Σ_{m≠n} [w_nm p_m - w_mn p_n]` for each `n`.
pub fn rate_balance(w: &RateMatrix, p: &PopulationVector) -> Result<Vec<f64>> {
    check_pair(w.dim(), p)?;
    let d = w.dim();
    Ok((0..d)
        .map(|n| {
            (0..d)
                .filter(|&m| m != n)
                .map(|m| w.entries[(n, m)] * p.0[m] - w.entries[(m, n)] * p.0[n])
                .sum()
        })
        .collect())
}

/// Connectivity and periodicity of the chain graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainDiagnostics {
    pub irreducible: bool,
    /// Period of the class containing state 0 (1 means aperiodic).
    pub period: usize,
}

impl ChainDiagnostics {
    pub fn ergodic(&self) -> bool {
        self.irreducible && self.period == 1
    }
}

pub fn chain_diagnostics(t: &TransitionMatrix) -> ChainDiagnostics {
    let d = t.dim();
    if d == 0 {
        return ChainDiagnostics {
            irreducible: true,
            period: 1,
        };
    }
    // Edge m -> n when T_nm > 0.
    let edge = |from: usize, to: usize| t.entries[(to, from)] > EDGE_TOL;
    let reach = |forward: bool| {
        let mut seen = vec![false; d];
        let mut level = vec![usize::MAX; d];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        level[0] = 0;
        while let Some(u) = queue.pop_front() {
            for v in 0..d {
                let connected = if forward { edge(u, v) } else { edge(v, u) };
                if connected && !seen[v] {
                    seen[v] = true;
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (seen, level)
    };
    let (fwd, level) = reach(true);
    let (bwd, _) = reach(false);
    let irreducible = fwd.iter().zip(&bwd).all(|(a, b)| *a && *b);

    let mut period = 0usize;
    for u in 0..d {
        for v in 0..d {
            if fwd[u] && fwd[v] && edge(u, v) {
                let diff = (level[u] + 1).abs_diff(level[v]);
                period = gcd(period, diff);
            }
        }
    }
    ChainDiagnostics {
        irreducible,
        period: period.max(1),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    pub distribution: PopulationVector,
    /// `‖T p - p‖∞` at the returned iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostics: ChainDiagnostics,
}

/// Lazy power iteration from the uniform start.
pub fn stationary_distribution(
    t: &TransitionMatrix,
    tol: f64,
    max_iters: usize,
) -> Result<StationaryResult> {
    stationary_distribution_from(t, &PopulationVector::uniform(t.dim()), tol, max_iters)
}

/// Stationary distribution of `T`, reached from `start` if it is not unique.
///
/// An irreducible chain has a unique stationary vector, found by direct
/// elimination. Otherwise, or when the solve misses `tol`, lazy power
/// iteration `p ← (T p + p) / 2` runs until `‖T p - p‖∞ < tol`. Averaging with the identity removes periodic
/// cycles. Non-convergence is reported through `converged` with the best
/// iterate returned.
pub fn stationary_distribution_from(
    t: &TransitionMatrix,
    start: &PopulationVector,
    tol: f64,
    max_iters: usize,
) -> Result<StationaryResult> {
    check_pair(t.dim(), start)?;
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let residual_of = |p: &[f64], tp: &[f64]| {
        p.iter()
            .zip(tp)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let diagnostics = chain_diagnostics(t);
    let mut p = match diagnostics
        .irreducible
        .then(|| solve_stationary(t))
        .flatten()
    {
        Some(solved) => solved,
        None => start.0.clone(),
    };
    let mut tp = apply(t, &p);
    let mut residual = residual_of(&p, &tp);
    let mut best = (residual, p.clone());
    let mut iterations = 0;
    while residual >= tol && iterations < max_iters {
        for (x, y) in p.iter_mut().zip(&tp) {
            *x = 0.5 * (*x + y);
        }
        tp = apply(t, &p);
        residual = residual_of(&p, &tp);
        if residual < best.0 {
            best = (residual, p.clone());
        }
        iterations += 1;
    }
    Ok(StationaryResult {
        distribution: PopulationVector(best.1),
        residual: best.0,
        iterations,
        converged: best.0 < tol,
        diagnostics,
    })
}

/// Grassmann–Taksar–Heyman elimination.
///
/// Works on off-diagonal probabilities only and never subtracts, so the
/// result keeps full relative accuracy even for slowly mixing chains.
/// `None` if elimination meets a state with no remaining exit, which
/// cannot happen for an irreducible chain.
fn solve_stationary(t: &TransitionMatrix) -> Option<Vec<f64>> {
    let d = t.dim();
    if d == 0 {
        return None;
    }
    // row-stochastic: p[i][j] is the probability of i -> j
    let mut p = t.entries.transpose();
    for k in (1..d).rev() {
        let s: f64 = (0..k).map(|j| p[(k, j)]).sum();
        if s <= 0.0 {
            return None;
        }
        for i in 0..k {
            p[(i, k)] /= s;
        }
        for i in 0..k {
            let pik = p[(i, k)];
            for j in 0..k {
                p[(i, j)] += pik * p[(k, j)];
            }
        }
    }
    let mut pi = vec![0.0; d];
    pi[0] = 1.0;
    for k in 1..d {
        pi[k] = (0..k).map(|i| pi[i] * p[(i, k)]).sum();
    }
    let sum: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= sum);
    Some(pi)
}

/// Largest `|w_mn p_n - w_nm p_m|` over distinct same-energy pairs.
pub fn detailed_balance_residual(
    w: &RateMatrix,
    p: &PopulationVector,
    sectors: &EnergySectors,
) -> Result<f64> {
    check_pair(w.dim(), p)?;
    if sectors.diagonal_energies.len() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: sectors.diagonal_energies.len(),
        });
    }
    let d = w.dim();
    let mut worst = 0.0_f64;
    for m in 0..d {
        for n in (m + 1)..d {
            if sectors.same_energy(m, n) {
                let flow = w.entries[(m, n)] * p.0[n] - w.entries[(n, m)] * p.0[m];
                worst = worst.max(flow.abs());
            }
        }
    }
    Ok(worst)
}

pub fn detailed_balance_check(
    w: &RateMatrix,
    p: &PopulationVector,
    sectors: &EnergySectors,
    tol: f64,
) -> Result<bool> {
    Ok(detailed_balance_residual(w, p, sectors)? < tol)
}

/// Populations sampled at each integration step, starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSeries {
    pub times: Vec<f64>,
    pub populations: Vec<PopulationVector>,
}

/// Integrates `dp_n/dt = Σ_{m≠n} [w_nm p_m - w_mn p_n]` with classical
/// fourth-order Runge–Kutta at fixed step `dt`; the final step is
/// shortened to land on `t_end`.
pub fn pauli_integrate(
    w: &RateMatrix,
    p0: &PopulationVector,
    t_end: f64,
    dt: f64,
) -> Result<PauliSeries> {
    check_pair(w.dim(), p0)?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "invalid dt {dt} or t_end {t_end}"
        )));
    }
    let max_exit = (0..w.dim()).map(|n| w.exit_rate(n)).fold(0.0, f64::max);
    if dt * max_exit > 0.5 {
        return Err(Error::UnstableStep(dt * max_exit));
    }
    let q = w.generator();
    let rhs = |p: &DVector<f64>| &q * p;

    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut populations = Vec::with_capacity(steps + 1);
    let mut p = DVector::from_column_slice(p0.as_slice());
    times.push(0.0);
    populations.push(p0.clone());
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * dt;
        let t_next = if k == steps { t_end } else { k as f64 * dt };
        let h = t_next - t_prev;
        let k1 = rhs(&p);
        let k2 = rhs(&(&p + &k1 * (h / 2.0)));
        let k3 = rhs(&(&p + &k2 * (h / 2.0)));
        let k4 = rhs(&(&p + &k3 * h));
        p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        times.push(t_next);
        populations.push(PopulationVector(p.iter().copied().collect()));
    }
    Ok(PauliSeries { times, populations })
}
