//! Scenario files.
//!
//! A scenario is a TOML document with a header (`name`, `mode`), an
//! optional `[system]` table describing the Hamiltonian, mixture basis and
//! initial state, and one table of parameters named after the mode. Unknown
//! keys are rejected. Complex entries are written either as a bare number
//! or as a `[re, im]` pair.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tsd_core::{CMatrix, FinderConfig, HamiltonianOperator, MixtureBasis, StateVector, C64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequence,
    Markov,
    Decay,
    Rabi,
    Mc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sequence => "sequence",
            Mode::Markov => "markov",
            Mode::Decay => "decay",
            Mode::Rabi => "rabi",
            Mode::Mc => "mc",
        }
    }
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> C64 {
        match self {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    /// Only `"standard"` is recognised.
    Named(String),
    /// Rows of a unitary matrix whose columns are the basis vectors.
    Matrix(Vec<Vec<Entry>>),
}

impl Default for BasisSpec {
    fn default() -> Self {
        BasisSpec::Named("standard".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub dimension: usize,
    /// Row-major Hamiltonian.
    pub hamiltonian: Vec<Vec<Entry>>,
    #[serde(default)]
    pub basis: BasisSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RabiSpec {
    #[serde(default = "one")]
    pub omega: f64,
    pub ratio: f64,
    #[serde(default)]
    pub initial_p1: f64,
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples_per_segment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub k_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pop_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_tol: Option<f64>,
}

impl SequenceSpec {
    pub fn finder_config(&self) -> FinderConfig {
        let d = FinderConfig::default();
        FinderConfig {
            window: self.window.unwrap_or(d.window),
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            amp_tol: self.amp_tol.unwrap_or(d.amp_tol),
            energy_tol: self.energy_tol.unwrap_or(d.energy_tol),
            pop_tol: self.pop_tol.unwrap_or(d.pop_tol),
            timing_tol: self.timing_tol.unwrap_or(d.timing_tol),
            ..d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovSpec {
    pub spacing: f64,
    /// Number of chain steps; derived from `relaxation_times` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relaxation_times: Option<f64>,
    /// Pauli integration steps per chain step.
    #[serde(default = "one_step")]
    pub pauli_substeps: usize,
    #[serde(default = "default_stationary_tol")]
    pub stationary_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_balance_tol")]
    pub balance_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySpec {
    /// Builds a two-level model with this `Δt₀/τ` when no `[system]` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_over_tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Required with a `[system]` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    /// Run length in lifetimes when `k_max` is absent.
    #[serde(default = "five")]
    pub lifetimes: f64,
    #[serde(default = "default_deviation_bound")]
    pub deviation_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Fixed,
    Finder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub schedule: ScheduleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    /// Finder parameters for `schedule = "finder"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    pub k_max: usize,
    pub trajectories: usize,
    pub base_seed: u64,
    #[serde(default = "yes")]
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<RabiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markov: Option<MarkovSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecaySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSpec>,
}

fn one() -> f64 {
    1.0
}
fn five() -> f64 {
    5.0
}
fn yes() -> bool {
    true
}
fn one_step() -> usize {
    1
}
fn default_samples() -> usize {
    50
}
fn default_stationary_tol() -> f64 {
    1e-13
}
fn default_max_iters() -> usize {
    1_000_000
}
fn default_balance_tol() -> f64 {
    1e-9
}
fn default_deviation_bound() -> f64 {
    0.03
}

/// Core objects built from a `[system]` table.
#[derive(Debug, Clone)]
pub struct System {
    pub hamiltonian: HamiltonianOperator,
    pub basis: MixtureBasis,
    pub initial: StateVector,
}

fn parse_error(origin: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: origin.to_string(),
        message: message.into(),
    }
}

fn square_matrix(
    origin: &str,
    what: &str,
    rows: &[Vec<Entry>],
    d: usize,
) -> Result<CMatrix, CliError> {
    if rows.len() != d {
        return Err(parse_error(
            origin,
            format!("{what}: expected {d} rows, found {}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(parse_error(
                origin,
                format!("{what}: row {i} has {} entries, expected {d}", row.len()),
            ));
        }
    }
    Ok(CMatrix::from_fn(d, d, |i, j| rows[i][j].value()))
}

impl SystemSpec {
    pub fn build(&self, origin: &str) -> Result<System, CliError> {
        let d = self.dimension;
        if d == 0 {
            return Err(parse_error(origin, "system.dimension must be at least 1"));
        }
        let h = square_matrix(origin, "system.hamiltonian", &self.hamiltonian, d)?;
        let hamiltonian = HamiltonianOperator::new(h).map_err(|e| match e {
            tsd_core::Error::NotHermitian { row, col, deviation } => parse_error(
                origin,
                format!(
                    "system.hamiltonian entry [{row}][{col}] is not the complex conjugate of entry [{col}][{row}] (difference {deviation:e})"
                ),
            ),
            other => parse_error(origin, format!("system.hamiltonian: {other}")),
        })?;
        let basis = match &self.basis {
            BasisSpec::Named(name) if name == "standard" => MixtureBasis::standard(d),
            BasisSpec::Named(name) => {
                return Err(parse_error(
                    origin,
                    format!("system.basis: unknown basis \"{name}\""),
                ))
            }
            BasisSpec::Matrix(rows) => {
                let m = square_matrix(origin, "system.basis", rows, d)?;
                MixtureBasis::from_columns(m)
                    .map_err(|e| parse_error(origin, format!("system.basis: {e}")))?
            }
        };
        let initial = match (&self.initial_index, &self.initial_state) {
            (Some(k), None) if *k < d => StateVector::basis(d, *k),
            (Some(k), None) => {
                return Err(parse_error(
                    origin,
                    format!("system.initial_index {k} out of range"),
                ))
            }
            (None, Some(amps)) if amps.len() == d => {
                StateVector::normalized(amps.iter().map(|e| e.value()).collect())
                    .map_err(|e| parse_error(origin, format!("system.initial_state: {e}")))?
            }
            (None, Some(amps)) => {
                return Err(parse_error(
                    origin,
                    format!(
                        "system.initial_state has {} entries, expected {d}",
                        amps.len()
                    ),
                ))
            }
            _ => {
                return Err(parse_error(
                    origin,
                    "system needs exactly one of initial_index or initial_state",
                ))
            }
        };
        Ok(System {
            hamiltonian,
            basis,
            initial,
        })
    }
}

impl Scenario {
    /// Parses and validates TOML text; `origin` names the source in errors.
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, CliError> {
        let scenario: Scenario =
            toml::from_str(text).map_err(|e| parse_error(origin, e.to_string().trim_end()))?;
        scenario.validate(origin)?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks that the parameters the mode needs are present and sane.
    pub fn validate(&self, origin: &str) -> Result<(), CliError> {
        let missing = |table: &str| {
            parse_error(
                origin,
                format!("mode \"{}\" requires a [{table}] table", self.mode.name()),
            )
        };
        let need_system = || self.system.as_ref().ok_or_else(|| missing("system"));
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(parse_error(
                    origin,
                    format!("{key} must be positive, got {v}"),
                ))
            }
        };
        if let Some(sys) = &self.system {
            sys.build(origin)?;
        }
        match self.mode {
            Mode::Rabi => {
                let r = self.rabi.as_ref().ok_or_else(|| missing("rabi"))?;
                positive("rabi.omega", r.omega)?;
                positive("rabi.ratio", r.ratio)?;
                positive("rabi.t_end", r.t_end)?;
                if !(0.0..=1.0).contains(&r.initial_p1) {
                    return Err(parse_error(origin, "rabi.initial_p1 must be in [0, 1]"));
                }
                if r.samples_per_segment < 2 {
                    return Err(parse_error(
                        origin,
                        "rabi.samples_per_segment must be at least 2",
                    ));
                }
            }
            Mode::Sequence => {
                need_system()?;
                let s = self.sequence.as_ref().ok_or_else(|| missing("sequence"))?;
                if s.k_max == 0 {
                    return Err(parse_error(origin, "sequence.k_max must be at least 1"));
                }
                if s.grid_points.is_some_and(|g| g < 100) {
                    return Err(parse_error(
                        origin,
                        "sequence.grid_points must be at least 100",
                    ));
                }
            }
            Mode::Markov => {
                need_system()?;
                let m = self.markov.as_ref().ok_or_else(|| missing("markov"))?;
                positive("markov.spacing", m.spacing)?;
                if m.pauli_substeps == 0 {
                    return Err(parse_error(
                        origin,
                        "markov.pauli_substeps must be at least 1",
                    ));
                }
                if m.k_max.is_none() && m.relaxation_times.is_none() {
                    return Err(parse_error(
                        origin,
                        "markov needs k_max or relaxation_times",
                    ));
                }
            }
            Mode::Decay => {
                let d = self.decay.as_ref().ok_or_else(|| missing("decay"))?;
                match (&self.system, d.dt_over_tau, d.spacing) {
                    (None, Some(x), _) => {
                        if !(x > 0.0 && x <= 1.0) {
                            return Err(parse_error(origin, "decay.dt_over_tau must be in (0, 1]"));
                        }
                    }
                    (Some(_), None, Some(s)) => positive("decay.spacing", s)?,
                    _ => {
                        return Err(parse_error(
                            origin,
                            "decay needs either dt_over_tau (no [system]) or a [system] with decay.spacing",
                        ))
                    }
                }
            }
            Mode::Mc => {
                need_system()?;
                let m = self.mc.as_ref().ok_or_else(|| missing("mc"))?;
                if m.trajectories == 0 || m.k_max == 0 {
                    return Err(parse_error(
                        origin,
                        "mc.trajectories and mc.k_max must be at least 1",
                    ));
                }
                if m.schedule == ScheduleKind::Fixed {
                    positive(
                        "mc.spacing",
                        m.spacing.ok_or_else(|| {
                            parse_error(origin, "mc.spacing is required for a fixed schedule")
                        })?,
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Option<System> {
        self.system
            .as_ref()
            .map(|s| s.build(&self.name).expect("validated"))
    }

    /// Applies command-line overrides and revalidates.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        let origin = format!("{} (command line)", self.name);
        let reject = |flag: &str| {
            parse_error(
                &origin,
                format!("{flag} does not apply to mode \"{}\"", self.mode.name()),
            )
        };
        if let Some(ratio) = o.ratio {
            self.rabi.as_mut().ok_or_else(|| reject("--ratio"))?.ratio = ratio;
        }
        if let Some(x) = o.dt_over_tau {
            let d = self.decay.as_mut().filter(|d| d.dt_over_tau.is_some());
            d.ok_or_else(|| reject("--dt-over-tau"))?.dt_over_tau = Some(x);
        }
        if let Some(seed) = o.seed {
            self.mc.as_mut().ok_or_else(|| reject("--seed"))?.base_seed = seed;
        }
        if let Some(k) = o.k_max {
            match self.mode {
                Mode::Rabi => {
                    let r = self.rabi.as_mut().expect("validated");
                    r.t_end = k as f64 * 2.0 * std::f64::consts::PI * r.ratio / r.omega;
                }
                Mode::Sequence => self.sequence.as_mut().expect("validated").k_max = k,
                Mode::Markov => self.markov.as_mut().expect("validated").k_max = Some(k),
                Mode::Decay => self.decay.as_mut().expect("validated").k_max = Some(k),
                Mode::Mc => self.mc.as_mut().expect("validated").k_max = k,
            }
        }
        self.validate(&origin)
    }
}

/// Command-line parameter overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub k_max: Option<usize>,
    pub ratio: Option<f64>,
    pub dt_over_tau: Option<f64>,
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Scenario::from_toml(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const RABI: &str = r#"
name = "t"
mode = "rabi"

[rabi]
ratio = 0.43
t_end = 10.0
"#;

    #[test]
    fn parses_minimal_rabi() {
        let s = Scenario::from_toml(RABI, "inline").unwrap();
        let r = s.rabi.unwrap();
        assert_eq!(r.ratio, 0.43);
        assert_eq!(r.omega, 1.0);
        assert_eq!(r.samples_per_segment, 50);
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = RABI.replace("t_end = 10.0", "t_end = 10.0\nbogus = 1");
        let err = Scenario::from_toml(&text, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus"), "{msg}");
        assert!(msg.contains("line 8"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        let err = Scenario::from_toml("", "empty.toml").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn malformed_number_is_a_parse_error() {
        let err = Scenario::from_toml(&RABI.replace("0.43", "0.4.3"), "inline").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn non_hermitian_names_entry() {
        let text = r#"
name = "bad"
mode = "sequence"

[system]
dimension = 2
hamiltonian = [[0.0, 1.0], [2.0, 0.0]]
initial_index = 0

[sequence]
k_max = 1
"#;
        let err = Scenario::from_toml(text, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("[0][1]"), "{msg}");
    }

    #[test]
    fn complex_entries_and_explicit_basis() {
        let text = r#"
name = "c"
mode = "markov"

[system]
dimension = 2
hamiltonian = [[1.0, [0.0, 0.5]], [[0.0, -0.5], -1.0]]
basis = [[0.7071067811865476, 0.7071067811865476], [0.7071067811865476, -0.7071067811865476]]
initial_state = [1.0, [0.0, 1.0]]

[markov]
spacing = 0.1
k_max = 10
"#;
        let s = Scenario::from_toml(text, "inline").unwrap();
        let sys = s.system().unwrap();
        assert_eq!(sys.hamiltonian.matrix()[(0, 1)], C64::new(0.0, 0.5));
        assert!(!sys.basis.is_standard());
        assert!((sys.initial.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn missing_mode_table() {
        let err = Scenario::from_toml("name = \"x\"\nmode = \"rabi\"\n", "inline").unwrap_err();
        assert!(err.to_string().contains("[rabi]"));
    }
}
