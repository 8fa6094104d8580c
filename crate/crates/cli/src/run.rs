//! Mode dispatch and output writing.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use tsd_core::markov::detailed_balance_residual;
use tsd_core::trajectory::GENERATOR;
use tsd_core::{
    born_probabilities, build_decay_model, chain_diagnostics, classify_energy_sectors,
    classify_regime, ensemble_populations, exact_populations, exponential_compare, fixed_point,
    pauli_integrate, rabi_series, run_sequence, stationary_distribution, step_populations, systems,
    transition_matrix, DecayRegime, Execution, FinderConfig, MixtureBasis, PopulationVector,
    RabiConfig, RateMatrix, Regime, Schedule, SequenceStatus,
};

use crate::csv::{float, Table};
use crate::error::CliError;
use crate::plot::{line_chart, Series};
use crate::row;
use crate::scenario::{Mode, Scenario, ScheduleKind, System};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub plot: bool,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub mode: Mode,
    /// Ordered `key: value` summary lines.
    pub summary: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
    pub version: &'static str,
    pub seed: Option<u64>,
}

impl RunReport {
    fn new(scenario: &Scenario) -> Self {
        RunReport {
            scenario: scenario.name.clone(),
            mode: scenario.mode,
            summary: Vec::new(),
            files: Vec::new(),
            version: VERSION,
            seed: None,
        }
    }

    fn put(&mut self, key: &str, value: impl Display) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render_summary(&self) -> String {
        let mut s = String::new();
        crate::csv::summary_line(&mut s, "scenario", &self.scenario);
        crate::csv::summary_line(&mut s, "mode", self.mode.name());
        crate::csv::summary_line(&mut s, "tool_version", self.version);
        match self.seed {
            Some(seed) => crate::csv::summary_line(&mut s, "seed", format!("{seed} ({GENERATOR})")),
            None => crate::csv::summary_line(&mut s, "seed", "none (deterministic mode)"),
        }
        for (k, v) in &self.summary {
            // a pre-formatted line carries its own key
            if k.is_empty() {
                s.push_str(v);
                s.push('\n');
            } else {
                crate::csv::summary_line(&mut s, k, v);
            }
        }
        let names: Vec<String> = self
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        crate::csv::summary_line(&mut s, "files", names.join(", "));
        s
    }
}

struct Writer<'a> {
    dir: &'a Path,
    report: RunReport,
    plot: bool,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let path = self.dir.join(name);
        table.write(&path)?;
        self.report.files.push(path);
        Ok(())
    }

    fn chart(
        &mut self,
        title: &str,
        x: &str,
        y: &str,
        series: Vec<Series>,
    ) -> Result<(), CliError> {
        if !self.plot {
            return Ok(());
        }
        let path = self.dir.join("plot.svg");
        std::fs::write(&path, line_chart(title, x, y, &series))
            .map_err(|e| CliError::io(&path, e))?;
        self.report.files.push(path);
        Ok(())
    }

    fn finish(mut self) -> Result<RunReport, CliError> {
        let path = self.dir.join("summary.txt");
        self.report.files.push(path.clone());
        std::fs::write(&path, self.report.render_summary()).map_err(|e| CliError::io(&path, e))?;
        Ok(self.report)
    }
}

/// Runs a validated scenario, writing CSVs and `summary.txt` into `out_dir`.
pub fn run(scenario: &Scenario, out_dir: &Path, opts: RunOptions) -> Result<RunReport, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut w = Writer {
        dir: out_dir,
        report: RunReport::new(scenario),
        plot: opts.plot,
    };
    let flag = match scenario.mode {
        Mode::Rabi => run_rabi(scenario, &mut w)?,
        Mode::Sequence => run_sequence_mode(scenario, &mut w)?,
        Mode::Markov => run_markov(scenario, &mut w)?,
        Mode::Decay => run_decay(scenario, &mut w)?,
        Mode::Mc => run_mc(scenario, &mut w)?,
    };
    if let Some(message) = &flag {
        w.report.put("flag", format!("NON-CONVERGED: {message}"));
    }
    let report = w.finish()?;
    match flag {
        Some(message) => Err(CliError::NonConvergence(message)),
        None => Ok(report),
    }
}

type Flag = Option<String>;

fn run_rabi(scenario: &Scenario, w: &mut Writer) -> Result<Flag, CliError> {
    let spec = scenario.rabi.as_ref().expect("validated");
    let cfg = RabiConfig::from_ratio(spec.omega, spec.ratio, spec.initial_p1)?;
    let series = rabi_series(&cfg, spec.t_end, spec.samples_per_segment)?;
    let regime = classify_regime(&cfg);

    let mut t = Table::new(&["t", "p1", "segment_index", "is_transition_sample"]);
    for i in 0..series.times.len() {
        t.push(row![
            float(series.times[i]),
            float(series.p1[i]),
            series.segment_index[i],
            u8::from(series.is_transition_sample[i])
        ]);
    }
    w.table("rabi.csv", &t)?;

    let mut tr = Table::new(&["k", "t_k", "p1", "deviation"]);
    for (i, (&tk, &p)) in series
        .transition_times
        .iter()
        .zip(&series.post_transition_p1)
        .enumerate()
    {
        tr.push(row![i + 1, float(tk), float(p), float(p - 0.5)]);
    }
    w.table("rabi_transitions.csv", &tr)?;

    let n = series.transition_times.len();
    let r = &mut w.report;
    r.put("", format!("regime: {}; transitions: {n}", regime.name()));
    r.put("omega", float(cfg.omega()));
    r.put("ratio", float(cfg.ratio()));
    r.put("spacing", float(cfg.spacing()));
    r.put("contraction_factor", float(cfg.contraction()));
    match fixed_point(&cfg) {
        Ok(p) => r.put("fixed_point", float(p)),
        Err(_) => r.put("fixed_point", "none (no transitions)"),
    }
    let devs: Vec<f64> = series
        .post_transition_p1
        .iter()
        .map(|p| (p - 0.5).abs())
        .collect();
    if devs.len() >= 2 {
        r.put(
            "max_deviation_k_ge_2",
            float(devs[1..].iter().copied().fold(0.0, f64::max)),
        );
    }
    let ratios: Vec<f64> = devs
        .windows(2)
        .filter(|d| d[0] > 1e-12)
        .map(|d| d[1] / d[0])
        .collect();
    if let (Some(lo), Some(hi)) = (
        ratios.iter().copied().reduce(f64::min),
        ratios.iter().copied().reduce(f64::max),
    ) {
        r.put("envelope_contraction_min", float(lo));
        r.put("envelope_contraction_max", float(hi));
    }
    if regime == Regime::Undamped {
        let free = series
            .times
            .iter()
            .zip(&series.p1)
            .map(|(&t, &p)| (p - cfg.segment_value(cfg.initial_p1(), t)).abs())
            .fold(0.0, f64::max);
        r.put("max_free_oscillation_deviation", float(free));
    }
    let points = series
        .times
        .iter()
        .copied()
        .zip(series.p1.iter().copied())
        .collect();
    w.chart(
        &format!("{}: p1(t), ratio {}", scenario.name, cfg.ratio()),
        "t",
        "p1",
        vec![Series {
            label: "p1".into(),
            points,
        }],
    )?;
    Ok(None)
}

fn run_sequence_mode(scenario: &Scenario, w: &mut Writer) -> Result<Flag, CliError> {
    let spec = scenario.sequence.as_ref().expect("validated");
    let System {
        hamiltonian: h,
        basis,
        initial,
    } = scenario.system().expect("validated");
    let cfg = spec.finder_config();
    let result = run_sequence(&initial, &h, &basis, spec.k_max, &cfg).map_err(|e| match e {
        tsd_core::Error::TimingUndefined => CliError::TimingUndefined,
        other => other.into(),
    })?;

    let mut t = Table::new(&[
        "k",
        "t_k",
        "interval",
        "state_index",
        "population",
        "energy_pre",
        "energy_post",
    ]);
    let intervals = result.intervals();
    let mut energy_defect = 0.0_f64;
    let mut outside = 0.0_f64;
    for (rec, dt) in result.records.iter().zip(&intervals) {
        let e_pre = rec.pre_density.energy(&h);
        let e_post = rec.post_density.energy(&h);
        energy_defect = energy_defect.max((e_post - e_pre).abs());
        for (n, &p) in rec.populations.iter().enumerate() {
            if !result.sectors.is_conserving(n) {
                outside = outside.max(p);
            }
            t.push(row![
                rec.index,
                float(rec.time),
                float(*dt),
                n,
                float(p),
                float(e_pre),
                float(e_post)
            ]);
        }
    }
    w.table("transitions.csv", &t)?;

    let status = match result.status {
        SequenceStatus::Completed => "completed",
        SequenceStatus::NoFurtherTransitions => "no further transitions in window",
        SequenceStatus::NoConservingStates => "no energy-conserving states",
    };
    let r = &mut w.report;
    r.put("transitions", result.records.len());
    r.put("status", status);
    r.put("reference_energy", float(result.sectors.reference_energy));
    r.put(
        "conserving_states",
        format!("{:?}", result.sectors.conserving),
    );
    r.put("commuting", result.commuting);
    match result.spacing {
        Some(s) => r.put("spacing", float(s)),
        None => r.put("spacing", "none"),
    }
    let times: Vec<String> = result.times().iter().map(|&t| float(t)).collect();
    r.put("transition_times", times.join(" "));
    r.put("max_energy_defect", float(energy_defect));
    r.put("max_population_outside_sector", float(outside));

    let d = basis.len();
    let series = (0..d)
        .map(|n| Series {
            label: format!("p{n}"),
            points: result
                .records
                .iter()
                .map(|rec| (rec.time, rec.populations[n]))
                .collect(),
        })
        .collect();
    w.chart(
        &format!("{}: post-transition populations", scenario.name),
        "t",
        "p",
        series,
    )?;
    Ok(None)
}

fn run_markov(scenario: &Scenario, w: &mut Writer) -> Result<Flag, CliError> {
    let spec = scenario.markov.as_ref().expect("validated");
    let System {
        hamiltonian: h,
        basis,
        initial,
    } = scenario.system().expect("validated");
    let d = basis.len();
    let tm = transition_matrix(&h, &basis, spec.spacing)?;
    let rates = RateMatrix::from_transition(&tm)?;
    let relaxation = rates.relaxation_time();
    let k_max = match (spec.k_max, spec.relaxation_times, relaxation) {
        (Some(k), _, _) => k,
        (None, Some(n), Some(tau)) => ((n * tau / spec.spacing) - 1e-9).ceil().max(1.0) as usize,
        _ => {
            return Err(CliError::Parse {
                path: scenario.name.clone(),
                message:
                    "chain has no decaying mode, so relaxation_times is undefined; set markov.k_max"
                        .into(),
            })
        }
    };

    let p0 = PopulationVector::new(born_probabilities(&initial, &basis)?)?;
    let dt = spec.spacing / spec.pauli_substeps as f64;
    let pauli = pauli_integrate(&rates, &p0, k_max as f64 * spec.spacing, dt)?;

    let mut t = Table::new(&["k", "t_k", "state_index", "p_chain", "p_pauli"]);
    let mut p = p0.clone();
    let mut worst_rel = 0.0_f64;
    let mut chain_rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            p = step_populations(&tm, &p)?;
        }
        let q = &pauli.populations[k * spec.pauli_substeps];
        let tk = k as f64 * spec.spacing;
        for n in 0..d {
            let (a, b) = (p.as_slice()[n], q.as_slice()[n]);
            if a > 0.0 {
                worst_rel = worst_rel.max((a - b).abs() / a);
            }
            t.push(row![k, float(tk), n, float(a), float(b)]);
        }
        chain_rows.push((tk, p.clone()));
    }
    w.table("chain.csv", &t)?;

    let stat = stationary_distribution(&tm, spec.stationary_tol, spec.max_iters)?;
    let mut st = Table::new(&["state_index", "p_stationary", "deviation_from_uniform"]);
    let uniform = 1.0 / d as f64;
    for (n, &q) in stat.distribution.as_slice().iter().enumerate() {
        st.push(row![n, float(q), float(q - uniform)]);
    }
    w.table("stationary.csv", &st)?;

    let sectors = classify_energy_sectors(
        &basis,
        &h,
        &initial,
        FinderConfig::default().absolute_energy_tol(&h),
    )?;
    let balance = detailed_balance_residual(&rates, &stat.distribution, &sectors)?;
    let diag = chain_diagnostics(&tm);
    let r = &mut w.report;
    r.put("spacing", float(spec.spacing));
    r.put("k_max", k_max);
    r.put("stochastic_defect", float(tm.stochastic_defect()));
    r.put(
        "max_transition_probability_offdiagonal",
        float(tm.max_off_diagonal()),
    );
    match relaxation {
        Some(tau) => r.put("relaxation_time", float(tau)),
        None => r.put("relaxation_time", "undefined"),
    }
    r.put("irreducible", diag.irreducible);
    r.put("period", diag.period);
    r.put("stationary_residual", float(stat.residual));
    r.put("stationary_iterations", stat.iterations);
    r.put(
        "stationary_max_deviation_from_uniform",
        float(
            stat.distribution
                .max_distance(&PopulationVector::uniform(d)),
        ),
    );
    r.put("detailed_balance_residual", float(balance));
    r.put("detailed_balance_within_tol", balance < spec.balance_tol);
    r.put("max_relative_chain_pauli_deviation", float(worst_rel));

    let series = (0..d)
        .map(|n| Series {
            label: format!("p{n}"),
            points: chain_rows
                .iter()
                .map(|(t, p)| (*t, p.as_slice()[n]))
                .collect(),
        })
        .collect();
    w.chart(
        &format!("{}: chain populations", scenario.name),
        "t",
        "p",
        series,
    )?;

    Ok((!stat.converged).then(|| {
        format!(
            "stationary iteration stopped after {} iterations at residual {:e} (tol {:e})",
            stat.iterations, stat.residual, spec.stationary_tol
        )
    }))
}

fn run_decay(scenario: &Scenario, w: &mut Writer) -> Result<Flag, CliError> {
    let spec = scenario.decay.as_ref().expect("validated");
    let (model, label) = match scenario.system() {
        Some(sys) => {
            let i = scenario
                .system
                .as_ref()
                .and_then(|s| s.initial_index)
                .ok_or_else(|| CliError::Parse {
                    path: scenario.name.clone(),
                    message: "decay with a [system] table needs system.initial_index".into(),
                })?;
            let spacing = spec.spacing.expect("validated");
            (
                build_decay_model(&sys.hamiltonian, &sys.basis, i, spacing)?,
                "system",
            )
        }
        None => {
            let x = spec.dt_over_tau.expect("validated");
            let (h, spacing) = systems::two_level_decay(x, spec.tau.unwrap_or(1.0));
            (
                build_decay_model(&h, &MixtureBasis::standard(2), 0, spacing)?,
                "two-level",
            )
        }
    };
    if model.is_stable() {
        return Err(CliError::Parse {
            path: scenario.name.clone(),
            message: "initial state does not leak at this spacing; lifetime is infinite".into(),
        });
    }
    let k_max = spec.k_max.unwrap_or_else(|| {
        ((spec.lifetimes * model.lifetime / model.spacing) - 1e-9)
            .ceil()
            .max(1.0) as usize
    });
    let open = model.survival(k_max, DecayRegime::Open);
    let closed = model.survival(k_max, DecayRegime::Closed);
    let cmp = exponential_compare(&model, k_max);

    let mut t = Table::new(&[
        "k",
        "t_k",
        "p_open",
        "p_closed",
        "p_exponential",
        "rel_deviation",
    ]);
    for k in 0..=k_max {
        let tk = k as f64 * model.spacing;
        let e = (-tk / model.lifetime).exp();
        t.push(row![
            k,
            float(tk),
            float(open[k]),
            float(closed[k]),
            float(e),
            float((open[k] - e) / e)
        ]);
    }
    w.table("decay.csv", &t)?;

    let r = &mut w.report;
    r.put("model", label);
    r.put("initial_index", model.initial_index);
    r.put("spacing", float(model.spacing));
    r.put("tau", float(model.lifetime));
    r.put("dt_over_tau", float(cmp.dt_over_tau));
    r.put("survival_probability", float(model.survival_amplitude_sq));
    r.put("k_max", k_max);
    r.put("max_relative_deviation", float(cmp.max_relative_deviation));
    r.put("deviation_bound", float(spec.deviation_bound));
    r.put(
        "within_bound",
        cmp.max_relative_deviation < spec.deviation_bound,
    );
    r.put("within_validity", cmp.within_validity);

    let pts = |v: &[f64]| {
        (0..=k_max)
            .map(|k| (k as f64 * model.spacing, v[k]))
            .collect()
    };
    let expo: Vec<f64> = (0..=k_max)
        .map(|k| (-(k as f64) * model.spacing / model.lifetime).exp())
        .collect();
    w.chart(
        &format!("{}: survival", scenario.name),
        "t",
        "p",
        vec![
            Series {
                label: "open".into(),
                points: pts(&open),
            },
            Series {
                label: "exp(-t/tau)".into(),
                points: pts(&expo),
            },
            Series {
                label: "closed".into(),
                points: pts(&closed),
            },
        ],
    )?;
    Ok(None)
}

fn run_mc(scenario: &Scenario, w: &mut Writer) -> Result<Flag, CliError> {
    let spec = scenario.mc.as_ref().expect("validated");
    let System {
        hamiltonian: h,
        basis,
        initial,
    } = scenario.system().expect("validated");
    let schedule = match spec.schedule {
        ScheduleKind::Fixed => Schedule::Fixed(spec.spacing.expect("validated")),
        ScheduleKind::Finder => {
            let d = FinderConfig::default();
            Schedule::Finder(FinderConfig {
                window: spec.window.unwrap_or(d.window),
                grid_points: spec.grid_points.unwrap_or(d.grid_points),
                ..d
            })
        }
    };
    let execution = if spec.parallel {
        Execution::Parallel
    } else {
        Execution::Serial
    };
    let est = ensemble_populations(
        &initial,
        &h,
        &basis,
        &schedule,
        spec.k_max,
        spec.trajectories,
        spec.base_seed,
        execution,
    )
    .map_err(|e| match e {
        tsd_core::Error::TimingUndefined => CliError::TimingUndefined,
        other => other.into(),
    })?;
    let exact = exact_populations(&initial, &h, &basis, &est.times[1..])?;

    let d = basis.len();
    let mut t = Table::new(&["k", "t_k", "state_index", "p_hat", "stderr", "p_exact"]);
    let mut worst = 0.0_f64;
    for (k, exact_row) in exact.iter().enumerate() {
        for (n, &pe) in exact_row.iter().enumerate() {
            let ph = est.populations[k][n];
            worst = worst.max((ph - pe).abs());
            t.push(row![
                k,
                float(est.times[k]),
                n,
                float(ph),
                float(est.standard_errors[k][n]),
                float(pe)
            ]);
        }
    }
    w.table("ensemble.csv", &t)?;

    let bound = 5.0 / (spec.trajectories as f64).sqrt();
    w.report.seed = Some(spec.base_seed);
    let r = &mut w.report;
    r.put("trajectories", spec.trajectories);
    r.put("transitions", est.times.len() - 1);
    r.put(
        "execution",
        if spec.parallel { "parallel" } else { "serial" },
    );
    r.put("max_abs_deviation_from_exact", float(worst));
    r.put("five_sigma_bound", float(bound));
    r.put("within_bound", worst < bound);

    let mut series: Vec<Series> = (0..d)
        .map(|n| Series {
            label: format!("p{n} estimate"),
            points: (0..est.times.len())
                .map(|k| (est.times[k], est.populations[k][n]))
                .collect(),
        })
        .collect();
    series.extend((0..d).map(|n| {
        Series {
            label: format!("p{n} exact"),
            points: (0..est.times.len())
                .map(|k| (est.times[k], exact[k][n]))
                .collect(),
        }
    }));
    w.chart(
        &format!("{}: ensemble populations", scenario.name),
        "t",
        "p",
        series,
    )?;
    Ok(None)
}
