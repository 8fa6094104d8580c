//! Damped Rabi oscillations of a closed two-level system.
//!
//! Between transitions the ground-plus-photon population follows
//! `p₁(t) = p₁(t_k) cos²Ω(t-t_k) + [1-p₁(t_k)] sin²Ω(t-t_k)`, where `Ω` is
//! twice the Rabi frequency. Transitions every `Δt₀` keep the populations
//! but discard coherence, so post-transition values obey the affine map
//! `p' - ½ = cos(2ΩΔt₀) (p - ½)`.
//!
//! Note on the `ΩΔt₀/2π = 1/4` case: iterating the map there gives
//! `p' = 1 - p` (a period-two cycle), and immediate stationarity after one
//! transition happens at `ΩΔt₀/2π = 1/8` instead. Classification here
//! follows the map as written.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `|ratio - n/2|` below this is treated as the undamped case.
pub const RATIO_TOL: f64 = 1e-9;
/// `|cos 2ΩΔt₀|` below this is treated as immediate stationarity.
pub const CONTRACTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiConfig {
    omega: f64,
    spacing: f64,
    ratio: f64,
    initial_p1: f64,
}

impl RabiConfig {
    pub fn new(omega: f64, spacing: f64, initial_p1: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !(0.0..=1.0).contains(&initial_p1) {
            return Err(Error::InvalidParameter(format!(
                "initial p1 must be in [0, 1], got {initial_p1}"
            )));
        }
        Ok(Self {
            omega,
            spacing,
            ratio: omega * spacing / (2.0 * PI),
            initial_p1,
        })
    }

    /// Configuration with `ΩΔt₀/2π = ratio`.
    pub fn from_ratio(omega: f64, ratio: f64, initial_p1: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ratio must be positive, got {ratio}"
            )));
        }
        let mut cfg = Self::new(omega, 2.0 * PI * ratio / omega, initial_p1)?;
        cfg.ratio = ratio;
        Ok(cfg)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn initial_p1(&self) -> f64 {
        self.initial_p1
    }

    /// `θ = ΩΔt₀`.
    pub fn theta(&self) -> f64 {
        self.omega * self.spacing
    }

    pub fn contraction(&self) -> f64 {
        (2.0 * self.theta()).cos()
    }

    /// Whether `ratio` is a half-integer multiple within [`RATIO_TOL`].
    pub fn is_undamped(&self) -> bool {
        let twice = 2.0 * self.ratio;
        (twice - twice.round()).abs() < 2.0 * RATIO_TOL
    }

    /// Population between transitions, `elapsed` after a transition that left `p_start`.
    pub fn segment_value(&self, p_start: f64, elapsed: f64) -> f64 {
        let phase = self.omega * elapsed;
        p_start * phase.cos().powi(2) + (1.0 - p_start) * phase.sin().powi(2)
    }

    /// Post-transition value after one interval starting from `p`.
    pub fn step(&self, p: f64) -> f64 {
        self.segment_value(p, self.spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// No transitions; undamped oscillation.
    Undamped,
    /// Contraction `-1`: post-transition values alternate `p, 1-p`.
    PeriodTwo,
    /// Post-transition value is ½ from the first transition on.
    ImmediateStationary,
    /// `|p - ½|` shrinks by `contraction` per transition.
    Damped { contraction: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Undamped => "undamped",
            Regime::PeriodTwo => "period_two",
            Regime::ImmediateStationary => "immediate_stationary",
            Regime::Damped { .. } => "damped",
        }
    }
}

pub fn classify_regime(cfg: &RabiConfig) -> Regime {
    if cfg.is_undamped() {
        return Regime::Undamped;
    }
    let quarter_shift = 2.0 * cfg.ratio - 0.5;
    if (quarter_shift - quarter_shift.round()).abs() < 2.0 * RATIO_TOL {
        return Regime::PeriodTwo;
    }
    let c = cfg.contraction();
    if c.abs() < CONTRACTION_TOL {
        Regime::ImmediateStationary
    } else {
        Regime::Damped {
            contraction: c.abs(),
        }
    }
}

/// Fixed point of the post-transition map, ½ whenever it is unique.
pub fn fixed_point(cfg: &RabiConfig) -> Result<f64> {
    match classify_regime(cfg) {
        Regime::Undamped => Err(Error::NoUniqueFixedPoint),
        _ => Ok(0.5),
    }
}

/// Sampled `p₁(t)` with transition bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiSeries {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    pub segment_index: Vec<usize>,
    pub is_transition_sample: Vec<bool>,
    /// `t_k = k Δt₀` for `k ≥ 1`.
    pub transition_times: Vec<f64>,
    /// `p₁(t_k)` for each transition.
    pub post_transition_p1: Vec<f64>,
    pub regime: Regime,
}

/// Samples `p₁` on `[0, t_end]`, `samples_per_segment` points per interval.
///
/// Each segment starts at its transition time (flagged as a transition
/// sample) and the final point lands on `t_end`. In the undamped regime
/// the whole range is a single segment with no transitions.
pub fn rabi_series(cfg: &RabiConfig, t_end: f64, samples_per_segment: usize) -> Result<RabiSeries> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if samples_per_segment < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 samples per segment".into(),
        ));
    }
    let regime = classify_regime(cfg);
    let undamped = regime == Regime::Undamped;
    let spacing = cfg.spacing;
    let dt = spacing / samples_per_segment as f64;
    let segments = (t_end / spacing).ceil() as usize;

    let mut series = RabiSeries {
        times: Vec::new(),
        p1: Vec::new(),
        segment_index: Vec::new(),
        is_transition_sample: Vec::new(),
        transition_times: Vec::new(),
        post_transition_p1: Vec::new(),
        regime,
    };
    let mut p_start = cfg.initial_p1;
    for k in 0..segments {
        let t_k = k as f64 * spacing;
        if k > 0 && !undamped {
            p_start = cfg.step(p_start);
            series.transition_times.push(t_k);
            series.post_transition_p1.push(p_start);
        }
        for j in 0..samples_per_segment {
            let t = t_k + j as f64 * dt;
            if t >= t_end {
                break;
            }
            series.times.push(t);
            if undamped {
                series.p1.push(cfg.segment_value(cfg.initial_p1, t));
                series.segment_index.push(0);
            } else {
                // offset from t_k directly, so segment starts are exact
                series.p1.push(cfg.segment_value(p_start, j as f64 * dt));
                series.segment_index.push(k);
            }
            series
                .is_transition_sample
                .push(j == 0 && k > 0 && !undamped);
        }
    }
    let (last_segment, origin, p_origin) = if undamped {
        (0, 0.0, cfg.initial_p1)
    } else {
        let k = segments.saturating_sub(1);
        (k, k as f64 * spacing, p_start)
    };
    series.times.push(t_end);
    series.p1.push(cfg.segment_value(p_origin, t_end - origin));
    series.segment_index.push(last_segment);
    series.is_transition_sample.push(false);
    Ok(series)
}
