//! Scenarios compiled into the binary.

use crate::error::CliError;
use crate::scenario::Scenario;

const PRESETS: &[(&str, &str)] = &[
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("undamped", include_str!("../presets/undamped.toml")),
    ("quarter", include_str!("../presets/quarter.toml")),
    ("eighth", include_str!("../presets/eighth.toml")),
    ("rabi", include_str!("../presets/rabi.toml")),
    ("demo3", include_str!("../presets/demo3.toml")),
    (
        "decay-small-dt",
        include_str!("../presets/decay-small-dt.toml"),
    ),
    ("decay", include_str!("../presets/decay.toml")),
    (
        "markov-random-d4",
        include_str!("../presets/markov-random-d4.toml"),
    ),
    ("mc-2level", include_str!("../presets/mc-2level.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn get(name: &str) -> Result<Scenario, CliError> {
    let text = source(name).ok_or_else(|| CliError::NotFound(name.to_string()))?;
    Scenario::from_toml(text, &format!("preset {name}"))
}
