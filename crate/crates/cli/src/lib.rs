//! Scenario-driven front end for `tsd-core`: parses TOML scenarios, runs
//! them, and writes CSV time series, a text summary and optional SVG plots.

pub mod csv;
pub mod error;
pub mod golden;
pub mod plot;
pub mod presets;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use golden::{compare_dirs, Divergence, TolProfile};
pub use run::{run, RunOptions, RunReport};
pub use scenario::{parse_scenario, Mode, Overrides, Scenario};

/// Resolves a preset name or a scenario file path.
pub fn load(target: &str) -> Result<Scenario, CliError> {
    if presets::source(target).is_some() {
        return presets::get(target);
    }
    let path = std::path::Path::new(target);
    if path.is_file() {
        parse_scenario(path)
    } else {
        Err(CliError::NotFound(target.to_string()))
    }
}
