//! Preset outputs against the checked-in golden files.
//!
//! Set `TSD_BLESS=1` to regenerate the golden directory.

use std::path::{Path, PathBuf};

use tempfile::tempdir;
use tsd_cli::{compare_dirs, presets, run, RunOptions, TolProfile};

fn golden_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn presets_match_golden() {
    let bless = std::env::var_os("TSD_BLESS").is_some();
    let scratch = tempdir().unwrap();
    for name in presets::names() {
        let scenario = presets::get(name).unwrap();
        let golden = golden_root().join(name);
        let out = if bless {
            golden.clone()
        } else {
            scratch.path().join(name)
        };
        run(&scenario, &out, RunOptions::default()).unwrap();
        if bless {
            std::fs::remove_file(out.join("summary.txt")).unwrap();
            continue;
        }
        if let Some(d) = compare_dirs(&out, &golden, &TolProfile::default()).unwrap() {
            panic!("{name}: {d}");
        }
    }
}
