//! Numeric comparison of run outputs against golden files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use crate::csv;
use crate::error::CliError;

/// Per-cell tolerance `|a - b| ≤ abs + rel·|b|`, with per-column overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct TolProfile {
    pub abs: f64,
    pub rel: f64,
    pub columns: HashMap<String, (f64, f64)>,
}

impl Default for TolProfile {
    fn default() -> Self {
        TolProfile {
            abs: 1e-12,
            rel: 1e-9,
            columns: HashMap::new(),
        }
    }
}

impl TolProfile {
    fn for_column(&self, name: &str) -> (f64, f64) {
        self.columns
            .get(name)
            .copied()
            .unwrap_or((self.abs, self.rel))
    }

    /// Parses `NAME=ABS:REL`.
    pub fn parse_column(spec: &str) -> Result<(String, (f64, f64)), String> {
        let (name, tols) = spec.split_once('=').ok_or("expected NAME=ABS:REL")?;
        let (a, r) = tols.split_once(':').ok_or("expected NAME=ABS:REL")?;
        let a: f64 = a
            .parse()
            .map_err(|_| format!("bad absolute tolerance {a:?}"))?;
        let r: f64 = r
            .parse()
            .map_err(|_| format!("bad relative tolerance {r:?}"))?;
        Ok((name.to_string(), (a, r)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    MissingFiles {
        in_report: Vec<String>,
        in_golden: Vec<String>,
    },
    Header {
        file: String,
        report: Vec<String>,
        golden: Vec<String>,
    },
    RowCount {
        file: String,
        report: usize,
        golden: usize,
    },
    Cell {
        file: String,
        row: usize,
        column: String,
        report: String,
        golden: String,
    },
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::MissingFiles {
                in_report,
                in_golden,
            } => {
                write!(f, "file sets differ")?;
                if !in_report.is_empty() {
                    write!(f, "; missing from report: {}", in_report.join(", "))?;
                }
                if !in_golden.is_empty() {
                    write!(f, "; missing from golden: {}", in_golden.join(", "))?;
                }
                Ok(())
            }
            Divergence::Header {
                file,
                report,
                golden,
            } => {
                write!(
                    f,
                    "{file}: header {} differs from golden {}",
                    report.join(","),
                    golden.join(",")
                )
            }
            Divergence::RowCount {
                file,
                report,
                golden,
            } => {
                write!(f, "{file}: {report} data rows, golden has {golden}")
            }
            Divergence::Cell {
                file,
                row,
                column,
                report,
                golden,
            } => {
                write!(
                    f,
                    "{file}: row {row}, column {column}: {report} vs golden {golden}"
                )
            }
        }
    }
}

fn csv_names(dir: &Path) -> Result<BTreeSet<String>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut names = BTreeSet::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.ends_with(".csv") {
            names.insert(name);
        }
    }
    Ok(names)
}

fn cells_match(a: &str, b: &str, (abs, rel): (f64, f64)) -> bool {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x == y || (x - y).abs() <= abs + rel * y.abs(),
        _ => a == b,
    }
}

/// Compares every CSV in `golden` with the same file in `report`.
///
/// Returns `Ok(None)` on a pass and the first divergence otherwise.
/// Rows are numbered from 1, counting data rows only.
pub fn compare_dirs(
    report: &Path,
    golden: &Path,
    profile: &TolProfile,
) -> Result<Option<Divergence>, CliError> {
    let (ours, theirs) = (csv_names(report)?, csv_names(golden)?);
    if ours != theirs {
        return Ok(Some(Divergence::MissingFiles {
            in_report: theirs.difference(&ours).cloned().collect(),
            in_golden: ours.difference(&theirs).cloned().collect(),
        }));
    }
    for name in &theirs {
        let a = csv::read(&report.join(name))?;
        let b = csv::read(&golden.join(name))?;
        if a.header != b.header {
            return Ok(Some(Divergence::Header {
                file: name.clone(),
                report: a.header,
                golden: b.header,
            }));
        }
        if a.rows.len() != b.rows.len() {
            return Ok(Some(Divergence::RowCount {
                file: name.clone(),
                report: a.rows.len(),
                golden: b.rows.len(),
            }));
        }
        let tols: Vec<(f64, f64)> = b.header.iter().map(|h| profile.for_column(h)).collect();
        for (i, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
            for (c, column) in b.header.iter().enumerate() {
                let (x, y) = (
                    ra.get(c).map_or("", String::as_str),
                    rb.get(c).map_or("", String::as_str),
                );
                if !cells_match(x, y, tols[c]) {
                    return Ok(Some(Divergence::Cell {
                        file: name.clone(),
                        row: i + 1,
                        column: column.clone(),
                        report: x.to_string(),
                        golden: y.to_string(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write(dir: &Path, name: &str, text: &str) {
        std::fs::write(dir.join(name), text).unwrap();
    }

    const BASE: &str = "k,x\n1,1.0000000000000000e0\n2,2.0000000000000000e0\n";

    #[test]
    fn identical_dirs_pass() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        write(a.path(), "f.csv", BASE);
        write(b.path(), "f.csv", BASE);
        assert_eq!(
            compare_dirs(a.path(), b.path(), &TolProfile::default()).unwrap(),
            None
        );
    }

    #[test]
    fn perturbation_beyond_tolerance_names_cell() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        write(b.path(), "f.csv", BASE);
        // 10x the tolerance at value 2: abs + rel*2 ≈ 2e-9
        write(
            a.path(),
            "f.csv",
            "k,x\n1,1.0000000000000000e0\n2,2.00000002e0\n",
        );
        let d = compare_dirs(a.path(), b.path(), &TolProfile::default())
            .unwrap()
            .unwrap();
        assert_eq!(
            d,
            Divergence::Cell {
                file: "f.csv".into(),
                row: 2,
                column: "x".into(),
                report: "2.00000002e0".into(),
                golden: "2.0000000000000000e0".into()
            }
        );
        assert!(d.to_string().contains("f.csv: row 2, column x"));
    }

    #[test]
    fn perturbation_within_tolerance_passes() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        write(b.path(), "f.csv", BASE);
        write(
            a.path(),
            "f.csv",
            "k,x\n1,1.0000000001e0\n2,2.0000000000000000e0\n",
        );
        assert_eq!(
            compare_dirs(a.path(), b.path(), &TolProfile::default()).unwrap(),
            None
        );
    }

    #[test]
    fn column_override_applies() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        write(b.path(), "f.csv", BASE);
        write(a.path(), "f.csv", "k,x\n1,1.01e0\n2,2.0e0\n");
        let mut p = TolProfile::default();
        assert!(compare_dirs(a.path(), b.path(), &p).unwrap().is_some());
        let (name, tol) = TolProfile::parse_column("x=0.1:0").unwrap();
        p.columns.insert(name, tol);
        assert_eq!(compare_dirs(a.path(), b.path(), &p).unwrap(), None);
    }

    #[test]
    fn missing_files_are_listed() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        write(b.path(), "f.csv", BASE);
        write(b.path(), "g.csv", BASE);
        write(a.path(), "f.csv", BASE);
        let d = compare_dirs(a.path(), b.path(), &TolProfile::default())
            .unwrap()
            .unwrap();
        assert!(d.to_string().contains("missing from report: g.csv"), "{d}");
    }

    #[test]
    fn bad_column_spec() {
        assert!(TolProfile::parse_column("x=1").is_err());
        assert!(TolProfile::parse_column("x=a:1").is_err());
    }
}
