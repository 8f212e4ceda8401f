#![allow(dead_code)]

mod sheaves;

use std::path::PathBuf;
use std::process::Command;

#[allow(unused_imports)]
pub use sheaves::{diamond_sheaf, diamond_with, graph_sheaf, to_matrix};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub const EXAMPLES: [&str; 3] = [
    "docs/examples/mixed_edge.json",
    "docs/examples/scaled_edge.json",
    "docs/examples/interval_cover.json",
];

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const MIXED: &str = "docs/examples/mixed_edge.json";
const SCALED: &str = "docs/examples/scaled_edge.json";
const COVER: &str = "docs/examples/interval_cover.json";

macro_rules! case {
    ($name:literal, $exit:literal, [$($arg:expr),*]) => {
        Case { name: $name, args: &[$($arg),*], exit: $exit }
    };
}

pub const CASES: &[Case] = &[
    case!("validate_mixed_edge", 0, ["validate", MIXED]),
    case!("validate_interval_cover", 0, ["validate", COVER]),
    case!(
        "check_section_mismatched",
        2,
        ["check-section", MIXED, "--section", "mismatched"]
    ),
    case!(
        "check_section_agreeing",
        0,
        ["check-section", MIXED, "--section", "agreeing"]
    ),
    case!("global_mixed_edge", 0, ["global", MIXED]),
    case!("global_scaled_edge", 0, ["global", SCALED]),
    case!("global_interval_cover", 0, ["global", COVER]),
    case!(
        "radius_scaled_unit",
        0,
        ["radius", SCALED, "--assignment", "unit"]
    ),
    case!(
        "radius_mixed_rough",
        0,
        ["radius", MIXED, "--assignment", "rough"]
    ),
    case!(
        "project_scaled_unit",
        0,
        ["project", SCALED, "--assignment", "unit"]
    ),
    case!(
        "project_mixed_rough",
        0,
        ["project", MIXED, "--assignment", "rough"]
    ),
    case!(
        "laplacian_scaled_edge",
        0,
        ["laplacian", SCALED, "--spectrum"]
    ),
    case!("laplacian_mixed_edge", 0, ["laplacian", MIXED]),
    case!("interval_glue_cover", 0, ["interval-glue", COVER]),
    case!("fmt_mixed_edge", 0, ["fmt", MIXED]),
    case!(
        "validate_broken_diamond",
        2,
        ["validate", "crates/cli/tests/fixtures/broken_diamond.json"]
    ),
    case!(
        "validate_missing_map",
        2,
        ["validate", "crates/cli/tests/fixtures/missing_map.json"]
    ),
    case!(
        "validate_ragged_matrix",
        1,
        ["validate", "crates/cli/tests/fixtures/ragged_matrix.json"]
    ),
    case!(
        "validate_unknown_field",
        1,
        ["validate", "crates/cli/tests/fixtures/unknown_field.json"]
    ),
    case!(
        "validate_unknown_field_lenient",
        0,
        [
            "--lenient",
            "validate",
            "crates/cli/tests/fixtures/unknown_field.json"
        ]
    ),
    case!(
        "interval_glue_conflict",
        2,
        [
            "interval-glue",
            "crates/cli/tests/fixtures/conflicting_interval.json"
        ]
    ),
];

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Run {
    /// Stdout, followed by stderr when there is any.
    pub fn transcript(&self) -> Vec<u8> {
        let mut t = self.stdout.clone();
        if !self.stderr.is_empty() {
            t.extend_from_slice(b"--- stderr\n");
            t.extend_from_slice(&self.stderr);
        }
        t
    }
}

/// Runs the binary from the workspace root with a clean tolerance variable.
pub fn sheaflab(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sheaflab"));
    cmd.current_dir(workspace_root())
        .args(args)
        .env_remove("SHEAFLAB_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

/// Checks one case against its golden file, rewriting it when
/// `UPDATE_GOLDEN` is set. Returns a description of the first mismatch.
pub fn check_case(case: &Case) -> Result<(), String> {
    let first = sheaflab(case.args, &[]);
    let second = sheaflab(case.args, &[]);
    if first.code != case.exit {
        return Err(format!(
            "{}: exit {} instead of {}",
            case.name, first.code, case.exit
        ));
    }
    if first.transcript() != second.transcript() || second.code != first.code {
        return Err(format!("{}: output differs between runs", case.name));
    }
    let path = golden_dir().join(format!("{}.out", case.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, first.transcript()).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != first.transcript() {
        return Err(format!(
            "{}: output differs from {}\n--- got\n{}",
            case.name,
            path.display(),
            String::from_utf8_lossy(&first.transcript())
        ));
    }
    Ok(())
}
