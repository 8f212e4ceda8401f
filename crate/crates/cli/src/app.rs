//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use sheaflab_core::{
    assemble_coboundary, consistency_radius, global_sections, is_section_consistent,
    nearest_global_section, sheaf_laplacian, structural_violations, symmetric_eigenvalues,
    NodeAssignment, Section, Sheaf, DEFAULT_REL_TOL,
};
use thiserror::Error;

use crate::document::{
    parse_sheaf_document, DocumentError, NamedValues, ParseMode, ResolvedSheaf, SheafDocument,
};
use crate::number::{fmt_num, fmt_vec, fmt_vec_clean};

pub const EXIT_OK: i32 = 0;
/// Usage, parse and input errors.
pub const EXIT_ERROR: i32 = 1;
/// The input is well formed but inconsistent.
pub const EXIT_INCONSISTENT: i32 = 2;

const DEFAULT_GLUE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "sheaflab",
    version,
    about = "Cellular sheaves on graphs and posets"
)]
struct Cli {
    /// Ignore unknown fields in the input document.
    #[arg(long, global = true)]
    lenient: bool,

    /// Numerical tolerance. Each command documents its default.
    #[arg(long, global = true, env = "SHEAFLAB_TOL", value_parser = parse_tol)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Sheaf document, or `-` for standard input.
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check stalk and map coverage, shapes and commutativity.
    /// The default tolerance is 1e-9 times the largest map entry (at least 1e-9).
    Validate(Input),
    /// Check a named section against every restriction map.
    CheckSection {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        section: String,
    },
    /// Orthonormal basis of the global sections. `--tol` is the relative
    /// singular value cutoff (default 1e-9).
    Global(Input),
    /// Consistency radius of a named assignment on the maximal cells.
    Radius {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        assignment: String,
    },
    /// Nearest global section to a named assignment.
    Project {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        assignment: String,
    },
    /// The sheaf Laplacian over the maximal cells.
    Laplacian {
        #[command(flatten)]
        input: Input,
        /// Also print the eigenvalues in ascending order.
        #[arg(long)]
        spectrum: bool,
    },
    /// Glue the local samples of an interval cover (default tolerance 1e-9).
    IntervalGlue {
        #[command(flatten)]
        input: Input,
        /// Take local data from this named assignment instead of `interval.locals`.
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Rewrite the document in canonical form.
    Fmt(Input),
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("`{s}` is not a finite non-negative number")),
    }
}

#[derive(Debug, Error)]
enum AppError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Sheaf(#[from] sheaflab_core::Error),
    #[error("{0}")]
    Input(String),
}

/// Command outcome: the exit code once output has been written.
type Outcome = Result<i32, AppError>;

/// Runs the tool on `args` (including the program name) and returns the exit
/// code. Nothing is written to the process streams directly.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut out = String::new();
    let result = execute(&cli, &mut out);
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut String) -> Outcome {
    let mode = if cli.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    match &cli.command {
        Command::Validate(input) => validate(&load(&input.file, mode)?, cli.tol, out),
        Command::CheckSection { input, section } => {
            let doc = load(&input.file, mode)?;
            let sheaf = doc.resolve()?;
            let s = named_section(&doc, section)?;
            check_section(sheaf.sheaf(), &s, cli.tol, out)
        }
        Command::Global(input) => {
            let doc = load(&input.file, mode)?;
            global(
                doc.resolve()?.sheaf(),
                cli.tol.unwrap_or(DEFAULT_REL_TOL),
                out,
            )
        }
        Command::Radius { input, assignment } => {
            let doc = load(&input.file, mode)?;
            let sheaf = doc.resolve()?;
            let a = named_assignment(&doc, assignment)?;
            let r = consistency_radius(sheaf.sheaf(), &a)?;
            out.push_str(&format!("radius = {}\n", fmt_num(r)));
            Ok(EXIT_OK)
        }
        Command::Project { input, assignment } => {
            let doc = load(&input.file, mode)?;
            let sheaf = doc.resolve()?;
            project(sheaf.sheaf(), &named_assignment(&doc, assignment)?, out)
        }
        Command::Laplacian { input, spectrum } => {
            let doc = load(&input.file, mode)?;
            laplacian(doc.resolve()?.sheaf(), *spectrum, out)
        }
        Command::IntervalGlue { input, assignment } => {
            let doc = load(&input.file, mode)?;
            interval_glue(
                &doc,
                assignment.as_deref(),
                cli.tol.unwrap_or(DEFAULT_GLUE_TOL),
                out,
            )
        }
        Command::Fmt(input) => {
            out.push_str(&load(&input.file, mode)?.to_json());
            Ok(EXIT_OK)
        }
    }
}

fn load(path: &Path, mode: ParseMode) -> Result<SheafDocument, AppError> {
    let io_err = |source| AppError::Io {
        path: path.display().to_string(),
        source,
    };
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(io_err)?;
        buf
    } else {
        std::fs::read(path).map_err(io_err)?
    };
    Ok(parse_sheaf_document(&bytes, mode)?)
}

fn named_section(doc: &SheafDocument, name: &str) -> Result<Section, AppError> {
    match doc.sections.get(name) {
        Some(NamedValues::Section(s)) => Ok(s.clone()),
        Some(NamedValues::Assignment(_)) => Err(AppError::Input(format!(
            "`{name}` is an assignment, not a section"
        ))),
        None => Err(AppError::Input(format!("no section named `{name}`"))),
    }
}

fn named_assignment(doc: &SheafDocument, name: &str) -> Result<NodeAssignment, AppError> {
    match doc.sections.get(name) {
        Some(NamedValues::Assignment(a)) => Ok(a.clone()),
        Some(NamedValues::Section(_)) => Err(AppError::Input(format!(
            "`{name}` is a section, not an assignment"
        ))),
        None => Err(AppError::Input(format!("no assignment named `{name}`"))),
    }
}

fn validate(doc: &SheafDocument, tol: Option<f64>, out: &mut String) -> Outcome {
    let sheaf = if doc.cells.is_empty() && doc.interval.is_some() {
        doc.resolve()?.sheaf().clone()
    } else {
        let complex = doc.complex()?;
        let structural = structural_violations(&complex, &doc.stalks, &doc.maps)?;
        if !structural.is_empty() {
            out.push_str(&format!("violations: {}\n", structural.len()));
            for v in &structural {
                out.push_str(&format!("{} {}\n", v.kind, v.location));
            }
            return Ok(EXIT_INCONSISTENT);
        }
        match doc.resolve()? {
            ResolvedSheaf::Cellular(s) => s,
            ResolvedSheaf::Interval(s) => s.sheaf,
        }
    };
    let report = sheaf.validate(tol.unwrap_or_else(|| sheaf.default_tol()));
    if report.ok() {
        let c = sheaf.complex();
        out.push_str(&format!(
            "ok: {} cells, {} relations\n",
            c.len(),
            c.relations().len()
        ));
        return Ok(EXIT_OK);
    }
    out.push_str(&format!("violations: {}\n", report.violations.len()));
    for v in &report.violations {
        out.push_str(&format!("{} {}", v.kind, v.location));
        if let Some(m) = v.magnitude {
            out.push_str(&format!(" magnitude {}", fmt_num(m)));
        }
        out.push('\n');
    }
    Ok(EXIT_INCONSISTENT)
}

fn check_section(sheaf: &Sheaf, s: &Section, tol: Option<f64>, out: &mut String) -> Outcome {
    let report = is_section_consistent(sheaf, s, tol.unwrap_or_else(|| sheaf.default_tol()))?;
    let consistent = report.consistent();
    out.push_str(&format!(
        "consistent: {}\n",
        if consistent { "yes" } else { "no" }
    ));
    if consistent {
        return Ok(EXIT_OK);
    }
    out.push_str(&format!("violations: {}\n", report.violations.len()));
    for v in &report.violations {
        out.push_str(&format!(
            "{}: residual {} norm {}\n",
            v.relation,
            fmt_vec(v.residual.iter()),
            fmt_num(v.norm)
        ));
    }
    Ok(EXIT_INCONSISTENT)
}

fn global(sheaf: &Sheaf, rel_tol: f64, out: &mut String) -> Outcome {
    let g = global_sections(sheaf, rel_tol)?;
    out.push_str(&format!("dim = {}\n", g.dim()));
    let columns: Vec<String> = g
        .columns
        .iter()
        .map(|b| format!("{}[{}]", b.cell, b.dim))
        .collect();
    out.push_str(&format!("columns: {}\n", columns.join(" ")));
    for (i, s) in g.sections.iter().enumerate() {
        out.push_str(&format!(
            "basis[{i}] = {}\n",
            fmt_vec_clean(g.basis.column(i).iter())
        ));
        for (id, v) in &s.values {
            out.push_str(&format!("  {id} = {}\n", fmt_vec_clean(v.iter())));
        }
    }
    Ok(EXIT_OK)
}

fn project(sheaf: &Sheaf, a: &NodeAssignment, out: &mut String) -> Outcome {
    let nearest = nearest_global_section(sheaf, a)?;
    let delta = assemble_coboundary(sheaf)?;
    let x = delta.stack(a)?;
    let p = delta.stack(&nearest)?;
    let distance = (&x - &p).norm();
    out.push_str(&format!("distance = {}\n", fmt_num(distance)));
    for (id, v) in &nearest.values {
        out.push_str(&format!("{id} = {}\n", fmt_vec_clean(v.iter())));
    }
    Ok(EXIT_OK)
}

fn laplacian(sheaf: &Sheaf, spectrum: bool, out: &mut String) -> Outcome {
    let l = sheaf_laplacian(sheaf)?;
    let columns: Vec<String> = assemble_coboundary(sheaf)?
        .columns
        .iter()
        .map(|b| format!("{}[{}]", b.cell, b.dim))
        .collect();
    out.push_str(&format!("columns: {}\n", columns.join(" ")));
    for i in 0..l.nrows() {
        out.push_str(&format!("{}\n", fmt_vec(l.row(i).iter())));
    }
    if spectrum {
        let eig = symmetric_eigenvalues(&l);
        out.push_str(&format!("spectrum = {}\n", fmt_vec_clean(eig.iter())));
    }
    Ok(EXIT_OK)
}

fn interval_glue(
    doc: &SheafDocument,
    assignment: Option<&str>,
    tol: f64,
    out: &mut String,
) -> Outcome {
    let stanza = doc
        .interval
        .as_ref()
        .ok_or_else(|| AppError::Input("document has no interval stanza".into()))?;
    let sheaf = sheaflab_core::build_interval_sheaf(&stanza.cover)?;
    let locals = match assignment {
        Some(name) => named_assignment(doc, name)?,
        None => {
            let locals = stanza
                .locals
                .as_ref()
                .ok_or_else(|| AppError::Input("interval stanza has no locals".into()))?;
            if locals.len() != sheaf.interval_cells.len() {
                return Err(AppError::Input(format!(
                    "interval.locals has {} entries for {} intervals",
                    locals.len(),
                    sheaf.interval_cells.len()
                )));
            }
            NodeAssignment {
                values: sheaf
                    .interval_cells
                    .iter()
                    .zip(locals)
                    .map(|(id, v)| (id.clone(), DVector::from_vec(v.clone())))
                    .collect(),
            }
        }
    };
    match sheaf.glue(&locals, tol) {
        Ok(g) => {
            out.push_str(&format!("points = {}\n", fmt_vec(g.points.iter())));
            out.push_str(&format!("values = {}\n", fmt_vec(g.values.iter())));
            Ok(EXIT_OK)
        }
        Err(sheaflab_core::Error::GlueConflict {
            index,
            values,
            difference,
        }) => {
            out.push_str(&format!(
                "conflict at grid index {index} (x = {}): values {}, difference {}\n",
                fmt_num(sheaf.grid[index]),
                fmt_vec(values.iter()),
                fmt_num(difference)
            ));
            Ok(EXIT_INCONSISTENT)
        }
        Err(e) => Err(e.into()),
    }
}
