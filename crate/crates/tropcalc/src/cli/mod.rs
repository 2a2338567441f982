//! The `tropcalc` command line.
//!
//! Exit codes: 0 pass, 1 identity or validation failure, 2 usage or parse
//! error.

pub mod expr;
pub mod io;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::deltaforms::{check_balanced, stars, DeltaForm};
use crate::integration::{integrate_cell, integrate_over};
use crate::random::{Sampler, SizeSpec};

use io::{polyhedron_json, superform_json, Document, Object};
use suites::Suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default seed of the randomized suites.
pub const DEFAULT_SEED: u64 = 20240517;

#[derive(Parser, Debug)]
#[command(name = "tropcalc", version, about = "Exact δ-form calculus on affine spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the balancing condition of a δ-form.
    CheckBalance { file: PathBuf, name: String },
    /// Evaluate an expression over the objects of a document.
    Compute {
        file: PathBuf,
        expr: String,
        /// Output document (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an identity suite over a document or over random instances.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Bounds `rank,cells,degree`, e.g. `3,12,4`.
        #[arg(long, value_parser = parse_size)]
        size: Option<SizeSpec>,
        /// Number of random instances.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Write a document with both sides of every failing instance here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Integrate a superform over a polyhedron or a weighted cell set.
    Integrate { file: PathBuf, form: String, cells: String },
}

fn parse_size(s: &str) -> Result<SizeSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [r, c, d] = parts.as_slice() else {
        return Err("expected `rank,cells,degree`".into());
    };
    let num = |x: &str| x.parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let size = SizeSpec { max_rank: num(r)?, max_cells: num(c)?, max_degree: num(d)? as u32 };
    if !(1..=4).contains(&size.max_rank) || size.max_cells == 0 || size.max_cells > 12 || size.max_degree > 4 {
        return Err("bounds are rank 1..=4, cells 1..=12, degree 0..=4".into());
    }
    Ok(size)
}

/// A failure that maps to an exit code.
struct Exit(i32, String);

fn usage_err(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

fn load(path: &Path) -> Result<Document, Exit> {
    let text = std::fs::read_to_string(path).map_err(|e| usage_err(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| usage_err(format!("{}: {e}", path.display())))
}

fn lookup<'a>(doc: &'a Document, name: &str) -> Result<&'a Object, Exit> {
    doc.objects.get(name).ok_or_else(|| usage_err(format!("no object named `{name}`")))
}

fn write_doc(doc: &Document, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Exit> {
    match path {
        Some(p) => std::fs::write(p, doc.to_text()).map_err(|e| usage_err(format!("{}: {e}", p.display()))),
        None => out.write_all(doc.to_text().as_bytes()).map_err(|e| usage_err(e.to_string())),
    }
}

/// Caps the global thread pool at `TROPCALC_THREADS` if set.
fn configure_threads() {
    if let Some(n) = std::env::var("TROPCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the command line on `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::CheckBalance { file, name } => check_balance(&file, &name, out),
        Command::Compute { file, expr, output } => compute(&file, &expr, output.as_deref(), out),
        Command::Verify { file, random, suite, seed, size, count, dump } => {
            let source = if random { Source::Random { seed, size: size.unwrap_or_default(), count } } else {
                Source::File(file.expect("required unless --random"))
            };
            verify(source, suite, dump.as_deref(), out)
        }
        Command::Integrate { file, form, cells } => integrate(&file, &form, &cells, out),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn check_balance(file: &Path, name: &str, out: &mut dyn Write) -> Result<i32, Exit> {
    let doc = load(file)?;
    let Object::DeltaForm(form) = lookup(&doc, name)? else {
        return Err(usage_err(format!("`{name}` is not a deltaform")));
    };
    let report = check_balanced(form);
    if report.balanced {
        let _ = writeln!(out, "{name}: balanced");
        return Ok(EXIT_PASS);
    }
    let _ = writeln!(out, "{name}: not balanced at {} face(s)", report.failing_faces.len());
    for star in stars(form).iter().filter(|s| report.failing_faces.contains(&s.face)) {
        let coeffs: Vec<_> = star.entries.iter().map(|e| &form.cells()[e.cell].1).collect();
        let across: Vec<_> = star.across_components(&coeffs).iter().map(superform_json).collect();
        let entry = serde_json::json!({ "face": polyhedron_json(&star.face), "across": across });
        let _ = writeln!(out, "{entry}");
    }
    Ok(EXIT_FAIL)
}

fn compute(file: &Path, src: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, Exit> {
    let doc = load(file)?;
    let e = expr::parse(src).map_err(|e| usage_err(e.to_string()))?;
    match expr::eval(&e, &doc) {
        Ok(obj) => {
            write_doc(&Document::single("result", obj), output, out)?;
            Ok(EXIT_PASS)
        }
        Err(e) if e.is_usage() => Err(usage_err(e.to_string())),
        Err(e) => Err(Exit(EXIT_FAIL, e.to_string())),
    }
}

enum Source {
    File(PathBuf),
    Random { seed: u64, size: SizeSpec, count: usize },
}

fn verify(source: Source, suite: Suite, dump: Option<&Path>, out: &mut dyn Write) -> Result<i32, Exit> {
    let instances = match source {
        Source::File(f) => suites::from_document(suite, &load(&f)?),
        Source::Random { seed, size, count } => suites::random_instances(suite, &mut Sampler::new(seed, size), count),
    };
    if instances.is_empty() {
        return Err(usage_err("no instances of this suite in the input"));
    }
    let results = suites::run_all(&instances);
    let mut failures = Document::default();
    let mut passed = 0;
    for (i, (inst, res)) in instances.iter().zip(&results).enumerate() {
        match res {
            Ok(o) if o.pass => {
                passed += 1;
                let _ = writeln!(out, "{i:>4} {:<10} pass", inst.label());
            }
            Ok(o) => {
                let _ = writeln!(out, "{i:>4} {:<10} FAIL", inst.label());
                for (k, v) in inst.inputs() {
                    failures.objects.insert(format!("{i}.{k}"), v);
                }
                failures.objects.insert(format!("{i}.lhs"), o.lhs.clone());
                failures.objects.insert(format!("{i}.rhs"), o.rhs.clone());
            }
            Err(msg) => {
                let _ = writeln!(out, "{i:>4} {:<10} ERROR {msg}", inst.label());
                for (k, v) in inst.inputs() {
                    failures.objects.insert(format!("{i}.{k}"), v);
                }
            }
        }
    }
    let _ = writeln!(out, "{passed}/{} passed", instances.len());
    if passed == instances.len() {
        return Ok(EXIT_PASS);
    }
    write_doc(&failures, dump, out)?;
    Ok(EXIT_FAIL)
}

fn integrate(file: &Path, form: &str, cells: &str, out: &mut dyn Write) -> Result<i32, Exit> {
    let doc = load(file)?;
    let Object::Superform(alpha) = lookup(&doc, form)? else {
        return Err(usage_err(format!("`{form}` is not a superform")));
    };
    let value = match lookup(&doc, cells)? {
        Object::Polyhedron(p) => integrate_cell(p, alpha),
        Object::DeltaForm(c) => integrate_over(c, alpha),
        other => return Err(usage_err(format!("`{cells}` is a {}, not a cell set", other.kind()))),
    };
    match value {
        Ok(v) => {
            let _ = writeln!(out, "{v}");
            Ok(EXIT_PASS)
        }
        Err(e) => Err(Exit(EXIT_FAIL, e.to_string())),
    }
}

/// Reads a δ-form from a document file; used by the examples.
pub fn read_deltaform(path: &Path, name: &str) -> Result<DeltaForm, String> {
    let doc = load(path).map_err(|Exit(_, m)| m)?;
    match doc.objects.get(name) {
        Some(Object::DeltaForm(d)) => Ok(d.clone()),
        _ => Err(format!("no deltaform named `{name}`")),
    }
}
