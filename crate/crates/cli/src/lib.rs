//! Library side of the `qpencil` command-line tool.

pub mod commands;
pub mod doc;

use clap::{Parser, Subcommand, ValueEnum};
use qpencil::exec::Exec;
use qpencil::verify::Scale;
use qpencil::{Error, Pencil};
use serde_json::{json, Value};

use doc::PencilDocument;

#[derive(Debug, Parser)]
#[command(name = "qpencil", version, about = "Pairs of quadratic forms in characteristic two")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Read the pencil document from this file instead of standard input.
    #[arg(long = "in", global = true)]
    pub input: Option<String>,
    /// Write the result to this file instead of standard output.
    #[arg(long = "out", global = true)]
    pub output: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of the half-discriminant binary form.
    Halfdisc,
    /// Whether the pencil is regular.
    Regular,
    /// Kronecker normal form read off the canonical basis.
    Normalform,
    /// The invariant `r` and its class, after rebasing so that `a_n ≠ 0`.
    Rinv,
    /// Whether two pencils differ by a change of variables.
    Isiso {
        /// The second pencil document.
        #[arg(long)]
        other: String,
    },
    /// Automorphisms of the pair; with `--ext`, also of the variety over that extension.
    Autos {
        #[arg(long)]
        ext: Option<u32>,
    },
    /// Reflections attached to the roots of the half-discriminant.
    Reflections {
        #[arg(long)]
        ext: Option<u32>,
    },
    /// Maximal linear subspaces of the base locus.
    Generators {
        #[arg(long)]
        ext: Option<u32>,
    },
    /// The canonical plane inside the base locus.
    CanonicalPlane,
    /// Arf invariant of the form over the algebra.
    Arf,
    /// Intersection lattice of the generator classes.
    Lattice {
        #[arg(long)]
        ext: Option<u32>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = ScaleArg::Small)]
        scale: ScaleArg,
        #[arg(long, value_enum, default_value_t = ExecArg::Parallel)]
        exec: ExecArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScaleArg {
    Small,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

/// Result of a run: process exit code and the JSON text to emit.
pub struct Outcome {
    pub code: u8,
    pub body: String,
}

enum Failure {
    Malformed(String, String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn is_leaf(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty JSON with arrays of scalars kept on one line.
fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if items.iter().all(is_leaf) => {
            let inner: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("[{}]", inner.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!("{pad}{}: ", Value::String(k.clone())));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        leaf => out.push_str(&leaf.to_string()),
    }
}

pub fn render(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn load(text: &str) -> Result<Pencil, Failure> {
    let doc = PencilDocument::parse(text).map_err(|m| Failure::Malformed("parse".into(), m))?;
    Ok(doc.to_pencil()?)
}

fn read_source(path: Option<&str>) -> Result<String, Failure> {
    let io = |e: std::io::Error| Failure::Malformed("io".into(), e.to_string());
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(io),
        None => std::io::read_to_string(std::io::stdin()).map_err(io),
    }
}

fn dispatch(cli: &Cli) -> Result<Value, Failure> {
    use commands as c;
    if let Command::Verify { scale, exec } = cli.command {
        let scale = match scale {
            ScaleArg::Small => Scale::Small,
            ScaleArg::Full => Scale::Full,
        };
        let exec = match exec {
            ExecArg::Sequential => Exec::Sequential,
            ExecArg::Parallel => Exec::Parallel,
        };
        return Ok(c::verify_cmd(scale, exec));
    }
    let p = load(&read_source(cli.input.as_deref())?)?;
    let out = match &cli.command {
        Command::Halfdisc => c::halfdisc(&p)?,
        Command::Regular => c::regular(&p)?,
        Command::Normalform => c::normalform(&p)?,
        Command::Rinv => c::rinv(&p)?,
        Command::Isiso { other } => c::isiso(&p, &load(&read_source(Some(other))?)?)?,
        Command::Autos { ext } => c::autos(&p, *ext)?,
        Command::Reflections { ext } => c::reflections_cmd(&p, *ext)?,
        Command::Generators { ext } => c::generators(&p, *ext)?,
        Command::CanonicalPlane => c::canonical_plane_cmd(&p)?,
        Command::Arf => c::arf(&p)?,
        Command::Lattice { ext } => c::lattice(&p, *ext)?,
        Command::Verify { .. } => unreachable!(),
    };
    Ok(out)
}

/// Runs one command; exit code 0 on success, 1 on a violated precondition, 2 on malformed input.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(v) => Outcome { code: 0, body: render(&v) },
        Err(Failure::Malformed(kind, message)) => {
            Outcome { code: 2, body: render(&json!({ "error": { "kind": kind, "message": message } })) }
        }
        Err(Failure::Library(e)) => {
            let code = if e.is_malformed_input() { 2 } else { 1 };
            Outcome { code, body: render(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } })) }
        }
    }
}
