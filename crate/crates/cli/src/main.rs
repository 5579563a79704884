use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use cactus_doodles::canonical::ComponentMode;
use cactus_doodles::equivalence::{equivalent, minimize, psi_orbit, SearchOptions, DEFAULT_MAX_NODES};
use cactus_doodles::export::{to_dot, to_svg};
use cactus_doodles::io::{from_json, to_json, to_json_pretty, DiagramJson};
use cactus_doodles::realize::faces;
use cactus_doodles::{close, perm_image, CactusWord, GaussDiagram};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cactus", version, about = "Cactus group words and Gauss diagrams of cactus doodles")]
struct Cli {
    /// Largest Ψ-orbit to explore before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: usize,
    /// Worker threads for orbit search.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Keep circles apart instead of treating them as interchangeable.
    #[arg(long, global = true)]
    labeled_components: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the permutation of a word, e.g. "n=3 s(1,3)".
    Perm { word: String },
    /// Close a word into a diagram and print it as JSON.
    Close {
        word: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Check that a diagram is well formed.
    Validate { diagram: String },
    /// Reduce a diagram to a minimal one.
    Minimize {
        diagram: String,
        /// Write the moves taken to this file.
        #[arg(long)]
        moves: Option<String>,
    },
    /// Decide whether two diagrams are equivalent.
    Equiv { first: String, second: String },
    /// Print the Ψ-orbit of a diagram.
    Orbit { diagram: String },
    /// Check whether a diagram comes from a curve on the sphere.
    Realize {
        diagram: String,
        /// Print the boundary walks of the faces as JSON.
        #[arg(long)]
        faces: bool,
    },
    /// Draw a diagram.
    Export {
        diagram: String,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
}

enum Outcome {
    Done,
    No,
}

/// Inline text, or the contents of the named file.
fn read_arg(arg: &str) -> Result<String, String> {
    if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

fn word(arg: &str) -> Result<CactusWord, String> {
    read_arg(arg)?.trim().parse().map_err(|e| format!("bad word: {e}"))
}

/// Diagram JSON, or a word whose closure is taken.
fn diagram(arg: &str) -> Result<GaussDiagram, String> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with('{') {
        from_json(&text).map_err(|e| format!("bad diagram: {e}"))
    } else {
        Ok(close(&text.trim().parse::<CactusWord>().map_err(|e| format!("bad diagram or word: {e}"))?))
    }
}

/// Output is buffered so a closed pipe downstream cannot abort a half-printed run.
macro_rules! say {
    ($out:expr, $($t:tt)*) => {{ let _ = writeln!($out, $($t)*); }};
}

macro_rules! put {
    ($out:expr, $($t:tt)*) => {{ let _ = write!($out, $($t)*); }};
}

fn run(cli: &Cli, out: &mut String) -> Result<Outcome, String> {
    let opts = SearchOptions {
        max_nodes: cli.max_nodes,
        parallel: cli.threads > 1,
        mode: if cli.labeled_components { ComponentMode::Labeled } else { ComponentMode::Unlabeled },
    };
    match &cli.command {
        Command::Perm { word: w } => say!(out, "{}", perm_image(&word(w)?)),
        Command::Close { word: w, pretty } => {
            let d = close(&word(w)?);
            say!(out, "{}", if *pretty { to_json_pretty(&d) } else { to_json(&d) });
        }
        Command::Validate { diagram: arg } => {
            let d = diagram(arg)?;
            say!(out, 
                "valid: {} circles, {} singular sets, {} marked points",
                d.circles().len(),
                d.orders().len(),
                d.point_count()
            );
        }
        Command::Minimize { diagram: arg, moves } => {
            let m = minimize(&diagram(arg)?, &opts).map_err(|e| e.to_string())?;
            if let Some(path) = moves {
                let text = serde_json::to_string_pretty(&m.moves).map_err(|e| e.to_string())?;
                std::fs::write(path, text).map_err(|e| format!("{path}: {e}"))?;
            }
            let summary = serde_json::json!({
                "crossing_number": m.diagram.crossing_count(),
                "diagram": DiagramJson::from_diagram(&m.diagram),
            });
            say!(out, "{summary}");
        }
        Command::Equiv { first, second } => {
            let same = equivalent(&diagram(first)?, &diagram(second)?, &opts).map_err(|e| e.to_string())?;
            say!(out, "{}", if same { "equivalent" } else { "not equivalent" });
            if !same {
                return Ok(Outcome::No);
            }
        }
        Command::Orbit { diagram: arg } => {
            let orbit = psi_orbit(&diagram(arg)?, &opts).map_err(|e| e.to_string())?;
            say!(out, "size: {}", orbit.size());
            for key in orbit.representatives() {
                say!(out, "{key}");
            }
        }
        Command::Realize { diagram: arg, faces: dump } => {
            let d = diagram(arg)?;
            let f = faces(&d);
            let ok = f.components.iter().all(|c| c.genus == 0);
            say!(out, "{}", if ok { "realizable" } else { "not realizable" });
            for (i, c) in f.components.iter().enumerate() {
                say!(out, "component {i}: V={} E={} F={} genus={}", c.vertices, c.edges, c.faces, c.genus);
            }
            if f.free_loops > 0 {
                say!(out, "free loops: {}", f.free_loops);
            }
            if f.components.len() + f.free_loops > 1 {
                say!(out, "note: components checked separately");
            }
            if *dump {
                say!(out, "{}", serde_json::to_string(&f.faces).map_err(|e| e.to_string())?);
            }
        }
        Command::Export { diagram: arg, format } => {
            let d = diagram(arg)?;
            match format {
                Format::Dot => put!(out, "{}", to_dot(&d)),
                Format::Svg => put!(out, "{}", to_svg(&d)),
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(pool) => pool.install(|| run(&cli, &mut out)),
        Err(e) => Err(e.to_string()),
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
