//! Command-line front end: parse, verify, derive, certify and search.
//!
//! Exit codes: 0 when every check passes (or a search finds solutions), 1 when
//! a check fails or a search finds nothing, 2 for usage and parse errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use currents::certify::{certify, expected_genus};
use currents::derive::{derive, RotationSystem};
use currents::laws::{self, face_walks, Mode};
use currents::search::{self, build_scaffold_with, column_count, EndShape, SearchConstraints, SearchError, TailLadder};
use currents::tracer::{face_log, Behavior};
use currents::Graph;

#[derive(Parser, Debug)]
#[command(name = "currents", about = "Current graphs over Z3 x Z12s and the K36s embeddings they generate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the current-graph laws and print one line per law.
    Verify(GraphArgs),
    /// Print every face boundary walk and its log.
    Trace(GraphArgs),
    /// Print the derived rotation system.
    Derive {
        #[command(flatten)]
        graph: GraphArgs,
        /// Name derived vertices by group element instead of by integer.
        #[arg(long)]
        elements: bool,
    },
    /// Certify a derived rotation system as a triangular embedding of K_n.
    Certify { file: PathBuf },
    /// Verify, derive and certify in one go.
    Pipeline {
        #[command(flatten)]
        graph: GraphArgs,
        /// Directory for the derived rotation system and certificate.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Search ladder scaffolds for current graphs.
    Search(SearchArgs),
    /// Print the genus of K_n.
    Genus {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    pub file: PathBuf,
    /// cascade or index2; defaults to the file's declared index.
    #[arg(long)]
    pub mode: Option<Mode>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = 0)]
    pub rungs: usize,
    /// Second component of the first fixed rung current.
    #[arg(long, default_value_t = 1)]
    pub rung_start: u32,
    /// Fixed rungs at the far end, checkerboard shifted by one column.
    #[arg(long, default_value_t = 0)]
    pub tail_rungs: usize,
    /// Second component of the first tail rung current.
    #[arg(long, default_value_t = 1)]
    pub tail_start: u32,
    /// Free columns between the tail rungs and the seam.
    #[arg(long, default_value_t = 0)]
    pub tail_gap: usize,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 600)]
    pub budget: u64,
    #[arg(long, conflicts_with = "first")]
    pub all: bool,
    #[arg(long)]
    pub first: bool,
    /// Only try this entry of the end-shape catalog.
    #[arg(long)]
    pub shape: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep every current in the even subgroup.
    #[arg(long)]
    pub even_only: bool,
    /// Directory for solution files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs the CLI; reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Outcome { report, passed }) => {
            let _ = out.write_all(report.as_bytes());
            if passed {
                0
            } else {
                1
            }
        }
        Err(Failure { code, message, report }) => {
            let _ = out.write_all(report.as_bytes());
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Outcome {
    report: String,
    passed: bool,
}

struct Failure {
    code: i32,
    message: String,
    /// Partial report printed before the diagnostic.
    report: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            report: String::new(),
        }
    }

    fn check(message: impl Into<String>, report: String) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            report,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(args: &GraphArgs) -> Result<(Graph, Mode), Failure> {
    let text = read(&args.file)?;
    let graph = Graph::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", args.file.display())))?;
    let mode = match (args.mode, graph.declared_index()) {
        (Some(m), _) => m,
        (None, Some(k)) => Mode::from_index(k)
            .ok_or_else(|| Failure::usage(format!("{}: unsupported index {k}", args.file.display())))?,
        (None, None) => Mode::Cascade,
    };
    Ok((graph, mode))
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Verify(args) => {
            let (g, mode) = load(&args)?;
            let report = laws::check(&g, mode);
            Ok(Outcome {
                report: format!("mode {mode}\n{report}"),
                passed: report.passed(),
            })
        }
        Command::Trace(args) => {
            let (g, mode) = load(&args)?;
            Ok(Outcome {
                report: trace_report(&g, mode),
                passed: true,
            })
        }
        Command::Derive { graph, elements } => {
            let (g, mode) = load(&graph)?;
            let rs = derive(&g, mode).map_err(|e| Failure::check(format!("derive: {e}"), String::new()))?;
            let text = if elements { rs.to_element_text(g.group()) } else { rs.to_text() };
            Ok(Outcome {
                report: text,
                passed: true,
            })
        }
        Command::Certify { file } => {
            let text = read(&file)?;
            let rs = RotationSystem::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let cert = certify(&rs).map_err(|e| Failure::check(format!("certify: {e}"), String::new()))?;
            Ok(Outcome {
                report: cert.to_string(),
                passed: cert.pass,
            })
        }
        Command::Pipeline { graph, emit } => pipeline(&graph, emit.as_deref()),
        Command::Search(args) => run_search(&args),
        Command::Genus { n } => {
            let genus = expected_genus(n).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(Outcome {
                report: format!("{genus}\n"),
                passed: true,
            })
        }
    }
}

fn trace_report(g: &Graph, mode: Mode) -> String {
    let mut s = String::new();
    for (i, walk) in face_walks(g, mode).iter().enumerate() {
        let log = face_log(walk, g);
        let _ = writeln!(s, "face {i} length {} log {}", walk.len(), log.len());
        let darts: Vec<String> = walk
            .steps()
            .iter()
            .map(|st| {
                let name = g.dart_name(st.dart);
                match st.behavior {
                    Behavior::Normal => name,
                    Behavior::Alternate => format!("{name}*"),
                }
            })
            .collect();
        let _ = writeln!(s, "  darts {}", darts.join(" "));
        let values: Vec<String> = log.values().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "  log {}", values.join(" "));
    }
    s
}

fn pipeline(args: &GraphArgs, emit: Option<&Path>) -> Result<Outcome, Failure> {
    let (g, mode) = load(args)?;
    let mut report = format!("mode {mode}\n");
    let laws = laws::check(&g, mode);
    let _ = write!(report, "{laws}");
    if !laws.passed() {
        let failed: Vec<String> = laws.failed_laws().iter().map(|l| l.label(mode).to_string()).collect();
        return Err(Failure::check(format!("verify: failed {}", failed.join(", ")), report));
    }
    let rs = derive(&g, mode).map_err(|e| Failure::check(format!("derive: {e}"), report.clone()))?;
    let cert = certify(&rs).map_err(|e| Failure::check(format!("certify: {e}"), report.clone()))?;
    let _ = write!(report, "{cert}");
    if let Some(dir) = emit {
        let write = |name: &str, text: &str| {
            std::fs::write(dir.join(name), text).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))
        };
        std::fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
        write("derived.txt", &rs.to_text())?;
        write("derived-elements.txt", &rs.to_element_text(g.group()))?;
        write("certificate.txt", &cert.to_string())?;
    }
    if !cert.pass {
        return Err(Failure::check("certify: embedding is not a genus embedding of K_n", report));
    }
    Ok(Outcome { report, passed: true })
}

fn run_search(args: &SearchArgs) -> Result<Outcome, Failure> {
    if args.s == 0 {
        return Err(Failure::usage("--s must be at least 1"));
    }
    let mode = args
        .mode
        .unwrap_or(if args.s % 2 == 1 { Mode::Cascade } else { Mode::Index2 });
    let columns = column_count(args.s, mode).map_err(|e| Failure::usage(e.to_string()))?;
    let tail_span = if args.tail_rungs > 0 { args.tail_rungs + args.tail_gap } else { 0 };
    if args.rungs + tail_span >= columns {
        return Err(Failure::usage(format!(
            "{} fixed columns leave no gadget columns out of {columns}",
            args.rungs + tail_span
        )));
    }
    let gadget_end = columns - tail_span;
    let catalog = EndShape::catalog_span(mode, args.rungs..gadget_end);
    let tail = (args.tail_rungs > 0).then_some(TailLadder {
        rungs: args.tail_rungs,
        start: args.tail_start,
        gap: args.tail_gap,
    });
    let shapes: Vec<(usize, EndShape)> = match args.shape {
        Some(i) if i < catalog.len() => vec![(i, catalog[i].clone())],
        Some(i) => return Err(Failure::usage(format!("--shape {i}: catalog has {} entries", catalog.len()))),
        None => catalog.into_iter().enumerate().collect(),
    };
    let budget = Duration::from_secs(args.budget);
    let deadline = Instant::now() + budget;
    let mut report = String::new();
    let mut found = 0usize;
    let total = shapes.len();
    for (k, (i, shape)) in shapes.into_iter().enumerate() {
        let scaffold = build_scaffold_with(args.s, mode, args.rungs, args.rung_start, tail, &shape)
            .map_err(|e| Failure::usage(e.to_string()))?;
        let mut constraints = SearchConstraints::new(mode);
        constraints.seed = args.seed;
        constraints.even_only = args.even_only;
        constraints.max_solutions = if args.all { None } else { Some(1) };
        // split what is left of the budget evenly over the remaining shapes
        constraints.budget = deadline.saturating_duration_since(Instant::now()) / (total - k) as u32;
        let _ = write!(report, "shape {i} [{shape}]: ");
        match search::search(&scaffold, &constraints) {
            Ok(outcome) => {
                let _ = writeln!(
                    report,
                    "{} solution(s), {:?}, {} embeddings, {} nodes",
                    outcome.solutions.len(),
                    outcome.status,
                    outcome.embeddings,
                    outcome.nodes
                );
                for sol in &outcome.solutions {
                    found += 1;
                    let text = sol.graph.serialize();
                    match &args.out {
                        Some(dir) => {
                            std::fs::create_dir_all(dir)
                                .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
                            let path = dir.join(format!("solution-{found:03}.txt"));
                            std::fs::write(&path, &text)
                                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                            let _ = writeln!(report, "  wrote {}", path.display());
                        }
                        None => {
                            let _ = write!(report, "{text}");
                        }
                    }
                }
                if !args.all {
                    break;
                }
            }
            Err(e @ SearchError::Unsound(_)) => return Err(Failure::check(e.to_string(), report)),
            Err(e) => {
                let _ = writeln!(report, "{e}");
            }
        }
        if Instant::now() >= deadline {
            break;
        }
    }
    if found == 0 {
        return Err(Failure::check("no solution found", report));
    }
    Ok(Outcome { report, passed: true })
}
