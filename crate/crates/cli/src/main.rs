//! `flops`: arrangements, SKMS descriptions and verification suites for
//! 3-fold flopping contractions.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flop_core::arrangement::{
    enumerate_alcoves, enumerate_chambers, wall_rank_labels, ExchangeGraph, FiniteArrangement, LevelArrangement,
    Window,
};
use flop_core::dynkin::{build_diagram, catalog_datum, Family, FlopDatum};
use flop_core::io::{arrangement_document, report_document, skms_document, to_pretty, Meta};
use flop_core::linalg::qi;
use flop_core::render::{exchange_graph_dot, level_line_svg, plane_svg, skms_svg};
use flop_core::skms::{skms_for_length, SkmsError};
use flop_core::tracking::rank_vector;
use flop_core::verify::{run_suite, Report, SUITES};

const OUTPUT_DIR_ENV: &str = "FLOPS_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "flops", version, about = "Hyperplane arrangements of 3-fold flops")]
struct Cli {
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Directory for output files when --output is not given.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
    /// Worker threads for parallel suites (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walls and chambers (finite) or alcoves (affine) of a flop datum.
    Arrangement(ArrangementArgs),
    /// The punctured-sphere description for a smooth irreducible flop.
    Skms(SkmsArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Svg,
    Table,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Svg => "svg",
            Format::Table => "txt",
        }
    }
}

#[derive(Args, Debug)]
struct ArrangementArgs {
    /// Diagram family: A, D or E.
    #[arg(long, requires_all = ["rank", "white"], conflicts_with = "catalog_length")]
    family: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    /// White vertices, comma separated, in Bourbaki numbering.
    #[arg(long, value_delimiter = ',')]
    white: Option<Vec<usize>>,
    /// One of the six irreducible flops, by length 1..6.
    #[arg(long)]
    catalog_length: Option<i64>,
    #[arg(long, conflicts_with = "affine")]
    finite: bool,
    #[arg(long)]
    affine: bool,
    /// Translation bound K for affine walls. Defaults to the smallest K
    /// covering the level box [-1, 2].
    #[arg(long)]
    window: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Recorded in the output; arrangements are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SkmsArgs {
    #[arg(long)]
    length: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random points per randomized suite.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

/// Failures mapped to exit codes.
enum Failure {
    Usage(String),
    Computation(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Computation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Computation(m) | Failure::Verification(m) => m,
        }
    }
}

fn computation(e: impl std::fmt::Display) -> Failure {
    Failure::Computation(e.to_string())
}

struct Artifact {
    stem: String,
    format: Format,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Arrangement(a) => cmd_arrangement(a),
        Command::Skms(a) => cmd_skms(a),
        Command::Verify(a) => cmd_verify(a),
    };
    let (artifact, failure) = match result {
        Ok(a) => (Some(a), None),
        Err((a, f)) => (a, Some(f)),
    };
    if let Some(a) = artifact {
        if let Err(e) = emit(&cli, &a) {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(cli: &Cli, a: &Artifact) -> std::io::Result<()> {
    let path = match (&cli.output, &cli.output_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            Some(dir.join(format!("{}.{}", a.stem, a.format.extension())))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => std::fs::write(p, &a.text),
        None => {
            print!("{}", a.text);
            Ok(())
        }
    }
}

type Outcome = Result<Artifact, (Option<Artifact>, Failure)>;

fn usage(m: impl Into<String>) -> (Option<Artifact>, Failure) {
    (None, Failure::Usage(m.into()))
}

fn datum_from(args: &ArrangementArgs) -> Result<FlopDatum, Failure> {
    match (&args.family, args.catalog_length) {
        (Some(f), None) => {
            let family: Family = f.parse().map_err(|e: flop_core::dynkin::DynkinError| Failure::Usage(e.to_string()))?;
            let rank = args.rank.ok_or_else(|| Failure::Usage("--rank is required with --family".into()))?;
            let white = args.white.as_ref().ok_or_else(|| Failure::Usage("--white is required with --family".into()))?;
            let diagram = build_diagram(family, rank).map_err(|e| Failure::Usage(e.to_string()))?;
            FlopDatum::new(diagram, white).map_err(|e| Failure::Usage(e.to_string()))
        }
        (None, Some(len)) => catalog_datum(len)
            .ok_or_else(|| Failure::Usage(SkmsError::UnsupportedLength(len).to_string())),
        _ => Err(Failure::Usage("give exactly one of --family/--rank/--white or --catalog-length".into())),
    }
}

fn cmd_arrangement(args: &ArrangementArgs) -> Outcome {
    let fd = datum_from(args).map_err(|f| (None, f))?;
    let white: Vec<String> = fd.white().iter().map(|v| v.to_string()).collect();
    let stem = format!("arrangement-{}-{}-{}", fd.diagram().name(), white.join("_"), if args.affine { "affine" } else { "finite" });
    let config = json!({
        "family": fd.diagram().family().to_string(),
        "rank": fd.diagram().rank(),
        "white": fd.white(),
        "catalog_length": args.catalog_length,
        "mode": if args.affine { "affine" } else { "finite" },
        "window": args.window,
        "format": args.format.extension(),
    });
    let (graph, la) = if args.affine {
        let window = match args.window {
            Some(k) if k < 1 => return Err(usage("--window must be at least 1")),
            Some(k) => Window::from_k(&fd, k),
            None => Window::covering(&fd, qi(-1), qi(2)),
        };
        let la = LevelArrangement::new(&fd, window).map_err(|e| (None, computation(e)))?;
        let g = enumerate_alcoves(&la).map_err(|e| (None, computation(e)))?;
        (g, Some(la))
    } else {
        if args.window.is_some() {
            return Err(usage("--window applies to --affine only"));
        }
        let fa = FiniteArrangement::new(&fd).map_err(|e| (None, computation(e)))?;
        (enumerate_chambers(&fa).map_err(|e| (None, computation(e)))?, None)
    };
    let meta = Meta {
        command: "arrangement".into(),
        config,
        seed: args.seed,
        window: la.as_ref().map(|l| l.window.clone()),
    };
    let text = match args.format {
        Format::Json => to_pretty(&arrangement_document(&fd, &graph, la.as_ref(), &meta)),
        Format::Dot => exchange_graph_dot(&graph, &fd.diagram().name()),
        Format::Svg => match &la {
            Some(la) if fd.n() == 1 => level_line_svg(la),
            _ => plane_svg(&graph),
        }
        .map_err(|e| usage(e.to_string()))?,
        Format::Table => arrangement_table(&graph, la.as_ref()),
    };
    Ok(Artifact { stem, format: args.format, text })
}

fn arrangement_table(graph: &ExchangeGraph, la: Option<&LevelArrangement>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "walls: {}", graph.walls.len());
    for (k, w) in graph.walls.iter().enumerate() {
        let _ = writeln!(s, "  H{k}  {:?}", w.covector);
    }
    let _ = writeln!(s, "chambers: {}", graph.len());
    for c in &graph.chambers {
        let word: Vec<String> = c.word.iter().map(|&l| graph.label_name(l)).collect();
        let _ = writeln!(
            s,
            "  C{:<4} {:<12} rays {:?}  ranks {:?}  word {}",
            c.id,
            c.sign_vector,
            c.rays.columns(),
            rank_vector(graph, c.id),
            if word.is_empty() { "-".to_string() } else { word.join(" ") }
        );
    }
    if let Some(la) = la {
        if let Ok(labels) = wall_rank_labels(la, graph) {
            let _ = writeln!(s, "level walls:");
            for w in labels {
                let _ = writeln!(s, "  {:>6}  label {}", w.position.to_string(), w.label);
            }
        }
    }
    s
}

fn cmd_skms(args: &SkmsArgs) -> Outcome {
    let desc = skms_for_length(args.length).map_err(|e| match e {
        SkmsError::UnsupportedLength(_) => usage(e.to_string()),
        other => (None, computation(other)),
    })?;
    let meta = Meta {
        command: "skms".into(),
        config: json!({ "length": args.length, "format": args.format.extension() }),
        seed: args.seed,
        window: catalog_datum(args.length).map(|fd| Window::covering(&fd, qi(-1), qi(2))),
    };
    let text = match args.format {
        Format::Json => to_pretty(&skms_document(&desc, &meta)),
        Format::Svg => skms_svg(&desc),
        Format::Table => {
            let mut s = format!(
                "length {}: {} equator holes, {} punctures\n",
                desc.length,
                desc.equator_hole_count(),
                desc.total_punctures()
            );
            for (p, l) in desc.equator_holes.iter().zip(&desc.hole_labels) {
                let _ = writeln!(s, "  {:>6}  label {}", p.to_string(), l);
            }
            s
        }
        Format::Dot => return Err(usage("skms has no DOT output")),
    };
    Ok(Artifact { stem: format!("skms-{}", args.length), format: args.format, text })
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let names: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        return Err(usage(format!("unknown suite {:?}; expected one of {} or all", args.suite, SUITES.join(", "))));
    };
    let reports: Vec<Report> =
        names.iter().map(|n| run_suite(n, args.seed, args.samples).expect("known suite")).collect();
    let meta = |suite: &str| Meta {
        command: "verify".into(),
        config: json!({ "suite": suite, "seed": args.seed, "samples": args.samples }),
        seed: Some(args.seed),
        window: None,
    };
    let passed = reports.iter().all(|r| r.passed);
    let doc: Value = if reports.len() == 1 {
        report_document(&reports[0], &meta(&args.suite))
    } else {
        let mut d = report_document(&reports[0], &meta("all"));
        d["suite"] = json!("all");
        d["passed"] = json!(passed);
        d["properties"] = json!(reports.iter().flat_map(|r| r.properties.clone()).collect::<Vec<_>>());
        d
    };
    let artifact = Artifact { stem: format!("verify-{}-{}", args.suite, args.seed), format: Format::Json, text: to_pretty(&doc) };
    if passed {
        Ok(artifact)
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
        Err((Some(artifact), Failure::Verification(format!("failing suites: {}", failed.join(", ")))))
    }
}
