//! Command-line front end: validate multiverse files, list states, inspect
//! spines, build and verify the clock lattices, and run the property suite.
//!
//! Exit status is 0 on success, 1 on a domain error or failed verification,
//! and 2 on a usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use clocklat::dual_lattice::GenusClock;
use clocklat::generate::seed_from_env;
use clocklat::lattice::{Lattice, LatticeError};
use clocklat::multiverse::{Multiverse, MultiverseFile, State};
use clocklat::planar_lattice::{PlanarClock, UnframedMoves};
use clocklat::spine::{EdgeTag, Spine};
use clocklat::suite::{self, SuiteConfig};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SCHEMA_HELP: &str = "\
Multiverse files are JSON objects:
  components   list of {vertices: [[dart, ...] counterclockwise], edges: [[d, d']], boundary: [[arc dart, ...]]}
  containment  optional rows [child, parent, parent face, child outer face]
  outer        boundary circle id of the outer boundary
  starred      starred face ids
  framing      optional [{face, rotation: [corner dart, ...], holes_after}]";

/// One invocation: a single command with its input and flags.
#[derive(Debug, Parser)]
#[command(name = "clocklat", version, about = "States and clock lattices of multiverses", after_help = SCHEMA_HELP)]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a file against the multiverse definition and print its counts.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the states, one per line.
    States {
        file: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// Summarize the spine, or export it.
    Spine {
        file: PathBuf,
        /// Drop forbidden edges.
        #[arg(long)]
        reduced: bool,
        #[arg(long, value_enum)]
        export: Option<SpineExport>,
    },
    /// Build the lattice of plane transpositions.
    LatticePlanar {
        file: PathBuf,
        #[command(flatten)]
        out: Outputs,
        /// Use moves along every candidate framing instead of the file's one.
        #[arg(long)]
        no_framing: bool,
    },
    /// Build the lattice of surface transpositions of each circulation class.
    LatticeGenus {
        file: PathBuf,
        #[arg(long, conflicts_with = "all")]
        class: Option<usize>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Outputs,
    },
    /// Run the property suite over the bundled examples and seeded instances.
    Check {
        /// Defaults to CLOCKLAT_SEED or the built-in seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Run a single check by number.
        #[arg(long)]
        only: Option<usize>,
        /// Keep going after a failure.
        #[arg(long)]
        keep_going: bool,
    },
    /// Write the file back in normalized form.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct Outputs {
    /// DOT output: a file for the planar lattice, a directory for classes.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Check distributivity and that covers equal single moves.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpineExport {
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn domain(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                eprintln!("\n{SCHEMA_HELP}");
            }
            return ExitCode::from(code);
        }
    };
    match run(cfg.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { file, json } => validate(&file, json),
        Command::States { file, count_only } => states(&file, count_only),
        Command::Spine { file, reduced, export } => spine(&file, reduced, export),
        Command::LatticePlanar { file, out, no_framing } => lattice_planar(&file, &out, no_framing),
        Command::LatticeGenus {
            file,
            class,
            all: _,
            out,
        } => lattice_genus(&file, class, &out),
        Command::Check { seed, only, keep_going } => check(seed, only, keep_going),
        Command::Export { file, format } => export(&file, format),
    }
}

fn read_file(path: &Path) -> Result<MultiverseFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))?;
    MultiverseFile::from_json(&text).map_err(domain)
}

fn load(path: &Path) -> Result<Multiverse, Failure> {
    Multiverse::new(read_file(path)?).map_err(domain)
}

fn write_out(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn validate(path: &Path, as_json: bool) -> Outcome {
    let (mv, report) = Multiverse::build_unchecked(read_file(path)?).map_err(domain)?;
    let s = mv.stats();
    let euler = mv.euler_check();
    if as_json {
        let doc = json!({
            "stats": s,
            "euler": euler.as_ref().ok(),
            "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "dead_components": if report.is_valid() { mv.detect_dead_components() } else { Vec::new() },
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("V_int={}", s.v_int);
        println!("V_boundary={}", s.v_boundary);
        println!("N={}", s.n);
        println!("F={}", s.f);
        println!("stars={}", s.star_count);
        println!("chi={}", s.chi);
        println!("genus={}", s.genus);
        match &euler {
            Ok(e) => println!(
                "euler: F - V_int = {} {} N + chi + b = {} (b={})",
                e.lhs,
                if e.holds { "=" } else { "!=" },
                e.rhs,
                s.b
            ),
            Err(e) => println!("euler: not applicable ({e})"),
        }
        if report.is_valid() {
            let dead = mv.detect_dead_components();
            if !dead.is_empty() {
                println!("dead components: {dead:?}");
            }
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(domain(format!("{} violation(s)", report.violations.len())))
    }
}

fn markers(mv: &Multiverse, s: &State) -> Value {
    let m: Vec<Value> = s
        .choice
        .iter()
        .enumerate()
        .map(|(i, &c)| json!([mv.interior[i], c % 4, mv.face_id(mv.corners[c].face)]))
        .collect();
    json!({ "label": mv.state_label(s), "markers": m })
}

fn states(path: &Path, count_only: bool) -> Outcome {
    let mv = load(path)?;
    let all = mv.enumerate_states();
    if count_only {
        println!("{}", all.len());
        return Ok(());
    }
    for s in &all {
        let faces: Vec<String> = s
            .choice
            .iter()
            .enumerate()
            .map(|(i, &c)| format!("v{}->f{}", mv.interior[i], mv.face_id(mv.corners[c].face)))
            .collect();
        println!("{} {}", mv.state_label(s), faces.join(" "));
    }
    Ok(())
}

fn spine(path: &Path, reduced: bool, export: Option<SpineExport>) -> Outcome {
    let mv = load(path)?;
    let sp = Spine::new(&mv).map_err(domain)?;
    if export.is_some() {
        print!("{}", sp.export_dot(&mv, reduced));
        return Ok(());
    }
    let tags = sp.graph.classify_edges();
    let count = |t: EdgeTag| tags.iter().filter(|&&x| x == t).count();
    println!("white={}", sp.graph.nw);
    println!("black={}", sp.graph.nb);
    println!("edges={}", sp.graph.edges.len());
    println!("forced={}", count(EdgeTag::Forced));
    println!("forbidden={}", count(EdgeTag::Forbidden));
    println!("free={}", count(EdgeTag::Free));
    println!("matchings={}", sp.graph.enumerate_matchings().len());
    if reduced {
        let r = sp.graph.reduce();
        println!("reduced_components={}", r.components.len());
    }
    Ok(())
}

fn verify(l: &Lattice<State>) -> Outcome {
    if !l.covers_match_moves() {
        return Err(domain("covers differ from single transpositions"));
    }
    match l.distributivity() {
        Ok(clocklat::lattice::Distributivity::Distributive) => Ok(()),
        Ok(d) => Err(domain(format!("not distributive: {d:?}"))),
        Err(e) => Err(domain(e)),
    }
}

fn lattice_error(mv: &Multiverse, e: LatticeError<State>) -> Failure {
    match e {
        LatticeError::CycleDetected { witness } => {
            let w: Vec<String> = witness.iter().map(|s| mv.state_label(s)).collect();
            domain(format!("CycleDetected: {}", w.join(" -> ")))
        }
        e => domain(e),
    }
}

fn lattice_planar(path: &Path, out: &Outputs, no_framing: bool) -> Outcome {
    let mv = load(path)?;
    let l = if no_framing {
        UnframedMoves::new(&mv).map_err(domain)?.lattice()
    } else {
        PlanarClock::new(&mv).map_err(domain)?.lattice()
    }
    .map_err(|e| lattice_error(&mv, e))?;
    println!("states={} covers={}", l.len(), l.covers.len());
    println!("distributive={}", l.is_distributive());
    if let Some(p) = &out.dot {
        write_out(p, &l.export_dot(|s| mv.state_label(s)))?;
    }
    if let Some(p) = &out.json {
        write_out(p, &l.export_json(|s| markers(&mv, s)))?;
    }
    if out.verify {
        verify(&l)?;
        println!("verified");
    }
    Ok(())
}

fn lattice_genus(path: &Path, class: Option<usize>, out: &Outputs) -> Outcome {
    let mv = load(path)?;
    let gc = GenusClock::new(&mv).map_err(domain)?;
    let classes: Vec<_> = gc.circulation_classes().into_keys().collect();
    let chosen: Vec<usize> = match class {
        Some(i) if i < classes.len() => vec![i],
        Some(i) => return Err(domain(format!("class {i} out of range; there are {}", classes.len()))),
        None => (0..classes.len()).collect(),
    };
    if let Some(dir) = &out.dot {
        std::fs::create_dir_all(dir).map_err(|e| domain(format!("{}: {e}", dir.display())))?;
    }
    let mut docs = Vec::new();
    for &i in &chosen {
        let cl = gc.build_circulation_lattice(&classes[i]).map_err(domain)?;
        let l = &cl.states;
        println!(
            "class {i}: circulation={:?} states={} covers={} distributive={}",
            classes[i].values,
            l.len(),
            l.covers.len(),
            l.is_distributive()
        );
        if let Some(dir) = &out.dot {
            write_out(&dir.join(format!("class{i}.dot")), &l.export_dot(|s| mv.state_label(s)))?;
        }
        docs.push(json!({
            "index": i,
            "circulation": classes[i].values,
            "lattice": l.export_json_value(|s| markers(&mv, s)),
        }));
        if out.verify {
            verify(l)?;
            if !cl.pictures_agree(&gc) {
                return Err(domain(format!("class {i}: cover graphs disagree across pictures")));
            }
        }
    }
    if let Some(p) = &out.json {
        let doc = json!({
            "spanning_tree": gc.dual.tree,
            "chords": gc.dual.chords,
            "classes": docs,
        });
        write_out(p, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    }
    if out.verify {
        println!("verified");
    }
    Ok(())
}

fn check(seed: Option<u64>, only: Option<usize>, keep_going: bool) -> Outcome {
    let cfg = SuiteConfig::with_seed(seed.unwrap_or_else(seed_from_env));
    println!("seed={}", cfg.seed);
    let outcomes = match only {
        Some(id) => vec![suite::run_check(id, &cfg).ok_or_else(|| Failure {
            code: 2,
            message: format!("no check numbered {id}"),
        })?],
        None => suite::run_all(&cfg, !keep_going),
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(domain(format!("{failed} check(s) failed")))
    }
}

fn export(path: &Path, format: Format) -> Outcome {
    let mv = load(path)?;
    match format {
        Format::Json => print!("{}", mv.file.to_json()),
        Format::Dot => print!("{}", mv.export_dot()),
    }
    Ok(())
}
