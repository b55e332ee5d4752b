//! `chie`: dissection-puzzle engine CLI.
//!
//! Subcommands: `targets` (convex-target catalog), `solve` (tile a target
//! with a piece set), `coverage` (verdicts over the whole catalog),
//! `ftable` (the counting function f), and `search` (piece-set space
//! exploration). Reports go to stdout and are byte-identical across
//! identical invocations; progress and timing notes go to stderr.
//!
//! Exit codes: 0 success/SAT, 1 UNSAT or threshold not met, 2 usage error,
//! 3 internal invariant violation.

mod svg;

use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::json;

use chie::pieces::{builtin, Builtin, PieceSet};
use chie::search::{search_piece_sets, Checkpoint, SearchBudget};
use chie::solver::{
    count_solutions, coverage, enumerate_solutions, solve_with_stats, Modulo, Solution,
};
use chie::targets::{enumerate_targets, target_id};
use chie::{Half, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "chie", version, about = "Dissection puzzles from right isosceles triangles")]
struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for generated files (SVG sheets, solution drawings).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Enumerate the convex polygons formable by n unit triangles.
    Targets {
        #[arg(long)]
        n: u32,
        /// Also write a catalog sheet `targets-n<k>.svg`.
        #[arg(long)]
        svg: bool,
    },
    /// Decide, count or enumerate tilings of a target by a piece set.
    Solve {
        /// Built-in set name (TANGRAM, SEI_SHONAGON, NINETEEN, ELEVEN) or a
        /// piece file path.
        #[arg(long)]
        pieces: String,
        /// Catalog id like n16-t07, or a region file of `T <x> <y> <half>`
        /// lines.
        #[arg(long)]
        target: String,
        /// Count solutions instead of reporting the first witness.
        #[arg(long, conflicts_with = "all")]
        count: bool,
        /// Enumerate and print every solution.
        #[arg(long)]
        all: bool,
        /// Count modulo the target's symmetry group.
        #[arg(long, requires = "count")]
        modulo_symmetry: bool,
        /// Write an SVG drawing per reported solution.
        #[arg(long)]
        svg: bool,
    },
    /// Coverage of a piece set over the n-triangle convex-target catalog.
    Coverage {
        #[arg(long)]
        pieces: String,
        #[arg(long, default_value_t = 16)]
        n: u32,
    },
    /// Table of f(1..=max), with the doubling property checked.
    Ftable {
        #[arg(long)]
        max: u32,
        /// Also write a chart `ftable.svg`.
        #[arg(long)]
        plot: bool,
    },
    /// Search piece multisets for high catalog coverage.
    Search {
        /// Number of pieces in a candidate set.
        #[arg(long)]
        pieces: usize,
        /// Total triangle budget.
        #[arg(long)]
        triangles: usize,
        /// Report candidates covering at least this many targets.
        #[arg(long)]
        min_coverage: usize,
        #[arg(long, default_value_t = 100_000)]
        max_candidates: u64,
        /// Node limit per solver query.
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<u64>,
        /// Checkpoint file: loaded when present, rewritten on exit.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() {
    // Downstream consumers like `head` close the pipe early; die quietly
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.code());
        }
    }
}

fn worker_threads() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("CHIE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
    {
        Some(cap) => cap.min(available),
        None => available,
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Targets { n, svg } => cmd_targets(n, svg, cli.format, &cli.out),
        Command::Solve {
            pieces,
            target,
            count,
            all,
            modulo_symmetry,
            svg,
        } => cmd_solve(
            &pieces,
            &target,
            count,
            all,
            modulo_symmetry,
            svg,
            cli.format,
            &cli.out,
        ),
        Command::Coverage { pieces, n } => cmd_coverage(&pieces, n, cli.format),
        Command::Ftable { max, plot } => cmd_ftable(max, plot, cli.format, &cli.out),
        Command::Search {
            pieces,
            triangles,
            min_coverage,
            max_candidates,
            max_nodes,
            time_limit,
            resume,
        } => cmd_search(
            pieces,
            triangles,
            min_coverage,
            max_candidates,
            max_nodes,
            time_limit,
            resume,
            cli.format,
        ),
    }
}

fn load_pieces(arg: &str) -> Result<PieceSet, Failure> {
    if let Some(which) = Builtin::parse(arg) {
        return builtin(which).map_err(|e| usage(format!("bundled piece set: {e}")));
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| usage(format!("cannot read piece file {arg}: {e}")))?;
    PieceSet::parse(&text).map_err(|e| usage(format!("{arg}: {e}")))
}

fn parse_region_file(text: &str, name: &str) -> Result<Region, Failure> {
    let mut triangles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 4 || words[0] != "T" {
            return Err(usage(format!(
                "{name}:{}: expected `T <x> <y> <half>`",
                i + 1
            )));
        }
        let x: i32 = words[1]
            .parse()
            .map_err(|_| usage(format!("{name}:{}: bad x", i + 1)))?;
        let y: i32 = words[2]
            .parse()
            .map_err(|_| usage(format!("{name}:{}: bad y", i + 1)))?;
        let half = Half::parse(words[3])
            .ok_or_else(|| usage(format!("{name}:{}: bad half", i + 1)))?;
        triangles.push((x, y, half));
    }
    Region::from_triangles(triangles).map_err(|e| usage(format!("{name}: {e}")))
}

/// Resolves `n16-t07` style ids against the catalog, or reads a region file.
fn load_target(arg: &str) -> Result<(String, Region), Failure> {
    if let Some(rest) = arg.strip_prefix('n') {
        if let Some((n_str, t_str)) = rest.split_once("-t") {
            if let (Ok(n), Ok(t)) = (n_str.parse::<u32>(), t_str.parse::<usize>()) {
                let targets = enumerate_targets(n);
                if t >= targets.len() {
                    return Err(usage(format!(
                        "target {arg} out of range: the n={n} catalog has {} targets",
                        targets.len()
                    )));
                }
                return Ok((target_id(n, t), targets[t].region.clone()));
            }
        }
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| usage(format!("cannot read target {arg}: {e}")))?;
    let region = parse_region_file(&text, arg)?;
    let stem = Path::new(arg)
        .file_stem()
        .map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((stem, region))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn cmd_targets(n: u32, svg: bool, format: Format, out: &Path) -> Result<i32, Failure> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let targets = enumerate_targets(n);
    match format {
        Format::Text => {
            println!("f({}) = {}", n, targets.len());
            for (i, t) in targets.iter().enumerate() {
                let verts: Vec<String> = t
                    .vertices
                    .iter()
                    .map(|&(x, y)| format!("({},{})", x, y))
                    .collect();
                let spec: Vec<String> =
                    t.spec.lengths().iter().map(|l| l.to_string()).collect();
                println!(
                    "{} spec=({}) triangles={} symmetries={} vertices={}",
                    target_id(n, i),
                    spec.join(","),
                    t.triangles,
                    t.symmetries.len(),
                    verts.join(" ")
                );
            }
        }
        Format::Json => {
            let items: Vec<_> = targets
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    json!({
                        "id": target_id(n, i),
                        "spec": t.spec.lengths().to_vec(),
                        "triangles": t.triangles,
                        "symmetries": t.symmetries.len(),
                        "vertices": t.vertices.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({"command": "targets", "n": n, "f": targets.len(), "targets": items});
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    if svg {
        let sheet = svg::render_target_sheet(n, &targets);
        write_file(&out.join(format!("targets-n{}.svg", n)), &sheet)?;
    }
    Ok(0)
}

fn solution_json(pieces: &PieceSet, solution: &Solution) -> serde_json::Value {
    let placements: Vec<_> = solution
        .placements()
        .iter()
        .map(|p| {
            let tris: Vec<_> = p
                .cells
                .triangles()
                .into_iter()
                .map(|(x, y, h)| json!([x, y, h.to_string()]))
                .collect();
            json!({"piece": piece_name(pieces, p.piece_index), "triangles": tris})
        })
        .collect();
    json!(placements)
}

fn piece_name(pieces: &PieceSet, expanded_index: usize) -> String {
    let mut rest = expanded_index;
    for (i, (shape, mult)) in pieces.pieces().iter().enumerate() {
        if rest < *mult as usize {
            return shape
                .name
                .clone()
                .unwrap_or_else(|| format!("piece{}", i));
        }
        rest -= *mult as usize;
    }
    format!("piece{}", expanded_index)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    pieces_arg: &str,
    target_arg: &str,
    count: bool,
    all: bool,
    modulo_symmetry: bool,
    svg_out: bool,
    format: Format,
    out: &Path,
) -> Result<i32, Failure> {
    let pieces = load_pieces(pieces_arg)?;
    let (target_name, region) = load_target(target_arg)?;
    let internal = |e: chie::solver::SolveError| Failure::Usage(e.to_string());

    if count {
        let modulo = if modulo_symmetry {
            Modulo::RegionSymmetry
        } else {
            Modulo::None
        };
        let total = count_solutions(&pieces, &region, modulo).map_err(internal)?;
        match format {
            Format::Text => println!("solutions {}", total),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "command": "solve",
                    "pieces": pieces.name,
                    "target": target_name,
                    "modulo_symmetry": modulo_symmetry,
                    "count": total,
                }))
                .unwrap()
            ),
        }
        return Ok(i32::from(total == 0));
    }

    if all {
        let mut solutions: Vec<Solution> = Vec::new();
        enumerate_solutions(&pieces, &region, |s| {
            solutions.push(s.clone());
            ControlFlow::Continue(())
        })
        .map_err(internal)?;
        match format {
            Format::Text => {
                for (i, s) in solutions.iter().enumerate() {
                    println!("solution {}", i);
                    print!("{}", s.serialize(&pieces));
                }
                println!("solutions {}", solutions.len());
            }
            Format::Json => {
                let docs: Vec<_> = solutions.iter().map(|s| solution_json(&pieces, s)).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "command": "solve",
                        "pieces": pieces.name,
                        "target": target_name,
                        "count": solutions.len(),
                        "solutions": docs,
                    }))
                    .unwrap()
                );
            }
        }
        if svg_out {
            for (i, s) in solutions.iter().enumerate() {
                let drawing = svg::render_solution(&region, s);
                write_file(
                    &out.join(format!("solve-{}-{:04}.svg", target_name, i)),
                    &drawing,
                )?;
            }
        }
        return Ok(i32::from(solutions.is_empty()));
    }

    let outcome = solve_with_stats(&pieces, &region).map_err(internal)?;
    eprintln!("search nodes: {}", outcome.nodes);
    match format {
        Format::Text => match &outcome.witness {
            Some(w) => {
                println!("SAT");
                print!("{}", w.serialize(&pieces));
            }
            None => println!("UNSAT"),
        },
        Format::Json => {
            let doc = json!({
                "command": "solve",
                "pieces": pieces.name,
                "target": target_name,
                "sat": outcome.formable,
                "solution": outcome.witness.as_ref().map(|w| solution_json(&pieces, w)),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    if svg_out {
        if let Some(w) = &outcome.witness {
            let drawing = svg::render_solution(&region, w);
            write_file(&out.join(format!("solve-{}.svg", target_name)), &drawing)?;
        }
    }
    Ok(i32::from(!outcome.formable))
}

fn cmd_coverage(pieces_arg: &str, n: u32, format: Format) -> Result<i32, Failure> {
    let pieces = load_pieces(pieces_arg)?;
    let report = coverage(&pieces, n, worker_threads())
        .map_err(|e| usage(e.to_string()))?;
    let total_micros: u128 = report.results.iter().map(|r| r.elapsed_micros).sum();
    eprintln!(
        "coverage solved {} targets in {:.1} ms",
        report.results.len(),
        total_micros as f64 / 1000.0
    );
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => {
            let results: Vec<_> = report
                .results
                .iter()
                .map(|r| {
                    json!({
                        "target": r.id,
                        "formable": r.formable,
                        "nodes": r.nodes,
                        "witness": r.witness.as_ref().map(|w| solution_json(&pieces, w)),
                    })
                })
                .collect();
            let doc = json!({
                "command": "coverage",
                "pieces": report.pieceset,
                "n": report.n,
                "formable": report.formable_count(),
                "targets": results.len(),
                "results": results,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(0)
}

fn cmd_ftable(max: u32, plot: bool, format: Format, out: &Path) -> Result<i32, Failure> {
    if max < 1 {
        return Err(usage("--max must be at least 1"));
    }
    let rows: Vec<(u32, usize)> = (1..=max).map(|n| (n, enumerate_targets(n).len())).collect();
    // The doubling property is a structural fact; a violation means the
    // enumerator is broken.
    for &(x, fx) in &rows {
        if let Some(&(_, f2x)) = rows.get((2 * x) as usize - 1) {
            if fx >= f2x {
                return Err(Failure::Internal(format!(
                    "doubling property violated: f({x}) = {fx} but f({}) = {f2x}",
                    2 * x
                )));
            }
        }
    }
    match format {
        Format::Text => {
            for &(n, fv) in &rows {
                println!("{} {}", n, fv);
            }
        }
        Format::Json => {
            let doc = json!({
                "command": "ftable",
                "max": max,
                "rows": rows.iter().map(|&(n, fv)| json!([n, fv])).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    if plot {
        write_file(&out.join("ftable.svg"), &svg::render_ftable_chart(&rows))?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    pieces: usize,
    triangles: usize,
    min_coverage: usize,
    max_candidates: u64,
    max_nodes: u64,
    time_limit: Option<u64>,
    resume: Option<PathBuf>,
    format: Format,
) -> Result<i32, Failure> {
    let budget = SearchBudget {
        max_candidates,
        max_solver_nodes: max_nodes,
        time_limit: time_limit.map(std::time::Duration::from_secs),
        log_progress: true,
    };
    let checkpoint = match &resume {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Some(Checkpoint::parse(&text).map_err(|e| usage(e.to_string()))?)
        }
        _ => None,
    };
    let result = search_piece_sets(
        pieces,
        triangles,
        min_coverage,
        &budget,
        checkpoint,
        worker_threads(),
    )
    .map_err(|e| usage(e.to_string()))?;

    if let Some(path) = &resume {
        write_file(path, &result.checkpoint.serialize())?;
    }

    match format {
        Format::Text => {
            println!(
                "examined {} of {} candidates; exhausted {}",
                result.candidates_examined, result.total_candidates, result.exhausted
            );
            println!("found {}", result.found.len());
            for fs in &result.found {
                println!(
                    "candidate {} coverage {}",
                    fs.candidate_index, fs.coverage
                );
                print!("{}", fs.pieces.serialize());
            }
        }
        Format::Json => {
            let found: Vec<_> = result
                .found
                .iter()
                .map(|fs| {
                    json!({
                        "candidate": fs.candidate_index,
                        "coverage": fs.coverage,
                        "verdicts": fs.verdicts,
                        "pieces": fs.pieces.serialize(),
                    })
                })
                .collect();
            let doc = json!({
                "command": "search",
                "pieces": pieces,
                "triangles": triangles,
                "min_coverage": min_coverage,
                "examined": result.candidates_examined,
                "total": result.total_candidates,
                "exhausted": result.exhausted,
                "found": found,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(i32::from(result.found.is_empty()))
}
