use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use detquartic::catalog::{self, CatalogEntry};
use detquartic::checks;
use detquartic::format::{profile_report, PencilJson};
use detquartic::mesh;
use detquartic::search as driver;
use detquartic::verify::{self, VerifyOptions};
use detquartic::Error;
use detquartic_core::search::{SearchConfig, SearchTarget};
use detquartic_core::singularities::{profile, SolverConfig};
use detquartic_core::{x2, HermitianPencil, Rational};

const EXIT_INPUT: u8 = 1;
const EXIT_MISMATCH: u8 = 2;

#[derive(Parser)]
#[command(name = "detquartic", version, about = "Hermitian determinantal quartic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Pencil JSON file
    file: Option<PathBuf>,
    /// Catalog entry, e.g. "4.3/(2,2,1)"
    #[arg(long)]
    entry: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Singularity profile (η, ρ, σ) of a pencil
    Analyze {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Verify every catalog entry (or one with --entry)
    VerifyCatalog {
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        lines: usize,
        /// Write the tracker seeded from the reproduced entries
        #[arg(long)]
        tracker: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// The real symmetric 8x8 pencil and the square identity
    Realify {
        #[command(flatten)]
        src: Source,
    },
    /// Real-rootedness along seeded lines through the definite point
    Hyperbolicity {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 200)]
        lines: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Essential points and V(f) ∩ V(S3) against the sextic curve families
    CurvesCheck {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sampled checks of the rank-2 locus X2
    X2Check {
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Search for a definite representation with a given (η, ρ, σ)
    Search {
        /// Target as "eta,rho,sigma"
        #[arg(long)]
        target: String,
        /// Candidates per seed
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Repeatable; defaults to 0, 1, 2
        #[arg(long)]
        seed: Vec<u64>,
        /// Stop after this many hits (0 for no limit)
        #[arg(long, default_value_t = 1)]
        max_hits: usize,
        /// Directory for found.ndjson and tracker.json
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Triangle mesh (OBJ) of the real surface in an affine chart
    ExportSurface {
        #[command(flatten)]
        src: Source,
        /// Coordinate set to 1
        #[arg(long, default_value_t = 3)]
        chart: usize,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Half width of the cube in the chart
        #[arg(long, default_value_t = 3.0)]
        half_width: f64,
        /// Output path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Input {
    name: String,
    pencil: HermitianPencil,
    e: Option<Vec<Rational>>,
}

fn load(src: &Source) -> Result<Input, Error> {
    match (&src.file, &src.entry) {
        (Some(path), None) => {
            let j = PencilJson::from_str(&fs::read_to_string(path)?)?;
            Ok(Input { pencil: j.pencil()?, e: j.point()?, name: j.name })
        }
        (None, Some(q)) => {
            let CatalogEntry { name, pencil, e, .. } = lookup(q)?;
            Ok(Input { name, pencil, e })
        }
        _ => Err(Error::Format("give exactly one of a pencil file or --entry".into())),
    }
}

fn lookup(q: &str) -> Result<CatalogEntry, Error> {
    let all = catalog::load_dir(&catalog::default_dir())?;
    catalog::find(&all, q).cloned().ok_or_else(|| Error::Format(format!("no catalog entry matches {q}")))
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn parse_target(s: &str) -> Result<SearchTarget, Error> {
    let parts: Vec<&str> = s.trim_matches(|c| c == '(' || c == ')').split(',').map(str::trim).collect();
    let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse::<usize>()).collect();
    match nums.as_deref() {
        Ok([eta, rho, sigma]) => Ok(SearchTarget::new(*eta, *rho, *sigma)?),
        _ => Err(Error::Format(format!("target must look like 2,2,1, got {s}"))),
    }
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        EXIT_MISMATCH
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Analyze { src, tol, seed, json } => {
            let input = load(&src)?;
            let solver = SolverConfig { seed, dedupe_angle: tol, reality_tolerance: tol, ..SolverConfig::default() };
            let prof = profile(&input.pencil, input.e.as_deref(), &solver)?;
            if json {
                print_json(&profile_report(&prof))?;
            } else {
                let sigma = if input.e.is_some() { prof.sigma.to_string() } else { "-".into() };
                println!("{}: (η, ρ, σ) = ({}, {}, {})", input.name, prof.eta, prof.rho, sigma);
                if prof.degenerate {
                    println!("  degenerate: {}", prof.warnings.iter().find(|w| !w.starts_with("essential point")).map_or("the counts are unreliable", String::as_str));
                    return Ok(EXIT_MISMATCH);
                }
                for s in prof.points.iter().filter(|s| s.is_essential()) {
                    let c = s.location.coords();
                    let coords: Vec<String> = c.iter().map(|z| format!("{:.6}{:+.6}i", tidy(z.re), tidy(z.im))).collect();
                    println!(
                        "  [{}] corank {} hessian rank {}{}{}",
                        coords.join(", "),
                        s.pencil_corank,
                        s.hessian_rank,
                        if s.is_real { " real" } else { "" },
                        if s.on_spectrahedron == Some(true) { " on spectrahedron" } else { "" }
                    );
                }
                for w in &prof.warnings {
                    println!("  warning: {w}");
                }
            }
            Ok(verdict(!prof.degenerate))
        }
        Command::VerifyCatalog { entry, tol, seed, lines, tracker, json } => {
            let entries = match entry {
                Some(q) => vec![lookup(&q)?],
                None => catalog::load_default()?,
            };
            if entries.iter().any(|e| e.rank_only) {
                return Err(Error::Format("rank-only fixtures have no claimed profile".into()));
            }
            let mut opts = VerifyOptions::default().with_tol(tol);
            opts.solver.seed = seed;
            opts.line_seed = seed;
            opts.lines = lines;
            let verdicts = verify::verify_all(&entries, &opts);
            let report = verify::catalog_report(&verdicts);
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            if let Some(path) = tracker {
                let state = driver::tracker_from_verdicts(driver::load_tracker(&path)?, &verdicts);
                driver::save_tracker(&path, &state)?;
            }
            Ok(verdict(report.summary.passed == report.summary.entries))
        }
        Command::Realify { src } => {
            let input = load(&src)?;
            let r = checks::realify_report(&input.name, &input.pencil)?;
            print_json(&r)?;
            Ok(verdict(r.square_identity))
        }
        Command::Hyperbolicity { src, lines, seed, tol, json } => {
            let input = load(&src)?;
            let e = input.e.ok_or_else(|| Error::Format("the pencil has no definite point".into()))?;
            let r = checks::hyperbolicity_report(&input.pencil, &e, lines, seed, tol)?;
            if json {
                print_json(&r)?;
            } else {
                println!(
                    "{}: {}/{} lines all real (fraction {}), {} float disagreements",
                    input.name,
                    r.all_real,
                    r.lines,
                    r.fraction.get(),
                    r.float_disagreements
                );
            }
            Ok(verdict(r.all_real == r.lines))
        }
        Command::CurvesCheck { src, samples, seed, tol, json } => {
            let input = load(&src)?;
            let v = checks::curves_check(&input.pencil, samples, seed, tol, &SolverConfig::with_seed(seed))?;
            let r = checks::curve_report(&v);
            if json {
                print_json(&r)?;
            } else {
                println!(
                    "{}: S3 = minor without row/col {}; {} essential points {}; {}/{} samples, max residual {}",
                    input.name,
                    r.index,
                    r.essential_residuals.len(),
                    if v.essential_ok() { "on both families" } else { "OFF a family" },
                    r.samples,
                    r.requested,
                    r.max_sample_residual.get()
                );
            }
            Ok(verdict(r.passed))
        }
        Command::X2Check { samples, seed, json } => {
            let r = x2::sample_check(samples, samples, samples, seed)?;
            let j = checks::x2_report(&r, seed);
            if json {
                print_json(&j)?;
            } else {
                println!(
                    "base locus: {}/{} Hermitian, {}/{} web quadrics; tangent codims {:?}",
                    j.hermitian_passed, j.hermitian_checked, j.web_passed, j.web_checked, j.tangent_codims
                );
            }
            Ok(verdict(j.passed))
        }
        Command::Search { target, budget, seed, max_hits, out, json } => {
            let target = parse_target(&target)?;
            let seeds = if seed.is_empty() { vec![0, 1, 2] } else { seed };
            let cfg = SearchConfig { budget, max_hits: (max_hits > 0).then_some(max_hits), ..SearchConfig::default() };
            let starts = if target.eta > 4 {
                driver::deform_starts(&catalog::load_default()?, &cfg.solver)
            } else {
                Vec::new()
            };
            let outcome = driver::run_search_parallel(&target, &seeds, &cfg, &starts);
            let report = driver::search_report(&target, &seeds, &cfg, &outcome);
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                driver::append_found(&dir.join("found.ndjson"), &outcome.found)?;
                let path = dir.join("tracker.json");
                let state = outcome.found.iter().fold(driver::load_tracker(&path)?, |s, f| {
                    detquartic_core::search::tracker_update(s, f)
                });
                driver::save_tracker(&path, &state)?;
            }
            if json {
                print_json(&report)?;
            } else {
                let s = &report.stats;
                println!(
                    "target ({},{},{}): {} found in {} candidates",
                    target.eta, target.rho, target.sigma, s.hits, s.candidates
                );
                for f in &report.found {
                    println!("  {} ({}, seed {}, index {})", f.pencil.name, f.strategy, f.seed, f.index);
                }
                println!(
                    "  rejected: {} no definite point, {} other profile, {} degenerate, {} unstable, {} construction, {} solver",
                    s.no_definite_point, s.mismatched, s.degenerate, s.unstable, s.construction_failures, s.profile_errors
                );
                for (t, n) in &s.other_triples {
                    println!("    ({},{},{}) x{}", t[0], t[1], t[2], n);
                }
            }
            Ok(0)
        }
        Command::ExportSurface { src, chart, resolution, half_width, out } => {
            let input = load(&src)?;
            let m = mesh::march(&input.pencil.det()?, chart, resolution, half_width)?;
            let header = format!(
                "{}: real surface in the chart x{chart} = 1, cube half width {half_width}, resolution {resolution}",
                input.name
            );
            let text = m.to_obj(&header);
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

/// Rounds values that would print as `-0.000000`.
fn tidy(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

fn write_file(p: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(p, text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match verify::thread_pool().install(|| run(cli.command)) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Core(detquartic_core::Error::Degenerate(msg))) => {
            eprintln!("degenerate: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
