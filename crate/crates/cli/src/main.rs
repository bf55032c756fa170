//! `cpb` — command-line driver for the convex-geometry kernel.
//!
//! JSON in, JSON or CSV out. Every command is deterministic for a fixed
//! seed and flag set. Exit codes: `0` success / all checks pass, `2` a
//! check ran and failed, `3` invalid input or usage, `4` the Minkowski
//! solver did not converge.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cpb_core::checks::{
    check_c_translation, check_contravariance, check_symmetry, check_valuation,
};
use cpb_core::complexes::{ComplexSpace, PlanarBody, PlanarBodyJson};
use cpb_core::dim2::check_dim2;
use cpb_core::inequalities::{
    check_af_type, check_bm_type, check_classical, check_minkowski_type, check_w_proportionality,
};
use cpb_core::measure::{DiscreteMeasure, MeasureJson};
use cpb_core::mixed::mixed_volume_slots;
use cpb_core::polytope::PolytopeJson;
use cpb_core::projection::{mixed_projection_body, projection_body, ProjectionBodyResult};
use cpb_core::report::CheckReport;
use cpb_core::sample;
use cpb_core::solver::solve_minkowski;
use cpb_core::{Error, Polytope};

const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NO_CONVERGENCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cpb",
    version,
    about = "Complex projection bodies of polytopes: construction, mixed volumes, \
             inequality suites, and the discrete Minkowski solver"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convex hull of a point cloud; emits the canonical polytope JSON.
    Hull {
        /// Polytope JSON file ('-' or absent reads stdin).
        input: Option<PathBuf>,
    },
    /// Euclidean volume of a polytope.
    Volume {
        input: Option<PathBuf>,
    },
    /// Mixed volume of bodies with multiplicities summing to the dimension.
    MixedVolume {
        /// JSON: {"slots": [{"dim":d,"vertices":[…],"multiplicity":k}, …]}.
        input: Option<PathBuf>,
    },
    /// Complex projection body of one polytope in R^{2m}.
    ProjectionBody {
        input: Option<PathBuf>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Mixed complex projection body of 2m−1 slotted bodies.
    MixedProjectionBody {
        /// JSON: {"slots": [{"dim":d,"vertices":[…],"multiplicity":k}, …]}.
        input: Option<PathBuf>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Reconstruct a polytope from a centered surface-area measure.
    SolveMinkowski {
        /// Measure JSON: {"dim":d,"atoms":[{"u":[…],"a":w},…],"centered":bool}.
        input: Option<PathBuf>,
    },
    /// Run one verification suite and report it.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        params: CheckArgs,
    },
    /// Run verification suites over a seed range, one report row each.
    Sweep {
        /// Comma-separated suite names, or 'all'.
        #[arg(long, default_value = "all")]
        checks: String,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed_start: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1)]
        seed_count: u64,
        #[command(flatten)]
        params: CheckArgs,
    },
    /// Emit a seeded input file (polytope or measure JSON) on stdout.
    Generate {
        #[arg(long, value_enum)]
        kind: GenerateKind,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point count for 'random', atom count for 'measure'.
        #[arg(long)]
        points: Option<usize>,
    },
}

#[derive(Args)]
struct SpaceArgs {
    /// Complex dimension; the ambient real dimension is 2m.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Planar gauge body: builtin:square|segment|disk64|point, or a JSON file
    /// {"vertices": [[a,b], …]}.
    #[arg(long = "C", default_value = "builtin:square")]
    c: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Complex dimension; the ambient real dimension is 2m.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Planar gauge body: builtin:square|segment|disk64|point, or a JSON file.
    #[arg(long = "C", default_value = "builtin:square")]
    c: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances per suite (suite-specific default when omitted).
    #[arg(long)]
    count: Option<usize>,
    /// Support directions per instance where a suite samples directions.
    #[arg(long, default_value_t = 10)]
    dirs: usize,
    /// Residual tolerance (suite-specific default when omitted).
    #[arg(long)]
    tol: Option<f64>,
    /// Ball-slot index i for the af/minkowski-type/classical suites.
    #[arg(long, default_value_t = 0)]
    i: usize,
    /// Extra pseudo-random vertex parameter of the polytopal unit ball.
    #[arg(long = "ball-N", default_value_t = 32)]
    ball_n: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum CheckKind {
    Valuation,
    Contravariance,
    Symmetry,
    Bm,
    Af,
    MinkowskiType,
    Classical,
    Proportionality,
    CTranslation,
    Dim2,
}

const ALL_CHECKS: [CheckKind; 10] = [
    CheckKind::Valuation,
    CheckKind::Contravariance,
    CheckKind::Symmetry,
    CheckKind::Bm,
    CheckKind::Af,
    CheckKind::MinkowskiType,
    CheckKind::Classical,
    CheckKind::Proportionality,
    CheckKind::CTranslation,
    CheckKind::Dim2,
];

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    Cube,
    Simplex,
    Cross,
    Random,
    Measure,
}

/// One mixed-volume slot: a polytope with a multiplicity.
#[derive(Serialize, Deserialize)]
struct SlotJson {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    #[serde(default = "one")]
    multiplicity: usize,
}

fn one() -> usize {
    1
}

#[derive(Serialize, Deserialize)]
struct SlotsInput {
    slots: Vec<SlotJson>,
}

#[derive(Serialize)]
struct BodyWithTrace {
    #[serde(flatten)]
    body: PolytopeJson,
    trace: Vec<TraceJson>,
}

#[derive(Serialize)]
struct TraceJson {
    u: Vec<f64>,
    a: f64,
}

#[derive(Serialize)]
struct SolveJson {
    #[serde(flatten)]
    body: PolytopeJson,
    residual: f64,
    iterations: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let --help/--version print normally; usage errors exit 3.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_INPUT);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverDidNotConverge { .. } => ExitCode::from(EXIT_NO_CONVERGENCE),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Hull { input } => {
            let poly = read_polytope(&input)?;
            emit_json(&poly.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Volume { input } => {
            let poly = read_polytope(&input)?;
            emit_json(&serde_json::json!({
                "dim": poly.dim(),
                "volume": poly.volume(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::MixedVolume { input } => {
            let (dim, bodies) = read_slots(&input)?;
            let slots: Vec<(&Polytope, usize)> =
                bodies.iter().map(|(p, k)| (p, *k)).collect();
            let v = mixed_volume_slots(dim, &slots)?;
            emit_json(&serde_json::json!({ "dim": dim, "mixed_volume": v }));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ProjectionBody { input, space } => {
            let poly = read_polytope(&input)?;
            let (c, _) = parse_gauge(&space.c)?;
            let res = projection_body(ComplexSpace::new(space.m), &poly, &c)?;
            emit_json(&body_with_trace(res));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::MixedProjectionBody { input, space } => {
            let (_, bodies) = read_slots(&input)?;
            let mut expanded: Vec<&Polytope> = Vec::new();
            for (p, k) in &bodies {
                for _ in 0..*k {
                    expanded.push(p);
                }
            }
            let (c, _) = parse_gauge(&space.c)?;
            let res = mixed_projection_body(ComplexSpace::new(space.m), &expanded, &c)?;
            emit_json(&body_with_trace(res));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::SolveMinkowski { input } => {
            let text = read_text(&input)?;
            let parsed: MeasureJson = parse_json(&text)?;
            let rho = DiscreteMeasure::from_json(&parsed)?;
            let out = solve_minkowski(&rho)?;
            emit_json(&SolveJson {
                body: out.body.to_json(),
                residual: out.residual,
                iterations: out.iterations,
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { which, params } => {
            let rep = run_check(which, &params)?;
            match params.out {
                OutFormat::Json => print_line(&rep.to_json()),
                OutFormat::Csv => {
                    print_line(CheckReport::csv_header());
                    print_line(&rep.csv_row());
                }
            }
            Ok(if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
        Cmd::Sweep {
            checks,
            seed_start,
            seed_count,
            params,
        } => {
            let kinds = parse_check_list(&checks)?;
            let jobs: Vec<(CheckKind, u64)> = kinds
                .iter()
                .flat_map(|&k| (0..seed_count).map(move |o| (k, seed_start + o)))
                .collect();
            // Independent jobs fan out; collection preserves job order, so
            // output stays byte-stable for a fixed flag set.
            let results: Vec<Result<CheckReport, Error>> = std::thread::scope(|scope| {
                let handles: Vec<_> = jobs
                    .iter()
                    .map(|&(kind, seed)| {
                        let p = &params;
                        scope.spawn(move || run_check_seeded(kind, p, seed))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            let mut reports = Vec::with_capacity(results.len());
            for r in results {
                reports.push(r?);
            }
            let all_pass = reports.iter().all(|r| r.pass);
            match params.out {
                OutFormat::Json => {
                    print_line(&serde_json::to_string_pretty(&reports).unwrap());
                }
                OutFormat::Csv => {
                    print_line(CheckReport::csv_header());
                    for r in &reports {
                        print_line(&r.csv_row());
                    }
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
        Cmd::Generate {
            kind,
            m,
            seed,
            points,
        } => {
            let dim = 2 * m;
            let mut r = sample::rng(seed);
            match kind {
                GenerateKind::Cube => emit_json(&sample::unit_cube(dim).to_json()),
                GenerateKind::Simplex => emit_json(&sample::standard_simplex(dim).to_json()),
                GenerateKind::Cross => emit_json(&sample::cross_polytope(dim).to_json()),
                GenerateKind::Random => {
                    let n = points.unwrap_or(dim + 6);
                    emit_json(&sample::random_polytope(dim, n, &mut r)?.to_json());
                }
                GenerateKind::Measure => {
                    let n = points.unwrap_or(10);
                    let body = sample::random_polytope(dim, n.max(dim + 2), &mut r)?;
                    emit_json(&body.surface_area_measure().to_json());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_check(kind: CheckKind, p: &CheckArgs) -> Result<CheckReport, Error> {
    run_check_seeded(kind, p, p.seed)
}

/// Map a suite name to its driver, filling in the per-suite default count
/// and tolerance when the flags were omitted.
fn run_check_seeded(kind: CheckKind, p: &CheckArgs, seed: u64) -> Result<CheckReport, Error> {
    let (c, c_name) = parse_gauge(&p.c)?;
    let count = |d: usize| p.count.unwrap_or(d);
    let tol = |d: f64| p.tol.unwrap_or(d);
    match kind {
        CheckKind::Valuation => {
            check_valuation(p.m, &c, &c_name, seed, count(50), tol(1e-8))
        }
        CheckKind::Contravariance => {
            check_contravariance(p.m, &c, &c_name, seed, count(50), p.dirs, tol(1e-7))
        }
        CheckKind::Symmetry => check_symmetry(p.m, &c, &c_name, seed, count(20), tol(1e-6)),
        CheckKind::Bm => check_bm_type(p.m, seed, count(100), tol(1e-8), 1e-6),
        CheckKind::Af => {
            check_af_type(p.m, p.i, 2, &c, &c_name, seed, count(100), tol(1e-8))
        }
        CheckKind::MinkowskiType => {
            check_minkowski_type(p.m, p.i, &c, &c_name, seed, count(100), tol(1e-8), 1e-6)
        }
        CheckKind::Classical => check_classical(p.m, p.i, seed, count(20), tol(1e-8), 1e-6),
        CheckKind::Proportionality => {
            check_w_proportionality(p.m, &c, &c_name, seed, tol(0.02), p.ball_n)
        }
        CheckKind::CTranslation => {
            check_c_translation(p.m, &c, &c_name, seed, count(20), tol(1e-10))
        }
        CheckKind::Dim2 => check_dim2(seed, count(10), tol(1e-7)),
    }
}

fn parse_check_list(text: &str) -> Result<Vec<CheckKind>, Error> {
    if text.trim() == "all" {
        return Ok(ALL_CHECKS.to_vec());
    }
    text.split(',')
        .map(|name| {
            CheckKind::from_str(name.trim(), true)
                .map_err(|_| Error::InvalidInput(format!("unknown check '{}'", name.trim())))
        })
        .collect()
}

/// `builtin:<name>` or a path to a planar-body JSON file.
fn parse_gauge(spec: &str) -> Result<(PlanarBody, String), Error> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let c = match name {
            "square" => PlanarBody::square(),
            "segment" => PlanarBody::segment(),
            "disk64" => PlanarBody::disk(64),
            "point" => PlanarBody::point(),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown builtin gauge '{other}' (square|segment|disk64|point)"
                )))
            }
        };
        return Ok((c, name.to_string()));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidInput(format!("cannot read gauge file '{spec}': {e}")))?;
    let parsed: PlanarBodyJson = parse_json(&text)?;
    let stem = PathBuf::from(spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok((PlanarBody::from_json(&parsed)?, stem))
}

fn body_with_trace(res: ProjectionBodyResult) -> BodyWithTrace {
    BodyWithTrace {
        body: res.body.to_json(),
        trace: res
            .trace
            .iter()
            .map(|t| TraceJson {
                u: t.u.iter().copied().collect(),
                a: t.a,
            })
            .collect(),
    }
}

fn read_text(input: &Option<PathBuf>) -> Result<String, Error> {
    match input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read '{}': {e}", path.display()))),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("invalid JSON: {e}")))
}

fn read_polytope(input: &Option<PathBuf>) -> Result<Polytope, Error> {
    let text = read_text(input)?;
    let parsed: PolytopeJson = parse_json(&text)?;
    Polytope::from_json(&parsed, false)
}

fn read_slots(input: &Option<PathBuf>) -> Result<(usize, Vec<(Polytope, usize)>), Error> {
    let text = read_text(input)?;
    let parsed: SlotsInput = parse_json(&text)?;
    if parsed.slots.is_empty() {
        return Err(Error::EmptyInput("mixed-volume slot list"));
    }
    let dim = parsed.slots[0].dim;
    let mut out = Vec::with_capacity(parsed.slots.len());
    for slot in &parsed.slots {
        if slot.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: slot.dim,
            });
        }
        let poly = Polytope::from_json(
            &PolytopeJson {
                dim: slot.dim,
                vertices: slot.vertices.clone(),
            },
            false,
        )?;
        out.push((poly, slot.multiplicity));
    }
    Ok((dim, out))
}

fn emit_json<T: Serialize>(value: &T) {
    print_line(&serde_json::to_string_pretty(value).unwrap());
}

/// Write one line to stdout; a closed pipe downstream ends the process
/// quietly instead of panicking.
fn print_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("stdout write failed: {e}");
    }
}
