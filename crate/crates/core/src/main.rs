//! Command-line front end: generators, triangulation with file I/O, claim
//! verifications, and declarative scaling experiments.
//!
//! Exit codes: 0 pass, 1 claim failure, 2 usage/config error, 3 I/O error,
//! 4 duplicate input points, 5 degenerate (lower-dimensional) cloud.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dt3::delaunay::{triangulate, DelaunayComplex, ValidationOptions};
use dt3::experiments::{self, ExperimentConfig};
use dt3::generators::{self, Spacing, SEAM_DEFAULT_EPS};
use dt3::io::{self, IoError, StatsFile, STATS_SCHEMA};
use dt3::{oracle_edges, PointCloud};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DUPLICATE: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;

#[derive(Parser)]
#[command(name = "dt3", version, about = "3D Delaunay triangulation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point-set family to an xyz file (plus provenance sidecar).
    Generate {
        #[command(subcommand)]
        family: GenerateCmd,
    },
    /// Triangulate an xyz file; writes tetrahedra and complexity stats.
    Triangulate(TriangulateArgs),
    /// Run a claim verification; JSON report on stdout or --out.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Run a declarative scaling experiment from a JSON config.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Square-root-spread cylinder sample (t/n, cos t/sqrt n, sin t/sqrt n).
    Helix {
        #[arg(long)]
        n: usize,
        /// Add spiral-sampled hemispherical caps at the cylinder ends.
        #[arg(long)]
        caps: bool,
        #[command(flatten)]
        common: GenCommon,
    },
    /// General-spread helix (t/n, cos t/delta, sin t/delta).
    HelixSpread {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        spread: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Points on a single helix turn, t strictly inside (-pi, pi).
    SingleTurn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "even")]
        spacing: String,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Square lattice of helices.
    Mattress {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        spread: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Two skew seam rows of m points each.
    Seams {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = SEAM_DEFAULT_EPS)]
        eps: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Spiral-sampled unit spheres along two perpendicular rows.
    BallRows {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 128)]
        per_sphere: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Area-uniform random sample over the ball-row spheres.
    RandomBallRows {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct GenCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output xyz path (provenance sidecar written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TriangulateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out_tets: PathBuf,
    /// Hull mesh in OFF format.
    #[arg(long)]
    off: Option<PathBuf>,
    /// Stats JSON path (default: alongside the tets file).
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Run the full validation report and fail on any violation.
    #[arg(long)]
    validate: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Insphere pitch identity on seeded random draws.
    Pitch {
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, default_value_t = 20260809)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-turn helix samples have complete Delaunay graphs.
    Neighborly {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "even")]
        spacing: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bitangent sphere excludes the rest of the helix.
    Bitangent {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All m^2 cross-seam pairs are Delaunay edges.
    Seams {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = SEAM_DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incremental engine matches the brute-force oracle on random clouds.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Generate { family } => cmd_generate(family),
        Command::Triangulate(args) => cmd_triangulate(args),
        Command::Verify { which } => cmd_verify(which),
        Command::Experiment(args) => cmd_experiment(args),
    };
    ExitCode::from(code)
}

fn parse_spacing(s: &str, seed: u64) -> Result<Spacing, String> {
    match s {
        "even" => Ok(Spacing::Even),
        "random" => Ok(Spacing::Random { seed }),
        other => Err(format!("spacing must be 'even' or 'random', got {other:?}")),
    }
}

fn cmd_generate(family: GenerateCmd) -> u8 {
    let (result, default_name, common) = match family {
        GenerateCmd::Helix { n, caps, common } => (
            generators::gen_helix_sqrt_opts(n, caps),
            format!("helix_n{n}.xyz"),
            common,
        ),
        GenerateCmd::HelixSpread { n, spread, common } => (
            generators::gen_helix_spread(n, spread),
            format!("helix_spread_n{n}.xyz"),
            common,
        ),
        GenerateCmd::SingleTurn { n, spacing, common } => {
            let sp = match parse_spacing(&spacing, common.seed) {
                Ok(sp) => sp,
                Err(msg) => return usage_error(&msg),
            };
            (
                generators::gen_helix_single_turn(n, sp),
                format!("single_turn_n{n}.xyz"),
                common,
            )
        }
        GenerateCmd::Mattress { n, spread, common } => (
            generators::gen_mattress(n, spread),
            format!("mattress_n{n}.xyz"),
            common,
        ),
        GenerateCmd::Seams { m, eps, common } => (
            generators::gen_seams(m, eps),
            format!("seams_m{m}.xyz"),
            common,
        ),
        GenerateCmd::BallRows {
            k,
            per_sphere,
            common,
        } => (
            generators::gen_ball_rows(k, per_sphere, common.seed),
            format!("ball_rows_k{k}.xyz"),
            common,
        ),
        GenerateCmd::RandomBallRows { k, n, common } => (
            generators::gen_random_ball_rows(k, n, common.seed),
            format!("random_ball_rows_k{k}.xyz"),
            common,
        ),
    };
    let cloud = match result {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let out = common.out.unwrap_or_else(|| PathBuf::from(default_name));
    match io::write_xyz(&out, &cloud) {
        Ok(()) => {
            eprintln!("wrote {} points to {}", cloud.len(), out.display());
            EXIT_PASS
        }
        Err(e) => io_error(&e),
    }
}

fn cmd_triangulate(args: TriangulateArgs) -> u8 {
    let cloud = match io::read_xyz(&args.input) {
        Ok(c) => c,
        Err(IoError::Cloud { path, source }) => {
            eprintln!("error: {path:?}: {source}");
            return EXIT_DUPLICATE;
        }
        Err(e) => return io_error(&e),
    };
    let tri = match triangulate(&cloud, args.seed) {
        Ok(DelaunayComplex::Full(t)) => t,
        Ok(DelaunayComplex::Lower(l)) => {
            eprintln!(
                "error: cloud is lower-dimensional (affine rank {}); no tetrahedra to write",
                l.rank
            );
            return EXIT_DEGENERATE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DEGENERATE;
        }
    };
    if let Err(e) = io::write_tets(&args.out_tets, &tri) {
        return io_error(&e);
    }
    let stats = tri.stats();
    let stats_path = args
        .stats
        .unwrap_or_else(|| args.out_tets.with_extension("stats.json"));
    if let Err(e) = io::write_json(
        &stats_path,
        &StatsFile {
            schema: STATS_SCHEMA,
            seed: args.seed,
            provenance: tri.cloud().provenance(),
            stats: &stats,
        },
    ) {
        return io_error(&e);
    }
    if let Some(off) = &args.off {
        if let Err(e) = io::write_off(off, &tri) {
            return io_error(&e);
        }
    }
    eprintln!(
        "triangulated {} points: {} edges, {} tets",
        stats.n_vertices, stats.n_edges, stats.n_tets
    );
    if args.validate {
        let report = tri.validate(&ValidationOptions::default());
        if !report.ok {
            eprintln!("validation failed: {:?}", report.violation);
            return EXIT_FAIL;
        }
        eprintln!(
            "validation ok ({} empty-sphere pairs checked, full_scan={})",
            report.pairs_checked, report.full_scan
        );
    }
    EXIT_PASS
}

fn emit_report<T: serde::Serialize>(out: Option<&Path>, report: &T) -> Result<(), IoError> {
    match out {
        Some(path) => io::write_json(path, report),
        None => {
            println!("{}", serde_json::to_string_pretty(report).unwrap());
            Ok(())
        }
    }
}

fn cmd_verify(which: VerifyCmd) -> u8 {
    match which {
        VerifyCmd::Pitch { draws, seed, out } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut failures = 0usize;
            for _ in 0..draws {
                let t: [f64; 5] = core::array::from_fn(|_| {
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
                });
                let alpha = rng.gen_range(0.01f64..100.0);
                match dt3::predicates::verify_pitch_identity(t, alpha) {
                    Ok(r) if r.ratio_ok => {}
                    _ => failures += 1,
                }
            }
            let pass = failures == 0;
            let report = serde_json::json!({
                "check": "pitch_identity",
                "draws": draws,
                "seed": seed,
                "failures": failures,
                "pass": pass,
            });
            finish(out.as_deref(), &report, pass)
        }
        VerifyCmd::Neighborly {
            n,
            spacing,
            seed,
            out,
        } => {
            let sp = match parse_spacing(&spacing, seed) {
                Ok(sp) => sp,
                Err(msg) => return usage_error(&msg),
            };
            let cloud = match generators::gen_helix_single_turn(n, sp) {
                Ok(c) => c,
                Err(e) => return usage_error(&e.to_string()),
            };
            let pass = match experiments::verify_neighborly(&cloud) {
                Ok(p) => p,
                Err(e) => return usage_error(&e.to_string()),
            };
            let report = serde_json::json!({
                "check": "neighborly",
                "n": n,
                "expected_edges": n * (n - 1) / 2,
                "pass": pass,
            });
            finish(out.as_deref(), &report, pass)
        }
        VerifyCmd::Bitangent { t, samples, out } => {
            match experiments::verify_bitangent(t, samples) {
                Ok(report) => {
                    let pass = report.pass;
                    finish(out.as_deref(), &report, pass)
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        VerifyCmd::Seams { m, eps, out } => match experiments::verify_seam_bipartite(m, eps) {
            Ok(pass) => {
                let report = serde_json::json!({
                    "check": "seam_bipartite",
                    "m": m,
                    "eps": eps,
                    "expected_cross_edges": m * m,
                    "pass": pass,
                });
                finish(out.as_deref(), &report, pass)
            }
            Err(e) => usage_error(&e.to_string()),
        },
        VerifyCmd::Oracle {
            n,
            trials,
            seed,
            out,
        } => {
            use rand::{Rng, SeedableRng};
            if !(4..=dt3::delaunay::ORACLE_MAX_POINTS).contains(&n) {
                return usage_error(&format!(
                    "oracle size must lie in [4, {}]",
                    dt3::delaunay::ORACLE_MAX_POINTS
                ));
            }
            let mut mismatches = 0usize;
            for trial in 0..trials {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed + trial as u64);
                let pts: Vec<dt3::Point3> = (0..n)
                    .map(|_| {
                        dt3::Point3::new(
                            rng.gen_range(0.0..1.0),
                            rng.gen_range(0.0..1.0),
                            rng.gen_range(0.0..1.0),
                        )
                    })
                    .collect();
                let cloud = PointCloud::new(
                    pts,
                    dt3::Provenance::new(
                        "random_unit_cube",
                        serde_json::json!({ "n": n, "trial": trial }),
                        seed + trial as u64,
                    ),
                )
                .expect("random clouds are duplicate-free");
                let oracle = match oracle_edges(&cloud) {
                    Ok(o) => o,
                    Err(e) => return usage_error(&e.to_string()),
                };
                let tri = match triangulate(&cloud, 0xD7 + trial as u64) {
                    Ok(DelaunayComplex::Full(t)) => t,
                    _ => {
                        mismatches += 1;
                        continue;
                    }
                };
                if tri.edge_set() != oracle {
                    mismatches += 1;
                }
            }
            let pass = mismatches == 0;
            let report = serde_json::json!({
                "check": "oracle_equivalence",
                "n": n,
                "trials": trials,
                "seed": seed,
                "mismatches": mismatches,
                "pass": pass,
            });
            finish(out.as_deref(), &report, pass)
        }
    }
}

fn cmd_experiment(args: ExperimentArgs) -> u8 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return EXIT_IO;
        }
    };
    let config: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!(
                "error: malformed config {} (line {}, column {}): {e}",
                args.config.display(),
                e.line(),
                e.column()
            );
            return EXIT_USAGE;
        }
    };
    let outcome = match experiments::run_experiment(&config) {
        Ok(o) => o,
        Err(dt3::experiments::ExperimentError::TooFewSizes(k)) => {
            eprintln!("error: config must list at least 3 sizes, got {k}");
            return EXIT_USAGE;
        }
        Err(dt3::experiments::ExperimentError::UnknownFamily(f)) => {
            eprintln!("error: unknown family {f:?}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    if std::fs::create_dir_all(&args.out_dir).is_err() {
        eprintln!("error: cannot create {}", args.out_dir.display());
        return EXIT_IO;
    }
    let csv_path = args.out_dir.join(format!("{}_records.csv", outcome.fit.family));
    let json_path = args.out_dir.join(format!("{}_fit.json", outcome.fit.family));
    let mut csv = String::from("family,size,n,abscissa,spread,n_edges\n");
    for r in &outcome.fit.records {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            outcome.fit.family, r.size, r.n, r.abscissa, r.spread, r.n_edges
        ));
    }
    if std::fs::write(&csv_path, csv).is_err() {
        eprintln!("error: cannot write {}", csv_path.display());
        return EXIT_IO;
    }
    if let Err(e) = io::write_json(&json_path, &outcome) {
        return io_error(&e);
    }
    for r in &outcome.fit.records {
        eprintln!(
            "size {:6}: n={} edges={} spread={:.2} wall={:.2}s",
            r.size, r.n, r.n_edges, r.spread, r.wall_secs
        );
    }
    eprintln!(
        "slope {:.4} (expected {} +/- {}), floors {}",
        outcome.fit.slope,
        config.tolerances.expected_slope,
        config.tolerances.slope_tol,
        if outcome.floor_ok { "ok" } else { "VIOLATED" }
    );
    if outcome.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn finish<T: serde::Serialize>(out: Option<&Path>, report: &T, pass: bool) -> u8 {
    if let Err(e) = emit_report(out, report) {
        return io_error(&e);
    }
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn io_error(e: &IoError) -> u8 {
    eprintln!("error: {e}");
    EXIT_IO
}
