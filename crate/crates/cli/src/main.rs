//! `diskpack`: generate, pack, verify and draw disk packings, evaluate the
//! density oracles, and run the ring-sector prover.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 invalid packing,
//! 3 prover left unresolved boxes.

use std::f64::consts::FRAC_PI_2;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use diskpack::instances::{gen_near_threshold, gen_pocket3, gen_random_area, gen_worst_case, EdgeKind};
use diskpack::io::{pack_file, verify_file, InstanceFile, PackingFile};
use diskpack::oracles;
use diskpack::svg::{render_svg, RenderOptions};
use diskpack::verify::DEFAULT_EPSILON;
use ringprover::search::summary_line;
use ringprover::{prove_all, Budget, CaseTag, ProveOptions, DEFAULT_BOUND};

#[derive(Parser)]
#[command(name = "diskpack", version, about = "Pack disks into the unit disk and certify the analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    WorstCase,
    RandomArea,
    NearThreshold,
    Pocket3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Edge {
    Recursion,
    Quarter,
    Pass,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleFn {
    Rho,
    ConeDensity,
    ZipperOne,
    GapExcess,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance document.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Number of disks (random-area).
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Total disk area (random-area).
        #[arg(long, default_value_t = FRAC_PI_2)]
        area: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest radius relative to the largest before rescaling (random-area).
        #[arg(long, default_value_t = 1e-3)]
        min_ratio: f64,
        /// Which branch condition to straddle (near-threshold).
        #[arg(long, value_enum, default_value = "recursion")]
        edge: Edge,
        /// Relative radius inflation (worst-case).
        #[arg(long, default_value_t = 0.0)]
        inflate: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pack an instance; `-` or no path reads stdin.
    Pack {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Include the phase event trace.
        #[arg(long)]
        trace: bool,
    },
    /// Check a packing; exits 2 when it is invalid.
    Verify {
        /// Packing document; `-` or no path reads stdin.
        packing: Option<PathBuf>,
        /// Instance the packing must match. Without it the instance is
        /// rebuilt from the packing and checked against its digest.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a packing as SVG.
    Render {
        packing: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        show_rings: bool,
        #[arg(long)]
        labels: bool,
    },
    /// Print density constants, or one function at given points.
    Oracle {
        #[arg(long = "fn", value_enum)]
        function: Option<OracleFn>,
        #[arg(long, value_delimiter = ',')]
        at: Vec<f64>,
    },
    /// Certify the ring-sector density bound by interval branch and bound.
    Prove {
        /// Restrict to one configuration type, e.g. T1.
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: f64,
        #[arg(long, default_value_t = ringprover::case::LAMBDA_MAX)]
        lambda_max: f64,
        #[arg(long, default_value_t = Budget::default().max_boxes)]
        max_boxes: u64,
        #[arg(long, default_value_t = Budget::default().max_depth)]
        max_depth: u32,
        /// Wall-clock limit in seconds per case.
        #[arg(long)]
        wall_time: Option<f64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Save resumable state to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from the checkpoint file.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Write one line per leaf box plus a summary footer.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Write the per-case reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { kind, n, area, seed, min_ratio, edge, inflate, output } => {
            let spec = match kind {
                Kind::WorstCase => gen_worst_case(inflate),
                Kind::RandomArea => gen_random_area(n, area, seed, min_ratio)?,
                Kind::Pocket3 => gen_pocket3(),
                Kind::NearThreshold => gen_near_threshold(match edge {
                    Edge::Recursion => EdgeKind::RecursionEdge,
                    Edge::Quarter => EdgeKind::QuarterEdge,
                    Edge::Pass => EdgeKind::PassEdge,
                }),
            };
            write_output(output.as_ref(), &with_newline(InstanceFile::new(&spec).to_json()))?;
        }
        Command::Pack { input, output, trace } => {
            let instance = InstanceFile::parse(&read_input(input.as_ref())?)?;
            let packing = pack_file(&instance, trace)?;
            if !packing.complete {
                eprintln!("warning: {} disk(s) could not be packed", packing.unplaced.len());
            }
            write_output(output.as_ref(), &with_newline(packing.to_json()))?;
        }
        Command::Verify { packing, instance, epsilon, output } => {
            if !(epsilon >= 0.0) {
                bail!("--epsilon must be nonnegative");
            }
            let packing = PackingFile::parse(&read_input(packing.as_ref())?)?;
            let instance = match instance {
                Some(p) => Some(InstanceFile::parse(&read_input(Some(&p))?)?),
                None => None,
            };
            let report = verify_file(instance.as_ref(), &packing, epsilon)?;
            write_output(output.as_ref(), &with_newline(serde_json::to_string_pretty(&report)?))?;
            if !report.valid {
                eprintln!("invalid packing: {} violation(s)", report.violations.len());
                return Ok(ExitCode::from(2));
            }
        }
        Command::Render { packing, output, show_rings, labels } => {
            let packing = PackingFile::parse(&read_input(packing.as_ref())?)?;
            write_output(output.as_ref(), &render_svg(&packing, RenderOptions { show_rings, labels }))?;
        }
        Command::Oracle { function, at } => {
            let mut out = String::new();
            match function {
                None => {
                    out += &format!("rho={}\n", oracles::rho());
                    out += &format!("zipper_one_density={}\n", oracles::zipper_one_density());
                }
                Some(OracleFn::Rho) => out += &format!("rho={}\n", oracles::rho()),
                Some(OracleFn::ZipperOne) => out += &format!("zipper_one_density={}\n", oracles::zipper_one_density()),
                Some(f @ (OracleFn::ConeDensity | OracleFn::GapExcess)) => {
                    if at.is_empty() {
                        bail!("--at is required for this function");
                    }
                    for x in at {
                        let (name, v) = match f {
                            OracleFn::ConeDensity => ("cone_density", oracles::cone_density(x)?),
                            _ => ("gap_excess", oracles::gap_excess(x)?),
                        };
                        out += &format!("{name}({x})={v}\n");
                    }
                }
            }
            write_output(None, &out)?;
        }
        Command::Prove {
            case,
            bound,
            lambda_max,
            max_boxes,
            max_depth,
            wall_time,
            threads,
            checkpoint,
            resume,
            certificate,
            report,
        } => {
            let only = match case {
                Some(s) => Some(CaseTag::parse(&s).with_context(|| format!("unknown case {s:?}, expected T1..T8"))?),
                None => None,
            };
            if !(ringprover::case::LAMBDA_MIN < lambda_max && lambda_max <= ringprover::case::LAMBDA_MAX) {
                bail!("--lambda-max must lie in (0.5, 0.99]");
            }
            if !(bound > 0.0 && bound.is_finite()) {
                bail!("--bound must be positive");
            }
            let wall_time = wall_time.map(Duration::try_from_secs_f64).transpose().context("--wall-time")?;
            let opts = ProveOptions {
                bound,
                lambda_max,
                budget: Budget { max_depth, max_boxes, wall_time },
                threads,
                checkpoint,
                ..ProveOptions::default()
            };
            let mut cert = match &certificate {
                Some(p) => {
                    let file = OpenOptions::new()
                        .create(true)
                        .write(true)
                        .append(resume)
                        .truncate(!resume)
                        .open(p)
                        .with_context(|| format!("opening {}", p.display()))?;
                    Some(BufWriter::new(file))
                }
                None => None,
            };
            let mut write_err: Option<io::Error> = None;
            let reports = prove_all(&opts, only, resume, &mut |leaf| {
                if let (Some(w), None) = (cert.as_mut(), write_err.as_ref()) {
                    if let Err(e) = writeln!(w, "{leaf}") {
                        write_err = Some(e);
                    }
                }
            })?;
            if let Some(e) = write_err {
                return Err(e).context("writing certificate");
            }
            let footer = summary_line(&reports);
            if let Some(w) = cert.as_mut() {
                writeln!(w, "{footer}")?;
                w.flush()?;
            }
            if let Some(p) = &report {
                let mut f = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
                serde_json::to_writer_pretty(&mut f, &reports)?;
                writeln!(f)?;
            }
            let mut out = String::new();
            for r in &reports {
                out += &format!(
                    "{} {} proven={} pruned={} failed={} max_depth={} min_density={} time={:.3}s\n",
                    r.config.tag,
                    r.config.orientation,
                    r.boxes_proven,
                    r.boxes_pruned_infeasible,
                    r.failures_total,
                    r.max_depth,
                    r.min_proven_density.map_or("-".to_string(), |d| format!("{d:.6}")),
                    r.wall_time
                );
            }
            out += &footer;
            out += &format!("\nnote: only inner radii in [0.5, {lambda_max}] are covered\n");
            write_output(None, &out)?;
            if reports.iter().any(|r| !r.certified()) {
                eprintln!("bound not certified on every box (unresolved boxes remain; this is not a disproof)");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
