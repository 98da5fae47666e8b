//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::binary::{self, BinaryDpcParams, BinaryMacParams};
use crate::dm::{theorem1_pentagon, validate_spec, Severity};
use crate::error::{Error, Result};
use crate::figures::{self, Figure, SeriesData};
use crate::gaussian::{self, GaussianMacParams, RhoRange};
use crate::geometry::{pentagon_vertices, RegionPolygon};
use crate::io::{load_dm_spec, CurveExport, ExportMetadata, RegionExport, Units};
use crate::verify::{self, Suite};
use crate::RatePentagon;

/// Environment variable capping sweep parallelism (0 = all cores).
pub const THREADS_ENV: &str = "MACREGION_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "macregion",
    version,
    about = "Rate-region bounds for two-user MACs with one state-informed encoder"
)]
pub struct Cli {
    /// Report rates in nats instead of bits.
    #[arg(long, global = true)]
    pub nats: bool,

    /// Output file(s); `.csv` or `.json`. Without it, CSV goes to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Vec<PathBuf>,

    /// Add upper-boundary samples at this R1 spacing (bits) to JSON output.
    #[arg(long, global = true, value_name = "BITS")]
    pub boundary_step: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BinaryArgs {
    #[arg(long)]
    pub p1: f64,
    #[arg(long)]
    pub p2: f64,
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    #[arg(long = "P1")]
    pub p1: f64,
    #[arg(long = "P2")]
    pub p2: f64,
    #[arg(long = "Q")]
    pub q: f64,
    #[arg(long = "N")]
    pub n: f64,
}

#[derive(Debug, Args)]
pub struct LargeStateArgs {
    #[arg(long = "P1")]
    pub p1: f64,
    #[arg(long = "P2")]
    pub p2: f64,
    #[arg(long = "N")]
    pub n: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = gaussian::DEFAULT_RHO_STEPS)]
    pub rho_steps: usize,
    #[arg(long, default_value_t = gaussian::DEFAULT_ALPHA_STEPS)]
    pub alpha_steps: usize,
    /// Let the state correlation range over [-1, 1) instead of [-1, 0].
    #[arg(long)]
    pub extended_rho: bool,
}

impl SweepArgs {
    fn range(&self) -> RhoRange {
        if self.extended_rho {
            RhoRange::Extended
        } else {
            RhoRange::Standard
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binary GDPC inner region over a grid of coding parameters.
    BinaryRegion {
        #[command(flatten)]
        params: BinaryArgs,
        #[arg(long, default_value_t = binary::DEFAULT_GRID)]
        grid: usize,
    },
    /// Binary outer bound.
    BinaryOuter {
        #[command(flatten)]
        params: BinaryArgs,
    },
    /// Binary capacity region (q = 0.5 only).
    BinaryCapacity {
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
    },
    /// Pentagon of one binary coding point (standard DPC by default).
    BinaryDpc {
        #[command(flatten)]
        params: BinaryArgs,
        #[arg(long, requires = "a01")]
        a10: Option<f64>,
        #[arg(long, requires = "a10")]
        a01: Option<f64>,
    },
    /// Gaussian GDPC inner region.
    GaussianRegion {
        #[command(flatten)]
        params: GaussianArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Restrict to plain DPC (zero state correlation).
        #[arg(long)]
        dpc_only: bool,
    },
    /// Gaussian outer bound (state known at the decoder).
    GaussianOuter {
        #[command(flatten)]
        params: GaussianArgs,
    },
    /// Large-state inner region.
    AsymptoticRegion {
        #[command(flatten)]
        params: LargeStateArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Large-state outer bound.
    AsymptoticOuter {
        #[command(flatten)]
        params: LargeStateArgs,
    },
    /// Largest uninformed-encoder rate against the state variance.
    R2maxCurve {
        #[command(flatten)]
        params: LargeStateArgs,
        /// Comma-separated state variances.
        #[arg(long, value_delimiter = ',', default_values_t = figures::FIG5_Q)]
        q_values: Vec<f64>,
    },
    /// Inner-bound pentagon of a discrete channel described in a JSON file.
    DmEval {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Write every series of a figure preset as CSV and JSON.
    Figure {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run self-check suites.
    Verify {
        /// binary-oracle, gaussian-oracle, asymptotic-limit, containment or all.
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// Sizes the global thread pool from [`THREADS_ENV`].
pub fn configure_threads() -> Result<()> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| Error::Unknown {
            kind: "thread count in MACREGION_THREADS",
            name: v.clone(),
        })?,
        Err(_) => 0,
    };
    // a pool that already exists is kept
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

struct Ctx {
    units: Units,
    out: Vec<PathBuf>,
    boundary_step: Option<f64>,
}

impl Ctx {
    fn meta(&self, command: &str, series: &str, parameters: Value, grid: Value) -> ExportMetadata {
        ExportMetadata::new(command, series, parameters, grid, self.units)
    }

    fn emit_region(&self, meta: ExportMetadata, region: &RegionPolygon) -> Result<()> {
        let e = RegionExport::from_polygon(meta, region, self.boundary_step)?;
        if self.out.is_empty() {
            print_stdout(&e.to_csv())
        } else {
            self.out.iter().try_for_each(|p| e.write(p))
        }
    }

    fn emit_pentagon(&self, meta: ExportMetadata, p: &RatePentagon) -> Result<()> {
        let f = self.units.factor();
        eprintln!(
            "c1 = {:.12} c2 = {:.12} c12 = {:.12} ({})",
            p.c1 * f,
            p.c2 * f,
            p.c12 * f,
            self.units.suffix()
        );
        self.emit_region(meta, &pentagon_vertices(p))
    }
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(out.flush()?)
}

fn binary_params(a: &BinaryArgs) -> Result<BinaryMacParams> {
    BinaryMacParams::new(a.p1, a.p2, a.q)
}

fn large_state_params(a: &LargeStateArgs) -> Result<GaussianMacParams> {
    GaussianMacParams::new(a.p1, a.p2, 0.0, a.n)
}

/// Runs a parsed command line. Returns `false` when a verification check
/// failed.
pub fn execute(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        units: if cli.nats { Units::Nats } else { Units::Bits },
        out: cli.out,
        boundary_step: cli.boundary_step,
    };
    match cli.command {
        Command::BinaryRegion { params, grid } => {
            let m = binary_params(&params)?;
            let r = binary::inner_region(&m, grid)?;
            let meta = ctx.meta(
                "binary-region",
                "inner",
                figures::binary_params_json(&m),
                json!({"grid": grid}),
            );
            ctx.emit_region(meta, &r)?;
        }
        Command::BinaryOuter { params } => {
            let m = binary_params(&params)?;
            let meta = ctx.meta(
                "binary-outer",
                "outer",
                figures::binary_params_json(&m),
                Value::Null,
            );
            ctx.emit_pentagon(meta, &binary::outer_region(&m))?;
        }
        Command::BinaryCapacity { p1, p2, q } => {
            let m = BinaryMacParams::new(p1, p2, q)?;
            let meta = ctx.meta(
                "binary-capacity",
                "capacity",
                figures::binary_params_json(&m),
                Value::Null,
            );
            ctx.emit_pentagon(meta, &binary::capacity_q_half(&m)?)?;
        }
        Command::BinaryDpc { params, a10, a01 } => {
            let m = binary_params(&params)?;
            let d = match (a10, a01) {
                (Some(a10), Some(a01)) => BinaryDpcParams::new(a10, a01)?,
                _ => BinaryDpcParams::standard(&m),
            };
            let mut p = figures::binary_params_json(&m);
            p["a10"] = json!(d.a10);
            p["a01"] = json!(d.a01);
            let meta = ctx.meta("binary-dpc", "pentagon", p, Value::Null);
            ctx.emit_pentagon(meta, &binary::inner_pentagon(&m, &d)?)?;
        }
        Command::GaussianRegion {
            params,
            sweep,
            dpc_only,
        } => {
            let m = GaussianMacParams::new(params.p1, params.p2, params.q, params.n)?;
            let p = figures::gaussian_params_json(&m, true);
            let (r, series, grid) = if dpc_only {
                (
                    gaussian::dpc_only_region(&m, sweep.alpha_steps)?,
                    "dpc_only",
                    json!({"alpha_steps": sweep.alpha_steps, "rho": 0.0}),
                )
            } else {
                (
                    gaussian::inner_region(&m, sweep.rho_steps, sweep.alpha_steps, sweep.range())?,
                    "inner",
                    figures::gaussian_grid_json(sweep.rho_steps, sweep.alpha_steps, sweep.range()),
                )
            };
            ctx.emit_region(ctx.meta("gaussian-region", series, p, grid), &r)?;
        }
        Command::GaussianOuter { params } => {
            let m = GaussianMacParams::new(params.p1, params.p2, params.q, params.n)?;
            let meta = ctx.meta(
                "gaussian-outer",
                "outer",
                figures::gaussian_params_json(&m, true),
                Value::Null,
            );
            ctx.emit_pentagon(meta, &gaussian::outer_region(&m))?;
        }
        Command::AsymptoticRegion { params, sweep } => {
            let m = large_state_params(&params)?;
            let r = gaussian::asymptotic_inner_region(
                &m,
                sweep.rho_steps,
                sweep.alpha_steps,
                sweep.range(),
            )?;
            let meta = ctx.meta(
                "asymptotic-region",
                "inner",
                figures::gaussian_params_json(&m, false),
                figures::gaussian_grid_json(sweep.rho_steps, sweep.alpha_steps, sweep.range()),
            );
            ctx.emit_region(meta, &r)?;
        }
        Command::AsymptoticOuter { params } => {
            let m = large_state_params(&params)?;
            let meta = ctx.meta(
                "asymptotic-outer",
                "outer",
                figures::gaussian_params_json(&m, false),
                Value::Null,
            );
            ctx.emit_pentagon(meta, &gaussian::asymptotic_outer_region(&m))?;
        }
        Command::R2maxCurve { params, q_values } => {
            let m = GaussianMacParams::new(params.p1, params.p2, 1.0, params.n)?;
            let curve = gaussian::r2max_vs_q(&m, &q_values)?;
            let meta = ctx.meta(
                "r2max-curve",
                "r2max",
                json!({"P1": m.p1, "P2": m.p2, "N": m.n, "Q": q_values}),
                json!({"rho_steps": gaussian::R2MAX_RHO_STEPS, "alpha_steps": gaussian::R2MAX_ALPHA_STEPS}),
            );
            let e = CurveExport::new(meta, "Q", "R2max", &curve);
            if ctx.out.is_empty() {
                print_stdout(&e.to_csv())?;
            } else {
                ctx.out.iter().try_for_each(|p| e.write(p))?;
            }
        }
        Command::DmEval { spec } => {
            let s = load_dm_spec(&spec)?;
            for d in validate_spec(&s) {
                if d.severity == Severity::Advisory {
                    eprintln!("{d}");
                }
            }
            let p = theorem1_pentagon(&s)?;
            let meta = ctx.meta("dm-eval", "pentagon", json!({"spec": spec}), Value::Null);
            ctx.emit_pentagon(meta, &p)?;
        }
        Command::Figure { figure, out_dir } => write_figure(&ctx, figure, &out_dir)?,
        Command::Verify { suite } => {
            let checks = verify::run(Suite::from_name(&suite)?)?;
            let mut ok = true;
            for c in &checks {
                println!("{c}");
                ok &= c.passed();
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!(
                "{}: {} checks, {} failed",
                if ok { "PASS" } else { "FAIL" },
                checks.len(),
                failed
            );
            return Ok(ok);
        }
    }
    Ok(true)
}

fn write_figure(ctx: &Ctx, figure: Figure, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for s in figures::figure_series(figure)? {
        let meta = ctx.meta(
            &format!("figure {}", figure.name()),
            &s.name,
            s.parameters,
            s.grid,
        );
        let stem = dir.join(format!("{}_{}", figure.name(), s.name));
        let csv = stem.with_extension("csv");
        let js = stem.with_extension("json");
        match &s.data {
            SeriesData::Region(r) => {
                let e = RegionExport::from_polygon(meta, r, ctx.boundary_step)?;
                e.write(&csv)?;
                e.write(&js)?;
            }
            SeriesData::Curve(c) => {
                let e = CurveExport::new(meta, "Q", "R2max", c);
                e.write(&csv)?;
                e.write(&js)?;
            }
        }
        println!("{}", csv.display());
        println!("{}", js.display());
    }
    Ok(())
}
