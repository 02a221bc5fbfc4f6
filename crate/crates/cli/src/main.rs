//! `csrbf` command-line interface.
//!
//! Subcommands:
//!   min-support  per-family minimum support sizes under the topology condition
//!   fit-warp     fit a landmark transformation and warp a PGM/PPM image
//!   figures      regenerate the deformed-grid figures and determinant curves
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 usage error,
//! 3 topology violation under --require-topology, 4 conditioning failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use csrbf_core::error::Error as CoreError;
use csrbf_core::four_landmark::figure2_table;
use csrbf_core::io::landmarks::fmt9;
use csrbf_core::io::{det_csv, landmarks, netpbm};
use csrbf_core::render::{deform_grid, GridSpec};
use csrbf_core::support::support_bound;
use csrbf_core::warp::warp_image;
use csrbf_core::{fit, Kernel, KernelFamily, LandmarkCorrespondence, Point2, Rect};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TOPOLOGY: u8 = 3;
const EXIT_CONDITIONING: u8 = 4;

#[derive(Parser)]
#[command(
    name = "csrbf",
    version,
    about = "CSRBF landmark registration and topology analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum support size per kernel family (locality parameter table)
    MinSupport(MinSupportArgs),
    /// Fit a landmark transformation and warp a raster image
    FitWarp(FitWarpArgs),
    /// Regenerate the deformation figures and determinant curves
    Figures(FiguresArgs),
}

#[derive(Args)]
struct KernelArgs {
    /// Kernel family: wendland, wu, gneiting-7-2, gneiting-5, or gneiting
    #[arg(long, default_value = "gneiting-7-2")]
    family: String,
    /// Gneiting exponent, required with --family gneiting
    #[arg(long)]
    l: Option<f64>,
}

impl KernelArgs {
    fn resolve(&self) -> Result<KernelFamily, String> {
        match self.family.as_str() {
            "wendland" => Ok(KernelFamily::Wendland31),
            "wu" => Ok(KernelFamily::Wu12),
            "gneiting-7-2" => Ok(KernelFamily::GNEITING_SEVEN_HALVES),
            "gneiting-5" => Ok(KernelFamily::GNEITING_FIVE),
            "gneiting" => {
                let l = self.l.ok_or("--family gneiting requires --l <exponent>")?;
                KernelFamily::gneiting(l).map_err(|e| e.to_string())
            }
            other => Err(format!(
                "unknown kernel family {other:?} (expected wendland, wu, gneiting-7-2, gneiting-5, gneiting)"
            )),
        }
    }
}

#[derive(Args)]
struct MinSupportArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Maximal per-coordinate landmark shift
    #[arg(long)]
    delta: f64,
    /// Emit the full four-family table as CSV instead of a single report
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct FitWarpArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Landmark file (.csv with sx,sy,tx,ty header, or .json)
    #[arg(long)]
    landmarks: PathBuf,
    /// Input image (binary PGM/PPM)
    #[arg(long)]
    image: PathBuf,
    /// Output image path
    #[arg(long)]
    output: PathBuf,
    /// Support size, or "auto" for safety * c_min from the landmark shifts
    #[arg(long, default_value = "auto")]
    c: String,
    /// Safety factor applied to c_min when --c auto is used
    #[arg(long, default_value_t = 1.001)]
    safety: f64,
    /// Fill value for out-of-bounds samples
    #[arg(long, default_value_t = 0)]
    fill: u8,
    /// Optionally export the Jacobian-determinant field of the fitted
    /// (forward) transformation as CSV
    #[arg(long)]
    det_csv: Option<PathBuf>,
    /// Grid resolution per axis for the determinant field
    #[arg(long, default_value_t = 200)]
    det_resolution: usize,
    /// Exit with status 3 if the sampled determinant field is not positive
    #[arg(long)]
    require_topology: bool,
}

#[derive(Args)]
struct FiguresArgs {
    /// Figure id: 4.1, 4.2, 5.2, 5.3, or fig2-curve
    #[arg(long)]
    id: String,
    /// Restrict SVG figures to one kernel family
    #[arg(long)]
    kernel: Option<String>,
    /// Override the caption support size
    #[arg(long)]
    c: Option<f64>,
    /// Output directory for SVG panels (and default CSV location)
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Explicit output path for the fig2-curve CSV
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::MinSupport(args) => cmd_min_support(args),
        Command::FitWarp(args) => cmd_fit_warp(args),
        Command::Figures(args) => cmd_figures(args),
    };
    match result {
        Ok(code) => code,
        Err(CmdError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

/// CSRBF_THREADS caps internal parallelism; 0 means sequential.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("CSRBF_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let threads = if n == 0 { 1 } else { n };
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> CmdError {
        let code = match &e {
            CoreError::NotPositiveDefinite { .. } => EXIT_CONDITIONING,
            CoreError::SingularConfiguration(_) => EXIT_CONDITIONING,
            CoreError::InvalidInput(_) => EXIT_USAGE,
            CoreError::Parse { .. } | CoreError::Io(_) => EXIT_IO,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> CmdError {
        CmdError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

fn cmd_min_support(args: MinSupportArgs) -> Result<ExitCode, CmdError> {
    if !args.delta.is_finite() || args.delta <= 0.0 {
        return Err(usage(format!(
            "--delta must be positive, got {}",
            args.delta
        )));
    }
    if args.all {
        // table order follows ascending locality parameter
        let families = [
            KernelFamily::Wu12,
            KernelFamily::Wendland31,
            KernelFamily::GNEITING_SEVEN_HALVES,
            KernelFamily::GNEITING_FIVE,
        ];
        println!("family,r_star_over_c,slope_min,c_min_over_delta,c_min");
        for family in families {
            let b = support_bound(family);
            println!(
                "{},{},{},{},{}",
                family.label(),
                fmt9(b.r_star_over_c),
                fmt9(b.slope_min),
                fmt9(b.c_min_over_delta),
                fmt9(b.c_min_over_delta * args.delta)
            );
        }
        return Ok(ExitCode::SUCCESS);
    }
    let family = args.kernel.resolve().map_err(usage)?;
    let b = support_bound(family);
    println!("family: {}", family.label());
    println!("r_star_over_c: {}", fmt9(b.r_star_over_c));
    println!("slope_min: {}", fmt9(b.slope_min));
    println!("c_min_over_delta: {}", fmt9(b.c_min_over_delta));
    println!("c_min: {}", fmt9(b.c_min_over_delta * args.delta));
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit_warp(args: FitWarpArgs) -> Result<ExitCode, CmdError> {
    let family = args.kernel.resolve().map_err(usage)?;
    let lm = landmarks::read_file(&args.landmarks)?;
    let img = netpbm::read_netpbm_file(&args.image)?;

    let c = match args.c.as_str() {
        "auto" => {
            let delta = lm.max_shift();
            if delta == 0.0 {
                // identity correspondence: any support works
                1.0
            } else {
                args.safety * csrbf_core::min_support(family, delta)?
            }
        }
        v => v
            .parse::<f64>()
            .map_err(|_| usage(format!("--c must be a number or 'auto', got {v:?}")))?,
    };
    let kernel = Kernel::new(family, c).map_err(CmdError::from)?;

    let out = warp_image(kernel, &lm, &img, args.fill)?;
    netpbm::write_netpbm_file(&out, &args.output)?;

    let need_field = args.det_csv.is_some() || args.require_topology;
    let mut topology_ok = true;
    if need_field {
        let forward = fit(kernel, &lm)?;
        let region = Rect::new(0.0, 0.0, (img.width - 1) as f64, (img.height - 1) as f64)?;
        let field = forward.det_field(region, args.det_resolution, args.det_resolution)?;
        println!(
            "min_det: {} at ({}, {}) negative_fraction: {}",
            fmt9(field.min_det),
            fmt9(field.argmin.x),
            fmt9(field.argmin.y),
            fmt9(field.negative_fraction)
        );
        if let Some(path) = &args.det_csv {
            std::fs::write(path, det_csv::to_csv(&field))?;
        }
        topology_ok = field.preserves_topology();
    }

    if args.require_topology && !topology_ok {
        eprintln!("topology violation: Jacobian determinant is not positive everywhere");
        return Ok(ExitCode::from(EXIT_TOPOLOGY));
    }
    Ok(ExitCode::SUCCESS)
}

/// Caption support sizes of the one-landmark figure panels.
fn caption_support(id: &str, family: KernelFamily) -> f64 {
    match id {
        "4.1" => match family {
            KernelFamily::Wendland31 => 0.6,
            KernelFamily::Wu12 => 0.58,
            f if f == KernelFamily::GNEITING_SEVEN_HALVES => 1.02,
            _ => 1.26,
        },
        "5.2" => 100.0,
        // 4.2 and 5.3 use the violating support
        _ => 0.15,
    }
}

fn figure_landmarks(id: &str) -> LandmarkCorrespondence {
    let (source, target) = if id.starts_with('4') {
        (vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
    } else {
        (
            vec![
                Point2::new(0.5, 0.65),
                Point2::new(0.35, 0.5),
                Point2::new(0.65, 0.5),
                Point2::new(0.5, 0.35),
            ],
            vec![
                Point2::new(0.5, 0.65),
                Point2::new(0.35, 0.5),
                Point2::new(0.65, 0.5),
                Point2::new(0.5, 0.25),
            ],
        )
    };
    LandmarkCorrespondence::new(source, target).expect("figure landmarks are valid")
}

fn cmd_figures(args: FiguresArgs) -> Result<ExitCode, CmdError> {
    match args.id.as_str() {
        "4.1" | "4.2" | "5.2" | "5.3" => cmd_grid_figure(&args),
        "fig2-curve" => cmd_fig2_curve(&args),
        other => Err(usage(format!(
            "unknown figure id {other:?} (expected 4.1, 4.2, 5.2, 5.3, fig2-curve)"
        ))),
    }
}

fn cmd_grid_figure(args: &FiguresArgs) -> Result<ExitCode, CmdError> {
    let families: Vec<KernelFamily> = match &args.kernel {
        Some(name) => {
            vec![KernelArgs {
                family: name.clone(),
                l: None,
            }
            .resolve()
            .map_err(usage)?]
        }
        None => KernelFamily::ALL.to_vec(),
    };
    let lm = figure_landmarks(&args.id);
    std::fs::create_dir_all(&args.out_dir)?;
    for family in families {
        let c = args.c.unwrap_or_else(|| caption_support(&args.id, family));
        let kernel = Kernel::new(family, c)?;
        let t = fit(kernel, &lm)?;
        let spec = GridSpec::new(Rect::unit(), 21, 101)?;
        let doc = deform_grid(&t, &spec);
        let path = args
            .out_dir
            .join(format!("fig{}_{}.svg", args.id, family.label()));
        std::fs::write(&path, doc.to_svg())?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fig2_curve(args: &FiguresArgs) -> Result<ExitCode, CmdError> {
    let c = args.c.unwrap_or(100.0);
    let delta = 0.2;
    let ys: Vec<f64> = (1..=50).map(|i| 1.0 + 4.0 * i as f64 / 50.0).collect();
    let families: Vec<KernelFamily> = match &args.kernel {
        Some(name) => {
            vec![KernelArgs {
                family: name.clone(),
                l: None,
            }
            .resolve()
            .map_err(usage)?]
        }
        None => KernelFamily::ALL.to_vec(),
    };
    let rows = figure2_table(&families, c, delta, &ys)?;
    let mut out = String::from("y,kernel,det\n");
    for row in &rows {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt9(row.y),
            row.kernel,
            fmt9(row.det)
        ));
    }
    let path = match &args.output {
        Some(p) => p.clone(),
        None => {
            std::fs::create_dir_all(&args.out_dir)?;
            args.out_dir.join("fig2_curve.csv")
        }
    };
    std::fs::write(&path, out)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
