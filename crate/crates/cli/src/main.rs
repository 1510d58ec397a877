//! `lesionseg`: segment, evaluate and generate synthetic skin-lesion images.
//!
//! Exit codes: 0 success, 1 no lesion candidate, 2 I/O or argument errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lesionseg::eval::{evaluate_batch, render_overlay, write_report, BatchOptions, Method};
use lesionseg::io::{load_image, load_mask, save_mask, save_rgb};
use lesionseg::synth::{write_suite, SynthOptions};
use lesionseg::{Error, PipelineConfig};

const CONFIG_ENV: &str = "LESIONSEG_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "lesionseg", version, about = "Classical skin-lesion segmentation")]
struct Cli {
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,

    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
struct ConfigArgs {
    /// Config file (`key = value` lines). Defaults to $LESIONSEG_CONFIG when set.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Segment one image and write the lesion mask.
    Segment {
        #[arg(long)]
        method: Method,
        #[arg(long = "in", value_name = "IMAGE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "MASK")]
        output: PathBuf,
        /// Also write the image with the mask boundary drawn in green.
        #[arg(long, value_name = "PATH")]
        overlay: Option<PathBuf>,
        /// Ground-truth mask whose boundary is added to the overlay in red.
        #[arg(long, value_name = "MASK", requires = "overlay")]
        truth: Option<PathBuf>,
    },
    /// Segment a directory of images and score them against ground truth.
    Evaluate {
        #[arg(long)]
        method: Method,
        #[arg(long, value_name = "DIR")]
        images: PathBuf,
        #[arg(long, value_name = "DIR")]
        truth: PathBuf,
        #[arg(long, value_name = "CSV")]
        report: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Record per-image runtimes; makes the report non-reproducible.
        #[arg(long)]
        timings: bool,
        /// Write predicted masks into this directory.
        #[arg(long, value_name = "DIR")]
        save_masks: Option<PathBuf>,
    },
    /// Write synthetic lesion images with exact ground-truth masks.
    Generate {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        hair: bool,
        #[arg(long)]
        vignette: bool,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoLesionCandidate => 1,
        _ => 2,
    }
}

fn resolve_config(args: &ConfigArgs) -> Result<PipelineConfig, Error> {
    let path = args
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    for assignment in &args.overrides {
        cfg.apply_override(assignment)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn segment(
    method: Method,
    input: &Path,
    output: &Path,
    overlay: Option<&Path>,
    truth: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<(), Error> {
    let img = load_image(input)?;
    let truth = truth.map(load_mask).transpose()?;
    let mask = method.segment(&img, cfg)?;
    save_mask(&mask, output)?;
    if let Some(path) = overlay {
        save_rgb(&render_overlay(&img, &mask, truth.as_ref())?, path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = resolve_config(&cli.config)?;
    if cli.dump_config {
        print!("{}", cfg.to_text());
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(Error::InvalidParameter(
            "a subcommand is required (segment, evaluate, generate); see --help".into(),
        ));
    };
    match command {
        Command::Segment {
            method,
            input,
            output,
            overlay,
            truth,
        } => segment(method, &input, &output, overlay.as_deref(), truth.as_deref(), &cfg),
        Command::Evaluate {
            method,
            images,
            truth,
            report,
            jobs,
            timings,
            save_masks,
        } => {
            let opts = BatchOptions {
                jobs,
                timings,
                save_masks,
            };
            let summary = evaluate_batch(&images, &truth, method, &cfg, &opts)?;
            write_report(&summary, &report)?;
            for r in summary.records.iter().filter(|r| r.error.is_some()) {
                eprintln!("{}: {}", r.image_id, r.error.as_deref().unwrap_or_default());
            }
            println!("mean IoU: {:.2}%", summary.mean_iou * 100.0);
            Ok(())
        }
        Command::Generate {
            out,
            count,
            seed,
            hair,
            vignette,
            width,
            height,
        } => {
            if width == 0 || height == 0 {
                return Err(Error::InvalidParameter("width and height must be positive".into()));
            }
            let opts = SynthOptions {
                width,
                height,
                hair,
                vignette,
            };
            write_suite(&out, seed, count, &opts, &cfg.truth_suffix).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lesionseg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
