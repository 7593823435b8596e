use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use icsel::ar2d::load_pgm;
use icsel::error::{Error, Result};
use icsel::experiments::{
    ascii_map, run_beta_sweep, run_kullback_report, run_texture, write_sweep_csv,
    write_texture_csv, BetaGrid, CriterionSpec, Method, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "icsel",
    version,
    about = "Information-criterion model selection for 1-D and 2-D AR models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo sweep of selection success and PEV over the beta grid
    Sweep {
        /// key=value config file describing the experiment
        #[arg(long)]
        config: PathBuf,
        /// Override the series length
        #[arg(long)]
        n: Option<usize>,
        /// Override the replicate count
        #[arg(long)]
        runs: Option<usize>,
        /// Override the largest candidate lag
        #[arg(long)]
        max_order: Option<usize>,
        /// Override the beta grid
        #[arg(long, value_name = "START:STOP:STEP")]
        beta_grid: Option<String>,
        /// Override the base seed
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quarter-plane AR support maps of a PGM texture
    Texture {
        /// Input image (PGM, P2 or P5)
        #[arg(long)]
        image: PathBuf,
        /// Scan bounds of the quarter plane
        #[arg(long, default_value = "18x18", value_name = "K1xK2")]
        max_order: String,
        /// aic | bic | phi | phibeta:BETA | phibetamin
        #[arg(long, default_value = "phibetamin")]
        criterion: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Beta sweep with Kullback distance columns (grid capped at 0.35)
    Kullback {
        /// key=value config file describing the experiment
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep {
            config,
            n,
            runs,
            max_order,
            beta_grid,
            seed,
            out,
        } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(runs) = runs {
                cfg.runs = runs;
            }
            if let Some(max_order) = max_order {
                cfg.max_order = max_order;
            }
            if let Some(grid) = beta_grid {
                cfg.beta_grid = grid.parse::<BetaGrid>()?;
            }
            if let Some(seed) = seed {
                cfg.base_seed = seed;
            }
            cfg.validate()?;
            let report = run_beta_sweep(&cfg)?;
            write_csv(out.as_deref(), |w| write_sweep_csv(&report, w))
        }
        Command::Texture {
            image,
            max_order,
            criterion,
            out,
        } => {
            let (m1, m2) = parse_order_pair(&max_order)?;
            let choice: CriterionSpec = criterion.parse()?;
            let img = load_pgm(&image)?;
            let c = choice.resolve(img.width() * img.height())?;
            let results = run_texture(&img, m1, m2, c)?;

            let stdout = io::stdout();
            let mut stdout = stdout.lock();
            for result in &results {
                match (result.method, result.order) {
                    (Method::Classical, Some((k1, k2))) => writeln!(
                        stdout,
                        "{} classical: order ({k1},{k2}), {} sites",
                        result.orientation,
                        result.kept.len()
                    )?,
                    _ => writeln!(
                        stdout,
                        "{} nishii: {} sites",
                        result.orientation,
                        result.kept.len()
                    )?,
                }
                write!(stdout, "{}", ascii_map(result))?;
                writeln!(stdout)?;
            }

            write_csv(Some(&out), |w| write_texture_csv(&results, w))
        }
        Command::Kullback { config, out } => {
            let cfg = SweepConfig::from_file(&config)?;
            let report = run_kullback_report(&cfg)?;
            write_csv(Some(&out), |w| write_sweep_csv(&report, w))
        }
    }
}

fn parse_order_pair(s: &str) -> Result<(usize, usize)> {
    let parse = |v: &str| v.parse::<usize>().ok();
    s.split_once('x')
        .and_then(|(a, b)| Some((parse(a)?, parse(b)?)))
        .ok_or_else(|| Error::Config(format!("max order must be K1xK2, got {s:?}")))
}

fn write_csv(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
