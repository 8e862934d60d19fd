use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use qchardy::{emit, run, Experiment, ExperimentSpec, Format};
use qchardy_core::boundary_maps::MapCatalogEntry;

/// Run a named numerical experiment and write its report as CSV or JSON.
///
/// Exit status: 0 when every assertion in the report passes, 1 when one fails, 2 on errors.
#[derive(Parser, Debug)]
#[command(name = "qchardy", version, allow_negative_numbers = true)]
struct Args {
    /// thm1, thm2, thm3, thmA, lemma1 or af_conformal
    experiment: Experiment,
    /// identity, thm2_sqrt, power:<γ>, moebius:<re>[,<im>]
    #[arg(long)]
    map: Option<MapCatalogEntry>,
    #[arg(long)]
    p: Option<f64>,
    /// Schedule depth (radial levels, kernel levels or rings)
    #[arg(long)]
    depth: Option<u32>,
    /// Grid size (panels, ball centres, boundary points or test points)
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cone aperture
    #[arg(long)]
    aperture: Option<f64>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Worker threads
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall time in the report metadata (breaks byte-identical output)
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qchardy: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: Args) -> qchardy::Result<bool> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| qchardy::CliError::InvalidSpec(format!("thread pool: {e}")))?;
    }
    let mut spec = ExperimentSpec::new(args.experiment);
    if let Some(m) = args.map {
        spec.map = m;
    }
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(d) = args.depth {
        spec.depth = d;
    }
    if let Some(g) = args.grid {
        spec.grid = g;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    if let Some(c) = args.aperture {
        spec.aperture = c;
    }
    let start = Instant::now();
    let mut report = run(&spec)?;
    if args.timing {
        report.metadata.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    match &args.out {
        Some(path) => emit(&report, args.format, path)?,
        None => print!("{}", report.render(args.format)?),
    }
    Ok(report.passed())
}
