//! Scenario-driven front end: each subcommand loads a config file,
//! runs its cases (in parallel where the scenario is a sweep), and
//! writes a JSON or CSV report plus optional plot-ready data. Exit
//! status is 0 only when every case passes; a fatal config problem
//! exits 2 before anything runs.

mod config;
mod plotdata;
mod report;
mod scenarios;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use config::ConfigFile;
use report::Report;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "periodbound",
    version,
    about = "Lower bounds on periods of semilinear evolution equations: bound calculators, orbit sweeps, and estimate audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Kind,
    /// Scenario config file (required for every scenario except verify-all)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for case dispatch (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Seed for any randomized sampling
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Directory for reports and plot data
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Evaluate the period-bound constant for given smoothing exponents
    Bound,
    /// Certify the bound across a grid of analytic rotation orbits
    Sweep,
    /// Detect and refine a single orbit, then check its certificate
    Orbit,
    /// Audit the intermediate estimates behind the bound on one orbit
    ProofChain,
    /// Lipschitz constants and period bounds for Lotka-Volterra systems
    Lv,
    /// Smoothing exponent for reaction-diffusion growth conditions
    Rd,
    /// Measure the advective Lipschitz constant and its period bound
    NseEstimate,
    /// Run the built-in self-check battery
    VerifyAll,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Bound => "bound",
            Kind::Sweep => "sweep",
            Kind::Orbit => "orbit",
            Kind::ProofChain => "proof-chain",
            Kind::Lv => "lv",
            Kind::Rd => "rd",
            Kind::NseEstimate => "nse-estimate",
            Kind::VerifyAll => "verify-all",
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let started = Instant::now();
    let kind = cli.command;

    let cfg = match &cli.config {
        Some(path) => {
            let textual = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            Some(
                ConfigFile::parse(&textual)
                    .with_context(|| format!("parsing config {}", path.display()))?,
            )
        }
        None => None,
    };
    if cfg.is_none() && kind != Kind::VerifyAll {
        bail!("scenario `{}` requires --config PATH", kind.name());
    }

    let mut plot_fields = None;
    if let Some(cfg) = &cfg {
        let extra = cfg.extra_sections(&["scenario", "params", "plot"]);
        if !extra.is_empty() {
            bail!("unknown config sections: {}", extra.join(", "));
        }
        if let Some(scenario) = cfg.section("scenario") {
            if let Some(declared) = scenario.get_str("kind") {
                if declared != kind.name() {
                    bail!(
                        "config declares kind `{declared}` but the `{}` scenario was invoked",
                        kind.name()
                    );
                }
            }
            scenario.finish()?;
        }
        if let Some(plot) = cfg.section("plot") {
            plot_fields = plot.get_str_list("fields");
            plot.finish()?;
            if plot_fields.as_ref().map_or(true, |f| f.is_empty()) {
                bail!("[plot] section needs a nonempty `fields` list");
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let cases = pool.install(|| -> Result<Vec<report::Case>> {
        if kind == Kind::VerifyAll {
            return Ok(scenarios::run_verify_all(cli.seed));
        }
        let cfg = cfg.as_ref().expect("checked above");
        let params = cfg
            .section("params")
            .ok_or_else(|| anyhow::anyhow!("config must contain a [params] section"))?;
        match kind {
            Kind::Bound => scenarios::run_bound(&params),
            Kind::Sweep => scenarios::run_sweep(&params),
            Kind::Orbit => scenarios::run_orbit(&params),
            Kind::ProofChain => scenarios::run_proof_chain(&params),
            Kind::Lv => scenarios::run_lv(&params),
            Kind::Rd => scenarios::run_rd(&params),
            Kind::NseEstimate => scenarios::run_nse(&params, cli.seed),
            Kind::VerifyAll => unreachable!("handled above"),
        }
    })?;

    let mut report = Report::new(kind.name(), cases);
    report.duration_s = started.elapsed().as_secs_f64();

    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    let (extension, contents) = match cli.format {
        Format::Json => ("json", report.to_json()),
        Format::Csv => ("csv", report.to_csv()),
    };
    let report_path = cli.out.join(format!("{}_report.{extension}", kind.name()));
    report::write_atomic(&report_path, &contents)?;
    println!("wrote {}", report_path.display());

    if let Some(fields) = plot_fields {
        let csv = plotdata::emit_plotdata(&report, &fields)?;
        let plot_path = cli.out.join(format!("{}_plotdata.csv", kind.name()));
        report::write_atomic(&plot_path, &csv)?;
        println!("wrote {}", plot_path.display());
    }

    println!(
        "verdict: {} ({} of {} cases pass)",
        if report.pass() { "pass" } else { "fail" },
        report.passed(),
        report.cases.len()
    );
    Ok(report.pass())
}
