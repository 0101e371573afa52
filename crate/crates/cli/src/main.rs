mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use wgn_core::conditions::{check_condition_c, ConditionCReport};
use wgn_core::constants::ConstantsBundle;
use wgn_core::functionals::family_gn_constant;
use wgn_core::Mode;

use config::{Overrides, RunConfig, Suite};
use report::{write_csv, Envelope};
use suites::Context;

/// Weighted Gagliardo–Nirenberg constants and checks on convex cones.
#[derive(Parser)]
#[command(name = "wgn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit every constant for the configured weights.
    Constants(RunArgs),
    /// Sample condition (C) for the configured triplet.
    CheckCondition(RunArgs),
    /// Run the selected verification suite.
    Verify(RunArgs),
    /// Cross-check the closed-form radial integrals against quadrature.
    Integrals(RunArgs),
    /// GN ratio at the extremal family over the configured γ × λ grid (CSV).
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    config: PathBuf,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Report path (CSV path for `sweep`); stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Leave the timestamp out so repeated runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

impl RunArgs {
    fn load(&self) -> Result<RunConfig> {
        RunConfig::load(
            &self.config,
            &Overrides {
                gamma: self.gamma,
                p: self.p,
                resolution: self.resolution,
                seed: self.seed,
                suite: self.suite,
                out: self.out.clone(),
            },
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(pass)` on a completed run; `Err` is a usage or config problem.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Constants(args) => constants(&args),
        Command::CheckCondition(args) => check_condition(&args),
        Command::Verify(args) => verify(&args),
        Command::Integrals(args) => integrals(&args),
        Command::Sweep(args) => sweep(&args),
    }
}

fn constants(args: &RunArgs) -> Result<bool> {
    let config = args.load()?;
    let params = config.params()?;
    let ctx = Context::new(&config)?;
    let bundle = if config.equal_weights() && config.condition.is_none() {
        ConstantsBundle::equal_weight(&params, ctx.w1.degree(), ctx.ball)?
    } else {
        let (c0, k) = if params.mode == Mode::LogSobolevLimit {
            (1.0, -(params.n as f64) - ctx.w1.degree())
        } else {
            ctx.condition_constants(&params)?
        };
        let w3 = ctx.w3.as_ref().unwrap_or(&ctx.w1);
        let tau = [ctx.w1.degree(), ctx.w2.degree(), w3.degree()];
        let mut bundle = ConstantsBundle::new(&params, tau, k, c0, Some(ctx.ball))?;
        if bundle.gn_constant.is_none() && params.mode != Mode::LogSobolevLimit {
            match family_gn_constant(&ctx.w1, &ctx.w2, &bundle, &params, &ctx.cone, &ctx.grid, 120) {
                Ok(fam) => {
                    bundle.gn_constant = Some(fam.constant);
                    bundle.provenance.insert(
                        "gn_constant".into(),
                        "(C_{K,L,M,C₀}·min over profiles of the G-functional)^(1/(αγM+L))".into(),
                    );
                }
                Err(e) => {
                    bundle.provenance.insert("gn_constant".into(), format!("unavailable: {e}"));
                }
            }
        }
        bundle
    };
    Envelope::new("constants", &config, true, &bundle, !args.no_timestamp).emit()?;
    Ok(true)
}

fn check_condition(args: &RunArgs) -> Result<bool> {
    let config = args.load()?;
    let params = config.params()?;
    let ctx = Context::new(&config)?;
    let (c0, k) = ctx.condition_constants(&params)?;
    let report: ConditionCReport = check_condition_c(
        &ctx.w1,
        &ctx.w2,
        ctx.w3.as_ref(),
        c0,
        k,
        &params,
        &ctx.cone,
        config.samples,
        config.seed,
    )?;
    let pass = report.pass;
    Envelope::new("check-condition", &config, pass, &report, !args.no_timestamp).emit()?;
    Ok(pass)
}

fn verify(args: &RunArgs) -> Result<bool> {
    let config = args.load()?;
    let ctx = Context::new(&config)?;
    let (report, rows) = suites::verify(&ctx)?;
    let pass = report.failed == 0;
    if let Some(csv) = &config.outputs.csv {
        write_csv(&rows, Some(csv))?;
    }
    Envelope::new("verify", &config, pass, &report, !args.no_timestamp).emit()?;
    Ok(pass)
}

fn integrals(args: &RunArgs) -> Result<bool> {
    let config = args.load()?;
    let ctx = Context::new(&config)?;
    let report = suites::integrals(&ctx)?;
    let pass = report.worst_relative_error <= report.tolerance;
    Envelope::new("integrals", &config, pass, &report, !args.no_timestamp).emit()?;
    Ok(pass)
}

fn sweep(args: &RunArgs) -> Result<bool> {
    let config = args.load()?;
    let ctx = Context::new(&config)?;
    let (rows, ok) = suites::sweep(&ctx)?;
    let path = config.outputs.csv.clone().or_else(|| config.outputs.report.clone());
    write_csv(&rows, path.as_deref())?;
    Ok(ok)
}
