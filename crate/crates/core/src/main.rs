use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nlsdamp::analysis::{ode_oracle_exact, ode_oracle_regularized};
use nlsdamp::dynamics::DampingParams;
use nlsdamp::experiments::{run_suite, ScenarioKind, Status, SuiteResult, Verdict};
use nlsdamp::io::{load_config, parse_config, write_report_file, DirectorySink, EnvironmentStamp, ReportDocument, RunConfig};
use nlsdamp::{Error, Result};

#[derive(Parser)]
#[command(name = "nlsdamp", version, about = "Damped Schrödinger simulations and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArg {
    /// Configuration file.
    #[arg(value_name = "CONFIG", required_unless_present = "config", conflicts_with = "config")]
    path: Option<PathBuf>,
    /// Configuration file, as an option.
    #[arg(long = "config", value_name = "CONFIG")]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn path(&self) -> &Path {
        self.path.as_deref().or(self.config.as_deref()).expect("clap requires one of them")
    }
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker thread limit (overrides the config).
    #[arg(long)]
    threads: Option<usize>,
    /// Repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Run the single scenario of a config file.
    Run {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every scenario of a config file.
    Suite {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Largest Nash quotients over random ensembles.
    NashBench {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        orders: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the scalar damping ODE y' = -2γ y/(y+δ)^{α/2}.
    OdeOracle {
        #[arg(long)]
        y0: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
    /// Turn the single scenario of a config into a sweep over one parameter.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    Delta,
    Gamma,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Run { config, output } => {
            let config = config.path();
            let (text, cfg) = read_config(config)?;
            if cfg.scenarios.len() != 1 {
                return Err(Error::Argument(format!(
                    "`run` takes a config with one scenario, {} has {}; use `suite`",
                    config.display(),
                    cfg.scenarios.len()
                )));
            }
            execute(&text, cfg, &output)
        }
        Command::Suite { config, output } => {
            let (text, cfg) = read_config(config.path())?;
            execute(&text, cfg, &output)
        }
        Command::NashBench {
            count,
            seed,
            alphas,
            orders,
            dims,
            points,
            output,
        } => {
            let text = format!(
                "[scenario]\nname = nash_bench\nkind = nash_ensemble\n[ensemble]\ncount = {count}\nseed = {seed}\nalphas = {}\norders = {}\ndims = {}\npoints = {points}\n",
                join(&alphas),
                join(&orders),
                join(&dims),
            );
            let cfg = parse_config(&text)?;
            execute(&text, cfg, &output)
        }
        Command::OdeOracle {
            y0,
            alpha,
            gamma,
            t,
            delta,
        } => {
            DampingParams::new(gamma, alpha, delta)?;
            if !(y0 >= 0.0 && y0.is_finite() && t >= 0.0 && t.is_finite()) {
                return Err(Error::Argument(format!("need y0 >= 0 and t >= 0, got y0 = {y0}, t = {t}")));
            }
            let y = if delta > 0.0 {
                ode_oracle_regularized(y0, alpha, gamma, delta, t)?
            } else {
                ode_oracle_exact(y0, alpha, gamma, t)
            };
            println!("{y}");
            Ok(true)
        }
        Command::Sweep {
            config,
            param,
            values,
            output,
        } => {
            let config = config.path();
            let (text, mut cfg) = read_config(config)?;
            if cfg.scenarios.len() != 1 {
                return Err(Error::Argument(format!(
                    "`sweep` takes a config with one scenario, {} has {}",
                    config.display(),
                    cfg.scenarios.len()
                )));
            }
            let s = &mut cfg.scenarios[0];
            s.checks.clear();
            match param {
                SweepParam::Delta => {
                    s.kind = ScenarioKind::RegularizedSweep;
                    s.deltas = values;
                }
                SweepParam::Gamma => {
                    s.kind = ScenarioKind::GammaSweep;
                    s.gammas = values;
                }
            }
            s.validate()?;
            execute(&text, cfg, &output)
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn read_config(path: &Path) -> Result<(String, RunConfig)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let cfg = load_config(path).map_err(|e| match e {
        Error::Parse { .. } => Error::Config(format!("{}: {e}", path.display())),
        other => other,
    })?;
    Ok((text, cfg))
}

fn execute(text: &str, mut cfg: RunConfig, args: &OutputArgs) -> Result<bool> {
    if let Some(dir) = &args.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(t) = args.threads {
        cfg.output.threads = Some(t);
    }
    cfg.output.verbosity = cfg.output.verbosity.max(args.verbose);
    let dir = cfg.output.dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let sink = DirectorySink::new(&dir);
    let suite = run_suite(&cfg.scenarios, cfg.output.threads, &sink)?;
    let report = ReportDocument::new(text, &cfg, &suite, EnvironmentStamp::current());
    let report_path = dir.join("report.json");
    write_report_file(&report_path, &report)?;
    print_summary(&suite, cfg.output.verbosity);
    println!("report: {}", report_path.display());
    Ok(suite.passed())
}

fn print_summary(suite: &SuiteResult, verbosity: u8) {
    for s in &suite.scenarios {
        let status = match s.status {
            Status::Passed => "PASS",
            Status::Failed => "FAIL",
            Status::Errored => "ERROR",
        };
        println!("{status:5} {} ({}, {:.2}s)", s.name, s.kind, s.duration_s);
        if let Some(e) = &s.error {
            println!("      {e}");
        }
        for c in &s.checks {
            if verbosity == 0 && c.verdict != Verdict::Fail {
                continue;
            }
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Reported => "info",
            };
            let run = c.run.as_deref().map(|r| format!(" [{r}]")).unwrap_or_default();
            let value = c.value.map(|x| format!(" = {x:e}")).unwrap_or_default();
            println!("      {v} {}{run}{value}", c.check);
            if verbosity >= 2 {
                println!("           {}", c.detail);
            }
        }
        if verbosity >= 2 {
            for (k, v) in &s.values {
                println!("      value {k} = {v:e}");
            }
        }
    }
    let (pass, fail, reported) = suite.verdict_counts();
    println!(
        "{} checks passed, {fail} failed, {reported} reported; suite {}",
        pass,
        if suite.passed() { "passed" } else { "failed" }
    );
}
