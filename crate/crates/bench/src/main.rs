use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qslice_bench::{
    cmd_generate, cmd_report, cmd_run, cmd_transfer, exit, parse_p_range, Algorithm, BenchError,
    ExperimentConfig, GenerateConfig,
};

#[derive(Parser)]
#[command(name = "qslice-bench", version, about = "Sliced QAOA experiments on vehicle routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random routing instances as JSON.
    Generate {
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Customers per instance.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Vehicles per instance.
        #[arg(long = "vehicles", short = 'A', default_value_t = 2)]
        vehicles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20.0)]
        sigma: f64,
        #[arg(long, default_value_t = 50)]
        grid_half: i64,
        #[arg(long, short, default_value = "instances")]
        output: PathBuf,
    },
    /// Train every (instance, algorithm, p) and write results.csv.
    Run(ExperimentArgs),
    /// Evaluate pQAOA-trained angles on the full model.
    Transfer(ExperimentArgs),
    /// Summarize a results.csv.
    Report {
        #[arg(long, short)]
        input: PathBuf,
        /// Defaults to the input's directory.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// e.g. "1..3" or "1,2,4".
    #[arg(long)]
    p_range: Option<String>,
    /// Comma-separated subset of qaoa, pqaoa-multi, pqaoa-single.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Instance file glob (repeatable); replaces the configured globs.
    #[arg(long)]
    instances: Option<Vec<String>>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    subsamples: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    final_samples: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(self) -> Result<ExperimentConfig, BenchError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = &self.p_range {
            cfg.p_range = parse_p_range(r)?;
        }
        if let Some(list) = &self.algorithms {
            cfg.algorithms = list.iter().map(|a| Algorithm::parse(a.trim())).collect::<Result<_, _>>()?;
        }
        if let Some(globs) = self.instances {
            cfg.instances = globs;
        }
        if let Some(s) = self.shots {
            cfg.training.shots_per_eval = Some(s);
        }
        if let Some(m) = self.subsamples {
            cfg.training.subsamples_per_slice = m;
        }
        if let Some(it) = self.max_iters {
            cfg.training.max_iters = it;
        }
        if let Some(f) = self.final_samples {
            cfg.final_samples = f;
        }
        if let Some(o) = self.output {
            cfg.output_dir = o;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn partial_or_success(skipped: usize) -> u8 {
    if skipped > 0 {
        eprintln!("{skipped} item(s) skipped; see skip_reason");
        exit::PARTIAL
    } else {
        exit::SUCCESS
    }
}

fn dispatch(cli: Cli) -> Result<u8, BenchError> {
    match cli.command {
        Command::Generate {
            count,
            n,
            vehicles,
            seed,
            sigma,
            grid_half,
            output,
        } => {
            let out = cmd_generate(&GenerateConfig {
                count,
                n,
                vehicles,
                seed,
                sigma,
                grid_half,
                output_dir: output,
            })?;
            print!("{}", out.table);
            println!("wrote {} instance(s)", out.files.len());
            Ok(exit::SUCCESS)
        }
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let out = cmd_run(&cfg)?;
            println!(
                "{} record(s) written to {}",
                out.records.len(),
                cfg.output_dir.join("results.csv").display()
            );
            Ok(partial_or_success(out.skipped()))
        }
        Command::Transfer(args) => {
            let cfg = args.resolve()?;
            let out = cmd_transfer(&cfg)?;
            for s in &out.summary {
                println!(
                    "{:<13} p={} pairs={} mean|Δratio|={}",
                    s.algorithm,
                    s.p,
                    s.pairs,
                    s.mean_abs_diff.map_or("-".into(), |d| format!("{d:.4}"))
                );
            }
            Ok(partial_or_success(out.skipped()))
        }
        Command::Report { input, output } => {
            let dir = output.unwrap_or_else(|| input.parent().map(PathBuf::from).unwrap_or_default());
            let out = cmd_report(&input, &dir)?;
            for g in &out.summary {
                println!(
                    "{:<20} p={} n={:<3} mean={:.4} median={:.4} [{:.4}, {:.4}]",
                    g.algorithm, g.p, g.count, g.mean, g.median, g.min, g.max
                );
            }
            for (line, err) in &out.malformed {
                eprintln!("excluded malformed row at line {line}: {err}");
            }
            Ok(exit::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::CONFIG)
        }
    }
}
