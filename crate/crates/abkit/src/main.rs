use abkit::cli::{self, Command, RunConfig};
use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Fast,
    Strict,
}

/// Aharonov-Bohm kernel, spectral and dispersive verification runs.
#[derive(Parser)]
#[command(name = "ab-kit", version)]
struct Args {
    /// One of: kernel-eval, dispersive-scan, heat-scan, spectral-consistency,
    /// wave-localized-scan, evolve-linear, evolve-nls, strichartz-scan,
    /// sobolev-scan, square-scan, reduction-check, morawetz, decay-scan.
    command: String,
    /// key = value config file with [run], [grid], [scan], [tol] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default out/<command>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the random data families.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (falls back to AB_KIT_WORKERS, then 1).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    tol_profile: Option<Profile>,
    /// Flux α.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Extra settings as section.key=value, e.g. --set scan.dt=0.05.
    #[arg(long = "set")]
    sets: Vec<String>,
}

fn build(args: &Args) -> abkit::Result<RunConfig> {
    let command: Command = args.command.parse()?;
    let mut cfg = match &args.config {
        Some(p) => {
            let c = cli::load_config(p)?;
            if c.command != command {
                return Err(abkit::Error::config(format!("config is for '{}', not '{command}'", c.command)));
            }
            c
        }
        None => RunConfig::new(command),
    };
    for s in &args.sets {
        let (k, v) = s.split_once('=').ok_or_else(|| abkit::Error::config(format!("malformed key '{s}' (expected section.key=value)")))?;
        let (sec, key) = k.trim().split_once('.').ok_or_else(|| abkit::Error::config(format!("malformed key '{}'", k.trim())))?;
        cfg.set(sec, key, v.trim())?;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = Some(w);
    }
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(p) = args.tol_profile {
        cfg.tol_profile = match p {
            Profile::Fast => cli::TolProfile::Fast,
            Profile::Strict => cli::TolProfile::Strict,
        };
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match build(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ab-kit: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let status = cli::run(&cfg);
    if let Some(o) = &status.outcome {
        let r = &o.report;
        let passed = r.rows.iter().filter(|x| x.pass).count();
        println!("{}: {passed}/{} rows pass", r.name, r.rows.len());
        for (k, v) in &o.summary {
            println!("  {k}: {v}");
        }
    }
    if let Some(e) = &status.error {
        eprintln!("ab-kit: {e}");
    }
    println!("wrote {}", cfg.out.display());
    ExitCode::from(status.code as u8)
}
