//! Build a run config in code, print it in the file format `ab-kit --config`
//! reads, and run it the way the binary does.

use abkit::cli::{run, Command, RunConfig, TolProfile};

fn main() -> abkit::Result<()> {
    let mut cfg = RunConfig::new(Command::DispersiveScan);
    cfg.tol_profile = TolProfile::Fast;
    cfg.out = std::env::temp_dir().join("abkit_example_dispersive");
    cfg.set("scan", "times", "0.5,1,2,4")?;
    cfg.set("run", "alpha", "0.25")?;
    let text = cfg.emit();
    println!("{text}");
    let status = run(&RunConfig::parse(&text)?);
    println!("exit code {}, outputs in {}", status.code, cfg.out.display());
    Ok(())
}
