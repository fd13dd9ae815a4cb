//! ‖u(t)‖_{L^4} for the free flow of a Gaussian: the log-log slope tends to −1.

use abkit::estimates::decay_series;
use abkit::evolve::NlsExperiment;

fn main() -> abkit::Result<()> {
    let traj = NlsExperiment::free_decay().run()?;
    let series = decay_series(&traj, 4.0, None)?;
    for (t, v) in series.times.iter().zip(&series.norms) {
        println!("t={t:<5} |u|_4 = {v:.6e}");
    }
    println!("slope on [2, 4]: {:.3}", series.loglog_slope(2.0, 4.0)?);
    Ok(())
}
