//! t²|K(t;x,y)| against the flux-dependent bound over a log grid of times.

use abkit::cli::commands::{default_pairs, log_times};
use abkit::cli::TolProfile;
use abkit::geometry::FluxParam;
use abkit::kernel::dispersive_ratio_scan;

fn main() -> abkit::Result<()> {
    let times = log_times(0.1, 10.0, 11);
    let pairs = default_pairs(TolProfile::Strict);
    for alpha in [0.0, 0.5] {
        let rep = dispersive_ratio_scan(FluxParam::new(alpha)?, &times, &pairs, 1e-11)?;
        println!("alpha = {alpha}: {}/{} rows under the bound, max ratio {:.4}", rep.rows.iter().filter(|r| r.pass).count(), rep.rows.len(), rep.max_ratio());
        for r in rep.rows.iter().filter(|r| r.params[1] == 0.0) {
            println!("  t={:<8.4} t^2|K| = {:.6e}  bound {:.6e}", r.params[0], r.measured, r.bound);
        }
    }
    println!("1/(16 pi^2) = {:.6e}", 1.0 / (16.0 * std::f64::consts::PI.powi(2)));
    Ok(())
}
