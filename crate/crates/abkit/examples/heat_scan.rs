use abkit::cli::commands::{default_pairs, log_times};
use abkit::cli::TolProfile;
use abkit::geometry::FluxParam;
use abkit::kernel::heat_ratio_scan;

// t²|e^{-tL_A}(x,y)| stays under the Gaussian-free bound at every time.
fn main() -> abkit::Result<()> {
    let pairs = default_pairs(TolProfile::Fast);
    let rep = heat_ratio_scan(FluxParam::new(0.5)?, &log_times(0.01, 10.0, 9), &pairs, 1e-12)?;
    for r in &rep.rows {
        println!("t={:<8.4} pair {} value {:.6e} bound {:.6e} {}", r.params[0], r.params[1], r.measured, r.bound, if r.pass { "ok" } else { "OVER" });
    }
    Ok(())
}
