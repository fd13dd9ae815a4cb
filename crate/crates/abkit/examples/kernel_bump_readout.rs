//! Evolve a narrow heat bump through the partial-wave pipeline and read it out
//! against the closed-form propagator.

use abkit::evolve::{kernel_bump_check, GridSpec};
use abkit::geometry::{CylPoint4, FluxParam};
use std::time::Instant;

fn main() -> abkit::Result<()> {
    let grid = GridSpec { r_max: 11.0, n_r: 72, k_max: 16, l: 7.0, n_t: 48, dt: 1e-2, r_min: 1e-6, rho_max: None, sigma_ref: 0.5 };
    let y = CylPoint4::new(1.0, 0.0, 0.0, 0.0);
    let nodes = [(3usize, 20usize, 24 * 48 + 24), (12, 24, 25 * 48 + 22), (28, 15, 22 * 48 + 26)];
    for alpha in [0.0, 0.5] {
        let clock = Instant::now();
        let rows = kernel_bump_check(&grid, FluxParam::new(alpha)?, &y, 0.2, &[0.125, 0.25, 0.5], &nodes, 1e-12)?;
        for r in &rows {
            println!(
                "alpha={alpha} t={:<5} r={:.3} th={:.3} x3={:+.3} x4={:+.3}  rel_dev={:.2e} width_dev={:.2e}",
                r.t, r.x.r, r.x.theta, r.x.x3, r.x.x4, r.rel_dev, r.width_dev
            );
        }
        println!("  ({:.1}s)", clock.elapsed().as_secs_f64());
    }
    Ok(())
}
