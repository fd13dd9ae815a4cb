//! Rebuild the propagator from the spectral measure (Stone's formula with Abel
//! regularization) and compare against the closed-form kernel.

use abkit::geometry::{CylPoint4, FluxParam};
use abkit::spectral::measure_kernel_consistency;
use std::time::Instant;

fn main() -> abkit::Result<()> {
    let flux = FluxParam::new(0.5)?;
    let configs = [
        (1.0, CylPoint4::new(1.0, 0.4, 0.1, 0.0), CylPoint4::new(0.7, 2.9, -0.2, 0.3)),
        (0.5, CylPoint4::new(1.5, 5.5, 0.0, 0.5), CylPoint4::new(0.9, 0.2, 0.0, 0.0)),
        (2.0, CylPoint4::new(0.6, 1.0, 0.3, 0.3), CylPoint4::new(1.2, 4.0, 0.0, -0.4)),
    ];
    println!("{:>6} {:>28} {:>28} {:>10} {:>10}", "t", "reconstructed", "kernel", "rel_dev", "rel_reg");
    for (t, x, y) in &configs {
        let clock = Instant::now();
        let row = measure_kernel_consistency(flux, *t, x, y, 0.08, 4, 1e-10)?;
        println!(
            "{:>6.2} {:>28.10} {:>28.10} {:>10.2e} {:>10.2e}  ({:.1}s)",
            t,
            row.reconstructed,
            row.kernel,
            row.rel_dev,
            row.rel_dev_regularized,
            clock.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
