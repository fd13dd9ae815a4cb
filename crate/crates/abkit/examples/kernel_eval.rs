//! Closed-form Schrödinger kernel of L_A against its angular mode sum, with
//! the A/B split of the planar factor.

use abkit::geometry::{CylPoint4, FluxParam};
use abkit::kernel::{mode_sum_kernel, propagator_kernel, KernelTime};

fn main() -> abkit::Result<()> {
    let x = CylPoint4::new(1.0, 0.4, 0.1, 0.0);
    let y = CylPoint4::new(0.7, 2.9, -0.2, 0.3);
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        let flux = FluxParam::new(alpha)?;
        for t in [0.3, 1.0, 2.0] {
            let k = propagator_kernel(flux, t, &x, &y, 1e-13)?;
            let m = mode_sum_kernel(flux, KernelTime::Schrodinger(t), &x, &y)?;
            println!(
                "alpha={alpha:<4} t={t:<3}  K = {:+.10e} {:+.10e}i  mode sum rel diff {:.1e}",
                k.value.re,
                k.value.im,
                (k.value - m.value).norm() / m.value.norm()
            );
        }
    }
    Ok(())
}
