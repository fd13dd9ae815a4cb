//! Mixed-norm ratios ‖e^{-itL}u₀‖_{L^q_t L^r_x}/‖u₀‖ over random Gaussian
//! data, on the two window sets used for growth detection.

use abkit::estimates::{canonical_pairs, gaussian_family, strichartz_scan, StrichartzOptions};
use abkit::geometry::FluxParam;

fn main() -> abkit::Result<()> {
    let data = gaussian_family(3, 7, (0.7, 1.0), 0.6);
    let wave = gaussian_family(3, 8, (0.8, 1.0), 0.4);
    let opts = StrichartzOptions { windows: vec![4.0, 8.0], wave_windows: vec![3.0, 6.0], samples_per_scale: 8.0, ..Default::default() };
    let scan = strichartz_scan(FluxParam::new(0.5)?, &data, &wave, &canonical_pairs(), &opts)?;
    for (pair, c) in &scan.constants {
        println!("{pair:<12} max ratio {c:.4}");
    }
    println!("growth between last two windows {:.2}%", 100.0 * scan.max_growth());
    println!("(inf,2) unitarity deviation {:.1e}, rescaling deviation {:.1e}", scan.unitarity_dev, scan.scaling_dev);
    Ok(())
}
