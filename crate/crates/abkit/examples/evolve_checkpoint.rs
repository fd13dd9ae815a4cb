//! Exact linear evolution in the partial-wave basis, then a checkpoint
//! written and read back bit for bit.

use abkit::evolve::{Checkpoint, GridSpec, PartialWave, RegularGaussian};
use abkit::geometry::{CylPoint4, FluxParam};

fn main() -> abkit::Result<()> {
    let grid = GridSpec { r_max: 10.0, n_r: 40, k_max: 3, l: 10.0, n_t: 32, dt: 0.1, r_min: 1e-6, rho_max: None, sigma_ref: 1.0 };
    let pw = PartialWave::new(&grid, FluxParam::new(0.5)?)?;
    let u0 = RegularGaussian::new(1.0, 1.0, CylPoint4::new(0.5, 0.0, 0.3, 0.0)).sample(&pw);
    let mut u = u0.clone();
    pw.decompose(&mut u)?;
    for step in 1..=4 {
        pw.linear_evolve(&mut u, 0.25)?;
        let mut phys = u.clone();
        pw.synthesize(&mut phys)?;
        println!("t = {:.2}  |u| / |u0| - 1 = {:+.1e}", 0.25 * step as f64, pw.norm(&phys) / pw.norm(&u0) - 1.0);
    }
    pw.synthesize(&mut u)?;
    let path = std::env::temp_dir().join("abkit_example_checkpoint.bin");
    let cp = Checkpoint { grid, exponent: f64::NAN, time: 1.0, field: u };
    cp.write(&path)?;
    let back = Checkpoint::read(&path)?;
    println!("wrote {} ({} bytes), identical on read: {}", path.display(), std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0), back.field == cp.field);
    Ok(())
}
