//! Frequency-localized half-wave kernels, scaled by 2^{-3k/2}(2^{-k}+t)^{3/2}
//! so each dyadic shell is compared against the same constant.

use abkit::cli::commands::default_pairs;
use abkit::cli::TolProfile;
use abkit::geometry::FluxParam;
use abkit::spectral::wave_localized_scan;

fn main() -> abkit::Result<()> {
    let ks: Vec<i32> = (-1..=3).collect();
    let times = [0.0, 0.5, 1.0, 3.0, 6.0];
    let rep = wave_localized_scan(FluxParam::new(0.5)?, &ks, &times, &default_pairs(TolProfile::Fast), 1e-10)?;
    for &k in &ks {
        let line: Vec<String> =
            rep.rows.iter().filter(|r| r.params[0] == k as f64 && r.params[2] == 0.0).map(|r| format!("{:.3e}", r.measured)).collect();
        println!("k={k:+} {}", line.join("  "));
    }
    println!("all bounded: {}", rep.all_pass());
    Ok(())
}
