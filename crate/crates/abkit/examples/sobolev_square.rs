//! ‖L_A^{s/2} f‖_p / ‖(-Δ)^{s/2} f‖_p and the Littlewood-Paley square-function
//! ratio over a family of smooth bumps.

use abkit::estimates::{bump_family, bump_grid, sobolev_equiv_ratio, square_function_ratio};
use abkit::geometry::FluxParam;

fn main() -> abkit::Result<()> {
    let fam = bump_family();
    let grid = bump_grid(&fam);
    let flux = FluxParam::new(0.5)?;
    for p in [2.0, 3.5] {
        let rep = sobolev_equiv_ratio(flux, 1.0, p, &fam, &grid)?;
        let r: Vec<String> = rep.rows.iter().map(|x| format!("{:.4}", x.ratio)).collect();
        println!("Sobolev s=1 p={p}: {}", r.join(" "));
    }
    let sq = square_function_ratio(flux, &[1.5, 2.0, 3.0], &fam, &grid)?;
    for r in &sq.rows {
        println!("square function p={} bump {}: {:.4}", r.params[0], r.params[1], r.ratio);
    }
    Ok(())
}
