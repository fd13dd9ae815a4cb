use abkit::estimates::reduction::{default_samples, gaussian_test_function, observed_orders};
use abkit::estimates::reduction_identity_check;
use abkit::geometry::FluxParam;

// The change of variables that removes the flux from the planar Laplacian,
// checked by finite differences at two step sizes.
fn main() -> abkit::Result<()> {
    let rep = reduction_identity_check(FluxParam::new(0.5)?, &gaussian_test_function, &default_samples(), 0.08)?;
    for (row, order) in rep.rows.iter().zip(observed_orders(&rep)) {
        println!("sample {:?}: residual {:.3e}, observed order {order:.3}", row.params, row.measured);
    }
    Ok(())
}
