//! Split-step NLS with mass and energy monitored at each sample.
//!
//! Runs a small problem by default; pass `full` for the α = 1/2, p = 5/2,
//! T = 10 experiment (about a minute and a half).

use abkit::evolve::{GridSpec, NlsExperiment, RegularGaussian};
use abkit::geometry::CylPoint4;

fn main() -> abkit::Result<()> {
    let exp = if std::env::args().any(|a| a == "full") {
        NlsExperiment::conservation()
    } else {
        let mut e = NlsExperiment::virial();
        e.grid = GridSpec { r_max: 10.0, n_r: 40, k_max: 3, l: 10.0, n_t: 32, dt: 0.1, r_min: 1e-6, rho_max: None, sigma_ref: 1.0 };
        e.params.virial = false;
        e.datum = RegularGaussian::new(0.3, 1.0, CylPoint4::new(0.5, 0.0, 0.3, 0.0));
        e
    };
    for dt in [exp.params.dt, exp.params.dt / 2.0] {
        let traj = exp.clone().with_dt(dt).run()?;
        for s in traj.samples.iter().step_by((traj.samples.len() / 5).max(1)) {
            println!("t={:<6.2} mass {:.12}  energy {:.12}  outer-layer {:.1e}", s.obs.time, s.obs.mass, s.obs.energy, s.boundary_mass);
        }
        println!("dt={dt}: mass drift {:.1e}, energy drift {:.2e}\n", traj.mass_drift(), traj.energy_drift());
    }
    Ok(())
}
