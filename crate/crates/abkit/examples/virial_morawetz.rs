//! Second time derivative of the virial functional against the commutator
//! right-hand side, and the running Morawetz integral.

use abkit::evolve::{morawetz_diagnostics, NlsExperiment};

fn main() -> abkit::Result<()> {
    let base = NlsExperiment::virial();
    let coarse = morawetz_diagnostics(&base.clone().run()?)?;
    let fine = morawetz_diagnostics(&base.clone().with_dt(base.params.dt / 2.0).run()?)?;
    let shared = &coarse.times[1..coarse.times.len() - 1];
    let (a, b) = (coarse.residual_on(shared), fine.residual_on(shared));
    println!("residual dt={}: {a:.3e}", base.params.dt);
    println!("residual dt={}: {b:.3e}  (ratio {:.2})", base.params.dt / 2.0, a / b);
    for t in [0.25, 0.5, 1.0] {
        println!("Morawetz integral up to t={t}: {:.6e}", fine.cumulative_at(t));
    }
    Ok(())
}
