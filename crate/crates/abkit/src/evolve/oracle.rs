//! Kernel read-out through the partial-wave pipeline.
//!
//! The bump is the heat kernel b = e^{−εL_A}δ_y, sampled from the closed form.
//! Its exact evolution is e^{itL_A}b = K(ε − it; ·, y), so the read-out at a
//! grid node is compared against the kernel at the complexified time, and
//! against the unregularized propagator times the bump mass to show how the
//! width limits a literal point-source comparison.

use super::field::PartialWave;
use super::grid::GridSpec;
use crate::error::Result;
use crate::geometry::{CylPoint4, FluxParam};
use crate::kernel::{heat_kernel, kernel_at, propagator_kernel, KernelTime};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct BumpReadout {
    pub t: f64,
    pub x: CylPoint4,
    pub readout: C,
    /// K(ε − it; x, y).
    pub kernel_regularized: C,
    /// K(−it; x, y).
    pub kernel: C,
    /// |readout − K(ε−it)| / |K(ε−it)|.
    pub rel_dev: f64,
    /// |readout − mass·K(−it)| / |K(−it)|, the bump-width error.
    pub width_dev: f64,
    pub bump_mass: f64,
}

/// Evolve the heat bump at `y` of width parameter `eps` and read it out at
/// the grid nodes `nodes` = (angle slot, radial node, transverse index).
pub fn kernel_bump_check(
    grid: &GridSpec,
    flux: FluxParam,
    y: &CylPoint4,
    eps: f64,
    times: &[f64],
    nodes: &[(usize, usize, usize)],
    tol: f64,
) -> Result<Vec<BumpReadout>> {
    let pw = PartialWave::new(grid, flux)?;
    let yp = CylPoint4::new(y.r, y.theta, 0.0, 0.0);
    let mut planar = vec![C::new(0.0, 0.0); grid.n_theta() * grid.n_r];
    for j in 0..grid.n_theta() {
        for i in 0..grid.n_r {
            let x = CylPoint4::new(pw.radial.r(i), grid.theta(j), 0.0, 0.0);
            planar[j * grid.n_r + i] = heat_kernel(flux, eps, &x, &yp, tol)?.value * (4.0 * PI * eps);
        }
    }
    let mut idx = 0usize;
    let mut m = pw.sample_product(
        |_, _| {
            let v = planar[idx];
            idx += 1;
            v
        },
        |x3, x4| C::new((-((x3 - y.x3).powi(2) + (x4 - y.x4).powi(2)) / (4.0 * eps)).exp() / (4.0 * PI * eps), 0.0),
    );
    let bump_mass = bump_integral(&pw, &m);
    pw.decompose(&mut m)?;
    let mut out = Vec::new();
    for &t in times {
        let mut e = m.clone();
        pw.linear_evolve(&mut e, t)?;
        pw.synthesize(&mut e)?;
        for &(j, i, c) in nodes {
            let x = pw.point(j, i, c);
            let readout = e.get(j, i, c);
            let kreg = kernel_at(flux, KernelTime::Complex(C::new(eps, -t)), &x, y, tol)?.value;
            let k = propagator_kernel(flux, t, &x, y, tol)?.value;
            out.push(BumpReadout {
                t,
                x,
                readout,
                kernel_regularized: kreg,
                kernel: k,
                rel_dev: (readout - kreg).norm() / kreg.norm(),
                width_dev: (readout - k * bump_mass).norm() / k.norm(),
                bump_mass,
            });
        }
    }
    Ok(out)
}

/// ∫ b dx on the physical grid.
fn bump_integral(pw: &PartialWave, m: &super::field::ModeField) -> f64 {
    let g = &pw.grid;
    let mut s = 0.0;
    for j in 0..g.n_theta() {
        for i in 0..g.n_r {
            let base = m.index(j, i, 0);
            let sum: f64 = m.data[base..base + g.n_c()].iter().map(|v| v.re).sum();
            s += sum * pw.radial.r_weight(i);
        }
    }
    s * std::f64::consts::TAU / g.n_theta() as f64 * g.h_t().powi(2)
}
