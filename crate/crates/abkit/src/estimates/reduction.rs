//! Finite-difference check of H_{A,2}u(x₁, x₂) = L_A v(y₁, y₂).
//!
//! Both operators are written in the library's convention (i∇ + A)², the
//! identity holds for either sign as long as both sides share it:
//! (i∇ + A)²w = −Δw + 2iA·∇w + |A|²w, since both potentials are divergence free.
//! The pair potentials are F₁ = α(−(x₁₂ − x₂₂), x₁₁ − x₂₁)/|x₁ − x₂|² and F₂ = −F₁.

use crate::error::{Error, Result};
use crate::geometry::{pair_change_of_variables, pair_inverse, potential_a, FluxParam, PairConfig};
use crate::report::ScanReport;
use num_complex::Complex64 as C;

fn pair_potential(flux: FluxParam, c: &PairConfig) -> Result<[f64; 2]> {
    let d = [c.x1[0] - c.x2[0], c.x1[1] - c.x2[1]];
    let d2 = d[0] * d[0] + d[1] * d[1];
    if d2 == 0.0 {
        return Err(Error::Singularity("pair configuration on the diagonal x₁ = x₂".into()));
    }
    Ok([-flux.alpha * d[1] / d2, flux.alpha * d[0] / d2])
}

/// Second-order central-difference (i∇ + A)²w at p for w on R⁴.
fn magnetic_laplacian<W: Fn([f64; 4]) -> C>(w: &W, p: [f64; 4], a: [f64; 4], h: f64) -> C {
    let c = w(p);
    let mut lap = C::new(0.0, 0.0);
    let mut adv = C::new(0.0, 0.0);
    for i in 0..4 {
        let mut pp = p;
        let mut pm = p;
        pp[i] += h;
        pm[i] -= h;
        let (fp, fm) = (w(pp), w(pm));
        lap += (fp - 2.0 * c + fm) / (h * h);
        adv += a[i] * (fp - fm) / (2.0 * h);
    }
    let a2: f64 = a.iter().map(|v| v * v).sum();
    -lap + C::new(0.0, 2.0) * adv + a2 * c
}

/// (H_{A,2}u, L_A v) at one configuration, both by finite differences.
pub fn reduction_sides<U: Fn([f64; 4]) -> C>(flux: FluxParam, u: &U, c: &PairConfig, h: f64) -> Result<(C, C)> {
    if c.on_singular_set() {
        return Err(Error::Singularity("pair configuration on the diagonal x₁ = x₂".into()));
    }
    let sep = ((c.x1[0] - c.x2[0]).powi(2) + (c.x1[1] - c.x2[1]).powi(2)).sqrt();
    if sep < 8.0 * h {
        return Err(Error::Singularity(format!("stencil of width {h} reaches the diagonal (|x₁ − x₂| = {sep})")));
    }
    let f1 = pair_potential(flux, c)?;
    let x = [c.x1[0], c.x1[1], c.x2[0], c.x2[1]];
    let lhs = magnetic_laplacian(u, x, [f1[0], f1[1], -f1[0], -f1[1]], h);
    let v = |y: [f64; 4]| {
        let pc = pair_inverse([y[0], y[1]], [y[2], y[3]]);
        u([pc.x1[0], pc.x1[1], pc.x2[0], pc.x2[1]])
    };
    let (y1, y2) = pair_change_of_variables(c);
    let y = [y1[0], y1[1], y2[0], y2[1]];
    let rhs = magnetic_laplacian(&v, y, potential_a(flux, y)?, h);
    Ok((lhs, rhs))
}

/// |H_{A,2}u − L_A v| / |L_A v| at step h.
pub fn reduction_deviation<U: Fn([f64; 4]) -> C>(flux: FluxParam, u: &U, c: &PairConfig, h: f64) -> Result<f64> {
    let (l, r) = reduction_sides(flux, u, c, h)?;
    Ok((l - r).norm() / r.norm().max(1e-300))
}

/// Deviation at h and h/2 for each sample; the row ratio is the observed
/// reduction factor and passes when the order log₂ lies in [1.8, 2.2].
pub fn reduction_identity_check<U: Fn([f64; 4]) -> C>(flux: FluxParam, u: &U, samples: &[PairConfig], h: f64) -> Result<ScanReport> {
    let mut rep = ScanReport::new("reduction_identity", &["sample", "h"]);
    for (i, c) in samples.iter().enumerate() {
        let coarse = reduction_deviation(flux, u, c, h)?;
        let fine = reduction_deviation(flux, u, c, 0.5 * h)?;
        let order = (coarse / fine).log2();
        rep.push(vec![i as f64, h], coarse, fine, (1.8..=2.2).contains(&order));
    }
    rep.meta("alpha", flux.alpha);
    rep.meta("order window", "[1.8, 2.2]");
    Ok(rep)
}

/// Observed orders log₂(dev(h)/dev(h/2)) from a report.
pub fn observed_orders(rep: &ScanReport) -> Vec<f64> {
    rep.rows.iter().map(|r| r.ratio.log2()).collect()
}

/// Complex Gaussian test function u(x₁, x₂) with a phase, smooth off the diagonal.
pub fn gaussian_test_function(x: [f64; 4]) -> C {
    let c = [0.3, -0.2, -0.4, 0.5];
    let d2: f64 = (0..4).map(|i| (x[i] - c[i]).powi(2)).sum();
    C::from_polar((-0.5 * d2).exp(), 0.7 * x[0] - 0.3 * x[3])
}

/// Five generic configurations away from the diagonal.
pub fn default_samples() -> Vec<PairConfig> {
    vec![
        PairConfig { x1: [1.0, 0.2], x2: [-0.3, 0.4] },
        PairConfig { x1: [0.5, -0.7], x2: [0.1, 0.6] },
        PairConfig { x1: [-0.8, 0.3], x2: [0.6, -0.2] },
        PairConfig { x1: [0.2, 1.1], x2: [0.0, -0.1] },
        PairConfig { x1: [1.3, -0.4], x2: [0.4, 0.5] },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_quadratic_is_exact() {
        let u = |x: [f64; 4]| C::new(x[0] * x[0] - 2.0 * x[1] * x[2] + 0.5 * x[3] * x[3], x[0] * x[3]);
        let f = FluxParam::new(0.0).unwrap();
        for c in default_samples() {
            let (l, r) = reduction_sides(f, &u, &c, 1e-3).unwrap();
            // −Δu = −(2 + 1) for the real part
            assert!((l - C::new(-3.0, 0.0)).norm() < 1e-6 && (l - r).norm() < 1e-6, "{l} {r}");
        }
    }

    #[test]
    fn second_order_at_half_flux() {
        let f = FluxParam::new(0.5).unwrap();
        let rep = reduction_identity_check(f, &gaussian_test_function, &default_samples(), 0.08).unwrap();
        for (o, row) in observed_orders(&rep).iter().zip(&rep.rows) {
            assert!((o - 2.0).abs() < 0.2, "order {o}, row {row:?}");
        }
    }

    #[test]
    fn diagonal_is_rejected() {
        let f = FluxParam::new(0.5).unwrap();
        let c = PairConfig { x1: [0.4, 0.4], x2: [0.4, 0.4] };
        assert!(matches!(reduction_sides(f, &gaussian_test_function, &c, 1e-2), Err(Error::Singularity(_))));
    }
}
