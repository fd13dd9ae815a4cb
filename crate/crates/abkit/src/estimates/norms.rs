//! L^q_t L^r_x norms from sampled spatial norms.

use super::admissible::Exponent;
use crate::error::{Error, Result};
use crate::evolve::observables::integrate_physical;
use crate::evolve::{ModeField, PartialWave};

/// (∫|u|^r)^{1/r} on the physical grid; r = ∞ gives the sup over nodes.
pub fn lr_norm(pw: &PartialWave, u: &ModeField, r: f64) -> Result<f64> {
    if r.is_infinite() {
        return Ok(u.data.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let s = integrate_physical(pw, u, |_, _, _, v| {
        let m = v.norm_sqr();
        if m > 0.0 {
            m.powf(0.5 * r)
        } else {
            0.0
        }
    })?;
    Ok(s.powf(1.0 / r))
}

/// Composite Simpson on uniform samples; an odd interval count closes with
/// the 3/8 rule on the last three intervals.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        3 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals % 2 == 0 { (n - 1, 0.0) } else { (n - 4, 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1])) };
            if even_end == 0 {
                return tail;
            }
            let mut s = f[0] + f[even_end];
            for (i, v) in f.iter().enumerate().take(even_end).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            s * h / 3.0 + tail
        }
    }
}

/// ‖u‖_{L^q(window; L^r)} from samples `lr[i] = ‖u(times[i])‖_r`.
///
/// Samples inside the window must be uniformly spaced. The accuracy check
/// compares Simpson at spacing h and 2h and rejects windows where the
/// difference exceeds 1% of the value.
pub fn spacetime_norm(times: &[f64], lr: &[f64], q: Exponent, window: (f64, f64)) -> Result<f64> {
    if times.len() != lr.len() {
        return Err(Error::config("times and norms differ in length"));
    }
    let eps = 1e-9 * (window.1 - window.0).abs().max(1.0);
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= window.0 - eps && times[i] <= window.1 + eps).collect();
    if idx.is_empty() {
        return Err(Error::config(format!("no samples in window [{}, {}]", window.0, window.1)));
    }
    let vals: Vec<f64> = idx.iter().map(|&i| lr[i]).collect();
    if q.is_infinite() {
        return Ok(vals.iter().cloned().fold(0.0, f64::max));
    }
    if idx.len() < 5 {
        return Err(Error::accuracy("window has fewer than five samples", f64::NAN, f64::NAN));
    }
    let h = times[idx[1]] - times[idx[0]];
    for w in idx.windows(2) {
        if ((times[w[1]] - times[w[0]]) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::config("samples must be uniformly spaced"));
        }
    }
    if (times[idx[0]] - window.0).abs() > eps || (times[*idx.last().unwrap()] - window.1).abs() > eps {
        return Err(Error::config(format!("window [{}, {}] does not start and end on samples", window.0, window.1)));
    }
    let qv = q.value();
    let f: Vec<f64> = vals.iter().map(|v| v.powf(qv)).collect();
    let fine = simpson(&f, h);
    let coarse_f: Vec<f64> = f.iter().step_by(2).cloned().collect();
    // Coarse rule covers [t0, t0 + 2h·(m−1)]; finish with a trapezoid panel if needed.
    let mut coarse = simpson(&coarse_f, 2.0 * h);
    if f.len() % 2 == 0 {
        coarse += 0.5 * h * (f[f.len() - 2] + f[f.len() - 1]);
    }
    let value = fine.powf(1.0 / qv);
    let err = (fine - coarse).abs() / 15.0;
    if err > 0.01 * fine.abs() {
        return Err(Error::accuracy("undersampled time window", value, err.powf(1.0 / qv)));
    }
    Ok(value)
}
