//! Strang-split defocusing NLS u_t = i(L_A u + |u|^{p−1}u) and the
//! Morawetz/virial time series built from its samples.

use super::field::{ModeField, PartialWave};
use super::observables::{boundary_mass_fraction, observables, virial_terms, Observables, VirialTerms};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsParams {
    /// Exponent p ∈ (2, 3).
    pub p: f64,
    pub t_final: f64,
    pub dt: f64,
    /// Record a sample every this many steps.
    pub sample_every: usize,
    /// Morawetz weight regularization δ.
    pub delta_reg: f64,
    /// Evaluate the virial integrands at each sample.
    pub virial: bool,
    /// `false` drops the nonlinearity (linear flow, same bookkeeping).
    pub nonlinear: bool,
    /// Keep a physical snapshot every this many samples.
    pub snapshot_every: Option<usize>,
    /// Abort when the outer-layer mass fraction exceeds this.
    pub boundary_tol: f64,
}

impl NlsParams {
    pub fn new(p: f64, t_final: f64, dt: f64) -> Self {
        NlsParams {
            p,
            t_final,
            dt,
            sample_every: 1,
            delta_reg: 0.1,
            virial: false,
            nonlinear: true,
            snapshot_every: None,
            boundary_tol: 1e-6,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.nonlinear && !(self.p > 2.0 && self.p < 3.0) {
            return Err(Error::config(format!("exponent p={} outside (2, 3)", self.p)));
        }
        if !(self.dt > 0.0) || !(self.t_final >= 0.0) || self.sample_every == 0 {
            return Err(Error::config("need dt > 0, T >= 0 and sample_every >= 1"));
        }
        let n = self.t_final / self.dt;
        if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::config(format!("T={} is not a multiple of dt={}", self.t_final, self.dt)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    pub obs: Observables,
    pub boundary_mass: f64,
    pub virial: Option<VirialTerms>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: NlsParams,
    pub alpha: f64,
    pub samples: Vec<Sample>,
    pub snapshots: Vec<(f64, ModeField)>,
    pub final_field: ModeField,
}

impl Trajectory {
    /// max_t |M(t) − M(0)| / M(0).
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.samples[0].obs.mass;
        let d = self.samples.iter().map(|s| (s.obs.mass - m0).abs()).fold(0.0, f64::max);
        if m0 > 0.0 {
            d / m0
        } else {
            d
        }
    }

    /// max_t |E(t) − E(0)| / |E(0)|.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.samples[0].obs.energy;
        let d = self.samples.iter().map(|s| (s.obs.energy - e0).abs()).fold(0.0, f64::max);
        if e0 != 0.0 {
            d / e0.abs()
        } else {
            d
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.obs.time).collect()
    }

    /// ‖u(t)‖_{p+1} at each sample.
    pub fn lp1_norms(&self) -> Vec<f64> {
        let q = self.params.p + 1.0;
        self.samples.iter().map(|s| s.obs.potential_pp1.powf(1.0 / q)).collect()
    }
}

/// u ← u·e^{iτ|u|^{p−1}}, the exact flow of u_t = i|u|^{p−1}u.
fn nonlinear_phase(u: &mut ModeField, p: f64, tau: f64) -> Result<()> {
    let e = 0.5 * (p - 1.0);
    // p = 5/2 is the default; |u|^{3/2} without powf is markedly cheaper.
    let fast = e == 0.75;
    for v in u.data.iter_mut() {
        let m2 = v.norm_sqr();
        if !m2.is_finite() {
            return Err(Error::Stability("non-finite field value".into()));
        }
        if m2 > 0.0 {
            let w = if fast {
                let a = m2.sqrt();
                a * a.sqrt()
            } else {
                m2.powf(e)
            };
            let (s, c) = (tau * w).sin_cos();
            *v *= C::new(c, s);
        }
    }
    Ok(())
}

fn max_abs(u: &ModeField) -> f64 {
    u.data.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max).sqrt()
}

fn record(pw: &PartialWave, u: &ModeField, params: &NlsParams, t: f64) -> Result<Sample> {
    let mut m = u.clone();
    pw.decompose(&mut m)?;
    let mut obs = observables(pw, u, &m, params.p, t, params.delta_reg)?;
    if !params.nonlinear {
        // the linear flow conserves the kinetic part alone
        obs.energy = 0.5 * obs.kinetic;
    }
    let virial = if params.virial { Some(virial_terms(pw, u, &m, params.p, params.delta_reg, params.nonlinear)?) } else { None };
    let boundary_mass = boundary_mass_fraction(pw, u)?;
    if boundary_mass > params.boundary_tol {
        return Err(Error::domain(format!(
            "domain too small: outer-layer mass fraction {boundary_mass:e} at t={t} exceeds {:e}",
            params.boundary_tol
        )));
    }
    Ok(Sample { obs, boundary_mass, virial })
}

/// Strang splitting: half nonlinear phase, exact linear step e^{i dt L_A},
/// half nonlinear phase. Consecutive half phases commute with |u| and are
/// merged between samples.
pub fn nls_evolve(pw: &PartialWave, u0: &ModeField, params: &NlsParams) -> Result<Trajectory> {
    params.validate()?;
    if !u0.is_physical() {
        return Err(Error::config("initial datum must be physical samples"));
    }
    let p = params.p;
    let tau = if params.nonlinear { params.dt } else { 0.0 };
    let steps = params.steps();
    let guard = 1e6 * max_abs(u0).max(1e-300);
    let mut u = u0.clone();
    let mut samples = vec![record(pw, &u, params, 0.0)?];
    let mut snapshots = Vec::new();
    if params.snapshot_every.is_some() {
        snapshots.push((0.0, u.clone()));
    }
    let mut pending_half = true;
    for n in 1..=steps {
        if pending_half {
            nonlinear_phase(&mut u, p, 0.5 * tau)?;
        }
        pw.decompose(&mut u)?;
        pw.linear_evolve(&mut u, params.dt)?;
        pw.synthesize(&mut u)?;
        let t = n as f64 * params.dt;
        let sample_now = n % params.sample_every == 0 || n == steps;
        if sample_now {
            nonlinear_phase(&mut u, p, 0.5 * tau)?;
            if max_abs(&u) > guard {
                return Err(Error::Stability(format!("amplitude guard tripped at t={t}")));
            }
            samples.push(record(pw, &u, params, t)?);
            if let Some(k) = params.snapshot_every {
                if (samples.len() - 1) % k == 0 {
                    snapshots.push((t, u.clone()));
                }
            }
            pending_half = true;
        } else {
            nonlinear_phase(&mut u, p, tau)?;
            pending_half = false;
        }
    }
    Ok(Trajectory { params: params.clone(), alpha: pw.flux.alpha, samples, snapshots, final_field: u })
}

/// Virial and Morawetz time series from a trajectory sampled at uniform
/// spacing τ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorawetzSeries {
    pub times: Vec<f64>,
    pub phi: Vec<f64>,
    /// Central second difference of Φ_a at interior samples (NaN at the ends).
    pub phi_dd: Vec<f64>,
    pub rhs: Vec<f64>,
    /// ∫₀^t ∫ |u|^{p+1}/a_δ, trapezoid in time.
    pub cumulative: Vec<f64>,
}

impl MorawetzSeries {
    /// max over interior samples of |Φ'' − RHS| and of |RHS|. NaN when the
    /// trajectory carried no virial samples.
    pub fn residual(&self) -> (f64, f64) {
        let mut res: f64 = 0.0;
        let mut mag: f64 = 0.0;
        for i in 1..self.times.len().saturating_sub(1) {
            if self.rhs[i].is_nan() {
                return (f64::NAN, f64::NAN);
            }
            res = res.max((self.phi_dd[i] - self.rhs[i]).abs());
            mag = mag.max(self.rhs[i].abs());
        }
        (res, mag)
    }

    /// max |Φ'' − RHS| over the given times, each matched to the nearest
    /// interior sample. Comparing runs at different spacings on shared times
    /// isolates the O(τ²) behaviour.
    pub fn residual_on(&self, times: &[f64]) -> f64 {
        times
            .iter()
            .map(|&t| {
                let i = self.nearest(t).clamp(1, self.times.len().saturating_sub(2));
                (self.phi_dd[i] - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    fn nearest(&self, t: f64) -> usize {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Cumulative integral at the sample nearest to time t.
    pub fn cumulative_at(&self, t: f64) -> f64 {
        self.cumulative[self.nearest(t)]
    }
}

pub fn morawetz_diagnostics(traj: &Trajectory) -> Result<MorawetzSeries> {
    let n = traj.samples.len();
    if n < 3 {
        return Err(Error::config("need at least three samples"));
    }
    let times = traj.times();
    let tau = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - tau).abs() > 1e-9 * tau {
            return Err(Error::config("samples must be uniformly spaced"));
        }
    }
    let phi: Vec<f64> = traj.samples.iter().map(|s| s.obs.morawetz_phi).collect();
    let mut phi_dd = vec![f64::NAN; n];
    for i in 1..n - 1 {
        phi_dd[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (tau * tau);
    }
    let rhs = traj.samples.iter().map(|s| s.virial.map_or(f64::NAN, |v| v.rhs())).collect();
    let mut cumulative = vec![0.0; n];
    for i in 1..n {
        let (a, b) = (traj.samples[i - 1].obs.morawetz_density, traj.samples[i].obs.morawetz_density);
        cumulative[i] = cumulative[i - 1] + 0.5 * tau * (a + b);
    }
    Ok(MorawetzSeries { times, phi, phi_dd, rhs, cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{GridSpec, RegularGaussian};
    use crate::geometry::{CylPoint4, FluxParam};

    fn small() -> (PartialWave, ModeField) {
        let g = GridSpec { r_max: 10.0, n_r: 40, k_max: 3, l: 10.0, n_t: 32, sigma_ref: 1.0, ..GridSpec::default() };
        let pw = PartialWave::new(&g, FluxParam::new(0.5).unwrap()).unwrap();
        let u0 = RegularGaussian::new(1.0, 1.0, CylPoint4::new(0.5, 0.0, 0.0, 0.0)).sample(&pw);
        (pw, u0)
    }

    #[test]
    fn zero_datum_stays_zero() {
        let (pw, _) = small();
        let u0 = pw.zeros(crate::evolve::Space::Physical);
        let tr = nls_evolve(&pw, &u0, &NlsParams::new(2.5, 0.2, 0.1)).unwrap();
        assert!(tr.final_field.data.iter().all(|v| v.norm() == 0.0));
        assert_eq!(tr.mass_drift(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let (pw, u0) = small();
        assert!(matches!(nls_evolve(&pw, &u0, &NlsParams::new(3.5, 0.2, 0.1)), Err(Error::Config(_))));
        assert!(matches!(nls_evolve(&pw, &u0, &NlsParams::new(2.5, 0.25, 0.1)), Err(Error::Config(_))));
    }

    #[test]
    fn mass_exact_and_energy_second_order() {
        let (pw, u0) = small();
        let drift = |dt: f64| {
            let tr = nls_evolve(&pw, &u0, &NlsParams::new(2.5, 0.4, dt)).unwrap();
            assert!(tr.mass_drift() < 1e-12, "{}", tr.mass_drift());
            tr.energy_drift()
        };
        let (e1, e2) = (drift(0.1), drift(0.05));
        let ratio = e1 / e2;
        assert!(e1 > 0.0 && (3.0..5.0).contains(&ratio), "{e1} {e2}");
    }

    #[test]
    fn linear_mode_matches_exact_flow() {
        let (pw, u0) = small();
        let mut params = NlsParams::new(2.5, 0.3, 0.1);
        params.nonlinear = false;
        let tr = nls_evolve(&pw, &u0, &params).unwrap();
        let mut v = u0.clone();
        pw.decompose(&mut v).unwrap();
        pw.linear_evolve(&mut v, 0.3).unwrap();
        pw.synthesize(&mut v).unwrap();
        let mut d = tr.final_field.clone();
        d.axpy(C::new(-1.0, 0.0), &v);
        assert!(pw.norm(&d) < 1e-10 * pw.norm(&v));
        assert!(tr.energy_drift() < 1e-10);
    }
}
