//! One function per subcommand. Each builds its inputs from the config and
//! the tolerance profile and returns the report plus headline figures.

use super::config::{Command, RunConfig, TolProfile};
use crate::error::{Error, Result};
use crate::estimates::{
    bump_family, bump_grid, canonical_pairs, gaussian_family, potential_decay_scan, reduction_identity_check, sobolev_equiv_ratio,
    square_function_ratio, strichartz_scan, StrichartzOptions,
};
use crate::estimates::reduction::{default_samples, gaussian_test_function, observed_orders};
use crate::evolve::{morawetz_diagnostics, Checkpoint, GridSpec, NlsExperiment, PartialWave, RegularGaussian};
use crate::geometry::{CylPoint4, FluxParam};
use crate::kernel::{dispersive_ratio_scan, heat_ratio_scan, mode_sum_kernel, propagator_kernel, KernelTime};
use crate::pool::{par_map, resolve_workers};
use crate::report::ScanReport;
use crate::spectral::{measure_kernel_consistency, wave_localized_scan};
use std::collections::BTreeMap;

pub struct Outcome {
    pub report: ScanReport,
    /// Headline figures copied into the manifest.
    pub summary: BTreeMap<String, String>,
    /// A tolerance target missed after the report was produced.
    pub failure: Option<Error>,
    pub checkpoint: Option<Checkpoint>,
}

impl Outcome {
    fn new(report: ScanReport) -> Self {
        Outcome { report, summary: BTreeMap::new(), failure: None, checkpoint: None }
    }

    fn note(&mut self, k: &str, v: impl ToString) {
        self.summary.insert(k.to_string(), v.to_string());
    }

    fn figure(&mut self, k: &str, v: f64) {
        self.summary.insert(k.to_string(), format!("{v:e}"));
    }
}

/// Generic off-axis pairs; the strict profile adds a near-antipodal one.
pub fn default_pairs(profile: TolProfile) -> Vec<(CylPoint4, CylPoint4)> {
    let mut v = vec![
        (CylPoint4::new(1.0, 0.4, 0.1, 0.0), CylPoint4::new(0.7, 2.9, -0.2, 0.3)),
        (CylPoint4::new(1.5, 5.5, 0.0, 0.5), CylPoint4::new(0.9, 0.2, 0.0, 0.0)),
        (CylPoint4::new(0.6, 1.0, 0.3, 0.3), CylPoint4::new(1.2, 4.0, 0.0, -0.4)),
    ];
    if profile == TolProfile::Strict {
        v.push((CylPoint4::new(2.0, 0.0, 0.0, 0.0), CylPoint4::new(2.0, 3.1, 0.0, 0.0)));
    }
    v
}

/// (t, x, y) triples for the spectral-measure check.
pub fn consistency_configs(profile: TolProfile) -> Vec<(f64, CylPoint4, CylPoint4)> {
    let mut v = vec![
        (1.0, CylPoint4::new(1.0, 0.4, 0.1, 0.0), CylPoint4::new(0.7, 2.9, -0.2, 0.3)),
        (0.5, CylPoint4::new(1.5, 5.5, 0.0, 0.5), CylPoint4::new(0.9, 0.2, 0.0, 0.0)),
        (2.0, CylPoint4::new(0.6, 1.0, 0.3, 0.3), CylPoint4::new(1.2, 4.0, 0.0, -0.4)),
    ];
    if profile == TolProfile::Strict {
        v.extend([
            (-0.8, CylPoint4::new(1.2, 1.0, 0.0, 0.0), CylPoint4::new(0.8, 1.5, 0.2, 0.0)),
            (1.5, CylPoint4::new(0.5, 0.0, 0.4, -0.2), CylPoint4::new(0.9, 3.0, 0.0, 0.3)),
            (0.3, CylPoint4::new(1.0, 2.0, 0.0, 0.0), CylPoint4::new(1.0, 5.0, 0.1, 0.1)),
        ]);
    }
    v
}

/// n points from a to b, geometrically spaced.
pub fn log_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1).max(1) as f64)).collect()
}

fn pick<T: Clone>(profile: TolProfile, fast: T, strict: T) -> T {
    match profile {
        TolProfile::Fast => fast,
        TolProfile::Strict => strict,
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let flux = FluxParam::new(cfg.alpha)?;
    let prof = cfg.tol_profile;
    let tol = cfg.tol.quad.unwrap_or(1e-10);
    let workers = resolve_workers(cfg.workers);
    match cfg.command {
        Command::KernelEval => kernel_eval(cfg, flux, tol),
        Command::DispersiveScan => {
            let times = cfg.scan.times.clone().unwrap_or_else(|| log_times(0.1, 10.0, pick(prof, 6, 21)));
            let rep = dispersive_ratio_scan(flux, &times, &default_pairs(prof), tol)?;
            let mut o = Outcome::new(rep);
            o.figure("max ratio to bound", o.report.max_ratio());
            Ok(o)
        }
        Command::HeatScan => heat_scan(cfg, flux, tol),
        Command::SpectralConsistency => {
            let configs = consistency_configs(prof);
            let rows = par_map(&configs, workers, |(t, x, y)| measure_kernel_consistency(flux, *t, x, y, 0.08, 4, tol));
            let mut rep = ScanReport::new("spectral_consistency", &["config", "t"]);
            for (i, r) in rows.into_iter().enumerate() {
                let r = r?;
                rep.push(vec![i as f64, r.t], r.reconstructed.norm(), r.kernel.norm(), r.rel_dev < 1e-4);
                rep.meta(&format!("rel_dev {i}"), format!("{:e}", r.rel_dev));
            }
            rep.meta("alpha", flux.alpha);
            Ok(Outcome::new(rep))
        }
        Command::WaveLocalizedScan => {
            let ks = cfg.scan.ks.clone().unwrap_or_else(|| pick(prof, vec![-1, 0, 1], (-2..=4).collect()));
            let times = cfg.scan.times.clone().unwrap_or_else(|| pick(prof, vec![0.0, 1.0, 3.0], (0..=10).map(f64::from).collect()));
            let pairs = default_pairs(TolProfile::Fast);
            let rep = wave_localized_scan(flux, &ks, &times, &pairs, tol)?;
            let mut o = Outcome::new(rep);
            o.figure("max scaled value", o.report.max_measured());
            Ok(o)
        }
        Command::EvolveLinear => evolve_linear(cfg, flux),
        Command::EvolveNls => evolve_nls(cfg),
        Command::StrichartzScan => {
            let n = cfg.scan.n_data.unwrap_or(pick(prof, 2, 10));
            let mut opts = pick(
                prof,
                StrichartzOptions { windows: vec![4.0, 8.0], wave_windows: vec![3.0, 6.0], samples_per_scale: 8.0, ..Default::default() },
                StrichartzOptions::default(),
            );
            if let Some(w) = &cfg.scan.windows {
                opts.windows = w.clone();
            }
            opts.workers = workers;
            let data = gaussian_family(n, cfg.seed, (0.7, 1.0), 0.6);
            let wave = gaussian_family(n, cfg.seed.wrapping_add(1), (0.8, 1.0), 0.4);
            let scan = strichartz_scan(flux, &data, &wave, &canonical_pairs(), &opts)?;
            let mut o = Outcome::new(scan.report.clone());
            for (k, v) in &scan.constants {
                o.figure(&format!("constant {k}"), *v);
            }
            o.figure("max growth", scan.max_growth());
            o.figure("unitarity deviation", scan.unitarity_dev);
            o.figure("scaling deviation", scan.scaling_dev);
            Ok(o)
        }
        Command::SobolevScan => {
            let fam = bump_family();
            let fam = &fam[..pick(prof, 2, fam.len())];
            let grid = cfg.grid_over(bump_grid(fam))?;
            let s = cfg.scan.s.unwrap_or(1.0);
            let mut rep = ScanReport::new("sobolev_equivalence", &["sample", "s", "p"]);
            for p in cfg.scan.ps.clone().unwrap_or_else(|| vec![2.0, 3.5]) {
                let r = sobolev_equiv_ratio(flux, s, p, fam, &grid)?;
                rep.rows.extend(r.rows);
                rep.metadata.extend(r.metadata);
            }
            Ok(Outcome::new(rep))
        }
        Command::SquareScan => {
            let fam = bump_family();
            let fam = &fam[..pick(prof, 2, fam.len())];
            let grid = cfg.grid_over(bump_grid(fam))?;
            let ps = cfg.scan.ps.clone().unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
            Ok(Outcome::new(square_function_ratio(flux, &ps, fam, &grid)?))
        }
        Command::ReductionCheck => {
            let h = cfg.scan.h.unwrap_or(0.08);
            let rep = reduction_identity_check(flux, &gaussian_test_function, &default_samples(), h)?;
            let mut o = Outcome::new(rep);
            o.note("orders", format!("{:?}", observed_orders(&o.report)));
            Ok(o)
        }
        Command::Morawetz => morawetz(cfg),
        Command::DecayScan => decay_scan(cfg),
    }
}

fn kernel_eval(cfg: &RunConfig, flux: FluxParam, tol: f64) -> Result<Outcome> {
    let times = cfg.scan.times.clone().unwrap_or_else(|| vec![0.3, 1.0, 2.0]);
    let mut rep = ScanReport::new("kernel_eval", &["t", "pair"]);
    let mut worst: f64 = 0.0;
    for (ip, (x, y)) in default_pairs(cfg.tol_profile).iter().enumerate() {
        for &t in &times {
            let c = propagator_kernel(flux, t, x, y, tol.min(1e-12))?.value;
            let m = mode_sum_kernel(flux, KernelTime::Schrodinger(t), x, y)?.value;
            let dev = (c - m).norm() / m.norm();
            worst = worst.max(dev);
            rep.push(vec![t, ip as f64], c.norm(), m.norm(), dev < 1e-6);
        }
    }
    rep.meta("alpha", flux.alpha);
    let mut o = Outcome::new(rep);
    o.figure("max relative deviation from mode sum", worst);
    Ok(o)
}

fn heat_scan(cfg: &RunConfig, flux: FluxParam, tol: f64) -> Result<Outcome> {
    let n = pick(cfg.tol_profile, 9, 17);
    let times = cfg.scan.times.clone().unwrap_or_else(|| log_times(0.01, 10.0, n));
    let pairs = default_pairs(cfg.tol_profile);
    let rep = heat_ratio_scan(flux, &times, &pairs, tol)?;
    // refinement: the same window sampled twice as densely
    let fine: Vec<f64> = times.windows(2).flat_map(|w| [w[0], (w[0] * w[1]).sqrt()]).chain(times.last().copied()).collect();
    let fine_rep = heat_ratio_scan(flux, &fine, &pairs, tol)?;
    let per_pair = |r: &ScanReport, ip: usize| r.rows.iter().filter(|x| x.params[1] == ip as f64).map(|x| x.measured).fold(0.0, f64::max);
    let variation = (0..pairs.len())
        .map(|ip| (per_pair(&rep, ip) / per_pair(&fine_rep, ip) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut o = Outcome::new(rep);
    o.figure("refinement variation", variation);
    if variation > 0.1 {
        o.failure = Some(Error::accuracy("heat ratio moved under refinement", variation, 0.1));
    }
    Ok(o)
}

/// Compact grid and off-axis datum shared by the small evolution commands.
pub fn small_grid() -> GridSpec {
    GridSpec { r_max: 10.0, n_r: 40, k_max: 3, l: 10.0, n_t: 32, dt: 0.1, r_min: 1e-6, rho_max: None, sigma_ref: 1.0 }
}

fn evolve_linear(cfg: &RunConfig, flux: FluxParam) -> Result<Outcome> {
    let grid = cfg.grid_over(small_grid())?;
    let pw = PartialWave::new(&grid, flux)?;
    let datum = RegularGaussian::new(1.0, 1.0, CylPoint4::new(0.5, 0.0, 0.3, 0.0));
    let u0 = datum.sample(&pw);
    let n0 = pw.norm(&u0);
    let times = cfg.scan.times.clone().unwrap_or_else(|| vec![0.25, 0.5, 1.0]);
    let mut rep = ScanReport::new("evolve_linear", &["t"]);
    let mut last = None;
    for &t in &times {
        let mut m = u0.clone();
        pw.decompose(&mut m)?;
        pw.linear_evolve(&mut m, t)?;
        pw.synthesize(&mut m)?;
        let n = pw.norm(&m);
        rep.push(vec![t], n, n0, ((n / n0) - 1.0).abs() < 1e-10);
        last = Some((t, m));
    }
    rep.meta("alpha", flux.alpha);
    let mut o = Outcome::new(rep);
    if let Some((t, field)) = last {
        o.figure("outer-layer mass fraction", crate::evolve::observables::boundary_mass_fraction(&pw, &field)?);
        o.checkpoint = Some(Checkpoint { grid, exponent: f64::NAN, time: t, field });
    }
    Ok(o)
}

fn nls_experiment(cfg: &RunConfig) -> Result<NlsExperiment> {
    let mut e = match cfg.tol_profile {
        TolProfile::Fast => {
            let mut e = NlsExperiment::virial();
            e.grid = small_grid();
            e.params.virial = false;
            e.datum = RegularGaussian::new(0.3, 1.0, CylPoint4::new(0.5, 0.0, 0.3, 0.0));
            e
        }
        TolProfile::Strict => NlsExperiment::conservation(),
    };
    e.alpha = cfg.alpha;
    if let Some(dt) = cfg.scan.dt {
        e = e.with_dt(dt);
    }
    if let Some(t) = cfg.scan.t_final {
        e.params.t_final = t;
    }
    if let Some(p) = cfg.scan.p {
        e.params.p = p;
    }
    e.grid = cfg.grid_over(e.grid.clone())?;
    Ok(e)
}

fn evolve_nls(cfg: &RunConfig) -> Result<Outcome> {
    let e = nls_experiment(cfg)?;
    let traj = e.run()?;
    let budget = cfg.tol.energy_drift.unwrap_or(pick(cfg.tol_profile, 1e-3, 1e-5));
    let mass_budget = cfg.tol.mass_drift.unwrap_or(1e-8);
    let e0 = traj.samples[0].obs.energy;
    let mut rep = ScanReport::new("evolve_nls", &["t", "mass", "energy"]);
    for s in &traj.samples {
        let dev = (s.obs.energy - e0).abs() / e0.abs().max(1e-300);
        rep.push(vec![s.obs.time, s.obs.mass, s.obs.energy], dev, budget, dev <= budget);
    }
    rep.meta("alpha", e.alpha);
    rep.meta("p", e.params.p);
    rep.meta("dt", e.params.dt);
    let mut o = Outcome::new(rep);
    let (md, ed) = (traj.mass_drift(), traj.energy_drift());
    o.note("mass drift", format!("{md:e}"));
    o.note("energy drift", format!("{ed:e}"));
    o.note("energy drift budget", format!("{budget:e}"));
    if ed > budget {
        o.failure = Some(Error::accuracy("energy drift over budget", ed, budget));
    } else if md > mass_budget {
        o.failure = Some(Error::accuracy("mass drift over budget", md, mass_budget));
    }
    let t = traj.samples.last().map_or(0.0, |s| s.obs.time);
    o.checkpoint = Some(Checkpoint { grid: e.grid.clone(), exponent: e.params.p, time: t, field: traj.final_field });
    Ok(o)
}

fn morawetz(cfg: &RunConfig) -> Result<Outcome> {
    let mut base = NlsExperiment::virial();
    base.alpha = cfg.alpha;
    if cfg.tol_profile == TolProfile::Fast {
        base.params.t_final = 0.6;
    }
    if let Some(dt) = cfg.scan.dt {
        base = base.with_dt(dt);
    }
    base.grid = cfg.grid_over(base.grid.clone())?;
    let dt = base.params.dt;
    let coarse = morawetz_diagnostics(&base.run()?)?;
    let fine = morawetz_diagnostics(&base.clone().with_dt(0.5 * dt).run()?)?;
    let shared: Vec<f64> = coarse.times[1..coarse.times.len() - 1].to_vec();
    let (rc, rf) = (coarse.residual_on(&shared), fine.residual_on(&shared));
    let mag = fine.residual().1;
    let mut rep = ScanReport::new("virial_residual", &["t", "dt"]);
    for (series, step) in [(&coarse, dt), (&fine, 0.5 * dt)] {
        for &t in &shared {
            let r = series.residual_on(&[t]);
            rep.push(vec![t, step], r, mag, step == dt || r < 0.01 * mag);
        }
    }
    let mut o = Outcome::new(rep);
    o.figure("residual ratio under dt halving", rc / rf);
    o.figure("relative residual", rf / mag);
    o.figure("cumulative Morawetz integral", fine.cumulative.last().copied().unwrap_or(0.0));
    if !(3.0..=5.0).contains(&(rc / rf)) {
        o.failure = Some(Error::accuracy("virial residual is not second order in dt", rc / rf, 4.0));
    }
    Ok(o)
}

fn decay_scan(cfg: &RunConfig) -> Result<Outcome> {
    let (mut e, factor) = match cfg.tol_profile {
        TolProfile::Strict => (NlsExperiment::conservation(), 0.2),
        TolProfile::Fast => {
            let mut e = NlsExperiment::free_decay();
            e.grid = GridSpec { r_max: 20.0, n_r: 52, l: 20.0, n_t: 56, ..e.grid };
            e.params.t_final = 2.0;
            (e, 0.5)
        }
    };
    if cfg.tol_profile == TolProfile::Strict {
        e.alpha = cfg.alpha;
    }
    e.grid = cfg.grid_over(e.grid.clone())?;
    let r = cfg.scan.r.unwrap_or(e.params.p + 1.0);
    if r != e.params.p + 1.0 {
        e.params.snapshot_every = Some(1);
    }
    let traj = e.run()?;
    let pw = e.partial_wave()?;
    let rep = potential_decay_scan(&traj, r, Some(&pw), cfg.tol.decay_factor.unwrap_or(factor))?;
    let mut o = Outcome::new(rep);
    let n = &o.report.rows;
    o.figure("terminal ratio", n[n.len() - 1].measured / n[0].measured);
    Ok(o)
}
