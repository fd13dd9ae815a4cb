//! Run configuration in a plain `key = value` format with `[section]` headers.
//!
//! ```text
//! # comment
//! [run]
//! command = dispersive-scan
//! alpha = 0.5
//! seed = 7
//! out = out/dispersive
//! workers = 2
//! tol_profile = fast
//!
//! [grid]            any GridSpec field; unset ones keep the command default
//! r_max = 24
//! n_r = 256
//!
//! [scan]            lists are comma separated
//! times = 0.1, 1, 10
//! ks = -2, 0, 4
//!
//! [tol]
//! quad = 1e-10
//! energy_drift = 1e-5
//! ```
//!
//! Keys are checked against a fixed list per section; an unknown key or an
//! unparsable value is a configuration error naming `section.key`.

use crate::error::{Error, Result};
use crate::evolve::GridSpec;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

macro_rules! commands {
    ($($v:ident => $s:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Command { $($v),* }

        impl Command {
            pub const ALL: &'static [Command] = &[$(Command::$v),*];
            pub fn name(&self) -> &'static str {
                match self { $(Command::$v => $s),* }
            }
        }

        impl FromStr for Command {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s { $($s => Ok(Command::$v),)* _ => Err(Error::config(format!("unknown command '{s}'"))) }
            }
        }
    };
}

commands! {
    KernelEval => "kernel-eval",
    DispersiveScan => "dispersive-scan",
    HeatScan => "heat-scan",
    SpectralConsistency => "spectral-consistency",
    WaveLocalizedScan => "wave-localized-scan",
    EvolveLinear => "evolve-linear",
    EvolveNls => "evolve-nls",
    StrichartzScan => "strichartz-scan",
    SobolevScan => "sobolev-scan",
    SquareScan => "square-scan",
    ReductionCheck => "reduction-check",
    Morawetz => "morawetz",
    DecayScan => "decay-scan",
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `fast` shrinks families and grids for smoke runs; `strict` is the full
/// acceptance-scale setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TolProfile {
    Fast,
    #[default]
    Strict,
}

impl FromStr for TolProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(TolProfile::Fast),
            "strict" => Ok(TolProfile::Strict),
            _ => Err(Error::config(format!("unknown tolerance profile '{s}' (fast|strict)"))),
        }
    }
}

impl fmt::Display for TolProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TolProfile::Fast => "fast",
            TolProfile::Strict => "strict",
        })
    }
}

/// Scan ranges; `None` means the command default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanRanges {
    pub times: Option<Vec<f64>>,
    pub ks: Option<Vec<i32>>,
    pub windows: Option<Vec<f64>>,
    pub ps: Option<Vec<f64>>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub n_data: Option<usize>,
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub p: Option<f64>,
    pub h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tolerances {
    pub quad: Option<f64>,
    pub energy_drift: Option<f64>,
    pub mass_drift: Option<f64>,
    pub decay_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub tol_profile: TolProfile,
    /// Overrides of GridSpec fields by name.
    pub grid: BTreeMap<String, f64>,
    pub scan: ScanRanges,
    pub tol: Tolerances,
}

const GRID_KEYS: &[&str] = &["r_max", "n_r", "k_max", "l", "n_t", "dt", "r_min", "rho_max", "sigma_ref"];

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            alpha: 0.5,
            seed: 1,
            out: PathBuf::from("out").join(command.name()),
            workers: None,
            tol_profile: TolProfile::default(),
            grid: BTreeMap::new(),
            scan: ScanRanges::default(),
            tol: Tolerances::default(),
        }
    }

    /// The command default with the `[grid]` overrides applied and validated.
    pub fn grid_over(&self, mut g: GridSpec) -> Result<GridSpec> {
        for (k, &v) in &self.grid {
            let count = |v: f64| -> Result<usize> {
                if v >= 0.0 && v.fract() == 0.0 {
                    Ok(v as usize)
                } else {
                    Err(Error::config(format!("grid.{k} must be a non-negative integer")))
                }
            };
            match k.as_str() {
                "r_max" => g.r_max = v,
                "n_r" => g.n_r = count(v)?,
                "k_max" => g.k_max = count(v)?,
                "l" => g.l = v,
                "n_t" => g.n_t = count(v)?,
                "dt" => g.dt = v,
                "r_min" => g.r_min = v,
                "rho_max" => g.rho_max = Some(v),
                "sigma_ref" => g.sigma_ref = v,
                _ => return Err(Error::config(format!("unknown key 'grid.{k}'"))),
            }
        }
        g.validate()?;
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut entries: Vec<(String, String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[') {
                let s = s.strip_suffix(']').ok_or_else(|| Error::config(format!("line {}: unterminated section header", n + 1)))?;
                section = s.trim().to_string();
                if !["run", "grid", "scan", "tol"].contains(&section.as_str()) {
                    return Err(Error::config(format!("line {}: unknown section [{section}]", n + 1)));
                }
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: malformed key '{line}' (expected key = value)", n + 1)))?;
            let k = k.trim();
            if section.is_empty() {
                return Err(Error::config(format!("line {}: key '{k}' outside any section", n + 1)));
            }
            if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::config(format!("line {}: malformed key '{section}.{k}'", n + 1)));
            }
            entries.push((section.clone(), k.to_string(), v.trim().to_string()));
        }
        let command = entries
            .iter()
            .find(|e| e.0 == "run" && e.1 == "command")
            .ok_or_else(|| Error::config("missing key 'run.command'"))?
            .2
            .parse::<Command>()?;
        let mut cfg = RunConfig::new(command);
        for (sec, k, v) in &entries {
            cfg.set(sec, k, v)?;
        }
        Ok(cfg)
    }

    /// Set one `section.key`; used by the parser and for flag overrides.
    pub fn set(&mut self, sec: &str, k: &str, v: &str) -> Result<()> {
        let key = format!("{sec}.{k}");
        let bad = |e: &dyn fmt::Display| Error::config(format!("bad value '{v}' for key '{key}': {e}"));
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| e.to_string())
        }
        fn list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String>
        where
            T::Err: fmt::Display,
        {
            v.split(',').map(|s| num(s.trim())).collect()
        }
        match (sec, k) {
            ("run", "command") => {
                let c: Command = v.parse()?;
                if c != self.command {
                    return Err(Error::config(format!("key 'run.command' says '{c}' but the run is '{}'", self.command)));
                }
            }
            ("run", "alpha") => self.alpha = num(v).map_err(|e| bad(&e))?,
            ("run", "seed") => self.seed = num(v).map_err(|e| bad(&e))?,
            ("run", "out") => self.out = PathBuf::from(v),
            ("run", "workers") => self.workers = Some(num(v).map_err(|e| bad(&e))?),
            ("run", "tol_profile") => self.tol_profile = v.parse().map_err(|e: Error| bad(&e))?,
            ("grid", k) if GRID_KEYS.contains(&k) => {
                self.grid.insert(k.to_string(), num(v).map_err(|e| bad(&e))?);
            }
            ("scan", "times") => self.scan.times = Some(list(v).map_err(|e| bad(&e))?),
            ("scan", "ks") => self.scan.ks = Some(list(v).map_err(|e| bad(&e))?),
            ("scan", "windows") => self.scan.windows = Some(list(v).map_err(|e| bad(&e))?),
            ("scan", "ps") => self.scan.ps = Some(list(v).map_err(|e| bad(&e))?),
            ("scan", "s") => self.scan.s = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "r") => self.scan.r = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "n_data") => self.scan.n_data = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "t_final") => self.scan.t_final = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "dt") => self.scan.dt = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "p") => self.scan.p = Some(num(v).map_err(|e| bad(&e))?),
            ("scan", "h") => self.scan.h = Some(num(v).map_err(|e| bad(&e))?),
            ("tol", "quad") => self.tol.quad = Some(num(v).map_err(|e| bad(&e))?),
            ("tol", "energy_drift") => self.tol.energy_drift = Some(num(v).map_err(|e| bad(&e))?),
            ("tol", "mass_drift") => self.tol.mass_drift = Some(num(v).map_err(|e| bad(&e))?),
            ("tol", "decay_factor") => self.tol.decay_factor = Some(num(v).map_err(|e| bad(&e))?),
            _ => return Err(Error::config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Canonical text form; `parse(emit())` reproduces the config exactly.
    pub fn emit(&self) -> String {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        }
        let mut s = String::new();
        let _ = writeln!(s, "[run]\ncommand = {}\nalpha = {}\nseed = {}", self.command, self.alpha, self.seed);
        let _ = writeln!(s, "out = {}", self.out.display());
        if let Some(w) = self.workers {
            let _ = writeln!(s, "workers = {w}");
        }
        let _ = writeln!(s, "tol_profile = {}", self.tol_profile);
        if !self.grid.is_empty() {
            s.push_str("\n[grid]\n");
            for (k, v) in &self.grid {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        let c = &self.scan;
        let mut scan = String::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(scan, "{k} = {v}");
            }
        };
        put("times", c.times.as_deref().map(join));
        put("ks", c.ks.as_deref().map(join));
        put("windows", c.windows.as_deref().map(join));
        put("ps", c.ps.as_deref().map(join));
        put("s", c.s.map(|v| v.to_string()));
        put("r", c.r.map(|v| v.to_string()));
        put("n_data", c.n_data.map(|v| v.to_string()));
        put("t_final", c.t_final.map(|v| v.to_string()));
        put("dt", c.dt.map(|v| v.to_string()));
        put("p", c.p.map(|v| v.to_string()));
        put("h", c.h.map(|v| v.to_string()));
        if !scan.is_empty() {
            s.push_str("\n[scan]\n");
            s.push_str(&scan);
        }
        let t = &self.tol;
        let mut tol = String::new();
        for (k, v) in [("quad", t.quad), ("energy_drift", t.energy_drift), ("mass_drift", t.mass_drift), ("decay_factor", t.decay_factor)] {
            if let Some(v) = v {
                let _ = writeln!(tol, "{k} = {v}");
            }
        }
        if !tol.is_empty() {
            s.push_str("\n[tol]\n");
            s.push_str(&tol);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "# dispersive run\n[run]\ncommand = dispersive-scan\nalpha = 0\nseed = 7\nout = /tmp/x\n\n[grid]\nn_r = 64\n[scan]\ntimes = 0.1, 1,10\nks = -2, 3\n[tol]\nquad = 1e-10\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.command, Command::DispersiveScan);
        assert_eq!(c.alpha, 0.0);
        assert_eq!(c.scan.times, Some(vec![0.1, 1.0, 10.0]));
        assert_eq!(c.scan.ks, Some(vec![-2, 3]));
        assert_eq!(c.grid["n_r"], 64.0);
        assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn errors_name_the_key() {
        let e = RunConfig::parse("[run]\ncommand = heat-scan\n[scan]\ntimez = 1\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("scan.timez")), "{e}");
        let e = RunConfig::parse("[run]\ncommand = heat-scan\nalpha = half\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("run.alpha")), "{e}");
        let e = RunConfig::parse("[run]\ncommand = heat-scan\nwhat\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("'what'")), "{e}");
        assert_eq!(e.exit_code(), 2);
        assert!(RunConfig::parse("[run]\nalpha = 1\n").is_err());
        assert!(RunConfig::parse("[run]\ncommand = nope\n").is_err());
    }

    #[test]
    fn grid_overrides_are_validated() {
        let mut c = RunConfig::new(Command::EvolveLinear);
        c.set("grid", "n_t", "7").unwrap();
        assert!(c.grid_over(GridSpec::default()).is_err());
        c.set("grid", "n_t", "2.5").unwrap();
        assert!(matches!(c.grid_over(GridSpec::default()), Err(Error::Config(m)) if m.contains("grid.n_t")));
    }

    #[test]
    fn every_command_has_a_name() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), *c);
        }
        assert_eq!(Command::ALL.len(), 13);
    }

    proptest! {
        #[test]
        fn emit_parse_identity(alpha in -3.0..3.0f64, seed in any::<u64>(), times in proptest::collection::vec(0.001..100.0f64, 1..6), dt in proptest::option::of(1e-4..1.0f64), w in proptest::option::of(1usize..64)) {
            let mut c = RunConfig::new(Command::ALL[(seed % 13) as usize]);
            c.alpha = alpha;
            c.seed = seed;
            c.workers = w;
            c.scan.times = Some(times);
            c.scan.dt = dt;
            c.tol.quad = Some(1e-11);
            c.grid.insert("r_max".into(), alpha.abs() + 1.0);
            prop_assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
        }
    }
}
