//! Trajectory checkpoints.
//!
//! Layout: an ASCII header of `key value` lines closed by a line `end`, then
//! the field samples as little-endian f64 pairs (re, im) in `ModeField::data`
//! order, n_θ·n_r·n_t² pairs in total.
//!
//! ```text
//! ab-kit-checkpoint 1
//! grid {"r_max":24.0,...}        GridSpec as JSON
//! alpha 0.5
//! exponent 2.5
//! time 1.25
//! spaces physical physical physical   angular radial transverse
//! shape 17 256 32                     n_θ n_r n_t
//! end
//! ```

use super::field::{ModeField, Space};
use super::grid::GridSpec;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &str = "ab-kit-checkpoint";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub grid: GridSpec,
    pub exponent: f64,
    pub time: f64,
    pub field: ModeField,
}

fn space_name(s: Space) -> &'static str {
    match s {
        Space::Physical => "physical",
        Space::Transform => "transform",
    }
}

fn parse_space(s: &str) -> Result<Space> {
    match s {
        "physical" => Ok(Space::Physical),
        "transform" => Ok(Space::Transform),
        _ => Err(Error::config(format!("checkpoint: unknown space '{s}'"))),
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let f = &self.field;
        let grid = serde_json::to_string(&self.grid).map_err(|e| Error::config(e.to_string()))?;
        let mut out = format!(
            "{MAGIC} {CHECKPOINT_VERSION}\ngrid {grid}\nalpha {:e}\nexponent {:e}\ntime {:e}\nspaces {} {} {}\nshape {} {} {}\nend\n",
            f.alpha,
            self.exponent,
            self.time,
            space_name(f.angular),
            space_name(f.radial),
            space_name(f.transverse),
            f.n_theta,
            f.n_r,
            f.n_t
        )
        .into_bytes();
        out.reserve(f.data.len() * 16);
        for v in &f.data {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut r = BufReader::new(r);
        let mut kv = std::collections::HashMap::new();
        let mut line = String::new();
        let mut first = true;
        loop {
            line.clear();
            let n = r.read_line(&mut line).map_err(|e| Error::config(format!("checkpoint header: {e}")))?;
            if n == 0 {
                return Err(Error::config("checkpoint header: missing 'end'"));
            }
            let l = line.trim_end();
            if l == "end" {
                break;
            }
            let (k, v) = l.split_once(' ').unwrap_or((l, ""));
            if first {
                if k != MAGIC {
                    return Err(Error::config("not an ab-kit checkpoint"));
                }
                if v.trim().parse::<u32>().ok() != Some(CHECKPOINT_VERSION) {
                    return Err(Error::config(format!("unsupported checkpoint version '{v}'")));
                }
                first = false;
                continue;
            }
            kv.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| kv.get(k).ok_or_else(|| Error::config(format!("checkpoint header: missing '{k}'")));
        let num = |k: &str| -> Result<f64> {
            get(k)?.trim().parse().map_err(|_| Error::config(format!("checkpoint header: bad '{k}'")))
        };
        let grid: GridSpec = serde_json::from_str(get("grid")?).map_err(|e| Error::config(format!("checkpoint grid: {e}")))?;
        let spaces: Vec<Space> = get("spaces")?.split_whitespace().map(parse_space).collect::<Result<_>>()?;
        let shape: Vec<usize> = get("shape")?
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::config("checkpoint header: bad 'shape'")))
            .collect::<Result<_>>()?;
        if spaces.len() != 3 || shape.len() != 3 {
            return Err(Error::config("checkpoint header: 'spaces' and 'shape' need three entries"));
        }
        let len = shape[0] * shape[1] * shape[2] * shape[2];
        let mut raw = vec![0u8; len * 16];
        r.read_exact(&mut raw).map_err(|e| Error::config(format!("checkpoint body: {e}")))?;
        let data = raw
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        let field = ModeField {
            alpha: num("alpha")?,
            angular: spaces[0],
            radial: spaces[1],
            transverse: spaces[2],
            n_theta: shape[0],
            n_r: shape[1],
            n_t: shape[2],
            data,
        };
        Ok(Checkpoint { grid, exponent: num("exponent")?, time: num("time")?, field })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let bytes = self.to_bytes()?;
        let mut f = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
        f.write_all(&bytes).map_err(|e| io_err(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
        Self::from_reader(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::PartialWave;
    use crate::geometry::FluxParam;

    #[test]
    fn round_trip_is_exact() {
        let g = GridSpec { r_max: 6.0, n_r: 12, k_max: 2, l: 6.0, n_t: 4, sigma_ref: 0.5, ..GridSpec::default() };
        let pw = PartialWave::new(&g, FluxParam::new(0.5).unwrap()).unwrap();
        let field = pw.sample(|p| Complex64::new((-p.r * p.r).exp(), p.theta.sin() * 1e-300 + p.x3));
        let cp = Checkpoint { grid: g, exponent: 2.5, time: 0.1 + 0.2, field };
        let bytes = cp.to_bytes().unwrap();
        assert!(bytes.starts_with(b"ab-kit-checkpoint 1\n"));
        let back = Checkpoint::from_reader(&bytes[..]).unwrap();
        assert_eq!(back, cp);
    }

    #[test]
    fn truncated_or_foreign_input_is_rejected() {
        assert!(Checkpoint::from_reader(&b"something else\nend\n"[..]).is_err());
        let g = GridSpec { r_max: 6.0, n_r: 12, k_max: 1, l: 6.0, n_t: 4, sigma_ref: 0.5, ..GridSpec::default() };
        let pw = PartialWave::new(&g, FluxParam::new(0.0).unwrap()).unwrap();
        let cp = Checkpoint { grid: g, exponent: 2.5, time: 0.0, field: pw.zeros(Space::Physical) };
        let bytes = cp.to_bytes().unwrap();
        assert!(Checkpoint::from_reader(&bytes[..bytes.len() - 1]).is_err());
    }
}
