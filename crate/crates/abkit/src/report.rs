//! Result rows shared by every scan.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// Parameter values, aligned with `ScanReport::params`.
    pub params: Vec<f64>,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub name: String,
    pub params: Vec<String>,
    pub rows: Vec<ScanRow>,
    /// Grid, tolerances, seed and derived constants; sorted for stable output.
    pub metadata: BTreeMap<String, String>,
}

impl ScanReport {
    pub fn new(name: &str, params: &[&str]) -> Self {
        ScanReport {
            name: name.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, params: Vec<f64>, measured: f64, bound: f64, pass: bool) {
        debug_assert_eq!(params.len(), self.params.len());
        let ratio = if bound != 0.0 { measured / bound } else { f64::NAN };
        self.rows.push(ScanRow { params, measured, bound, ratio, pass });
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn max_measured(&self) -> f64 {
        self.rows.iter().map(|r| r.measured).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min)
    }
}
