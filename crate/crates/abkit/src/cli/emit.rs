//! Report files: CSV, canonical JSON and whitespace plot data with a gnuplot
//! stub. All three carry the same cells in the same column order.

use crate::error::{Error, Result};
use crate::report::{ScanReport, ScanRow};
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Plotdata,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

/// Column names: the report parameters, then measured, bound, ratio, pass.
pub fn columns(rep: &ScanReport) -> Vec<String> {
    let mut c = rep.params.clone();
    c.extend(["measured", "bound", "ratio", "pass"].map(String::from));
    c
}

/// Cell text shared by CSV and plot data; floats use the shortest form that
/// parses back to the same value.
pub fn cells(row: &ScanRow) -> Vec<String> {
    let mut c: Vec<String> = row.params.iter().map(|v| v.to_string()).collect();
    c.extend([row.measured, row.bound, row.ratio].iter().map(|v| v.to_string()));
    c.push(if row.pass { "1" } else { "0" }.to_string());
    c
}

pub fn report_csv(rep: &ScanReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let map = |e: csv::Error| Error::config(format!("csv: {e}"));
    w.write_record(columns(rep)).map_err(map)?;
    for r in &rep.rows {
        w.write_record(cells(r)).map_err(map)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

// JSON has no NaN or infinities; those go out as strings.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(v.to_string())
    }
}

fn denum(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::config("json: bad number")),
        Value::String(s) => s.parse().map_err(|_| Error::config(format!("json: bad number '{s}'"))),
        _ => Err(Error::config("json: expected a number")),
    }
}

/// JSON with sorted keys, so parse → serialize is byte-identical.
pub fn report_json(rep: &ScanReport) -> String {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "params": r.params.iter().map(|&v| num(v)).collect::<Vec<_>>(),
                "measured": num(r.measured),
                "bound": num(r.bound),
                "ratio": num(r.ratio),
                "pass": r.pass,
            })
        })
        .collect();
    let meta: Map<String, Value> = rep.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let v = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "name": rep.name,
        "columns": columns(rep),
        "params": rep.params,
        "rows": rows,
        "metadata": meta,
    });
    canonical(&v)
}

/// Pretty form with sorted keys and a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn report_from_json(text: &str) -> Result<ScanReport> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::config(format!("json: {e}")))?;
    if v["schema_version"].as_u64() != Some(REPORT_SCHEMA_VERSION as u64) {
        return Err(Error::config("json: unsupported report schema version"));
    }
    let strs = |v: &Value| -> Vec<String> { v.as_array().into_iter().flatten().filter_map(|s| s.as_str().map(String::from)).collect() };
    let mut rep = ScanReport::new(v["name"].as_str().unwrap_or(""), &[]);
    rep.params = strs(&v["params"]);
    for r in v["rows"].as_array().into_iter().flatten() {
        let params = r["params"].as_array().into_iter().flatten().map(denum).collect::<Result<Vec<_>>>()?;
        rep.rows.push(ScanRow {
            params,
            measured: denum(&r["measured"])?,
            bound: denum(&r["bound"])?,
            ratio: denum(&r["ratio"])?,
            pass: r["pass"].as_bool().unwrap_or(false),
        });
    }
    if let Some(m) = v["metadata"].as_object() {
        for (k, x) in m {
            rep.meta(k, x.as_str().unwrap_or_default());
        }
    }
    Ok(rep)
}

pub fn report_plotdata(rep: &ScanReport) -> String {
    let mut s = format!("# {}\n# {}\n", rep.name, columns(rep).join(" "));
    for r in &rep.rows {
        s.push_str(&cells(r).join(" "));
        s.push('\n');
    }
    s
}

/// gnuplot stub: ratio against the first parameter column.
pub fn plot_script(rep: &ScanReport, data_file: &str) -> String {
    let cols = columns(rep);
    let ratio = cols.iter().position(|c| c == "ratio").unwrap() + 1;
    let x = rep.params.first().cloned().unwrap_or_else(|| "row".into());
    format!(
        "# generated for report '{name}'\nset title '{name}'\nset xlabel '{x}'\nset ylabel 'ratio'\nplot '{data_file}' using 1:{ratio} with points title 'ratio'\n",
        name = rep.name
    )
}

/// Write `<stem>.{csv,json,dat}` plus `<stem>.gp` into `dir`.
pub fn emit_report(rep: &ScanReport, dir: &Path, stem: &str, formats: &[Format]) -> Result<Vec<PathBuf>> {
    if rep.rows.is_empty() {
        return Err(Error::config(format!("report '{}' has no rows", rep.name)));
    }
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut out = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(|e| io_err(&p, e))?;
        out.push(p);
        Ok(())
    };
    for f in formats {
        match f {
            Format::Csv => put(format!("{stem}.csv"), report_csv(rep)?)?,
            Format::Json => put(format!("{stem}.json"), report_json(rep))?,
            Format::Plotdata => {
                put(format!("{stem}.dat"), report_plotdata(rep))?;
                put(format!("{stem}.gp"), plot_script(rep, &format!("{stem}.dat")))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_rows() -> ScanReport {
        let mut r = ScanReport::new("demo", &["t", "pair"]);
        r.push(vec![0.1, 0.0], 1.5, 2.0, true);
        r.push(vec![1.0, 1.0], f64::NAN, 2.0, false);
        r.push(vec![10.0, 2.0], 1e-300, f64::INFINITY, true);
        r.meta("seed", 3);
        r
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let csv = report_csv(&three_rows()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "t,pair,measured,bound,ratio,pass");
        assert_eq!(lines[1], "0.1,0,1.5,2,0.75,1");
    }

    #[test]
    fn json_is_canonical_and_lossless() {
        let rep = three_rows();
        let text = report_json(&rep);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(canonical(&v), text);
        let back = report_from_json(&text).unwrap();
        assert_eq!(back.rows[0], rep.rows[0]);
        assert!(back.rows[1].measured.is_nan());
        assert_eq!(back.rows[2].bound, f64::INFINITY);
        assert_eq!(report_json(&back), text);
    }

    #[test]
    fn plotdata_columns_match_csv() {
        let rep = three_rows();
        let csv = report_csv(&rep).unwrap();
        let dat = report_plotdata(&rep);
        let header: Vec<&str> = dat.lines().nth(1).unwrap().trim_start_matches("# ").split(' ').collect();
        assert_eq!(header, csv.lines().next().unwrap().split(',').collect::<Vec<_>>());
        for (c, d) in csv.lines().skip(1).zip(dat.lines().skip(2)) {
            assert_eq!(c.split(',').collect::<Vec<_>>(), d.split(' ').collect::<Vec<_>>());
        }
        assert!(plot_script(&rep, "r.dat").contains("using 1:5"));
    }

    #[test]
    fn empty_report_is_rejected() {
        let rep = ScanReport::new("empty", &["t"]);
        assert!(emit_report(&rep, Path::new("/nonexistent"), "r", &[Format::Csv]).is_err());
    }
}
