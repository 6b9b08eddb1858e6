//! CSV and JSON emission for the command-line front-end.
//!
//! CSV: `#`-prefixed preamble echoing the resolved configuration as TOML, a
//! header row, then comma-separated rows with 9 significant digits.
//! JSON: one object `{config, columns|axes, data}`; numbers use the shortest
//! representation that round-trips to the same `f64`.

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::config::{user_unit_divisor, Format, RunConfig};
use crate::sweeps::{CurveRow, SweepResult};
use crate::throughput::OptimumReport;
use crate::validate::ValidationReport;

const CSV_DIGITS: usize = 9;
const PER_MICRO: f64 = 1e6;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_significant(*x, CSV_DIGITS),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote_csv(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            // NaN and ±inf have no JSON literal and become null.
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

fn quote_csv(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn preamble(w: &mut dyn Write, config: &RunConfig) -> io::Result<()> {
    for line in config.to_toml_string().lines() {
        if line.is_empty() {
            writeln!(w, "#")?;
        } else {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

fn csv_table(w: &mut dyn Write, config: &RunConfig, columns: &[&str], rows: &[Vec<Cell>]) -> io::Result<()> {
    preamble(w, config)?;
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn json_table(config: &RunConfig, columns: &[&str], rows: &[Vec<Cell>]) -> Value {
    json!({
        "config": serde_json::to_value(config).expect("configuration serializes"),
        "columns": columns,
        "data": rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn write_json(w: &mut dyn Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

pub const CURVE_COLUMNS: [&str; 9] = [
    "tau_us",
    "delta_alpha",
    "snr2",
    "fidelity",
    "chernoff",
    "s_star",
    "eta_info",
    "t_cert_us",
    "status",
];

fn curve_cells(r: &CurveRow) -> Vec<Cell> {
    vec![
        Cell::Num(r.tau * PER_MICRO),
        Cell::Num(r.delta_alpha),
        Cell::Num(r.snr2),
        Cell::Num(r.fidelity),
        Cell::Num(r.chernoff),
        Cell::Num(r.s_star),
        Cell::Num(r.eta_info),
        Cell::Num(r.t_cert * PER_MICRO),
        Cell::Text(match &r.error {
            None => "ok".into(),
            Some(e) => format!("error: {e}"),
        }),
    ]
}

pub fn write_curve(w: &mut dyn Write, config: &RunConfig, rows: &[CurveRow]) -> io::Result<()> {
    let cells: Vec<Vec<Cell>> = rows.iter().map(curve_cells).collect();
    match config.output.format {
        Format::Csv => csv_table(w, config, &CURVE_COLUMNS, &cells),
        Format::Json => write_json(w, &json_table(config, &CURVE_COLUMNS, &cells)),
    }
}

pub const OPTIMUM_COLUMNS: [&str; 12] = [
    "tau_fid_us",
    "tau_rate_us",
    "fidelity_at_fid",
    "t_cert_at_fid_us",
    "t_cert_at_rate_us",
    "speedup",
    "chernoff_at_rate",
    "s_star_at_rate",
    "eta_info_at_rate",
    "fidelity_saturated",
    "fid_at_boundary",
    "rate_at_boundary",
];

pub fn write_optimum(w: &mut dyn Write, config: &RunConfig, r: &OptimumReport) -> io::Result<()> {
    let row = vec![vec![
        Cell::Num(r.tau_fid * PER_MICRO),
        Cell::Num(r.tau_rate * PER_MICRO),
        Cell::Num(r.fidelity_at_fid),
        Cell::Num(r.t_cert_at_fid * PER_MICRO),
        Cell::Num(r.t_cert_at_rate * PER_MICRO),
        Cell::Num(r.speedup),
        Cell::Num(r.chernoff_at_rate),
        Cell::Num(r.s_star_at_rate),
        Cell::Num(r.eta_info_at_rate),
        Cell::Bool(r.fidelity_saturated),
        Cell::Bool(r.fid_at_boundary),
        Cell::Bool(r.rate_at_boundary),
    ]];
    match config.output.format {
        Format::Csv => csv_table(w, config, &OPTIMUM_COLUMNS, &row),
        Format::Json => write_json(w, &json_table(config, &OPTIMUM_COLUMNS, &row)),
    }
}

fn axis_column(param: crate::sweeps::SweepParam) -> String {
    if user_unit_divisor(param) == PER_MICRO {
        format!("{}_us", param.name())
    } else {
        param.name().to_string()
    }
}

pub fn write_sweep(w: &mut dyn Write, config: &RunConfig, s: &SweepResult) -> io::Result<()> {
    let (div1, div2) = (user_unit_divisor(s.axis1.param), user_unit_divisor(s.axis2.param));
    let v1: Vec<f64> = s.axis1.values().iter().map(|v| v * div1).collect();
    let v2: Vec<f64> = s.axis2.values().iter().map(|v| v * div2).collect();
    let (c1, c2) = (axis_column(s.axis1.param), axis_column(s.axis2.param));
    match config.output.format {
        Format::Csv => {
            let mut rows = Vec::with_capacity(v1.len() * v2.len());
            for (i, a) in v1.iter().enumerate() {
                for (j, b) in v2.iter().enumerate() {
                    rows.push(vec![
                        Cell::Num(*a),
                        Cell::Num(*b),
                        Cell::Num(s.value(i, j)),
                        Cell::Text(s.flag(i, j).label()),
                    ]);
                }
            }
            csv_table(w, config, &[&c1, &c2, "speedup", "flag"], &rows)
        }
        Format::Json => {
            let nums = |v: &[f64]| v.iter().map(|x| Cell::Num(*x).json()).collect::<Vec<_>>();
            let speedup: Vec<Vec<Value>> = (0..v1.len())
                .map(|i| (0..v2.len()).map(|j| Cell::Num(s.value(i, j)).json()).collect())
                .collect();
            let flags: Vec<Vec<String>> = (0..v1.len())
                .map(|i| (0..v2.len()).map(|j| s.flag(i, j).label()).collect())
                .collect();
            let value = json!({
                "config": serde_json::to_value(config).expect("configuration serializes"),
                "axes": [
                    { "name": c1, "values": nums(&v1) },
                    { "name": c2, "values": nums(&v2) },
                ],
                "data": { "speedup": speedup, "flags": flags },
            });
            write_json(w, &value)
        }
    }
}

pub const VALIDATION_COLUMNS: [&str; 4] = ["tau_us", "c_num", "c_theory", "residual"];

pub fn write_validation(w: &mut dyn Write, config: &RunConfig, r: &ValidationReport) -> io::Result<()> {
    let rows: Vec<Vec<Cell>> = r
        .table
        .iter()
        .map(|row| {
            vec![
                Cell::Num(row.tau * PER_MICRO),
                Cell::Num(row.c_num),
                Cell::Num(row.c_theory),
                Cell::Num(row.residual),
            ]
        })
        .collect();
    match config.output.format {
        Format::Csv => {
            csv_table(w, config, &VALIDATION_COLUMNS, &rows)?;
            for c in &r.checks {
                writeln!(
                    w,
                    "# check {}: {} (worst {}, tolerance {}) {}",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    format_significant(c.worst, 3),
                    format_significant(c.tolerance, 3),
                    c.detail
                )?;
            }
            writeln!(
                w,
                "# summary: {}",
                if r.all_passed() {
                    "all checks passed"
                } else {
                    "FAILED"
                }
            )
        }
        Format::Json => {
            let mut value = json_table(config, &VALIDATION_COLUMNS, &rows);
            value["checks"] = serde_json::to_value(&r.checks).expect("checks serialize");
            value["passed"] = Value::Bool(r.all_passed());
            write_json(w, &value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.22, 9), "1.22");
        assert_eq!(format_significant(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_significant(942.7123456789, 9), "942.712346");
        assert_eq!(format_significant(1.5e-7, 9), "1.5e-7");
        assert_eq!(format_significant(1.234e12, 9), "1.234e12");
        assert_eq!(format_significant(0.0, 9), "0");
        assert_eq!(format_significant(f64::NAN, 9), "NaN");
        assert_eq!(format_significant(-2.5, 9), "-2.5");
    }

    #[test]
    fn csv_quotes_awkward_text() {
        assert_eq!(quote_csv("a,b"), "\"a,b\"");
        assert_eq!(quote_csv("ok"), "ok");
    }
}
