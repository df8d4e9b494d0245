//! Config-driven reliability sweeps and their CSV artifacts.
//!
//! A sweep evaluates the noise-limited closed form (and optionally its Monte
//! Carlo cross-check) over the Cartesian product of a swept channel variable
//! and a family of eigenvalue products, emitting one CSV row per point. The
//! three bundled presets trace how reliability falls with the eigenvalue
//! product under increasing transmit power (`scenario1`), distance
//! (`scenario2`), and path-loss exponent (`scenario3`); `use_cases` carries
//! rate-threshold reference points for three control applications.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{default_omega, ChannelParams};
use crate::error::{Error, Result};
use crate::montecarlo::{self, McConfig};
use crate::reliability;

/// Significant digits used for every number in emitted CSV.
pub const CSV_SIG_DIGITS: usize = 9;

/// Which channel variable a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "p_t")]
    TransmitPower,
    #[serde(rename = "d")]
    Distance,
    #[serde(rename = "eta")]
    PathLossExponent,
    #[serde(rename = "pi")]
    UnstableProduct,
}

impl SweepVariable {
    fn name(&self) -> &'static str {
        match self {
            SweepVariable::TransmitPower => "p_t",
            SweepVariable::Distance => "d",
            SweepVariable::PathLossExponent => "eta",
            SweepVariable::UnstableProduct => "pi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ClosedForm,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn wants_monte_carlo(&self) -> bool {
        matches!(self, Mode::MonteCarlo | Mode::Both)
    }
}

/// The channel parameters that stay fixed during a sweep. The swept field may
/// be omitted; all others are required (`omega` defaults to 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedChannel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_t: Option<f64>,
    pub n0: f64,
    pub l0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

impl FixedChannel {
    /// Materialize full channel parameters with the swept variable set to
    /// `value`. Errors name the missing field path.
    fn resolve(&self, variable: SweepVariable, value: f64) -> Result<ChannelParams> {
        let require = |field: Option<f64>, name: &str| {
            field.ok_or_else(|| {
                Error::invalid(format!(
                    "fixed.{name} is required when sweeping {}",
                    variable.name()
                ))
            })
        };
        let mut p_t = require(self.p_t, "p_t");
        let mut d = require(self.d, "d");
        let mut eta = require(self.eta, "eta");
        match variable {
            SweepVariable::TransmitPower => p_t = Ok(value),
            SweepVariable::Distance => d = Ok(value),
            SweepVariable::PathLossExponent => eta = Ok(value),
            SweepVariable::UnstableProduct => {}
        }
        ChannelParams::new(p_t?, self.n0, self.l0, d?, eta?, self.omega)
    }
}

/// A declarative sweep: vary one channel variable (or the eigenvalue product
/// itself) over `sweep_values`, with one curve per entry of `pi_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub fixed: FixedChannel,
    #[serde(default)]
    pub pi_values: Vec<f64>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
}

/// One evaluated sweep point: the full input coordinates plus the closed-form
/// reliability and, in Monte Carlo modes, the sampled estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub pi: f64,
    pub p_t: f64,
    pub n0: f64,
    pub l0: f64,
    pub d: f64,
    pub eta: f64,
    pub omega: f64,
    pub alpha_closed: f64,
    pub alpha_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
}

const CSV_HEADER: [&str; 10] = [
    "pi",
    "p_t",
    "n0",
    "l0",
    "d",
    "eta",
    "omega",
    "alpha_closed",
    "alpha_mc",
    "mc_stderr",
];

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sweep_values.is_empty() {
            return Err(Error::invalid("sweep_values must be non-empty".to_string()));
        }
        if !self.sweep_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid(
                "sweep_values must be strictly ascending".to_string(),
            ));
        }
        match self.sweep_variable {
            SweepVariable::UnstableProduct => {
                if let Some(bad) = self.sweep_values.iter().find(|v| !(**v >= 1.0)) {
                    return Err(Error::invalid(format!(
                        "swept pi values must be >= 1, got {bad}"
                    )));
                }
            }
            _ => {
                if self.pi_values.is_empty() {
                    return Err(Error::invalid(format!(
                        "pi_values must be non-empty when sweeping {}",
                        self.sweep_variable.name()
                    )));
                }
                if let Some(bad) = self.pi_values.iter().find(|v| !(**v >= 1.0)) {
                    return Err(Error::invalid(format!(
                        "pi_values entries must be >= 1, got {bad}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut de = serde_json::Deserializer::from_str(&text);
        let config: ScenarioConfig =
            serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Config {
                path: path.to_path_buf(),
                at: e.path().to_string(),
                detail: e.inner().to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    /// The (pi, channel) coordinates of every row, ordered by
    /// (pi, sweep value).
    fn points(&self) -> Result<Vec<(f64, ChannelParams)>> {
        self.validate()?;
        let mut points = Vec::new();
        match self.sweep_variable {
            SweepVariable::UnstableProduct => {
                for &pi in &self.sweep_values {
                    points.push((pi, self.fixed.resolve(self.sweep_variable, f64::NAN)?));
                }
            }
            variable => {
                for &pi in &self.pi_values {
                    for &value in &self.sweep_values {
                        points.push((pi, self.fixed.resolve(variable, value)?));
                    }
                }
            }
        }
        Ok(points)
    }
}

/// Evaluate a sweep. Closed-form values are always computed; Monte Carlo
/// estimates are added in `monte_carlo`/`both` modes using the config's `mc`
/// block (defaults: 10^6 samples, seed 42, one stream).
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    let points = config.points()?;
    let mut rows: Vec<SweepRow> = points
        .iter()
        .map(|(pi, params)| {
            let closed = reliability::alpha_noise(params, *pi)?;
            Ok(SweepRow {
                pi: *pi,
                p_t: params.p_t,
                n0: params.n0,
                l0: params.l0,
                d: params.d,
                eta: params.eta,
                omega: params.omega,
                alpha_closed: closed.value,
                alpha_mc: None,
                mc_stderr: None,
            })
        })
        .collect::<Result<_>>()?;

    if config.mode.wants_monte_carlo() {
        let mc = config.mc.unwrap_or_default();
        let grid = montecarlo::grid(points);
        let estimates = montecarlo::sweep(
            |(pi, params): &(f64, ChannelParams), mc| {
                montecarlo::estimate_beta_noise(params, *pi, mc)
            },
            &grid,
            &mc,
        )?;
        for (row, estimate) in rows.iter_mut().zip(estimates) {
            row.alpha_mc = Some(estimate.p_hat);
            row.mc_stderr = Some(estimate.stderr);
        }
    }
    Ok(rows)
}

/// Rate thresholds `log2(pi)` for a list of eigenvalue products.
pub fn table1(products: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(bad) = products.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
        return Err(Error::invalid(format!(
            "eigenvalue products must be finite and >= 1, got {bad}"
        )));
    }
    Ok(products.iter().map(|&p| (p, p.log2())).collect())
}

/// Reference eigenvalue products for three closed-loop control applications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UseCase {
    pub name: &'static str,
    pub unstable_product: f64,
}

pub const USE_CASES: [UseCase; 3] = [
    UseCase {
        name: "Voltage regulation in DC micro grids",
        unstable_product: 6e7,
    },
    UseCase {
        name: "Load frequency control",
        unstable_product: 412.99,
    },
    UseCase {
        name: "Adaptive cruise control",
        unstable_product: 2.2,
    },
];

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Number of eigenvalue-product grid points used by the bundled presets.
pub const PRESET_PI_POINTS: usize = 60;

const PRESET_N0: f64 = 0.01;
const PRESET_L0: f64 = 0.1;

fn preset_pi_grid() -> Vec<f64> {
    log_spaced(10.0, 600.0, PRESET_PI_POINTS)
}

/// Bundled sweeps. `scenario1` varies transmit power, `scenario2` distance,
/// `scenario3` the path-loss exponent; all trace reliability against the
/// eigenvalue product on a shared log grid.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let config = match name {
        "scenario1" => ScenarioConfig {
            sweep_variable: SweepVariable::TransmitPower,
            sweep_values: vec![100.0, 200.0, 300.0, 400.0],
            fixed: FixedChannel {
                p_t: None,
                n0: PRESET_N0,
                l0: PRESET_L0,
                d: Some(10.0),
                eta: Some(2.5),
                omega: default_omega(),
            },
            pi_values: preset_pi_grid(),
            mode: Mode::ClosedForm,
            mc: None,
        },
        "scenario2" => ScenarioConfig {
            sweep_variable: SweepVariable::Distance,
            sweep_values: vec![10.0, 15.0, 20.0, 25.0],
            fixed: FixedChannel {
                p_t: Some(300.0),
                n0: PRESET_N0,
                l0: PRESET_L0,
                d: None,
                eta: Some(2.5),
                omega: default_omega(),
            },
            pi_values: preset_pi_grid(),
            mode: Mode::ClosedForm,
            mc: None,
        },
        "scenario3" => ScenarioConfig {
            sweep_variable: SweepVariable::PathLossExponent,
            sweep_values: vec![2.5, 3.0, 3.5],
            fixed: FixedChannel {
                p_t: Some(300.0),
                n0: PRESET_N0,
                l0: PRESET_L0,
                d: Some(10.0),
                eta: None,
                omega: default_omega(),
            },
            pi_values: preset_pi_grid(),
            mode: Mode::ClosedForm,
            mc: None,
        },
        other => {
            return Err(Error::invalid(format!(
                "unknown preset '{other}' (expected scenario1, scenario2 or scenario3)"
            )))
        }
    };
    Ok(config)
}

/// `n` logarithmically spaced points spanning `[lo, hi]`, each rounded to
/// [`CSV_SIG_DIGITS`] significant digits so emitted CSV reproduces the grid
/// losslessly.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|k| {
            let x = lo * (ratio * k as f64 / (n - 1) as f64).exp();
            round_sig(x, CSV_SIG_DIGITS)
        })
        .collect()
}

fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits as i32 - 1 - magnitude);
    (x * scale).round() / scale
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Render `x` with up to `digits` significant digits, plain decimal notation
/// for moderate magnitudes and exponent notation otherwise (the shape of
/// printf's %g).
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude >= -4 && magnitude < digits as i32 {
        let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
        }
        s
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("exponent format");
        let mut m = mantissa.to_string();
        if m.contains('.') {
            m.truncate(m.trim_end_matches('0').trim_end_matches('.').len());
        }
        let mut out = m;
        let _ = write!(out, "e{exponent}");
        out
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(|v| format_sig(v, CSV_SIG_DIGITS)).unwrap_or_default()
}

/// Write rows as CSV: fixed header, one line per row, numbers at
/// [`CSV_SIG_DIGITS`] significant digits, rows in the given order.
pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::invalid(format!("csv write failed: {e}"));
    out.write_record(CSV_HEADER).map_err(io_err)?;
    for row in rows {
        out.write_record([
            format_sig(row.pi, CSV_SIG_DIGITS),
            format_sig(row.p_t, CSV_SIG_DIGITS),
            format_sig(row.n0, CSV_SIG_DIGITS),
            format_sig(row.l0, CSV_SIG_DIGITS),
            format_sig(row.d, CSV_SIG_DIGITS),
            format_sig(row.eta, CSV_SIG_DIGITS),
            format_sig(row.omega, CSV_SIG_DIGITS),
            format_sig(row.alpha_closed, CSV_SIG_DIGITS),
            format_opt(row.alpha_mc),
            format_opt(row.mc_stderr),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(|e| Error::invalid(format!("csv flush failed: {e}")))?;
    Ok(())
}

/// Write rows to a file, surfacing I/O failures with the path.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(rows, std::io::BufWriter::new(file))
}

/// Render rows to an in-memory CSV string.
pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buffer = Vec::new();
    write_csv(rows, &mut buffer)?;
    String::from_utf8(buffer).map_err(|e| Error::invalid(format!("csv not utf-8: {e}")))
}

/// Parse a CSV file produced by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let parse_err =
        |field: &str, value: &str| Error::invalid(format!("bad {field} value '{value}'"));
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::invalid(format!("csv read failed: {e}")))?;
        if record.len() != CSV_HEADER.len() {
            return Err(Error::invalid(format!(
                "expected {} fields, got {}",
                CSV_HEADER.len(),
                record.len()
            )));
        }
        let number = |idx: usize| -> Result<f64> {
            record[idx]
                .parse::<f64>()
                .map_err(|_| parse_err(CSV_HEADER[idx], &record[idx]))
        };
        let optional = |idx: usize| -> Result<Option<f64>> {
            if record[idx].is_empty() {
                Ok(None)
            } else {
                number(idx).map(Some)
            }
        };
        rows.push(SweepRow {
            pi: number(0)?,
            p_t: number(1)?,
            n0: number(2)?,
            l0: number(3)?,
            d: number(4)?,
            eta: number(5)?,
            omega: number(6)?,
            alpha_closed: number(7)?,
            alpha_mc: optional(8)?,
            mc_stderr: optional(9)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn format_sig_shapes() {
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(600.0, 9), "600");
        assert_eq!(format_sig(0.1, 9), "0.1");
        assert_eq!(format_sig(6e7, 9), "60000000");
        assert_eq!(format_sig(6e10, 9), "6e10");
        assert_eq!(format_sig(1.23456789e-7, 9), "1.23456789e-7");
        assert_eq!(format_sig(0.38798829798, 9), "0.387988298");
        assert_eq!(format_sig(-2.5, 9), "-2.5");
    }

    #[test]
    fn round_sig_is_stable_under_format_parse() {
        for x in [10.0, 17.451259, 599.99999, 600.0, 1.0000001e-3] {
            let rounded = round_sig(x, 9);
            let printed = format_sig(rounded, 9);
            let parsed: f64 = printed.parse().unwrap();
            assert_eq!(parsed.to_bits(), rounded.to_bits(), "{x} -> {printed}");
        }
    }

    #[test]
    fn log_grid_spans_range_and_is_ascending() {
        let grid = log_spaced(10.0, 600.0, PRESET_PI_POINTS);
        assert_eq!(grid.len(), PRESET_PI_POINTS);
        assert_eq!(grid[0], 10.0);
        assert_eq!(grid[PRESET_PI_POINTS - 1], 600.0);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degenerate_sweep_equals_direct_call() {
        let config = ScenarioConfig {
            sweep_variable: SweepVariable::TransmitPower,
            sweep_values: vec![100.0],
            fixed: FixedChannel {
                p_t: None,
                n0: 0.01,
                l0: 0.1,
                d: Some(10.0),
                eta: Some(2.5),
                omega: 2.0,
            },
            pi_values: vec![600.0],
            mode: Mode::ClosedForm,
            mc: None,
        };
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let params = ChannelParams::new(100.0, 0.01, 0.1, 10.0, 2.5, 2.0).unwrap();
        let direct = reliability::alpha_noise(&params, 600.0).unwrap().value;
        assert_eq!(rows[0].alpha_closed, direct);
        assert!(rows[0].alpha_mc.is_none());
    }

    #[test]
    fn pi_sweep_orders_rows_by_pi() {
        let config = ScenarioConfig {
            sweep_variable: SweepVariable::UnstableProduct,
            sweep_values: vec![10.0, 100.0, 600.0],
            fixed: FixedChannel {
                p_t: Some(100.0),
                n0: 0.01,
                l0: 0.1,
                d: Some(10.0),
                eta: Some(2.5),
                omega: 2.0,
            },
            pi_values: vec![],
            mode: Mode::ClosedForm,
            mc: None,
        };
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|w| w[0].pi < w[1].pi));
        assert!(rows.windows(2).all(|w| w[0].alpha_closed > w[1].alpha_closed));
    }

    #[test]
    fn missing_fixed_field_is_reported_with_path() {
        let config = ScenarioConfig {
            sweep_variable: SweepVariable::TransmitPower,
            sweep_values: vec![100.0],
            fixed: FixedChannel {
                p_t: None,
                n0: 0.01,
                l0: 0.1,
                d: None,
                eta: Some(2.5),
                omega: 2.0,
            },
            pi_values: vec![10.0],
            mode: Mode::ClosedForm,
            mc: None,
        };
        let err = run_scenario(&config).unwrap_err().to_string();
        assert!(err.contains("fixed.d"), "message was: {err}");
    }

    #[test]
    fn sweep_values_must_ascend() {
        let mut config = preset("scenario1").unwrap();
        config.sweep_values = vec![200.0, 100.0];
        assert!(config.validate().is_err());
    }

    #[test]
    fn preset_one_contains_reference_row() {
        let rows = run_scenario(&preset("scenario1").unwrap()).unwrap();
        assert_eq!(rows.len(), 4 * PRESET_PI_POINTS);
        let row = rows
            .iter()
            .find(|r| r.pi == 600.0 && r.p_t == 100.0)
            .expect("grid endpoint present");
        assert!((row.alpha_closed - 0.388).abs() <= 0.002);
    }

    #[test]
    fn preset_curves_are_monotone() {
        // Decreasing in pi and increasing in p_t for scenario1.
        let rows = run_scenario(&preset("scenario1").unwrap()).unwrap();
        for curve in rows.chunks(4) {
            // Within a pi block, rows vary by p_t ascending.
            assert!(curve.windows(2).all(|w| w[0].alpha_closed < w[1].alpha_closed));
        }
        for power_idx in 0..4 {
            let curve: Vec<&SweepRow> = rows.iter().skip(power_idx).step_by(4).collect();
            assert!(curve
                .windows(2)
                .all(|w| w[0].alpha_closed >= w[1].alpha_closed));
        }

        // Decreasing in d for scenario2 and in eta for scenario3.
        for (name, per_block) in [("scenario2", 4), ("scenario3", 3)] {
            let rows = run_scenario(&preset(name).unwrap()).unwrap();
            for block in rows.chunks(per_block) {
                assert!(block.windows(2).all(|w| w[0].alpha_closed > w[1].alpha_closed));
            }
        }
    }

    #[test]
    fn preset_three_reference_row() {
        let rows = run_scenario(&preset("scenario3").unwrap()).unwrap();
        let row = rows
            .iter()
            .find(|r| r.pi == 600.0 && r.eta == 3.0)
            .expect("eta = 3 endpoint present");
        assert!((row.alpha_closed - 0.368).abs() <= 0.01);
    }

    #[test]
    fn table1_reference_thresholds() {
        let pairs = table1(&[6e7, 412.99, 2.2]).unwrap();
        assert!((pairs[0].1 - 25.835).abs() < 0.005);
        assert!((pairs[1].1 - 8.69).abs() < 0.005);
        assert!((pairs[2].1 - 1.1375).abs() < 0.0005);
        assert!(table1(&[0.5]).is_err());
    }

    #[test]
    fn use_cases_match_table() {
        let products: Vec<f64> = USE_CASES.iter().map(|u| u.unstable_product).collect();
        let pairs = table1(&products).unwrap();
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn csv_empty_rows_is_header_only() {
        let text = csv_string(&[]).unwrap();
        assert_eq!(text.trim_end(), CSV_HEADER.join(","));
    }

    #[test]
    fn csv_roundtrip_preserves_rows() {
        let mut config = preset("scenario1").unwrap();
        config.pi_values = vec![10.0, 87.3, 600.0];
        config.mode = Mode::Both;
        config.mc = Some(McConfig {
            samples: 2000,
            seed: 5,
            streams: 2,
        });
        let rows = run_scenario(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.csv");
        emit_csv(&rows, &path).unwrap();
        let parsed = read_csv(&path).unwrap();
        assert_eq!(parsed.len(), rows.len());
        for (a, b) in rows.iter().zip(parsed.iter()) {
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(1.0);
            assert!(close(a.pi, b.pi) && close(a.p_t, b.p_t) && close(a.d, b.d));
            assert!(close(a.n0, b.n0) && close(a.l0, b.l0) && close(a.eta, b.eta));
            assert!(close(a.alpha_closed, b.alpha_closed));
            assert!(close(a.alpha_mc.unwrap(), b.alpha_mc.unwrap()));
            assert!(close(a.mc_stderr.unwrap(), b.mc_stderr.unwrap()));
        }
    }

    #[test]
    fn csv_line_count_matches_grid() {
        let rows = run_scenario(&preset("scenario1").unwrap()).unwrap();
        let text = csv_string(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 4 * PRESET_PI_POINTS);
    }

    #[test]
    fn unknown_preset_is_rejected() {
        assert!(preset("scenario9").is_err());
    }

    #[test]
    fn scenario_config_json_with_field_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"sweep_variable":"p_t","sweep_values":[1,2],"fixed":{"n0":0.01,"l0":"x"},"pi_values":[10],"mode":"closed_form"}"#,
        )
        .unwrap();
        let err = ScenarioConfig::from_json_file(&path).unwrap_err();
        match err {
            Error::Config { at, .. } => assert!(at.contains("fixed.l0"), "at = {at}"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
