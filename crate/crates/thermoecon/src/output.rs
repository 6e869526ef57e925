//! Locale-free text and JSON emission.
//!
//! Numbers carry 12 significant digits. Non-finite values are written as
//! `inf`, `-inf` or `nan` in both CSV and JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thermoecon_core::calibration::CalibrationReport;
use thermoecon_core::dynamics::{wealth_index, EnsembleResult, PhysicalEvent, PhysicalRun, Trajectory};
use thermoecon_core::model::{self, GrowthMode};

pub const SIGNIFICANT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 12 significant digits, positional for `1e-4 ≤ |x| < 1e12`, otherwise
/// scientific. Trailing zeros are dropped.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// JSON value for a number, rounded like [`num`].
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = num(x).parse().expect("formatted number parses");
        json!(rounded)
    } else {
        Value::String(num(x))
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn jopt(x: Option<f64>) -> Value {
    x.map(jnum).unwrap_or(Value::Null)
}

fn csv_rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn json_table(header: &[&str], rows: impl Iterator<Item = Vec<Value>>) -> Value {
    let rows: Vec<Value> = rows
        .map(|r| {
            let mut m = Map::new();
            for (k, v) in header.iter().zip(r) {
                m.insert((*k).to_string(), v);
            }
            Value::Object(m)
        })
        .collect();
    Value::Array(rows)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn mode_json(mode: Option<GrowthMode>) -> Value {
    match mode {
        Some(m) => json!({ "mode": m.regime.label(), "limiting_rate": jnum(m.limiting_rate) }),
        None => Value::Null,
    }
}

fn mode_text(mode: Option<GrowthMode>) -> String {
    mode.map(|m| m.regime.key().to_string()).unwrap_or_else(|| "none".into())
}

const TRAJECTORY: &[&str] = &["t", "eta", "C", "Y", "a", "innovation", "gdp_growth", "wealth_index"];

fn trajectory_cells(t: &Trajectory) -> impl Iterator<Item = [f64; 8]> + '_ {
    let index = wealth_index(t);
    t.points.iter().zip(index).map(|(p, (_, w))| [p.t, p.eta, p.wealth, p.output, p.energy, p.innovation, p.gdp_growth, w])
}

fn trajectory_comments(t: &Trajectory) -> Vec<String> {
    vec![
        format!("scenario = {}", t.meta.scenario_id),
        format!("terminal_mode = {}", mode_text(t.meta.terminal_mode)),
        format!("blowup_time = {}", opt(t.meta.blowup_time)),
        format!("truncated = {}", t.meta.truncated),
    ]
}

pub fn trajectory(t: &Trajectory, format: Format) -> String {
    match format {
        Format::Csv => csv_rows(
            TRAJECTORY,
            trajectory_cells(t).map(|r| r.iter().map(|x| num(*x)).collect()),
            &trajectory_comments(t),
        ),
        Format::Json => pretty(&json!({
            "scenario": t.meta.scenario_id,
            "terminal_mode": mode_json(t.meta.terminal_mode),
            "blowup_time": jopt(t.meta.blowup_time),
            "truncated": t.meta.truncated,
            "points": json_table(TRAJECTORY, trajectory_cells(t).map(|r| r.iter().map(|x| jnum(*x)).collect())),
        })),
    }
}

const BANDS: &[&str] = &[
    "t",
    "eta_q05",
    "eta_q25",
    "eta_q50",
    "eta_q75",
    "eta_q95",
    "eta_det",
    "wealth_q05",
    "wealth_q25",
    "wealth_q50",
    "wealth_q75",
    "wealth_q95",
    "wealth_det",
];

fn band_cells(r: &EnsembleResult) -> impl Iterator<Item = Vec<f64>> + '_ {
    (0..r.times.len()).map(move |i| {
        let mut row = Vec::with_capacity(BANDS.len());
        row.push(r.times[i]);
        row.extend_from_slice(&r.eta_bands[i].0);
        row.push(r.deterministic_eta[i]);
        row.extend_from_slice(&r.wealth_bands[i].0);
        row.push(r.deterministic_wealth[i]);
        row
    })
}

pub fn bands(r: &EnsembleResult, scenario: &str, format: Format) -> String {
    match format {
        Format::Csv => csv_rows(
            BANDS,
            band_cells(r).map(|row| row.into_iter().map(num).collect()),
            &[
                format!("scenario = {scenario}"),
                format!("members = {}", r.member_count),
                format!("seed = {}", r.seed),
                format!("collapsed_members = {}", r.collapsed_members),
                format!("collapse_fraction = {}", num(r.collapse_fraction)),
            ],
        ),
        Format::Json => pretty(&json!({
            "scenario": scenario,
            "members": r.member_count,
            "seed": r.seed,
            "collapsed_members": r.collapsed_members,
            "collapse_fraction": jnum(r.collapse_fraction),
            "bands": json_table(BANDS, band_cells(r).map(|row| row.into_iter().map(jnum).collect())),
        })),
    }
}

const PHYSICAL: &[&str] = &[
    "t",
    "eta",
    "C",
    "Y",
    "a",
    "innovation",
    "gdp_growth",
    "n_s",
    "delta_h_r",
    "e_s_tot",
    "delta",
    "discovery",
    "j_a",
    "j_d",
    "j_net",
    "consumed",
    "eta_delta",
    "eta_r_net",
    "eta_e",
    "internal_sourcing",
];

fn physical_cells(run: &PhysicalRun) -> impl Iterator<Item = Vec<f64>> + '_ {
    run.points.iter().zip(&run.trajectory.points).map(|(p, f)| {
        vec![
            p.t,
            f.eta,
            f.wealth,
            f.output,
            f.energy,
            f.innovation,
            f.gdp_growth,
            p.state.n_s,
            p.state.delta_h_r,
            p.state.e_s_tot,
            p.state.delta,
            p.state.discovery,
            p.flows.j_a,
            p.flows.j_d,
            p.flows.j_net,
            p.consumed,
            p.tech.eta_delta,
            p.tech.eta_r_net,
            p.tech.eta_e,
            if p.flows.internal_sourcing() { 1.0 } else { 0.0 },
        ]
    })
}

fn event_text(e: &PhysicalEvent) -> String {
    match e {
        PhysicalEvent::ReservesExhausted { t } => format!("reserves_exhausted t = {}", num(*t)),
        PhysicalEvent::SystemDissolved { t } => format!("system_dissolved t = {}", num(*t)),
    }
}

pub fn physical(run: &PhysicalRun, scenario: &str, format: Format) -> String {
    let events: Vec<String> = run.events.iter().map(event_text).collect();
    match format {
        Format::Csv => {
            let mut comments = vec![
                format!("scenario = {scenario}"),
                format!("terminal_mode = {}", mode_text(run.trajectory.meta.terminal_mode)),
                format!("truncated = {}", run.trajectory.meta.truncated),
            ];
            comments.extend(events.iter().map(|e| format!("event {e}")));
            csv_rows(PHYSICAL, physical_cells(run).map(|r| r.into_iter().map(num).collect()), &comments)
        }
        Format::Json => pretty(&json!({
            "scenario": scenario,
            "terminal_mode": mode_json(run.trajectory.meta.terminal_mode),
            "truncated": run.trajectory.meta.truncated,
            "events": events,
            "points": json_table(PHYSICAL, physical_cells(run).map(|r| r.into_iter().map(jnum).collect())),
        })),
    }
}

const CALIBRATION: &[&str] =
    &["year", "wealth_billion_2005usd", "eta", "lambda", "inflation", "beta", "gamma", "delta_approx"];

fn calibration_cells(r: &CalibrationReport) -> Vec<(i32, [Option<f64>; 7])> {
    r.wealth_series
        .iter()
        .map(|&(year, c)| {
            let eta = r.eta_series.iter().find(|e| e.0 == year).map(|e| e.1);
            let lambda = r.lambda_at(year);
            let d = r.decay.as_ref().and_then(|d| d.iter().find(|x| x.year == year));
            (
                year,
                [
                    Some(c),
                    eta,
                    lambda,
                    d.map(|d| d.inflation),
                    d.map(|d| d.beta),
                    d.map(|d| d.gamma),
                    d.map(|d| d.delta),
                ],
            )
        })
        .collect()
}

pub fn calibration(r: &CalibrationReport, format: Format) -> String {
    let rows = calibration_cells(r);
    match format {
        Format::Csv => {
            let mut comments = vec![
                format!("c_pre = {}", num(r.c_pre)),
                format!("lambda_mean = {}", opt(r.lambda_mean)),
                format!("lambda_std = {}", opt(r.lambda_std)),
            ];
            if let Some((year, eta)) = r.final_eta() {
                comments.push(format!("final_eta = {} ({year})", num(eta)));
            }
            if r.decay.is_some() {
                comments.push("delta_approx equals the inflation rate, a first-order approximation".into());
            }
            csv_rows(
                CALIBRATION,
                rows.into_iter().map(|(y, cells)| {
                    let mut row = vec![y.to_string()];
                    row.extend(cells.iter().map(|c| opt(*c)));
                    row
                }),
                &comments,
            )
        }
        Format::Json => pretty(&json!({
            "c_pre": jnum(r.c_pre),
            "lambda_mean": jopt(r.lambda_mean),
            "lambda_std": jopt(r.lambda_std),
            "lambda_series": r.lambda_series.iter().map(|(y, l)| json!({"year": y, "lambda": jnum(*l)})).collect::<Vec<_>>(),
            "eta_series": r.eta_series.iter().map(|(y, e)| json!({"year": y, "eta": jnum(*e)})).collect::<Vec<_>>(),
            "wealth_series": r.wealth_series.iter().map(|(y, c)| json!({"year": y, "wealth": jnum(*c)})).collect::<Vec<_>>(),
            "decay": r.decay.as_ref().map(|d| d.iter().map(|x| json!({
                "year": x.year,
                "inflation": jnum(x.inflation),
                "beta": jnum(x.beta),
                "gamma": jnum(x.gamma),
                "delta": jnum(x.delta),
                "delta_is_approximate": x.delta_is_approximate,
            })).collect::<Vec<_>>()),
        })),
    }
}

/// Mode report for `(η₀, η_tech)`.
pub fn classification(eta0: f64, eta_tech: f64, mode: GrowthMode, format: Format) -> String {
    let g = model::growth_number(eta_tech, eta0).ok();
    let tau = (eta_tech != 0.0).then(|| model::characteristic_time(eta_tech));
    let t_star = model::blowup_time(eta0, eta_tech);
    match format {
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "mode = {}", mode.regime.label());
            let _ = writeln!(out, "growth_number = {}", g.map(num).unwrap_or_else(|| "undefined".into()));
            let _ = writeln!(out, "limiting_rate = {}", num(mode.limiting_rate));
            let _ = writeln!(out, "limiting_rate_percent = {}%", num(mode.limiting_rate * 100.0));
            let _ = writeln!(out, "characteristic_time = {}", tau.map(num).unwrap_or_else(|| "inf".into()));
            let _ = writeln!(out, "blowup_time = {}", t_star.map(num).unwrap_or_else(|| "none".into()));
            out
        }
        Format::Json => pretty(&json!({
            "mode": mode.regime.label(),
            "growth_number": jopt(g),
            "limiting_rate": jnum(mode.limiting_rate),
            "characteristic_time": tau.map(jnum).unwrap_or(Value::String("inf".into())),
            "blowup_time": jopt(t_star),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.02), "0.02");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(2.0 / 3.0 * 1e5), "66666.6666667");
        assert_eq!(num(100.0), "100");
        assert_eq!(num(-0.0001234), "-0.0001234");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(6.02214076e23), "6.02214076e23");
        assert_eq!(num(999_999_999_999.7), "1e12");
        assert_eq!(num(0.99999999999996), "1");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(-0.0), "0");
    }

    #[test]
    fn json_numbers_match_text() {
        assert_eq!(jnum(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(jnum(f64::NEG_INFINITY), json!("-inf"));
    }

    #[test]
    fn numbers_survive_a_round_trip_to_twelve_digits() {
        for x in [1.234567890123456e-3, 7.77e11, -5.5e-9, 123456.789] {
            let back: f64 = num(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 5e-12);
        }
    }
}
