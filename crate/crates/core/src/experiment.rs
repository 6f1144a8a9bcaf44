//! Seeded experiment driver: R-sweeps, the L¹ mass-ratio estimate, the
//! growth-slope fit, and report emission (CSV, JSON, SVG, manifest).
//!
//! Determinism contract: identical config and seed produce byte-identical
//! CSV. Points are materialized sequentially from one ChaCha stream per R;
//! propagation parallelizes over points but collects in index order, and
//! wall-clock times go to the manifest, never the CSV.

use crate::bump::BumpProfile;
use crate::error::{Error, Result};
use crate::exponential_sums::{fit_weyl_c0, WeylFit};
use crate::omega::{lift_to_omega_star, omega_measure, CellSampler, CopyCounts, MeasureMode};
use crate::propagator::propagate_with;
use crate::wave_packet::{l2_norm_closed, packet_params, solve_exponents, Constants};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Sweep configuration. Unknown keys in a config file are errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: usize,
    pub r_values: Vec<f64>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_points")]
    pub points_per_r: u64,
    #[serde(default)]
    pub seed: u64,
    /// exponent s in the ratio l1_lower/(R^s · l2); default s* − 0.05
    #[serde(default)]
    pub s_exponent: Option<f64>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(default)]
    pub measure_mode: Option<MeasureMode>,
    /// fitted Weyl constant; fitted fresh when absent
    #[serde(default)]
    pub weyl_c0: Option<f64>,
    #[serde(default = "default_w_grid")]
    pub w_grid: u64,
}

fn default_sigma() -> f64 {
    0.5
}
fn default_points() -> u64 {
    512
}
fn default_mc_samples() -> u64 {
    400_000
}
fn default_w_grid() -> u64 {
    4096
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))
    }
}

/// One sweep row. `wall_time_s` is reported in the JSON and manifest only;
/// the CSV omits it so that reruns are byte-identical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub r: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub q_big: f64,
    pub l: f64,
    pub s1: f64,
    pub omega_star_measure: f64,
    pub mean_amplitude: f64,
    pub l1_lower: f64,
    pub l2_norm: f64,
    pub ratio: f64,
    pub pass_rate: f64,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// Fixed CSV column order (wall time excluded by the determinism contract).
pub const CSV_COLUMNS: [&str; 15] = [
    "n",
    "r",
    "sigma",
    "lambda",
    "kappa",
    "q_big",
    "l",
    "s1",
    "omega_star_measure",
    "mean_amplitude",
    "l1_lower",
    "l2_norm",
    "ratio",
    "pass_rate",
    "seed",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub records: Vec<ExperimentRecord>,
    /// (R, diagnostic) for every R that failed parameter validation
    pub skipped: Vec<(f64, String)>,
    pub weyl_fit: WeylFit,
}

/// Run the sweep: per R build parameters, sample Ω*, choose times, propagate,
/// and assemble the L¹ lower-bound ratio.
pub fn run_sweep(config: &SweepConfig, bump: &BumpProfile) -> Result<SweepOutcome> {
    let weyl_fit = match config.weyl_c0 {
        Some(c0) => WeylFit {
            c0,
            random_max: f64::NAN,
            family_max: f64::NAN,
            trials: 0,
            seed: 0,
        },
        None => fit_weyl_c0(256, 0xC0),
    };
    let consts = Constants::calibrated(config.n, bump, weyl_fit.c0);
    let sol = solve_exponents(config.n, config.sigma)?;
    let s_exp = config.s_exponent.unwrap_or(sol.s_star - 0.05);
    let mode = config.measure_mode.unwrap_or(if config.n == 2 {
        MeasureMode::ExactProduct
    } else {
        MeasureMode::MonteCarlo
    });

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (r_idx, &r) in config.r_values.iter().enumerate() {
        let started = std::time::Instant::now();
        let params = match packet_params(config.n, r, &sol, consts) {
            Ok(p) => p,
            Err(e) => {
                skipped.push((r, format!("{e}")));
                continue;
            }
        };
        let omega = omega_measure(&params, mode, config.mc_samples, config.seed)?;
        let copies = CopyCounts::for_params(&params);
        let omega_star = omega.value * copies.measure_factor(params.n);

        // sequential, seeded point construction: one stream per R
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(r_idx as u64 + 1);
        let sampler = CellSampler::new(&params)?;
        let mut points = Vec::with_capacity(config.points_per_r as usize);
        for k in 0..config.points_per_r {
            let cell = sampler.draw(&mut rng);
            let lift_seed = config
                .seed
                .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(r_idx as u64 + 1))
                .wrapping_add(k);
            let out = lift_to_omega_star(&cell, &params, 1, lift_seed)?;
            points.extend(out.points);
        }

        let results: Vec<_> = points
            .par_iter()
            .map(|pt| propagate_with(pt, &params, bump, config.w_grid))
            .collect::<Result<Vec<_>>>()?;

        let amplitudes: Vec<f64> = results.iter().map(|r| r.amplitude.norm()).collect();
        let mean_amplitude = amplitudes.iter().sum::<f64>() / amplitudes.len().max(1) as f64;
        let pass_rate =
            results.iter().filter(|r| r.passed).count() as f64 / results.len().max(1) as f64;
        let l2_norm = l2_norm_closed(&params, bump)?;
        let l1_lower = omega_star * mean_amplitude;
        let ratio = l1_lower / (r.powf(s_exp) * l2_norm);
        records.push(ExperimentRecord {
            n: params.n,
            r,
            sigma: params.sigma,
            lambda: params.lambda,
            kappa: params.kappa,
            q_big: params.q_big,
            l: params.l,
            s1: params.s1,
            omega_star_measure: omega_star,
            mean_amplitude,
            l1_lower,
            l2_norm,
            ratio,
            pass_rate,
            seed: config.seed,
            wall_time_s: started.elapsed().as_secs_f64(),
        });
    }
    Ok(SweepOutcome {
        records,
        skipped,
        weyl_fit,
    })
}

/// Least-squares slope of log(l1_lower/l2_norm) against log R: the measured
/// growth exponent s'.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub stderr: f64,
    pub points: usize,
}

pub fn fit_growth(records: &[ExperimentRecord]) -> Result<GrowthFit> {
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.r.ln(), (r.l1_lower / r.l2_norm).ln()))
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
    let n = pts.len();
    if n < 3 {
        return Err(Error::invalid("fit_growth needs at least 3 distinct R"));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let stderr = (ss_res / (nf - 2.0) / sxx).sqrt();
    Ok(GrowthFit {
        slope,
        stderr,
        points: n,
    })
}

/// 17 significant digits: enough for exact f64 round-trips.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Emit records as CSV with the declared column order.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in records {
        let row = [
            r.n.to_string(),
            fmt_f64(r.r),
            fmt_f64(r.sigma),
            fmt_f64(r.lambda),
            fmt_f64(r.kappa),
            fmt_f64(r.q_big),
            fmt_f64(r.l),
            fmt_f64(r.s1),
            fmt_f64(r.omega_star_measure),
            fmt_f64(r.mean_amplitude),
            fmt_f64(r.l1_lower),
            fmt_f64(r.l2_norm),
            fmt_f64(r.ratio),
            fmt_f64(r.pass_rate),
            r.seed.to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse records back from the CSV emitted above (wall time restored as 0).
pub fn records_from_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let get = |i: usize| -> Result<f64> {
            row.get(i)
                .ok_or_else(|| Error::Config(format!("missing column {i}")))?
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad float: {e}")))
        };
        out.push(ExperimentRecord {
            n: get(0)? as usize,
            r: get(1)?,
            sigma: get(2)?,
            lambda: get(3)?,
            kappa: get(4)?,
            q_big: get(5)?,
            l: get(6)?,
            s1: get(7)?,
            omega_star_measure: get(8)?,
            mean_amplitude: get(9)?,
            l1_lower: get(10)?,
            l2_norm: get(11)?,
            ratio: get(12)?,
            pass_rate: get(13)?,
            seed: get(14)? as u64,
            wall_time_s: 0.0,
        });
    }
    Ok(out)
}

pub fn records_to_json(records: &[ExperimentRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

/// A minimal log-log chart of ratio against R with the fitted slope noted.
pub fn records_to_svg(records: &[ExperimentRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::invalid("no records to plot"));
    }
    let (w, h, pad) = (640.0, 420.0, 50.0);
    let xs: Vec<f64> = records.iter().map(|r| r.r.log10()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.ratio.log10()).collect();
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let (ymin, ymax) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let sx = |x: f64| pad + (x - xmin) / (xmax - xmin).max(1e-12) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - ymin) / (ymax - ymin).max(1e-12) * (h - 2.0 * pad);
    let slope_note = fit_growth(records)
        .map(|g| format!("fitted slope {:.4} +/- {:.4}", g.slope, g.stderr))
        .unwrap_or_else(|_| "slope: needs >= 3 points".to_string());
    let mut path = String::new();
    for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        path.push_str(if i == 0 { "M" } else { " L" });
        path.push_str(&format!("{:.2},{:.2}", sx(x), sy(y)));
    }
    let mut dots = String::new();
    for (&x, &y) in xs.iter().zip(&ys) {
        dots.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#c4453c\"/>",
            sx(x),
            sy(y)
        ));
    }
    Ok(format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <path d=\"{path}\" stroke=\"#2a6f97\" stroke-width=\"1.5\" fill=\"none\"/>\n\
         {dots}\n\
         <text x=\"{pad}\" y=\"24\" font-family=\"monospace\" font-size=\"13\">\
         log10 ratio vs log10 R - {slope_note}</text>\n\
         <text x=\"{pad}\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"11\">\
         log10 R from {:.2} to {:.2}</text>\n\
         </svg>\n",
        h - 12.0,
        xmin,
        xmax
    ))
}

/// Run provenance written next to every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub library_version: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub weyl_fit: Option<WeylFit>,
    pub skipped: Vec<(f64, String)>,
    pub wall_times_s: Vec<f64>,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(config: serde_json::Value, seed: u64) -> Self {
        RunManifest {
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            seed,
            weyl_fit: None,
            skipped: Vec::new(),
            wall_times_s: Vec::new(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(
            f,
            "{}",
            serde_json::to_string_pretty(self).expect("manifest serialize")
        )?;
        Ok(())
    }
}
