//! Command-line driver: exponent solving, arithmetic corpora, measure
//! reports, point propagation, and R-sweeps with growth-slope fits.
//!
//! Every run writes its outputs under a run directory together with a
//! manifest capturing the configuration, seeds, and library version.
//! `SCHRODMAX_THREADS` bounds the worker pool.

use clap::{Parser, Subcommand};
use schrodmax::diophantine::dirichlet_simultaneous;
use schrodmax::experiment::{
    fit_growth, records_to_csv, records_to_json, records_to_svg, run_sweep, RunManifest,
    SweepConfig,
};
use schrodmax::exponential_sums::{
    fit_weyl_c0, gauss_sum_brute, gauss_sum_closed, quadratic_weyl_sum, weyl_bound_rhs,
    PhaseConvention,
};
use schrodmax::omega::{lift_to_omega_star, omega_measure, CellSampler, MeasureMode};
use schrodmax::propagator::propagate;
use schrodmax::rational::gcd_u64;
use schrodmax::wave_packet::{packet_params, solve_exponents, Constants};
use schrodmax::{make_bump, Result};
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "schrodmax", version, about = "maximal-function counterexample laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the scaling-exponent system for dimension n.
    SolveExponents {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
    },
    /// Emit the Gauss-sum corpus for all moduli up to qmax.
    Gauss {
        #[arg(long)]
        qmax: u64,
        #[arg(long, default_value = "out/gauss")]
        out: PathBuf,
    },
    /// Seeded Weyl-bound trials and the fitted constant.
    Weyl {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/weyl")]
        out: PathBuf,
    },
    /// Simultaneous Dirichlet approximation over a seeded grid.
    Dirichlet {
        #[arg(long)]
        m: usize,
        #[arg(long = "Q")]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        grid: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/dirichlet")]
        out: PathBuf,
    },
    /// Measure of the rational box set at the scale implied by Q.
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 400_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// override the first-coordinate radius constant c3
        #[arg(long)]
        c3: Option<f64>,
        /// override the other-coordinate radius constant c4
        #[arg(long)]
        c4: Option<f64>,
        #[arg(long, default_value = "out/omega")]
        out: PathBuf,
    },
    /// Propagate seeded Ω* points at one scale R.
    Propagate {
        #[arg(long)]
        n: usize,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 64)]
        points: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/propagate")]
        out: PathBuf,
    },
    /// Full R-sweep from a JSON config; emits CSV, JSON, SVG, manifest.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    if let Ok(threads) = std::env::var("SCHRODMAX_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_run(out: &PathBuf, name: &str, contents: &str, manifest: &RunManifest) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join(name), contents)?;
    manifest.write_to(&out.join("manifest.json"))?;
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::SolveExponents { n, sigma } => {
            let sol = solve_exponents(n, sigma)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&sol).expect("solution serialize")
            );
        }
        Command::Gauss { qmax, out } => {
            let mut csv = String::from("a,b,q,re,im,magnitude,case_tag\n");
            for q in 1..=qmax {
                for a in 1..=q {
                    if gcd_u64(a, q) != 1 {
                        continue;
                    }
                    for b in 0..q {
                        let v = gauss_sum_brute(a as i64, b as i64, q)?;
                        let law = gauss_sum_closed(a as i64, b as i64, q)?;
                        csv.push_str(&format!(
                            "{a},{b},{q},{},{},{},{}\n",
                            fmt(v.re),
                            fmt(v.im),
                            fmt(v.norm()),
                            law.case.as_str()
                        ));
                    }
                }
            }
            let manifest = RunManifest::new(
                serde_json::json!({"command": "gauss", "qmax": qmax}),
                0,
            );
            write_run(&out, "gauss.csv", &csv, &manifest)?;
            println!("wrote {}", out.join("gauss.csv").display());
        }
        Command::Weyl { trials, seed, out } => {
            use rand::Rng;
            let mut rng = rand_chacha_rng(seed);
            let mut csv = String::from("q,a,alpha,beta,m_start,n_len,magnitude,rhs_unit,ratio\n");
            let mut max_ratio: f64 = 0.0;
            for _ in 0..trials {
                let q: u64 = rng.random_range(2..=10_000);
                let mut a: u64 = rng.random_range(1..=q);
                while gcd_u64(a, q) != 1 {
                    a = rng.random_range(1..=q);
                }
                let jitter: f64 = rng.random_range(-1.0..1.0);
                let alpha = a as f64 / q as f64 + jitter / (q as f64 * q as f64);
                let beta: f64 = rng.random_range(0.0..1.0);
                let m_start: i64 = rng.random_range(-50_000..50_000);
                let n_len: u64 = rng.random_range(1..=100_000);
                let s = quadratic_weyl_sum(alpha, beta, m_start, n_len, PhaseConvention::TwoPi);
                let rhs = weyl_bound_rhs(q, n_len, 1.0)?;
                let ratio = s.norm() / rhs;
                max_ratio = max_ratio.max(ratio);
                csv.push_str(&format!(
                    "{q},{a},{},{},{m_start},{n_len},{},{},{}\n",
                    fmt(alpha),
                    fmt(beta),
                    fmt(s.norm()),
                    fmt(rhs),
                    fmt(ratio)
                ));
            }
            let fit = fit_weyl_c0(trials.min(256), seed);
            let mut manifest = RunManifest::new(
                serde_json::json!({"command": "weyl", "trials": trials, "max_ratio": max_ratio}),
                seed,
            );
            manifest.weyl_fit = Some(fit);
            write_run(&out, "weyl.csv", &csv, &manifest)?;
            println!(
                "max ratio over {trials} trials: {max_ratio:.6}; wrote {}",
                out.join("weyl.csv").display()
            );
        }
        Command::Dirichlet {
            m,
            q,
            grid,
            seed,
            out,
        } => {
            use rand::Rng;
            let mut rng = rand_chacha_rng(seed);
            let p = (q as f64).powf(1.0 / m as f64).floor().max(1.0);
            let mut header: Vec<String> = (0..m).map(|j| format!("y{}", j + 1)).collect();
            header.push("q".into());
            header.extend((0..m).map(|j| format!("a{}", j + 1)));
            header.extend(["max_err".into(), "bound".into(), "ok".into()]);
            let mut csv = header.join(",");
            csv.push('\n');
            let mut all_ok = true;
            for _ in 0..grid {
                let y: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
                let res = dirichlet_simultaneous(&y, q)?;
                let max_err = res.errors.iter().cloned().fold(0.0f64, f64::max);
                let bound = 1.0 / (res.q as f64 * p);
                let ok = res.satisfies_bound(q);
                all_ok &= ok;
                let mut row: Vec<String> = y.iter().map(|v| fmt(*v)).collect();
                row.push(res.q.to_string());
                row.extend(res.a.iter().map(|a| a.to_string()));
                row.extend([fmt(max_err), fmt(bound), ok.to_string()]);
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            let manifest = RunManifest::new(
                serde_json::json!({"command": "dirichlet", "m": m, "Q": q, "grid": grid, "all_ok": all_ok}),
                seed,
            );
            write_run(&out, "dirichlet.csv", &csv, &manifest)?;
            println!(
                "{} points, bound satisfied everywhere: {all_ok}; wrote {}",
                grid,
                out.join("dirichlet.csv").display()
            );
        }
        Command::Omega {
            n,
            q,
            exact,
            mc,
            samples,
            seed,
            c3,
            c4,
            out,
        } => {
            let bump = make_bump(256)?;
            let sol = solve_exponents(n, 0.5)?;
            let mut consts = Constants::calibrated(n, &bump, 1.0);
            if let Some(v) = c3 {
                consts.c3 = v;
            }
            if let Some(v) = c4 {
                consts.c4 = v;
            }
            // R implied by Q through the optimized exponent: R = Q^{1/κ}
            let r = q.powf(1.0 / sol.kappa);
            let params = schrodmax::wave_packet::PacketParams::assemble(n, r, &sol, consts);
            let mode = if mc {
                MeasureMode::MonteCarlo
            } else if exact || n <= 3 {
                MeasureMode::ExactProduct
            } else {
                MeasureMode::MonteCarlo
            };
            let report = omega_measure(&params, mode, samples, seed)?;
            let mut csv = String::from("q_big,n,mode,samples,seed,measure,ci\n");
            csv.push_str(&format!(
                "{},{n},{:?},{},{seed},{},{}\n",
                fmt(params.q_big),
                report.mode,
                report.samples,
                fmt(report.value),
                fmt(report.ci_halfwidth)
            ));
            // cell dump: a seeded sample of the rational boxes
            let sampler = CellSampler::new(&params)?;
            let mut rng = rand_chacha_rng(seed);
            let mut cells_csv = {
                let mut header: Vec<String> = vec!["q".into(), "a1".into()];
                header.extend((2..=n).map(|j| format!("a{j}")));
                header.extend(["U".into(), "V".into()]);
                header.join(",") + "\n"
            };
            for _ in 0..1000.min(schrodmax::omega::cell_count(&params)) {
                let cell = sampler.draw(&mut rng);
                let mut row = vec![cell.q.to_string(), cell.a1.to_string()];
                row.extend(cell.a_prime.iter().map(|a| a.to_string()));
                row.extend([fmt(cell.u_radius()), fmt(cell.v_radius())]);
                cells_csv.push_str(&row.join(","));
                cells_csv.push('\n');
            }
            let manifest = RunManifest::new(
                serde_json::json!({
                    "command": "omega", "n": n, "Q": q, "R": r, "note": report.note,
                    "params": params, "constraint_violations": params.validate(),
                }),
                seed,
            );
            fs::create_dir_all(&out)?;
            fs::write(out.join("cells.csv"), &cells_csv)?;
            write_run(&out, "omega.csv", &csv, &manifest)?;
            println!(
                "|Omega| = {} ± {} ({:?}); wrote {}",
                report.value,
                report.ci_halfwidth,
                report.mode,
                out.join("omega.csv").display()
            );
        }
        Command::Propagate {
            n,
            r,
            points,
            seed,
            out,
        } => {
            let bump = make_bump(256)?;
            let fit = fit_weyl_c0(256, 0xC0);
            let consts = Constants::calibrated(n, &bump, fit.c0);
            let sol = solve_exponents(n, 0.5)?;
            let params = packet_params(n, r, &sol, consts)?;
            let sampler = CellSampler::new(&params)?;
            let mut rng = rand_chacha_rng(seed);
            let mut pts = Vec::new();
            for k in 0..points {
                let cell = sampler.draw(&mut rng);
                let lifted = lift_to_omega_star(&cell, &params, 1, seed.wrapping_add(k))?;
                pts.extend(lifted.points);
            }
            use rayon::prelude::*;
            let results: Vec<_> = pts
                .par_iter()
                .map(|pt| propagate(pt, &params, &bump))
                .collect::<Result<Vec<_>>>()?;
            let mut header: Vec<String> = vec!["n".into(), "r".into(), "q".into()];
            header.extend((1..=n).map(|j| format!("x{j}")));
            header.extend(
                [
                    "t",
                    "amplitude_abs",
                    "main_term",
                    "e1",
                    "e2",
                    "e3",
                    "lower_bound_target",
                    "passed",
                ]
                .map(String::from),
            );
            let mut csv = header.join(",");
            csv.push('\n');
            let mut passed = 0u64;
            for (pt, res) in pts.iter().zip(&results) {
                passed += res.passed as u64;
                let mut row = vec![n.to_string(), fmt(r), pt.cell.q.to_string()];
                row.extend(pt.x.iter().map(|v| fmt(*v)));
                row.extend([
                    fmt(pt.t()),
                    fmt(res.amplitude.norm()),
                    fmt(res.main_term),
                    fmt(res.e1_bound),
                    fmt(res.e2_bound),
                    fmt(res.e3_bound),
                    fmt(res.lower_bound_target),
                    res.passed.to_string(),
                ]);
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            let mut manifest = RunManifest::new(
                serde_json::json!({
                    "command": "propagate", "n": n, "R": r, "points": points,
                    "pass_rate": passed as f64 / results.len().max(1) as f64,
                    "params": params, "constraint_violations": params.validate(),
                }),
                seed,
            );
            manifest.weyl_fit = Some(fit);
            write_run(&out, "propagate.csv", &csv, &manifest)?;
            println!(
                "pass rate {}/{}; wrote {}",
                passed,
                results.len(),
                out.join("propagate.csv").display()
            );
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)?;
            let cfg = SweepConfig::from_json(&text)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("out/sweep"));
            let bump = make_bump(256)?;
            let outcome = run_sweep(&cfg, &bump)?;
            fs::create_dir_all(&out_dir)?;
            fs::write(out_dir.join("records.csv"), records_to_csv(&outcome.records))?;
            fs::write(
                out_dir.join("records.json"),
                records_to_json(&outcome.records),
            )?;
            if !outcome.records.is_empty() {
                fs::write(
                    out_dir.join("ratio.svg"),
                    records_to_svg(&outcome.records)?,
                )?;
            }
            let mut manifest = RunManifest::new(
                serde_json::to_value(&cfg).expect("config serialize"),
                cfg.seed,
            );
            manifest.weyl_fit = Some(outcome.weyl_fit.clone());
            manifest.skipped = outcome.skipped.clone();
            manifest.wall_times_s = outcome.records.iter().map(|r| r.wall_time_s).collect();
            manifest.write_to(&out_dir.join("manifest.json"))?;
            for (r, why) in &outcome.skipped {
                eprintln!("skipped R = {r}: {why}");
            }
            match fit_growth(&outcome.records) {
                Ok(fit) => println!(
                    "{} records; fitted growth slope {:.4} ± {:.4}; reports in {}",
                    outcome.records.len(),
                    fit.slope,
                    fit.stderr,
                    out_dir.display()
                ),
                Err(_) => println!(
                    "{} records (too few for a slope); reports in {}",
                    outcome.records.len(),
                    out_dir.display()
                ),
            }
        }
    }
    Ok(())
}

fn rand_chacha_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
