//! The arithmetic set Ω ⊂ 𝕋ⁿ and its physical-space lift Ω*.
//!
//! Ω is a union over moduli q ≡ 0 (mod 4), 4μ₀Q ≤ q ≤ 4Q, of boxes centered
//! at rational points: the first coordinate sits within U of 2πa₁/q with
//! (a₁, q) = 1, the others within V of 2πa_j/q with a_j even. The congruence
//! conditions force every Gauss sum G(a₁, a_j; q) into the nonvanishing
//! √(2q) case. Points of Ω* pull back to x in the unit cube, and for each
//! one a time t is chosen so that the quadratic phase coefficient L²t lands
//! exactly on 2π·(a₁ + l₁q)/q — rational, hence exactly reducible.

use crate::error::{Error, Result};
use crate::exponential_sums::ChosenTime;
use crate::measure::{
    box_union_measure, box_union_mc, grid_union_area, interval_union_measure, rect_union_area,
    AxisBox, GridGroup, Rect,
};
use crate::rational::gcd_u64;
use crate::wave_packet::PacketParams;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// One rational box of Ω.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaCell {
    pub q: u64,
    pub a1: u64,
    pub a_prime: Vec<u64>,
    // radii cached as bit patterns so the cell stays hashable/comparable
    u_radius_bits: u64,
    v_radius_bits: u64,
}

impl OmegaCell {
    pub fn new(q: u64, a1: u64, a_prime: Vec<u64>, u_radius: f64, v_radius: f64) -> Self {
        OmegaCell {
            q,
            a1,
            a_prime,
            u_radius_bits: u_radius.to_bits(),
            v_radius_bits: v_radius.to_bits(),
        }
    }

    pub fn u_radius(&self) -> f64 {
        f64::from_bits(self.u_radius_bits)
    }

    pub fn v_radius(&self) -> f64 {
        f64::from_bits(self.v_radius_bits)
    }

    /// Center angle of the first coordinate, 2πa₁/q.
    pub fn center1(&self) -> f64 {
        TAU * self.a1 as f64 / self.q as f64
    }

    /// Torus-reduced center angle of coordinate j (2 ≤ j ≤ n).
    pub fn center_j(&self, j: usize) -> f64 {
        let a = self.a_prime[j - 2] % self.q;
        TAU * a as f64 / self.q as f64
    }

    /// Residue used in the linear phase of coordinate j.
    pub fn lin_residue(&self, j: usize) -> i64 {
        (self.a_prime[j - 2] % self.q) as i64
    }

    pub fn check_invariants(&self, params: &PacketParams) -> Result<()> {
        let q = self.q;
        if !q.is_multiple_of(4) {
            return Err(Error::constraint("q ≡ 0 (mod 4)"));
        }
        if q < params.q_min() || q > params.q_max() {
            return Err(Error::constraint("4 mu0 Q <= q <= 4Q"));
        }
        if !(1 <= self.a1 && self.a1 <= q) || gcd_u64(self.a1, q) != 1 {
            return Err(Error::constraint("gcd(a1, q) = 1 with 1 <= a1 <= q"));
        }
        for &aj in &self.a_prime {
            if aj % 2 != 0 || !(2 <= aj && aj <= 2 * q) {
                return Err(Error::constraint("a_j even with 2 <= a_j <= 2q"));
            }
        }
        if self.u_radius() != params.u_radius() || self.v_radius() != params.v_radius() {
            return Err(Error::constraint("cell radii match params (U, V)"));
        }
        Ok(())
    }
}

/// A sampled point of Ω* with its chosen time decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalPoint {
    pub x: Vec<f64>,
    /// frequency-side torus point; y₁ + s = 2πa₁/q holds exactly through the
    /// stored offsets rather than through floating subtraction
    pub y: Vec<f64>,
    pub cell: OmegaCell,
    pub time: ChosenTime,
    pub tau: f64,
    /// the exact rational correction: s = 2πa₁/q − y₁ = −η₁
    pub s: f64,
    /// in-cell offsets η (coordinate 1 first)
    pub eta: Vec<f64>,
    /// periodization indices l (coordinate 1 first)
    pub lifts: Vec<i64>,
    /// true when built by the Ω* constructor with exact rational bookkeeping
    pub exact: bool,
}

impl EvalPoint {
    pub fn t(&self) -> f64 {
        self.time.t
    }

    /// A synthetic point for oracle comparisons: arbitrary x, and a time of
    /// the exact form t = 2π·num/(q·L²). Large-phase bookkeeping falls back
    /// to plain floating point, which is accurate at small scales.
    pub fn synthetic(x: Vec<f64>, t_num: i64, q: u64, params: &PacketParams) -> Self {
        let time = ChosenTime::new(t_num, q, params.l);
        let mut y = vec![crate::phase::reduce_mod_2pi(-x[0] * params.scale_m1())];
        let mut eta = vec![y[0]];
        let mut lifts = vec![0i64];
        for &xj in &x[1..] {
            let (hi, lo) = crate::phase::two_prod(params.l, xj);
            let yj = crate::phase::reduce_mod_2pi(crate::phase::reduce_mod_2pi(hi) + lo);
            y.push(yj);
            eta.push(yj);
            lifts.push(0);
        }
        let tau = time.t + x[0] / (2.0 * params.r);
        EvalPoint {
            x,
            y,
            cell: OmegaCell::new(q, 0, vec![0; params.n - 1], 0.0, 0.0),
            time,
            tau,
            s: params.l * params.l * tau,
            eta,
            lifts,
            exact: false,
        }
    }
}

/// Number of cells: Σ_q φ(q)·q^{n-1} over admissible q.
pub fn cell_count(params: &PacketParams) -> u128 {
    let mut total: u128 = 0;
    let mut q = params.q_min();
    while q <= params.q_max() {
        total += crate::diophantine::totient(q) as u128 * (q as u128).pow(params.n as u32 - 1);
        q += 4;
    }
    total
}

/// The constraints the Ω construction itself relies on: the modulus range is
/// nonempty, enough residues fit per block, and the box radii respect the
/// time-window and partial-summation caps. A subset of the full packet
/// validation, so toy configurations can exercise the set machinery.
pub fn omega_preconditions(params: &PacketParams) -> Vec<String> {
    let mut bad = Vec::new();
    let rl = params.rl_ratio();
    let c = &params.consts;
    let mut check = |ok: bool, name: &str| {
        if !ok {
            bad.push(name.to_string());
        }
    };
    check(
        rl >= params.q_big.powf(1.0 + c.delta_big0) * (1.0 - 1e-9),
        "R/L >= Q^(1+Delta0)",
    );
    check(
        params.l * params.l / (params.s1 * params.r) >= (1.0 - 1e-9) / params.q_big,
        "1/Q <= L^2/(S1 R)",
    );
    check(
        params.v_radius() / c.c4 <= (PI / c.mu0) / rl * (1.0 + 1e-9),
        "pi/((mu0 Q) Q^(1/(n-1))) <= C3'(n) (L/R)",
    );
    check(params.q_big >= 1.0 / (4.0 * c.mu0) * (1.0 - 1e-9), "Q >= 1/(4 mu0)");
    check(params.q_min() <= params.q_max(), "q range nonempty");
    bad
}

/// Validate the Ω preconditions and return the admissible modulus list.
pub fn admissible_moduli(params: &PacketParams) -> Result<Vec<u64>> {
    let bad = omega_preconditions(params);
    if !bad.is_empty() {
        return Err(Error::constraint(format!(
            "omega preconditions violated: {}",
            bad.join("; ")
        )));
    }
    Ok((params.q_min()..=params.q_max()).step_by(4).collect())
}

/// Enumerate every cell. Exhaustive; intended for desk-scale Q.
pub fn enumerate_cells(params: &PacketParams) -> Result<impl Iterator<Item = OmegaCell> + '_> {
    let moduli = admissible_moduli(params)?;
    let u_r = params.u_radius();
    let v_r = params.v_radius();
    let n = params.n;
    Ok(moduli.into_iter().flat_map(move |q| {
        let coprime: Vec<u64> = (1..=q).filter(|a| gcd_u64(*a, q) == 1).collect();
        let evens: Vec<u64> = (1..=q).map(|k| 2 * k).collect();
        let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
        for _ in 0..(n - 1) {
            let mut next = Vec::with_capacity(tuples.len() * evens.len());
            for t in &tuples {
                for &e in &evens {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let mut cells = Vec::with_capacity(coprime.len() * tuples.len());
        for &a1 in &coprime {
            for t in &tuples {
                cells.push(OmegaCell::new(q, a1, t.clone(), u_r, v_r));
            }
        }
        cells
    }))
}

/// Draw cells with probability proportional to their measure. All cells share
/// the same box volume, so the per-q weight is the cell count φ(q)·q^{n-1}.
pub struct CellSampler {
    moduli: Vec<u64>,
    cumulative: Vec<u128>,
    u_radius: f64,
    v_radius: f64,
    n: usize,
}

impl CellSampler {
    pub fn new(params: &PacketParams) -> Result<Self> {
        let moduli = admissible_moduli(params)?;
        let mut cumulative = Vec::with_capacity(moduli.len());
        let mut acc: u128 = 0;
        for &q in &moduli {
            acc += crate::diophantine::totient(q) as u128 * (q as u128).pow(params.n as u32 - 1);
            cumulative.push(acc);
        }
        Ok(CellSampler {
            moduli,
            cumulative,
            u_radius: params.u_radius(),
            v_radius: params.v_radius(),
            n: params.n,
        })
    }

    pub fn total(&self) -> u128 {
        *self.cumulative.last().unwrap_or(&0)
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> OmegaCell {
        let total = self.total();
        let ticket = rng.random_range(0..total.max(1));
        let idx = self.cumulative.partition_point(|c| *c <= ticket);
        let q = self.moduli[idx.min(self.moduli.len() - 1)];
        let mut a1 = rng.random_range(1..=q);
        while gcd_u64(a1, q) != 1 {
            a1 = rng.random_range(1..=q);
        }
        let a_prime: Vec<u64> = (0..self.n - 1)
            .map(|_| 2 * rng.random_range(1..=q))
            .collect();
        OmegaCell::new(q, a1, a_prime, self.u_radius, self.v_radius)
    }
}

/// First-coordinate interval family for one modulus, clipped to [0, 2π].
fn a1_intervals(q: u64, u_radius: f64) -> Vec<(f64, f64)> {
    (1..=q)
        .filter(|a| gcd_u64(*a, q) == 1)
        .map(|a| {
            let c = TAU * a as f64 / q as f64;
            ((c - u_radius).max(0.0), (c + u_radius).min(TAU))
        })
        .collect()
}

/// Other-coordinate interval family: multiples of 4π/q on the torus, split at
/// the wrap-around.
fn b_intervals(q: u64, v_radius: f64) -> Vec<(f64, f64)> {
    let step = 2.0 * TAU / q as f64;
    let mut out = Vec::with_capacity(q as usize / 2 + 1);
    for k in 1..=q / 2 {
        let c = step * k as f64;
        if c + v_radius > TAU {
            // the k = q/2 center sits at 2π ≡ 0
            out.push((c - v_radius, TAU));
            out.push((0.0, c + v_radius - TAU));
        } else {
            out.push((c - v_radius, c + v_radius));
        }
    }
    out
}

/// Exact sweep measure of the union over coprime a₁ of the first-coordinate
/// intervals. They are disjoint whenever 2U < 2π/q, giving φ(q)·2U.
pub fn first_coord_measure(q: u64, params: &PacketParams) -> f64 {
    interval_union_measure(&a1_intervals(q, params.u_radius()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureMode {
    ExactProduct,
    MonteCarlo,
}

/// A measure value with uncertainty and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureReport {
    pub value: f64,
    pub ci_halfwidth: f64,
    pub mode: MeasureMode,
    pub samples: u64,
    pub seed: u64,
    pub note: String,
}

/// Measure of Ω ⊂ [0, 2π]ⁿ. Exact mode runs the grouped sweep (n = 2) or a
/// first-axis slab sweep over exact rectangle unions (n = 3); Monte Carlo
/// returns an unbiased estimate with a 95% confidence half-width.
pub fn omega_measure(
    params: &PacketParams,
    mode: MeasureMode,
    samples: u64,
    seed: u64,
) -> Result<MeasureReport> {
    let moduli = admissible_moduli(params)?;
    match mode {
        MeasureMode::ExactProduct => {
            if params.n > 3 {
                return Err(Error::TooLarge(
                    "exact_product supports n <= 3; use monte_carlo".into(),
                ));
            }
            let u_r = params.u_radius();
            let v_r = params.v_radius();
            let value = if params.n == 2 {
                let groups: Vec<GridGroup> = moduli
                    .iter()
                    .map(|&q| GridGroup {
                        x_intervals: a1_intervals(q, u_r),
                        y_intervals: b_intervals(q, v_r),
                    })
                    .collect();
                grid_union_area(&groups)
            } else {
                exact_measure_3d(&moduli, u_r, v_r)?
            };
            Ok(MeasureReport {
                value,
                ci_halfwidth: 0.0,
                mode,
                samples: 0,
                seed,
                note: "exact union sweep".into(),
            })
        }
        MeasureMode::MonteCarlo => {
            if samples == 0 {
                return Err(Error::invalid("sample count must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            let mut y = vec![0.0; params.n];
            for _ in 0..samples {
                for v in y.iter_mut() {
                    *v = rng.random_range(0.0..TAU);
                }
                if omega_contains(&y, params, &moduli) {
                    hits += 1;
                }
            }
            let vol = TAU.powi(params.n as i32);
            let p = hits as f64 / samples as f64;
            let half = 1.96 * (p * (1.0 - p) / samples as f64).sqrt() * vol;
            Ok(MeasureReport {
                value: p * vol,
                ci_halfwidth: half,
                mode,
                samples,
                seed,
                note: "seeded membership sampling".into(),
            })
        }
    }
}

type IntervalFamily = (Vec<(f64, f64)>, Vec<(f64, f64)>);

fn exact_measure_3d(moduli: &[u64], u_radius: f64, v_radius: f64) -> Result<f64> {
    let groups: Vec<IntervalFamily> = moduli
        .iter()
        .map(|&q| (a1_intervals(q, u_radius), b_intervals(q, v_radius)))
        .collect();
    let rect_cost: u64 = groups.iter().map(|(_, b)| (b.len() * b.len()) as u64).sum();
    if rect_cost > 2_000_000 {
        return Err(Error::TooLarge(format!(
            "n = 3 exact sweep would build {rect_cost} rectangles per slab; use monte_carlo"
        )));
    }
    let mut xs: Vec<f64> = groups
        .iter()
        .flat_map(|(a, _)| a.iter().flat_map(|&(lo, hi)| [lo, hi]))
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let mut total = 0.0;
    for w in xs.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let mut rects = Vec::new();
        for (a_iv, b_iv) in &groups {
            if a_iv.iter().any(|&(alo, ahi)| alo <= mid && mid < ahi) {
                for &(y0, y1) in b_iv {
                    for &(z0, z1) in b_iv {
                        rects.push(Rect {
                            x0: y0,
                            x1: y1,
                            y0: z0,
                            y1: z1,
                        });
                    }
                }
            }
        }
        if !rects.is_empty() {
            total += (hi - lo) * rect_union_area(&rects);
        }
    }
    Ok(total)
}

/// Membership test for y ∈ Ω given the admissible moduli.
pub fn omega_contains(y: &[f64], params: &PacketParams, moduli: &[u64]) -> bool {
    let u_r = params.u_radius();
    let v_r = params.v_radius();
    'next_q: for &q in moduli {
        let qf = q as f64;
        // coordinate 1: nearest rational center; spacing 2π/q > 2U makes the
        // rounded candidate the only one in range
        let a = (y[0] * qf / TAU).round() as i64;
        if a < 1 || a > q as i64 || gcd_u64(a as u64, q) != 1 {
            continue;
        }
        if (y[0] - TAU * a as f64 / qf).abs() >= u_r {
            continue;
        }
        // other coordinates: distance to the nearest multiple of 4π/q
        let step = 2.0 * TAU / qf;
        for &yj in &y[1..] {
            let d = (yj - step * (yj / step).round()).abs();
            if d >= v_r {
                continue 'next_q;
            }
        }
        return true;
    }
    false
}

/// Result of the cube-rescaling check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VitaliCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub mc_lhs: f64,
    pub mc_ci: f64,
}

/// Shrink each cube about its center by factor c and compare the union
/// measures: |∪B*| ≥ c^m 3^{-m} |∪B|. The exact unions come from the sweep;
/// a seeded Monte Carlo estimate of the left side is reported alongside.
pub fn vitali_rescale_check(boxes: &[AxisBox], c: f64, seed: u64) -> Result<VitaliCheck> {
    if boxes.is_empty() {
        return Err(Error::invalid("no boxes"));
    }
    let m = boxes[0].len();
    if !(1..=3).contains(&m) {
        return Err(Error::invalid("dimension must be 1..=3"));
    }
    if !(0.0 < c && c < 1.0) {
        return Err(Error::invalid("c must lie in (0,1)"));
    }
    let shrunk: Vec<AxisBox> = boxes
        .iter()
        .map(|b| {
            b.iter()
                .map(|&(lo, hi)| {
                    let mid = 0.5 * (lo + hi);
                    let half = 0.5 * (hi - lo) * c;
                    (mid - half, mid + half)
                })
                .collect()
        })
        .collect();
    let lhs = box_union_measure(&shrunk);
    let rhs = c.powi(m as i32) * 3f64.powi(-(m as i32)) * box_union_measure(boxes);
    let mut bounds: AxisBox = vec![(f64::INFINITY, f64::NEG_INFINITY); m];
    for b in boxes {
        for (k, &(lo, hi)) in b.iter().enumerate() {
            bounds[k].0 = bounds[k].0.min(lo);
            bounds[k].1 = bounds[k].1.max(hi);
        }
    }
    let (mc_lhs, mc_ci) = box_union_mc(&shrunk, &bounds, 100_000, seed);
    Ok(VitaliCheck {
        lhs,
        rhs,
        pass: lhs >= rhs * (1.0 - 1e-12),
        mc_lhs,
        mc_ci,
    })
}

/// Periodized-copy counts for the pullback to physical space.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CopyCounts {
    /// copies available in coordinate 1 within [-c₁, -c₁/2]
    pub coord1: u64,
    /// copies available in each other coordinate within [-c₁, c₁]
    pub coord_other: u64,
    pub scale_m1: f64,
    pub scale_other: f64,
}

impl CopyCounts {
    pub fn for_params(params: &PacketParams) -> CopyCounts {
        let m1 = params.scale_m1();
        let c1 = params.consts.c1;
        CopyCounts {
            coord1: (m1 * c1 / (4.0 * PI)).floor() as u64,
            coord_other: 2 * ((params.l * c1 / TAU).floor() as u64),
            scale_m1: m1,
            scale_other: params.l,
        }
    }

    /// The measure scaling |Ω*|/|Ω| implied by the copy counts.
    pub fn measure_factor(&self, n: usize) -> f64 {
        (self.coord1 as f64 / self.scale_m1)
            * (self.coord_other as f64 / self.scale_other).powi(n as i32 - 1)
    }

    /// Lower bound constant of the lift: c₁' = (c₁/8π)·(c₁/2π)^{n-1}.
    pub fn c1_prime(c1: f64, n: usize) -> f64 {
        (c1 / (8.0 * PI)) * (c1 / TAU).powi(n as i32 - 1)
    }
}

/// Build the point of Ω* determined by a cell, in-cell offsets η, and
/// periodization indices l, choosing t so that L²t ≡ 2πa₁/q exactly.
fn point_from_parts(
    cell: &OmegaCell,
    params: &PacketParams,
    eta: &[f64],
    lifts: &[i64],
) -> Result<EvalPoint> {
    let q = cell.q;
    let m1 = params.scale_m1();
    let y1 = cell.center1() + eta[0];
    let x1 = -(y1 + TAU * lifts[0] as f64) / m1;
    let mut x = vec![x1];
    let mut y = vec![y1];
    for j in 2..=params.n {
        let yj = cell.center_j(j) + eta[j - 1];
        y.push(yj);
        x.push((yj + TAU * lifts[j - 1] as f64) / params.l);
    }
    let num = cell.a1 as i64 + lifts[0] * q as i64;
    let time = ChosenTime::new(num, q, params.l);
    let tau = -eta[0] / (params.l * params.l);
    let s = -eta[0];
    let point = EvalPoint {
        x,
        y,
        cell: cell.clone(),
        time,
        tau,
        s,
        eta: eta.to_vec(),
        lifts: lifts.to_vec(),
        exact: true,
    };
    verify_time_constraints(&point, params)?;
    Ok(point)
}

/// The usability constraints on the chosen time and point, each named.
fn verify_time_constraints(point: &EvalPoint, params: &PacketParams) -> Result<()> {
    let c = &params.consts;
    let t = point.time.t;
    let tau_cap = c.c2 / (params.s1 * params.r);
    if point.tau.abs() > tau_cap * (1.0 + 1e-9) {
        return Err(Error::constraint(format!(
            "|tau| <= c2/(S1 R) violated: |{}| > {tau_cap}",
            point.tau
        )));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::constraint(format!("t in (0,1) violated: t = {t}")));
    }
    let cap1 = c.c0 / (4.0 * c.phi_hat_l1 * params.s1 * params.s1);
    if t > cap1 * (1.0 + 1e-9) {
        return Err(Error::constraint(format!(
            "t <= c0/(4 |phi_hat|_1 S1^2) violated: {t} > {cap1}"
        )));
    }
    let cap2 = c.delta0 / (8.0 * params.r);
    if t > cap2 * (1.0 + 1e-9) {
        return Err(Error::constraint(format!(
            "t <= delta0/(8R) violated: {t} > {cap2}"
        )));
    }
    let x1 = point.x[0];
    if !(-c.c1 - 1e-12 <= x1 && x1 <= -c.c1 / 2.0 + 1e-12) {
        return Err(Error::constraint(format!(
            "x1 in [-c1, -c1/2] violated: x1 = {x1}"
        )));
    }
    for (j, &xj) in point.x.iter().enumerate().skip(1) {
        if xj.abs() > c.c1 * (1.0 + 1e-9) {
            return Err(Error::constraint(format!(
                "|x_{}| <= c1 violated: {xj}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Outcome of pulling one cell back to physical space.
#[derive(Debug, Clone)]
pub struct LiftOutcome {
    pub points: Vec<EvalPoint>,
    pub copies: CopyCounts,
}

fn draw_lift_indices(
    params: &PacketParams,
    y1: f64,
    y_other: &[f64],
    rng: &mut ChaCha8Rng,
) -> Vec<i64> {
    let c1 = params.consts.c1;
    let m1 = params.scale_m1();
    // l₁ with y₁ + 2πl₁ in [M₁c₁/2, M₁c₁]
    let lo1 = ((m1 * c1 / 2.0 - y1) / TAU).ceil() as i64;
    let hi1 = ((m1 * c1 - y1) / TAU).floor() as i64;
    let l1 = if lo1 >= hi1 {
        lo1
    } else {
        rng.random_range(lo1..=hi1)
    };
    let mut lifts = vec![l1];
    for &yj in y_other {
        let lo = ((-params.l * c1 - yj) / TAU).ceil() as i64;
        let hi = ((params.l * c1 - yj) / TAU).floor() as i64;
        lifts.push(if lo >= hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        });
    }
    lifts
}

/// Pull `copies` seeded sample points of the cell back to Ω*. Offsets are
/// uniform within the cell box; periodized copies are drawn uniformly from
/// the available ranges. Requires at least one copy to fit, i.e.
/// L²/(2R)·c₁ ≥ 4π and L·c₁ ≥ 2π.
pub fn lift_to_omega_star(
    cell: &OmegaCell,
    params: &PacketParams,
    copies: u64,
    seed: u64,
) -> Result<LiftOutcome> {
    let counts = CopyCounts::for_params(params);
    if counts.coord1 == 0 {
        return Err(Error::constraint(
            "L^2/(2R)·c1 >= 4π required for a coordinate-1 copy (R below the lift threshold)",
        ));
    }
    if counts.coord_other == 0 {
        return Err(Error::constraint(
            "L·c1 >= 2π required for other-coordinate copies (R below the lift threshold)",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_r = cell.u_radius() * (1.0 - 1e-9);
    let v_r = cell.v_radius() * (1.0 - 1e-9);
    let mut points = Vec::with_capacity(copies as usize);
    for _ in 0..copies {
        let mut eta = vec![if u_r > 0.0 {
            rng.random_range(-u_r..u_r)
        } else {
            0.0
        }];
        for _ in 0..params.n - 1 {
            eta.push(if v_r > 0.0 {
                rng.random_range(-v_r..v_r)
            } else {
                0.0
            });
        }
        let y1 = cell.center1() + eta[0];
        let y_other: Vec<f64> = (2..=params.n)
            .map(|j| cell.center_j(j) + eta[j - 1])
            .collect();
        let lifts = draw_lift_indices(params, y1, &y_other, &mut rng);
        points.push(point_from_parts(cell, params, &eta, &lifts)?);
    }
    Ok(LiftOutcome {
        points,
        copies: counts,
    })
}

/// Draw `count` measure-weighted cells and lift one seeded point from each.
pub fn sample_points(params: &PacketParams, count: u64, seed: u64) -> Result<Vec<EvalPoint>> {
    let sampler = CellSampler::new(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count as usize);
    for k in 0..count {
        let cell = sampler.draw(&mut rng);
        points.extend(lift_to_omega_star(&cell, params, 1, seed.wrapping_add(k))?.points);
    }
    Ok(points)
}

/// The center pullback: zero offsets, lowest admissible copy indices.
pub fn lift_cell_center(cell: &OmegaCell, params: &PacketParams) -> Result<EvalPoint> {
    let counts = CopyCounts::for_params(params);
    if counts.coord1 == 0 || counts.coord_other == 0 {
        return Err(Error::constraint(
            "R below the lift threshold for the Ω* construction",
        ));
    }
    let c1 = params.consts.c1;
    let m1 = params.scale_m1();
    let eta = vec![0.0; params.n];
    let y1 = cell.center1();
    let mut lifts = vec![((m1 * c1 / 2.0 - y1) / TAU).ceil() as i64];
    for j in 2..=params.n {
        let yj = cell.center_j(j);
        lifts.push(((-params.l * c1 - yj) / TAU).ceil() as i64);
    }
    point_from_parts(cell, params, &eta, &lifts)
}

/// Recover the cell decomposition of a lifted x and choose its time. The
/// public entry matching the construction: x must project into the cell's
/// box under the scaling maps.
pub fn choose_t(x: &[f64], cell: &OmegaCell, params: &PacketParams) -> Result<EvalPoint> {
    if x.len() != params.n {
        return Err(Error::invalid("x dimension mismatch"));
    }
    let m1 = params.scale_m1();
    let w1 = -x[0] * m1;
    let c1_angle = cell.center1();
    let l1 = ((w1 - c1_angle) / TAU).round() as i64;
    let eta1 = w1 - TAU * l1 as f64 - c1_angle;
    if eta1.abs() > cell.u_radius() * (1.0 + 1e-6) {
        return Err(Error::constraint(format!(
            "x1 does not project into the cell's first-coordinate interval (|eta1| = {} > U = {})",
            eta1.abs(),
            cell.u_radius()
        )));
    }
    let mut eta = vec![eta1];
    let mut lifts = vec![l1];
    for j in 2..=params.n {
        let wj = x[j - 1] * params.l;
        let cj = cell.center_j(j);
        let lj = ((wj - cj) / TAU).round() as i64;
        let etaj = wj - TAU * lj as f64 - cj;
        if etaj.abs() > cell.v_radius() * (1.0 + 1e-6) {
            return Err(Error::constraint(format!(
                "x_{j} does not project into the cell's interval (|eta| = {} > V = {})",
                etaj.abs(),
                cell.v_radius()
            )));
        }
        eta.push(etaj);
        lifts.push(lj);
    }
    point_from_parts(cell, params, &eta, &lifts)
}
