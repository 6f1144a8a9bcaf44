//! Quadratic exponential sums and their analytic bounds.
//!
//! The complete Gauss sum G(a,b;q) = Σ_{m mod q} e^{2πi(mb + m²a)/q} carries
//! the arithmetic of the whole construction: its magnitude is exactly 0, √q,
//! or √(2q) depending on residue classes. Incomplete pieces are controlled by
//! the quadratic Weyl bound. All rational phases are reduced with integer
//! arithmetic before any trigonometry; floating point only ever sees residues
//! below ~10⁶ radians.

use crate::error::{Error, Result};
use crate::phase::{geometric_phase_sum, rational_angle, reduce_mod_2pi, two_prod};
use crate::rational::gcd_u64;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Which case of the Gauss-sum magnitude law applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussCase {
    /// q odd: |G| = √q.
    OddQ,
    /// q ≡ 2 (mod 4) with b even, or q ≡ 0 (mod 4) with b odd: G = 0.
    ZeroCase,
    /// q ≡ 2 (mod 4) with b odd, or q ≡ 0 (mod 4) with b even: |G| = √(2q).
    DoubleCase,
}

impl GaussCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            GaussCase::OddQ => "odd_q",
            GaussCase::ZeroCase => "zero_case",
            GaussCase::DoubleCase => "double_case",
        }
    }
}

/// A Gauss sum with its magnitude and case tag. `value` is populated only by
/// the direct summation path; the closed law yields magnitudes alone.
#[derive(Debug, Clone, Copy)]
pub struct GaussSumValue {
    pub value: Option<Complex64>,
    pub magnitude: f64,
    pub case: GaussCase,
}

fn normalize_residue(a: i64, q: u64) -> u64 {
    (a.rem_euclid(q as i64)) as u64
}

/// Magnitude of G(a,b;q) by the closed case law. Requires gcd(a,q) = 1.
pub fn gauss_sum_closed(a: i64, b: i64, q: u64) -> Result<GaussSumValue> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let ar = normalize_residue(a, q);
    if q > 1 && gcd_u64(ar, q) != 1 {
        return Err(Error::invalid(format!(
            "gcd(a, q) must be 1, got a={a}, q={q}"
        )));
    }
    let br = normalize_residue(b, q);
    let (magnitude, case) = if q % 2 == 1 {
        ((q as f64).sqrt(), GaussCase::OddQ)
    } else {
        // even q: decided by the parity of q/2 + b
        let vanishes = (q / 2 + br) % 2 == 1;
        if vanishes {
            (0.0, GaussCase::ZeroCase)
        } else {
            ((2.0 * q as f64).sqrt(), GaussCase::DoubleCase)
        }
    };
    Ok(GaussSumValue {
        value: None,
        magnitude,
        case,
    })
}

/// Precomputed q-th roots of unity plus the incremental quadratic-residue
/// walk. One table serves every (a, b) pair with the same modulus.
pub struct GaussTable {
    pub q: u64,
    roots: Vec<Complex64>,
}

impl GaussTable {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("q must be positive"));
        }
        let roots = (0..q)
            .map(|r| Complex64::from_polar(1.0, TAU * r as f64 / q as f64))
            .collect();
        Ok(GaussTable { q, roots })
    }

    /// Σ_{u ≤ m ≤ u'} e^{2πi(mb + m²a)/q} with the residue index
    /// (mb + m²a) mod q advanced by an exact integer recurrence:
    /// p(m+1) − p(m) = b + a(2m+1).
    pub fn range_sum(&self, a: i64, b: i64, u: u64, u_prime: u64) -> Complex64 {
        let q = self.q;
        let ar = normalize_residue(a, q);
        let br = normalize_residue(b, q);
        let m0 = u as i128;
        let qi = q as i128;
        let mut cur =
            ((m0 % qi) * br as i128 + (m0 % qi) * (m0 % qi) * ar as i128).rem_euclid(qi) as u64;
        let mut delta = (br as i128 + ar as i128 * (2 * m0 + 1)).rem_euclid(qi) as u64;
        let step = (2 * ar) % q;
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in u..=u_prime {
            acc += self.roots[cur as usize];
            cur += delta;
            if cur >= q {
                cur -= q;
            }
            delta += step;
            if delta >= q {
                delta -= q;
            }
        }
        acc
    }

    /// Supremum over all windows 1 ≤ u ≤ u' ≤ q of |Σ_{u ≤ m ≤ u'}|: the
    /// diameter of the prefix-sum walk.
    pub fn incomplete_sup(&self, a: i64, b: i64) -> f64 {
        let q = self.q as usize;
        let mut prefix = Vec::with_capacity(q + 1);
        prefix.push(Complex64::new(0.0, 0.0));
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 1..=q as u64 {
            acc += self.range_sum(a, b, m, m);
            prefix.push(acc);
        }
        let mut sup: f64 = 0.0;
        for i in 0..q {
            for j in (i + 1)..=q {
                sup = sup.max((prefix[j] - prefix[i]).norm_sqr());
            }
        }
        sup.sqrt()
    }
}

/// Direct evaluation of the complete Gauss sum, Σ_{m=1..q}. The oracle path:
/// no coprimality requirement, exact integer reduction throughout.
pub fn gauss_sum_brute(a: i64, b: i64, q: u64) -> Result<Complex64> {
    let table = GaussTable::new(q)?;
    Ok(table.range_sum(a, b, 1, q))
}

/// Incomplete Gauss sum Σ_{u ≤ m ≤ u'}; same inner walk as the complete sum.
pub fn incomplete_gauss(a: i64, b: i64, q: u64, u: u64, u_prime: u64) -> Result<Complex64> {
    if !(1 <= u && u <= u_prime && u_prime <= q && u_prime - u < q) {
        return Err(Error::invalid(format!(
            "need 1 ≤ u ≤ u' ≤ q with u'-u < q, got u={u}, u'={u_prime}, q={q}"
        )));
    }
    let table = GaussTable::new(q)?;
    Ok(table.range_sum(a, b, u, u_prime))
}

/// Phase convention: e(x) = e^{ix} for the propagator sums, e^{2πix} for the
/// number-theoretic bounds. Mixing them silently is the classic failure mode,
/// so every generic sum takes the tag explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseConvention {
    Radian,
    TwoPi,
}

/// Σ_{M ≤ n < M+N} of e^{i·c·(αn² + βn)} with c picked by the convention.
pub fn quadratic_weyl_sum(
    alpha: f64,
    beta: f64,
    m_start: i64,
    n_len: u64,
    convention: PhaseConvention,
) -> Complex64 {
    let c = match convention {
        PhaseConvention::Radian => 1.0,
        PhaseConvention::TwoPi => TAU,
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n_len {
        let n = (m_start + k as i64) as f64;
        acc += Complex64::from_polar(1.0, c * (alpha * n * n + beta * n));
    }
    acc
}

/// The Weyl-bound right-hand side C₀(N/√q + √q)·√(log q). Needs q ≥ 2.
pub fn weyl_bound_rhs(q: u64, n_len: u64, c0: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::invalid("weyl_bound_rhs requires q ≥ 2"));
    }
    let qf = q as f64;
    Ok(c0 * (n_len as f64 / qf.sqrt() + qf.sqrt()) * qf.ln().sqrt())
}

/// min{N, 1/(2‖θ‖)} where ‖θ‖ is the distance from θ to the nearest integer.
pub fn linear_sum_bound(theta: f64, n_len: u64) -> f64 {
    let dist = (theta - theta.round()).abs();
    if dist == 0.0 {
        n_len as f64
    } else {
        (n_len as f64).min(1.0 / (2.0 * dist))
    }
}

/// Result of the empirical Weyl-constant fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylFit {
    /// max ratio over everything in the fit corpus; the working C₀.
    pub c0: f64,
    /// max ratio over the seeded random trials alone.
    pub random_max: f64,
    /// max ratio over the deterministic small-q window family.
    pub family_max: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Fit the Weyl constant over a seeded corpus: random quadratic sums with
/// |α − a/q| ≤ 1/q², plus a deterministic family of small-q incomplete-window
/// extremes (the ratio is largest at small q, where √(log q) is weakest).
pub fn fit_weyl_c0(trials: u64, seed: u64) -> WeylFit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_max: f64 = 0.0;
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
        let rhs = weyl_bound_rhs(q, n_len, 1.0).expect("q ≥ 2");
        random_max = random_max.max(s.norm() / rhs);
    }

    let mut family_max: f64 = 0.0;
    for q in 2..=64u64 {
        let table = GaussTable::new(q).expect("q ≥ 1");
        let logq_sqrt = (q as f64).ln().sqrt();
        let mut coprimes: Vec<i64> = Vec::new();
        for a in 1..=q.min(8) {
            if gcd_u64(a, q) == 1 {
                coprimes.push(a as i64);
            }
        }
        if q > 8 && gcd_u64(q - 1, q) == 1 {
            coprimes.push((q - 1) as i64);
        }
        for &a in &coprimes {
            for b in 0..4i64 {
                let mut prefix = vec![Complex64::new(0.0, 0.0)];
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 1..=q {
                    acc += table.range_sum(a, b, m, m);
                    prefix.push(acc);
                }
                for i in 0..q as usize {
                    for j in (i + 1)..=q as usize {
                        let len = (j - i) as f64;
                        let rhs = (len / (q as f64).sqrt() + (q as f64).sqrt()) * logq_sqrt;
                        family_max = family_max.max((prefix[j] - prefix[i]).norm() / rhs);
                    }
                }
            }
        }
    }

    WeylFit {
        c0: random_max.max(family_max),
        random_max,
        family_max,
        trials,
        seed,
    }
}

/// The exact rational form of a chosen time t = 2π·num/(q·L²): every phase
/// L²m²t reduces to 2π·m²·num/q, an exact integer computation no matter how
/// many radians L²m²t spans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChosenTime {
    /// t itself, as a double (for reporting and the small phases).
    pub t: f64,
    /// numerator: t·q·L²/2π exactly.
    pub num: i64,
    /// the cell modulus.
    pub q: u64,
}

impl ChosenTime {
    pub fn new(num: i64, q: u64, l: f64) -> Self {
        ChosenTime {
            t: TAU * num as f64 / (q as f64 * l * l),
            num,
            q,
        }
    }

    /// 2π(m²·num mod q)/q, the exact reduction of L²m²t.
    pub fn quadratic_angle(&self, m: i64) -> f64 {
        let q = self.q as i128;
        let mr = (m as i128).rem_euclid(q);
        let sq = (mr * mr).rem_euclid(q);
        rational_angle(sq * self.num as i128, q)
    }
}

/// Integer summation range [m_lo, m_hi).
#[derive(Debug, Clone, Copy)]
pub struct SumRange {
    pub m_lo: i64,
    pub m_hi: i64,
}

impl SumRange {
    pub fn count(&self) -> u64 {
        (self.m_hi - self.m_lo).max(0) as u64
    }
}

/// S_j(u) = Σ_{m_lo ≤ m < u} e(Lm·x_j + L²m²t) with per-term exact reduction
/// of the quadratic phase. Returns the sum and the running supremum of the
/// partial-sum magnitudes, which bounds sup_u |S_j(u)|.
pub fn s_j_sum_with_sup(
    x_j: f64,
    l: f64,
    time: &ChosenTime,
    u_limit: f64,
    range: SumRange,
) -> Result<(Complex64, f64)> {
    if !(range.m_lo as f64 <= u_limit && u_limit <= range.m_hi as f64) {
        return Err(Error::invalid(format!(
            "u = {u_limit} outside summation window [{}, {}]",
            range.m_lo, range.m_hi
        )));
    }
    // exact split of L·x_j: the product as hi+lo, hi reduced mod 2π;
    // m·(hi mod 2π) ≡ m·hi (mod 2π) stays small for every index
    let (hi, lo) = two_prod(l, x_j);
    let y_eff = reduce_mod_2pi(hi) + lo;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sup: f64 = 0.0;
    for m in range.m_lo..range.m_hi {
        if (m as f64) >= u_limit {
            break;
        }
        let phase = reduce_mod_2pi(m as f64 * y_eff) + time.quadratic_angle(m);
        acc += Complex64::from_polar(1.0, phase);
        sup = sup.max(acc.norm());
    }
    Ok((acc, sup))
}

/// The single-coordinate sum alone.
pub fn s_j_sum(
    x_j: f64,
    l: f64,
    time: &ChosenTime,
    u_limit: f64,
    range: SumRange,
) -> Result<Complex64> {
    s_j_sum_with_sup(x_j, l, time, u_limit, range).map(|(s, _)| s)
}

/// The (n−1)-fold sum S(x', t; u): the phase factorizes coordinate-wise, so
/// this is the product of the 1-dimensional sums.
pub fn s_full(
    x_prime: &[f64],
    l: f64,
    time: &ChosenTime,
    u_limit: f64,
    range: SumRange,
) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &xj in x_prime {
        acc *= s_j_sum(xj, l, time, u_limit, range)?;
    }
    Ok(acc)
}

/// Σ_{m ∈ [m_lo, m_hi)} e^{i(v·m + 2π((m²·quad + m·lin) mod q)/q)} evaluated
/// by blocking the index by residue class mod q: the rational part repeats
/// with period q and the rest is a geometric sum in closed form. One table
/// serves every v, which is what the ξ-quadrature needs.
pub struct ResidueBlockSum {
    q: u64,
    m_lo: i64,
    full_blocks: u64,
    rem: u64,
    zr: Vec<Complex64>,
}

impl ResidueBlockSum {
    pub fn new(quad_num: i64, lin_num: i64, q: u64, range: SumRange) -> Self {
        let total = range.count();
        let full_blocks = total / q;
        let rem = total % q;
        let qi = q as i128;
        let zr = (0..qi)
            .map(|r| {
                let m = (range.m_lo as i128 + r).rem_euclid(qi);
                let ph = (m * m * quad_num as i128 + m * lin_num as i128).rem_euclid(qi);
                Complex64::from_polar(1.0, rational_angle(ph, qi))
            })
            .collect();
        ResidueBlockSum {
            q,
            m_lo: range.m_lo,
            full_blocks,
            rem,
            zr,
        }
    }

    pub fn eval(&self, v: f64) -> Complex64 {
        let q = self.q;
        let step_q = v * q as f64;
        let g_full = geometric_phase_sum(0.0, step_q, self.full_blocks);
        let extra = Complex64::from_polar(1.0, reduce_mod_2pi(step_q * self.full_blocks as f64));
        let g_more = g_full + extra;
        let rot = Complex64::from_polar(1.0, reduce_mod_2pi(v));
        let mut phasor = Complex64::from_polar(1.0, reduce_mod_2pi(v * self.m_lo as f64));
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..q {
            let g = if r < self.rem { g_more } else { g_full };
            acc += self.zr[r as usize] * phasor * g;
            phasor *= rot;
        }
        acc
    }
}

/// Certified envelope for W(t) = sup_v |Σ_m e(vm + L²m²t)|.
#[derive(Debug, Clone, Copy)]
pub struct WeylEnvelope {
    /// max over the evaluated grid: a lower envelope for the true sup.
    pub grid_max: f64,
    /// grid max plus the Lipschitz correction: a certified upper estimate.
    pub certified_upper: f64,
    pub grid_size: u64,
}

/// Grid-plus-Lipschitz certificate for the v-supremum. Levels are nested
/// dyadic grids, so refining `grid_size` never lowers the reported lower
/// envelope and never raises the certified upper estimate.
pub fn weyl_envelope(time: &ChosenTime, range: SumRange, grid_size: u64) -> Result<WeylEnvelope> {
    if grid_size < 2 {
        return Err(Error::invalid("grid_size must be at least 2"));
    }
    let blocks = ResidueBlockSum::new(time.num, 0, time.q, range);
    // |d/dv Σ| ≤ Σ|m| over the range
    let lipschitz: f64 = (range.m_lo..range.m_hi).map(|m| m.unsigned_abs() as f64).sum();
    let mut size = 64u64.min(grid_size).max(2);
    let mut grid_max: f64 = 0.0;
    let mut certified = f64::INFINITY;
    loop {
        let mut level_max: f64 = 0.0;
        for k in 0..size {
            let v = TAU * k as f64 / size as f64;
            level_max = level_max.max(blocks.eval(v).norm());
        }
        grid_max = grid_max.max(level_max);
        certified = certified.min(grid_max + lipschitz * std::f64::consts::PI / size as f64);
        if size >= grid_size {
            break;
        }
        size = (size * 2).min(grid_size);
    }
    Ok(WeylEnvelope {
        grid_max,
        certified_upper: certified,
        grid_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn closed_law_examples() {
        let g = gauss_sum_closed(1, 0, 5).unwrap();
        assert_eq!(g.case, GaussCase::OddQ);
        assert!((g.magnitude - 5f64.sqrt()).abs() < 1e-12);

        let g = gauss_sum_closed(1, 1, 4).unwrap();
        assert_eq!(g.case, GaussCase::ZeroCase);
        assert_eq!(g.magnitude, 0.0);

        let g = gauss_sum_closed(1, 2, 4).unwrap();
        assert_eq!(g.case, GaussCase::DoubleCase);
        assert!((g.magnitude - 8f64.sqrt()).abs() < 1e-12);

        let g = gauss_sum_closed(1, 0, 1).unwrap();
        assert!((g.magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_law_rejects_bad_input() {
        assert!(gauss_sum_closed(2, 0, 4).is_err());
        assert!(gauss_sum_closed(1, 0, 0).is_err());
    }

    #[test]
    fn brute_hand_checks() {
        // Σ_{m=1..4} e^{2πi(2m + m²)/4} = 2 − 2i
        let s = gauss_sum_brute(1, 2, 4).unwrap();
        assert!(approx(s, Complex64::new(2.0, -2.0), 1e-12), "{s}");
        // a = b = 0: all terms are 1
        let s = gauss_sum_brute(0, 0, 7).unwrap();
        assert!(approx(s, Complex64::new(7.0, 0.0), 1e-12));
        // |G(1,0;5)| = √5
        let s = gauss_sum_brute(1, 0, 5).unwrap();
        assert!((s.norm() - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn brute_handles_negative_parameters() {
        let direct: Complex64 = (1..=6)
            .map(|m: i64| {
                Complex64::from_polar(1.0, TAU * (((m * -5 + m * m * -3) as f64) / 6.0))
            })
            .sum();
        let s = gauss_sum_brute(-3, -5, 6).unwrap();
        assert!(approx(s, direct, 1e-10), "{s} vs {direct}");
    }

    #[test]
    fn incomplete_full_range_equals_complete() {
        for &(a, b, q) in &[(1i64, 2i64, 4u64), (3, 1, 7), (5, 0, 12), (2, 3, 9)] {
            let full = incomplete_gauss(a, b, q, 1, q).unwrap();
            let brute = gauss_sum_brute(a, b, q).unwrap();
            assert_eq!(full, brute, "same walk must give identical values");
        }
    }

    #[test]
    fn incomplete_two_term_hand_check() {
        // m=2: e^{2πi·2} = 1, m=3: e^{2πi·15/4} = -i, so 1 - i
        let s = incomplete_gauss(1, 2, 4, 2, 3).unwrap();
        assert!(approx(s, Complex64::new(1.0, -1.0), 1e-12), "{s}");
    }

    #[test]
    fn incomplete_rejects_bad_range() {
        assert!(incomplete_gauss(1, 0, 5, 0, 3).is_err());
        assert!(incomplete_gauss(1, 0, 5, 4, 2).is_err());
        assert!(incomplete_gauss(1, 0, 5, 1, 6).is_err());
    }

    #[test]
    fn weyl_sum_trivial_cases() {
        let s = quadratic_weyl_sum(0.0, 0.0, 3, 41, PhaseConvention::TwoPi);
        assert!(approx(s, Complex64::new(41.0, 0.0), 1e-9));
        // alternating ±1 over an even count
        let s = quadratic_weyl_sum(0.0, 0.5, 0, 40, PhaseConvention::TwoPi);
        assert!(s.norm() < 1e-9, "{s}");
    }

    #[test]
    fn weyl_rhs_example() {
        let v = weyl_bound_rhs(4, 4, 1.0).unwrap();
        assert!((v - 4.0 * (4f64).ln().sqrt()).abs() < 1e-12);
        assert!(weyl_bound_rhs(1, 4, 1.0).is_err());
        // doubling N doubles the first addend
        let a = weyl_bound_rhs(9, 30, 1.0).unwrap();
        let b = weyl_bound_rhs(9, 60, 1.0).unwrap();
        let sq = 3.0 * (9f64).ln().sqrt();
        assert!(((b - sq) - 2.0 * (a - sq)).abs() < 1e-9);
    }

    #[test]
    fn linear_bound_cases() {
        assert_eq!(linear_sum_bound(0.0, 7), 7.0);
        assert!((linear_sum_bound(0.5, 100) - 1.0).abs() < 1e-12);
        let v = linear_sum_bound(0.3, 100);
        assert!((v - 1.0 / 0.6).abs() < 1e-9);
        let s = quadratic_weyl_sum(0.0, 0.3, 0, 100, PhaseConvention::TwoPi);
        assert!(s.norm() <= v + 1e-9);
    }

    #[test]
    fn residue_block_matches_direct() {
        let time = ChosenTime::new(7, 12, 32.0);
        let range = SumRange { m_lo: 50, m_hi: 211 };
        let blocks = ResidueBlockSum::new(time.num, 5, time.q, range);
        for &v in &[0.0, 0.3, 1.7, -0.9, 6.2] {
            let fast = blocks.eval(v);
            let mut direct = Complex64::new(0.0, 0.0);
            for m in range.m_lo..range.m_hi {
                let ph = v * m as f64 + TAU * (((m * m * 7 + m * 5).rem_euclid(12)) as f64) / 12.0;
                direct += Complex64::from_polar(1.0, ph);
            }
            assert!(
                approx(fast, direct, 1e-8 * (1.0 + direct.norm())),
                "v={v}: {fast} vs {direct}"
            );
        }
    }

    #[test]
    fn s_j_sum_empty_and_single() {
        let time = ChosenTime::new(3, 8, 100.0);
        let range = SumRange { m_lo: 10, m_hi: 20 };
        let s = s_j_sum(0.01, 100.0, &time, 10.0, range).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        let s = s_j_sum(0.01, 100.0, &time, 11.0, range).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(s_j_sum(0.01, 100.0, &time, 9.0, range).is_err());
    }

    #[test]
    fn s_full_equals_product_and_direct_double_sum() {
        let l = 64.0;
        let time = ChosenTime::new(5, 4, l);
        let range = SumRange { m_lo: 8, m_hi: 20 };
        let x_prime = [0.013, -0.041];
        let full = s_full(&x_prime, l, &time, 20.0, range).unwrap();
        let prod = s_j_sum(x_prime[0], l, &time, 20.0, range).unwrap()
            * s_j_sum(x_prime[1], l, &time, 20.0, range).unwrap();
        assert!((full - prod).norm() <= 1e-12 * prod.norm());
        // brute multi-index oracle with raw floating phases
        let mut direct = Complex64::new(0.0, 0.0);
        for m2 in range.m_lo..range.m_hi {
            for m3 in range.m_lo..range.m_hi {
                let ph = l * (m2 as f64 * x_prime[0] + m3 as f64 * x_prime[1])
                    + l * l * ((m2 * m2 + m3 * m3) as f64) * time.t;
                direct += Complex64::from_polar(1.0, ph);
            }
        }
        assert!(
            (full - direct).norm() <= 1e-7 * (1.0 + direct.norm()),
            "{full} vs {direct}"
        );
    }

    #[test]
    fn envelope_monotone_and_bounds_grid() {
        let time = ChosenTime::new(11, 20, 500.0);
        let range = SumRange { m_lo: 100, m_hi: 200 };
        let coarse = weyl_envelope(&time, range, 128).unwrap();
        let fine = weyl_envelope(&time, range, 1024).unwrap();
        assert!(fine.grid_max >= coarse.grid_max);
        assert!(fine.certified_upper <= coarse.certified_upper);
        assert!(coarse.grid_max <= coarse.certified_upper);
        // single term: envelope is exactly 1
        let one = weyl_envelope(&time, SumRange { m_lo: 100, m_hi: 101 }, 64).unwrap();
        assert!((one.grid_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fitted_c0_is_modest() {
        let fit = fit_weyl_c0(64, 0xC0);
        assert!(fit.c0 > 0.1 && fit.c0 < 10.0, "{fit:?}");
        assert!(fit.c0 >= fit.random_max && fit.c0 >= fit.family_max);
    }

    #[test]
    fn resonant_sum_assembles_from_gauss_blocks() {
        // with the quadratic coefficient exactly 2πa₁/q and the linear one
        // exactly 2πa_j/q, the lattice sum is ⌊count/q⌋ complete Gauss sums
        // plus one incomplete remainder
        let (a1, aj, q) = (5i64, 8i64, 12u64);
        let range = SumRange { m_lo: 100, m_hi: 231 };
        let blocks = ResidueBlockSum::new(a1, aj, q, range);
        let value = blocks.eval(0.0);
        let table = GaussTable::new(q).unwrap();
        let complete = table.range_sum(a1, aj, 1, q);
        let full_blocks = range.count() / q;
        let rem_start = range.m_lo as u64 + full_blocks * q;
        let remainder = table.range_sum(a1, aj, rem_start, range.m_hi as u64 - 1);
        let assembled = complete * full_blocks as f64 + remainder;
        assert!(
            (value - assembled).norm() <= 1e-10 * (1.0 + assembled.norm()),
            "{value} vs {assembled}"
        );
        // the nonvanishing case has |G| = √(2q); a₁ odd coprime, a_j even
        assert!((complete.norm() - (2.0 * q as f64).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn incomplete_prime_case_under_fitted_bound() {
        // the q = 101 half-range sum sits under the fitted Weyl envelope
        let fit = fit_weyl_c0(64, 0xC0);
        let s = incomplete_gauss(1, 0, 101, 1, 50).unwrap();
        let cap = 2.0 * fit.c0 * (101f64 * 101f64.ln()).sqrt();
        assert!(s.norm() <= cap, "{} > {cap}", s.norm());
        let rhs = weyl_bound_rhs(101, 50, fit.c0).unwrap();
        assert!(s.norm() <= rhs, "{} > {rhs}", s.norm());
    }

    #[test]
    fn linear_bound_over_seeded_corpus() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(0x11EA);
        for _ in 0..1000 {
            let theta: f64 = rng.random_range(-2.0..2.0);
            let m: i64 = rng.random_range(-50_000..50_000);
            let n: u64 = rng.random_range(1..=10_000);
            let s = quadratic_weyl_sum(0.0, theta, m, n, PhaseConvention::TwoPi);
            let bound = linear_sum_bound(theta, n);
            assert!(
                s.norm() <= bound * (1.0 + 1e-9) + 1e-9,
                "theta={theta}, M={m}, N={n}: {} > {bound}",
                s.norm()
            );
        }
    }

    #[test]
    fn envelope_grid_below_analytic_bound() {
        // certified grid maximum never exceeds the Weyl-bound envelope with
        // a generous constant
        let fit = fit_weyl_c0(64, 0xC0);
        let q = 48u64;
        let l = 2000.0;
        let time = ChosenTime::new(7, q, l);
        let range = SumRange { m_lo: 2304, m_hi: 4608 };
        let env = weyl_envelope(&time, range, 2048).unwrap();
        let count = range.count();
        let analytic = 2.0 * fit.c0 * (count as f64 / (q as f64).sqrt())
            * (q as f64).ln().sqrt();
        assert!(
            env.grid_max <= analytic,
            "grid max {} exceeds analytic envelope {analytic}",
            env.grid_max
        );
    }
}
