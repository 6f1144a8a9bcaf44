//! Simultaneous Dirichlet approximation, continued-fraction convergents, and
//! the multiplicative functions that size the rational box sets.

use crate::error::{Error, Result};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};

/// A simultaneous rational approximation with common denominator q.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirichletResult {
    pub q: u64,
    pub a: Vec<i64>,
    pub errors: Vec<f64>,
}

impl DirichletResult {
    /// The pigeonhole guarantee: every error is at most 1/(q·⌊Q^{1/m}⌋).
    pub fn satisfies_bound(&self, q_cap: u64) -> bool {
        let m = self.a.len() as f64;
        let p = (q_cap as f64).powf(1.0 / m).floor().max(1.0);
        let bound = 1.0 / (self.q as f64 * p);
        self.errors.iter().all(|e| *e <= bound * (1.0 + 1e-12))
    }
}

/// Best simultaneous approximation with denominator q ≤ Q, by exhaustive
/// search minimizing q·max_j |y_j − a_j/q|. The pigeonhole principle
/// guarantees some q ≤ P^m ≤ Q with q·err ≤ 1/P for P = ⌊Q^{1/m}⌋, so the
/// minimizer satisfies the same bound.
pub fn dirichlet_simultaneous(y: &[f64], q_cap: u64) -> Result<DirichletResult> {
    if y.is_empty() {
        return Err(Error::invalid("empty target vector"));
    }
    if q_cap == 0 {
        return Err(Error::invalid("Q must be positive"));
    }
    if y.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::invalid("every y_j must lie in [0, 1]"));
    }
    let mut best_q = 1u64;
    let mut best_score = f64::INFINITY;
    for q in 1..=q_cap {
        let qf = q as f64;
        let mut worst: f64 = 0.0;
        for &v in y {
            let a = (v * qf).round();
            worst = worst.max((v - a / qf).abs());
        }
        let score = qf * worst;
        if score < best_score - 1e-15 {
            best_score = score;
            best_q = q;
        }
    }
    let qf = best_q as f64;
    let a: Vec<i64> = y.iter().map(|v| (v * qf).round() as i64).collect();
    let errors: Vec<f64> = y
        .iter()
        .zip(&a)
        .map(|(v, ai)| (v - *ai as f64 / qf).abs())
        .collect();
    Ok(DirichletResult {
        q: best_q,
        a,
        errors,
    })
}

/// The textbook pigeonhole construction, kept as a cross-validation route:
/// split [0,1]^m into P^m cells, walk k·y mod 1 for k = 0..P^m, and difference
/// the first colliding pair.
pub fn dirichlet_pigeonhole(y: &[f64], p: u64) -> Result<DirichletResult> {
    if y.is_empty() || p == 0 {
        return Err(Error::invalid("empty target or zero P"));
    }
    let m = y.len() as u32;
    let cells = p
        .checked_pow(m)
        .ok_or_else(|| Error::invalid("P^m overflows"))?;
    if cells > 20_000_000 {
        return Err(Error::TooLarge(format!("pigeonhole table P^m = {cells}")));
    }
    let mut seen: std::collections::HashMap<Vec<u64>, u64> = std::collections::HashMap::new();
    for k in 0..=cells {
        let cell: Vec<u64> = y
            .iter()
            .map(|v| {
                let f = (k as f64 * v).fract();
                ((f * p as f64).floor() as u64).min(p - 1)
            })
            .collect();
        if let Some(&k0) = seen.get(&cell) {
            let q = k - k0;
            let qf = q as f64;
            let a: Vec<i64> = y.iter().map(|v| (v * qf).round() as i64).collect();
            let errors = y
                .iter()
                .zip(&a)
                .map(|(v, ai)| (v - *ai as f64 / qf).abs())
                .collect();
            return Ok(DirichletResult { q, a, errors });
        }
        seen.insert(cell, k);
    }
    Err(Error::invalid("pigeonhole failed (unreachable)"))
}

/// Best rational approximation a/q with q ≤ q_max via continued-fraction
/// convergents; the last convergent below the cap satisfies
/// |θ − a/q| ≤ 1/(q·q_max) ≤ 1/q².
pub fn best_rational(theta: f64, q_max: u64) -> Result<Rational> {
    if q_max == 0 {
        return Err(Error::invalid("q_max must be positive"));
    }
    let mut x = theta;
    let (mut p0, mut q0) = (1i128, 0i128);
    let (mut p1, mut q1) = (x.floor() as i128, 1i128);
    for _ in 0..64 {
        let frac = x - x.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        x = 1.0 / frac;
        let a = x.floor() as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > q_max as i128 || q2 <= 0 {
            break;
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    Rational::new(p1, q1)
}

/// Euler's totient by trial-division factorization.
pub fn totient(q: u64) -> u64 {
    let mut n = q;
    let mut result = q;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Count of distinct prime factors.
pub fn omega_distinct(q: u64) -> u32 {
    let mut n = q;
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            count += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count += 1;
    }
    count
}
