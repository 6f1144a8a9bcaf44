//! The fixed Schwartz bump profile φ.
//!
//! φ = |ψ̌|² for the standard smooth compactly supported profile
//! ψ(ξ) ∝ exp(−1/(1−(4ξ)²)) on (−1/4, 1/4), normalized so (1/2π)∫ψ = 1.
//! Then φ(0) = 1, φ ≥ 0 everywhere, and φ̂ = (1/2π)·ψ∗ψ is nonnegative and
//! supported in [−1/2, 1/2], comfortably inside [−1, 1].
//!
//! Everything downstream consumes φ through quadrature nodes cached here, so
//! one profile instance is built per run and shared.

use crate::error::{Error, Result};
use crate::quad::{composite_nodes, GaussLegendre};
use std::f64::consts::TAU;

pub const PSI_HALFWIDTH: f64 = 0.25;

/// The bump profile with cached norms and quadrature tables.
#[derive(Debug, Clone)]
pub struct BumpProfile {
    pub psi_halfwidth: f64,
    pub quadrature_nodes: usize,
    /// ‖φ‖_{L²}, computed from the x-space integral of ψ̌⁴.
    pub norm_l2: f64,
    /// ‖φ̂‖_{L¹} = ∫φ̂ (φ̂ ≥ 0); equals 2π for this construction.
    pub hat_l1: f64,
    /// ‖φ‖_∞ (= φ(0) = 1 for this construction).
    pub sup: f64,
    /// ‖φ′‖_∞.
    pub deriv_sup: f64,
    /// Largest δ with φ ≥ 1 − c₀/2 on [−δ, δ] for the default c₀ = 1/4.
    pub delta0_cap: f64,
    norm_factor: f64,
    /// (ξ_i, w_i·ψ(ξ_i)) over [−1/4, 1/4]; evaluates ψ̌ and its derivative.
    psi_quad: Vec<(f64, f64)>,
    /// (ξ_i, w_i·φ̂(ξ_i)) over [−1/2, 1/2]; the canonical frequency rule.
    hat_quad: Vec<(f64, f64)>,
    /// Same with doubled node count, for refinement checks.
    hat_quad_fine: Vec<(f64, f64)>,
    conv_rule: GaussLegendre,
}

/// Build the profile. `quadrature_nodes` is the per-panel Gauss-Legendre node
/// count (4 panels per support interval).
pub fn make_bump(quadrature_nodes: usize) -> Result<BumpProfile> {
    if quadrature_nodes < 64 {
        return Err(Error::invalid("quadrature_nodes must be at least 64"));
    }
    let rule = GaussLegendre::new(quadrature_nodes);
    let raw_nodes = composite_nodes(&rule, -PSI_HALFWIDTH, PSI_HALFWIDTH, 4);
    let raw_integral: f64 = raw_nodes.iter().map(|(x, w)| w * psi_raw(*x)).sum();
    // (1/2π)∫ψ = 1
    let norm_factor = TAU / raw_integral;
    let psi_quad: Vec<(f64, f64)> = raw_nodes
        .iter()
        .map(|&(x, w)| (x, w * norm_factor * psi_raw(x)))
        .collect();

    let conv_rule = GaussLegendre::new(128);
    let mut profile = BumpProfile {
        psi_halfwidth: PSI_HALFWIDTH,
        quadrature_nodes,
        norm_l2: 0.0,
        hat_l1: 0.0,
        sup: 0.0,
        deriv_sup: 0.0,
        delta0_cap: 0.0,
        norm_factor,
        psi_quad,
        hat_quad: Vec::new(),
        hat_quad_fine: Vec::new(),
        conv_rule,
    };

    let v0 = profile.phi(0.0);
    if (v0 - 1.0).abs() > 1e-8 {
        return Err(Error::Quadrature(format!(
            "bump normalization failed: phi(0) = {v0}"
        )));
    }

    profile.hat_quad = composite_nodes(&rule, -0.5, 0.5, 4)
        .into_iter()
        .map(|(x, w)| (x, w * profile.hat(x)))
        .collect();
    let fine_rule = GaussLegendre::new(2 * quadrature_nodes);
    profile.hat_quad_fine = composite_nodes(&fine_rule, -0.5, 0.5, 4)
        .into_iter()
        .map(|(x, w)| (x, w * profile.hat(x)))
        .collect();

    profile.hat_l1 = profile.hat_quad.iter().map(|(_, wh)| wh.abs()).sum();
    profile.norm_l2 = profile.compute_norm_l2();
    let (sup, deriv_sup) = profile.compute_sups();
    profile.sup = sup;
    profile.deriv_sup = deriv_sup;
    profile.delta0_cap = profile.delta0_for(0.25);
    Ok(profile)
}

/// Unnormalized profile on (−1/4, 1/4).
fn psi_raw(x: f64) -> f64 {
    let u = 4.0 * x;
    let d = 1.0 - u * u;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

impl BumpProfile {
    /// ψ(ξ), the normalized frequency profile.
    pub fn psi(&self, x: f64) -> f64 {
        self.norm_factor * psi_raw(x)
    }

    /// ψ̌(x) = (1/2π)∫ψ(ξ)e^{ixξ}dξ; real and even since ψ is.
    pub fn psi_check(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &(xi, wpsi) in &self.psi_quad {
            acc += wpsi * (x * xi).cos();
        }
        acc / TAU
    }

    fn psi_check_deriv(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &(xi, wpsi) in &self.psi_quad {
            acc -= wpsi * xi * (x * xi).sin();
        }
        acc / TAU
    }

    /// φ(x) = ψ̌(x)², nonnegative by construction.
    pub fn phi(&self, x: f64) -> f64 {
        let v = self.psi_check(x);
        v * v
    }

    /// φ′(x) = 2ψ̌(x)ψ̌′(x).
    pub fn phi_deriv(&self, x: f64) -> f64 {
        2.0 * self.psi_check(x) * self.psi_check_deriv(x)
    }

    /// φ̂(ξ) = (1/2π)(ψ∗ψ)(ξ); vanishes for |ξ| ≥ 1/2.
    pub fn hat(&self, xi: f64) -> f64 {
        let lo = (-PSI_HALFWIDTH).max(xi - PSI_HALFWIDTH);
        let hi = PSI_HALFWIDTH.min(xi + PSI_HALFWIDTH);
        if lo >= hi {
            return 0.0;
        }
        let nf = self.norm_factor;
        self.conv_rule
            .integrate(lo, hi, |u| nf * nf * psi_raw(u) * psi_raw(u - xi))
            / TAU
    }

    /// The cached frequency rule (ξ_i, w_i·φ̂(ξ_i)).
    pub fn hat_nodes(&self) -> &[(f64, f64)] {
        &self.hat_quad
    }

    /// Doubled-node variant of [`Self::hat_nodes`] for convergence checks.
    pub fn hat_nodes_fine(&self) -> &[(f64, f64)] {
        &self.hat_quad_fine
    }

    /// ∫φ̂² by the cached rule; (1/2π)·this equals ‖φ‖²_{L²} by Plancherel.
    pub fn hat_l2_sq(&self) -> f64 {
        self.hat_quad
            .iter()
            .map(|&(x, wh)| wh * self.hat(x))
            .sum()
    }

    fn compute_norm_l2(&self) -> f64 {
        // ∫φ² = 2∫_0^∞ ψ̌⁴; the tail decays faster than any polynomial.
        let rule = GaussLegendre::new(48);
        let panel = 2.0;
        let mut acc = 0.0;
        let mut lo = 0.0;
        for _ in 0..400 {
            let c: f64 = rule.integrate(lo, lo + panel, |x| self.psi_check(x).powi(4));
            acc += c;
            lo += panel;
            if lo > 20.0 && c.abs() < 1e-19 * acc.max(1e-300) {
                break;
            }
        }
        (2.0 * acc).sqrt()
    }

    fn compute_sups(&self) -> (f64, f64) {
        let mut sup: f64 = 0.0;
        let mut dsup: f64 = 0.0;
        let mut dargmax = 0.0;
        let n = 6000;
        let hi = 30.0;
        for k in 0..=n {
            let x = hi * k as f64 / n as f64;
            sup = sup.max(self.phi(x));
            let d = self.phi_deriv(x).abs();
            if d > dsup {
                dsup = d;
                dargmax = x;
            }
        }
        // refine the derivative peak locally
        let m = 400;
        for k in 0..=m {
            let x = dargmax - 0.01 + 0.02 * k as f64 / m as f64;
            if x >= 0.0 {
                dsup = dsup.max(self.phi_deriv(x).abs());
            }
        }
        (sup, dsup)
    }

    /// Largest δ with φ ≥ 1 − c₀/2 on [−δ, δ], by scan plus bisection.
    pub fn delta0_for(&self, c0: f64) -> f64 {
        let threshold = 1.0 - 0.5 * c0;
        let step = 1e-3;
        let mut x = 0.0;
        while self.phi(x + step) >= threshold && x < 50.0 {
            x += step;
        }
        let (mut lo, mut hi) = (x, x + step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.phi(mid) >= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}
