//! Python bindings: the main types and operations of the laboratory.
//!
//! Build with `cargo build -p schrodmax-py --release`, then import the
//! produced `libschrodmax_py.so` as `schrodmax_py` (see python/smoke_test.py).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use schrodmax::bump::BumpProfile;
use schrodmax::omega::MeasureMode;
use schrodmax::wave_packet::{Constants, PacketParams};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(format!("{e}"))
}

/// Magnitude and case tag of the complete Gauss sum G(a,b;q); gcd(a,q) = 1.
#[pyfunction]
fn gauss_sum_closed(a: i64, b: i64, q: u64) -> PyResult<(f64, String)> {
    let v = schrodmax::exponential_sums::gauss_sum_closed(a, b, q).map_err(err)?;
    Ok((v.magnitude, v.case.as_str().to_string()))
}

/// Direct evaluation of G(a,b;q) as a complex number.
#[pyfunction]
fn gauss_sum_brute(a: i64, b: i64, q: u64) -> PyResult<(f64, f64)> {
    let v = schrodmax::exponential_sums::gauss_sum_brute(a, b, q).map_err(err)?;
    Ok((v.re, v.im))
}

/// Incomplete Gauss sum over u ≤ m ≤ u'.
#[pyfunction]
fn incomplete_gauss(a: i64, b: i64, q: u64, u: u64, u_prime: u64) -> PyResult<(f64, f64)> {
    let v = schrodmax::exponential_sums::incomplete_gauss(a, b, q, u, u_prime).map_err(err)?;
    Ok((v.re, v.im))
}

/// Quadratic Weyl sum Σ_{M ≤ n < M+N} e^{ic(αn²+βn)}, c = 2π or 1.
#[pyfunction]
#[pyo3(signature = (alpha, beta, m_start, n_len, two_pi=true))]
fn quadratic_weyl_sum(
    alpha: f64,
    beta: f64,
    m_start: i64,
    n_len: u64,
    two_pi: bool,
) -> (f64, f64) {
    let conv = if two_pi {
        schrodmax::exponential_sums::PhaseConvention::TwoPi
    } else {
        schrodmax::exponential_sums::PhaseConvention::Radian
    };
    let v = schrodmax::exponential_sums::quadratic_weyl_sum(alpha, beta, m_start, n_len, conv);
    (v.re, v.im)
}

/// C₀(N/√q + √q)√(log q).
#[pyfunction]
fn weyl_bound_rhs(q: u64, n_len: u64, c0: f64) -> PyResult<f64> {
    schrodmax::exponential_sums::weyl_bound_rhs(q, n_len, c0).map_err(err)
}

/// min{N, 1/(2‖θ‖)}.
#[pyfunction]
fn linear_sum_bound(theta: f64, n_len: u64) -> f64 {
    schrodmax::exponential_sums::linear_sum_bound(theta, n_len)
}

/// Simultaneous Dirichlet approximation: returns (q, [a_j], [errors]).
#[pyfunction]
fn dirichlet_simultaneous(y: Vec<f64>, q_cap: u64) -> PyResult<(u64, Vec<i64>, Vec<f64>)> {
    let r = schrodmax::diophantine::dirichlet_simultaneous(&y, q_cap).map_err(err)?;
    Ok((r.q, r.a, r.errors))
}

/// Best rational approximation with denominator up to q_max: (num, den).
#[pyfunction]
fn best_rational(theta: f64, q_max: u64) -> PyResult<(i64, i64)> {
    let r = schrodmax::diophantine::best_rational(theta, q_max).map_err(err)?;
    Ok((r.num() as i64, r.den() as i64))
}

#[pyfunction]
fn totient(q: u64) -> u64 {
    schrodmax::diophantine::totient(q)
}

#[pyfunction]
fn omega_distinct(q: u64) -> u32 {
    schrodmax::diophantine::omega_distinct(q)
}

/// Scaling exponents (sigma, lambda, kappa, s_star) for dimension n.
#[pyfunction]
#[pyo3(signature = (n, sigma=0.5))]
fn solve_exponents(n: usize, sigma: f64) -> PyResult<(f64, f64, f64, f64)> {
    let s = schrodmax::wave_packet::solve_exponents(n, sigma).map_err(err)?;
    Ok((s.sigma, s.lambda, s.kappa, s.s_star))
}

/// The fixed bump profile with its cached norms.
#[pyclass]
struct Bump {
    inner: BumpProfile,
}

#[pymethods]
impl Bump {
    #[new]
    #[pyo3(signature = (quadrature_nodes=256))]
    fn new(quadrature_nodes: usize) -> PyResult<Self> {
        Ok(Bump {
            inner: schrodmax::bump::make_bump(quadrature_nodes).map_err(err)?,
        })
    }

    fn phi(&self, x: f64) -> f64 {
        self.inner.phi(x)
    }

    fn phi_hat(&self, xi: f64) -> f64 {
        self.inner.hat(xi)
    }

    fn phi_deriv(&self, x: f64) -> f64 {
        self.inner.phi_deriv(x)
    }

    #[getter]
    fn norm_l2(&self) -> f64 {
        self.inner.norm_l2
    }

    #[getter]
    fn hat_l1(&self) -> f64 {
        self.inner.hat_l1
    }

    #[getter]
    fn sup(&self) -> f64 {
        self.inner.sup
    }

    #[getter]
    fn deriv_sup(&self) -> f64 {
        self.inner.deriv_sup
    }

    fn delta0_for(&self, c0: f64) -> f64 {
        self.inner.delta0_for(c0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Bump(norm_l2={:.6}, hat_l1={:.6}, sup={:.6})",
            self.inner.norm_l2, self.inner.hat_l1, self.inner.sup
        )
    }
}

/// Packet parameters at scale R for dimension n (σ = 1/2 exponents).
#[pyclass]
struct Packet {
    params: PacketParams,
    bump: BumpProfile,
}

#[pymethods]
impl Packet {
    #[new]
    #[pyo3(signature = (n, r, weyl_c0=1.0, validate=true))]
    fn new(n: usize, r: f64, weyl_c0: f64, validate: bool) -> PyResult<Self> {
        let bump = schrodmax::bump::make_bump(256).map_err(err)?;
        let sol = schrodmax::wave_packet::solve_exponents(n, 0.5).map_err(err)?;
        let consts = Constants::calibrated(n, &bump, weyl_c0);
        let params = if validate {
            schrodmax::wave_packet::packet_params(n, r, &sol, consts).map_err(err)?
        } else {
            PacketParams::assemble(n, r, &sol, consts)
        };
        Ok(Packet { params, bump })
    }

    #[getter]
    fn s1(&self) -> f64 {
        self.params.s1
    }

    #[getter]
    fn l(&self) -> f64 {
        self.params.l
    }

    #[getter]
    fn q_big(&self) -> f64 {
        self.params.q_big
    }

    #[getter]
    fn lattice_count(&self) -> u64 {
        self.params.m_count()
    }

    fn violations(&self) -> Vec<String> {
        self.params.validate()
    }

    /// (annulus_ok, min |ξ|, max |ξ|) for the Fourier support box.
    fn f_hat_support(&self) -> (bool, f64, f64) {
        let s = schrodmax::wave_packet::f_hat_support(&self.params);
        (s.annulus_ok, s.min_norm, s.max_norm)
    }

    fn l2_norm_closed(&self) -> PyResult<f64> {
        schrodmax::wave_packet::l2_norm_closed(&self.params, &self.bump).map_err(err)
    }

    fn l2_norm_numeric(&self) -> PyResult<f64> {
        schrodmax::wave_packet::l2_norm_numeric(&self.params, &self.bump).map_err(err)
    }

    /// f(x) as (re, im).
    fn evaluate_f(&self, x: Vec<f64>) -> PyResult<(f64, f64)> {
        let v = schrodmax::wave_packet::evaluate_f(&x, &self.params, &self.bump).map_err(err)?;
        Ok((v.re, v.im))
    }

    /// Measure of the rational box set: (value, ci_halfwidth).
    #[pyo3(signature = (exact=true, samples=200_000, seed=0))]
    fn omega_measure(&self, exact: bool, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
        let mode = if exact {
            MeasureMode::ExactProduct
        } else {
            MeasureMode::MonteCarlo
        };
        let r = schrodmax::omega::omega_measure(&self.params, mode, samples, seed).map_err(err)?;
        Ok((r.value, r.ci_halfwidth))
    }

    fn cell_count(&self) -> u128 {
        schrodmax::omega::cell_count(&self.params)
    }

    /// Propagate seeded Ω* points; returns rows of
    /// (q, |amplitude|, lower_bound_target, passed).
    #[pyo3(signature = (points=16, seed=0))]
    fn propagate_points(&self, points: u64, seed: u64) -> PyResult<Vec<(u64, f64, f64, bool)>> {
        let pts = schrodmax::omega::sample_points(&self.params, points, seed).map_err(err)?;
        let mut out = Vec::with_capacity(pts.len());
        for pt in &pts {
            let res =
                schrodmax::propagator::propagate(pt, &self.params, &self.bump).map_err(err)?;
            out.push((
                pt.cell.q,
                res.amplitude.norm(),
                res.lower_bound_target,
                res.passed,
            ));
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Packet(n={}, R={:.3e}, Q={:.2}, lattice_count={})",
            self.params.n,
            self.params.r,
            self.params.q_big,
            self.params.m_count()
        )
    }
}

/// Least-squares slope of log y against log x: (slope, stderr).
#[pyfunction]
fn fit_power_law(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(PyValueError::new_err("need ≥ 3 paired samples"));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    Ok((slope, (ss / (n - 2.0) / sxx).sqrt()))
}

#[pymodule]
fn schrodmax_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(gauss_sum_closed, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum_brute, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_gauss, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_weyl_sum, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_bound_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(linear_sum_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_simultaneous, m)?)?;
    m.add_function(wrap_pyfunction!(best_rational, m)?)?;
    m.add_function(wrap_pyfunction!(totient, m)?)?;
    m.add_function(wrap_pyfunction!(omega_distinct, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_class::<Bump>()?;
    m.add_class::<Packet>()?;
    Ok(())
}
