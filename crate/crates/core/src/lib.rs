//! A numerical laboratory for the wave-packet construction that defeats the
//! Schrodinger maximal inequality below the critical exponent s* = n/(2(n+1)).
//!
//! The crate builds the counterexample data f_R as a modulated lattice of bump
//! functions, evaluates the free propagator e^{itΔ}f on arithmetically chosen
//! points via exact-arithmetic oscillatory sums, and verifies at desk scale the
//! computable ingredients: quadratic Gauss sum magnitudes, the quadratic Weyl
//! bound, simultaneous Dirichlet approximation, the measure of the rational box
//! sets Ω and Ω*, the pointwise lower bound on |e^{itΔ}f|, and the growth
//! exponent of the L¹ mass ratio.
//!
//! Modules follow the pipeline:
//!
//! * [`exponential_sums`] — complete/incomplete quadratic Gauss sums, Weyl sums
//!   and their analytic bounds, with exact rational phase reduction.
//! * [`diophantine`] — simultaneous Dirichlet approximation, continued-fraction
//!   convergents, totient and prime-factor counting.
//! * [`bump`] / [`wave_packet`] — the fixed Schwartz bump profile, the packet
//!   function f_R, its Fourier support and L² norms, exponent optimization.
//! * [`omega`] — construction of the rational box set Ω, its physical-space
//!   lift Ω*, measure computations, and per-point time selection.
//! * [`propagator`] — factorized evaluation of e^{itΔ}f with the analytic
//!   error budget, plus an independent brute-force oracle.
//! * [`experiment`] — seeded sweep driver, growth-slope fit, CSV/JSON/SVG
//!   reports.

pub mod bump;
pub mod diophantine;
pub mod error;
pub mod experiment;
pub mod exponential_sums;
pub mod measure;
pub mod omega;
pub mod phase;
pub mod propagator;
pub mod quad;
pub mod rational;
pub mod wave_packet;

pub use bump::{make_bump, BumpProfile};
pub use error::{Error, Result};
pub use rational::Rational;
pub use wave_packet::{packet_params, solve_exponents, Constants, ExponentSolution, PacketParams};
