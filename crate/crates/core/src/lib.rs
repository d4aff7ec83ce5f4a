//! Spin phase diagram of the translation-invariant Hartree-Fock fermion gas.
//!
//! The gas is described by a momentum occupation `g(k) ∈ [0,1]` interacting
//! through a repulsive Riesz potential (Fourier side `Σᵢ κᵢ |k|^{sᵢ−d}`;
//! `s = 1, d = 3` is Coulomb). The spin problem decouples into two scalar
//! ("no-spin") problems weighted by a polarization `t ∈ [0, 1/2]`, so the
//! phase diagram reduces to minimizing
//! `t ↦ E(tρ, T) + E((1−t)ρ, T)` at each density and temperature.
//!
//! What lives where:
//!
//! - [`kernels`] — exact model constants (Thomas-Fermi, kinetic and exchange
//!   coefficients, the Dirac double-ball integral) and the reduced 1D angular
//!   kernels used by the radial solver.
//! - [`zero_temperature`] — closed-form `T = 0` energies, polarization scans,
//!   and exact first/second-order transition densities.
//! - [`solver`] — the positive-temperature self-consistent solver in `d = 3`:
//!   monotone fixed-point iteration to minimal/maximal solutions, a string
//!   method plus Newton polish for middle fixed points, chemical-potential
//!   root finding at fixed density, and free-energy evaluation.
//! - [`phase`] — assembly of the spin problem: per-point polarization
//!   optimization, `(ρ, T)` sweeps, transition curves, Curie temperature,
//!   and `μ(ρ)` scans.
//! - [`verify`] — standalone property oracles (matrix rearrangement
//!   inequality, the one-dimensional exchange-vs-kinetic minimizer family,
//!   Fermi-Dirac entropy).
//!
//! The crate is `no_std` (requires `alloc`); all IO lives in the companion
//! CLI crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod grid;
pub mod kernels;
pub mod linalg;
pub mod phase;
pub mod quad;
pub mod search;
pub mod solver;
pub mod special;
pub mod verify;
pub mod zero_temperature;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension must satisfy `d ≥ 1`.
    InvalidDimension(u32),
    /// Riesz exponent outside the admissible open interval for the operation.
    ExponentOutOfRange { s: f64, lo: f64, hi: f64 },
    /// Coupling, density, temperature, polarization, ... failed a precondition.
    InvalidArgument(String),
    /// Adaptive quadrature failed to reach the requested accuracy.
    QuadratureNotConverged { achieved: f64, requested: f64 },
    /// Fixed-point iteration hit the iteration cap; carries the tail of the
    /// residual history for diagnosis.
    MaxIterationsExceeded {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    /// An iterate moved against the proven monotone direction by more than
    /// the floating-point slack: the quadrature discretization is inconsistent.
    MonotonicityViolation { iteration: usize, worst: f64 },
    /// The requested branch never attains the target density; carries the
    /// scanned `(μ, density)` table.
    BracketFailure {
        target: f64,
        table: Vec<(f64, f64)>,
    },
    /// `solve_middle` called with coinciding extremal solutions.
    DegenerateEndpoints { gap: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(d) => write!(f, "dimension must be >= 1, got {d}"),
            Error::ExponentOutOfRange { s, lo, hi } => {
                write!(f, "Riesz exponent s = {s} outside ({lo}, {hi})")
            }
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
            Error::QuadratureNotConverged {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::MaxIterationsExceeded {
                iterations,
                residual,
                ..
            } => write!(
                f,
                "fixed-point iteration cap reached after {iterations} iterations, residual {residual:.3e}"
            ),
            Error::MonotonicityViolation { iteration, worst } => write!(
                f,
                "monotone iteration violated at step {iteration} by {worst:.3e}; quadrature inconsistency"
            ),
            Error::BracketFailure { target, table } => write!(
                f,
                "no bracket: branch density range does not cover rho = {target:.6e} ({} scanned points)",
                table.len()
            ),
            Error::DegenerateEndpoints { gap } => write!(
                f,
                "extremal solutions coincide (sup gap {gap:.3e}); no middle fixed point to look for"
            ),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub use grid::{GridSpec, RadialGrid};
pub use kernels::{
    angular_kernel, dirac_constant, energy_coefficients, riesz_normalization, surface_area,
    thomas_fermi_constant, ModelConstants, RieszPotential, RieszTerm, TermConstants,
};
pub use phase::{
    matched_mu_check, mu_curve, spin_energy, sweep, sweep_with, CellOutcome, Classification,
    CurieEstimate, MuCurvePoint, PhaseDiagram, PhasePoint,
};
pub use solver::{
    contraction_norm, exchange_bound, free_energy, free_fermi_density, free_fermi_mu,
    hammerstein_apply, picard_iterate, solve_at_density, solve_extremal, solve_middle,
    uniqueness_region, Branch,
    FixedPointResult, KernelOperator, MiddleOutcome, Occupation, OmegaConstants, RegionStatus,
    SolverConfig,
};
pub use verify::{
    fermi_entropy, flambda_lambda_c, flambda_lambda_max, flambda_lambda_min, flambda_minimizer,
    haar_su2, rearrangement_gap, rearrangement_sample, RearrangementSample, SpinMatrix,
};
pub use zero_temperature::{
    classify_transition, detect_transitions, mu_t0, nospin_energy_t0, phase_label,
    polarization_curve, polarization_energy, scan_polarization, CriticalDensity, PhaseLabel,
    PolarizationCurve, TransitionEvent, TransitionKind, TransitionReport,
};
