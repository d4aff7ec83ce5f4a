//! Closed-form zero-temperature theory: ground-state energies, chemical
//! potential, polarization energies, exact transition densities for
//! single-term Riesz interactions, and argmin scans for mixed potentials.
//!
//! At T = 0 the no-spin minimizer is the filled Fermi ball, so the energy
//! per volume is `E(ρ) = κ(d) ρ^{1+2/d} − Σᵢ λᵢ ρ^{1+sᵢ/d}` and everything
//! here is elementary arithmetic on those two exponent families. The spin
//! problem reduces to minimizing `P_ρ(t) = E(tρ) + E((1−t)ρ)` over the
//! polarization `t ∈ [0, 1/2]`.

use crate::kernels::{energy_coefficients, ModelConstants, RieszPotential};
use crate::search::golden_section;
use crate::{Error, Result};
use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

/// `E_no-spin(ρ, 0) = κ(d) ρ^{1+2/d} − Σᵢ λᵢ ρ^{1+sᵢ/d}` per unit volume.
pub fn nospin_energy_t0(pot: &RieszPotential, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "density must be nonnegative, got {rho}"
        )));
    }
    let c = energy_coefficients(pot)?;
    Ok(energy_from_constants(&c, pot.dim(), rho))
}

pub(crate) fn energy_from_constants(c: &ModelConstants, d: u32, rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let dd = d as f64;
    let mut e = c.kappa_d * rho.powf(1.0 + 2.0 / dd);
    for t in &c.terms {
        e -= t.lambda * rho.powf(1.0 + t.s / dd);
    }
    e
}

/// `μ(ρ, 0) = ∂_ρ E(ρ, 0) = (1+2/d) κ(d) ρ^{2/d} − Σᵢ (1+sᵢ/d) λᵢ ρ^{sᵢ/d}`.
pub fn mu_t0(pot: &RieszPotential, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "density must be positive, got {rho}"
        )));
    }
    let c = energy_coefficients(pot)?;
    Ok(mu_from_constants(&c, pot.dim(), rho))
}

pub(crate) fn mu_from_constants(c: &ModelConstants, d: u32, rho: f64) -> f64 {
    let dd = d as f64;
    let mut m = (1.0 + 2.0 / dd) * c.kappa_d * rho.powf(2.0 / dd);
    for t in &c.terms {
        m -= (1.0 + t.s / dd) * t.lambda * rho.powf(t.s / dd);
    }
    m
}

/// `P_ρ(t) = E(tρ) + E((1−t)ρ)` for `t ∈ [0, 1/2]`.
pub fn polarization_energy(pot: &RieszPotential, rho: f64, t: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::InvalidArgument(alloc::format!(
            "polarization must lie in [0, 1/2], got {t}"
        )));
    }
    if !(rho >= 0.0) {
        return Err(Error::InvalidArgument("density must be nonnegative".to_string()));
    }
    let c = energy_coefficients(pot)?;
    let d = pot.dim();
    Ok(energy_from_constants(&c, d, t * rho) + energy_from_constants(&c, d, (1.0 - t) * rho))
}

/// A sampled `t ↦ P_ρ(t)` curve. Endpoints t = 0 and t = 1/2 always present.
#[derive(Debug, Clone)]
pub struct PolarizationCurve {
    pub rho: f64,
    /// strictly increasing t in [0, 1/2] with the corresponding P_ρ(t)
    pub samples: Vec<(f64, f64)>,
}

/// Uniform n-point sample of P_ρ on [0, 1/2] (n ≥ 2).
pub fn polarization_curve(pot: &RieszPotential, rho: f64, n: usize) -> Result<PolarizationCurve> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two samples".to_string()));
    }
    let c = energy_coefficients(pot)?;
    let d = pot.dim();
    let samples = (0..n)
        .map(|i| {
            let t = 0.5 * i as f64 / (n - 1) as f64;
            let e = energy_from_constants(&c, d, t * rho)
                + energy_from_constants(&c, d, (1.0 - t) * rho);
            (t, e)
        })
        .collect();
    Ok(PolarizationCurve { rho, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    FirstOrder,
    SecondOrder,
    Multiple,
}

#[derive(Debug, Clone)]
pub struct CriticalDensity {
    pub rho: f64,
    pub label: String,
}

/// Classification of the T = 0 phase structure of a single-term potential.
#[derive(Debug, Clone)]
pub struct TransitionReport {
    pub kind: TransitionKind,
    pub critical_densities: Vec<CriticalDensity>,
    /// sampled ρ ↦ t_ρ map across the transition window
    pub polarization_samples: Vec<(f64, f64)>,
}

impl TransitionReport {
    /// First critical density (the only one for first-order transitions).
    pub fn rho_c(&self) -> f64 {
        self.critical_densities[0].rho
    }
}

/// Exponents of the reduced one-parameter family: the minimum of
/// `f_λ(x) = x^q + (1−x)^q − λ(x^p + (1−x)^p)` with `q = (d+2)/d`,
/// `p = (d+s)/d` and `λ(ρ) = λ_s/(κ(d) ρ^{(2−s)/d})` decides the phase.
fn exponents(d: u32, s: f64) -> (f64, f64) {
    let dd = d as f64;
    ((dd + s) / dd, (dd + 2.0) / dd) // (p, q)
}

/// Exact transition densities for a single-term Riesz interaction.
///
/// - `0 < s < min(2, d)`: one first-order transition at
///   `ρ_c = (λ/κ · (1−2^{−s/d})/(1−2^{−2/d}))^{d/(2−s)}`; ferromagnetic below,
///   paramagnetic above, coexistence exactly at ρ_c.
/// - `d ≥ 3, 2 < s < d`: a smooth second-order window
///   `[ρ_{c,min}, ρ_{c,max}]` with `ρ_{c,min} = (κ λ_min/λ)^{d/(s−2)}`,
///   `ρ_{c,max} = (κ λ_max/λ)^{d/(s−2)}`, where `λ_min = q(q−1)/(p(p−1))·2^{p−q}`
///   and `λ_max = q/p`; paramagnetic below the window, pure ferromagnetic
///   above, with `t_ρ` sliding continuously from 1/2 to 0 inside.
///
/// Boundary exponents (s = 2, s = min(2,d)) and multi-term potentials are
/// rejected; use [`scan_polarization`] for those.
pub fn classify_transition(pot: &RieszPotential) -> Result<TransitionReport> {
    if pot.terms().len() != 1 {
        return Err(Error::InvalidArgument(
            "classification needs a single-term potential; use a polarization scan".to_string(),
        ));
    }
    let d = pot.dim();
    let dd = d as f64;
    let s = pot.terms()[0].s;
    let c = energy_coefficients(pot)?;
    let lam = c.terms[0].lambda;
    let kap = c.kappa_d;
    let boundary = 2.0f64.min(dd);
    if (s - boundary).abs() < 1e-12 || (s - 2.0).abs() < 1e-12 {
        return Err(Error::ExponentOutOfRange {
            s,
            lo: 0.0,
            hi: boundary,
        });
    }
    if s < boundary {
        let rho_c = (lam / kap * (1.0 - 2.0f64.powf(-s / dd)) / (1.0 - 2.0f64.powf(-2.0 / dd)))
            .powf(dd / (2.0 - s));
        let mut samples = Vec::new();
        for i in 0..=40 {
            let rho = rho_c * (0.5 + i as f64 / 40.0); // [0.5, 1.5]·ρ_c
            let t = if rho < rho_c {
                0.0
            } else if rho > rho_c {
                0.5
            } else {
                f64::NAN
            };
            samples.push((rho, t));
        }
        return Ok(TransitionReport {
            kind: TransitionKind::FirstOrder,
            critical_densities: alloc::vec![CriticalDensity {
                rho: rho_c,
                label: "coexistence".to_string(),
            }],
            polarization_samples: samples,
        });
    }
    // second-order window: needs d ≥ 3 and 2 < s < d
    if d < 3 || s <= 2.0 {
        return Err(Error::ExponentOutOfRange {
            s,
            lo: 2.0,
            hi: dd,
        });
    }
    let (p, q) = exponents(d, s);
    let lam_min = q * (q - 1.0) / (p * (p - 1.0)) * 2.0f64.powf(p - q);
    let lam_max = q / p;
    let rho_cmin = (kap * lam_min / lam).powf(dd / (s - 2.0));
    let rho_cmax = (kap * lam_max / lam).powf(dd / (s - 2.0));
    let mut samples = Vec::new();
    for i in 0..=60 {
        let rho = rho_cmin * (rho_cmax / rho_cmin).powf(i as f64 / 60.0);
        samples.push((rho, polarization_at_second_order(p, q, lam / kap, s, dd, rho)));
    }
    Ok(TransitionReport {
        kind: TransitionKind::SecondOrder,
        critical_densities: alloc::vec![
            CriticalDensity {
                rho: rho_cmin,
                label: "paramagnetic boundary".to_string(),
            },
            CriticalDensity {
                rho: rho_cmax,
                label: "ferromagnetic boundary".to_string(),
            },
        ],
        polarization_samples: samples,
    })
}

/// `t_ρ` in the second-order window by bisecting the strictly decreasing
/// stationarity map `λ(x) = (q/p)(x^{q−1}−(1−x)^{q−1})/(x^{p−1}−(1−x)^{p−1})`.
fn polarization_at_second_order(p: f64, q: f64, lam_over_kap: f64, s: f64, dd: f64, rho: f64) -> f64 {
    let lam_min = q * (q - 1.0) / (p * (p - 1.0)) * 2.0f64.powf(p - q);
    let lam_max = q / p;
    let lambda = lam_over_kap * rho.powf((s - 2.0) / dd);
    if lambda <= lam_min {
        return 0.5;
    }
    if lambda >= lam_max {
        return 0.0;
    }
    let lam_of = |x: f64| -> f64 {
        q / p * (x.powf(q - 1.0) - (1.0 - x).powf(q - 1.0))
            / (x.powf(p - 1.0) - (1.0 - x).powf(p - 1.0))
    };
    // λ(x) decreasing on (0, 1/2): bisect for λ(x) = lambda
    let (mut a, mut b) = (1e-14, 0.5 - 1e-14);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if lam_of(m) > lambda {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Global minimizer of `P_ρ(t)` on [0, 1/2] for each density: a 2001-point
/// scan refined by golden-section around the best local minima to
/// |Δt| ≤ 1e-6. Works for any (multi-term) potential.
pub fn scan_polarization(pot: &RieszPotential, rho_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if rho_grid.is_empty() {
        return Err(Error::InvalidArgument("empty density grid".to_string()));
    }
    if rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "density grid must be strictly increasing".to_string(),
        ));
    }
    let c = energy_coefficients(pot)?;
    let d = pot.dim();
    let mut out = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        out.push((rho, argmin_polarization(&c, d, rho)));
    }
    Ok(out)
}

pub(crate) fn argmin_polarization(c: &ModelConstants, d: u32, rho: f64) -> f64 {
    const N: usize = 2001;
    let f = |t: f64| {
        energy_from_constants(c, d, t * rho) + energy_from_constants(c, d, (1.0 - t) * rho)
    };
    let mut vals = [0.0f64; N];
    for (i, v) in vals.iter_mut().enumerate() {
        *v = f(0.5 * i as f64 / (N - 1) as f64);
    }
    // collect local minima (including endpoints), refine the best three
    let mut minima: Vec<(usize, f64)> = Vec::new();
    for i in 0..N {
        let left_up = i == 0 || vals[i] <= vals[i - 1];
        let right_up = i == N - 1 || vals[i] <= vals[i + 1];
        if left_up && right_up {
            minima.push((i, vals[i]));
        }
    }
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));
    minima.truncate(3);
    let step = 0.5 / (N - 1) as f64;
    let mut best = (f64::NAN, f64::INFINITY);
    for &(i, _) in &minima {
        let a = (i as f64 - 1.0).max(0.0) * step;
        let b = ((i + 1) as f64 * step).min(0.5);
        let (t, e) = golden_section(f, a, b, 1e-7);
        // golden never samples the bracket ends; endpoint minima are exact
        for (tc, ec) in [(t, e), (a, f(a)), (b, f(b))] {
            if ec < best.1 {
                best = (tc, ec);
            }
        }
    }
    best.0.clamp(0.0, 0.5)
}

/// Phase label of a scanned polarization value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseLabel {
    /// t within 1e-3 of 0
    Ferro,
    /// t within 1e-3 of 1/2
    Para,
    Partial,
}

pub fn phase_label(t: f64) -> PhaseLabel {
    if t <= 1e-3 {
        PhaseLabel::Ferro
    } else if t >= 0.5 - 1e-3 {
        PhaseLabel::Para
    } else {
        PhaseLabel::Partial
    }
}

/// A change of phase label between adjacent scan densities.
#[derive(Debug, Clone)]
pub struct TransitionEvent {
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub from: PhaseLabel,
    pub to: PhaseLabel,
    /// polarization jump across the event; large jumps indicate first order
    pub t_jump: f64,
}

/// Label changes along an argmin scan (output of [`scan_polarization`]).
pub fn detect_transitions(scan: &[(f64, f64)]) -> Vec<TransitionEvent> {
    let mut out = Vec::new();
    for w in scan.windows(2) {
        let (r0, t0) = w[0];
        let (r1, t1) = w[1];
        let (l0, l1) = (phase_label(t0), phase_label(t1));
        if l0 != l1 {
            out.push(TransitionEvent {
                rho_lo: r0,
                rho_hi: r1,
                from: l0,
                to: l1,
                t_jump: (t1 - t0).abs(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::RieszTerm;
    use core::f64::consts::PI;

    fn coulomb() -> RieszPotential {
        RieszPotential::coulomb_3d()
    }

    #[test]
    fn energy_zero_at_zero_density() {
        assert_eq!(nospin_energy_t0(&coulomb(), 0.0).unwrap(), 0.0);
        assert!(nospin_energy_t0(&coulomb(), -1.0).is_err());
    }

    #[test]
    fn polarization_energy_symmetries() {
        let pot = coulomb();
        let rho = 7.7e-4;
        // t = 1/2 equals 2·E(ρ/2); t = 0 equals E(ρ)
        let half = polarization_energy(&pot, rho, 0.5).unwrap();
        let e_half = nospin_energy_t0(&pot, rho / 2.0).unwrap();
        assert!((half - 2.0 * e_half).abs() < 1e-18 + 1e-14 * half.abs());
        let zero = polarization_energy(&pot, rho, 0.0).unwrap();
        let e_full = nospin_energy_t0(&pot, rho).unwrap();
        assert!((zero - e_full).abs() < 1e-18 + 1e-14 * zero.abs());
        assert!(polarization_energy(&pot, rho, 0.6).is_err());
        assert!(polarization_energy(&pot, rho, -0.1).is_err());
    }

    #[test]
    fn mu_is_energy_derivative() {
        let pot = coulomb();
        for &rho in &[1e-4, 5.4e-4, 1.3e-3] {
            let h = 1e-7 * rho;
            let num = (nospin_energy_t0(&pot, rho + h).unwrap()
                - nospin_energy_t0(&pot, rho - h).unwrap())
                / (2.0 * h);
            let mu = mu_t0(&pot, rho).unwrap();
            assert!(((num - mu) / mu).abs() < 1e-5, "rho={rho}");
        }
        assert!(mu_t0(&pot, 0.0).is_err());
    }

    #[test]
    fn mu_closed_form_3d_coulomb() {
        // μ(ρ,0) = 3^{2/3}π^{4/3}/2^{1/3} ρ^{2/3} − 6^{1/3}/π^{1/3} ρ^{1/3}
        let pot = coulomb();
        for &rho in &[1e-4, 1e-3, 1e-2] {
            let want = 3.0f64.powf(2.0 / 3.0) * PI.powf(4.0 / 3.0) / 2.0f64.powf(1.0 / 3.0)
                * rho.powf(2.0 / 3.0)
                - 6.0f64.powf(1.0 / 3.0) / PI.powf(1.0 / 3.0) * rho.powf(1.0 / 3.0);
            let got = mu_t0(&pot, rho).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "rho={rho} got={got} want={want}"
            );
        }
    }

    #[test]
    fn mu_has_interior_minimum() {
        // μ'(ρ*) = 0 at ρ* = (2λ/(5κ))³ for 3D Coulomb; μ is not one-to-one
        let pot = coulomb();
        let c = energy_coefficients(&pot).unwrap();
        let (kap, lam) = (c.kappa_d, c.terms[0].lambda);
        // root of μ' by bisection as an independent oracle
        let dmu = |rho: f64| {
            let h = 1e-6 * rho;
            (mu_t0(&pot, rho + h).unwrap() - mu_t0(&pot, rho - h).unwrap()) / (2.0 * h)
        };
        let rho_star = crate::search::bisect_increasing(dmu, 1e-5, 1e-2, 1e-14);
        let closed = (2.0 * lam / (5.0 * kap)).powi(3);
        assert!(((rho_star - closed) / closed).abs() < 1e-6);
        let m = mu_t0(&pot, rho_star).unwrap();
        assert!(mu_t0(&pot, rho_star / 2.0).unwrap() > m);
        assert!(mu_t0(&pot, rho_star * 2.0).unwrap() > m);
    }

    #[test]
    fn scan_free_gas_is_paramagnetic() {
        // vanishing exchange: kinetic convexity forces t = 1/2
        let pot = RieszPotential::new(
            3,
            alloc::vec![RieszTerm {
                kappa: 1e-30,
                s: 1.0
            }],
        )
        .unwrap();
        let scan = scan_polarization(&pot, &[1e-4, 1e-3, 1e-2, 1e-1]).unwrap();
        for (rho, t) in scan {
            assert!((t - 0.5).abs() < 1e-6, "rho={rho} t={t}");
        }
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let pot = coulomb();
        assert!(scan_polarization(&pot, &[]).is_err());
        assert!(scan_polarization(&pot, &[1e-3, 1e-3]).is_err());
        assert!(scan_polarization(&pot, &[2e-3, 1e-3]).is_err());
    }

    #[test]
    fn classify_rejects_boundary_and_multiterm() {
        let boundary = RieszPotential::new(
            3,
            alloc::vec![RieszTerm {
                kappa: 1.0,
                s: 2.0
            }],
        )
        .unwrap();
        assert!(classify_transition(&boundary).is_err());
        let multi = RieszPotential::from_real_space(3, &[(1.0, 1.0), (0.5, 0.5)]).unwrap();
        assert!(classify_transition(&multi).is_err());
    }
}
