//! Oracle tests for the zero-temperature theory: quadrature oracles for the
//! closed-form energy, exact transition densities, and dense-scan
//! verification of the one-parameter minimizer family.

use hfgas_core::{
    classify_transition, detect_transitions, energy_coefficients, mu_t0, nospin_energy_t0,
    phase_label, polarization_energy, scan_polarization, thomas_fermi_constant, PhaseLabel,
    RieszPotential, TransitionKind,
};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Independent quadrature oracle for the no-spin ground-state energy of the
/// filled Fermi ball: the exact kinetic integral plus the exchange double
/// integral, reduced with nothing beyond the elementary antiderivative of
/// the angular average, then nested adaptive quadrature:
/// ∬_{|k|,|k'|<k_F} |k−k'|^{-2} dk dk' = 8π² k_F⁴ ∬_{[0,1]²} x y ln((x+y)/|x−y|).
fn energy_oracle_coulomb(rho: f64) -> f64 {
    let ctf = thomas_fermi_constant(3).unwrap();
    let kf = ctf.sqrt() * rho.powf(1.0 / 3.0);
    let kinetic = 4.0 * PI / (2.0 * (2.0 * PI).powi(3)) * kf.powi(5) / 5.0;
    let kappa = 1.0 / (2.0 * PI * PI);
    let inner = |x: f64| -> f64 {
        hfgas_core::quad::adaptive(
            &|y: f64| {
                if (x - y).abs() < 1e-300 {
                    0.0
                } else {
                    y * ((x + y) / (x - y).abs()).ln()
                }
            },
            0.0,
            1.0,
            1e-10,
        )
        .unwrap()
    };
    let j = hfgas_core::quad::adaptive(&|x: f64| x * inner(x), 0.0, 1.0, 1e-9).unwrap();
    let exchange = -0.5 / (2.0 * PI).powi(3) * kappa * kf.powi(4) * 8.0 * PI * PI * j;
    kinetic + exchange
}

#[test]
fn energy_matches_quadrature_oracle() {
    let pot = RieszPotential::coulomb_3d();
    for &rho in &[3e-4, 1e-3] {
        let closed = nospin_energy_t0(&pot, rho).unwrap();
        let oracle = energy_oracle_coulomb(rho);
        assert!(
            rel(closed, oracle) < 1e-6,
            "rho={rho}: closed {closed} vs oracle {oracle}"
        );
    }
}

#[test]
fn coulomb_first_order_transition_density() {
    let pot = RieszPotential::coulomb_3d();
    let report = classify_transition(&pot).unwrap();
    assert_eq!(report.kind, TransitionKind::FirstOrder);
    assert_eq!(report.critical_densities.len(), 1);
    let rho_c = report.rho_c();
    let closed = 125.0 / (24.0 * PI.powi(5)) * (1.0 + 2.0f64.powf(1.0 / 3.0)).powi(-3);
    assert!(rel(rho_c, closed) < 1e-12, "{rho_c} vs {closed}");
    assert!((1.46e-3..=1.48e-3).contains(&rho_c));
    let r_s = (3.0 / (4.0 * PI * rho_c)).powf(1.0 / 3.0);
    assert!((5.40..=5.50).contains(&r_s), "r_s={r_s}");
}

#[test]
fn coexistence_energies_tie_at_the_transition() {
    let pot = RieszPotential::coulomb_3d();
    let rho_c = classify_transition(&pot).unwrap().rho_c();
    let ferro = polarization_energy(&pot, rho_c, 0.0).unwrap();
    let para = polarization_energy(&pot, rho_c, 0.5).unwrap();
    assert!(
        (ferro - para).abs() <= 1e-10 * ferro.abs(),
        "P(0)={ferro} P(1/2)={para}"
    );
}

#[test]
fn transition_jump_matches_scan() {
    let pot = RieszPotential::coulomb_3d();
    let rho_c = classify_transition(&pot).unwrap().rho_c();
    let grid: Vec<f64> = (0..200)
        .map(|i| 1.0e-3 + (2.0e-3 - 1.0e-3) * i as f64 / 199.0)
        .collect();
    let scan = scan_polarization(&pot, &grid).unwrap();
    let events = detect_transitions(&scan);
    assert_eq!(events.len(), 1, "one first-order jump expected");
    assert_eq!(events[0].from, PhaseLabel::Ferro);
    assert_eq!(events[0].to, PhaseLabel::Para);
    let spacing = grid[1] - grid[0];
    assert!(
        events[0].rho_lo - spacing <= rho_c && rho_c <= events[0].rho_hi + spacing,
        "jump [{}, {}] vs rho_c {rho_c}",
        events[0].rho_lo,
        events[0].rho_hi
    );
}

#[test]
fn second_order_window_matches_scan() {
    // d = 3, s = 5/2: both window edges verified by the dense argmin scan
    let pot = RieszPotential::from_real_space(3, &[(1.0, 2.5)]).unwrap();
    let report = classify_transition(&pot).unwrap();
    assert_eq!(report.kind, TransitionKind::SecondOrder);
    let lo = report.critical_densities[0].rho;
    let hi = report.critical_densities[1].rho;
    assert!(lo < hi);

    let probe = |rho: f64| -> f64 {
        let scan = scan_polarization(&pot, &[rho]).unwrap();
        scan[0].1
    };
    // paramagnetic below the window, partial just inside
    assert_eq!(phase_label(probe(lo * 0.98)), PhaseLabel::Para);
    let inside_lo = probe(lo * 1.02);
    assert_eq!(phase_label(inside_lo), PhaseLabel::Partial);
    // ferromagnetic above, partial just below the top edge
    assert_eq!(phase_label(probe(hi * 1.02)), PhaseLabel::Ferro);
    let inside_hi = probe(hi * 0.98);
    assert!(inside_hi > 0.0 && inside_hi < 0.05, "t={inside_hi}");

    // t_rho decreasing from 1/2 to 0 across the window, interior stationary
    let mid = (lo * hi).sqrt();
    let t_mid = probe(mid);
    assert!(t_mid > 0.0 && t_mid < 0.5);
    let samples = &report.polarization_samples;
    assert!(samples.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9));
    // stationarity by centered differences
    let h = 1e-5;
    let d1 = (polarization_energy(&pot, mid, t_mid + h).unwrap()
        - polarization_energy(&pot, mid, t_mid - h).unwrap())
        / (2.0 * h);
    let scale = polarization_energy(&pot, mid, t_mid).unwrap().abs();
    assert!(d1.abs() < 1e-4 * scale / h.min(1.0), "P' = {d1}");
    // interior minimum: second difference nonnegative
    let d2 = polarization_energy(&pot, mid, t_mid + h).unwrap()
        + polarization_energy(&pot, mid, t_mid - h).unwrap()
        - 2.0 * polarization_energy(&pot, mid, t_mid).unwrap();
    assert!(d2 >= 0.0, "P'' h² = {d2}");
}

#[test]
fn lambda_crossover_matches_lemma_constant() {
    // bisect the scanned-minimizer crossover in the coupling and compare to
    // λ_c = (1-2^{1-q})/(1-2^{1-p}); three (p, q) pairs via (d, s)
    for &(d, s) in &[(3u32, 1.0), (2, 1.0), (3, 1.5)] {
        let dd = d as f64;
        let (p, q) = ((dd + s) / dd, (dd + 2.0) / dd);
        let lambda_c = (1.0 - 2.0f64.powf(1.0 - q)) / (1.0 - 2.0f64.powf(1.0 - p));
        // at fixed rho = 1, scan the minimizer as the coupling scales
        let minimizer_is_para = |lam: f64| -> bool {
            let pot = RieszPotential::from_exchange_weights(d, &[(lam, s)]).unwrap();
            let scan = scan_polarization(&pot, &[1.0]).unwrap();
            (scan[0].1 - 0.5).abs() < 1e-6
        };
        let (mut a, mut b) = (lambda_c * 0.5, lambda_c * 1.5);
        assert!(minimizer_is_para(a) && !minimizer_is_para(b));
        for _ in 0..40 {
            let m = 0.5 * (a + b);
            if minimizer_is_para(m) {
                a = m;
            } else {
                b = m;
            }
        }
        let crossover = 0.5 * (a + b);
        assert!(
            rel(crossover, lambda_c) < 1e-8,
            "(d={d}, s={s}): {crossover} vs {lambda_c}"
        );
    }
}

#[test]
fn scan_finds_three_transitions_for_mixed_potential() {
    // two-term potential with dimensionless exchange weights 1/2 and 1 at
    // exponents 1/5 and 14/5: ferro, jump to para near 0.04, smooth exit
    // near 0.18, ferro again near 0.2
    let pot =
        RieszPotential::from_exchange_weights(3, &[(0.5, 0.2), (1.0, 2.8)]).unwrap();
    let grid: Vec<f64> = (0..400)
        .map(|i| 0.01 * (0.4f64 / 0.01).powf(i as f64 / 399.0))
        .collect();
    let scan = scan_polarization(&pot, &grid).unwrap();
    let events = detect_transitions(&scan);
    let crossings: Vec<f64> = events.iter().map(|e| 0.5 * (e.rho_lo + e.rho_hi)).collect();
    // label entry/exit events of the paramagnetic plateau plus the final
    // collapse to ferro; tolerate the intermediate Partial labels
    let ferro_to_para: Vec<f64> = events
        .iter()
        .filter(|e| e.from != PhaseLabel::Para && e.to == PhaseLabel::Para)
        .map(|e| 0.5 * (e.rho_lo + e.rho_hi))
        .collect();
    let para_exit: Vec<f64> = events
        .iter()
        .filter(|e| e.from == PhaseLabel::Para && e.to != PhaseLabel::Para)
        .map(|e| 0.5 * (e.rho_lo + e.rho_hi))
        .collect();
    let to_ferro: Vec<f64> = events
        .iter()
        .filter(|e| e.to == PhaseLabel::Ferro && e.from != PhaseLabel::Ferro)
        .map(|e| 0.5 * (e.rho_lo + e.rho_hi))
        .collect();
    assert_eq!(ferro_to_para.len(), 1, "events: {events:?} ({crossings:?})");
    assert_eq!(para_exit.len(), 1);
    assert_eq!(to_ferro.len(), 1);
    assert!(rel(ferro_to_para[0], 0.04) < 0.25, "{}", ferro_to_para[0]);
    assert!(rel(para_exit[0], 0.18) < 0.25, "{}", para_exit[0]);
    assert!(rel(to_ferro[0], 0.2) < 0.25, "{}", to_ferro[0]);
}

#[test]
fn transition_density_scales_with_coupling() {
    // couplings × c maps rho_c to c^{d/(2-s)} rho_c
    for &(s, c) in &[(1.0, 3.0), (0.5, 2.0)] {
        let base = RieszPotential::from_real_space(3, &[(1.0, s)]).unwrap();
        let scaled = RieszPotential::from_real_space(3, &[(c, s)]).unwrap();
        let r0 = classify_transition(&base).unwrap().rho_c();
        let r1 = classify_transition(&scaled).unwrap().rho_c();
        let want = r0 * c.powf(3.0 / (2.0 - s));
        assert!(rel(r1, want) < 1e-12, "s={s}: {r1} vs {want}");
    }
}

#[test]
fn mu_t0_closed_form_and_energy_consistency() {
    let pot = RieszPotential::coulomb_3d();
    let c = energy_coefficients(&pot).unwrap();
    for &rho in &[1e-4, 1e-3, 1e-2] {
        let got = mu_t0(&pot, rho).unwrap();
        let want = 5.0 / 3.0 * c.kappa_d * rho.powf(2.0 / 3.0)
            - 4.0 / 3.0 * c.terms[0].lambda * rho.powf(1.0 / 3.0);
        assert!(rel(got, want) < 1e-12);
    }
}
