//! Oracle tests for the exact constants and angular kernels: closed forms,
//! independent quadrature, and seeded Monte-Carlo cross-checks.

use hfgas_core::{
    angular_kernel, dirac_constant, energy_coefficients, riesz_normalization, surface_area,
    thomas_fermi_constant, RieszPotential, RieszTerm,
};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn dirac_constant_coulomb_is_4pi2() {
    let got = dirac_constant(3, 1.0).unwrap();
    assert!(rel(got, 4.0 * PI * PI) < 1e-8, "got {got}");
}

#[test]
fn dirac_constant_tends_to_volume_squared() {
    // kernel -> 1 as the exponent s-d -> 0
    let got = dirac_constant(3, 3.0 - 1e-6).unwrap();
    let vol2 = (4.0 * PI / 3.0) * (4.0 * PI / 3.0);
    assert!(rel(got, vol2) < 1e-4, "got {got} want ~{vol2}");
}

#[test]
fn dirac_constant_continuous_and_positive_in_s() {
    // positivity over the whole admissible range (c_D ~ 1/s as s -> 0)
    for i in 1..30 {
        let s = 3.0 * i as f64 / 30.0;
        assert!(dirac_constant(3, s).unwrap() > 0.0, "s={s}");
    }
    // sampled continuity away from the 1/s blow-up: adjacent values on a
    // fine grid stay within a few percent
    let mut prev: Option<f64> = None;
    for i in 0..=48 {
        let s = 0.5 + 2.4 * i as f64 / 48.0;
        let v = dirac_constant(3, s).unwrap();
        if let Some(p) = prev {
            assert!((v - p).abs() < 0.08 * (p + v), "jump at s={s}: {p} -> {v}");
        }
        prev = Some(v);
    }
}

/// Uniform point in the d-dimensional unit ball.
fn ball_point<const D: usize>(rng: &mut SmallRng) -> [f64; D] {
    loop {
        let mut p = [0.0; D];
        let mut n2 = 0.0;
        for x in &mut p {
            *x = 2.0 * rng.gen::<f64>() - 1.0;
            n2 += *x * *x;
        }
        if n2 <= 1.0 {
            return p;
        }
    }
}

fn mc_dirac<const D: usize>(s: f64, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = SmallRng::seed_from_u64(seed);
    let d = D as f64;
    let vol = PI.powf(d / 2.0) / hfgas_core::special::gamma(d / 2.0 + 1.0);
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..n {
        let a = ball_point::<D>(&mut rng);
        let b = ball_point::<D>(&mut rng);
        let mut q2 = 0.0;
        for i in 0..D {
            q2 += (a[i] - b[i]) * (a[i] - b[i]);
        }
        let v = q2.powf((s - d) / 2.0);
        sum += v;
        sum2 += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum2 / n as f64 - mean * mean).max(0.0);
    let se = (var / n as f64).sqrt();
    (vol * vol * mean, vol * vol * se)
}

#[test]
fn dirac_constant_matches_monte_carlo_3d() {
    // frozen deterministic value for (d, s) = (3, 5/2), cross-checked here
    // against a seeded 10^7-sample Monte-Carlo estimate
    let got = dirac_constant(3, 2.5).unwrap();
    assert!(rel(got, 18.561966079039518) < 1e-9, "regression: {got}");
    let (mc, se) = mc_dirac::<3>(2.5, 10_000_000, 20240817);
    assert!(
        (got - mc).abs() <= 3.0 * se,
        "quadrature {got} vs MC {mc} +- {se}"
    );
}

#[test]
fn dirac_constant_generic_dimension_matches_monte_carlo() {
    // d = 2 exercises the distance-density path
    let got = dirac_constant(2, 1.0).unwrap();
    let (mc, se) = mc_dirac::<2>(1.0, 4_000_000, 7);
    assert!((got - mc).abs() <= 3.0 * se, "{got} vs {mc} +- {se}");
}

#[test]
fn dirac_constant_two_reductions_agree_in_3d() {
    // the d = 3 closed-inner-integral route against the any-d
    // distance-density route, evaluated by forming a potential in a fake
    // dimension is not possible; instead compare against the d = 1 closed
    // form and the 3d values through the same public surface
    for &s in &[0.5, 1.0, 1.7, 2.5] {
        let a = dirac_constant(3, s).unwrap();
        // distance-density evaluation of the same integral, inline oracle
        let half = 1.0; // (d-1)/2 for d = 3
        let w = |t: f64| {
            let n = 2000;
            let mut acc = 0.0;
            let step = (1.0 - t) / n as f64;
            for i in 0..n {
                let v: f64 = t + (i as f64 + 0.5) * step;
                acc += (1.0 - v * v).powf(half) * step;
            }
            acc
        };
        let w0 = w(0.0);
        let n = 4000;
        let mut acc = 0.0;
        let hi = 2.0f64.powf(s);
        for i in 0..n {
            let tt = (i as f64 + 0.5) / n as f64 * hi;
            let u = tt.powf(1.0 / s);
            acc += w(0.5 * u) / w0 * hi / n as f64;
        }
        let vol = 4.0 * PI / 3.0;
        let oracle = vol * vol * 3.0 * acc / s;
        assert!(rel(a, oracle) < 1e-5, "s={s}: {a} vs {oracle}");
    }
}

#[test]
fn dirac_constant_d1_closed_form() {
    // elementary: 2^{s+2}/(s(s+1))
    for &s in &[0.25, 0.5, 0.9] {
        let got = dirac_constant(1, s).unwrap();
        let want = 2.0f64.powf(s + 2.0) / (s * (s + 1.0));
        assert!(rel(got, want) < 1e-12, "s={s}");
    }
}

#[test]
fn kinetic_coefficient_closed_form_3d() {
    let pot = RieszPotential::coulomb_3d();
    let c = energy_coefficients(&pot).unwrap();
    let want = 3.0f64.powf(5.0 / 3.0) * PI.powf(4.0 / 3.0) / (2.0f64.powf(1.0 / 3.0) * 5.0);
    assert!(rel(c.kappa_d, want) < 1e-12, "kappa(3) = {}", c.kappa_d);
}

#[test]
fn exchange_coefficient_closed_form_3d_coulomb() {
    let pot = RieszPotential::coulomb_3d();
    let c = energy_coefficients(&pot).unwrap();
    let want = 3.0f64.powf(4.0 / 3.0) / (2.0f64.powf(5.0 / 3.0) * PI.powf(1.0 / 3.0));
    assert!(rel(c.terms[0].lambda, want) < 1e-12, "lambda(3,1) = {}", c.terms[0].lambda);
    // internal consistency: the general formula reproduces the closed form
    // through c_D(3,1) = 4pi^2
    assert!(rel(c.terms[0].c_d, 4.0 * PI * PI) < 1e-8);
}

#[test]
fn kinetic_coefficient_matches_fermi_ball_integral() {
    // independent oracle: (2(2π)^d)^{-1} |S^{d-1}| ∫_0^{k_F} k^{d+1} dk at rho = 1
    for d in [1u32, 2, 3, 4] {
        let dd = d as f64;
        let pot = RieszPotential::new(
            d,
            vec![RieszTerm {
                kappa: 1e-30,
                s: 0.5 * dd.min(1.9),
            }],
        )
        .unwrap();
        let c = energy_coefficients(&pot).unwrap();
        let sd = surface_area(d).unwrap();
        let kf = thomas_fermi_constant(d).unwrap().sqrt(); // rho = 1
        let kinetic = sd / (2.0 * (2.0 * PI).powf(dd)) * kf.powf(dd + 2.0) / (dd + 2.0);
        assert!(rel(c.kappa_d, kinetic) < 1e-12, "d={d}");
    }
}

#[test]
fn angular_kernel_coulomb_closed_form_and_sphere_oracle() {
    let pot = RieszPotential::coulomb_3d();
    let (k, kp) = (1.0, 2.0);
    let got = angular_kernel(&pot, k, kp);
    let want = (3.0f64).ln() / (2.0 * PI);
    assert!(rel(got, want) < 1e-12, "{got} vs {want}");

    // oracle: direct 2D quadrature over the sphere, w(q) = (2π²q²)^{-1}
    let n = 4000;
    let mut acc = 0.0;
    for i in 0..n {
        // Gauss-Legendre would be overkill; midpoint in cosθ converges fast here
        let u = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
        let q2 = k * k + kp * kp - 2.0 * k * kp * u;
        acc += 1.0 / (2.0 * PI * PI * q2);
    }
    let oracle = 2.0 * PI * acc * 2.0 / n as f64;
    assert!(rel(got, oracle) < 1e-6, "{got} vs sphere oracle {oracle}");
}

#[test]
fn angular_kernel_positive_and_symmetric() {
    let pot = RieszPotential::from_real_space(3, &[(0.7, 0.4), (1.3, 1.6)]).unwrap();
    let mut rng = SmallRng::seed_from_u64(5);
    for _ in 0..200 {
        let k = 0.01 + rng.gen::<f64>() * 3.0;
        let kp = 0.01 + rng.gen::<f64>() * 3.0;
        if (k - kp).abs() < 1e-9 {
            continue;
        }
        let a = angular_kernel(&pot, k, kp);
        let b = angular_kernel(&pot, kp, k);
        assert!(a > 0.0);
        assert!(rel(a, b) < 1e-12, "kernel not symmetric at ({k}, {kp})");
    }
}

#[test]
fn angular_kernel_small_shell_consistency() {
    // ∫_0^ε K(k,k') k'^2 dk' -> w(k) · (4π/3)ε³ as ε -> 0 (continuity away
    // from the origin)
    let pot = RieszPotential::coulomb_3d();
    let k = 0.8;
    let w_k = pot.fourier_value(k);
    for &eps in &[1e-2, 1e-3] {
        let acc = hfgas_core::quad::fixed(
            |x: f64| angular_kernel(&pot, k, x) * x * x,
            0.0,
            eps,
            16,
        );
        let want = w_k * 4.0 * PI / 3.0 * eps.powi(3);
        assert!(
            (acc - want).abs() <= want * (2.0 * eps * eps / (k * k) + 1e-9),
            "eps={eps}: {acc} vs {want}"
        );
    }
}

#[test]
fn angular_kernel_diagonal_is_infinite_for_coulomb() {
    let pot = RieszPotential::coulomb_3d();
    assert!(angular_kernel(&pot, 0.7, 0.7).is_infinite());
}

#[test]
fn angular_kernel_d1_two_point_form() {
    let pot = RieszPotential::new(
        1,
        vec![RieszTerm {
            kappa: 2.0,
            s: 0.5,
        }],
    )
    .unwrap();
    let (k, kp) = (0.4, 0.9);
    let want = 2.0 * ((k - kp) as f64).abs().powf(-0.5) + 2.0 * (k + kp as f64).powf(-0.5);
    assert!(rel(angular_kernel(&pot, k, kp), want) < 1e-12);
}

#[test]
fn energy_coefficients_are_deterministic() {
    let pot = RieszPotential::from_real_space(3, &[(1.0, 1.0), (0.4, 2.5)]).unwrap();
    let a = energy_coefficients(&pot).unwrap();
    let b = energy_coefficients(&pot).unwrap();
    assert_eq!(a, b, "repeated calls must be bitwise identical");
}

#[test]
fn riesz_normalization_reference_values() {
    // c_{3,1} = 1/(2π²); c_{d,s} positive over the admissible range
    assert!(rel(riesz_normalization(3, 1.0).unwrap(), 1.0 / (2.0 * PI * PI)) < 1e-13);
    for &(d, s) in &[(2u32, 0.7), (3, 0.3), (3, 2.9), (4, 1.5)] {
        assert!(riesz_normalization(d, s).unwrap() > 0.0);
    }
}
