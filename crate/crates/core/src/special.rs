//! Gamma function via the Lanczos approximation.
//!
//! The exchange coefficient λ(d,s) and the Riesz normalization c_{d,s} both
//! involve ratios Γ((d−s)/2)/Γ(s/2), so the approximation has to hold a
//! relative error of about 1e-13 over (0, 10]. The g = 7, n = 9 coefficient
//! set does that with margin; the reflection formula covers x < 1/2.


#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, poles at non-positive integers return `f64::NAN`.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = core::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * core::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powf(x + 0.5) * (-t).exp() * acc
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = core::f64::consts::PI;
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x);
    }
    let xm = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xm + i as f64);
    }
    let t = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * core::f64::consts::PI).ln() + (xm + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values to 20 significant digits
    const REFS: [(f64, f64); 18] = [
        (0.05, 19.470085311255511756),
        (0.1, 9.5135076986687312858),
        (0.25, 3.6256099082219083119),
        (0.5, 1.7724538509055160273),
        (0.75, 1.2254167024651776451),
        (1.0, 1.0),
        (1.25, 0.90640247705547707798),
        (1.5, 0.88622692545275801365),
        (2.0, 1.0),
        (2.5, 1.3293403881791370205),
        (3.7, 4.1706517837966040301),
        (4.5, 11.631728396567448929),
        (5.0, 24.0),
        (6.75, 453.01076610260847562),
        (7.25, 1155.3810139199896872),
        (8.5, 14034.407293483412599),
        (9.9, 289867.70384010963758),
        (10.0, 362880.0),
    ];

    #[test]
    fn gamma_reference_values() {
        for &(x, want) in &REFS {
            let got = gamma(x);
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-13, "gamma({x}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn gamma_recurrence() {
        for &x in &[0.3, 0.9, 1.7, 3.3, 6.6, 9.2] {
            let lhs = gamma(x + 1.0);
            let rhs = x * gamma(x);
            assert!(((lhs - rhs) / rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn ln_gamma_consistent() {
        for &(x, want) in &REFS {
            let got = ln_gamma(x).exp();
            assert!(((got - want) / want).abs() < 1e-12);
        }
    }
}
