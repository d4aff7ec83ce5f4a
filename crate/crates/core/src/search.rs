//! One-dimensional search utilities shared across modules: golden-section
//! minimization, bisection on monotone functions, and a guarded
//! secant/bisection hybrid for root finding.



const INV_GOLD: f64 = 0.618_033_988_749_894_9; // 1/φ

/// Golden-section minimum of `f` on [a, b] to interval width `xtol`.
/// Returns (x_min, f(x_min)).
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let mut c = b - INV_GOLD * (b - a);
    let mut d = a + INV_GOLD * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_GOLD * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_GOLD * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection root of a monotone increasing `f` with f(a) ≤ 0 ≤ f(b).
pub fn bisect_increasing<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return m;
        }
        if f(m) <= 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Secant step bounded inside the current bracket, falling back to bisection.
/// `fa < 0 < fb` assumed (sign convention up to the caller).
pub fn guarded_secant(a: f64, fa: f64, b: f64, fb: f64) -> f64 {
    let mid = 0.5 * (a + b);
    if (fb - fa).abs() < 1e-300 {
        return mid;
    }
    let x = a - fa * (b - a) / (fb - fa);
    // keep strictly interior; otherwise bisect
    let lo = a + 0.1 * (b - a);
    let hi = b - 0.1 * (b - a);
    if x.is_finite() && x > lo && x < hi {
        x
    } else {
        mid
    }
}
