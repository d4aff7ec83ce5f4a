//! Standalone property oracles, independent of the solver: the 2×2 matrix
//! rearrangement inequality behind the spin decoupling, the one-parameter
//! minimizer family `f_λ(x) = x^q + (1−x)^q − λ(x^p + (1−x)^p)` behind the
//! zero-temperature transitions, and the Fermi-Dirac entropy.

use crate::search::golden_section;
use crate::{Error, Result};
use alloc::string::ToString;
use num_complex::Complex64;
use rand::Rng;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

/// A 2×2 complex matrix with the structural predicates the oracles need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl SpinMatrix {
    pub fn diagonal(a: f64, b: f64) -> Self {
        SpinMatrix {
            entries: [
                [Complex64::new(a, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(b, 0.0)],
            ],
        }
    }

    pub fn identity() -> Self {
        Self::diagonal(1.0, 1.0)
    }

    /// SU(2) element from a unit quaternion (a, b, c, d).
    pub fn from_quaternion(a: f64, b: f64, c: f64, d: f64) -> Self {
        let norm = (a * a + b * b + c * c + d * d).sqrt();
        let (a, b, c, d) = (a / norm, b / norm, c / norm, d / norm);
        SpinMatrix {
            entries: [
                [Complex64::new(a, b), Complex64::new(c, d)],
                [Complex64::new(-c, d), Complex64::new(a, -b)],
            ],
        }
    }

    pub fn mul(&self, other: &SpinMatrix) -> SpinMatrix {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[i][0] * other.entries[0][j]
                    + self.entries[i][1] * other.entries[1][j];
            }
        }
        SpinMatrix { entries: out }
    }

    pub fn adjoint(&self) -> SpinMatrix {
        SpinMatrix {
            entries: [
                [self.entries[0][0].conj(), self.entries[1][0].conj()],
                [self.entries[0][1].conj(), self.entries[1][1].conj()],
            ],
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.entries[0][1].norm() <= tol && self.entries[1][0].norm() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries[0][0].im.abs() <= tol
            && self.entries[1][1].im.abs() <= tol
            && (self.entries[0][1] - self.entries[1][0].conj()).norm() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.mul(&self.adjoint());
        (p.entries[0][0] - Complex64::new(1.0, 0.0)).norm() <= tol
            && (p.entries[1][1] - Complex64::new(1.0, 0.0)).norm() <= tol
            && p.entries[0][1].norm() <= tol
            && p.entries[1][0].norm() <= tol
    }
}

/// Haar-distributed SU(2) element: normalized 4D Gaussian quaternion.
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> SpinMatrix {
    // Box-Muller pairs
    let mut gauss = || -> (f64, f64) {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * core::f64::consts::PI * u2;
        (r * th.cos(), r * th.sin())
    };
    let (a, b) = gauss();
    let (c, d) = gauss();
    SpinMatrix::from_quaternion(a, b, c, d)
}

/// The rearrangement gap and its closed form.
#[derive(Debug, Clone, Copy)]
pub struct RearrangementSample {
    /// tr(D₁D₂) − tr(D₁ U D₂ U*)
    pub gap: f64,
    /// α₁ α₂ (1 − |U₁₁|²) with αᵢ the ordered eigenvalue gaps
    pub closed_form: f64,
}

/// `tr(D₁D₂) − tr(D₁ U D₂ U*)` for ordered diagonal D₁, D₂ and unitary U.
/// Always ≥ 0, with equality iff some Dᵢ is scalar or U is diagonal.
pub fn rearrangement_gap(d1: &SpinMatrix, d2: &SpinMatrix, u: &SpinMatrix) -> Result<f64> {
    rearrangement_sample(d1, d2, u).map(|s| s.gap)
}

/// Gap together with the closed form `α₁α₂(1 − |U₁₁|²)`.
pub fn rearrangement_sample(
    d1: &SpinMatrix,
    d2: &SpinMatrix,
    u: &SpinMatrix,
) -> Result<RearrangementSample> {
    const TOL: f64 = 1e-12;
    for (name, d) in [("D1", d1), ("D2", d2)] {
        if !d.is_diagonal(TOL) {
            return Err(Error::InvalidArgument(alloc::format!("{name} must be diagonal")));
        }
        if d.entries[0][0].re < d.entries[1][1].re {
            return Err(Error::InvalidArgument(alloc::format!(
                "{name} eigenvalues must be ordered decreasingly"
            )));
        }
    }
    if !u.is_unitary(1e-12) || (u.determinant().norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(
            "U must be unitary with |det U| = 1".to_string(),
        ));
    }
    let direct = d1.mul(d2).trace().re;
    let rotated = d1.mul(&u.mul(&d2.mul(&u.adjoint()))).trace().re;
    let a1 = d1.entries[0][0].re - d1.entries[1][1].re;
    let a2 = d2.entries[0][0].re - d2.entries[1][1].re;
    let u11 = u.entries[0][0].norm_sqr();
    Ok(RearrangementSample {
        gap: direct - rotated,
        closed_form: a1 * a2 * (1.0 - u11),
    })
}

// ───────────────────────── f_λ family ─────────────────────────

/// Critical λ of the sharp-transition regime (p < q): the minimum jumps
/// between the endpoints at `λ_c = (1−2^{1−q})/(1−2^{1−p})`.
pub fn flambda_lambda_c(p: f64, q: f64) -> f64 {
    (1.0 - 2.0f64.powf(1.0 - q)) / (1.0 - 2.0f64.powf(1.0 - p))
}

/// Lower edge of the smooth regime (q < p < 2): `q(q−1)/(p(p−1)) · 2^{p−q}`.
pub fn flambda_lambda_min(p: f64, q: f64) -> f64 {
    q * (q - 1.0) / (p * (p - 1.0)) * 2.0f64.powf(p - q)
}

/// Upper edge of the smooth regime: `q/p`.
pub fn flambda_lambda_max(p: f64, q: f64) -> f64 {
    q / p
}

fn flambda(p: f64, q: f64, lambda: f64, x: f64) -> f64 {
    x.powf(q) + (1.0 - x).powf(q) - lambda * (x.powf(p) + (1.0 - x).powf(p))
}

/// Global minimizer of `f_λ` on [0, 1/2] by dense scan plus golden-section
/// refinement. Valid regimes: `p ∈ (1,2), q ∈ (1,3), p < q` (sharp) or
/// `1 < q < p < 2` (smooth); anything else is rejected.
pub fn flambda_minimizer(p: f64, q: f64, lambda: f64) -> Result<f64> {
    let sharp = p > 1.0 && p < 2.0 && q > 1.0 && q < 3.0 && p < q;
    let smooth = q > 1.0 && q < p && p < 2.0;
    if !sharp && !smooth {
        return Err(Error::InvalidArgument(alloc::format!(
            "(p, q) = ({p}, {q}) outside both minimizer regimes"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument("lambda must be nonnegative".to_string()));
    }
    const N: usize = 2001;
    let f = |x: f64| flambda(p, q, lambda, x);
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..N {
        let x = 0.5 * i as f64 / (N - 1) as f64;
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let step = 0.5 / (N - 1) as f64;
    let a = (best_i as f64 - 1.0).max(0.0) * step;
    let b = ((best_i + 1) as f64 * step).min(0.5);
    let (x, _) = golden_section(f, a, b, 1e-10);
    // endpoint snap: the dense scan resolves the endpoints exactly
    if best_i == 0 && f(0.0) <= f(x) {
        return Ok(0.0);
    }
    if best_i == N - 1 && f(0.5) <= f(x) {
        return Ok(0.5);
    }
    Ok(x)
}

/// Inverse of the stationarity map λ(x) in the smooth regime: the unique
/// interior minimizer for λ ∈ (λ_min, λ_max).
pub fn flambda_interior_minimizer(p: f64, q: f64, lambda: f64) -> Result<f64> {
    if !(q > 1.0 && q < p && p < 2.0) {
        return Err(Error::InvalidArgument(
            "interior inversion only applies to the smooth regime".to_string(),
        ));
    }
    let lam_of = |x: f64| -> f64 {
        q / p * (x.powf(q - 1.0) - (1.0 - x).powf(q - 1.0))
            / (x.powf(p - 1.0) - (1.0 - x).powf(p - 1.0))
    };
    let (mut a, mut b) = (1e-15, 0.5 - 1e-15);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if lam_of(m) > lambda {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Fermi-Dirac entropy `S(t) = −t ln t − (1−t) ln(1−t)` with the limit
/// convention S(0) = S(1) = 0.
pub fn fermi_entropy(t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&t));
    let a = if t > 0.0 { -t * t.ln() } else { 0.0 };
    let tm = 1.0 - t;
    let b = if tm > 0.0 { -tm * tm.ln() } else { 0.0 };
    a + b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::SeedableRng;

    #[test]
    fn entropy_values() {
        assert_eq!(fermi_entropy(0.0), 0.0);
        assert_eq!(fermi_entropy(1.0), 0.0);
        assert!((fermi_entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn entropy_concavity() {
        // centered second differences ≤ 0 on a 1000-point interior grid
        let n = 1000;
        for i in 1..n {
            let t = i as f64 / n as f64;
            let h = 0.5 / n as f64;
            let d2 = fermi_entropy(t + h) - 2.0 * fermi_entropy(t) + fermi_entropy(t - h);
            assert!(d2 <= 1e-12, "t={t}");
        }
    }

    #[test]
    fn identity_unitary_gives_zero_gap() {
        let d1 = SpinMatrix::diagonal(0.9, 0.3);
        let d2 = SpinMatrix::diagonal(0.7, 0.1);
        let g = rearrangement_gap(&d1, &d2, &SpinMatrix::identity()).unwrap();
        assert!(g.abs() < 1e-14);
    }

    #[test]
    fn scalar_d1_gives_zero_gap() {
        let mut rng = SmallRng::seed_from_u64(11);
        let d1 = SpinMatrix::diagonal(0.4, 0.4);
        let d2 = SpinMatrix::diagonal(0.8, 0.1);
        for _ in 0..50 {
            let u = haar_su2(&mut rng);
            let g = rearrangement_gap(&d1, &d2, &u).unwrap();
            assert!(g.abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_unordered_and_nonunitary() {
        let d_bad = SpinMatrix::diagonal(0.1, 0.9);
        let d = SpinMatrix::diagonal(0.9, 0.1);
        assert!(rearrangement_gap(&d_bad, &d, &SpinMatrix::identity()).is_err());
        let not_u = SpinMatrix::diagonal(2.0, 0.5);
        assert!(rearrangement_gap(&d, &d, &not_u).is_err());
    }

    #[test]
    fn haar_matrices_are_special_unitary() {
        let mut rng = SmallRng::seed_from_u64(3);
        for _ in 0..100 {
            let u = haar_su2(&mut rng);
            assert!(u.is_unitary(1e-12));
            let det = u.determinant();
            assert!((det.re - 1.0).abs() < 1e-12 && det.im.abs() < 1e-12);
        }
    }

    #[test]
    fn flambda_rejects_out_of_regime() {
        assert!(flambda_minimizer(2.5, 3.5, 1.0).is_err());
        assert!(flambda_minimizer(1.5, 1.5, 1.0).is_err());
        assert!(flambda_minimizer(1.5, 2.0, -1.0).is_err());
    }
}
