//! Dense LU with partial pivoting, just big enough for the Newton polish of
//! middle fixed points (N ≈ a few hundred).

use alloc::vec::Vec;

/// Solve `A x = b` in place; `a` is row-major n×n and is destroyed.
/// Returns None if the matrix is numerically singular.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // pivot
        let mut p = col;
        let mut best = a[perm[col] * n + col].abs();
        for (r, &pr) in perm.iter().enumerate().skip(col + 1) {
            let v = a[pr * n + col].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        perm.swap(col, p);
        let prow = perm[col];
        let piv = a[prow * n + col];
        for &r in perm.iter().skip(col + 1) {
            let f = a[r * n + col] / piv;
            if f == 0.0 {
                continue;
            }
            a[r * n + col] = f; // store multiplier
            for c in (col + 1)..n {
                a[r * n + c] -= f * a[prow * n + c];
            }
        }
    }
    // forward substitution on permuted b
    let mut y = alloc::vec![0.0; n];
    for i in 0..n {
        let mut acc = b[perm[i]];
        for j in 0..i {
            acc -= a[perm[i] * n + j] * y[j];
        }
        y[i] = acc;
    }
    // back substitution
    let mut x = alloc::vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= a[perm[i] * n + j] * x[j];
        }
        x[i] = acc / a[perm[i] * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn solves_random_systems() {
        let mut rng = SmallRng::seed_from_u64(7);
        for n in [1usize, 2, 5, 40] {
            let mut a: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() - 0.5).collect();
            // diagonal dominance for a guaranteed well-conditioned test
            for i in 0..n {
                a[i * n + i] += n as f64;
            }
            let x_true: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let mut b = alloc::vec![0.0; n];
            for i in 0..n {
                b[i] = (0..n).map(|j| a[i * n + j] * x_true[j]).sum();
            }
            let x = solve_dense(&mut a.clone(), &mut b, n).unwrap();
            for i in 0..n {
                assert!((x[i] - x_true[i]).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn rejects_singular() {
        let mut a = alloc::vec![1.0, 2.0, 2.0, 4.0];
        let mut b = alloc::vec![1.0, 2.0];
        assert!(solve_dense(&mut a, &mut b, 2).is_none());
    }
}
