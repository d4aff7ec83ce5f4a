//! `verify`: seeded property suites over the oracle module and the solver
//! invariants. One pass/fail line per property; nonzero exit on failure.

use crate::config::RunConfig;
use crate::{EXIT_NUMERICAL, EXIT_OK};
use anyhow::Result;
use hfgas_core::{
    contraction_norm, exchange_bound, fermi_entropy, flambda_lambda_c, flambda_lambda_max,
    flambda_lambda_min, flambda_minimizer, haar_su2, rearrangement_sample, solve_extremal,
    solve_middle, Branch, MiddleOutcome, RieszPotential, SpinMatrix,
};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, outcome: std::result::Result<(), String>) {
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                self.failures += 1;
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let mut suite = Suite { failures: 0 };
    let mut rng = SmallRng::seed_from_u64(cfg.seed);
    let quick = cfg.quick;

    suite.check("rearrangement_random_haar", rearrangement_random(&mut rng, if quick { 1_000 } else { 10_000 }));
    suite.check("rearrangement_equality_cases", rearrangement_equality(&mut rng));
    suite.check("flambda_sharp_regime", flambda_sharp(&mut rng, if quick { 10 } else { 50 }));
    suite.check("flambda_smooth_regime", flambda_smooth(&mut rng, if quick { 10 } else { 50 }));
    suite.check("fermi_entropy_shape", entropy_shape());
    if !quick {
        suite.check("solver_canned_invariants", solver_invariants(cfg));
    }

    if suite.failures > 0 {
        println!("{} propert{} failed", suite.failures, if suite.failures == 1 { "y" } else { "ies" });
        Ok(EXIT_NUMERICAL)
    } else {
        println!("all properties passed");
        Ok(EXIT_OK)
    }
}

fn rearrangement_random(rng: &mut SmallRng, n: usize) -> std::result::Result<(), String> {
    for i in 0..n {
        let (a1, b1): (f64, f64) = (rng.gen(), rng.gen());
        let (a2, b2): (f64, f64) = (rng.gen(), rng.gen());
        let d1 = SpinMatrix::diagonal(a1.max(b1), a1.min(b1));
        let d2 = SpinMatrix::diagonal(a2.max(b2), a2.min(b2));
        let u = haar_su2(rng);
        let s = rearrangement_sample(&d1, &d2, &u).map_err(|e| format!("{e}"))?;
        if s.gap < -1e-14 {
            return Err(format!("sample {i}: negative gap {}", s.gap));
        }
        if (s.gap - s.closed_form).abs() > 1e-12 {
            return Err(format!(
                "sample {i}: gap {} differs from closed form {}",
                s.gap, s.closed_form
            ));
        }
    }
    Ok(())
}

fn rearrangement_equality(rng: &mut SmallRng) -> std::result::Result<(), String> {
    // U = identity
    let d1 = SpinMatrix::diagonal(0.8, 0.2);
    let d2 = SpinMatrix::diagonal(0.9, 0.4);
    let s = rearrangement_sample(&d1, &d2, &SpinMatrix::identity()).map_err(|e| format!("{e}"))?;
    if s.gap.abs() > 1e-14 {
        return Err(format!("identity case: gap {}", s.gap));
    }
    // scalar D1
    let scalar = SpinMatrix::diagonal(0.5, 0.5);
    for _ in 0..100 {
        let u = haar_su2(rng);
        let s = rearrangement_sample(&scalar, &d2, &u).map_err(|e| format!("{e}"))?;
        if s.gap.abs() > 1e-13 {
            return Err(format!("scalar case: gap {}", s.gap));
        }
    }
    // diagonal U (phases only)
    let phase = SpinMatrix::from_quaternion(0.3, 0.9539392014169456, 0.0, 0.0);
    let s = rearrangement_sample(&d1, &d2, &phase).map_err(|e| format!("{e}"))?;
    if s.gap.abs() > 1e-13 {
        return Err(format!("diagonal-U case: gap {}", s.gap));
    }
    Ok(())
}

fn flambda_sharp(rng: &mut SmallRng, n: usize) -> std::result::Result<(), String> {
    let (p, q) = (4.0 / 3.0, 5.0 / 3.0);
    let lc = flambda_lambda_c(p, q);
    for _ in 0..n {
        let lam = lc * (0.5 + rng.gen::<f64>());
        if (lam - lc).abs() < 1e-6 * lc {
            continue;
        }
        let x = flambda_minimizer(p, q, lam).map_err(|e| format!("{e}"))?;
        let want = if lam > lc { 0.0 } else { 0.5 };
        if (x - want).abs() > 1e-9 {
            return Err(format!("lambda={lam}: minimizer {x}, want {want}"));
        }
    }
    Ok(())
}

fn flambda_smooth(rng: &mut SmallRng, n: usize) -> std::result::Result<(), String> {
    let (p, q) = (4.0 / 3.0, 7.0 / 6.0); // q < p < 2
    let lmin = flambda_lambda_min(p, q);
    let lmax = flambda_lambda_max(p, q);
    // endpoint sides
    let x = flambda_minimizer(p, q, lmin * 0.5).map_err(|e| format!("{e}"))?;
    if x != 0.5 {
        return Err(format!("lambda below lambda_min: minimizer {x}, want exactly 1/2"));
    }
    let x = flambda_minimizer(p, q, lmax * 1.5).map_err(|e| format!("{e}"))?;
    if x != 0.0 {
        return Err(format!("lambda above lambda_max: minimizer {x}, want exactly 0"));
    }
    // interior: scan matches the stationarity inversion, monotone in lambda
    let mut lams: Vec<f64> = (0..n)
        .map(|_| lmin + (lmax - lmin) * (0.02 + 0.96 * rng.gen::<f64>()))
        .collect();
    lams.sort_by(f64::total_cmp);
    let mut prev = 1.0;
    for &lam in &lams {
        let x = flambda_minimizer(p, q, lam).map_err(|e| format!("{e}"))?;
        let inv =
            hfgas_core::verify::flambda_interior_minimizer(p, q, lam).map_err(|e| format!("{e}"))?;
        if (x - inv).abs() > 1e-6 {
            return Err(format!("lambda={lam}: scan {x} vs inversion {inv}"));
        }
        if x > prev + 1e-9 {
            return Err(format!("minimizer not decreasing in lambda at {lam}"));
        }
        prev = x;
    }
    Ok(())
}

fn entropy_shape() -> std::result::Result<(), String> {
    if fermi_entropy(0.0) != 0.0 || fermi_entropy(1.0) != 0.0 {
        return Err("endpoints must vanish".into());
    }
    if (fermi_entropy(0.5) - std::f64::consts::LN_2).abs() > 1e-15 {
        return Err("S(1/2) must be ln 2".into());
    }
    let n = 1000;
    for i in 1..n {
        let t = i as f64 / n as f64;
        let h = 0.4 / n as f64;
        let d2 = fermi_entropy(t + h) - 2.0 * fermi_entropy(t) + fermi_entropy(t - h);
        if d2 > 1e-12 {
            return Err(format!("second difference positive at t={t}"));
        }
    }
    Ok(())
}

fn solver_invariants(cfg: &RunConfig) -> std::result::Result<(), String> {
    let pot = RieszPotential::coulomb_3d();
    let sc = &cfg.solver;
    let cases = [(-10.0, 0.05), (-0.01, 0.05), (-0.045, 0.01)];
    for (mu, t) in cases {
        let gmin = solve_extremal(&pot, mu, t, Branch::Minimal, sc).map_err(|e| format!("{e}"))?;
        let gmax = solve_extremal(&pot, mu, t, Branch::Maximal, sc).map_err(|e| format!("{e}"))?;
        for r in [&gmin, &gmax] {
            if r.occupation.radial_increase() > 1e-9 {
                return Err(format!("(mu={mu}, T={t}): occupation not radially decreasing"));
            }
            if r.occupation.values.iter().any(|&g| !(g > 0.0 && g < 1.0)) {
                return Err(format!("(mu={mu}, T={t}): occupation left (0,1)"));
            }
            let bound = exchange_bound(&pot, r.density).map_err(|e| format!("{e}"))?;
            let vmax = r.potential.iter().cloned().fold(0.0f64, f64::max);
            if vmax > bound * (1.0 + 1e-6) {
                return Err(format!("(mu={mu}, T={t}): exchange bound violated"));
            }
        }
        if gmin.density > gmax.density + 1e-12 {
            return Err(format!("(mu={mu}, T={t}): minimal density above maximal"));
        }
        let gap = gmin
            .occupation
            .values
            .iter()
            .zip(&gmax.occupation.values)
            .map(|(a, b)| (b - a).abs())
            .fold(0.0, f64::max);
        if gap > 10.0 * sc.tol {
            match solve_middle(&pot, mu, t, &gmin, &gmax, sc).map_err(|e| format!("{e}"))? {
                MiddleOutcome::Found { result, .. } => {
                    let ok = result
                        .occupation
                        .values
                        .iter()
                        .zip(&gmin.occupation.values)
                        .zip(&gmax.occupation.values)
                        .all(|((m, lo), hi)| *m >= lo - 1e-9 && *m <= hi + 1e-9);
                    if !ok {
                        return Err(format!("(mu={mu}, T={t}): middle escaped the sandwich"));
                    }
                }
                MiddleOutcome::NoMiddle => {}
            }
        } else {
            let c = contraction_norm(&pot, &gmin).map_err(|e| format!("{e}"))?;
            if c < 1.0 && gap > 10.0 * sc.tol {
                return Err(format!("(mu={mu}, T={t}): contraction < 1 but branches differ"));
            }
        }
    }
    Ok(())
}
