//! `constants`: exact model constants and transition densities as a table
//! or machine-readable key=value lines.

use crate::config::RunConfig;
use crate::EXIT_OK;
use anyhow::Result;
use hfgas_core::{classify_transition, energy_coefficients, thomas_fermi_constant, TransitionKind};

pub fn run(cfg: &RunConfig, machine: bool) -> Result<i32> {
    let pot = cfg.potential()?;
    let consts = energy_coefficients(&pot).map_err(|e| anyhow::anyhow!("{e}"))?;
    let d = pot.dim();
    let ctf = thomas_fermi_constant(d).map_err(|e| anyhow::anyhow!("{e}"))?;

    if machine {
        println!("d = {d}");
        println!("c_TF = {:.16e}", ctf);
        println!("kappa_d = {:.16e}", consts.kappa_d);
        for (i, t) in consts.terms.iter().enumerate() {
            let n = i + 1;
            println!("s_{n} = {:.16e}", t.s);
            println!("kappa_{n} = {:.16e}", t.kappa);
            println!("lambda_{n} = {:.16e}", t.lambda);
            println!("c_D_{n} = {:.16e}", t.c_d);
            println!("c_ds_{n} = {:.16e}", t.c_ds);
        }
    } else {
        println!("dimension d = {d}");
        println!("{:<28}{:>24.16e}", "Thomas-Fermi c_TF", ctf);
        println!("{:<28}{:>24.16e}", "kinetic kappa(d)", consts.kappa_d);
        for (i, t) in consts.terms.iter().enumerate() {
            println!("term {} (s = {}):", i + 1, t.s);
            println!("  {:<26}{:>24.16e}", "Fourier coupling kappa", t.kappa);
            println!("  {:<26}{:>24.16e}", "exchange lambda", t.lambda);
            println!("  {:<26}{:>24.16e}", "Dirac c_D", t.c_d);
            println!("  {:<26}{:>24.16e}", "normalization c_{d,s}", t.c_ds);
        }
    }

    match classify_transition(&pot) {
        Ok(report) => match report.kind {
            TransitionKind::FirstOrder => {
                let rho_c = report.rho_c();
                let r_s = (3.0 / (4.0 * std::f64::consts::PI * rho_c)).powf(1.0 / 3.0);
                if machine {
                    println!("transition = first_order");
                    println!("rho_c = {rho_c:.16e}");
                    println!("r_s = {r_s:.16e}");
                } else {
                    println!("first-order transition: rho_c = {rho_c:.6e} (r_s = {r_s:.4})");
                }
            }
            TransitionKind::SecondOrder => {
                let lo = report.critical_densities[0].rho;
                let hi = report.critical_densities[1].rho;
                if machine {
                    println!("transition = second_order");
                    println!("rho_c_min = {lo:.16e}");
                    println!("rho_c_max = {hi:.16e}");
                } else {
                    println!("second-order window: rho_c_min = {lo:.6e}, rho_c_max = {hi:.6e}");
                }
            }
            TransitionKind::Multiple => {}
        },
        Err(e) => {
            if machine {
                println!("transition = unclassified");
            } else {
                println!("transition classification not applicable: {e}");
            }
        }
    }
    Ok(EXIT_OK)
}
