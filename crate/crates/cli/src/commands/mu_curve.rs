//! `mu-curve`: the Fermi level μ against the density ρ per temperature,
//! including all branches where the relation is multivalued.

use crate::config::RunConfig;
use crate::output::{fmt, OutputDir};
use crate::EXIT_OK;
use anyhow::Result;
use hfgas_core::{mu_curve, Branch};
use std::fmt::Write as _;

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Minimal => "min",
        Branch::Maximal => "max",
        Branch::Middle => "middle",
    }
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let pot = cfg.potential()?;
    let out = OutputDir::new(&cfg.out_dir, &cfg.resolved())?;
    let rho_grid = cfg.rho_grid();
    for &t in &cfg.temperatures {
        let points = mu_curve(&pot, t, &rho_grid, &cfg.solver).map_err(|e| anyhow::anyhow!("{e}"))?;
        let mut body = String::from("mu,rho,branch\n");
        for p in &points {
            let _ = writeln!(body, "{},{},{}", fmt(p.mu), fmt(p.rho), branch_name(p.branch));
        }
        let name = format!("mu_curve_T{t:e}.csv");
        let path = out.write(&name, &body)?;
        println!("wrote {} ({} points)", path.display(), points.len());
    }
    Ok(EXIT_OK)
}
