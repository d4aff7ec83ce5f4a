//! `t0`: zero-temperature polarization-energy curves, the argmin-vs-density
//! scan, and detected transitions.

use crate::config::RunConfig;
use crate::output::{fmt, OutputDir};
use crate::EXIT_OK;
use anyhow::Result;
use hfgas_core::{detect_transitions, polarization_curve, scan_polarization, PhaseLabel};
use std::fmt::Write as _;

fn label(l: PhaseLabel) -> &'static str {
    match l {
        PhaseLabel::Ferro => "ferromagnetic",
        PhaseLabel::Para => "paramagnetic",
        PhaseLabel::Partial => "partial",
    }
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let pot = cfg.potential()?;
    let out = OutputDir::new(&cfg.out_dir, &cfg.resolved())?;

    // P_rho(t) curves, one column per requested density
    let mut curves = Vec::new();
    for &rho in &cfg.curve_densities {
        match polarization_curve(&pot, rho, 201) {
            Ok(c) => curves.push(c),
            Err(e) => eprintln!("curve at rho={rho:.3e} failed: {e}"),
        }
    }
    if !curves.is_empty() {
        let mut body = String::new();
        let heads: Vec<String> = curves.iter().map(|c| format!("E_rho_{:.6e}", c.rho)).collect();
        let _ = writeln!(body, "t,{}", heads.join(","));
        for i in 0..curves[0].samples.len() {
            let t = curves[0].samples[i].0;
            let cells: Vec<String> = curves.iter().map(|c| fmt(c.samples[i].1)).collect();
            let _ = writeln!(body, "{},{}", fmt(t), cells.join(","));
        }
        let p = out.write("polarization_curves.csv", &body)?;
        println!("wrote {}", p.display());
    }

    // argmin scan over the density grid
    let rho_grid = cfg.rho_grid();
    let scan = scan_polarization(&pot, &rho_grid).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut body = String::from("rho,t_opt\n");
    for &(rho, t) in &scan {
        let _ = writeln!(body, "{},{}", fmt(rho), fmt(t));
    }
    let p = out.write("polarization_scan.csv", &body)?;
    println!("wrote {}", p.display());

    let events = detect_transitions(&scan);
    if events.is_empty() {
        println!("no transitions detected on the scanned range");
    }
    for e in &events {
        println!(
            "transition in rho = [{:.6e}, {:.6e}]: {} -> {} (|dt| = {:.3})",
            e.rho_lo,
            e.rho_hi,
            label(e.from),
            label(e.to),
            e.t_jump
        );
    }
    Ok(EXIT_OK)
}
