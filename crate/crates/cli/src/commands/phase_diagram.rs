//! `phase-diagram`: parallel (rho, T) sweep, the t_opt matrix, transition
//! curves, level sets, and a structured run report with the Curie estimate.

use crate::config::RunConfig;
use crate::output::{fmt, OutputDir};
use crate::{EXIT_NUMERICAL, EXIT_OK};
use anyhow::Result;
use hfgas_core::{sweep_with, CellOutcome, PhaseDiagram, PhasePoint};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Serialize)]
struct CurveRow {
    temperature: f64,
    rho_c1: Option<f64>,
    rho_c2: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    curie_temperature: Option<f64>,
    curie_bracket: Option<(f64, f64)>,
    curie_open_above: bool,
    cells: usize,
    failed_cells: usize,
    failures: Vec<String>,
    transition_curves: Vec<CurveRow>,
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let pot = cfg.potential()?;
    let out = OutputDir::new(&cfg.out_dir, &cfg.resolved())?;
    let rho_grid = cfg.rho_grid();
    let t_grid = cfg.t_grid();
    if t_grid.iter().any(|&t| t <= 0.0) {
        anyhow::bail!("phase-diagram needs T > 0 everywhere on the grid");
    }

    let solver_cfg = cfg.solver.clone();
    let eval = |jobs: &[(f64, f64)]| -> Vec<hfgas_core::Result<PhasePoint>> {
        jobs.par_iter()
            .map(|&(r, t)| hfgas_core::spin_energy(&pot, r, t, &solver_cfg))
            .collect()
    };
    let diagram =
        sweep_with(&pot, &rho_grid, &t_grid, &cfg.solver, &eval).map_err(|e| anyhow::anyhow!("{e}"))?;

    write_matrix(&out, &diagram)?;
    write_curves(&out, &diagram)?;
    write_levels(&out, &diagram)?;

    let failures: Vec<String> = diagram
        .points
        .iter()
        .filter_map(|c| match c {
            CellOutcome::Failed {
                rho,
                temperature,
                error,
            } => Some(format!("rho={rho:.6e} T={temperature:.6e}: {error}")),
            CellOutcome::Point(_) => None,
        })
        .collect();
    let report = Report {
        curie_temperature: diagram.curie.as_ref().map(|c| c.t_c),
        curie_bracket: diagram.curie.as_ref().map(|c| c.bracket),
        curie_open_above: diagram.curie.as_ref().map(|c| c.open_above).unwrap_or(false),
        cells: diagram.points.len(),
        failed_cells: diagram.failed_cells,
        failures,
        transition_curves: diagram
            .transition_curves
            .iter()
            .map(|c| CurveRow {
                temperature: c.temperature,
                rho_c1: c.rho_c1,
                rho_c2: c.rho_c2,
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&report)?;
    let p = out.write("report.json", &json)?;
    println!("wrote {}", p.display());
    match &diagram.curie {
        Some(c) if !c.open_above => println!(
            "Curie temperature T_c = {:.5e} (bracket [{:.5e}, {:.5e}])",
            c.t_c, c.bracket.0, c.bracket.1
        ),
        Some(c) => println!("ferromagnetic at the top of the grid; T_c >= {:.5e}", c.t_c),
        None => println!("no ferromagnetic cells on the grid"),
    }
    println!(
        "{} cells, {} failed",
        diagram.points.len(),
        diagram.failed_cells
    );

    if diagram.failed_cells * 10 > diagram.points.len() {
        eprintln!("more than 10% of cells failed");
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

fn write_matrix(out: &OutputDir, d: &PhaseDiagram) -> Result<()> {
    let mut body = String::new();
    let heads: Vec<String> = d.t_grid.iter().map(|&t| fmt(t)).collect();
    let _ = writeln!(body, "rho\\T,{}", heads.join(","));
    for (i, &rho) in d.rho_grid.iter().enumerate() {
        let cells: Vec<String> = (0..d.t_grid.len())
            .map(|j| match d.t_opt_at(i, j) {
                Some(t) => fmt(t),
                None => "nan".to_string(),
            })
            .collect();
        let _ = writeln!(body, "{},{}", fmt(rho), cells.join(","));
    }
    let p = out.write("t_opt_matrix.csv", &body)?;
    println!("wrote {}", p.display());
    Ok(())
}

fn write_curves(out: &OutputDir, d: &PhaseDiagram) -> Result<()> {
    let mut body = String::from("T,rho_c1,rho_c2\n");
    for c in &d.transition_curves {
        let c1 = c.rho_c1.map(fmt).unwrap_or_default();
        let c2 = c.rho_c2.map(fmt).unwrap_or_default();
        let _ = writeln!(body, "{},{},{}", fmt(c.temperature), c1, c2);
    }
    let p = out.write("transition_curves.csv", &body)?;
    println!("wrote {}", p.display());
    Ok(())
}

fn write_levels(out: &OutputDir, d: &PhaseDiagram) -> Result<()> {
    let mut body = String::from("level,rho_a,T_a,rho_b,T_b\n");
    for ls in &d.level_sets {
        for &((ra, ta), (rb, tb)) in &ls.segments {
            let _ = writeln!(
                body,
                "{},{},{},{},{}",
                fmt(ls.level),
                fmt(ra),
                fmt(ta),
                fmt(rb),
                fmt(tb)
            );
        }
    }
    let p = out.write("level_sets.csv", &body)?;
    println!("wrote {}", p.display());
    Ok(())
}
