//! Spin problem assembled from no-spin solves: per-point polarization
//! optimization, (ρ, T) sweeps with transition curves and a Curie
//! temperature estimate, and μ(ρ) scans.
//!
//! The free energy at polarization t is
//! `E(tρ, T) + E((1−t)ρ, T)`; each term is a fixed-density solve on the
//! energetically best branch (minimal, maximal, or — across folds where
//! both extremal branches skip the target density — the middle branch).

use crate::kernels::RieszPotential;
use crate::search::golden_section;
use crate::solver::{
    middle_on_engine, Branch, Engine, FixedPointResult, MiddleOutcome, SolverConfig,
};
use crate::zero_temperature::mu_t0;
use crate::{grid::GridSpec, grid::RadialGrid, Error, Result};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

/// Tolerance below 1/2 within which a point counts as paramagnetic.
const T_OPT_PARA_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Paramagnetic,
    Ferromagnetic,
    /// two polarizations tie at the energy resolution (first-order point)
    Coexistence,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Paramagnetic => "paramagnetic",
            Classification::Ferromagnetic => "ferromagnetic",
            Classification::Coexistence => "coexistence",
        }
    }
}

/// Per-point diagnostics: the two converged sub-solves at the optimum and
/// any polarization values whose sub-solves failed.
#[derive(Debug, Clone, Default)]
pub struct PointDiagnostics {
    /// minority channel (density t_opt·ρ)
    pub up: Option<FixedPointResult>,
    /// majority channel (density (1−t_opt)·ρ)
    pub down: Option<FixedPointResult>,
    pub failed_t: Vec<(f64, String)>,
    /// total fixed-density solves spent on this point
    pub subsolves: usize,
    /// a middle-branch solution was needed somewhere on this point
    pub middle_used: bool,
}

/// One (ρ, T) entry of the phase diagram.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub rho: f64,
    pub temperature: f64,
    /// optimal polarization in [0, 1/2]
    pub t_opt: f64,
    pub energy_opt: f64,
    /// energy of the paramagnetic candidate t = 1/2
    pub energy_para: f64,
    pub classification: Classification,
    pub diagnostics: PointDiagnostics,
}

/// Caches fixed-density energies for one (ρ, T) cell while the polarization
/// search probes sub-densities.
struct CellSolver<'a> {
    pot: &'a RieszPotential,
    temperature: f64,
    cfg: &'a SolverConfig,
    cache: Vec<(f64, Result<(f64, FixedPointResult)>)>,
    subsolves: usize,
    middle_used: bool,
}

impl<'a> CellSolver<'a> {
    fn new(pot: &'a RieszPotential, temperature: f64, cfg: &'a SolverConfig) -> Self {
        CellSolver {
            pot,
            temperature,
            cfg,
            cache: Vec::new(),
            subsolves: 0,
            middle_used: false,
        }
    }

    /// E_no-spin(ρ', T) with branch selection by free energy; ρ' = 0 is 0.
    fn energy_at(&mut self, rho_sub: f64) -> Result<(f64, Option<FixedPointResult>)> {
        if rho_sub == 0.0 {
            return Ok((0.0, None));
        }
        if let Some((_, res)) = self.cache.iter().find(|(r, _)| *r == rho_sub) {
            return res.clone().map(|(e, fp)| (e, Some(fp)));
        }
        let res = self.solve_best(rho_sub);
        self.cache.push((rho_sub, res.clone()));
        res.map(|(e, fp)| (e, Some(fp)))
    }

    fn solve_best(&mut self, rho_sub: f64) -> Result<(f64, FixedPointResult)> {
        let mut best: Option<FixedPointResult> = None;
        let mut first_err: Option<Error> = None;
        for branch in [Branch::Minimal, Branch::Maximal] {
            self.subsolves += 1;
            match crate::solver::solve_at_density(self.pot, rho_sub, self.temperature, branch, self.cfg)
            {
                Ok(r) => {
                    if best
                        .as_ref()
                        .map(|b| r.free_energy < b.free_energy)
                        .unwrap_or(true)
                    {
                        best = Some(r);
                    }
                }
                Err(e) => first_err = first_err.or(Some(e)),
            }
        }
        if let Some(b) = best {
            return Ok((b.free_energy, b));
        }
        // both extremal branches skip ρ': the state lives on the middle branch
        self.middle_used = true;
        self.subsolves += 1;
        match middle_at_density(self.pot, rho_sub, self.temperature, self.cfg) {
            Ok(r) => Ok((r.free_energy, r)),
            Err(e) => Err(first_err.unwrap_or(e)),
        }
    }
}

/// Minimizes `t ↦ E(tρ) + E((1−t)ρ)` over [0, 1/2]: coarse 26-point scan,
/// golden-section refinement of the local-minimum brackets to |Δt| ≤ 1e-4.
pub fn spin_energy(
    pot: &RieszPotential,
    rho: f64,
    temperature: f64,
    cfg: &SolverConfig,
) -> Result<PhasePoint> {
    if !(rho > 0.0) || !(temperature > 0.0) {
        return Err(Error::InvalidArgument(
            "spin_energy needs positive density and temperature".to_string(),
        ));
    }
    let mut cell = CellSolver::new(pot, temperature, cfg);
    let mut failed: Vec<(f64, String)> = Vec::new();

    const COARSE: usize = 26;
    let mut ts = [0.0f64; COARSE];
    let mut es = [f64::INFINITY; COARSE];
    for i in 0..COARSE {
        let t = 0.5 * i as f64 / (COARSE - 1) as f64;
        ts[i] = t;
        let up = cell.energy_at(t * rho);
        let dn = cell.energy_at((1.0 - t) * rho);
        match (up, dn) {
            (Ok((eu, _)), Ok((ed, _))) => es[i] = eu + ed,
            (u, d) => {
                let msg = u.err().or(d.err()).map(|e| alloc::format!("{e}")).unwrap_or_default();
                failed.push((t, msg));
            }
        }
    }
    if es.iter().all(|e| !e.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "all polarization sub-solves failed at rho={rho:.3e}, T={temperature:.3e}"
        )));
    }
    let energy_para = es[COARSE - 1];

    // refine every finite local minimum bracket
    let mut minima: Vec<usize> = (0..COARSE)
        .filter(|&i| {
            es[i].is_finite()
                && (i == 0 || es[i] <= es[i - 1])
                && (i == COARSE - 1 || es[i] <= es[i + 1])
        })
        .collect();
    minima.sort_by(|&a, &b| es[a].total_cmp(&es[b]));
    minima.truncate(3);
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for &i in &minima {
        let a = if i == 0 { 0.0 } else { ts[i - 1] };
        let b = if i == COARSE - 1 { 0.5 } else { ts[i + 1] };
        let mut eval = |t: f64| -> f64 {
            let up = cell.energy_at(t * rho);
            let dn = cell.energy_at((1.0 - t) * rho);
            match (up, dn) {
                (Ok((eu, _)), Ok((ed, _))) => eu + ed,
                _ => f64::INFINITY,
            }
        };
        let (t_min, e_min) = golden_section(&mut eval, a, b, 1e-4);
        if e_min.is_finite() {
            refined.push((t_min, e_min));
        }
    }
    if refined.is_empty() {
        // golden refinement hit failing sub-solves everywhere: fall back to
        // the best coarse point
        let i = minima[0];
        refined.push((ts[i], es[i]));
    }
    refined.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (mut t_opt, energy_opt) = refined[0];

    // paramagnetic snap: within tolerance of 1/2 report the symmetric point
    if (t_opt - 0.5).abs() <= T_OPT_PARA_TOL {
        t_opt = 0.5;
    }
    let classification = if (t_opt - 0.5).abs() <= T_OPT_PARA_TOL {
        Classification::Paramagnetic
    } else if refined.len() > 1 && {
        let scale = energy_opt.abs().max(1e-300);
        (refined[1].1 - energy_opt).abs() <= 1e-12 * scale
            && (refined[1].0 - t_opt).abs() > 10.0 * T_OPT_PARA_TOL
    } {
        Classification::Coexistence
    } else {
        Classification::Ferromagnetic
    };

    // final sub-solves at the optimum for the diagnostics record
    let up = if t_opt > 0.0 {
        cell.energy_at(t_opt * rho).ok().and_then(|(_, fp)| fp)
    } else {
        None
    };
    let down = cell.energy_at((1.0 - t_opt) * rho).ok().and_then(|(_, fp)| fp);
    let subsolves = cell.subsolves;
    let middle_used = cell.middle_used;
    Ok(PhasePoint {
        rho,
        temperature,
        t_opt,
        energy_opt,
        energy_para,
        classification,
        diagnostics: PointDiagnostics {
            up,
            down,
            failed_t: failed,
            subsolves,
            middle_used,
        },
    })
}

/// Fixed-density solve on the middle branch, for densities the extremal
/// branches jump over: locates the non-uniqueness window in μ, then runs a
/// guarded secant on the (decreasing) middle-branch density.
pub fn middle_at_density(
    pot: &RieszPotential,
    rho: f64,
    temperature: f64,
    cfg: &SolverConfig,
) -> Result<FixedPointResult> {
    let ctf = crate::kernels::thomas_fermi_constant(3)?;
    let kf = ctf.sqrt() * rho.powf(1.0 / 3.0);
    let spec = GridSpec::for_thermal_band(cfg.n_nodes, temperature, 0.2 * kf, 1.6 * kf);
    let grid = Arc::new(RadialGrid::build(&spec)?);
    let mut engine = Engine::new(pot, grid, temperature, cfg)?;

    // the window must contain μ(ρ,0); expand around it until the extremal
    // densities straddle the target from both sides
    let mu0 = mu_t0(pot, rho)?;
    let half_width0 = (0.05 * mu0.abs()).max(4.0 * temperature);
    let mut window = None;
    let mut half_width = half_width0;
    for _ in 0..12 {
        let lo = mu0 - half_width;
        let hi = mu0 + half_width;
        let dmin_hi = engine.solve_extremal(hi, Branch::Minimal)?.density;
        let dmax_lo = engine.solve_extremal(lo, Branch::Maximal)?.density;
        if dmin_hi > rho && dmax_lo < rho {
            window = Some((lo, hi));
            break;
        }
        half_width *= 1.8;
    }
    let (mut lo, mut hi) = window.ok_or(Error::BracketFailure {
        target: rho,
        table: Vec::new(),
    })?;

    // middle-branch density at μ (None when the branches coincide there)
    let mut table: Vec<(f64, f64)> = Vec::new();
    let mid_at = |engine: &mut Engine, mu: f64| -> Result<Option<FixedPointResult>> {
        let gmin = engine.solve_extremal(mu, Branch::Minimal)?;
        let gmax = engine.solve_extremal(mu, Branch::Maximal)?;
        let gap = gmin
            .occupation
            .values
            .iter()
            .zip(&gmax.occupation.values)
            .map(|(a, b)| (b - a).abs())
            .fold(0.0, f64::max);
        if gap <= 10.0 * engine.cfg.tol {
            return Ok(None);
        }
        match middle_on_engine(engine, mu, &gmin, &gmax)? {
            MiddleOutcome::Found { result, .. } => Ok(Some(result)),
            MiddleOutcome::NoMiddle => Ok(None),
        }
    };

    // bisect on the decreasing map μ ↦ ρ_mid(μ)
    let mut best: Option<FixedPointResult> = None;
    for _ in 0..60 {
        let mu = 0.5 * (lo + hi);
        let r = mid_at(&mut engine, mu)?;
        match r {
            Some(fp) => {
                table.push((mu, fp.density));
                let err = (fp.density - rho).abs() / rho;
                if best
                    .as_ref()
                    .map(|b| (fp.density - rho).abs() < (b.density - rho).abs())
                    .unwrap_or(true)
                {
                    best = Some(fp.clone());
                }
                if err <= cfg.rootfind_rel_tol {
                    return Ok(fp);
                }
                if fp.density > rho {
                    lo = mu;
                } else {
                    hi = mu;
                }
            }
            None => {
                // fell out of the non-uniqueness window; shrink toward μ(ρ,0)
                if mu > mu0 {
                    hi = mu;
                } else {
                    lo = mu;
                }
            }
        }
        if (hi - lo).abs() < 1e-15 * hi.abs().max(1e-3) {
            break;
        }
    }
    best.filter(|b| (b.density - rho).abs() <= 1e-4 * rho)
        .ok_or(Error::BracketFailure { target: rho, table })
}

/// Necessary first-order optimality audit for a partially polarized point:
/// the two channels must share the chemical potential.
pub fn matched_mu_check(point: &PhasePoint) -> bool {
    if (point.t_opt - 0.5).abs() <= T_OPT_PARA_TOL {
        return true; // same sub-problem twice
    }
    match (&point.diagnostics.up, &point.diagnostics.down) {
        (Some(up), Some(down)) => {
            let scale = up.mu.abs().max(down.mu.abs()).max(1e-300);
            (up.mu - down.mu).abs() <= 1e-3 * scale
        }
        _ => false,
    }
}

// ───────────────────────── sweeps ─────────────────────────

#[derive(Debug, Clone)]
pub enum CellOutcome {
    Point(PhasePoint),
    Failed { rho: f64, temperature: f64, error: String },
}

impl CellOutcome {
    pub fn point(&self) -> Option<&PhasePoint> {
        match self {
            CellOutcome::Point(p) => Some(p),
            CellOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurieEstimate {
    pub t_c: f64,
    pub bracket: (f64, f64),
    /// true when the whole grid top row was still ferromagnetic
    pub open_above: bool,
}

/// Per-row transition densities ρ_{c,1}(T) < ρ_{c,2}(T) (midpoints of the
/// bracketing cells), when the row shows a ferromagnetic stretch.
#[derive(Debug, Clone)]
pub struct TransitionCurvePoint {
    pub temperature: f64,
    pub rho_c1: Option<f64>,
    pub rho_c2: Option<f64>,
}

/// A polyline level set of t_opt over the (ρ, T) grid.
#[derive(Debug, Clone)]
pub struct LevelSet {
    pub level: f64,
    /// line segments ((ρ, T), (ρ, T))
    pub segments: Vec<((f64, f64), (f64, f64))>,
}

#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub rho_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// row-major: index = i_rho * t_grid.len() + i_t
    pub points: Vec<CellOutcome>,
    pub curie: Option<CurieEstimate>,
    pub transition_curves: Vec<TransitionCurvePoint>,
    pub level_sets: Vec<LevelSet>,
    pub failed_cells: usize,
}

impl PhaseDiagram {
    pub fn t_opt_at(&self, i_rho: usize, i_t: usize) -> Option<f64> {
        self.points[i_rho * self.t_grid.len() + i_t]
            .point()
            .map(|p| p.t_opt)
    }
}

/// Batch evaluator: maps (ρ, T) jobs to phase points, preserving order.
/// The sequential default is [`sweep`]; a parallel caller passes its own.
pub type CellEval<'e> = dyn Fn(&[(f64, f64)]) -> Vec<Result<PhasePoint>> + 'e;

/// Sequential sweep.
pub fn sweep(
    pot: &RieszPotential,
    rho_grid: &[f64],
    t_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<PhaseDiagram> {
    let eval = |jobs: &[(f64, f64)]| -> Vec<Result<PhasePoint>> {
        jobs.iter()
            .map(|&(r, t)| spin_energy(pot, r, t, cfg))
            .collect()
    };
    sweep_with(pot, rho_grid, t_grid, cfg, &eval)
}

/// Sweep with a caller-supplied batch evaluator (e.g. a worker pool).
/// Results are reduced in grid order whatever the evaluator's scheduling.
pub fn sweep_with(
    _pot: &RieszPotential,
    rho_grid: &[f64],
    t_grid: &[f64],
    _cfg: &SolverConfig,
    eval: &CellEval<'_>,
) -> Result<PhaseDiagram> {
    if rho_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".to_string()));
    }
    if rho_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "sweep grids must be strictly increasing".to_string(),
        ));
    }
    let jobs: Vec<(f64, f64)> = rho_grid
        .iter()
        .flat_map(|&r| t_grid.iter().map(move |&t| (r, t)))
        .collect();
    let results = eval(&jobs);
    if results.len() != jobs.len() {
        return Err(Error::InvalidArgument(
            "cell evaluator returned a wrong-sized batch".to_string(),
        ));
    }
    let mut failed = 0usize;
    let points: Vec<CellOutcome> = jobs
        .iter()
        .zip(results)
        .map(|(&(r, t), res)| match res {
            Ok(p) => CellOutcome::Point(p),
            Err(e) => {
                failed += 1;
                CellOutcome::Failed {
                    rho: r,
                    temperature: t,
                    error: alloc::format!("{e}"),
                }
            }
        })
        .collect();

    let mut diagram = PhaseDiagram {
        rho_grid: rho_grid.to_vec(),
        t_grid: t_grid.to_vec(),
        points,
        curie: None,
        transition_curves: Vec::new(),
        level_sets: Vec::new(),
        failed_cells: failed,
    };
    diagram.transition_curves = transition_curves(&diagram);
    diagram.level_sets = [0.1, 0.2, 0.3, 0.4, 0.45, 0.49]
        .iter()
        .map(|&lv| marching_squares(&diagram, lv))
        .collect();
    diagram.curie = estimate_curie(&diagram, eval);
    Ok(diagram)
}

fn is_ferro(t_opt: f64) -> bool {
    t_opt < 0.5 - 0.01
}

fn transition_curves(d: &PhaseDiagram) -> Vec<TransitionCurvePoint> {
    let nt = d.t_grid.len();
    let mut out = Vec::with_capacity(nt);
    for j in 0..nt {
        let row: Vec<Option<f64>> = (0..d.rho_grid.len()).map(|i| d.t_opt_at(i, j)).collect();
        let ferro_idx: Vec<usize> = row
            .iter()
            .enumerate()
            .filter(|(_, t)| t.map(is_ferro).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        if ferro_idx.is_empty() {
            out.push(TransitionCurvePoint {
                temperature: d.t_grid[j],
                rho_c1: None,
                rho_c2: None,
            });
            continue;
        }
        let first = *ferro_idx.first().unwrap();
        let last = *ferro_idx.last().unwrap();
        let rho_c1 = (first > 0).then(|| 0.5 * (d.rho_grid[first - 1] + d.rho_grid[first]));
        let rho_c2 = (last + 1 < d.rho_grid.len())
            .then(|| 0.5 * (d.rho_grid[last] + d.rho_grid[last + 1]));
        out.push(TransitionCurvePoint {
            temperature: d.t_grid[j],
            rho_c1,
            rho_c2,
        });
    }
    out
}

/// Curie temperature: the largest T with any ferromagnetic cell, refined by
/// bisection in T of "exists ρ with t_opt < 1/2 − 0.01", ρ scanned at 40
/// points across the grid range.
fn estimate_curie(d: &PhaseDiagram, eval: &CellEval<'_>) -> Option<CurieEstimate> {
    let nt = d.t_grid.len();
    let ferro_row = |j: usize| -> bool {
        (0..d.rho_grid.len()).any(|i| d.t_opt_at(i, j).map(is_ferro).unwrap_or(false))
    };
    let mut last_ferro: Option<usize> = None;
    for j in 0..nt {
        if ferro_row(j) {
            last_ferro = Some(j);
        }
    }
    let j = last_ferro?;
    if j + 1 >= nt {
        return Some(CurieEstimate {
            t_c: d.t_grid[nt - 1],
            bracket: (d.t_grid[nt - 1], f64::INFINITY),
            open_above: true,
        });
    }
    let (mut lo, mut hi) = (d.t_grid[j], d.t_grid[j + 1]);
    let rho_lo = d.rho_grid[0];
    let rho_hi = *d.rho_grid.last().unwrap();
    let scan: Vec<f64> = (0..40)
        .map(|i| rho_lo + (rho_hi - rho_lo) * i as f64 / 39.0)
        .collect();
    for _ in 0..7 {
        let mid = 0.5 * (lo + hi);
        let jobs: Vec<(f64, f64)> = scan.iter().map(|&r| (r, mid)).collect();
        let any_ferro = eval(&jobs)
            .into_iter()
            .any(|r| r.map(|p| is_ferro(p.t_opt)).unwrap_or(false));
        if any_ferro {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(CurieEstimate {
        t_c: 0.5 * (lo + hi),
        bracket: (lo, hi),
        open_above: false,
    })
}

fn marching_squares(d: &PhaseDiagram, level: f64) -> LevelSet {
    let nr = d.rho_grid.len();
    let nt = d.t_grid.len();
    let mut segments = Vec::new();
    let val = |i: usize, j: usize| d.t_opt_at(i, j);
    for i in 0..nr.saturating_sub(1) {
        for j in 0..nt.saturating_sub(1) {
            let corners = [
                (i, j),
                (i + 1, j),
                (i + 1, j + 1),
                (i, j + 1),
            ];
            let vals: Vec<Option<f64>> = corners.iter().map(|&(a, b)| val(a, b)).collect();
            if vals.iter().any(|v| v.is_none()) {
                continue;
            }
            let v: Vec<f64> = vals.into_iter().map(|x| x.unwrap()).collect();
            let pos: Vec<(f64, f64)> = corners
                .iter()
                .map(|&(a, b)| (d.rho_grid[a], d.t_grid[b]))
                .collect();
            // interpolate crossings on each edge
            let mut cuts: Vec<(f64, f64)> = Vec::new();
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                let (va, vb) = (v[a], v[b]);
                if (va - level) * (vb - level) < 0.0 {
                    let f = (level - va) / (vb - va);
                    cuts.push((
                        pos[a].0 + f * (pos[b].0 - pos[a].0),
                        pos[a].1 + f * (pos[b].1 - pos[a].1),
                    ));
                }
            }
            if cuts.len() == 2 {
                segments.push((cuts[0], cuts[1]));
            } else if cuts.len() == 4 {
                // saddle: split by the cell average
                let avg = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                if (avg > level) == (v[0] > level) {
                    segments.push((cuts[0], cuts[1]));
                    segments.push((cuts[2], cuts[3]));
                } else {
                    segments.push((cuts[0], cuts[3]));
                    segments.push((cuts[1], cuts[2]));
                }
            }
        }
    }
    LevelSet { level, segments }
}

// ───────────────────────── μ(ρ) curves ─────────────────────────

#[derive(Debug, Clone)]
pub struct MuCurvePoint {
    pub mu: f64,
    pub rho: f64,
    pub branch: Branch,
}

/// Multivalued ρ ↔ μ relation at temperature T over a density window:
/// scans μ, records the minimal/maximal-branch densities, and middle-branch
/// points wherever the extremal branches differ. T = 0 uses the closed form.
pub fn mu_curve(
    pot: &RieszPotential,
    temperature: f64,
    rho_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<MuCurvePoint>> {
    if rho_grid.len() < 2 || rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "mu_curve needs a strictly increasing density grid".to_string(),
        ));
    }
    if temperature == 0.0 {
        return rho_grid
            .iter()
            .map(|&r| {
                Ok(MuCurvePoint {
                    mu: mu_t0(pot, r)?,
                    rho: r,
                    branch: Branch::Minimal,
                })
            })
            .collect();
    }
    let rho_lo = rho_grid[0];
    let rho_hi = *rho_grid.last().unwrap();
    let ctf = crate::kernels::thomas_fermi_constant(3)?;
    let kf_hi = ctf.sqrt() * rho_hi.powf(1.0 / 3.0);
    let spec = GridSpec::for_thermal_band(cfg.n_nodes, temperature, 0.2 * kf_hi, 1.3 * kf_hi);
    let grid = Arc::new(RadialGrid::build(&spec)?);
    let mut engine = Engine::new(pot, grid, temperature, cfg)?;

    // μ window: everything whose extremal densities can fall in the grid
    let mu_lo = crate::solver::free_fermi_mu(temperature, rho_lo)
        - crate::solver::exchange_bound(pot, rho_hi)?
        - 2.0 * temperature;
    let mu_hi = crate::solver::free_fermi_mu(temperature, rho_hi) + 2.0 * temperature;
    let n_mu = 161usize;
    let mus: Vec<f64> = (0..n_mu)
        .map(|i| mu_lo + (mu_hi - mu_lo) * i as f64 / (n_mu - 1) as f64)
        .collect();

    // ascending scan warms the minimal branch, descending the maximal
    let mut out: Vec<MuCurvePoint> = Vec::new();
    let mut mins = Vec::with_capacity(n_mu);
    for &mu in &mus {
        mins.push(engine.solve_extremal(mu, Branch::Minimal)?);
    }
    let mut maxs = Vec::with_capacity(n_mu);
    for &mu in mus.iter().rev() {
        maxs.push(engine.solve_extremal(mu, Branch::Maximal)?);
    }
    maxs.reverse();
    for i in 0..n_mu {
        let mu = mus[i];
        let dmin = mins[i].density;
        let dmax = maxs[i].density;
        out.push(MuCurvePoint {
            mu,
            rho: dmin,
            branch: Branch::Minimal,
        });
        if (dmax - dmin).abs() > 1e-6 * dmax.abs().max(1e-300) {
            out.push(MuCurvePoint {
                mu,
                rho: dmax,
                branch: Branch::Maximal,
            });
            if let MiddleOutcome::Found { result, .. } =
                middle_on_engine(&engine, mu, &mins[i], &maxs[i])?
            {
                out.push(MuCurvePoint {
                    mu,
                    rho: result.density,
                    branch: Branch::Middle,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_rejects_bad_grids() {
        let pot = RieszPotential::coulomb_3d();
        let cfg = SolverConfig::default();
        assert!(sweep(&pot, &[], &[0.01], &cfg).is_err());
        assert!(sweep(&pot, &[1e-3, 1e-3], &[0.01], &cfg).is_err());
    }

    #[test]
    fn spin_energy_validates() {
        let pot = RieszPotential::coulomb_3d();
        let cfg = SolverConfig::default();
        assert!(spin_energy(&pot, -1.0, 0.01, &cfg).is_err());
        assert!(spin_energy(&pot, 1e-3, 0.0, &cfg).is_err());
    }
}
