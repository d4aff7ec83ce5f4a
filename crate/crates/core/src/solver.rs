//! Positive-temperature self-consistent solver for the no-spin problem in
//! d = 3.
//!
//! The Euler-Lagrange equation at fixed chemical potential μ is the fixed
//! point problem `g = G_{μ,T}(g)` with
//! `G_{μ,T}(g)(k) = 1/(1 + e^{β(k²/2 − μ − (w∗g)(k))})`. The map is
//! order-preserving, so iterating from the constant 0 (resp. 1) state gives
//! a pointwise increasing (resp. decreasing) sequence converging to the
//! minimal (resp. maximal) solution; every other fixed point is sandwiched
//! between them. Middle (unstable) fixed points are located with a string
//! method and polished by Newton iteration.
//!
//! Discretization: radial Gauss-Legendre panels ([`crate::grid`]) and a
//! dense kernel matrix `W` with `(w∗g)(kᵢ) ≈ Σⱼ Wᵢⱼ gⱼ`. Off-diagonal
//! entries are plain quadrature weights times the reduced angular kernel;
//! the diagonal is calibrated so every row sum equals the exact integral
//! `∫₀^{k_max} K(kᵢ,k') k'² dk'`, which subtracts the logarithmic diagonal
//! singularity of Coulomb-type kernels exactly for constant g. All entries
//! stay positive, so the discrete map is order-preserving too and monotone
//! iteration carries over to the grid.

use crate::grid::{GridSpec, RadialGrid};
use crate::kernels::{
    angular_kernel_3d, energy_coefficients, kernel_moment_3d, surface_area,
    thomas_fermi_constant, RieszPotential,
};
use crate::linalg::solve_dense;
use crate::search::guarded_secant;
use crate::zero_temperature::mu_from_constants;
use crate::{quad, Error, Result};
use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write as _;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

const MONOTONE_SLACK: f64 = 1e-12;
const G_FLOOR: f64 = 1e-300;
const G_CEIL: f64 = 1.0 - 1e-16;

/// Which fixed point a result represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minimal,
    Maximal,
    Middle,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Minimal => "minimal",
            Branch::Maximal => "maximal",
            Branch::Middle => "middle",
        }
    }
}

/// Grid, tolerance, damping and iteration-limit parameters.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// radial node budget
    pub n_nodes: usize,
    /// sup-norm fixed-point tolerance on g
    pub tol: f64,
    /// iteration cap for the monotone iteration
    pub max_iter: usize,
    /// damping θ ∈ (0,1]: safeguard scale for the Newton polish
    pub damping: f64,
    /// string bead count
    pub beads: usize,
    /// re-parametrization cadence (every n-th string iteration)
    pub reparam_every: usize,
    /// string iteration cap
    pub string_max_iter: usize,
    /// path-movement tolerance declaring the string converged
    pub string_tol: f64,
    /// relative density tolerance of the μ root-find
    pub rootfind_rel_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_nodes: 512,
            tol: 1e-10,
            max_iter: 200_000,
            damping: 0.5,
            beads: 32,
            reparam_every: 1,
            string_max_iter: 2000,
            string_tol: 1e-8,
            rootfind_rel_tol: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".to_string()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidArgument("damping must lie in (0, 1]".to_string()));
        }
        if self.beads < 8 {
            return Err(Error::InvalidArgument("need at least 8 string beads".to_string()));
        }
        if self.reparam_every == 0 {
            return Err(Error::InvalidArgument(
                "re-parametrization cadence must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// A sampled occupation g(kᵢ) ∈ [0,1] on a radial grid.
#[derive(Debug, Clone)]
pub struct Occupation {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
}

impl Occupation {
    pub fn constant(grid: Arc<RadialGrid>, value: f64) -> Self {
        let n = grid.len();
        Occupation {
            grid,
            values: alloc::vec![value; n],
        }
    }

    /// `ρ = (2π)^{-3} · 4π ∫ g k² dk`.
    pub fn density(&self) -> f64 {
        self.grid.integrate(&self.values) / (2.0 * PI * PI)
    }

    /// Largest increase `g(k_{i+1}) − g(kᵢ)` over the grid (a converged
    /// occupation must be radially decreasing, so this should not exceed
    /// the slack).
    pub fn radial_increase(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A converged fixed point with its thermodynamics and convergence metadata.
#[derive(Debug, Clone)]
pub struct FixedPointResult {
    pub occupation: Occupation,
    /// V = w ∗ g on the grid
    pub potential: Vec<f64>,
    pub mu: f64,
    pub temperature: f64,
    pub density: f64,
    pub free_energy: f64,
    pub branch: Branch,
    pub iterations: usize,
    /// sup-norm of g − G_{μ,T}(g)
    pub residual: f64,
}

impl FixedPointResult {
    /// Plain-text state record: one node per line (k, g, V) under a header
    /// carrying μ, T, ρ, branch and residual.
    pub fn dump_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# mu={:.16e} T={:.16e} rho={:.16e} branch={} residual={:.16e} iterations={}",
            self.mu,
            self.temperature,
            self.density,
            self.branch.as_str(),
            self.residual,
            self.iterations
        );
        let _ = writeln!(s, "# k g V");
        for ((k, g), v) in self
            .occupation
            .grid
            .nodes()
            .iter()
            .zip(&self.occupation.values)
            .zip(&self.potential)
        {
            let _ = writeln!(s, "{k:.16e} {g:.16e} {v:.16e}");
        }
        s
    }
}

/// Cached discretization of `g ↦ w ∗ g` on a fixed grid: a dense positive
/// matrix with exactly calibrated row sums. Immutable once built; safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    grid: Arc<RadialGrid>,
    matrix: Vec<f64>,
    n: usize,
}

impl KernelOperator {
    pub fn new(pot: &RieszPotential, grid: Arc<RadialGrid>) -> Result<Self> {
        if pot.dim() != 3 {
            return Err(Error::InvalidArgument(
                "the positive-temperature solver is specific to d = 3".to_string(),
            ));
        }
        if let Some(t) = pot.terms().iter().find(|t| t.s >= 2.0) {
            return Err(Error::ExponentOutOfRange {
                s: t.s,
                lo: 0.0,
                hi: 2.0,
            });
        }
        let n = grid.len();
        let nodes = grid.nodes();
        let bare = grid.bare_weights();
        let mut matrix = alloc::vec![0.0; n * n];
        for i in 0..n {
            let ki = nodes[i];
            let mut off_sum = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let kj = nodes[j];
                let mut kern = 0.0;
                for t in pot.terms() {
                    kern += angular_kernel_3d(t.kappa, t.s, ki, kj);
                }
                let a = kern * bare[j] * kj * kj;
                matrix[i * n + j] = a;
                off_sum += a;
            }
            let exact = kernel_moment_3d(pot, ki, 0.0, grid.k_max());
            let diag = exact - off_sum;
            if diag <= 0.0 {
                return Err(Error::InvalidArgument(alloc::format!(
                    "kernel row {i} lost positivity (diagonal {diag:.3e}); grid too coarse for this potential"
                )));
            }
            matrix[i * n + i] = diag;
        }
        Ok(KernelOperator { grid, matrix, n })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// V = W g.
    pub fn apply(&self, g: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.matrix[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(g) {
                acc += a * b;
            }
            out[i] = acc;
        }
    }
}

/// Overflow-safe Fermi factor `1/(1+e^{βh})`, clamped to (0, 1).
#[inline]
pub(crate) fn fermi_factor(beta: f64, h: f64) -> f64 {
    let x = beta * h;
    let g = if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    };
    g.clamp(G_FLOOR, G_CEIL)
}

/// Fermi-Dirac entropy with the endpoint limit S(0) = S(1) = 0.
#[inline]
fn entropy(g: f64) -> f64 {
    let gm = 1.0 - g;
    let a = if g > 0.0 { -g * g.ln() } else { 0.0 };
    let b = if gm > 0.0 { -gm * gm.ln() } else { 0.0 };
    a + b
}

/// Solve engine bound to one (potential, grid, temperature) triple, carrying
/// the kernel matrix and warm-start caches for the two extremal branches.
pub(crate) struct Engine {
    pub op: KernelOperator,
    pub pot: RieszPotential,
    pub t: f64,
    pub beta: f64,
    pub cfg: SolverConfig,
    warm_min: Vec<(f64, Vec<f64>)>,
    warm_max: Vec<(f64, Vec<f64>)>,
    /// when true, skip warm starts (pure cold-start iteration)
    pub cold_only: bool,
}

impl Engine {
    pub fn new(pot: &RieszPotential, grid: Arc<RadialGrid>, t: f64, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(
                "temperature must be positive for the self-consistent solver".to_string(),
            ));
        }
        let op = KernelOperator::new(pot, grid)?;
        Ok(Engine {
            op,
            pot: pot.clone(),
            t,
            beta: 1.0 / t,
            cfg: cfg.clone(),
            warm_min: Vec::new(),
            warm_max: Vec::new(),
            cold_only: false,
        })
    }

    fn warm_start(&self, mu: f64, branch: Branch) -> Option<Vec<f64>> {
        if self.cold_only {
            return None;
        }
        match branch {
            Branch::Minimal => self
                .warm_min
                .iter()
                .filter(|(m, _)| *m <= mu)
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, g)| g.clone()),
            Branch::Maximal => self
                .warm_max
                .iter()
                .filter(|(m, _)| *m >= mu)
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, g)| g.clone()),
            Branch::Middle => None,
        }
    }

    fn cache_insert(&mut self, mu: f64, branch: Branch, g: &[f64]) {
        let cache = match branch {
            Branch::Minimal => &mut self.warm_min,
            Branch::Maximal => &mut self.warm_max,
            Branch::Middle => return,
        };
        cache.push((mu, g.to_vec()));
        if cache.len() > 192 {
            // thin out, keeping every other entry
            let mut i = 0;
            cache.retain(|_| {
                i += 1;
                i % 2 == 0
            });
        }
    }

    /// One application of G_{μ,T}.
    pub fn apply_map(&self, mu: f64, g: &[f64], v_buf: &mut [f64], out: &mut [f64]) {
        self.op.apply(g, v_buf);
        let nodes = self.op.grid().nodes();
        for i in 0..g.len() {
            out[i] = fermi_factor(self.beta, 0.5 * nodes[i] * nodes[i] - mu - v_buf[i]);
        }
    }

    /// Monotone iteration to the minimal/maximal fixed point at fixed μ.
    /// Warm starts reuse a converged solution from the correct side in μ,
    /// which keeps the iteration monotone; the monotone direction is
    /// asserted every iteration.
    pub fn solve_extremal(&mut self, mu: f64, branch: Branch) -> Result<FixedPointResult> {
        let n = self.op.len();
        let (start, dir) = match branch {
            Branch::Minimal => (0.0, 1.0),
            Branch::Maximal => (1.0, -1.0),
            Branch::Middle => {
                return Err(Error::InvalidArgument(
                    "extremal solve takes the minimal or maximal branch".to_string(),
                ))
            }
        };
        let mut g = self
            .warm_start(mu, branch)
            .unwrap_or_else(|| alloc::vec![start; n]);
        let mut gn = alloc::vec![0.0; n];
        let mut v = alloc::vec![0.0; n];
        let mut history: VecDeque<f64> = VecDeque::with_capacity(16);
        let mut iterations = 0usize;
        let mut best_step = f64::INFINITY;
        let mut since_best = 0usize;
        loop {
            self.apply_map(mu, &g, &mut v, &mut gn);
            let mut worst = 0.0f64;
            let mut step = 0.0f64;
            for i in 0..n {
                let d = gn[i] - g[i];
                step = step.max(d.abs());
                worst = worst.max(-dir * d);
            }
            if worst > MONOTONE_SLACK {
                return Err(Error::MonotonicityViolation {
                    iteration: iterations,
                    worst,
                });
            }
            core::mem::swap(&mut g, &mut gn);
            iterations += 1;
            if history.len() == 16 {
                history.pop_front();
            }
            history.push_back(step);
            if step <= 0.5 * self.cfg.tol {
                break;
            }
            // rounding-noise limit cycle: the step meets the tolerance but
            // stopped shrinking; hand the decision to the final residual
            if step < 0.99 * best_step {
                best_step = step;
                since_best = 0;
            } else {
                since_best += 1;
                if step <= self.cfg.tol && since_best > 1500 {
                    break;
                }
            }
            if iterations >= self.cfg.max_iter {
                return Err(Error::MaxIterationsExceeded {
                    iterations,
                    residual: step,
                    history: history.into_iter().collect(),
                });
            }
        }
        // final residual of the returned iterate
        self.apply_map(mu, &g, &mut v, &mut gn);
        let residual = g
            .iter()
            .zip(&gn)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual > self.cfg.tol {
            return Err(Error::MaxIterationsExceeded {
                iterations,
                residual,
                history: history.into_iter().collect(),
            });
        }
        self.cache_insert(mu, branch, &g);
        Ok(self.package(mu, g, v, branch, iterations, residual))
    }

    /// Plain (non-monotone) Picard iteration from an arbitrary start; no
    /// branch semantics. Used by uniqueness experiments and the string path.
    pub fn iterate_plain(
        &self,
        mu: f64,
        g0: &[f64],
        max_iter: usize,
        tol: f64,
    ) -> (Vec<f64>, f64, usize) {
        let n = self.op.len();
        let mut g = g0.to_vec();
        let mut gn = alloc::vec![0.0; n];
        let mut v = alloc::vec![0.0; n];
        let mut res = f64::INFINITY;
        let mut it = 0;
        while it < max_iter {
            self.apply_map(mu, &g, &mut v, &mut gn);
            res = g
                .iter()
                .zip(&gn)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            core::mem::swap(&mut g, &mut gn);
            it += 1;
            if res <= tol {
                break;
            }
        }
        (g, res, it)
    }

    fn package(
        &self,
        mu: f64,
        g: Vec<f64>,
        v: Vec<f64>,
        branch: Branch,
        iterations: usize,
        residual: f64,
    ) -> FixedPointResult {
        let occupation = Occupation {
            grid: self.op.grid().clone(),
            values: g,
        };
        let density = occupation.density();
        let free_energy = self.free_energy_with_potential(&occupation.values, &v);
        FixedPointResult {
            occupation,
            potential: v,
            mu,
            temperature: self.t,
            density,
            free_energy,
            branch,
            iterations,
            residual,
        }
    }

    /// Free energy per volume of an occupation on this grid:
    /// kinetic + exchange + entropy, sharing the kernel matrix.
    pub fn free_energy_with_potential(&self, g: &[f64], v: &[f64]) -> f64 {
        let grid = self.op.grid();
        let nodes = grid.nodes();
        let weights = grid.weights();
        let mut kin = 0.0;
        let mut exch = 0.0;
        let mut ent = 0.0;
        for i in 0..g.len() {
            kin += weights[i] * 0.5 * nodes[i] * nodes[i] * g[i];
            exch += weights[i] * g[i] * v[i];
            ent += weights[i] * entropy(g[i]);
        }
        (kin - 0.5 * exch - self.t * ent) / (2.0 * PI * PI)
    }

    fn density_of(&self, g: &[f64]) -> f64 {
        self.op.grid().integrate(g) / (2.0 * PI * PI)
    }

    /// Newton iteration on F(g) = G(g) − g, the Jacobian being
    /// `∂G/∂g = β g(1−g) ∘ W`. Quadratic near any non-degenerate fixed
    /// point, stable or not.
    fn newton_polish(&self, mu: f64, g0: &[f64], target: f64) -> Option<(Vec<f64>, f64, usize)> {
        let n = self.op.len();
        let mut g = g0.to_vec();
        let mut v = alloc::vec![0.0; n];
        let mut gmap = alloc::vec![0.0; n];
        let mut best_res = f64::INFINITY;
        for it in 0..60 {
            self.apply_map(mu, &g, &mut v, &mut gmap);
            let res = g
                .iter()
                .zip(&gmap)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if res <= target {
                return Some((g, res, it));
            }
            if res > 10.0 * best_res.max(1e-15) && it > 4 {
                return None; // diverging
            }
            best_res = best_res.min(res);
            // M = I − β g(1−g) W ; rhs = G(g) − g
            let mut m = alloc::vec![0.0; n * n];
            for i in 0..n {
                let scale = self.beta * (g[i] * (1.0 - g[i])).max(0.0);
                for j in 0..n {
                    let wij = self.op.matrix[i * n + j];
                    m[i * n + j] = if i == j { 1.0 - scale * wij } else { -scale * wij };
                }
            }
            let mut rhs: Vec<f64> = gmap.iter().zip(&g).map(|(a, b)| a - b).collect();
            let delta = solve_dense(&mut m, &mut rhs, n)?;
            let mut scale = 1.0;
            // keep iterates inside [floor, ceil]
            for _ in 0..8 {
                let mut ok = true;
                for i in 0..n {
                    let cand = g[i] + scale * delta[i];
                    if !(G_FLOOR..=G_CEIL).contains(&cand) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    break;
                }
                scale *= self.cfg.damping;
            }
            for i in 0..n {
                g[i] = (g[i] + scale * delta[i]).clamp(G_FLOOR, G_CEIL);
            }
        }
        None
    }
}

// ───────────────────────── public operations ─────────────────────────

/// Exchange potential of the filled Fermi ball at its own surface:
/// `V_ball(k_F) = Σᵢ 2^{sᵢ+1} π κᵢ k_F^{sᵢ} / (sᵢ(sᵢ+1))` — the sharpest
/// per-branch handle on where a Fermi surface can sit.
fn ball_surface_potential(pot: &RieszPotential, kf: f64) -> f64 {
    pot.terms()
        .iter()
        .map(|t| 2.0f64.powf(t.s + 1.0) * PI * t.kappa * kf.powf(t.s) / (t.s * (t.s + 1.0)))
        .sum()
}

/// Largest self-consistent Fermi radius at chemical potential μ: the top
/// root of `k²/2 = μ + V_ball(k)`, exact for the degenerate ball and an
/// upper estimate (up to thermal smearing) for every fixed point. Zero when
/// no root exists (purely thermal occupations).
fn fermi_radius_upper(pot: &RieszPotential, mu: f64) -> f64 {
    let h = |k: f64| 0.5 * k * k - mu - ball_surface_potential(pot, k);
    let mut hi = 1.0;
    let mut guard = 0;
    while h(hi) < 0.0 && guard < 60 {
        hi *= 2.0;
        guard += 1;
    }
    // walk down to bracket the largest sign change
    let mut lo = hi;
    let mut found = false;
    for _ in 0..200 {
        let next = lo / 1.25;
        if h(next) < 0.0 {
            lo = next;
            found = true;
            break;
        }
        lo = next;
        if lo < 1e-8 {
            break;
        }
    }
    if !found {
        return 0.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Grid for a solve at fixed μ: a band wide enough for every admissible
/// Fermi radius at this chemical potential. At low temperature the band may
/// exceed the node budget; [`solve_extremal`] then re-solves on a grid
/// focused at the converged Fermi surface.
fn grid_spec_for_mu(pot: &RieszPotential, mu: f64, t: f64, cfg: &SolverConfig) -> Result<GridSpec> {
    let k_up = fermi_radius_upper(pot, mu);
    if k_up <= 0.0 {
        return Ok(GridSpec::for_thermal_band(cfg.n_nodes, t, 0.0, 0.0));
    }
    Ok(GridSpec::for_thermal_band(
        cfg.n_nodes,
        t,
        0.25 * k_up,
        1.15 * k_up,
    ))
}

fn grid_spec_for_rho(rho: f64, t: f64, cfg: &SolverConfig) -> Result<GridSpec> {
    let ctf = thomas_fermi_constant(3)?;
    let kf = ctf.sqrt() * rho.powf(1.0 / 3.0);
    Ok(GridSpec::for_thermal_band(cfg.n_nodes, t, 0.85 * kf, 1.18 * kf))
}

/// Fermi radius of a converged occupation: the interpolated g = 1/2
/// crossing, when the occupation has one.
fn crossing_radius(grid: &RadialGrid, g: &[f64]) -> Option<f64> {
    let nodes = grid.nodes();
    let mut last_above: Option<usize> = None;
    for (i, &v) in g.iter().enumerate() {
        if v >= 0.5 {
            last_above = Some(i);
        }
    }
    let i = last_above?;
    if i + 1 >= g.len() {
        return Some(nodes[i]);
    }
    let (g0, g1) = (g[i], g[i + 1]);
    let f = (g0 - 0.5) / (g0 - g1).max(1e-300);
    Some(nodes[i] + f * (nodes[i + 1] - nodes[i]))
}

/// Plain Picard iteration of `G_{μ,T}` from an arbitrary admissible start,
/// with no branch semantics or monotonicity bookkeeping. Converges to a
/// stable fixed point when one attracts the start; used to probe local
/// uniqueness (e.g. when the contraction norm certifies it).
pub fn picard_iterate(
    pot: &RieszPotential,
    start: &Occupation,
    mu: f64,
    temperature: f64,
    max_iter: usize,
    tol: f64,
) -> Result<(Occupation, f64, usize)> {
    let cfg = SolverConfig::default();
    let engine = Engine::new(pot, start.grid.clone(), temperature, &cfg)?;
    let (values, residual, iterations) = engine.iterate_plain(mu, &start.values, max_iter, tol);
    Ok((
        Occupation {
            grid: start.grid.clone(),
            values,
        },
        residual,
        iterations,
    ))
}

/// One application of the self-consistency map `G_{μ,T}` to an occupation:
/// V = w∗g by the calibrated radial quadrature, then the Fermi-Dirac
/// expression nodewise.
pub fn hammerstein_apply(
    pot: &RieszPotential,
    g: &Occupation,
    mu: f64,
    temperature: f64,
) -> Result<Occupation> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidArgument("temperature must be positive".to_string()));
    }
    let op = KernelOperator::new(pot, g.grid.clone())?;
    let beta = 1.0 / temperature;
    let mut v = alloc::vec![0.0; g.values.len()];
    op.apply(&g.values, &mut v);
    let values = g
        .grid
        .nodes()
        .iter()
        .zip(&v)
        .map(|(&k, &vi)| fermi_factor(beta, 0.5 * k * k - mu - vi))
        .collect();
    Ok(Occupation {
        grid: g.grid.clone(),
        values,
    })
}

/// Minimal or maximal fixed point at fixed (μ, T), iterating from the
/// constant 0 / 1 state. The iteration sequence is nodewise monotone; a
/// violation beyond floating-point slack aborts with an error because it
/// signals an inconsistent discretization.
///
/// When the first pass converges onto a Fermi surface the budget-limited
/// grid did not resolve to the thermal width, the solve repeats once on a
/// grid focused around the converged surface.
pub fn solve_extremal(
    pot: &RieszPotential,
    mu: f64,
    temperature: f64,
    branch: Branch,
    cfg: &SolverConfig,
) -> Result<FixedPointResult> {
    let spec = grid_spec_for_mu(pot, mu, temperature, cfg)?;
    let grid = Arc::new(RadialGrid::build(&spec)?);
    let mut engine = Engine::new(pot, grid.clone(), temperature, cfg)?;
    let first = engine.solve_extremal(mu, branch)?;
    let Some(k_star) = crossing_radius(&grid, &first.occupation.values) else {
        return Ok(first);
    };
    let width_needed = 0.5 * temperature / k_star;
    if grid.panel_width_at(k_star) <= 1.5 * width_needed {
        return Ok(first);
    }
    let d = (12.0 * temperature / k_star).max(0.02 * k_star);
    let spec2 = GridSpec {
        n_budget: cfg.n_nodes,
        k_max: grid.k_max().max(4.0 * k_star),
        band: Some(((k_star - d).max(0.0), k_star + d)),
        band_panel_width: width_needed,
        breakpoints: alloc::vec::Vec::new(),
    };
    let grid2 = Arc::new(RadialGrid::build(&spec2)?);
    let mut engine2 = Engine::new(pot, grid2, temperature, cfg)?;
    engine2.solve_extremal(mu, branch)
}

/// Outcome of a middle-point search.
#[derive(Debug, Clone)]
pub enum MiddleOutcome {
    Found {
        result: FixedPointResult,
        /// distinct additional interior fixed points found on the path
        extra_fixed_points: usize,
    },
    /// the converged path carries no interior fixed point
    NoMiddle,
}

/// Middle fixed point between two distinct extremal solutions at the same
/// (μ, T), via a string of beads evolved by the map and re-parametrized to
/// uniform arc length, then Newton-polished at the best interior candidate.
pub fn solve_middle(
    pot: &RieszPotential,
    mu: f64,
    temperature: f64,
    gmin: &FixedPointResult,
    gmax: &FixedPointResult,
    cfg: &SolverConfig,
) -> Result<MiddleOutcome> {
    let grid = gmin.occupation.grid.clone();
    let engine = Engine::new(pot, grid, temperature, cfg)?;
    middle_on_engine(&engine, mu, gmin, gmax)
}

pub(crate) fn middle_on_engine(
    engine: &Engine,
    mu: f64,
    gmin: &FixedPointResult,
    gmax: &FixedPointResult,
) -> Result<MiddleOutcome> {
    let cfg = &engine.cfg;
    let n = engine.op.len();
    let lo = &gmin.occupation.values;
    let hi = &gmax.occupation.values;
    if lo.len() != n || hi.len() != n {
        return Err(Error::InvalidArgument(
            "endpoint solutions live on a different grid".to_string(),
        ));
    }
    let gap = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| (b - a).abs())
        .fold(0.0, f64::max);
    if gap <= 10.0 * cfg.tol {
        return Err(Error::DegenerateEndpoints { gap });
    }

    let b = cfg.beads;
    let mut path: Vec<Vec<f64>> = (0..b)
        .map(|i| {
            let a = i as f64 / (b - 1) as f64;
            lo.iter().zip(hi).map(|(x, y)| x + a * (y - x)).collect()
        })
        .collect();
    let mut v = alloc::vec![0.0; n];
    let mut tmp = alloc::vec![0.0; n];
    let weights = engine.op.grid().weights().to_vec();
    let l2 = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .zip(&weights)
            .map(|((x, y), w)| w * (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };

    for it in 0..cfg.string_max_iter {
        let mut moved = 0.0f64;
        for bead in path.iter_mut().take(b - 1).skip(1) {
            engine.apply_map(mu, bead, &mut v, &mut tmp);
            for (g, t) in bead.iter_mut().zip(&tmp) {
                moved = moved.max((*g - *t).abs());
                *g = *t;
            }
        }
        if (it + 1) % cfg.reparam_every == 0 {
            // resample to uniform L² arc length
            let mut arc = alloc::vec![0.0; b];
            for i in 1..b {
                arc[i] = arc[i - 1] + l2(&path[i], &path[i - 1]);
            }
            let total = arc[b - 1];
            if total > 1e-300 {
                let mut newpath = path.clone();
                let mut j = 0usize;
                for (i, np) in newpath.iter_mut().enumerate().take(b - 1).skip(1) {
                    let target = total * i as f64 / (b - 1) as f64;
                    while j + 1 < b - 1 && arc[j + 1] < target {
                        j += 1;
                    }
                    let span = (arc[j + 1] - arc[j]).max(1e-300);
                    let f = (target - arc[j]) / span;
                    for (p, (x, y)) in np.iter_mut().zip(path[j].iter().zip(&path[j + 1])) {
                        let moved_to = x + f * (y - x);
                        moved = moved.max((*p - moved_to).abs());
                        *p = moved_to;
                    }
                }
                path = newpath;
            }
        }
        if moved < cfg.string_tol {
            break;
        }
    }

    // candidate beads: interior local minima of the residual, ranked by how
    // far their density sits from both endpoints
    let mut residuals = alloc::vec![0.0; b];
    let mut densities = alloc::vec![0.0; b];
    for (i, bead) in path.iter().enumerate() {
        engine.apply_map(mu, bead, &mut v, &mut tmp);
        residuals[i] = bead
            .iter()
            .zip(&tmp)
            .map(|(a, c)| (a - c).abs())
            .fold(0.0, f64::max);
        densities[i] = engine.density_of(bead);
    }
    let rho_lo = gmin.density;
    let rho_hi = gmax.density;
    let mut candidates: Vec<(f64, usize)> = (1..b - 1)
        .filter(|&i| residuals[i] <= residuals[i - 1] && residuals[i] <= residuals[i + 1])
        .map(|i| {
            let dist = (densities[i] - rho_lo).abs().min((densities[i] - rho_hi).abs());
            (dist, i)
        })
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    if candidates.is_empty() {
        // fall back to the bead most distant from both endpoints
        let i = (1..b - 1)
            .max_by(|&i, &j| {
                let di = (densities[i] - rho_lo).abs().min((densities[i] - rho_hi).abs());
                let dj = (densities[j] - rho_lo).abs().min((densities[j] - rho_hi).abs());
                di.total_cmp(&dj)
            })
            .unwrap_or(b / 2);
        candidates.push(((densities[i] - rho_lo).abs().min((densities[i] - rho_hi).abs()), i));
    }

    let polish_target = engine.cfg.tol.min(1e-10);
    let mut found: Vec<(Vec<f64>, f64, usize)> = Vec::new();
    for &(_, idx) in &candidates {
        if let Some((g, res, its)) = engine.newton_polish(mu, &path[idx], polish_target) {
            // discard endpoint rediscoveries
            let d_lo = g.iter().zip(lo).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
            let d_hi = g.iter().zip(hi).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
            if d_lo <= 100.0 * engine.cfg.tol || d_hi <= 100.0 * engine.cfg.tol {
                continue;
            }
            // dedupe
            if found
                .iter()
                .all(|(f, _, _)| f.iter().zip(&g).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max) > 1e-6)
            {
                found.push((g, res, its));
            }
        }
    }
    if found.is_empty() {
        return Ok(MiddleOutcome::NoMiddle);
    }
    // keep the one farthest from both endpoint densities
    found.sort_by(|a, b| {
        let da = {
            let d = engine.density_of(&a.0);
            (d - rho_lo).abs().min((d - rho_hi).abs())
        };
        let db = {
            let d = engine.density_of(&b.0);
            (d - rho_lo).abs().min((d - rho_hi).abs())
        };
        db.total_cmp(&da)
    });
    let extra = found.len() - 1;
    let (g, res, its) = found.swap_remove(0);
    // sandwich check (floating-point slack)
    for i in 0..n {
        if g[i] < lo[i] - 1e-9 || g[i] > hi[i] + 1e-9 {
            return Ok(MiddleOutcome::NoMiddle);
        }
    }
    let mut vfin = alloc::vec![0.0; n];
    engine.op.apply(&g, &mut vfin);
    let result = engine.package(mu, g, vfin, Branch::Middle, its, res);
    if !(result.density > rho_lo && result.density < rho_hi) {
        return Ok(MiddleOutcome::NoMiddle);
    }
    Ok(MiddleOutcome::Found {
        result,
        extra_fixed_points: extra,
    })
}

/// Find μ so that the requested extremal branch carries density ρ, by a
/// bracketing secant/bisection hybrid on the (branch-monotone) map
/// μ ↦ ρ(μ). Reports a bracket failure with the scanned table when the
/// branch's density range skips over ρ (possible across folds).
pub fn solve_at_density(
    pot: &RieszPotential,
    rho: f64,
    temperature: f64,
    branch: Branch,
    cfg: &SolverConfig,
) -> Result<FixedPointResult> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument("density must be positive".to_string()));
    }
    let spec = grid_spec_for_rho(rho, temperature, cfg)?;
    let grid = Arc::new(RadialGrid::build(&spec)?);
    let mut engine = Engine::new(pot, grid, temperature, cfg)?;
    density_root(&mut engine, rho, branch)
}

pub(crate) fn density_root(
    engine: &mut Engine,
    rho: f64,
    branch: Branch,
) -> Result<FixedPointResult> {
    if branch == Branch::Middle {
        return Err(Error::InvalidArgument(
            "density root-finding works on the extremal branches".to_string(),
        ));
    }
    let consts = energy_coefficients(&engine.pot)?;
    let mut table: Vec<(f64, f64)> = Vec::new();
    let tol = engine.cfg.rootfind_rel_tol;
    let eval = |engine: &mut Engine, mu: f64, table: &mut Vec<(f64, f64)>| -> Result<FixedPointResult> {
        let r = engine.solve_extremal(mu, branch)?;
        table.push((mu, r.density));
        Ok(r)
    };

    let mu0 = mu_from_constants(&consts, 3, rho);
    let mut a = mu0;
    let mut ra = eval(engine, a, &mut table)?;
    let step0 = (0.05 * mu0.abs()).max(4.0 * engine.t).max(1e-4);
    let mut b = a;
    let mut rb = ra.clone();
    if ra.density < rho {
        // walk up
        let mut step = step0;
        let mut found = false;
        for _ in 0..200 {
            b = a + step;
            rb = eval(engine, b, &mut table)?;
            if rb.density >= rho {
                found = true;
                break;
            }
            a = b;
            ra = rb.clone();
            step *= 1.7;
        }
        if !found {
            return Err(Error::BracketFailure { target: rho, table });
        }
    } else {
        // walk down
        let mut step = step0;
        let mut found = false;
        for _ in 0..200 {
            b = a;
            rb = ra.clone();
            a -= step;
            ra = eval(engine, a, &mut table)?;
            if ra.density <= rho {
                found = true;
                break;
            }
            step *= 1.7;
        }
        if !found {
            return Err(Error::BracketFailure { target: rho, table });
        }
    }
    // bracket [a, b] with ρ(a) ≤ rho ≤ ρ(b); secant/bisection hybrid
    for _ in 0..200 {
        if (ra.density - rho).abs() <= tol * rho {
            return finish_at_density(ra, rho, tol);
        }
        if (rb.density - rho).abs() <= tol * rho {
            return finish_at_density(rb, rho, tol);
        }
        if (b - a).abs() <= 1e-15 * (a.abs().max(b.abs()).max(1e-3)) {
            // interval collapsed onto a fold: the branch jumps over rho
            return Err(Error::BracketFailure { target: rho, table });
        }
        let mu_next = guarded_secant(a, ra.density - rho, b, rb.density - rho);
        let rn = eval(engine, mu_next, &mut table)?;
        if rn.density < rho {
            a = mu_next;
            ra = rn;
        } else {
            b = mu_next;
            rb = rn;
        }
    }
    Err(Error::BracketFailure { target: rho, table })
}

fn finish_at_density(r: FixedPointResult, rho: f64, tol: f64) -> Result<FixedPointResult> {
    debug_assert!((r.density - rho).abs() <= tol * rho);
    Ok(r)
}

/// Free energy per volume of an occupation: kinetic + exchange + entropy,
/// the exchange using the same angular-reduced kernel as the solver.
pub fn free_energy(pot: &RieszPotential, g: &Occupation, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::InvalidArgument("temperature must be nonnegative".to_string()));
    }
    let op = KernelOperator::new(pot, g.grid.clone())?;
    let mut v = alloc::vec![0.0; g.values.len()];
    op.apply(&g.values, &mut v);
    let grid = &g.grid;
    let nodes = grid.nodes();
    let weights = grid.weights();
    let mut kin = 0.0;
    let mut exch = 0.0;
    let mut ent = 0.0;
    for i in 0..g.values.len() {
        kin += weights[i] * 0.5 * nodes[i] * nodes[i] * g.values[i];
        exch += weights[i] * g.values[i] * v[i];
        ent += weights[i] * entropy(g.values[i]);
    }
    Ok((kin - 0.5 * exch - temperature * ent) / (2.0 * PI * PI))
}

/// Sharp bound `sup ‖w∗g‖_∞ ≤ Σᵢ Cᵢ ρ^{sᵢ/d}` over all admissible g of
/// density ρ, with `Cᵢ = κᵢ |S^{d−1}|/sᵢ · c_TF^{sᵢ/2}` (saturated by the
/// filled Fermi ball at k = 0).
pub fn exchange_bound(pot: &RieszPotential, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::InvalidArgument("density must be nonnegative".to_string()));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let d = pot.dim();
    let dd = d as f64;
    let sd = surface_area(d)?;
    let ctf = thomas_fermi_constant(d)?;
    Ok(pot
        .terms()
        .iter()
        .map(|t| t.kappa * sd / t.s * ctf.powf(t.s / 2.0) * rho.powf(t.s / dd))
        .sum())
}

/// User-supplied constants for the uniqueness-region predicates (the theory
/// leaves C, ρ_C and α non-explicit).
#[derive(Debug, Clone, Copy)]
pub struct OmegaConstants {
    pub c: f64,
    pub rho_c: f64,
    pub alpha: f64,
}

impl Default for OmegaConstants {
    fn default() -> Self {
        OmegaConstants {
            c: 1.0,
            rho_c: 1.0,
            alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionStatus {
    InsideOmega1,
    InsideOmega2,
    Outside,
}

/// Uniqueness-region predicate: Ω₁ is `Σᵢ Cᵢ ρ^{sᵢ/d} < T`; Ω₂ is the
/// complementary high-density regime, `Σᵢ Cᵢ ρ^{sᵢ/d} > T/2` together with
/// `ρ > ρ_C` (short range) or `T e^{α ρ^{1/d}} > C` (long range s = 1).
pub fn uniqueness_region(
    pot: &RieszPotential,
    rho: f64,
    temperature: f64,
    constants: OmegaConstants,
) -> Result<RegionStatus> {
    let b = exchange_bound(pot, rho)?;
    if b < temperature {
        return Ok(RegionStatus::InsideOmega1);
    }
    let d = pot.dim() as f64;
    let long_range = pot.terms().iter().all(|t| (t.s - 1.0).abs() < 1e-12);
    let omega2 = if long_range {
        b > temperature / 2.0
            && temperature * (constants.alpha * rho.powf(1.0 / d)).exp() > constants.c
    } else {
        b > temperature / 2.0 && rho > constants.rho_c
    };
    Ok(if omega2 {
        RegionStatus::InsideOmega2
    } else {
        RegionStatus::Outside
    })
}

/// ‖A_g‖_{L∞→L∞} = β ‖w ∗ g(1−g)‖_∞ for a converged solution, by the same
/// radial quadrature. Below 1 it certifies a locally unique fixed point.
pub fn contraction_norm(pot: &RieszPotential, result: &FixedPointResult) -> Result<f64> {
    let op = KernelOperator::new(pot, result.occupation.grid.clone())?;
    let gg: Vec<f64> = result
        .occupation
        .values
        .iter()
        .map(|&g| (g * (1.0 - g)).max(0.0))
        .collect();
    let mut v = alloc::vec![0.0; gg.len()];
    op.apply(&gg, &mut v);
    Ok(v.iter().fold(0.0f64, |a, &b| a.max(b)) / result.temperature)
}

/// Free Fermi-Dirac density `I_β(μ) = (2π)^{-d} ∫ dk/(1+e^{β(k²/2−μ)})`
/// in d = 3, by adaptive quadrature.
pub fn free_fermi_density(temperature: f64, mu: f64) -> f64 {
    let beta = 1.0 / temperature;
    let k_cut = (2.0 * mu.max(0.0) + 2.0 * temperature * 45.0).sqrt();
    let f = |k: f64| k * k * fermi_factor(beta, 0.5 * k * k - mu);
    let integral = quad::adaptive(&f, 0.0, k_cut, 1e-11).unwrap_or_else(|_| {
        // extremely degenerate parameters: fall back to a dense fixed rule
        quad::fixed(f, 0.0, k_cut, 256)
    });
    integral / (2.0 * PI * PI)
}

/// Inverse of [`free_fermi_density`] in μ at fixed T (bisection; the map is
/// strictly increasing).
pub fn free_fermi_mu(temperature: f64, rho: f64) -> f64 {
    let ctf = thomas_fermi_constant(3).expect("d = 3");
    let mut lo = -temperature * 745.0 - 1.0;
    let mut hi = ctf * rho.powf(2.0 / 3.0) / 2.0 + 40.0 * temperature;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if free_fermi_density(temperature, mid) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermi_factor_saturates_cleanly() {
        assert_eq!(fermi_factor(1e4, 1.0), G_FLOOR);
        assert_eq!(fermi_factor(1e4, -1.0), G_CEIL);
        let g = fermi_factor(10.0, 0.0);
        assert!((g - 0.5).abs() < 1e-15);
        // stable far tails
        assert!(fermi_factor(100.0, 7.0) > 0.0);
        assert!(fermi_factor(100.0, 7.0) < 1e-300 * 1e10);
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(entropy(G_FLOOR) < 1e-290, true);
        assert!(entropy(G_CEIL) < 1e-13);
        assert!((entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.beads = 4;
        assert!(cfg.validate().is_err());
        cfg = SolverConfig::default();
        cfg.damping = 0.0;
        assert!(cfg.validate().is_err());
        cfg = SolverConfig::default();
        cfg.tol = -1.0;
        assert!(cfg.validate().is_err());
    }
}
