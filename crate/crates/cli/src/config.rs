//! Flat key=value run configuration. CLI flags override file values; the
//! fully resolved configuration is serialized into every output header.

use anyhow::{bail, Context, Result};
use hfgas_core::{RieszPotential, SolverConfig};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// How a potential term's coupling is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingKind {
    /// raw Fourier-side κ
    Fourier,
    /// real-space α in α|x|^{−s}
    Alpha,
    /// dimensionless exchange weight λ = α λ(d,s)/κ(d)
    Lambda,
}

#[derive(Debug, Clone)]
pub struct TermSpec {
    pub coupling: f64,
    pub s: f64,
    pub kind: CouplingKind,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dimension: u32,
    pub terms: Vec<TermSpec>,
    pub solver: SolverConfig,
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_points: usize,
    pub rho_log: bool,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    /// temperatures for mu-curve (0 allowed)
    pub temperatures: Vec<f64>,
    /// densities at which t0 emits full P_rho(t) curves
    pub curve_densities: Vec<f64>,
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
    pub seed: u64,
    pub quick: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dimension: 3,
            terms: vec![TermSpec {
                coupling: 1.0,
                s: 1.0,
                kind: CouplingKind::Alpha,
            }],
            solver: SolverConfig::default(),
            rho_min: 1e-4,
            rho_max: 1.6e-3,
            rho_points: 20,
            rho_log: false,
            t_min: 0.003,
            t_max: 0.035,
            t_points: 20,
            temperatures: vec![0.0, 0.01, 0.03],
            curve_densities: vec![1.0e-3, 1.47e-3, 1.6e-3],
            out_dir: PathBuf::from("out"),
            workers: None,
            seed: 42,
            quick: false,
        }
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>> {
    v.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad number {s:?}")))
        .collect()
}

impl RunConfig {
    pub fn load(cli: &crate::Cli) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            cfg.apply_text(&text)?;
        }
        if let Some(out) = &cli.out {
            cfg.out_dir = out.clone();
        }
        cfg.workers = cli.workers.or(cfg.workers);
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        cfg.quick = cfg.quick || cli.quick;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut terms: BTreeMap<usize, TermSpec> = BTreeMap::new();
        let mut explicit_terms = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {raw:?}", lineno + 1);
            };
            let key = key.trim();
            let value = value.trim();
            let ctx = || format!("line {}: key {key}", lineno + 1);
            match key {
                "dimension" => self.dimension = value.parse().with_context(ctx)?,
                k if k.starts_with("term.") => {
                    let idx: usize = k["term.".len()..].parse().with_context(ctx)?;
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() < 2 || parts.len() > 3 {
                        bail!("{}: want `<coupling> <s> [fourier|alpha|lambda]`", ctx());
                    }
                    let kind = match parts.get(2).copied().unwrap_or("alpha") {
                        "fourier" => CouplingKind::Fourier,
                        "alpha" => CouplingKind::Alpha,
                        "lambda" => CouplingKind::Lambda,
                        other => bail!("{}: unknown coupling kind {other:?}", ctx()),
                    };
                    terms.insert(
                        idx,
                        TermSpec {
                            coupling: parts[0].parse().with_context(ctx)?,
                            s: parts[1].parse().with_context(ctx)?,
                            kind,
                        },
                    );
                    explicit_terms = true;
                }
                "nodes" => self.solver.n_nodes = value.parse().with_context(ctx)?,
                "tol" => self.solver.tol = value.parse().with_context(ctx)?,
                "max_iter" => self.solver.max_iter = value.parse().with_context(ctx)?,
                "damping" => self.solver.damping = value.parse().with_context(ctx)?,
                "beads" => self.solver.beads = value.parse().with_context(ctx)?,
                "string_max_iter" => self.solver.string_max_iter = value.parse().with_context(ctx)?,
                "rootfind_tol" => self.solver.rootfind_rel_tol = value.parse().with_context(ctx)?,
                "rho_min" => self.rho_min = value.parse().with_context(ctx)?,
                "rho_max" => self.rho_max = value.parse().with_context(ctx)?,
                "rho_points" => self.rho_points = value.parse().with_context(ctx)?,
                "rho_log" => self.rho_log = value.parse().with_context(ctx)?,
                "t_min" => self.t_min = value.parse().with_context(ctx)?,
                "t_max" => self.t_max = value.parse().with_context(ctx)?,
                "t_points" => self.t_points = value.parse().with_context(ctx)?,
                "temperatures" => self.temperatures = parse_list(value).with_context(ctx)?,
                "curve_densities" => self.curve_densities = parse_list(value).with_context(ctx)?,
                "out" => self.out_dir = PathBuf::from(value),
                "workers" => self.workers = Some(value.parse().with_context(ctx)?),
                "seed" => self.seed = value.parse().with_context(ctx)?,
                "quick" => self.quick = value.parse().with_context(ctx)?,
                other => bail!("line {}: unknown key {other:?}", lineno + 1),
            }
        }
        if explicit_terms {
            self.terms = terms.into_values().collect();
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            bail!("potential needs at least one term");
        }
        if self.rho_points < 1 || self.t_points < 1 {
            bail!("grids need at least one point");
        }
        if !(self.rho_min > 0.0 && self.rho_max >= self.rho_min) {
            bail!("density range must satisfy 0 < rho_min <= rho_max");
        }
        Ok(())
    }

    pub fn potential(&self) -> Result<RieszPotential> {
        let fourier: Result<Vec<(f64, f64)>> = self
            .terms
            .iter()
            .map(|t| {
                Ok(match t.kind {
                    CouplingKind::Fourier => (t.coupling, t.s),
                    CouplingKind::Alpha => (t.coupling, t.s),
                    CouplingKind::Lambda => (t.coupling, t.s),
                })
            })
            .collect();
        let pairs = fourier?;
        let pot = match self.terms.first().map(|t| t.kind) {
            Some(CouplingKind::Fourier) => RieszPotential::new(
                self.dimension,
                pairs
                    .iter()
                    .map(|&(kappa, s)| hfgas_core::RieszTerm { kappa, s })
                    .collect(),
            ),
            Some(CouplingKind::Lambda) => {
                RieszPotential::from_exchange_weights(self.dimension, &pairs)
            }
            _ => RieszPotential::from_real_space(self.dimension, &pairs),
        };
        pot.map_err(|e| anyhow::anyhow!("invalid potential: {e}"))
    }

    pub fn rho_grid(&self) -> Vec<f64> {
        grid_points(self.rho_min, self.rho_max, self.rho_points, self.rho_log)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        grid_points(self.t_min, self.t_max, self.t_points, false)
    }

    /// Resolved configuration as key=value lines for provenance headers.
    pub fn resolved(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "dimension = {}", self.dimension);
        for (i, t) in self.terms.iter().enumerate() {
            let kind = match t.kind {
                CouplingKind::Fourier => "fourier",
                CouplingKind::Alpha => "alpha",
                CouplingKind::Lambda => "lambda",
            };
            let _ = writeln!(s, "term.{} = {:.16e} {:.16e} {}", i + 1, t.coupling, t.s, kind);
        }
        let _ = writeln!(s, "nodes = {}", self.solver.n_nodes);
        let _ = writeln!(s, "tol = {:.3e}", self.solver.tol);
        let _ = writeln!(s, "max_iter = {}", self.solver.max_iter);
        let _ = writeln!(s, "damping = {}", self.solver.damping);
        let _ = writeln!(s, "beads = {}", self.solver.beads);
        let _ = writeln!(s, "rootfind_tol = {:.3e}", self.solver.rootfind_rel_tol);
        let _ = writeln!(
            s,
            "rho_min = {:.16e}\nrho_max = {:.16e}\nrho_points = {}\nrho_log = {}",
            self.rho_min, self.rho_max, self.rho_points, self.rho_log
        );
        let _ = writeln!(
            s,
            "t_min = {:.16e}\nt_max = {:.16e}\nt_points = {}",
            self.t_min, self.t_max, self.t_points
        );
        let temps: Vec<String> = self.temperatures.iter().map(|t| format!("{t}")).collect();
        let _ = writeln!(s, "temperatures = {}", temps.join(","));
        let dens: Vec<String> = self.curve_densities.iter().map(|t| format!("{t}")).collect();
        let _ = writeln!(s, "curve_densities = {}", dens.join(","));
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "quick = {}", self.quick);
        s
    }
}

fn grid_points(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if log {
                lo * (hi / lo).powf(f)
            } else {
                lo + (hi - lo) * f
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms_and_overrides() {
        let mut cfg = RunConfig::default();
        cfg.apply_text(
            "dimension = 3\nterm.1 = 0.5 0.2 lambda\nterm.2 = 1.0 2.8 lambda\nnodes = 256\n# comment\nrho_min = 1e-2\nrho_max= 3e-1\n",
        )
        .unwrap();
        assert_eq!(cfg.terms.len(), 2);
        assert_eq!(cfg.solver.n_nodes, 256);
        assert!(cfg.potential().is_ok());
    }

    #[test]
    fn rejects_garbage() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_text("nonsense").is_err());
        assert!(cfg.apply_text("unknown_key = 3").is_err());
        assert!(cfg.apply_text("term.1 = 1.0").is_err());
    }
}
