//! Radial momentum grids: composite Gauss-Legendre panels with a uniformly
//! resolved band around the expected Fermi surface, geometric coarsening
//! toward k = 0 and toward the cutoff.
//!
//! Weights carry the k² volume factor, so `Σ wᵢ f(kᵢ) ≈ ∫₀^{k_max} f(k) k² dk`
//! and a unit integrand sums to k_max³/3 at machine accuracy.

use crate::{quad, Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is in the build graph
use num_traits::Float;

/// Construction recipe for a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// node budget (the builder may use slightly fewer)
    pub n_budget: usize,
    /// cutoff momentum
    pub k_max: f64,
    /// band [lo, hi] to resolve uniformly (the Fermi-surface window)
    pub band: Option<(f64, f64)>,
    /// max panel width inside the band
    pub band_panel_width: f64,
    /// extra panel edges to align exactly (e.g. a sharp Fermi radius in tests)
    pub breakpoints: Vec<f64>,
}

impl GridSpec {
    /// Band and resolution for a solve at temperature `t` whose Fermi
    /// surface is expected inside `[k_lo, k_hi]` (pass `k_lo = k_hi` for a
    /// point estimate). Thermal smearing widens the band and sets the panel
    /// width; purely thermal problems (no Fermi surface) get a plain grid.
    pub fn for_thermal_band(n_budget: usize, t: f64, k_lo: f64, k_hi: f64) -> Self {
        let k_scale = k_hi.max((2.0 * t).sqrt());
        let smear = 8.0 * t / k_scale;
        let lo = (k_lo - smear).max(0.0) * 0.95;
        let hi = (k_hi + smear) * 1.05;
        let k_max = 4.0 * k_hi.max((2.0 * t * 40.0).sqrt());
        // resolve the Fermi-Dirac transition: a few panels across width T/k
        let w = (t / k_scale).max((hi - lo).max(1e-6) / 56.0);
        GridSpec {
            n_budget,
            k_max,
            band: if hi > 1e-12 { Some((lo, hi)) } else { None },
            band_panel_width: w,
            breakpoints: Vec::new(),
        }
    }
}

/// Nodes, k²-weights and panel edges of a composite Gauss-Legendre grid.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    /// quadrature weights including the k² factor
    weights: Vec<f64>,
    /// bare Gauss-Legendre weights (no k²)
    bare_weights: Vec<f64>,
    panel_edges: Vec<f64>,
    k_max: f64,
}

impl RadialGrid {
    pub fn build(spec: &GridSpec) -> Result<Self> {
        if !(spec.k_max > 0.0) {
            return Err(Error::InvalidArgument("k_max must be positive".to_string()));
        }
        if spec.n_budget < 32 {
            return Err(Error::InvalidArgument(
                "node budget below 32 cannot resolve the problem".to_string(),
            ));
        }
        let mut edges: Vec<f64> = alloc::vec![0.0, spec.k_max];
        let (band_lo, band_hi) = match spec.band {
            Some((lo, hi)) if hi > lo + 1e-14 => (lo.max(0.0), hi.min(spec.k_max)),
            _ => (0.0, 0.0),
        };
        let mut w_band = spec.band_panel_width.max(1e-9);
        // fit the panel count to the budget, coarsening the band if needed
        let mut nper = 8usize;
        for _attempt in 0..40 {
            edges = alloc::vec![0.0];
            if band_hi > band_lo {
                // region A: geometric panels from band_lo down toward 0
                let mut pos = band_lo;
                let mut w = w_band;
                let mut below = Vec::new();
                while pos > 1e-12 {
                    let step = w.min(pos);
                    below.push(pos - step);
                    pos -= step;
                    w *= 1.8;
                }
                below.reverse();
                edges.extend(below.iter().skip_while(|&&e| e <= 0.0));
                // region B: uniform band
                let nb = ((band_hi - band_lo) / w_band).ceil() as usize;
                for i in 1..=nb {
                    edges.push(band_lo + (band_hi - band_lo) * i as f64 / nb as f64);
                }
            }
            // region C: geometric growth to k_max
            let mut pos: f64 = *edges.last().unwrap();
            let mut w = w_band.max(spec.k_max / 64.0);
            if pos == 0.0 {
                // no band: thermal-style grading from a fine start
                w = spec.k_max / 48.0;
            }
            while pos < spec.k_max {
                w *= 1.6;
                pos = (pos + w).min(spec.k_max);
                edges.push(pos);
            }
            // splice in breakpoints
            for &bp in &spec.breakpoints {
                if bp > 1e-12 && bp < spec.k_max {
                    edges.push(bp);
                }
            }
            edges.sort_by(f64::total_cmp);
            edges.dedup_by(|a, b| (*a - *b).abs() < 1e-13 * spec.k_max);
            let n_panels = edges.len() - 1;
            if n_panels * 6 > spec.n_budget {
                w_band *= 1.5;
                continue;
            }
            nper = (spec.n_budget / n_panels).clamp(6, 14);
            break;
        }

        let mut nodes = Vec::new();
        let mut bare = Vec::new();
        for w in edges.windows(2) {
            quad::push_panel(&mut nodes, &mut bare, w[0], w[1], nper);
        }
        let weights = nodes
            .iter()
            .zip(&bare)
            .map(|(&k, &w)| w * k * k)
            .collect::<Vec<_>>();
        let grid = RadialGrid {
            nodes,
            weights,
            bare_weights: bare,
            panel_edges: edges,
            k_max: spec.k_max,
        };
        grid.check_unit_integral()?;
        Ok(grid)
    }

    fn check_unit_integral(&self) -> Result<()> {
        let total: f64 = self.weights.iter().sum();
        let want = self.k_max.powi(3) / 3.0;
        if ((total - want) / want).abs() > 1e-10 {
            return Err(Error::InvalidArgument(alloc::format!(
                "grid weights integrate 1 to {total:.15e}, want {want:.15e}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `∫ f(k) k² dk`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bare_weights(&self) -> &[f64] {
        &self.bare_weights
    }

    pub fn panel_edges(&self) -> &[f64] {
        &self.panel_edges
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    /// `∫ f(k) k² dk` over the grid.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Width of the panel containing `k` (the local resolution scale).
    pub fn panel_width_at(&self, k: f64) -> f64 {
        let e = &self.panel_edges;
        match e.binary_search_by(|x| x.total_cmp(&k)) {
            Ok(i) | Err(i) => {
                let i = i.clamp(1, e.len() - 1);
                e[i] - e[i - 1]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_integral_matches_cube() {
        let spec = GridSpec::for_thermal_band(512, 0.01, 0.3, 0.5);
        let g = RadialGrid::build(&spec).unwrap();
        let total: f64 = g.weights().iter().sum();
        let want = g.k_max().powi(3) / 3.0;
        assert!(((total - want) / want).abs() < 1e-12);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(g.nodes().iter().all(|&k| k > 0.0));
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.len() <= 512);
    }

    #[test]
    fn kmax_respects_tail_rule() {
        let t = 0.035;
        let spec = GridSpec::for_thermal_band(512, t, 0.2, 0.46);
        assert!(spec.k_max >= 4.0 * (2.0 * t * 40.0f64).sqrt() - 1e-12);
    }

    #[test]
    fn breakpoints_are_panel_edges() {
        let mut spec = GridSpec::for_thermal_band(256, 0.02, 0.3, 0.4);
        spec.breakpoints = alloc::vec![0.33];
        let g = RadialGrid::build(&spec).unwrap();
        assert!(g.panel_edges().iter().any(|&e| (e - 0.33).abs() < 1e-12));
    }

    #[test]
    fn polynomial_exactness() {
        // ∫ k^5 dk over [0, kmax] (f = k^3 against the k² weight)
        let spec = GridSpec::for_thermal_band(256, 0.05, 0.2, 0.5);
        let g = RadialGrid::build(&spec).unwrap();
        let f: alloc::vec::Vec<f64> = g.nodes().iter().map(|&k| k.powi(3)).collect();
        let got = g.integrate(&f);
        let want = g.k_max().powi(6) / 6.0;
        assert!(((got - want) / want).abs() < 1e-12);
    }
}
