use hfgas_core::*;
use std::sync::Arc;

fn main() {
    let pot = RieszPotential::coulomb_3d();
    let rho: f64 = 1e-3;
    let mu = mu_t0(&pot, rho).unwrap();
    println!("mu = {mu}");
    for t in [1e-3, 3e-4, 1e-4] {
        // manual fine grid centered on the true kF
        let kf = thomas_fermi_constant(3).unwrap().sqrt() * rho.powf(1.0/3.0);
        for (name, band, w) in [
            ("wide-coarse", (0.09f64, 0.47f64), 6.8e-3),
            ("tight-true", (kf*0.95, kf*1.05), 0.5*t/kf),
            ("wide-fine", (0.09, 0.47), 0.5*t/kf),
        ] {
            let spec = GridSpec { n_budget: if name=="wide-fine" {4096} else {512}, k_max: 1.9, band: Some(band), band_panel_width: w, breakpoints: vec![] };
            let grid = Arc::new(RadialGrid::build(&spec).unwrap());
            let n = grid.len();
            let cfg = SolverConfig { n_nodes: n, ..Default::default() };
            // direct engine-level solve on this grid via public solve path? use hammerstein loop manually
            let mut g = Occupation::constant(grid.clone(), 1.0);
            let mut it = 0;
            loop {
                let gn = hammerstein_apply(&pot, &g, mu, t).unwrap();
                let step = gn.values.iter().zip(&g.values).map(|(a,b)| (a-b).abs()).fold(0.0, f64::max);
                g = gn; it += 1;
                if step < 1e-9 || it > 30000 { break; }
            }
            println!("T={t:.0e} {name:<12} N={n:<4} it={it:<6} rho={:.6e}", g.density());
        }
    }
}
