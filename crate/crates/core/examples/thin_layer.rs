//! A thin slow layer converging to the snapping barrier, analytically and
//! through the random walk.

use snob::analytic::{layer_edge, psi_ebm, psi_thinlayer_unstretched, semigroup_snob, QuadratureSpec};
use snob::mc::{mean_and_stderr, run_paths};
use snob::sim::ThinLayerWalk;
use snob::verify::thin_layer_kernel_gap;
use snob::{GPoint, Side, SnobParams};

fn main() -> snob::Result<()> {
    let params = SnobParams::new(1.0)?;
    println!("{:>8} {:>12} {:>12}", "eps", "kernel gap", "psi gap");
    for eps in [1e-1, 1e-2, 1e-3] {
        let gap = thin_layer_kernel_gap(0.5, &params, eps)?;
        let psi_gap = (psi_thinlayer_unstretched(0.5, 1.0, &params, eps)? - psi_ebm(0.5, 1.0, &params)?).abs();
        println!("{eps:>8.0e} {gap:>12.3e} {psi_gap:>12.3e}");
    }

    let eps = 0.01;
    let walk = ThinLayerWalk::new(params, eps, layer_edge(&params, eps) / 8.0)?;
    let t = 1.0 - (1.0f64 % walk.time_step());
    let v = run_paths(20_000, 5, |s| if walk.endpoint(s, 0.5, t).unwrap().0 == Side::Plus { 1.0 } else { 0.0 });
    let (m, se) = mean_and_stderr(&v)?;
    let quad = QuadratureSpec::with_tolerance(1e-12)?;
    let limit = semigroup_snob(&|p: GPoint| if p.side() == Side::Plus { 1.0 } else { 0.0 }, GPoint::plus(0.5), t, &params, &quad)?;
    println!("P(plus side at t = {t:.4}): walk {m:.4} +- {se:.4}, barrier limit {limit:.4}");
    Ok(())
}
