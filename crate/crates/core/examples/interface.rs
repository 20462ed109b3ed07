//! Flux continuity and the jump condition at the barrier for a few
//! test functions.

use snob::analytic::{interface_residuals, QuadratureSpec};
use snob::mc::dictionary;
use snob::{GPoint, SnobParams};

fn main() -> snob::Result<()> {
    let quad = QuadratureSpec::with_tolerance(1e-13)?;
    for kappa in [0.3, 1.0, 5.0] {
        let params = SnobParams::new(kappa)?;
        for obs in dictionary() {
            let f = |p: GPoint| obs.eval(p);
            let r = interface_residuals(&f, 1.0, &params, &quad, 1e-4)?;
            println!(
                "kappa {kappa:<4} {:<28} flux gap {:+.2e}  jump residual {:+.2e}",
                obs.name(),
                r.flux_gap,
                r.jump_residual
            );
        }
    }
    Ok(())
}
