//! Probability of ending on the starting side, from the barrier and from
//! a point nearby, with both estimators.

use snob::analytic::{semigroup_snob, QuadratureSpec};
use snob::mc::{estimate_semigroup, Scheme, SideIndicator};
use snob::sim::StepConfig;
use snob::{GPoint, Side, SnobParams};

fn main() -> snob::Result<()> {
    let quad = QuadratureSpec::with_tolerance(1e-12)?;
    for kappa in [0.5, 1.0, 4.0] {
        let params = SnobParams::new(kappa)?;
        let cfg = StepConfig::new(0.01, params)?;
        for x0 in [GPoint::plus(0.0), GPoint::plus(0.5)] {
            let f = |p: GPoint| if p.side() == Side::Plus { 1.0 } else { 0.0 };
            let exact = semigroup_snob(&f, x0, 1.0, &params, &quad)?;
            let obs = SideIndicator(Side::Plus);
            let stepped = estimate_semigroup(&obs, x0, 1.0, &params, &cfg, 50_000, 3, Scheme::PathStepper)?;
            let oneshot = estimate_semigroup(&obs, x0, 1.0, &params, &cfg, 50_000, 4, Scheme::WeightedOneShot)?;
            println!(
                "kappa {kappa:<4} x0 {x0}  exact {exact:.5}  stepper {:.5} +- {:.5}  one-shot {:.5} +- {:.5}",
                stepped.mean, stepped.stderr, oneshot.mean, oneshot.stderr
            );
        }
    }
    Ok(())
}
