//! Resolvent densities side by side, and a Monte Carlo resolvent.

use snob::analytic::{resolvent_snob, KernelFn, KernelKind, QuadratureSpec};
use snob::mc::{estimate_resolvent, ExpDecay, Observable};
use snob::sim::StepConfig;
use snob::{GPoint, SnobParams};

fn main() -> snob::Result<()> {
    let params = SnobParams::new(1.0)?;
    let alpha = 0.5;
    let x = GPoint::plus(0.5);
    let kinds = [KernelKind::Elastic, KernelKind::Snob, KernelKind::ThinLayer(0.01)];
    let kernels: Vec<KernelFn> = kinds.iter().map(|k| KernelFn::new(*k, alpha, params)).collect::<Result<_, _>>()?;
    println!("{:>6} {:>10} {:>10} {:>10}", "y", "elastic", "snob", "layer");
    for y in [-1.5, -0.5, -0.05, 0.05, 0.5, 1.5] {
        let y = GPoint::from_real(y, snob::Side::Plus)?;
        let row: Vec<f64> = kernels.iter().map(|k| k.eval(x, y)).collect::<Result<_, _>>()?;
        println!("{:>6.2} {:>10.6} {:>10.6} {:>10.6}", y.embed(), row[0], row[1], row[2]);
    }

    let quad = QuadratureSpec::with_tolerance(1e-12)?;
    let exact = resolvent_snob(&|p: GPoint| ExpDecay.eval(p), x, alpha, &params, &quad)?;
    let cfg = StepConfig::new(0.02, params)?;
    let est = estimate_resolvent(&ExpDecay, x, alpha, &params, &cfg, 50_000, 1)?;
    println!("G f for f = exp(-|y|): quadrature {exact:.6}, MC {:.6} +- {:.6}", est.mean, est.stderr);
    Ok(())
}
