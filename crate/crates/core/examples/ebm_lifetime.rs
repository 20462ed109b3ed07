//! Killing time of elastic Brownian motion: exact sampler against `psi`.

use snob::analytic::psi_ebm;
use snob::mc::{mean_and_stderr, run_paths};
use snob::sim::ebm_lifetime_exact;
use snob::SnobParams;

fn main() -> snob::Result<()> {
    let params = SnobParams::new(1.0)?;
    let alpha = 1.0;
    for (i, x) in [0.0, 0.5, 1.0, 2.0].into_iter().enumerate() {
        let v = run_paths(200_000, 7 + i as u64, |s| (-alpha * ebm_lifetime_exact(s, x, &params).unwrap()).exp());
        let (m, se) = mean_and_stderr(&v)?;
        let exact = psi_ebm(x, alpha, &params)?;
        println!("x = {x:.1}  MC {m:.5} +- {se:.5}  psi {exact:.5}");
    }
    Ok(())
}
