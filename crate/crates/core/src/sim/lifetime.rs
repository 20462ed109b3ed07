use crate::error::{require_nonnegative, require_positive, Result};
use crate::random::RandomStream;
use crate::space::{GPoint, Side, SnobParams};

use super::step::{step_inner, SideRule};

/// Killing time of the elastic motion started at distance `x`.
///
/// The motion first reaches the barrier at `x^2 / G1^2`, then is killed when
/// its local time passes `xi ~ Exp(kappa)`, which takes the inverse local
/// time `xi^2 / G2^2`.
pub fn ebm_lifetime_exact(stream: &mut RandomStream, x: f64, params: &SnobParams) -> Result<f64> {
    require_nonnegative("x", x)?;
    let g1 = stream.standard_normal();
    let xi = stream.standard_exp() / params.kappa();
    let g2 = stream.standard_normal();
    let reach = if x == 0.0 { 0.0 } else { x * x / (g1 * g1) };
    Ok(reach + xi * xi / (g2 * g2))
}

/// Killing time read off a reflecting step sampler: the end of the first step
/// at which the accumulated local time exceeds an `Exp(kappa)` threshold.
/// Returns `None` if that does not happen before `t_max`.
pub fn ebm_lifetime_stepped(
    stream: &mut RandomStream,
    x: f64,
    params: &SnobParams,
    dt: f64,
    t_max: f64,
) -> Result<Option<f64>> {
    require_nonnegative("x", x)?;
    require_positive("dt", dt)?;
    require_positive("t_max", t_max)?;
    let threshold = stream.standard_exp() / params.kappa();
    let mut p = GPoint::new(Side::Plus, x)?;
    let mut local = 0.0;
    let n = (t_max / dt).ceil() as usize;
    for k in 1..=n {
        let r = step_inner(stream, p, dt, Some(super::DEFAULT_CUTOFF), params, SideRule::Reflect);
        local += r.local_time;
        p = r.endpoint;
        if local > threshold {
            return Ok(Some(k as f64 * dt));
        }
    }
    Ok(None)
}

/// Number of side changes accumulated over a local-time budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipConstruction {
    /// Changes at the jumps of a Poisson process of rate `kappa / 2` in local time.
    Thinned,
    /// Rebirth at the jumps of a rate-`kappa` process, each picking a side by a
    /// fair coin; only rebirths on the opposite side count.
    PiecedOut,
}

/// Counts side changes over local time `local_time` from a given side.
/// Returns `(number of side changes, final side)`.
pub fn event_flip_count(
    stream: &mut RandomStream,
    side: Side,
    local_time: f64,
    params: &SnobParams,
    construction: FlipConstruction,
) -> Result<(usize, Side)> {
    require_nonnegative("local_time", local_time)?;
    let kappa = params.kappa();
    let mut level = 0.0;
    let mut current = side;
    let mut flips = 0;
    loop {
        match construction {
            FlipConstruction::Thinned => {
                level += stream.standard_exp() / (0.5 * kappa);
                if level > local_time {
                    break;
                }
                current = current.flip();
                flips += 1;
            }
            FlipConstruction::PiecedOut => {
                level += stream.standard_exp() / kappa;
                if level > local_time {
                    break;
                }
                let reborn = if stream.fair_coin() { Side::Plus } else { Side::Minus };
                if reborn != current {
                    flips += 1;
                    current = reborn;
                }
            }
        }
    }
    Ok((flips, current))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifetimes_are_positive() {
        let p = SnobParams::new(1.0).unwrap();
        let mut s = RandomStream::new(5, 0);
        for _ in 0..10_000 {
            assert!(ebm_lifetime_exact(&mut s, 0.3, &p).unwrap() > 0.0);
        }
        assert!(ebm_lifetime_exact(&mut s, -0.3, &p).is_err());
    }

    #[test]
    fn stepped_lifetime_on_grid() {
        let p = SnobParams::new(2.0).unwrap();
        let mut s = RandomStream::new(5, 1);
        let mut seen = 0;
        for _ in 0..200 {
            if let Some(t) = ebm_lifetime_stepped(&mut s, 0.1, &p, 0.01, 20.0).unwrap() {
                let k = (t / 0.01).round();
                assert!((t - k * 0.01).abs() < 1e-12);
                seen += 1;
            }
        }
        assert!(seen > 150);
    }

    #[test]
    fn zero_budget_never_flips() {
        let p = SnobParams::new(5.0).unwrap();
        let mut s = RandomStream::new(0, 0);
        for c in [FlipConstruction::Thinned, FlipConstruction::PiecedOut] {
            assert_eq!(event_flip_count(&mut s, Side::Minus, 0.0, &p, c).unwrap(), (0, Side::Minus));
        }
    }

    #[test]
    fn parity_matches_final_side() {
        let p = SnobParams::new(1.5).unwrap();
        let mut s = RandomStream::new(0, 1);
        for c in [FlipConstruction::Thinned, FlipConstruction::PiecedOut] {
            for _ in 0..1000 {
                let (n, side) = event_flip_count(&mut s, Side::Plus, 2.0, &p, c).unwrap();
                assert_eq!(n % 2 == 1, side == Side::Minus);
            }
        }
    }
}
