use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{invalid, require_positive, Result};
use crate::random::{bridge_crossing_prob, bridge_hit_time_unchecked, localtime_position_unchecked, sign_flip, RandomStream};
use crate::space::{GPoint, Side, SnobParams, TimeGrid, Trajectory};

/// Default cut-off, in units of `sqrt(dt)`, beyond which barrier contact
/// within one step is neglected.
pub const DEFAULT_CUTOFF: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepConfig {
    dt: f64,
    cutoff: f64,
    params: SnobParams,
}

impl StepConfig {
    pub fn new(dt: f64, params: SnobParams) -> Result<Self> {
        Self::with_cutoff(dt, DEFAULT_CUTOFF, params)
    }

    /// `cutoff >= 3` keeps the neglected contact probability per step below
    /// `2 Phi(-3)`.
    pub fn with_cutoff(dt: f64, cutoff: f64, params: SnobParams) -> Result<Self> {
        require_positive("dt", dt)?;
        if !(cutoff >= 3.0) || !cutoff.is_finite() {
            return Err(invalid("cutoff", cutoff, "must be finite and >= 3"));
        }
        Ok(Self { dt, cutoff, params })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn params(&self) -> &SnobParams {
        &self.params
    }

    /// Upper bound `Phi(-c)` on the probability that one step returns a
    /// different side than the exact transition would under a coupling.
    ///
    /// Skipped contact happens with probability at most `2 Phi(-c)`, and a
    /// side change after contact has probability at most `1/2`. The magnitude
    /// is exact on the skipped branch.
    pub fn neglected_flip_bound(&self) -> f64 {
        0.5 * erfc(self.cutoff / std::f64::consts::SQRT_2)
    }
}

/// Everything one step did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepReport {
    pub endpoint: GPoint,
    /// The path touched the barrier during the step.
    pub crossed: bool,
    /// First contact time within the step; `0` when the step started on the barrier.
    pub hit_time: Option<f64>,
    /// Local time accumulated at the barrier during the step.
    pub local_time: f64,
    pub side_out: Side,
}

/// How a step treats the side once the barrier was touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SideRule {
    /// Keep the side with probability `(1 + exp(-kappa l)) / 2`.
    Snap,
    /// Never change side (reflecting barrier).
    Reflect,
}

/// One exact transition of length `dt`.
///
/// 1. propose `y = x + sqrt(dt) G`;
/// 2. if `|x| >= c sqrt(dt)`, return `|y|` on the same side;
/// 3. if `x y > 0`, the bridge touched 0 with probability `exp(-2 x y / dt)`;
///    return `|y|` if it did not;
/// 4. otherwise sample the first contact time `z` of the bridge;
/// 5. from the barrier, draw local time and distance `(l, l - H)` over `dt - z`;
/// 6. keep the side iff `exp(-kappa l) >= 2U - 1`;
/// 7. return `(side, l - H)`.
pub fn snob_step(stream: &mut RandomStream, p: GPoint, cfg: &StepConfig) -> StepReport {
    step_inner(stream, p, cfg.dt, Some(cfg.cutoff), &cfg.params, SideRule::Snap)
}

pub(crate) fn step_inner(
    stream: &mut RandomStream,
    p: GPoint,
    dt: f64,
    cutoff: Option<f64>,
    params: &SnobParams,
    rule: SideRule,
) -> StepReport {
    let side_in = p.side();
    let x = p.magnitude();
    let sqdt = dt.sqrt();
    // Work on the side of x, where x >= 0.
    let y = x + sqdt * stream.standard_normal();

    let untouched = |m: f64| StepReport {
        endpoint: GPoint::from_parts_unchecked(side_in, m),
        crossed: false,
        hit_time: None,
        local_time: 0.0,
        side_out: side_in,
    };

    if cutoff.is_some_and(|c| x >= c * sqdt) {
        return untouched(y.abs());
    }

    let hit_time = if x == 0.0 {
        0.0
    } else {
        if y > 0.0 {
            let u = stream.uniform01();
            if u >= bridge_crossing_prob(x, y, dt) {
                return untouched(y);
            }
        }
        bridge_hit_time_unchecked(stream, x, y, dt)
    };

    let remaining = dt - hit_time;
    let (local_time, magnitude) = if remaining > 0.0 {
        let draw = localtime_position_unchecked(stream, remaining);
        (draw.local_time, draw.magnitude)
    } else {
        (0.0, 0.0)
    };
    let side_out = match rule {
        SideRule::Snap => sign_flip(stream, side_in, local_time, params),
        SideRule::Reflect => side_in,
    };
    StepReport {
        endpoint: GPoint::from_parts_unchecked(side_out, magnitude),
        crossed: true,
        hit_time: Some(hit_time),
        local_time,
        side_out,
    }
}

/// Exact draw of `(|B_t|, L_t)` for reflected Brownian motion started at
/// distance `x` from the barrier; returns `(distance, local time)`.
pub fn reflected_with_local_time(stream: &mut RandomStream, x: f64, t: f64) -> Result<(f64, f64)> {
    require_positive("t", t)?;
    let start = GPoint::new(Side::Plus, x)?;
    // With no cut-off and a reflecting side rule one step is exact for any t.
    let params = SnobParams::new(1.0)?;
    let r = step_inner(stream, start, t, None, &params, SideRule::Reflect);
    Ok((r.endpoint.magnitude(), r.local_time))
}

/// Iterates [`snob_step`] over `grid`.
pub fn snob_path(stream: &mut RandomStream, x0: GPoint, grid: &TimeGrid, params: &SnobParams) -> Result<Trajectory> {
    let cfg = StepConfig::new(grid.dt(), *params)?;
    Ok(snob_path_with_reports(stream, x0, grid, &cfg)?.0)
}

/// Like [`snob_path`] with an explicit step configuration, also returning
/// the per-step reports.
pub fn snob_path_with_reports(
    stream: &mut RandomStream,
    x0: GPoint,
    grid: &TimeGrid,
    cfg: &StepConfig,
) -> Result<(Trajectory, Vec<StepReport>)> {
    if (grid.dt() - cfg.dt()).abs() > 1e-12 * grid.dt() {
        return Err(invalid("dt", cfg.dt(), "step configuration does not match the grid"));
    }
    let n = grid.n_steps();
    let mut points = Vec::with_capacity(n + 1);
    let mut local = Vec::with_capacity(n + 1);
    let mut reports = Vec::with_capacity(n);
    let mut current = x0;
    let mut acc = 0.0;
    points.push(current);
    local.push(acc);
    for _ in 0..n {
        let report = snob_step(stream, current, cfg);
        acc += report.local_time;
        current = report.endpoint;
        points.push(current);
        local.push(acc);
        reports.push(report);
    }
    Ok((Trajectory::new(*grid, points, local)?, reports))
}

/// Position after time `t` using full steps of `cfg.dt()` and one shorter
/// final step for the remainder.
pub(crate) fn advance(stream: &mut RandomStream, x0: GPoint, t: f64, cfg: &StepConfig) -> (GPoint, usize) {
    let dt = cfg.dt();
    let full = (t / dt).floor();
    let mut current = x0;
    let n = full as usize;
    for _ in 0..n {
        current = snob_step(stream, current, cfg).endpoint;
    }
    let rest = t - full * dt;
    if rest > 1e-12 * dt {
        current = step_inner(stream, current, rest, Some(cfg.cutoff()), cfg.params(), SideRule::Snap).endpoint;
        (current, n + 1)
    } else {
        (current, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_from_barrier_never_crosses() {
        let params = SnobParams::new(1.0).unwrap();
        let cfg = StepConfig::new(0.01, params).unwrap();
        let p = GPoint::plus(10.0);
        let mut s = RandomStream::new(9, 1);
        let mut t = RandomStream::new(9, 1);
        for _ in 0..100 {
            let r = snob_step(&mut s, p, &cfg);
            assert!(!r.crossed && r.hit_time.is_none() && r.local_time == 0.0);
            assert_eq!(r.side_out, Side::Plus);
            let g = t.standard_normal();
            assert_eq!(r.endpoint.magnitude(), (10.0 + 0.1 * g).abs());
        }
    }

    #[test]
    fn report_invariants() {
        let params = SnobParams::new(2.0).unwrap();
        let cfg = StepConfig::new(0.5, params).unwrap();
        let mut s = RandomStream::new(1, 2);
        for k in 0..20_000 {
            let p = GPoint::new(if k % 2 == 0 { Side::Plus } else { Side::Minus }, 0.001 * (k % 1000) as f64).unwrap();
            let r = snob_step(&mut s, p, &cfg);
            assert_eq!(r.side_out, r.endpoint.side());
            if r.crossed {
                let z = r.hit_time.unwrap();
                assert!((0.0..cfg.dt()).contains(&z));
                assert!(r.local_time >= 0.0);
            } else {
                assert!(r.hit_time.is_none());
                assert_eq!(r.local_time, 0.0);
                assert_eq!(r.side_out, p.side());
            }
        }
    }

    #[test]
    fn impermeable_barrier_never_flips() {
        let params = SnobParams::impermeable();
        let grid = TimeGrid::new(0.05, 200).unwrap();
        let cfg = StepConfig::new(0.05, params).unwrap();
        // about 2.5% of paths from 0.1 never reach the barrier within t = 10
        let mut touched = 0;
        for id in 0..50 {
            let mut s = RandomStream::new(3, id);
            let (traj, _) = snob_path_with_reports(&mut s, GPoint::minus(0.1), &grid, &cfg).unwrap();
            assert_eq!(traj.flip_count(), 0);
            if *traj.cumulative_local_time().last().unwrap() > 0.0 {
                touched += 1;
            }
        }
        assert!(touched >= 45, "{touched}");
    }

    #[test]
    fn flips_only_on_contact() {
        let params = SnobParams::new(3.0).unwrap();
        let grid = TimeGrid::new(0.1, 100).unwrap();
        let cfg = StepConfig::new(0.1, params).unwrap();
        let mut s = RandomStream::new(4, 0);
        let (traj, reports) = snob_path_with_reports(&mut s, GPoint::plus(0.2), &grid, &cfg).unwrap();
        for (k, w) in traj.points().windows(2).enumerate() {
            if w[0].side() != w[1].side() {
                assert!(reports[k].crossed);
            }
            let dl = traj.cumulative_local_time()[k + 1] - traj.cumulative_local_time()[k];
            if dl > 0.0 {
                assert!(reports[k].crossed);
            }
        }
        assert!(traj.flip_count() > 0);
    }

    #[test]
    fn config_validation() {
        let params = SnobParams::new(1.0).unwrap();
        assert!(StepConfig::new(0.0, params).is_err());
        assert!(StepConfig::with_cutoff(0.1, 2.5, params).is_err());
        let cfg = StepConfig::new(0.1, params).unwrap();
        assert!((cfg.neglected_flip_bound() - 3.167e-5).abs() < 1e-7);
        let grid = TimeGrid::new(0.2, 3).unwrap();
        let mut s = RandomStream::new(0, 0);
        assert!(snob_path_with_reports(&mut s, GPoint::plus(1.0), &grid, &cfg).is_err());
    }

    #[test]
    fn advance_handles_partial_step() {
        let params = SnobParams::new(1.0).unwrap();
        let cfg = StepConfig::new(0.1, params).unwrap();
        let mut s = RandomStream::new(0, 0);
        let (_, steps) = advance(&mut s, GPoint::plus(0.3), 0.35, &cfg);
        assert_eq!(steps, 4);
        let (_, steps) = advance(&mut s, GPoint::plus(0.3), 0.05, &cfg);
        assert_eq!(steps, 1);
    }
}
