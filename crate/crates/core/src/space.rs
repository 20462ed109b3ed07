//! The split line `(-inf, 0-] U [0+, inf)` and the parameter types shared by
//! every other module.
//!
//! A point keeps its side tag separately from its magnitude, so the two faces
//! `0+` and `0-` of the barrier are distinct values.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_nonnegative, require_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    /// Side of a real number; zero (of either sign bit) is `Plus`.
    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

impl Neg for Side {
    type Output = Side;

    fn neg(self) -> Side {
        self.flip()
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A point of the split line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GPoint {
    side: Side,
    magnitude: f64,
}

impl GPoint {
    pub fn new(side: Side, magnitude: f64) -> Result<Self> {
        require_nonnegative("magnitude", magnitude)?;
        Ok(Self { side, magnitude })
    }

    /// Builds `(Plus, m)`; panics if `m` is negative or not finite.
    pub fn plus(magnitude: f64) -> Self {
        Self::new(Side::Plus, magnitude).expect("magnitude must be finite and >= 0")
    }

    /// Builds `(Minus, m)`; panics if `m` is negative or not finite.
    pub fn minus(magnitude: f64) -> Self {
        Self::new(Side::Minus, magnitude).expect("magnitude must be finite and >= 0")
    }

    /// The barrier face `0+` or `0-`.
    pub fn origin(side: Side) -> Self {
        Self {
            side,
            magnitude: 0.0,
        }
    }

    /// Lifts a real number; `side_at_zero` decides which face `0.0` lands on.
    pub fn from_real(x: f64, side_at_zero: Side) -> Result<Self> {
        if !x.is_finite() {
            return Err(invalid("x", x, "must be finite"));
        }
        let side = if x == 0.0 { side_at_zero } else { Side::of(x) };
        Ok(Self {
            side,
            magnitude: x.abs(),
        })
    }

    pub(crate) fn from_parts_unchecked(side: Side, magnitude: f64) -> Self {
        debug_assert!(magnitude >= 0.0 && magnitude.is_finite());
        Self { side, magnitude }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Signed real coordinate. Both faces of the origin map to `0.0`.
    pub fn embed(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.side.sign() * self.magnitude
        }
    }

    pub fn flip(&self) -> Self {
        Self {
            side: self.side.flip(),
            magnitude: self.magnitude,
        }
    }
}

impl fmt::Display for GPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.side, self.magnitude)
    }
}

/// Barrier permeability `kappa` (1/length).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnobParams {
    kappa: f64,
}

impl SnobParams {
    pub fn new(kappa: f64) -> Result<Self> {
        require_positive("kappa", kappa)?;
        Ok(Self { kappa })
    }

    /// Impermeable barrier, `kappa = 0`. Only reachable from inside the crate
    /// where it is used to check the reflecting limit.
    #[cfg(test)]
    pub(crate) fn impermeable() -> Self {
        Self { kappa: 0.0 }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Uniform time grid `0, dt, 2 dt, ..., n_steps dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        require_positive("dt", dt)?;
        if n_steps == 0 {
            return Err(invalid("n_steps", 0.0, "must be >= 1"));
        }
        Ok(Self { dt, n_steps })
    }

    /// Grid covering `[0, t_end]` with `n_steps` equal steps.
    pub fn spanning(t_end: f64, n_steps: usize) -> Result<Self> {
        require_positive("t_end", t_end)?;
        Self::new(t_end / n_steps as f64, n_steps)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn final_time(&self) -> f64 {
        self.time(self.n_steps)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.time(k))
    }
}

/// A sampled path on a [`TimeGrid`], with the accumulated barrier local time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    points: Vec<GPoint>,
    cumulative_local_time: Vec<f64>,
    flip_count: usize,
}

impl Trajectory {
    /// Assembles a trajectory; `flip_count` is recomputed from the side sequence.
    pub fn new(grid: TimeGrid, points: Vec<GPoint>, cumulative_local_time: Vec<f64>) -> Result<Self> {
        let expected = grid.n_steps() + 1;
        if points.len() != expected || cumulative_local_time.len() != expected {
            return Err(invalid(
                "points",
                points.len() as f64,
                "length must equal n_steps + 1",
            ));
        }
        if cumulative_local_time.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid(
                "cumulative_local_time",
                f64::NAN,
                "must be nondecreasing",
            ));
        }
        let flip_count = points
            .windows(2)
            .filter(|w| w[0].side() != w[1].side())
            .count();
        Ok(Self {
            grid,
            points,
            cumulative_local_time,
            flip_count,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn points(&self) -> &[GPoint] {
        &self.points
    }

    pub fn cumulative_local_time(&self) -> &[f64] {
        &self.cumulative_local_time
    }

    pub fn flip_count(&self) -> usize {
        self.flip_count
    }

    pub fn endpoint(&self) -> GPoint {
        *self.points.last().expect("trajectory is never empty")
    }
}
