//! Bounded test functions on the split line.

use crate::space::{GPoint, Side};

/// A bounded function on the split line with a known bound, used by the
/// estimators to size bias terms.
pub trait Observable: Sync {
    fn eval(&self, p: GPoint) -> f64;

    /// `sup |f|`.
    fn sup_norm(&self) -> f64;

    /// `sup f - inf f`.
    fn oscillation(&self) -> f64 {
        2.0 * self.sup_norm()
    }

    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl Observable for Constant {
    fn eval(&self, _: GPoint) -> f64 {
        self.0
    }

    fn sup_norm(&self) -> f64 {
        self.0.abs()
    }

    fn oscillation(&self) -> f64 {
        0.0
    }

    fn name(&self) -> String {
        format!("constant({})", self.0)
    }
}

/// `1` on one side of the barrier, `0` on the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideIndicator(pub Side);

impl Observable for SideIndicator {
    fn eval(&self, p: GPoint) -> f64 {
        if p.side() == self.0 {
            1.0
        } else {
            0.0
        }
    }

    fn sup_norm(&self) -> f64 {
        1.0
    }

    fn oscillation(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        format!("side_indicator({})", self.0)
    }
}

/// `exp(-|x|)`, the same on both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpDecay;

impl Observable for ExpDecay {
    fn eval(&self, p: GPoint) -> f64 {
        (-p.magnitude()).exp()
    }

    fn sup_norm(&self) -> f64 {
        1.0
    }

    fn oscillation(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        "exp_decay".to_string()
    }
}

/// `(1 - u^2)^2` with `u = (|x| - center) / half_width`, on one side only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedBump {
    pub side: Side,
    pub center: f64,
    pub half_width: f64,
}

impl OneSidedBump {
    pub fn new(side: Side, center: f64, half_width: f64) -> Self {
        Self {
            side,
            center,
            half_width,
        }
    }
}

impl Observable for OneSidedBump {
    fn eval(&self, p: GPoint) -> f64 {
        if p.side() != self.side {
            return 0.0;
        }
        let u = (p.magnitude() - self.center) / self.half_width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            let w = 1.0 - u * u;
            w * w
        }
    }

    fn sup_norm(&self) -> f64 {
        1.0
    }

    fn oscillation(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        format!("bump({}, {}, {})", self.side, self.center, self.half_width)
    }
}

/// Wraps a closure together with a bound on its absolute value.
pub struct FnObservable<F> {
    f: F,
    bound: f64,
    name: String,
}

impl<F: Fn(GPoint) -> f64 + Sync> FnObservable<F> {
    pub fn new(name: impl Into<String>, bound: f64, f: F) -> Self {
        Self {
            f,
            bound,
            name: name.into(),
        }
    }
}

impl<F: Fn(GPoint) -> f64 + Sync> Observable for FnObservable<F> {
    fn eval(&self, p: GPoint) -> f64 {
        (self.f)(p)
    }

    fn sup_norm(&self) -> f64 {
        self.bound
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// The three functions used throughout the verification suites: a side
/// indicator, `exp(-|x|)`, and a bump on the plus side.
pub fn dictionary() -> Vec<Box<dyn Observable>> {
    vec![
        Box::new(SideIndicator(Side::Plus)),
        Box::new(ExpDecay),
        Box::new(OneSidedBump::new(Side::Plus, 1.0, 0.75)),
    ]
}
