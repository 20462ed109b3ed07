//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, require_positive, Result, SnobError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Truncation radius, absolute tolerance and subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    radius: Option<f64>,
    tolerance: f64,
    max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radius: None,
            tolerance: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(radius: f64, tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        require_positive("radius", radius)?;
        Ok(Self {
            radius: Some(radius),
            ..Self::with_tolerance(tolerance)?.max_subdivisions(max_subdivisions)?
        })
    }

    /// Automatic radius, chosen per integral from its decay rate.
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        require_positive("tolerance", tolerance)?;
        Ok(Self {
            tolerance,
            ..Self::default()
        })
    }

    pub fn max_subdivisions(self, max_subdivisions: usize) -> Result<Self> {
        if max_subdivisions == 0 {
            return Err(invalid("max_subdivisions", 0.0, "must be >= 1"));
        }
        Ok(Self {
            max_subdivisions,
            ..self
        })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Radius beyond which `exp(-rate r)` is below `tolerance / 10`, unless an
    /// explicit radius was given.
    pub fn radius_for_rate(&self, rate: f64) -> f64 {
        self.radius
            .unwrap_or_else(|| (10.0 / self.tolerance).ln() / rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod_sum = WGK[7] * fc;
    let mut gauss_sum = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod_sum += WGK[j] * pair;
        if j % 2 == 1 {
            gauss_sum += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod_sum * half,
        error: ((kronrod_sum - gauss_sum) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, splitting at every interior breakpoint first.
pub fn integrate<F>(f: &F, a: f64, b: f64, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<QuadratureValue>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid("bounds", if a.is_finite() { b } else { a }, "must be finite"));
    }
    if a == b {
        return Ok(QuadratureValue {
            value: 0.0,
            error: 0.0,
        });
    }
    if a > b {
        let v = integrate(f, b, a, breakpoints, spec)?;
        return Ok(QuadratureValue {
            value: -v.value,
            error: v.error,
        });
    }

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut left = a;
    for &c in cuts.iter().chain(std::iter::once(&b)) {
        heap.push(kronrod(f, left, c));
        left = c;
    }

    let tolerance = spec.tolerance();
    let mut splits = 0;
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if error <= tolerance {
            return Ok(QuadratureValue { value, error });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if splits >= spec.subdivisions() || mid <= worst.a || mid >= worst.b {
            // Roundoff floor: error estimates this small cannot improve further.
            if error <= 1e3 * f64::EPSILON * value.abs().max(tolerance) {
                heap.push(worst);
                return Ok(QuadratureValue { value, error });
            }
            return Err(SnobError::QuadratureNonConvergence {
                lower: a,
                upper: b,
                error,
                tolerance,
            });
        }
        heap.push(kronrod(f, worst.a, mid));
        heap.push(kronrod(f, mid, worst.b));
        splits += 1;
    }
}
