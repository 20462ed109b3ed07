//! Reproducible random streams and the distribution primitives used by the
//! exact one-step sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{invalid, require_nonnegative, require_positive, Result};
use crate::space::{Side, SnobParams};

/// A counter-based random stream keyed by `(seed, stream_id)`.
///
/// The ChaCha block counter makes the output a pure function of the key, so
/// path `i` of an estimator always consumes stream `i` no matter which worker
/// thread runs it.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn fair_coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Normal variate with the given mean and variance (not standard deviation).
    pub fn gauss(&mut self, mean: f64, variance: f64) -> Result<f64> {
        require_nonnegative("variance", variance)?;
        if !mean.is_finite() {
            return Err(invalid("mean", mean, "must be finite"));
        }
        let z = self.standard_normal();
        if variance == 0.0 {
            return Ok(mean);
        }
        Ok(mean + variance.sqrt() * z)
    }

    /// Exponential variate with the given rate (mean `1 / rate`).
    pub fn expo(&mut self, rate: f64) -> Result<f64> {
        require_positive("rate", rate)?;
        Ok(self.standard_exp() / rate)
    }

    pub(crate) fn standard_exp(&mut self) -> f64 {
        Exp1.sample(&mut self.rng)
    }
}

/// Hands out [`RandomStream`]s for a fixed seed. Cheap to copy and share.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamFactory {
    seed: u64,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, stream_id: u64) -> RandomStream {
        RandomStream::new(self.seed, stream_id)
    }
}

/// Inverse Gaussian variate with mean `mu` and shape `lambda`, density
/// `sqrt(lambda / (2 pi x^3)) exp(-lambda (x - mu)^2 / (2 mu^2 x))`.
///
/// Transformation with multiple roots: the smaller root of the chi-square
/// transform is accepted with probability `mu / (mu + x)`, otherwise the
/// conjugate root `mu^2 / x` is returned.
pub fn inverse_gaussian(stream: &mut RandomStream, mu: f64, lambda: f64) -> Result<f64> {
    require_positive("mu", mu)?;
    require_positive("lambda", lambda)?;
    Ok(inverse_gaussian_unchecked(stream, mu, lambda))
}

pub(crate) fn inverse_gaussian_unchecked(stream: &mut RandomStream, mu: f64, lambda: f64) -> f64 {
    let n = stream.standard_normal();
    let w = mu * n * n / (2.0 * lambda);
    // mu * (1 + w - sqrt(w^2 + 2w)), rewritten without cancellation
    let small_root = mu / (1.0 + w + (w * (w + 2.0)).sqrt());
    let u = stream.uniform01();
    if u * (mu + small_root) <= mu {
        small_root
    } else {
        mu * (mu / small_root)
    }
}

/// Probability that a Brownian bridge from `x` to `y` over `dt` touches 0.
pub fn bridge_crossing_prob(x: f64, y: f64, dt: f64) -> f64 {
    let xy = x * y;
    if xy <= 0.0 {
        1.0
    } else {
        (-2.0 * xy / dt).exp()
    }
}

/// First time in `(0, dt)` at which a Brownian bridge from `x` to `y` hits 0,
/// given that it does.
///
/// With `g = zeta / (dt - zeta)`, the hitting time density becomes an inverse
/// Gaussian in `g` with mean `|x| / |y|` and shape `x^2 / dt`. When `y = 0`
/// the mean is infinite and `g` is the Levy limit `x^2 / (dt N^2)`.
pub fn bridge_hit_time(stream: &mut RandomStream, x: f64, y: f64, dt: f64) -> Result<f64> {
    require_positive("dt", dt)?;
    if !x.is_finite() || x == 0.0 {
        return Err(invalid("x", x, "must be finite and nonzero"));
    }
    if !y.is_finite() {
        return Err(invalid("y", y, "must be finite"));
    }
    Ok(bridge_hit_time_unchecked(stream, x, y, dt))
}

pub(crate) fn bridge_hit_time_unchecked(stream: &mut RandomStream, x: f64, y: f64, dt: f64) -> f64 {
    let shape = x * x / dt;
    let g = if y == 0.0 {
        let n = stream.standard_normal();
        shape / (n * n)
    } else {
        inverse_gaussian_unchecked(stream, (x / y).abs(), shape)
    };
    let zeta = dt / (1.0 + g.recip());
    if zeta >= dt {
        prev_below(dt)
    } else if zeta <= 0.0 {
        f64::MIN_POSITIVE
    } else {
        zeta
    }
}

fn prev_below(v: f64) -> f64 {
    f64::from_bits(v.to_bits() - 1)
}

/// One draw of barrier local time and distance to the barrier after time `r`
/// for a reflected Brownian motion started on the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimeDraw {
    /// Local time accumulated at the barrier.
    pub local_time: f64,
    /// Distance to the barrier at time `r`.
    pub magnitude: f64,
    /// The Gaussian driver `H ~ N(0, r)`; `magnitude = local_time - h`.
    pub h: f64,
}

/// Samples `(L_r, |B_r|)` under a start on the barrier as `(l, l - H)` with
/// `l = (H + sqrt(V + H^2)) / 2`, `H ~ N(0, r)` and `V` exponential with
/// mean `2 r`.
pub fn localtime_position(stream: &mut RandomStream, r: f64) -> Result<LocalTimeDraw> {
    require_positive("r", r)?;
    Ok(localtime_position_unchecked(stream, r))
}

pub(crate) fn localtime_position_unchecked(stream: &mut RandomStream, r: f64) -> LocalTimeDraw {
    let h = r.sqrt() * stream.standard_normal();
    let v = 2.0 * r * stream.standard_exp();
    let root = (v + h * h).sqrt();
    let local_time = 0.5 * (h + root);
    // (root - h) / 2 computed directly keeps it >= 0 under rounding
    let magnitude = 0.5 * (root - h);
    LocalTimeDraw {
        local_time,
        magnitude,
        h,
    }
}

/// Keeps `side` when `exp(-kappa l) >= 2U - 1`, i.e. with probability
/// `(1 + exp(-kappa l)) / 2`; flips it otherwise.
pub fn sign_flip(stream: &mut RandomStream, side: Side, local_time: f64, params: &SnobParams) -> Side {
    let u = stream.uniform01();
    if (-params.kappa() * local_time).exp() >= 2.0 * u - 1.0 {
        side
    } else {
        side.flip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = RandomStream::new(11, 3);
            (0..8).map(|_| s.uniform01()).collect()
        };
        let b: Vec<f64> = {
            let mut s = StreamFactory::new(11).stream(3);
            (0..8).map(|_| s.uniform01()).collect()
        };
        let c: Vec<f64> = {
            let mut s = RandomStream::new(11, 4);
            (0..8).map(|_| s.uniform01()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_gauss() {
        let mut s = RandomStream::new(1, 0);
        assert_eq!(s.gauss(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(s.gauss(2.5, 0.0).unwrap(), 2.5);
        assert!(s.gauss(0.0, -1.0).is_err());
        assert!(s.expo(0.0).is_err());
    }

    #[test]
    fn uniform_is_half_open() {
        let mut s = RandomStream::new(5, 5);
        for _ in 0..100_000 {
            let u = s.uniform01();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn crossing_probability_cases() {
        assert!((bridge_crossing_prob(1.0, 1.0, 2.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(bridge_crossing_prob(1.0, -0.3, 0.7), 1.0);
        assert_eq!(bridge_crossing_prob(0.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn hit_time_support_and_errors() {
        let mut s = RandomStream::new(2, 0);
        for _ in 0..10_000 {
            let z = bridge_hit_time(&mut s, 1.0, 0.5, 1.0).unwrap();
            assert!(z > 0.0 && z < 1.0);
        }
        for _ in 0..1000 {
            let z = bridge_hit_time(&mut s, 0.3, 0.0, 1.0).unwrap();
            assert!(z > 0.0 && z < 1.0);
        }
        assert!(bridge_hit_time(&mut s, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn localtime_draws_are_nonnegative() {
        let mut s = RandomStream::new(3, 0);
        for _ in 0..1_000_000 {
            let d = localtime_position_unchecked(&mut s, 1.0);
            assert!(d.local_time >= 0.0 && d.magnitude >= 0.0);
        }
        assert!(localtime_position(&mut s, 0.0).is_err());
    }

    #[test]
    fn zero_local_time_never_flips() {
        let params = SnobParams::new(3.0).unwrap();
        let mut s = RandomStream::new(4, 0);
        for _ in 0..10_000 {
            assert_eq!(sign_flip(&mut s, Side::Minus, 0.0, &params), Side::Minus);
        }
    }

    #[test]
    fn ig_rejects_bad_parameters() {
        let mut s = RandomStream::new(0, 0);
        assert!(inverse_gaussian(&mut s, 0.0, 1.0).is_err());
        assert!(inverse_gaussian(&mut s, 1.0, -1.0).is_err());
        assert!(inverse_gaussian(&mut s, 1.0, 1.0).unwrap() > 0.0);
    }
}
