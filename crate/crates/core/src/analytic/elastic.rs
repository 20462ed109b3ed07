//! Elastic (partially reflected) Brownian motion: killing-time Laplace
//! transform and resolvent density, plus the reflecting kernel it reduces to
//! when `kappa -> 0`.

use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{require_nonnegative, require_positive, Result};
use crate::space::{GPoint, SnobParams};

/// `sqrt(2 alpha)`, the decay rate of every resolvent kernel.
pub(crate) fn decay_rate(alpha: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    Ok((2.0 * alpha).sqrt())
}

/// `E_x[exp(-alpha k)]` for the killing time `k` of the elastic motion.
pub fn psi_ebm(x: f64, alpha: f64, params: &SnobParams) -> Result<f64> {
    require_nonnegative("x", x)?;
    let mu = decay_rate(alpha)?;
    Ok(psi_unchecked(x, mu, params.kappa()))
}

pub(crate) fn psi_unchecked(x: f64, mu: f64, kappa: f64) -> f64 {
    kappa / (mu + kappa) * (-mu * x).exp()
}

/// Resolvent density of the elastic motion on `[0, inf)`.
pub fn g_elastic(x: f64, y: f64, alpha: f64, params: &SnobParams) -> Result<f64> {
    require_nonnegative("x", x)?;
    require_nonnegative("y", y)?;
    let mu = decay_rate(alpha)?;
    Ok(g_elastic_unchecked(x, y, mu, params.kappa()))
}

pub(crate) fn g_elastic_unchecked(x: f64, y: f64, mu: f64, kappa: f64) -> f64 {
    let reflection = (mu - kappa) / (mu + kappa);
    ((-mu * (x - y).abs()).exp() + reflection * (-mu * (x + y)).exp()) / mu
}

/// Resolvent density of reflected Brownian motion on `[0, inf)`.
pub fn g_reflected(x: f64, y: f64, alpha: f64) -> Result<f64> {
    require_nonnegative("x", x)?;
    require_nonnegative("y", y)?;
    let mu = decay_rate(alpha)?;
    Ok(((-mu * (x - y).abs()).exp() + (-mu * (x + y)).exp()) / mu)
}

/// Integrates `kernel(|x|, y) f(side(x) y)` over `y >= 0`.
pub(crate) fn one_sided_resolvent<F, K>(
    f: &F,
    x: GPoint,
    mu: f64,
    quad: &QuadratureSpec,
    kernel: K,
) -> Result<f64>
where
    F: Fn(GPoint) -> f64 + ?Sized,
    K: Fn(f64, f64) -> f64,
{
    let a = x.magnitude();
    let side = x.side();
    let upper = a + quad.radius_for_rate(mu);
    let integrand = |y: f64| kernel(a, y) * f(GPoint::from_parts_unchecked(side, y));
    Ok(integrate(&integrand, 0.0, upper, &[a], quad)?.value)
}

/// `G^el_alpha f(x)`: the elastic resolvent on the side of `x`.
pub fn resolvent_elastic<F>(f: &F, x: GPoint, alpha: f64, params: &SnobParams, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(GPoint) -> f64 + ?Sized,
{
    let mu = decay_rate(alpha)?;
    let kappa = params.kappa();
    one_sided_resolvent(f, x, mu, quad, |a, y| g_elastic_unchecked(a, y, mu, kappa))
}

/// Resolvent of reflected Brownian motion applied to `f` on the side of `x`.
pub fn resolvent_reflected<F>(f: &F, x: GPoint, alpha: f64, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(GPoint) -> f64 + ?Sized,
{
    let mu = decay_rate(alpha)?;
    one_sided_resolvent(f, x, mu, quad, |a, y| {
        ((-mu * (a - y).abs()).exp() + (-mu * (a + y)).exp()) / mu
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Side;

    fn params(kappa: f64) -> SnobParams {
        SnobParams::new(kappa).unwrap()
    }

    #[test]
    fn psi_reference_values() {
        // kappa = 1, mu = sqrt 2: exp(-sqrt2 / 2) / (sqrt2 + 1)
        let v = psi_ebm(0.5, 1.0, &params(1.0)).unwrap();
        assert!((v - 0.204_235_739).abs() < 1e-8, "{v}");
        let alpha: f64 = 0.72;
        let mu = (2.0 * alpha).sqrt();
        assert!((psi_ebm(0.0, alpha, &params(mu)).unwrap() - 0.5).abs() < 1e-15);
        assert!(psi_ebm(0.3, 1.0, &params(1e-12)).unwrap() < 1e-11);
        assert!(psi_ebm(-0.1, 1.0, &params(1.0)).is_err());
        assert!(psi_ebm(0.1, 0.0, &params(1.0)).is_err());
    }

    #[test]
    fn psi_is_decreasing() {
        let p = params(1.3);
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let v = psi_ebm(0.1 * k as f64, 0.8, &p).unwrap();
            assert!(v < last && v > 0.0 && v < 1.0);
            last = v;
        }
        assert!(psi_ebm(0.4, 2.0, &p).unwrap() < psi_ebm(0.4, 1.0, &p).unwrap());
    }

    #[test]
    fn elastic_kernel_at_boundary() {
        let v = g_elastic(1.0, 0.0, 0.5, &params(1.0)).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!(g_elastic(-1.0, 0.0, 0.5, &params(1.0)).is_err());
    }

    #[test]
    fn elastic_kernel_symmetric_and_reflecting_limit() {
        let p = params(0.7);
        for i in 0..10 {
            for j in 0..10 {
                let (x, y) = (0.3 * i as f64, 0.25 * j as f64);
                let a = g_elastic(x, y, 0.9, &p).unwrap();
                let b = g_elastic(y, x, 0.9, &p).unwrap();
                assert!((a - b).abs() < 1e-14);
                let lim = g_elastic(x, y, 0.9, &params(1e-13)).unwrap();
                assert!((lim - g_reflected(x, y, 0.9).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn robin_condition() {
        let p = params(1.7);
        let (x, alpha) = (0.8, 0.6);
        let g0 = g_elastic(x, 0.0, alpha, &p).unwrap();
        let mut last = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let d = (g_elastic(x, h, alpha, &p).unwrap() - g0) / h;
            let residual = (d - p.kappa() * g0).abs();
            assert!(residual < last);
            last = residual;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn resolvent_of_constant_on_own_side() {
        let p = params(1.0);
        let quad = QuadratureSpec::with_tolerance(1e-11).unwrap();
        for (side, a) in [(Side::Plus, 0.4), (Side::Minus, 1.3)] {
            let x = GPoint::new(side, a).unwrap();
            let own = move |q: GPoint| if q.side() == side { 1.0 } else { 0.0 };
            let v = resolvent_elastic(&own, x, 1.0, &p, &quad).unwrap();
            let expected = (1.0 - psi_ebm(a, 1.0, &p).unwrap()) / 1.0;
            assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
        }
        let zero = |_: GPoint| 0.0;
        assert_eq!(resolvent_elastic(&zero, GPoint::plus(0.5), 1.0, &p, &quad).unwrap(), 0.0);
    }

    #[test]
    fn resolvent_odd_function() {
        let p = params(2.0);
        let quad = QuadratureSpec::with_tolerance(1e-11).unwrap();
        let odd = |q: GPoint| q.side().sign() * (-q.magnitude()).exp();
        let plus = resolvent_elastic(&odd, GPoint::plus(0.6), 0.7, &p, &quad).unwrap();
        let minus = resolvent_elastic(&odd, GPoint::minus(0.6), 0.7, &p, &quad).unwrap();
        assert!((plus + minus).abs() < 1e-12);
    }
}
