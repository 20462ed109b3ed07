//! Joint law of `(|B_t|, L_t)` for reflected Brownian motion with its barrier
//! local time, and the semigroup of the snapping out motion evaluated from it.
//!
//! From a start `x >= 0` the law has an atom at `L_t = 0` (the barrier was not
//! reached) with sub-density `phi_t(y - x) - phi_t(y + x)` in `y`, and for
//! `l > 0` the density `2 (x + y + l) / sqrt(2 pi t^3) exp(-(x + y + l)^2 / (2 t))`.

use std::f64::consts::PI;

use statrs::function::erf::erfc;

use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{require_nonnegative, require_positive, Result};
use crate::space::{GPoint, SnobParams};

/// Gaussian tail cut-off in standard deviations for the semigroup integrals.
const GAUSS_RADIUS: f64 = 9.0;

fn gaussian(z: f64, t: f64) -> f64 {
    (-z * z / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// Absolutely continuous part of the density of `(|B_t|, L_t)` at `(y, l)`,
/// `l > 0`, for a start at distance `x` from the barrier.
pub fn joint_density_refbm_localtime(t: f64, x: f64, y: f64, l: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_nonnegative("x", x)?;
    require_nonnegative("y", y)?;
    require_nonnegative("l", l)?;
    Ok(joint_density_unchecked(t, x, y, l))
}

pub(crate) fn joint_density_unchecked(t: f64, x: f64, y: f64, l: f64) -> f64 {
    let u = x + y + l;
    2.0 * u / (2.0 * PI * t * t * t).sqrt() * (-u * u / (2.0 * t)).exp()
}

/// Sub-density in `y` of `|B_t|` on the event `L_t = 0`.
pub fn no_contact_density(t: f64, x: f64, y: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_nonnegative("x", x)?;
    require_nonnegative("y", y)?;
    Ok(gaussian(y - x, t) - gaussian(y + x, t))
}

/// `P_x(L_t = 0) = 2 Phi(x / sqrt t) - 1`.
pub fn no_contact_mass(t: f64, x: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_nonnegative("x", x)?;
    Ok(1.0 - erfc(x / (2.0 * t).sqrt()))
}

/// `P_t f(x)` for the snapping out motion:
/// `E[(1 + e^{-kappa L_t})/2 f(s |B_t|)] + E[(1 - e^{-kappa L_t})/2 f(-s |B_t|)]`
/// with `s` the side of `x`, integrated against the law of `(|B_t|, L_t)`.
pub fn semigroup_snob<F>(f: &F, x: GPoint, t: f64, params: &SnobParams, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(GPoint) -> f64 + ?Sized,
{
    require_positive("t", t)?;
    let kappa = params.kappa();
    let a = x.magnitude();
    let side = x.side();
    let reach = quad.radius().unwrap_or(GAUSS_RADIUS * t.sqrt());
    let y_max = a + reach;
    let at = |sd, y: f64| f(GPoint::from_parts_unchecked(sd, y));

    // Split the tolerance between the atom and the two nested integrals.
    let outer_spec = QuadratureSpec::with_tolerance(quad.tolerance() / 3.0)?.max_subdivisions(quad.subdivisions())?;
    let inner_spec = QuadratureSpec::with_tolerance(quad.tolerance() / (3.0 * y_max))?
        .max_subdivisions(quad.subdivisions())?;

    let atom = integrate(
        &|y: f64| (gaussian(y - a, t) - gaussian(y + a, t)) * at(side, y),
        0.0,
        y_max,
        &[a],
        &outer_spec,
    )?
    .value;

    // For each y, the l-integrals of the two weights are computed together;
    // failures inside the closure are carried out through a cell.
    let failure = std::cell::Cell::new(None);
    let weighted = |y: f64| -> f64 {
        let l_max = (y_max - y).max(0.0) + reach;
        let keep = integrate(
            &|l: f64| joint_density_unchecked(t, a, y, l) * 0.5 * (1.0 + (-kappa * l).exp()),
            0.0,
            l_max,
            &[],
            &inner_spec,
        );
        let total = integrate(
            &|l: f64| joint_density_unchecked(t, a, y, l),
            0.0,
            l_max,
            &[],
            &inner_spec,
        );
        match (keep, total) {
            (Ok(k), Ok(tot)) => k.value * at(side, y) + (tot.value - k.value) * at(side.flip(), y),
            (Err(e), _) | (_, Err(e)) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let contact = integrate(&weighted, 0.0, y_max, &[], &outer_spec)?.value;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(atom + contact)
}
