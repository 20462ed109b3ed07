//! Finite-difference residuals of the barrier conditions satisfied by the
//! resolvent: equal one-sided fluxes, and a jump `G f(0+) - G f(0-)` equal to
//! `2 / kappa` times the flux.

use serde::Serialize;

use super::quadrature::QuadratureSpec;
use super::snob::resolvent_snob;
use crate::error::{require_positive, Result};
use crate::space::{GPoint, Side, SnobParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterfaceResiduals {
    /// `grad G f(0+) - grad G f(0-)`.
    pub flux_gap: f64,
    /// `(kappa / 2) (G f(0+) - G f(0-)) - grad G f(0)`.
    pub jump_residual: f64,
    pub value_plus: f64,
    pub value_minus: f64,
    pub grad_plus: f64,
    pub grad_minus: f64,
}

/// Evaluates both residuals with one-sided differences of width `h` and
/// `h / 2` combined by Richardson extrapolation. Gradients are taken in the
/// embedded real coordinate; `grad G f(0)` is the mean of the two sides.
pub fn interface_residuals<F>(
    f: &F,
    alpha: f64,
    params: &SnobParams,
    quad: &QuadratureSpec,
    h: f64,
) -> Result<InterfaceResiduals>
where
    F: Fn(GPoint) -> f64 + ?Sized,
{
    require_positive("h", h)?;
    let g = |side: Side, m: f64| resolvent_snob(f, GPoint::from_parts_unchecked(side, m), alpha, params, quad);

    let one_sided = |side: Side| -> Result<(f64, f64)> {
        let g0 = g(side, 0.0)?;
        let coarse = (g(side, h)? - g0) / h;
        let fine = (g(side, 0.5 * h)? - g0) / (0.5 * h);
        // d/dx in the embedded coordinate; on the minus side x = -m
        Ok((g0, side.sign() * (2.0 * fine - coarse)))
    };

    let (value_plus, grad_plus) = one_sided(Side::Plus)?;
    let (value_minus, grad_minus) = one_sided(Side::Minus)?;
    let kappa = params.kappa();
    Ok(InterfaceResiduals {
        flux_gap: grad_plus - grad_minus,
        jump_residual: 0.5 * kappa * (value_plus - value_minus) - 0.5 * (grad_plus + grad_minus),
        value_plus,
        value_minus,
        grad_plus,
        grad_minus,
    })
}
