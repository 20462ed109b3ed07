//! Resolvent of the snapping out motion, assembled from the elastic resolvent
//! plus the rebirth term `kappa exp(-mu |x|) / (2 mu) * (G^el f(0+) + G^el f(0-))`.

use serde::{Deserialize, Serialize};

use super::elastic::{decay_rate, g_elastic_unchecked, one_sided_resolvent};
use super::quadrature::QuadratureSpec;
use super::thin_layer::g_thinlayer;
use crate::error::{invalid, require_positive, Result};
use crate::space::{GPoint, SnobParams};

/// Cross-barrier part of the kernel, `kappa exp(-mu (a + b)) / (mu (mu + kappa))`.
pub(crate) fn rebirth_term(a: f64, b: f64, mu: f64, kappa: f64) -> f64 {
    kappa * (-mu * (a + b)).exp() / (mu * (mu + kappa))
}

pub(crate) fn g_snob_unchecked(x: GPoint, y: GPoint, mu: f64, kappa: f64) -> f64 {
    let (a, b) = (x.magnitude(), y.magnitude());
    let rebirth = rebirth_term(a, b, mu, kappa);
    if x.side() == y.side() {
        g_elastic_unchecked(a, b, mu, kappa) + rebirth
    } else {
        rebirth
    }
}

/// Resolvent density of the snapping out motion on the split line.
pub fn g_snob(x: GPoint, y: GPoint, alpha: f64, params: &SnobParams) -> Result<f64> {
    let mu = decay_rate(alpha)?;
    Ok(g_snob_unchecked(x, y, mu, params.kappa()))
}

/// `G_alpha f(x)`, integrating the kernel over both sides of the barrier.
pub fn resolvent_snob<F>(f: &F, x: GPoint, alpha: f64, params: &SnobParams, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(GPoint) -> f64 + ?Sized,
{
    let mu = decay_rate(alpha)?;
    let kappa = params.kappa();
    let own = one_sided_resolvent(f, x, mu, quad, |a, y| {
        g_elastic_unchecked(a, y, mu, kappa) + rebirth_term(a, y, mu, kappa)
    })?;
    // The cross term depends on |x| only through a constant factor, so it is
    // integrated from the opposite face and rescaled.
    let a = x.magnitude();
    let opposite = GPoint::origin(x.side().flip());
    let cross = one_sided_resolvent(f, opposite, mu, quad, |_, y| rebirth_term(0.0, y, mu, kappa))?;
    Ok(own + (-mu * a).exp() * cross)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelKind {
    Elastic,
    Snob,
    /// Layer of half-width `eps` around the barrier.
    ThinLayer(f64),
}

/// A resolvent density with the parameters it was evaluated for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFn {
    kind: KernelKind,
    alpha: f64,
    params: SnobParams,
    mu: f64,
}

impl KernelFn {
    pub fn new(kind: KernelKind, alpha: f64, params: SnobParams) -> Result<Self> {
        let mu = decay_rate(alpha)?;
        if let KernelKind::ThinLayer(eps) = kind {
            require_positive("eps", eps)?;
        }
        Ok(Self {
            kind,
            alpha,
            params,
            mu,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn params(&self) -> &SnobParams {
        &self.params
    }

    /// Density at `y` for a start at `x` (1/length).
    ///
    /// The elastic kernel never crosses the barrier and is 0 across it. The
    /// thin-layer kernel lives on the real line and is evaluated at the
    /// embedded coordinates; one of them must lie outside the layer.
    pub fn eval(&self, x: GPoint, y: GPoint) -> Result<f64> {
        let kappa = self.params.kappa();
        match self.kind {
            KernelKind::Elastic => Ok(if x.side() == y.side() {
                g_elastic_unchecked(x.magnitude(), y.magnitude(), self.mu, kappa)
            } else {
                0.0
            }),
            KernelKind::Snob => Ok(g_snob_unchecked(x, y, self.mu, kappa)),
            KernelKind::ThinLayer(eps) => {
                let (xr, yr) = (x.embed(), y.embed());
                if xr.abs() > eps {
                    g_thinlayer(xr, yr, self.alpha, &self.params, eps)
                } else if yr.abs() > eps {
                    g_thinlayer(yr, xr, self.alpha, &self.params, eps)
                } else {
                    Err(invalid("x", xr, "one endpoint must lie outside the layer"))
                }
            }
        }
    }
}
