//! Thin diffusive layer `[-eps, eps]` with diffusivity `kappa eps`: hitting
//! time transform of the origin and the resolvent density for starts outside
//! the layer.

use serde::Serialize;

use super::elastic::decay_rate;
use crate::error::{invalid, require_nonnegative, require_positive, Result, SnobError};
use crate::space::SnobParams;

/// Half-width of the layer in the stretched coordinate, `sqrt(eps / kappa)`.
pub fn layer_edge(params: &SnobParams, eps: f64) -> f64 {
    (eps / params.kappa()).sqrt()
}

/// Skewness `(1 - sqrt(kappa eps)) / (1 + sqrt(kappa eps))` at the layer edges
/// in the stretched coordinate.
pub fn skewness(params: &SnobParams, eps: f64) -> f64 {
    let s = (params.kappa() * eps).sqrt();
    (1.0 - s) / (1.0 + s)
}

/// Stretches the layer to unit diffusivity: slope `1 / sqrt(kappa eps)`
/// inside `[-eps, eps]`, slope 1 outside.
pub fn stretch(x: f64, params: &SnobParams, eps: f64) -> f64 {
    let edge = layer_edge(params, eps);
    if x.abs() <= eps {
        x * edge / eps
    } else {
        x.signum() * (x.abs() - eps + edge)
    }
}

/// Inverse of [`stretch`].
pub fn unstretch(y: f64, params: &SnobParams, eps: f64) -> f64 {
    let edge = layer_edge(params, eps);
    if y.abs() <= edge {
        y * eps / edge
    } else {
        y.signum() * (y.abs() - edge + eps)
    }
}

/// `E[exp(-alpha h_0)]` for the first hitting time `h_0` of the origin,
/// as a function of the stretched coordinate.
///
/// Inside the stretched layer the transform is `cosh(mu x) + beta sinh(mu x)`
/// and beyond it `gamma exp(-mu x)`; `beta` and `gamma` follow from continuity
/// and from the skew flux condition `sqrt(kappa eps) psi'(edge-) = psi'(edge+)`.
pub fn psi_thinlayer(x_stretched: f64, alpha: f64, params: &SnobParams, eps: f64) -> Result<f64> {
    require_nonnegative("x", x_stretched)?;
    require_positive("eps", eps)?;
    let mu = decay_rate(alpha)?;
    let coeffs = PsiCoefficients::new(mu, params, eps);
    Ok(coeffs.eval(x_stretched, mu))
}

/// [`psi_thinlayer`] for a start at `x > eps` in the original coordinate.
pub fn psi_thinlayer_unstretched(x: f64, alpha: f64, params: &SnobParams, eps: f64) -> Result<f64> {
    require_positive("eps", eps)?;
    if !(x > eps) {
        return Err(invalid("x", x, "must lie beyond the layer"));
    }
    psi_thinlayer(stretch(x, params, eps), alpha, params, eps)
}

/// `(beta, gamma)` together with the edge they were matched at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiCoefficients {
    pub beta: f64,
    pub gamma: f64,
    pub edge: f64,
}

impl PsiCoefficients {
    fn new(mu: f64, params: &SnobParams, eps: f64) -> Self {
        let edge = layer_edge(params, eps);
        let s = (params.kappa() * eps).sqrt();
        let (sh, ch) = ((mu * edge).sinh(), (mu * edge).cosh());
        let beta = -(ch + s * sh) / (sh + s * ch);
        let gamma = (mu * edge).exp() * (ch + beta * sh);
        Self { beta, gamma, edge }
    }

    /// Both branch values at the edge, `(inner, outer)`.
    pub fn edge_values(&self, mu: f64) -> (f64, f64) {
        let inner = (mu * self.edge).cosh() + self.beta * (mu * self.edge).sinh();
        let outer = self.gamma * (-mu * self.edge).exp();
        (inner, outer)
    }

    fn eval(&self, x: f64, mu: f64) -> f64 {
        if x > self.edge {
            self.gamma * (-mu * x).exp()
        } else {
            (mu * x).cosh() + self.beta * (mu * x).sinh()
        }
    }
}

pub fn psi_coefficients(alpha: f64, params: &SnobParams, eps: f64) -> Result<PsiCoefficients> {
    require_positive("eps", eps)?;
    let mu = decay_rate(alpha)?;
    Ok(PsiCoefficients::new(mu, params, eps))
}

/// Branch coefficients of the thin-layer resolvent density for a start
/// `x > eps`:
///
/// ```text
/// g(x, y) = C e^{-mu y}                            y > x
///         = A e^{-mu y} + B e^{mu y}               eps <= y <= x
///         = H e^{nu y} + E e^{-nu y}               |y| <= eps,  nu = mu / sqrt(kappa eps)
///         = F e^{mu y}                             y < -eps
/// ```
///
/// with the derivative jump at `y = x` normalized to `-2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinLayerCoefficients {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub e: f64,
    pub f: f64,
}

/// Same coefficients in a basis where every exponential is at most 1 on its
/// own branch; this is what the linear system is solved in.
#[derive(Debug, Clone, Copy)]
struct ScaledCoefficients {
    c: f64,
    a: f64,
    b: f64,
    h: f64,
    e: f64,
    f: f64,
}

struct LayerGeometry {
    x: f64,
    eps: f64,
    mu: f64,
    nu: f64,
    s: f64,
}

fn solve_scaled(geo: &LayerGeometry) -> Result<ScaledCoefficients> {
    let LayerGeometry { x, eps, mu, nu, s } = *geo;
    let ex = (-mu * (x - eps)).exp();
    let el = (-2.0 * nu * eps).exp();
    // unknowns: c, a, b, h, e, f
    #[rustfmt::skip]
    let mut m = [
        // continuity at y = x
        [1.0, -ex, -1.0, 0.0, 0.0, 0.0, 0.0],
        // g'(x+) - g'(x-) = -2
        [-mu, mu * ex, -mu, 0.0, 0.0, 0.0, -2.0],
        // continuity at y = eps
        [0.0, 1.0, ex, -1.0, -el, 0.0, 0.0],
        // kappa eps g'(eps-) = g'(eps+)
        [0.0, mu, -mu * ex, mu * s, -mu * s * el, 0.0, 0.0],
        // continuity at y = -eps
        [0.0, 0.0, 0.0, el, 1.0, -1.0, 0.0],
        // g'(-eps-) = kappa eps g'(-eps+)
        [0.0, 0.0, 0.0, -mu * s * el, mu * s, mu, 0.0],
    ];
    let sol = gauss_solve(&mut m)?;
    Ok(ScaledCoefficients {
        c: sol[0],
        a: sol[1],
        b: sol[2],
        h: sol[3],
        e: sol[4],
        f: sol[5],
    })
}

/// Gaussian elimination with partial pivoting on an augmented 6x7 matrix.
fn gauss_solve(m: &mut [[f64; 7]; 6]) -> Result<[f64; 6]> {
    const N: usize = 6;
    let scale = m
        .iter()
        .flat_map(|row| row[..N].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("nonempty range");
        let pivot = m[pivot_row][col];
        if pivot.abs() <= 1e-13 * scale {
            return Err(SnobError::SingularSystem { pivot });
        }
        m.swap(col, pivot_row);
        for row in col + 1..N {
            let factor = m[row][col] / pivot;
            if factor != 0.0 {
                for k in col..=N {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    let mut sol = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| m[row][k] * sol[k]).sum();
        sol[row] = (m[row][N] - tail) / m[row][row];
    }
    Ok(sol)
}

fn geometry(x: f64, alpha: f64, params: &SnobParams, eps: f64) -> Result<LayerGeometry> {
    require_positive("eps", eps)?;
    let mu = decay_rate(alpha)?;
    if !x.is_finite() || x.abs() <= eps {
        return Err(invalid("x", x, "|x| must exceed eps"));
    }
    let s = (params.kappa() * eps).sqrt();
    Ok(LayerGeometry {
        x: x.abs(),
        eps,
        mu,
        nu: mu / s,
        s,
    })
}

/// Coefficients for the start `|x| > eps`, in the exponential basis above.
/// For `x < -eps` they describe `y -> g(-x, -y)`.
pub fn thinlayer_coefficients(x: f64, alpha: f64, params: &SnobParams, eps: f64) -> Result<ThinLayerCoefficients> {
    let geo = geometry(x, alpha, params, eps)?;
    let k = solve_scaled(&geo)?;
    let LayerGeometry { x, eps, mu, nu, .. } = geo;
    Ok(ThinLayerCoefficients {
        c: k.c * (mu * x).exp(),
        a: k.a * (mu * eps).exp(),
        b: k.b * (-mu * x).exp(),
        h: k.h * (-nu * eps).exp(),
        e: k.e * (-nu * eps).exp(),
        f: k.f * (mu * eps).exp(),
    })
}

/// Resolvent density of the layered diffusion for a start `|x| > eps`.
pub fn g_thinlayer(x: f64, y: f64, alpha: f64, params: &SnobParams, eps: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(invalid("y", y, "must be finite"));
    }
    let geo = geometry(x, alpha, params, eps)?;
    let k = solve_scaled(&geo)?;
    let y = if x < 0.0 { -y } else { y };
    Ok(eval_scaled(&k, &geo, y))
}

fn eval_scaled(k: &ScaledCoefficients, geo: &LayerGeometry, y: f64) -> f64 {
    let LayerGeometry { x, eps, mu, nu, .. } = *geo;
    if y > x {
        k.c * (-mu * (y - x)).exp()
    } else if y >= eps {
        k.a * (-mu * (y - eps)).exp() + k.b * (mu * (y - x)).exp()
    } else if y >= -eps {
        k.h * (nu * (y - eps)).exp() + k.e * (-nu * (y + eps)).exp()
    } else {
        k.f * (mu * (y + eps)).exp()
    }
}

/// Evaluates `y -> g(x, y)` on many points with a single solve.
pub fn g_thinlayer_profile(x: f64, ys: &[f64], alpha: f64, params: &SnobParams, eps: f64) -> Result<Vec<f64>> {
    let geo = geometry(x, alpha, params, eps)?;
    let k = solve_scaled(&geo)?;
    let flip = x < 0.0;
    Ok(ys
        .iter()
        .map(|&y| eval_scaled(&k, &geo, if flip { -y } else { y }))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::elastic::psi_ebm;
    use crate::analytic::quadrature::{integrate, QuadratureSpec};
    use crate::analytic::snob::g_snob;
    use crate::space::GPoint;

    fn params(kappa: f64) -> SnobParams {
        SnobParams::new(kappa).unwrap()
    }

    #[test]
    fn psi_boundary_and_continuity() {
        let p = params(1.0);
        for eps in [1e-1, 1e-2, 1e-3] {
            assert_eq!(psi_thinlayer(0.0, 1.0, &p, eps).unwrap(), 1.0);
            let c = psi_coefficients(1.0, &p, eps).unwrap();
            let (inner, outer) = c.edge_values(2f64.sqrt());
            assert!((inner - outer).abs() < 1e-12);
        }
        assert!(psi_thinlayer(0.5, 1.0, &p, 0.0).is_err());
    }

    #[test]
    fn psi_asymptotics() {
        let p = params(2.0);
        let alpha: f64 = 0.5;
        let mu = (2.0 * alpha).sqrt();
        let eps: f64 = 1e-8;
        let c = psi_coefficients(alpha, &p, eps).unwrap();
        let scaled_beta = eps.sqrt() * c.beta;
        assert!((scaled_beta + p.kappa().sqrt() / (p.kappa() + mu)).abs() < 1e-4);
        assert!((c.gamma - p.kappa() / (p.kappa() + mu)).abs() < 1e-3);
    }

    #[test]
    fn psi_converges_monotonically() {
        let p = params(1.0);
        let target = psi_ebm(0.5, 1.0, &p).unwrap();
        let errs: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&eps| (psi_thinlayer(0.5, 1.0, &p, eps).unwrap() - target).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn psi_is_in_unit_interval() {
        let p = params(0.7);
        for eps in [0.5, 0.05, 0.005] {
            for k in 0..50 {
                let v = psi_thinlayer(0.02 * k as f64, 1.3, &p, eps).unwrap();
                assert!(v > 0.0 && v <= 1.0);
            }
        }
    }

    #[test]
    fn stretch_round_trip() {
        let p = params(3.0);
        for x in [-2.0, -0.01, 0.0, 0.004, 0.5] {
            let y = stretch(x, &p, 0.01);
            assert!((unstretch(y, &p, 0.01) - x).abs() < 1e-14);
        }
        assert!((stretch(0.01, &p, 0.01) - layer_edge(&p, 0.01)).abs() < 1e-15);
    }

    #[test]
    fn b_coefficient_independent_of_eps() {
        let p = params(1.0);
        let (x, alpha) = (1.0, 0.5);
        let mu = 1.0;
        for eps in [0.2, 0.05, 1e-3] {
            let k = thinlayer_coefficients(x, alpha, &p, eps).unwrap();
            assert!((k.b - (-mu * x).exp() / mu).abs() < 1e-12, "{eps}: {}", k.b);
        }
    }

    #[test]
    fn matching_conditions_hold() {
        let p = params(1.5);
        let (x, alpha, eps) = (0.7, 0.9, 0.05);
        let g = |y: f64| g_thinlayer(x, y, alpha, &p, eps).unwrap();
        let d = 1e-7;
        for edge in [eps, -eps, x] {
            assert!((g(edge - 1e-12) - g(edge + 1e-12)).abs() < 1e-9);
        }
        let slope = |a: f64, b: f64| (g(b) - g(a)) / (b - a);
        let ke = p.kappa() * eps;
        assert!((ke * slope(eps - 2.0 * d, eps - d) - slope(eps + d, eps + 2.0 * d)).abs() < 1e-5);
        assert!((slope(-eps - 2.0 * d, -eps - d) - ke * slope(-eps + d, -eps + 2.0 * d)).abs() < 1e-5);
        let jump = slope(x + d, x + 2.0 * d) - slope(x - 2.0 * d, x - d);
        assert!((jump + 2.0).abs() < 1e-5);
    }

    #[test]
    fn normalization() {
        let p = params(1.0);
        let (x, alpha, eps) = (1.0, 0.5, 0.05);
        let quad = QuadratureSpec::with_tolerance(1e-11).unwrap();
        let g = |y: f64| g_thinlayer(x, y, alpha, &p, eps).unwrap();
        let v = integrate(&g, -40.0, 40.0, &[-eps, eps, x], &quad).unwrap();
        assert!((v.value - 1.0 / alpha).abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn symmetric_and_nonnegative() {
        let p = params(0.8);
        let eps = 0.02;
        let pts = [-1.5, -0.4, -0.05, 0.07, 0.3, 1.2];
        for &x in &pts {
            for &y in &pts {
                let a = g_thinlayer(x, y, 1.1, &p, eps).unwrap();
                let b = g_thinlayer(y, x, 1.1, &p, eps).unwrap();
                assert!(a > 0.0);
                assert!((a - b).abs() < 1e-10 * a.max(1.0));
            }
        }
    }

    #[test]
    fn pointwise_convergence_to_snob() {
        let p = params(1.0);
        let target = g_snob(GPoint::plus(1.0), GPoint::minus(0.5), 0.5, &p).unwrap();
        let coarse = (g_thinlayer(1.0, -0.5, 0.5, &p, 1e-1).unwrap() - target).abs();
        let fine = (g_thinlayer(1.0, -0.5, 0.5, &p, 1e-3).unwrap() - target).abs();
        assert!(fine < coarse);
    }

    #[test]
    fn rejects_start_inside_layer() {
        let p = params(1.0);
        assert!(g_thinlayer(0.01, 0.5, 1.0, &p, 0.05).is_err());
        assert!(g_thinlayer(1.0, 0.5, 1.0, &p, -0.05).is_err());
    }
}
