//! Reference values computed independently of the library: closed forms
//! written out again, plain Simpson quadrature and brute-force samplers.
#![allow(dead_code)]

use snob::random::RandomStream;
use snob::{GPoint, Side};
use statrs::distribution::{ContinuousCDF, Normal};

pub fn phi(x: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

/// Composite Simpson rule with `n` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Simpson over consecutive breakpoints, `panels` per unit length.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, points: &[f64], panels: f64) -> f64 {
    points
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], ((w[1] - w[0]) * panels).ceil().max(2.0) as usize))
        .sum()
}

/// `psi(x) = kappa exp(-mu x) / (mu + kappa)`.
pub fn psi(x: f64, alpha: f64, kappa: f64) -> f64 {
    let mu = (2.0 * alpha).sqrt();
    kappa * (-mu * x).exp() / (mu + kappa)
}

/// Resolvent density of the process, written from the elastic kernel plus a
/// rebirth term.
pub fn kernel(x: GPoint, y: GPoint, alpha: f64, kappa: f64) -> f64 {
    let mu = (2.0 * alpha).sqrt();
    let (a, b) = (x.magnitude(), y.magnitude());
    let rebirth = kappa * (-mu * (a + b)).exp() / (mu * (mu + kappa));
    if x.side() == y.side() {
        ((-mu * (a - b).abs()).exp() + (mu - kappa) / (mu + kappa) * (-mu * (a + b)).exp()) / mu + rebirth
    } else {
        rebirth
    }
}

/// `int g(x, y) f(y) dy` by Simpson over both sides, with breakpoints at the
/// kink of the kernel and at any kinks of `f`.
pub fn resolvent<F: Fn(GPoint) -> f64>(f: &F, x: GPoint, alpha: f64, kappa: f64, kinks: &[f64]) -> f64 {
    let mu = (2.0 * alpha).sqrt();
    let radius = x.magnitude() + 40.0 / mu;
    let mut total = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let mut pts = vec![0.0, radius];
        pts.extend(kinks.iter().copied().filter(|k| *k > 0.0 && *k < radius));
        if side == x.side() && x.magnitude() > 0.0 {
            pts.push(x.magnitude());
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let g = |m: f64| {
            let y = GPoint::new(side, m).unwrap();
            kernel(x, y, alpha, kappa) * f(y)
        };
        total += simpson_pieces(&g, &pts, 4000.0);
    }
    total
}

pub fn side_indicator(p: GPoint) -> f64 {
    if p.side() == Side::Plus {
        1.0
    } else {
        0.0
    }
}

pub fn exp_decay(p: GPoint) -> f64 {
    (-p.magnitude()).exp()
}

/// `(1 - u^2)^2` with `u = (m - 1) / 0.75` on the plus side.
pub fn bump(p: GPoint) -> f64 {
    if p.side() != Side::Plus {
        return 0.0;
    }
    let u = (p.magnitude() - 1.0) / 0.75;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - u * u).powi(2)
    }
}

pub const BUMP_KINKS: [f64; 2] = [0.25, 1.75];

/// First time a bridge from `x` to `y` over `[0, dt]` reaches 0, simulated
/// on `m` sub-intervals with an exact crossing test per sub-interval.
pub fn bridge_first_hit(s: &mut RandomStream, x: f64, y: f64, dt: f64, m: usize) -> Option<f64> {
    let d = dt / m as f64;
    let mut a = x;
    for k in 0..m {
        let t = k as f64 * d;
        let b = if k + 1 == m {
            y
        } else {
            let rest = dt - t;
            a + (y - a) * d / rest + (d * (rest - d) / rest).sqrt() * s.standard_normal()
        };
        if a * b <= 0.0 || s.uniform01() < (-2.0 * a * b / d).exp() {
            return Some(t + d * s.uniform01());
        }
        a = b;
    }
    None
}

/// Exact law of the thin-layer walk: probability that the stretched walk is
/// on the plus side after `n_steps`, started at node `k0`.
pub fn walk_plus_probability(edge_nodes: usize, theta: f64, k0: i64, n_steps: usize) -> f64 {
    let span = n_steps as i64 + k0.unsigned_abs() as i64 + edge_nodes as i64 + 2;
    let size = (2 * span + 1) as usize;
    let idx = |k: i64| (k + span) as usize;
    let e = edge_nodes as i64;
    let out = 0.5 * (1.0 + theta);
    let mut p = vec![0.0; size];
    p[idx(k0)] = 1.0;
    let mut q = vec![0.0; size];
    for _ in 0..n_steps {
        q.iter_mut().for_each(|v| *v = 0.0);
        for k in -span + 1..span {
            let mass = p[idx(k)];
            if mass == 0.0 {
                continue;
            }
            let (up, down) = if k == e {
                (out, 1.0 - out)
            } else if k == -e {
                (1.0 - out, out)
            } else {
                (0.5, 0.5)
            };
            q[idx(k + 1)] += up * mass;
            q[idx(k - 1)] += down * mass;
        }
        let z = q[idx(0)];
        q[idx(0)] = 0.0;
        q[idx(e)] += 0.5 * z;
        q[idx(-e)] += 0.5 * z;
        std::mem::swap(&mut p, &mut q);
    }
    (1..=span).map(|k| p[idx(k)]).sum()
}

/// `(mean, stderr)` of a sample.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}
