//! Named verification suites. Each suite compares the simulators with the
//! closed forms (or with an independent brute-force sampler) and returns one
//! [`TestVerdict`] per check.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erf;

use crate::analytic::{
    g_snob, g_thinlayer, integrate, interface_residuals, layer_edge, psi_ebm, psi_thinlayer,
    psi_thinlayer_unstretched, resolvent_snob, semigroup_snob, stretch, QuadratureSpec,
};
use crate::error::{invalid, require_positive, Result};
use crate::mc::{
    binomial_test, dictionary, estimate_resolvent, estimate_semigroup, ks_test, ks_two_sample, run_paths,
    summarize, z_compare, z_compare_pair, Observable, Scheme, SideIndicator, TestVerdict,
};
use crate::random::{bridge_hit_time, inverse_gaussian, localtime_position, sign_flip, RandomStream};
use crate::sim::{
    ebm_lifetime_exact, ebm_lifetime_stepped, snob_step, StepConfig, ThinLayerWalk,
};
use crate::space::{GPoint, Side, SnobParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    EbmLifetime,
    Resolvent,
    Semigroup,
    Interface,
    ThinLayer,
    Ck,
    Distributions,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::EbmLifetime,
        Suite::Resolvent,
        Suite::Semigroup,
        Suite::Interface,
        Suite::ThinLayer,
        Suite::Ck,
        Suite::Distributions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::EbmLifetime => "ebm-lifetime",
            Suite::Resolvent => "resolvent",
            Suite::Semigroup => "semigroup",
            Suite::Interface => "interface",
            Suite::ThinLayer => "thin-layer",
            Suite::Ck => "ck",
            Suite::Distributions => "distributions",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Parameters shared by all suites. Each suite reads the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub kappa: f64,
    pub alpha: f64,
    pub dt: f64,
    pub t: f64,
    pub x0: GPoint,
    pub eps: f64,
    pub n_paths: u64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            alpha: 1.0,
            dt: 0.01,
            t: 1.0,
            x0: GPoint::plus(0.5),
            eps: 0.01,
            n_paths: 100_000,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    pub fn params(&self) -> Result<SnobParams> {
        SnobParams::new(self.kappa)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        require_positive("alpha", self.alpha)?;
        require_positive("dt", self.dt)?;
        require_positive("t", self.t)?;
        require_positive("eps", self.eps)?;
        if self.n_paths < 2 {
            return Err(invalid("paths", self.n_paths as f64, "must be >= 2"));
        }
        Ok(())
    }

    /// Independent seed for the `tag`-th experiment of a suite.
    fn sub_seed(&self, tag: u64) -> u64 {
        self.seed.wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub verdicts: Vec<TestVerdict>,
}

impl SuiteReport {
    fn new(suite: Suite, verdicts: Vec<TestVerdict>) -> Self {
        Self {
            suite,
            pass: verdicts.iter().all(|v| v.pass),
            verdicts,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let verdicts = match suite {
        Suite::EbmLifetime => ebm_lifetime(cfg)?,
        Suite::Resolvent => resolvent(cfg)?,
        Suite::Semigroup => semigroup(cfg)?,
        Suite::Interface => interface(cfg)?,
        Suite::ThinLayer => thin_layer(cfg)?,
        Suite::Ck => chapman_kolmogorov(cfg)?,
        Suite::Distributions => distributions(cfg)?,
    };
    Ok(SuiteReport::new(suite, verdicts))
}

fn oracle_quadrature() -> QuadratureSpec {
    QuadratureSpec::with_tolerance(1e-11).expect("positive tolerance")
}

/// Exact lifetime transform against `psi`, and a step-based lifetime with an
/// end-of-step bias band.
fn ebm_lifetime(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let x = cfg.x0.magnitude();
    let alpha = cfg.alpha;
    let reference = psi_ebm(x, alpha, &params)?;

    let exact = run_paths(cfg.n_paths, cfg.sub_seed(0), |s| {
        (-alpha * ebm_lifetime_exact(s, x, &params).expect("validated inputs")).exp()
    });
    let exact = summarize(&exact, cfg.sub_seed(0), 0.0)?;

    let t_max = 30.0 / alpha;
    let n_stepped = cfg.n_paths.min(20_000);
    let stepped = run_paths(n_stepped, cfg.sub_seed(1), |s| {
        match ebm_lifetime_stepped(s, x, &params, cfg.dt, t_max).expect("validated inputs") {
            Some(k) => (-alpha * k).exp(),
            None => 0.0,
        }
    });
    let crossings_missed = 2.0 * StepConfig::new(cfg.dt, params)?.neglected_flip_bound();
    let bias = (1.0 - (-alpha * cfg.dt).exp())
        + crossings_missed * (1.0 / (alpha * cfg.dt) + 1.0)
        + (-alpha * t_max).exp();
    let stepped = summarize(&stepped, cfg.sub_seed(1), bias)?;

    Ok(vec![
        z_compare(&exact, reference).renamed("lifetime_laplace_exact"),
        z_compare(&stepped, reference).renamed("lifetime_laplace_stepped"),
    ])
}

fn observable_fn(f: &dyn Observable) -> impl Fn(GPoint) -> f64 + '_ {
    move |q| f.eval(q)
}

/// Monte Carlo resolvent against quadrature, then symmetry and normalization
/// of the kernel.
fn resolvent(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let step = StepConfig::new(cfg.dt, params)?;
    let quad = oracle_quadrature();
    let mut out = Vec::new();
    for (i, f) in dictionary().iter().enumerate() {
        let reference = resolvent_snob(&observable_fn(f.as_ref()), cfg.x0, cfg.alpha, &params, &quad)?;
        let est = estimate_resolvent(f.as_ref(), cfg.x0, cfg.alpha, &params, &step, cfg.n_paths, cfg.sub_seed(i as u64))?;
        out.push(z_compare(&est, reference).renamed(format!("resolvent_{}", f.name())));
    }
    out.extend(kernel_laws()?);
    Ok(out)
}

/// Symmetry on a 25-pair grid and `int g = 1/alpha` for five parameter sets.
pub fn kernel_laws() -> Result<Vec<TestVerdict>> {
    let points = [
        GPoint::plus(0.0),
        GPoint::plus(0.3),
        GPoint::plus(1.2),
        GPoint::minus(0.5),
        GPoint::minus(2.0),
    ];
    let mut asym: f64 = 0.0;
    for (alpha, kappa) in [(0.5, 1.0), (2.0, 0.3)] {
        let params = SnobParams::new(kappa)?;
        for x in points {
            for y in points {
                let d = g_snob(x, y, alpha, &params)? - g_snob(y, x, alpha, &params)?;
                asym = asym.max(d.abs());
            }
        }
    }
    let mut out = vec![TestVerdict::from_bound("kernel_symmetry", asym, 1e-10)];

    let quad = QuadratureSpec::with_tolerance(1e-10)?;
    let triples = [
        (0.5, 1.0, GPoint::plus(1.0)),
        (1.0, 1.0, GPoint::plus(0.5)),
        (2.0, 0.5, GPoint::minus(0.2)),
        (0.5, 4.0, GPoint::plus(0.0)),
        (1.5, 10.0, GPoint::minus(2.0)),
    ];
    for (alpha, kappa, x) in triples {
        let alpha: f64 = alpha;
        let params = SnobParams::new(kappa)?;
        let mu = (2.0 * alpha).sqrt();
        let radius = x.magnitude() + quad.radius_for_rate(mu);
        let mut total = 0.0;
        for side in [Side::Plus, Side::Minus] {
            let breaks = if side == x.side() { vec![x.magnitude()] } else { vec![] };
            let v = integrate(
                &|m: f64| g_snob(x, GPoint::from_parts_unchecked(side, m), alpha, &params).unwrap_or(f64::NAN),
                0.0,
                radius,
                &breaks,
                &quad,
            )?;
            total += v.value;
        }
        out.push(
            TestVerdict::from_bound(
                format!("kernel_normalization(alpha={alpha}, kappa={kappa}, x={x})"),
                total - 1.0 / alpha,
                1e-6,
            )
            .with_values(total, 1.0 / alpha),
        );
    }
    Ok(out)
}

/// Both Monte Carlo schemes against the quadrature semigroup, and against
/// each other, for the test dictionary.
fn semigroup(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let step = StepConfig::new(cfg.dt, params)?;
    let quad = oracle_quadrature();
    let mut out = Vec::new();
    for (i, f) in dictionary().iter().enumerate() {
        let reference = semigroup_snob(&observable_fn(f.as_ref()), cfg.x0, cfg.t, &params, &quad)?;
        let tag = 2 * i as u64;
        let stepper = estimate_semigroup(
            f.as_ref(),
            cfg.x0,
            cfg.t,
            &params,
            &step,
            cfg.n_paths,
            cfg.sub_seed(tag),
            Scheme::PathStepper,
        )?;
        let one_shot = estimate_semigroup(
            f.as_ref(),
            cfg.x0,
            cfg.t,
            &params,
            &step,
            cfg.n_paths,
            cfg.sub_seed(tag + 1),
            Scheme::WeightedOneShot,
        )?;
        let name = f.name();
        out.push(z_compare(&stepper, reference).renamed(format!("path_stepper_{name}")));
        out.push(z_compare(&one_shot, reference).renamed(format!("weighted_one_shot_{name}")));
        out.push(z_compare_pair(&stepper, &one_shot).renamed(format!("scheme_agreement_{name}")));
    }
    Ok(out)
}

pub const INTERFACE_H: f64 = 1e-4;
pub const INTERFACE_TOLERANCE: f64 = 1e-5;

/// Barrier conditions on the resolvent for the test dictionary.
fn interface(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let quad = QuadratureSpec::with_tolerance(1e-13)?;
    let mut out = Vec::new();
    for f in dictionary() {
        let r = interface_residuals(&observable_fn(f.as_ref()), cfg.alpha, &params, &quad, INTERFACE_H)?;
        let name = f.name();
        out.push(TestVerdict::from_bound(format!("flux_gap_{name}"), r.flux_gap, INTERFACE_TOLERANCE));
        out.push(TestVerdict::from_bound(format!("jump_residual_{name}"), r.jump_residual, INTERFACE_TOLERANCE));
    }
    Ok(out)
}

pub const THIN_LAYER_EPS: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const THIN_LAYER_TOLERANCE: f64 = 1e-2;

/// Largest `|g_thinlayer - g_snob|` over a fixed grid of points outside the
/// widest layer.
pub fn thin_layer_kernel_gap(alpha: f64, params: &SnobParams, eps: f64) -> Result<f64> {
    let xs = [0.5, 1.0, 2.0];
    let ys = [-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0];
    let mut gap: f64 = 0.0;
    for &x in &xs {
        for &y in &ys {
            let thin = g_thinlayer(x, y, alpha, params, eps)?;
            let limit = g_snob(GPoint::plus(x), GPoint::from_real(y, Side::Plus)?, alpha, params)?;
            gap = gap.max((thin - limit).abs());
        }
    }
    Ok(gap)
}

fn monotone_verdict(name: &str, gaps: &[f64]) -> TestVerdict {
    // statistic: largest ratio of consecutive gaps; decreasing iff < 1
    let worst = gaps.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    TestVerdict {
        pass: worst < 1.0,
        ..TestVerdict::from_bound(name, worst, 1.0)
    }
}

fn thin_layer(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let x = cfg.x0.magnitude();
    let mut out = Vec::new();

    let mut kernel = Vec::new();
    let mut psi_x = Vec::new();
    let mut psi_y = Vec::new();
    let psi = psi_ebm(x, cfg.alpha, &params)?;
    for eps in THIN_LAYER_EPS {
        kernel.push(thin_layer_kernel_gap(cfg.alpha, &params, eps)?);
        psi_x.push((psi_thinlayer_unstretched(x, cfg.alpha, &params, eps)? - psi).abs());
        psi_y.push((psi_thinlayer(x, cfg.alpha, &params, eps)? - psi).abs());
    }
    for (label, gaps) in [("kernel_gap", &kernel), ("psi_gap", &psi_x), ("psi_gap_stretched", &psi_y)] {
        out.push(monotone_verdict(&format!("{label}_monotone"), gaps));
        out.push(TestVerdict::from_bound(
            format!("{label}_eps=1e-3"),
            *gaps.last().expect("three values"),
            THIN_LAYER_TOLERANCE,
        ));
    }

    // Walk endpoint side against the limiting process.
    let eps = cfg.eps;
    let h = layer_edge(&params, eps) / 8.0;
    let walk = ThinLayerWalk::new(params, eps, h)?;
    let x_real = cfg.x0.embed();
    let ind = SideIndicator(cfg.x0.side());
    let values = run_paths(cfg.n_paths, cfg.sub_seed(0), |s| {
        let (side, _) = walk.endpoint(s, x_real, cfg.t).expect("validated inputs");
        if side == cfg.x0.side() {
            1.0
        } else {
            0.0
        }
    });
    let walk_est = summarize(&values, cfg.sub_seed(0), h + eps)?;
    let reference = semigroup_snob(&observable_fn(&ind), cfg.x0, cfg.t, &params, &oracle_quadrature())?;
    out.push(z_compare(&walk_est, reference).renamed("walk_side_vs_quadrature"));
    let snob_est = estimate_semigroup(
        &ind,
        cfg.x0,
        cfg.t,
        &params,
        &StepConfig::new(cfg.dt, params)?,
        cfg.n_paths,
        cfg.sub_seed(1),
        Scheme::PathStepper,
    )?;
    out.push(z_compare_pair(&walk_est, &snob_est).renamed("walk_side_vs_snob_step"));

    // Hitting-time transform of the walk, in the stretched coordinate.
    let h_hit = layer_edge(&params, eps) / 4.0;
    let walk = ThinLayerWalk::new(params, eps, h_hit)?;
    let y0 = (stretch(x, &params, eps) / h_hit).round() * h_hit;
    let t_max = 20.0 / cfg.alpha;
    let n_hit = cfg.n_paths.min(50_000);
    let values = run_paths(n_hit, cfg.sub_seed(2), |s| {
        match walk.first_zero_hit(s, y0, t_max).expect("validated inputs") {
            Some(tau) => (-cfg.alpha * tau).exp(),
            None => 0.0,
        }
    });
    let est = summarize(&values, cfg.sub_seed(2), h_hit + (-cfg.alpha * t_max).exp())?;
    let reference = psi_thinlayer(y0, cfg.alpha, &params, eps)?;
    out.push(z_compare(&est, reference).renamed("walk_hitting_laplace"));
    Ok(out)
}

/// Law of `|X_t|` against reflected Brownian motion, and two half steps
/// against one full step.
fn chapman_kolmogorov(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let x0 = cfg.x0;
    let t = cfg.t;
    let fine = StepConfig::new(cfg.dt, params)?;
    let n_fine = (t / cfg.dt).round().max(1.0) as usize;
    let fine = StepConfig::new(t / n_fine as f64, *fine.params())?;
    let magnitudes = run_paths(cfg.n_paths, cfg.sub_seed(0), |s| {
        let mut p = x0;
        for _ in 0..n_fine {
            p = snob_step(s, p, &fine).endpoint;
        }
        p.magnitude()
    });
    let (x, sd) = (x0.magnitude(), t.sqrt());
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let cdf = |m: f64| normal.cdf((m - x) / sd) - normal.cdf((-m - x) / sd);
    let mut out = vec![ks_test(&magnitudes, cdf)?.renamed("reflected_magnitude_ks")];

    let half = StepConfig::new(0.5 * t, params)?;
    let whole = StepConfig::new(t, params)?;
    let two = run_paths(cfg.n_paths, cfg.sub_seed(1), |s| {
        let p = snob_step(s, x0, &half).endpoint;
        snob_step(s, p, &half).endpoint.embed()
    });
    let one = run_paths(cfg.n_paths, cfg.sub_seed(2), |s| snob_step(s, x0, &whole).endpoint.embed());
    out.push(ks_two_sample(&two, &one)?.renamed("two_half_steps_vs_one_step_ks"));
    Ok(out)
}

/// Hit time of a Brownian bridge from `x` to `y` over `[0, dt]`, found by
/// walking the bridge on `m` sub-intervals and testing each for a crossing.
/// The crossing time inside a sub-interval is placed uniformly. Returns `None`
/// if the bridge stays away from 0.
pub fn brute_force_bridge_hit(stream: &mut RandomStream, x: f64, y: f64, dt: f64, m: usize) -> Option<f64> {
    let delta = dt / m as f64;
    let mut a = x;
    for k in 0..m {
        let t = k as f64 * delta;
        let left = dt - t;
        let b = if k + 1 == m {
            y
        } else {
            let mean = a + (y - a) * delta / left;
            let var = delta * (left - delta) / left;
            mean + var.sqrt() * stream.standard_normal()
        };
        let crossed = a * b <= 0.0 || stream.uniform01() < (-2.0 * a * b / delta).exp();
        if crossed {
            return Some(t + delta * stream.uniform01());
        }
        a = b;
    }
    None
}

/// Bridge hit time conditioned on a crossing, by rejection.
pub fn brute_force_conditioned_hit(stream: &mut RandomStream, x: f64, y: f64, dt: f64, m: usize) -> f64 {
    loop {
        if let Some(t) = brute_force_bridge_hit(stream, x, y, dt, m) {
            return t;
        }
    }
}

pub const IG_MU: f64 = 2.0;
pub const IG_LAMBDA: f64 = 8.0;
pub const FLIP_LEVELS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const BRIDGE_CASES: [(f64, f64); 2] = [(0.5, -0.3), (0.5, 0.4)];

fn distributions(cfg: &VerifyConfig) -> Result<Vec<TestVerdict>> {
    let params = cfg.params()?;
    let n = cfg.n_paths;
    let mut out = Vec::new();

    // Inverse Gaussian: mean mu, variance mu^3 / lambda.
    let ig = run_paths(n, cfg.sub_seed(0), |s| inverse_gaussian(s, IG_MU, IG_LAMBDA).expect("valid parameters"));
    let mean_est = summarize(&ig, cfg.sub_seed(0), 0.0)?;
    out.push(z_compare(&mean_est, IG_MU).renamed("inverse_gaussian_mean"));
    let m = mean_est.mean;
    let sq: Vec<f64> = ig.iter().map(|v| (v - m) * (v - m)).collect();
    let var_est = summarize(&sq, cfg.sub_seed(0), 0.0)?;
    out.push(z_compare(&var_est, IG_MU.powi(3) / IG_LAMBDA).renamed("inverse_gaussian_variance"));

    // Local time and distance from the barrier are both half-normal.
    let r = cfg.t;
    let draws: Vec<(f64, f64)> = {
        let l = run_paths(n, cfg.sub_seed(1), |s| localtime_position(s, r).expect("r > 0").local_time);
        let d = run_paths(n, cfg.sub_seed(1), |s| localtime_position(s, r).expect("r > 0").magnitude);
        l.into_iter().zip(d).collect()
    };
    let half_normal = |v: f64| {
        if v <= 0.0 {
            0.0
        } else {
            erf(v / (2.0 * r).sqrt())
        }
    };
    let l: Vec<f64> = draws.iter().map(|p| p.0).collect();
    let d: Vec<f64> = draws.iter().map(|p| p.1).collect();
    out.push(ks_test(&l, half_normal)?.renamed("local_time_half_normal_ks"));
    out.push(ks_test(&d, half_normal)?.renamed("distance_half_normal_ks"));

    // Keep rate of the side rule.
    for (i, &level) in FLIP_LEVELS.iter().enumerate() {
        let kept = run_paths(n, cfg.sub_seed(2 + i as u64), |s| {
            if sign_flip(s, Side::Plus, level, &params) == Side::Plus {
                1.0
            } else {
                0.0
            }
        });
        let k = kept.iter().sum::<f64>() as u64;
        let p = 0.5 * (1.0 + (-params.kappa() * level).exp());
        out.push(binomial_test(k, n, p)?.renamed(format!("keep_rate_l={level}")).with_values(k as f64 / n as f64, p));
    }

    // Bridge hit time against the brute-force bridge.
    let n_bridge = n.min(20_000);
    for (i, &(x, y)) in BRIDGE_CASES.iter().enumerate() {
        let tag = 10 + 2 * i as u64;
        let fast = run_paths(n_bridge, cfg.sub_seed(tag), |s| bridge_hit_time(s, x, y, 1.0).expect("x > 0"));
        let slow = run_paths(n_bridge, cfg.sub_seed(tag + 1), |s| brute_force_conditioned_hit(s, x, y, 1.0, 4096));
        out.push(ks_two_sample(&fast, &slow)?.renamed(format!("bridge_hit_time_ks(x={x}, y={y})")));
    }
    Ok(out)
}

/// Runs every suite with one configuration.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}
