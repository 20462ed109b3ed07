//! Goodness-of-fit and moment tests producing [`TestVerdict`]s.

use serde::Serialize;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use super::EstimateResult;
use crate::error::{invalid, Result, SnobError};

/// Default significance level for p-value based tests.
pub const P_THRESHOLD: f64 = 0.01;
/// Default z-score half-width for moment comparisons.
pub const Z_THRESHOLD: f64 = 3.0;

/// Outcome of one statistical or analytic check.
///
/// For p-value tests, `pass` means `p_value > threshold`; otherwise it means
/// `|statistic| <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestVerdict {
    pub name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    /// Estimated and reference values, when the check compares two numbers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
}

impl TestVerdict {
    pub fn from_p_value(name: impl Into<String>, statistic: f64, p_value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            p_value: Some(p_value),
            threshold,
            pass: p_value > threshold,
            estimate: None,
            reference: None,
        }
    }

    pub fn from_bound(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            p_value: None,
            threshold,
            pass: statistic.abs() <= threshold,
            estimate: None,
            reference: None,
        }
    }

    pub fn with_values(self, estimate: f64, reference: f64) -> Self {
        Self {
            estimate: Some(estimate),
            reference: Some(reference),
            ..self
        }
    }

    pub fn renamed(self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..self
        }
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let series: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * c).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * series).clamp(0.0, 1.0)
    } else {
        let series: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * kf * kf * lambda * lambda).exp()
            })
            .sum();
        (2.0 * series).clamp(0.0, 1.0)
    }
}

fn sorted_finite(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(SnobError::EmptySamples);
    }
    if let Some(bad) = samples.iter().find(|v| v.is_nan()) {
        return Err(invalid("sample", *bad, "must not be NaN"));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample Kolmogorov-Smirnov test against `cdf`, asymptotic p-value.
pub fn ks_test<C: Fn(f64) -> f64>(samples: &[f64], cdf: C) -> Result<TestVerdict> {
    let v = sorted_finite(samples)?;
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    Ok(TestVerdict::from_p_value("ks", d, kolmogorov_sf(n.sqrt() * d), P_THRESHOLD))
}

/// Two-sample Kolmogorov-Smirnov test, asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestVerdict> {
    let a = sorted_finite(a)?;
    let b = sorted_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let effective = (na * nb / (na + nb)).sqrt();
    Ok(TestVerdict::from_p_value("ks2", d, kolmogorov_sf(effective * d), P_THRESHOLD))
}

/// Two-sided exact binomial test of `k` successes in `n` trials at rate `p`.
/// The statistic is the normal score `(k - n p) / sqrt(n p (1 - p))`.
pub fn binomial_test(k: u64, n: u64, p: f64) -> Result<TestVerdict> {
    if n == 0 {
        return Err(SnobError::EmptySamples);
    }
    if k > n {
        return Err(invalid("k", k as f64, "must not exceed n"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", p, "must lie in [0, 1]"));
    }
    let dist = Binomial::new(p, n).map_err(|_| invalid("p", p, "invalid binomial rate"))?;
    let lower = dist.cdf(k);
    let upper = if k == 0 { 1.0 } else { dist.sf(k - 1) };
    let p_value = (2.0 * lower.min(upper)).min(1.0);
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    let z = if sd > 0.0 { (k as f64 - n as f64 * p) / sd } else { 0.0 };
    Ok(TestVerdict::from_p_value("binomial", z, p_value, P_THRESHOLD))
}

/// Compares an estimate with a reference value: `z = (mean - reference) / stderr`,
/// passing when `|z| <= 3 + bias_bound / stderr`.
pub fn z_compare(est: &EstimateResult, reference: f64) -> TestVerdict {
    z_from_parts("z", est.mean - reference, est.stderr, est.bias_bound).with_values(est.mean, reference)
}

/// Compares two independent estimates of the same quantity.
pub fn z_compare_pair(a: &EstimateResult, b: &EstimateResult) -> TestVerdict {
    let combined = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    z_from_parts("z_pair", a.mean - b.mean, combined, a.bias_bound + b.bias_bound).with_values(a.mean, b.mean)
}

/// `diff / stderr` against `3 + bias / stderr`; degenerate when `stderr = 0`.
pub fn z_from_parts(name: &str, diff: f64, stderr: f64, bias: f64) -> TestVerdict {
    if stderr > 0.0 {
        TestVerdict::from_bound(name, diff / stderr, Z_THRESHOLD + bias / stderr)
    } else {
        let z = if diff.abs() <= bias { 0.0 } else { f64::INFINITY * diff.signum() };
        TestVerdict::from_bound(name, z, Z_THRESHOLD)
    }
}

/// Pearson chi-square goodness of fit of counts against cell probabilities.
/// Probabilities are renormalized over the given cells.
pub fn chi_square_test(observed: &[u64], probabilities: &[f64]) -> Result<TestVerdict> {
    if observed.len() != probabilities.len() || observed.len() < 2 {
        return Err(invalid("cells", observed.len() as f64, "need >= 2 matching cells"));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(SnobError::EmptySamples);
    }
    let total_p: f64 = probabilities.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = n as f64 * p / total_p;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = (observed.len() - 1) as f64;
    let dist = ChiSquared::new(df).map_err(|_| invalid("df", df, "invalid degrees of freedom"))?;
    Ok(TestVerdict::from_p_value("chi_square", stat, dist.sf(stat), P_THRESHOLD))
}

/// Sample mean and standard error `sd / sqrt(n)`, summed in index order.
pub fn mean_and_stderr(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(SnobError::EmptySamples);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((mean, (ss / (n - 1.0) / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_tail_values() {
        // classic critical values: P(K > 1.36) ~ 0.05, P(K > 1.63) ~ 0.01
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 1e-3);
        assert!((kolmogorov_sf(1.18 - 1e-12) - kolmogorov_sf(1.18 + 1e-12)).abs() < 1e-9);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn binomial_at_expectation() {
        let v = binomial_test(500, 1000, 0.5).unwrap();
        assert!(v.pass && v.p_value.unwrap() > 0.9);
        assert_eq!(v.statistic, 0.0);
        assert!(!binomial_test(600, 1000, 0.5).unwrap().pass);
        assert!(binomial_test(0, 0, 0.5).is_err());
    }

    #[test]
    fn z_compare_cases() {
        let est = EstimateResult {
            mean: 0.3,
            stderr: 0.01,
            n_paths: 100,
            seed: 0,
            bias_bound: 0.0,
        };
        let v = z_compare(&est, 0.3);
        assert_eq!(v.statistic, 0.0);
        assert!(v.pass);
        assert!(!z_compare(&est, 0.35).pass);
        let biased = EstimateResult { bias_bound: 0.03, ..est };
        assert!(z_compare(&biased, 0.35).pass);
    }

    #[test]
    fn ks_rejects_wrong_law() {
        let uniform: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_test(&uniform, |x| x).unwrap().pass);
        assert!(!ks_test(&uniform, |x| x * x).unwrap().pass);
        assert!(ks_test(&[], |x| x).is_err());
        let shifted: Vec<f64> = uniform.iter().map(|u| u + 0.2).collect();
        assert!(!ks_two_sample(&uniform, &shifted).unwrap().pass);
        assert!(ks_two_sample(&uniform, &uniform).unwrap().pass);
    }

    #[test]
    fn mean_stderr() {
        let (m, s) = mean_and_stderr(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((m, s), (1.0, 0.0));
        let (m, s) = mean_and_stderr(&[0.0, 2.0]).unwrap();
        assert_eq!(m, 1.0);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
