//! Reference limit laws and goodness-of-fit statistics.

mod quadrature;

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::beta::checked_beta_reg;
use statrs::function::erf::erfc;

use crate::error::{invalid, Error, Result};

pub use quadrature::integrate;

/// A sample sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("empty sample"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("sample contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn from_counts<T: Copy + Into<f64>>(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| v.into()).collect())
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance (0 for a single value).
    pub fn variance(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.sorted.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.len() - 1) as f64
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.len() as f64).sqrt()
    }
}

/// Limit laws used as references.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    Uniform,
    Beta { a: f64, b: f64 },
    /// `i`-th smallest of `ell` i.i.d. uniforms.
    OrderStat { i: usize, ell: usize },
    /// `exp(-c/x)` on `x > 0`.
    Frechet { c: f64 },
    Normal { mean: f64, sd: f64 },
    /// The completely asymmetric Cauchy law with characteristic function
    /// `exp(it ln|t| - pi|t|/2)`.
    CauchyLimit,
    /// Law of `scale * (X - shift)` for `X` the Cauchy limit.
    ScaledCauchy { scale: f64, shift: f64 },
}

impl Reference {
    pub fn standard_normal() -> Self {
        Reference::Normal { mean: 0.0, sd: 1.0 }
    }

    /// Limit of the root-cluster fluctuation statistic at parameter `t`.
    pub fn root_cluster_fluctuation(t: f64) -> Self {
        Reference::ScaledCauchy {
            scale: t * (-t).exp(),
            shift: t.ln(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Reference::Uniform => "uniform(0,1)".into(),
            Reference::Beta { a, b } => format!("beta({a},{b})"),
            Reference::OrderStat { i, ell } => format!("order-stat({i},{ell})"),
            Reference::Frechet { c } => format!("frechet({c})"),
            Reference::Normal { mean, sd } => format!("normal({mean},{sd})"),
            Reference::CauchyLimit => "cauchy-limit".into(),
            Reference::ScaledCauchy { scale, shift } => format!("cauchy-limit(scale={scale},shift={shift})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Reference::Beta { a, b } => a > 0.0 && b > 0.0,
            Reference::OrderStat { i, ell } => i >= 1 && i <= ell,
            Reference::Frechet { c } => c > 0.0,
            Reference::Normal { sd, .. } => sd > 0.0,
            Reference::ScaledCauchy { scale, shift } => scale > 0.0 && shift.is_finite(),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("invalid parameters for {}", self.name())))
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            Reference::Uniform => Ok(x.clamp(0.0, 1.0)),
            Reference::Beta { a, b } => beta_cdf(x, a, b),
            Reference::OrderStat { i, ell } => order_stat_cdf(x, i, ell),
            Reference::Frechet { c } => frechet_cdf(x, c),
            Reference::Normal { mean, sd } => Ok(normal_cdf((x - mean) / sd)),
            Reference::CauchyLimit => cauchy_limit_cdf(x),
            Reference::ScaledCauchy { scale, shift } => cauchy_limit_cdf(x / scale + shift),
        }
    }
}

pub fn beta_cdf(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || x.is_nan() {
        return Err(invalid(format!("beta({a},{b}) at {x}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    checked_beta_reg(a, b, x).map_err(|e| invalid(e.to_string()))
}

/// CDF of the `i`-th smallest of `ell` uniforms: `I_x(i, ell - i + 1)`.
pub fn order_stat_cdf(x: f64, i: usize, ell: usize) -> Result<f64> {
    if i == 0 || i > ell {
        return Err(invalid(format!("order statistic {i} of {ell}")));
    }
    beta_cdf(x, i as f64, (ell - i + 1) as f64)
}

pub fn frechet_cdf(x: f64, c: f64) -> Result<f64> {
    if c <= 0.0 || x.is_nan() {
        return Err(invalid(format!("frechet({c}) at {x}")));
    }
    Ok(if x > 0.0 { (-c / x).exp() } else { 0.0 })
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper integration limit in the substituted variable `s = sqrt(t)`;
/// `exp(-pi t / 2)` is below `1e-20` there.
const S_MAX: f64 = 5.6;

const LEFT_TAIL: f64 = -1000.0;
const RIGHT_TAIL: f64 = 60.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gil-Pelaez integrand after `t = s^2`: `2 e^{-pi s^2/2} sin(s^2 (2 ln s - x)) / s`.
pub(crate) fn cauchy_integrand(s: f64, x: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let t = s * s;
    2.0 * (-std::f64::consts::FRAC_PI_2 * t).exp() * (t * (t.ln() - x)).sin() / s
}

/// CDF of the completely asymmetric Cauchy limit law, by inverting its
/// characteristic function: `F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t))/t dt`.
///
/// Beyond the range where quadrature is cheap the tails are used instead:
/// `F(-y) = 1/y + (ln y - 1 + gamma)/y^2 + O(ln^2 y / y^3)` on the left, and
/// `F = 1` on the right, where `1 - F` decays doubly exponentially.
pub fn cauchy_limit_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("cauchy_limit_cdf at {x}")));
    }
    if x <= LEFT_TAIL {
        let y = -x;
        return Ok(1.0 / y + (y.ln() - 1.0 + EULER_GAMMA) / (y * y));
    }
    if x >= RIGHT_TAIL {
        return Ok(1.0);
    }
    let (v, ok) = integrate(|s| cauchy_integrand(s, x), 0.0, S_MAX, 1e-10, 4000);
    let estimate = 0.5 - v / std::f64::consts::PI;
    if !ok {
        return Err(Error::Quadrature { x, estimate });
    }
    Ok(estimate.clamp(0.0, 1.0))
}

/// One-sample Kolmogorov-Smirnov distance `sup |F_n - F|`.
pub fn ks_statistic(sample: &EmpiricalDistribution, reference: &Reference) -> Result<f64> {
    let mut err = None;
    let d = ks_statistic_with(sample, |x| {
        reference.cdf(x).unwrap_or_else(|e| {
            err.get_or_insert(e);
            0.0
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(d),
    }
}

/// KS distance against an arbitrary CDF. Ties in the sample are handled by
/// comparing at each distinct value from both sides.
pub fn ks_statistic_with(sample: &EmpiricalDistribution, mut cdf: impl FnMut(f64) -> f64) -> f64 {
    let v = sample.values();
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
        i = j;
    }
    d
}

/// Two-sample KS distance and its asymptotic p-value.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> (f64, f64) {
    let (x, y) = (a.values(), b.values());
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    (d, kolmogorov_pvalue(d, n * m / (n + m)))
}

/// `P(D > d)` for the KS distance of a sample of (effective) size `n`,
/// using the Kolmogorov series with the usual small-sample correction.
pub fn kolmogorov_pvalue(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Pearson chi-square of observed counts against cell probabilities, with
/// `cells - 1` degrees of freedom.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> Result<(f64, f64)> {
    if counts.len() != probs.len() || counts.len() < 2 {
        return Err(invalid("chi-square needs matching counts and probabilities, at least 2 cells"));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(invalid("empty sample"));
    }
    let psum: f64 = probs.iter().sum();
    if (psum - 1.0).abs() > 1e-9 || probs.iter().any(|&p| p <= 0.0) {
        return Err(invalid("cell probabilities must be positive and sum to 1"));
    }
    let stat: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).map_err(|e| invalid(e.to_string()))?;
    Ok((stat, dist.sf(stat)))
}

/// The two roots of `a ln(2e/a) = 1`, smaller first.
pub fn alpha_constants() -> (f64, f64) {
    let g = |a: f64| a * (2.0 * std::f64::consts::E / a).ln() - 1.0;
    // g increases on (0, 2] and decreases after, with g(2) = 1 > 0.
    let bisect = |mut lo: f64, mut hi: f64| {
        let rising = g(lo) < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (g(mid) < 0.0) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (bisect(1e-3, 2.0), bisect(2.0, 10.0))
}

/// True when each value is at most the previous one.
pub fn is_nonincreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{tags, trial_rng};
    use rand::Rng;

    /// Composite Simpson on the substituted integrand, as an independent
    /// check of the adaptive rule.
    fn simpson_cdf(x: f64, panels: usize) -> f64 {
        let h = S_MAX / panels as f64;
        let mut sum = cauchy_integrand(0.0, x) + cauchy_integrand(S_MAX, x);
        for k in 1..panels {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * cauchy_integrand(k as f64 * h, x);
        }
        0.5 - sum * h / 3.0 / std::f64::consts::PI
    }

    #[test]
    fn cauchy_cdf_matches_fine_simpson() {
        for x in [-2.0, 0.0, 2.0] {
            let f = cauchy_limit_cdf(x).unwrap();
            assert!((f - simpson_cdf(x, 200_000)).abs() < 1e-5, "x = {x}");
        }
        for k in 0..100 {
            let x = -20.0 + 40.0 * k as f64 / 99.0;
            let f = cauchy_limit_cdf(x).unwrap();
            assert!((f - simpson_cdf(x, 200_000)).abs() < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn cauchy_cdf_shape() {
        let grid: Vec<f64> = (0..=400).map(|k| -20.0 + 0.1 * k as f64).collect();
        let f: Vec<f64> = grid.iter().map(|&x| cauchy_limit_cdf(x).unwrap()).collect();
        assert!(f.windows(2).all(|w| w[0] <= w[1] + 1e-9));
        assert!(cauchy_limit_cdf(50.0).unwrap() > 0.99);
        // The left tail is heavy, P(X < -x) ~ 1/x; the light right tail
        // decays doubly exponentially.
        let left = cauchy_limit_cdf(-50.0).unwrap();
        assert!(left > 0.015 && left < 0.025, "{left}");
        assert!(cauchy_limit_cdf(-1000.0).unwrap() < 0.01);
        // The tail expansion joins the quadrature continuously.
        let (v, ok) = integrate(|s| cauchy_integrand(s, -1000.0), 0.0, S_MAX, 1e-10, 4000);
        assert!(ok);
        let quad = 0.5 - v / std::f64::consts::PI;
        assert!((cauchy_limit_cdf(-1000.0).unwrap() - quad).abs() < 1e-7);
        let inner = cauchy_limit_cdf(59.9).unwrap();
        assert!(1.0 - inner < 1e-12);
        for x in [-1e12, -1e6, -1e4, 1e4, 1e12] {
            let f = cauchy_limit_cdf(x).unwrap();
            assert!((0.0..=1.0).contains(&f));
        }
        assert!(cauchy_limit_cdf(-1e4).unwrap() < cauchy_limit_cdf(-1e3).unwrap());
        assert!(cauchy_limit_cdf(f64::NAN).is_err());
    }

    #[test]
    fn closed_forms() {
        assert!((beta_cdf(0.5, 1.0, 3.0).unwrap() - 0.875).abs() < 1e-12);
        assert!((frechet_cdf(1.0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(frechet_cdf(-1.0, 1.0).unwrap(), 0.0);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-11, "{}", normal_cdf(1.959_963_984_540_054));
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            for ell in 1..6usize {
                let max = order_stat_cdf(x, ell, ell).unwrap();
                assert!((max - x.powi(ell as i32)).abs() < 1e-12);
                let first = order_stat_cdf(x, 1, ell).unwrap();
                assert!((first - beta_cdf(x, 1.0, ell as f64).unwrap()).abs() < 1e-12);
                if ell >= 2 {
                    let a = order_stat_cdf(x, ell - 1, ell).unwrap();
                    assert!((a - beta_cdf(x, (ell - 1) as f64, 2.0).unwrap()).abs() < 1e-12);
                }
            }
        }
        assert!(beta_cdf(0.5, 0.0, 1.0).is_err());
        assert!(order_stat_cdf(0.5, 3, 2).is_err());
        assert!(Reference::Beta { a: -1.0, b: 1.0 }.cdf(0.5).is_err());
    }

    #[test]
    fn references_are_monotone_cdfs() {
        let refs = [
            Reference::Uniform,
            Reference::Beta { a: 2.0, b: 3.0 },
            Reference::OrderStat { i: 2, ell: 3 },
            Reference::Frechet { c: 0.5 },
            Reference::standard_normal(),
            Reference::root_cluster_fluctuation(1.0),
        ];
        for r in refs {
            let grid: Vec<f64> = (0..=60).map(|k| -3.0 + 0.1 * k as f64).collect();
            let f: Vec<f64> = grid.iter().map(|&x| r.cdf(x).unwrap()).collect();
            assert!(f.iter().all(|v| (0.0..=1.0).contains(v)), "{}", r.name());
            assert!(f.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{}", r.name());
        }
    }

    #[test]
    fn ks_constructions() {
        let m = 1000;
        let q: Vec<f64> = (1..=m).map(|i| (i as f64 - 0.5) / m as f64).collect();
        let e = EmpiricalDistribution::new(q).unwrap();
        assert!(ks_statistic(&e, &Reference::Uniform).unwrap() <= 0.5 / m as f64 + 1e-12);
        let c = EmpiricalDistribution::new(vec![0.3; 50]).unwrap();
        assert!((ks_statistic(&c, &Reference::Uniform).unwrap() - 0.7).abs() < 1e-12);
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());

        let mut rng = trial_rng(0, 0, tags::WALK);
        let mut fails = 0;
        for _ in 0..50 {
            let s = EmpiricalDistribution::new((0..10_000).map(|_| rng.random::<f64>()).collect()).unwrap();
            fails += usize::from(ks_statistic(&s, &Reference::Uniform).unwrap() > 1.95 / 100.0);
        }
        assert!(fails <= 1);
    }

    #[test]
    fn two_sample_and_chi_square() {
        let mut rng = trial_rng(1, 0, tags::WALK);
        let a = EmpiricalDistribution::new((0..5000).map(|_| rng.random::<f64>()).collect()).unwrap();
        let b = EmpiricalDistribution::new((0..4000).map(|_| rng.random::<f64>()).collect()).unwrap();
        let (d, p) = ks_two_sample(&a, &b);
        assert!(d < 0.05 && p > 1e-3);
        let c = EmpiricalDistribution::new((0..4000).map(|_| rng.random::<f64>() * 0.9).collect()).unwrap();
        assert!(ks_two_sample(&a, &c).1 < 1e-6);
        assert!((kolmogorov_pvalue(1.36 / 100.0, 10_000.0) - 0.05).abs() < 0.005);

        let (stat, p) = chi_square(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(stat, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        let (_, p) = chi_square(&[90, 10], &[0.5, 0.5]).unwrap();
        assert!(p < 1e-10);
        assert!(chi_square(&[1], &[1.0]).is_err());
        assert!(chi_square(&[1, 2], &[0.3, 0.3]).is_err());
    }

    #[test]
    fn alpha_roots() {
        let (lo, hi) = alpha_constants();
        for a in [lo, hi] {
            assert!((a * (2.0 * std::f64::consts::E / a).ln() - 1.0).abs() <= 1e-9);
        }
        assert!(lo < 1.0 && 1.0 < hi);
        assert!((hi - 4.311_070).abs() < 1e-6);
        assert!((lo - 0.373_365).abs() < 1e-6, "{lo} {hi}");
    }

    #[test]
    fn empirical_moments() {
        let e = EmpiricalDistribution::from_counts(&[1u32, 2, 3, 4]).unwrap();
        assert_eq!(e.mean(), 2.5);
        assert!((e.variance() - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(e.cdf(2.0), 0.5);
        assert!(is_nonincreasing(&[0.3, 0.2, 0.2, 0.1]));
        assert!(!is_nonincreasing(&[0.3, 0.31]));
    }
}
