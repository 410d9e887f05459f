//! Discrete power-law fitting and goodness-of-fit testing.
//!
//! For each candidate lower cutoff `x_min` the exponent is the maximum
//! likelihood estimate under p(x) = x^(-α) / ζ(α, x_min), and the cutoff kept
//! is the one whose fitted tail is closest to the data in Kolmogorov-Smirnov
//! distance. The p-value comes from a semiparametric bootstrap: synthetic
//! samples draw from the fitted tail with probability n_tail / n and from the
//! observed values below the cutoff otherwise, and each is refit from scratch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::MetricsError;

/// B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Hurwitz zeta ζ(s, q) = Σ_{k≥0} (q + k)^(-s) for s > 1, q > 0, by
/// Euler-Maclaurin summation after ten explicit terms.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const DIRECT: u32 = 10;
    let mut sum = 0.0;
    for k in 0..DIRECT {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + DIRECT as f64;
    let a_s = a.powf(-s);
    let mut tail = a * a_s / (s - 1.0) + 0.5 * a_s;
    // c_j = s(s+1)...(s+2j-2) a^(-s-2j+1) / (2j)!
    let mut c = s * a_s / a / 2.0;
    let inv_a2 = 1.0 / (a * a);
    for (j, b) in BERNOULLI.iter().enumerate() {
        tail += b * c;
        let j = (j + 1) as f64;
        c *= (s + 2.0 * j - 1.0) * (s + 2.0 * j) / ((2.0 * j + 1.0) * (2.0 * j + 2.0)) * inv_a2;
    }
    sum + tail
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Rejected,
    NotRejected,
    /// Too few observations, or no bootstrap run.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawOptions {
    pub bootstrap_n: usize,
    pub seed: u64,
    /// Reject when the p-value falls below this.
    pub threshold: f64,
    /// Search interval for the exponent.
    pub alpha_range: (f64, f64),
    /// Below this many observations the verdict is inconclusive.
    pub min_observations: usize,
}

impl Default for PowerLawOptions {
    fn default() -> Self {
        PowerLawOptions {
            bootstrap_n: 1000,
            seed: 0,
            threshold: 0.1,
            alpha_range: (1.5, 3.5),
            min_observations: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub x_min: u64,
    pub alpha: f64,
    pub ks_statistic: f64,
    pub p_value: Option<f64>,
    pub n: usize,
    pub n_tail: usize,
    pub bootstrap_n: usize,
    pub verdict: Verdict,
}

/// Sorted distinct values with multiplicities and the suffix sums needed to
/// evaluate any cutoff in O(1) before the tail scan.
struct Summary {
    values: Vec<u64>,
    counts: Vec<usize>,
    /// Observations strictly below `values[i]`.
    below: Vec<usize>,
    /// Σ count·ln(value) over `values[i..]`.
    log_suffix: Vec<f64>,
    n: usize,
}

impl Summary {
    fn new(data: &[u64]) -> Self {
        let mut sorted = data.to_vec();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for x in sorted {
            if values.last() == Some(&x) {
                *counts.last_mut().expect("parallel vectors") += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        let mut below = Vec::with_capacity(values.len());
        let mut acc = 0;
        for &c in &counts {
            below.push(acc);
            acc += c;
        }
        let mut log_suffix = vec![0.0; values.len() + 1];
        for i in (0..values.len()).rev() {
            log_suffix[i] = log_suffix[i + 1] + counts[i] as f64 * (values[i] as f64).ln();
        }
        Summary {
            values,
            counts,
            below,
            log_suffix,
            n: data.len(),
        }
    }

    /// Exponent and KS distance for the cutoff `values[i]`.
    fn fit_at(&self, i: usize, range: (f64, f64)) -> (f64, f64) {
        let x_min = self.values[i] as f64;
        let n_tail = (self.n - self.below[i]) as f64;
        let log_sum = self.log_suffix[i];
        let neg_log_lik = |a: f64| n_tail * hurwitz_zeta(a, x_min).ln() + a * log_sum;
        let alpha = golden_min(neg_log_lik, range.0, range.1, 1e-7);
        let z = hurwitz_zeta(alpha, x_min);
        let mut seen = 0usize;
        let mut d: f64 = 0.0;
        for j in i..self.values.len() {
            seen += self.counts[j];
            let emp = seen as f64 / n_tail;
            let fit = 1.0 - hurwitz_zeta(alpha, self.values[j] as f64 + 1.0) / z;
            d = d.max((emp - fit).abs());
        }
        (alpha, d)
    }

    /// Best cutoff by KS distance; ties keep the smaller cutoff.
    fn best(&self, range: (f64, f64)) -> (usize, f64, f64) {
        let candidates = self.values.len() - 1;
        let fits: Vec<(f64, f64)> = (0..candidates).into_par_iter().map(|i| self.fit_at(i, range)).collect();
        let mut best = (0, fits[0].0, fits[0].1);
        for (i, &(alpha, d)) in fits.iter().enumerate().skip(1) {
            if d < best.2 {
                best = (i, alpha, d);
            }
        }
        best
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

/// Inverse-CDF draw from the discrete power law on [x_min, ∞): the largest x
/// with P(X ≥ x) ≥ u.
fn sample_tail(alpha: f64, x_min: u64, z_min: f64, u: f64) -> u64 {
    const CAP: u64 = 1 << 52;
    let ccdf = |x: u64| hurwitz_zeta(alpha, x as f64) / z_min;
    let guess = ((x_min as f64 - 0.5) * u.powf(-1.0 / (alpha - 1.0)) + 0.5).floor();
    let mut lo = if guess.is_finite() {
        (guess as u64).clamp(x_min, CAP)
    } else {
        CAP
    };
    let mut hi;
    if ccdf(lo) >= u {
        let mut step = 1;
        loop {
            hi = lo.saturating_add(step).min(CAP);
            if hi == CAP || ccdf(hi) < u {
                break;
            }
            lo = hi;
            step *= 2;
        }
        if hi == CAP && ccdf(hi) >= u {
            return CAP;
        }
    } else {
        hi = lo;
        let mut step = 1;
        loop {
            lo = hi.saturating_sub(step).max(x_min);
            if ccdf(lo) >= u {
                break;
            }
            hi = lo;
            step *= 2;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ccdf(mid) >= u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Fit with default options apart from the bootstrap size and seed.
pub fn fit_power_law(data: &[u64], bootstrap_n: usize, seed: u64) -> Result<PowerLawFit, MetricsError> {
    fit_power_law_with(
        data,
        PowerLawOptions {
            bootstrap_n,
            seed,
            ..PowerLawOptions::default()
        },
    )
}

pub fn fit_power_law_with(data: &[u64], options: PowerLawOptions) -> Result<PowerLawFit, MetricsError> {
    if let Some(&bad) = data.iter().find(|&&x| x == 0) {
        return Err(MetricsError::NonPositiveDegree(bad));
    }
    let summary = Summary::new(data);
    if summary.values.len() < 2 {
        return Err(MetricsError::Degenerate);
    }
    let (i, alpha, ks) = summary.best(options.alpha_range);
    let x_min = summary.values[i];
    let n = summary.n;
    let n_tail = n - summary.below[i];

    let p_value = (options.bootstrap_n > 0).then(|| {
        let below: Vec<u64> = {
            let mut v = data.iter().copied().filter(|&x| x < x_min).collect::<Vec<_>>();
            v.sort_unstable();
            v
        };
        let z_min = hurwitz_zeta(alpha, x_min as f64);
        let tail_share = n_tail as f64 / n as f64;
        let exceed: usize = (0..options.bootstrap_n)
            .into_par_iter()
            .map(|rep| {
                let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
                rng.set_stream(rep as u64);
                let sample: Vec<u64> = (0..n)
                    .map(|_| {
                        if below.is_empty() || rng.gen::<f64>() < tail_share {
                            let u = 1.0 - rng.gen::<f64>();
                            sample_tail(alpha, x_min, z_min, u)
                        } else {
                            below[rng.gen_range(0..below.len())]
                        }
                    })
                    .collect();
                let s = Summary::new(&sample);
                if s.values.len() < 2 {
                    return 0;
                }
                usize::from(s.best(options.alpha_range).2 >= ks)
            })
            .sum();
        exceed as f64 / options.bootstrap_n as f64
    });

    let verdict = match p_value {
        _ if n < options.min_observations => Verdict::Inconclusive,
        None => Verdict::Inconclusive,
        Some(p) if p < options.threshold => Verdict::Rejected,
        Some(_) => Verdict::NotRejected,
    };
    Ok(PowerLawFit {
        x_min,
        alpha,
        ks_statistic: ks,
        p_value,
        n,
        n_tail,
        bootstrap_n: options.bootstrap_n,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-13);
        // ζ(2, 3) = π²/6 − 1 − 1/4
        assert!((hurwitz_zeta(2.0, 3.0) - (pi * pi / 6.0 - 1.25)).abs() < 1e-13);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_2).abs() < 1e-13);
    }

    #[test]
    fn zeta_matches_partial_sum() {
        let s = 2.5;
        let direct: f64 =
            (5..2_000_000u64).map(|k| (k as f64).powf(-s)).sum::<f64>() + (2_000_000f64).powf(1.0 - s) / (s - 1.0);
        assert!((hurwitz_zeta(s, 5.0) - direct).abs() < 1e-9);
    }

    #[test]
    fn tail_sampler_inverts_ccdf() {
        let (alpha, x_min) = (2.5, 3u64);
        let z = hurwitz_zeta(alpha, x_min as f64);
        for u in [1.0, 0.9, 0.5, 0.1, 1e-3, 1e-6] {
            let x = sample_tail(alpha, x_min, z, u);
            assert!(hurwitz_zeta(alpha, x as f64) / z >= u);
            assert!(hurwitz_zeta(alpha, x as f64 + 1.0) / z < u);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(fit_power_law(&[4; 100], 0, 1), Err(MetricsError::Degenerate));
        assert_eq!(fit_power_law(&[0, 1, 2], 0, 1), Err(MetricsError::NonPositiveDegree(0)));
    }

    #[test]
    fn small_samples_are_inconclusive() {
        let fit = fit_power_law(&[1, 1, 2, 3, 5, 8, 13], 10, 3).unwrap();
        assert_eq!(fit.verdict, Verdict::Inconclusive);
        assert!(fit.p_value.is_some());
    }

    #[test]
    fn seeded_bootstrap_repeats() {
        let data: Vec<u64> = (1..=200u64).map(|i| 1 + 400 / i).collect();
        let a = fit_power_law(&data, 20, 11).unwrap();
        let b = fit_power_law(&data, 20, 11).unwrap();
        assert_eq!(a, b);
    }
}
