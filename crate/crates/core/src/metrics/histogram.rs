use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::MetricsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Log10,
    Linear,
}

impl Scale {
    fn apply(self, v: f64) -> f64 {
        match self {
            Scale::Log10 => v.log10(),
            Scale::Linear => v,
        }
    }
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log10" => Ok(Scale::Log10),
            "linear" => Ok(Scale::Linear),
            other => Err(format!("unknown scale `{other}`")),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Log10 => "log10",
            Scale::Linear => "linear",
        })
    }
}

/// Slack for values that land on a bin edge up to rounding, such as
/// log10(1000) = 2.9999999999999996.
const EDGE_EPS: f64 = 1e-9;

/// Edge `k` of a grid with spacing `width`, on the transformed scale. Widths
/// that are reciprocals of integers divide instead of multiply so that edges
/// print as 0.3 rather than 0.30000000000000004.
fn edge(k: i64, width: f64) -> f64 {
    let per_unit = (1.0 / width).round();
    if per_unit >= 1.0 && (1.0 / width - per_unit).abs() < 1e-9 {
        k as f64 / per_unit
    } else {
        k as f64 * width
    }
}

/// Equal-width histogram on a grid anchored at zero: bin `k` covers
/// `[k·w, (k+1)·w)` on the transformed scale. Only bins from the lowest to the
/// highest occupied one are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub scale: Scale,
    pub bin_width: f64,
    pub first_bin: i64,
    pub counts: Vec<u64>,
    pub n: u64,
}

impl Histogram {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        (0..=self.counts.len() as i64)
            .map(|i| edge(self.first_bin + i, self.bin_width))
            .collect()
    }

    pub fn proportions(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    fn proportion_at(&self, k: i64) -> f64 {
        let i = k - self.first_bin;
        if i < 0 || i >= self.counts.len() as i64 {
            0.0
        } else {
            self.counts[i as usize] as f64 / self.n as f64
        }
    }
}

pub fn histogram(values: &[f64], scale: Scale, bin_width: f64) -> Result<Histogram, MetricsError> {
    histogram_labeled(values, |i| format!("#{i}"), scale, bin_width)
}

/// As [`histogram`], with `label(i)` naming value `i` in error messages.
pub fn histogram_labeled(
    values: &[f64],
    label: impl Fn(usize) -> String,
    scale: Scale,
    bin_width: f64,
) -> Result<Histogram, MetricsError> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(MetricsError::BadBinWidth(bin_width));
    }
    if values.is_empty() {
        return Err(MetricsError::EmptyHistogram);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite(label(i)));
    }
    if scale == Scale::Log10 {
        let offending: Vec<String> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v <= 0.0)
            .map(|(i, _)| label(i))
            .collect();
        if !offending.is_empty() {
            return Err(MetricsError::NonPositive { offending });
        }
    }
    let bins: Vec<i64> = values
        .iter()
        .map(|&v| (scale.apply(v) / bin_width + EDGE_EPS).floor() as i64)
        .collect();
    let lo = *bins.iter().min().expect("nonempty");
    let hi = *bins.iter().max().expect("nonempty");
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for k in bins {
        counts[(k - lo) as usize] += 1;
    }
    Ok(Histogram {
        scale,
        bin_width,
        first_bin: lo,
        counts,
        n: values.len() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramDelta {
    pub scale: Scale,
    pub bin_width: f64,
    pub first_bin: i64,
    /// Later proportion minus baseline proportion, per bin.
    pub deltas: Vec<f64>,
}

impl HistogramDelta {
    pub fn bin_count(&self) -> usize {
        self.deltas.len()
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        (0..=self.deltas.len() as i64)
            .map(|i| edge(self.first_bin + i, self.bin_width))
            .collect()
    }
}

/// Rebins both histograms onto the union of their bin ranges and subtracts.
pub fn histogram_delta(baseline: &Histogram, later: &Histogram) -> Result<HistogramDelta, MetricsError> {
    if baseline.scale != later.scale {
        return Err(MetricsError::MismatchedBins("scale"));
    }
    if baseline.bin_width != later.bin_width {
        return Err(MetricsError::MismatchedBins("bin width"));
    }
    let lo = baseline.first_bin.min(later.first_bin);
    let hi = (baseline.first_bin + baseline.counts.len() as i64).max(later.first_bin + later.counts.len() as i64);
    let deltas = (lo..hi)
        .map(|k| later.proportion_at(k) - baseline.proportion_at(k))
        .collect();
    Ok(HistogramDelta {
        scale: baseline.scale,
        bin_width: baseline.bin_width,
        first_bin: lo,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decades() {
        let h = histogram(&[1.0, 10.0, 100.0], Scale::Log10, 1.0).unwrap();
        assert_eq!(h.bin_edges(), [0.0, 1.0, 2.0, 3.0]);
        for p in h.proportions() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn edge_values_round_up_into_their_bin() {
        let h = histogram(&[1000.0, 999.0], Scale::Log10, 0.1).unwrap();
        assert_eq!(h.first_bin, 29);
        assert_eq!(h.counts, [1, 1]);
        assert_eq!(h.bin_edges(), [2.9, 3.0, 3.1]);
    }

    #[test]
    fn identical_values_single_bin() {
        let h = histogram(&[2.5; 7], Scale::Linear, 0.25).unwrap();
        assert_eq!(h.proportions(), [1.0]);
        assert_eq!(h.bin_edges(), [2.5, 2.75]);
    }

    #[test]
    fn log_scale_rejects_zero() {
        let err = histogram_labeled(
            &[3.0, 0.0, -1.0],
            |i| format!("/title:1/section:{i}"),
            Scale::Log10,
            0.1,
        )
        .unwrap_err();
        assert_eq!(
            err,
            MetricsError::NonPositive {
                offending: vec!["/title:1/section:1".into(), "/title:1/section:2".into()]
            }
        );
    }

    #[test]
    fn deltas() {
        let a = histogram(&[0.1, 0.1, 1.1], Scale::Linear, 1.0).unwrap();
        let same = histogram_delta(&a, &a).unwrap();
        assert!(same.deltas.iter().all(|&d| d == 0.0));
        let b = histogram(&[1.1, 1.1, 2.2, 3.3], Scale::Linear, 1.0).unwrap();
        let d = histogram_delta(&a, &b).unwrap();
        assert_eq!(d.first_bin, 0);
        assert_eq!(d.bin_count(), 4);
        assert!(d.deltas.iter().sum::<f64>().abs() < 1e-12);
        assert!((d.deltas[0] + 2.0 / 3.0).abs() < 1e-15);
        let c = histogram(&[1.0], Scale::Linear, 0.5).unwrap();
        assert_eq!(histogram_delta(&a, &c), Err(MetricsError::MismatchedBins("bin width")));
    }
}
