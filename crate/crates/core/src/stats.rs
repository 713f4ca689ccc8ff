//! Paired-sample statistics for benchmark reports.

use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wilcoxon {
    /// Sum of ranks of positive differences.
    pub w_plus: f64,
    /// Non-zero differences used.
    pub n: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
}

/// Wilcoxon signed-rank test on `x[i] - y[i]`. Zero differences are
/// dropped; tied magnitudes get mid-ranks. Exact for up to 20 pairs.
/// `None` when every difference is zero or the inputs differ in length.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Option<Wilcoxon> {
    if x.len() != y.len() {
        return None;
    }
    let mut d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|v| *v != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return None;
    }
    d.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    // Doubled mid-ranks stay integral.
    let mut rank2 = vec![0u64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && d[j + 1].abs() == d[i].abs() {
            j += 1;
        }
        for r in rank2.iter_mut().take(j + 1).skip(i) {
            *r = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    let w2: u64 = d.iter().zip(&rank2).filter(|(v, _)| **v > 0.0).map(|(_, r)| *r).sum();
    let w_plus = w2 as f64 / 2.0;

    if n <= 20 {
        let total: u64 = rank2.iter().sum();
        let mut counts = vec![0f64; total as usize + 1];
        counts[0] = 1.0;
        for &r in &rank2 {
            for s in (r as usize..counts.len()).rev() {
                counts[s] += counts[s - r as usize];
            }
        }
        let all: f64 = counts.iter().sum();
        let lower: f64 = counts[..=w2 as usize].iter().sum::<f64>() / all;
        let upper: f64 = counts[w2 as usize..].iter().sum::<f64>() / all;
        let p_value = (2.0 * lower.min(upper)).min(1.0);
        return Some(Wilcoxon { w_plus, n, p_value, exact: true });
    }

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && rank2[j + 1] == rank2[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = if var > 0.0 { (w_plus - mean) / var.sqrt() } else { 0.0 };
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p_value = (2.0 * (1.0 - normal.cdf(z.abs()))).min(1.0);
    Some(Wilcoxon { w_plus, n, p_value, exact: false })
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive_differences() {
        // Five positive differences: P(W+ = 15) = 1/32, two-sided 1/16.
        let w = wilcoxon_signed_rank(&[2.0, 3.0, 4.0, 5.0, 6.0], &[1.0; 5]).unwrap();
        assert_eq!(w.w_plus, 15.0);
        assert!((w.p_value - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn zeros_dropped_and_ties_midranked() {
        let w = wilcoxon_signed_rank(&[1.0, 2.0, 3.0, 5.0], &[1.0, 1.0, 4.0, 4.0]).unwrap();
        // Differences 0, 1, -1, 1: ranks 2, 2, 2.
        assert_eq!(w.n, 3);
        assert_eq!(w.w_plus, 4.0);
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn symmetric_sample_is_not_significant() {
        let x: Vec<f64> = (1..=30).map(f64::from).collect();
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| if i % 2 == 0 { v + 0.5 } else { v - 0.5 }).collect();
        let w = wilcoxon_signed_rank(&x, &y).unwrap();
        assert!(!w.exact);
        assert!(w.p_value > 0.5);
    }
}
