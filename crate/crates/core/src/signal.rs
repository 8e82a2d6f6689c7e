//! Frequency extraction from late-time population records: Hann-windowed
//! FFT of the tail of a trajectory, with peak picking and sub-bin
//! refinement. Persistent beats between bound states show up as peaks at
//! their energy differences.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// Angular frequency resolution of the windowed tail: one FFT bin.
pub fn bin_width(times: &[f64], tail_fraction: f64) -> f64 {
    let n = times.len();
    let start = tail_start(n, tail_fraction);
    let span = times[n - 1] - times[start];
    2.0 * PI / span
}

fn tail_start(n: usize, tail_fraction: f64) -> usize {
    let keep = ((n as f64) * tail_fraction).round() as usize;
    n - keep.clamp(2, n)
}

/// Dominant angular frequencies of the final `tail_fraction` of a
/// uniformly sampled series, sorted ascending.
///
/// The tail is mean-subtracted and Hann-windowed; every local spectral
/// maximum above `threshold` times the tallest peak is reported, with a
/// three-point parabolic refinement of the bin position.
pub fn extract_frequencies(
    times: &[f64],
    values: &[f64],
    tail_fraction: f64,
    threshold: f64,
) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    assert!(times.len() >= 8, "need at least a few samples");
    assert!(tail_fraction > 0.0 && tail_fraction <= 1.0);
    let n_total = times.len();
    let start = tail_start(n_total, tail_fraction);
    let tail = &values[start..];
    let n = tail.len();
    let dt = (times[n_total - 1] - times[start]) / (n - 1) as f64;
    let mean = tail.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<C64> = tail
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let hann = 0.5 * (1.0 - (2.0 * PI * i as f64 / (n - 1) as f64).cos());
            C64::new((v - mean) * hann, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf.iter().take(n / 2 + 1).map(|z| z.norm()).collect();
    let tallest = mags.iter().skip(1).cloned().fold(0.0, f64::max);
    if tallest <= 0.0 {
        return Vec::new();
    }
    let mut freqs = Vec::new();
    for i in 1..mags.len() - 1 {
        if mags[i] >= threshold * tallest && mags[i] > mags[i - 1] && mags[i] >= mags[i + 1] {
            let denom = mags[i - 1] - 2.0 * mags[i] + mags[i + 1];
            let delta = if denom.abs() > 1e-300 {
                (0.5 * (mags[i - 1] - mags[i + 1]) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            };
            freqs.push(2.0 * PI * (i as f64 + delta) / (n as f64 * dt));
        }
    }
    freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    freqs
}
