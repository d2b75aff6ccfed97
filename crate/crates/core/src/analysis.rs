//! Spectra, harmonic content, convergence-order fits and waveform asymmetry.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::ode::{resample, BubbleTrajectory, UniformSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    None,
    #[default]
    Hann,
}

/// One-sided magnitude spectrum, normalized by the series length.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub df: f64,
    pub magnitudes: Vec<f64>,
    pub window: Window,
    /// Length of the transformed series.
    pub n: usize,
}

impl Spectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.df
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.magnitudes.len()).map(|k| self.frequency(k)).collect()
    }

    pub fn nyquist(&self) -> f64 {
        self.frequency(self.magnitudes.len() - 1)
    }

    pub fn bin_of(&self, f: f64) -> usize {
        ((f / self.df).round().max(0.0) as usize).min(self.magnitudes.len() - 1)
    }

    /// Largest magnitude within ±`tol` bins of `f`.
    pub fn peak_near(&self, f: f64, tol: usize) -> f64 {
        let b = self.bin_of(f);
        let lo = b.saturating_sub(tol);
        let hi = (b + tol).min(self.magnitudes.len() - 1);
        self.magnitudes[lo..=hi].iter().copied().fold(0.0, f64::max)
    }

    /// Whether a local maximum of the magnitudes lies within ±`tol` bins of `f`.
    pub fn has_local_max_near(&self, f: f64, tol: usize) -> bool {
        let m = &self.magnitudes;
        let b = self.bin_of(f);
        let lo = b.saturating_sub(tol).max(1);
        let hi = (b + tol).min(m.len() - 2);
        (lo..=hi).any(|k| m[k] > m[k - 1] && m[k] >= m[k + 1])
    }

    /// Σx² of the transformed (mean-removed, windowed) series recovered from
    /// the one-sided magnitudes.
    pub fn energy(&self) -> f64 {
        let n = self.n as f64;
        let m = &self.magnitudes;
        let last = m.len() - 1;
        let mut s = m[0] * m[0];
        for (k, v) in m.iter().enumerate().skip(1) {
            let twice = !(self.n.is_multiple_of(2) && k == last);
            s += if twice { 2.0 * v * v } else { v * v };
        }
        n * s
    }
}

fn prepared(values: &[f64], window: Window) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = match window {
                Window::None => 1.0,
                Window::Hann => 0.5 * (1.0 - (2.0 * PI * i as f64 / n as f64).cos()),
            };
            (v - mean) * w
        })
        .collect()
}

/// Magnitude spectrum of the mean-removed, optionally windowed series.
pub fn fft_spectrum(series: &UniformSeries, window: Window) -> Result<Spectrum> {
    let n = series.values.len();
    if n < 8 {
        return Err(Error::TooShort { need: 8, got: n });
    }
    let mut buf: Vec<Complex<f64>> = prepared(&series.values, window)
        .into_iter()
        .map(|v| Complex::new(v, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let magnitudes = buf[..=n / 2].iter().map(|c| c.norm() / n as f64).collect();
    Ok(Spectrum {
        df: 1.0 / (n as f64 * series.dt),
        magnitudes,
        window,
        n,
    })
}

/// Σx² of the mean-removed, windowed series (the time-domain side of
/// Parseval's identity).
pub fn series_energy(series: &UniformSeries, window: Window) -> f64 {
    prepared(&series.values, window).iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMetrics {
    pub fundamental: f64,
    /// Amplitudes at 2f..5f; harmonics above the Nyquist frequency are 0.
    pub harmonics: [f64; 4],
    pub subharmonic: f64,
    pub thd: f64,
}

/// Peak magnitudes near f, 2f..5f and f/2, and THD = √(Σ harmonics²)/fundamental.
pub fn harmonic_metrics(spec: &Spectrum, f_drive: f64, tol_bins: usize) -> Result<HarmonicMetrics> {
    if !(f_drive > 0.0) || f_drive > spec.nyquist() {
        return Err(Error::OutOfBand(format!(
            "drive frequency {f_drive} Hz outside (0, {}] Hz",
            spec.nyquist()
        )));
    }
    let fundamental = spec.peak_near(f_drive, tol_bins);
    let mut harmonics = [0.0; 4];
    for (i, h) in harmonics.iter_mut().enumerate() {
        let f = (i + 2) as f64 * f_drive;
        if f <= spec.nyquist() {
            *h = spec.peak_near(f, tol_bins);
        }
    }
    let thd = if fundamental > 0.0 {
        harmonics.iter().map(|h| h * h).sum::<f64>().sqrt() / fundamental
    } else {
        0.0
    };
    Ok(HarmonicMetrics {
        fundamental,
        harmonics,
        subharmonic: spec.peak_near(0.5 * f_drive, tol_bins),
        thd,
    })
}

/// R(t) over the last `periods` drive periods, resampled at `n` points.
pub fn analysis_window(traj: &BubbleTrajectory, f_drive: f64, periods: f64, n: usize) -> Result<UniformSeries> {
    let t_end = *traj.times.last().ok_or(Error::TooShort { need: 2, got: 0 })?;
    let t_start = (t_end - periods / f_drive).max(traj.times[0]);
    resample(&traj.times, &traj.radii, t_start, t_end, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of log(error) against log(step).
    pub order: f64,
    /// False if the errors do not decrease monotonically.
    pub monotone: bool,
}

/// Fits the observed order from errors at the given step sizes.
pub fn fit_order(steps: &[f64], errors: &[f64]) -> Result<ConvergenceStudy> {
    if steps.len() != errors.len() {
        return Err(Error::SizeMismatch {
            expected: steps.len(),
            got: errors.len(),
        });
    }
    if steps.len() < 3 {
        return Err(Error::TooShort {
            need: 3,
            got: steps.len(),
        });
    }
    if steps.iter().chain(errors).any(|v| !(*v > 0.0)) {
        return Err(Error::Invalid("steps and errors must be positive".into()));
    }
    let x: Vec<f64> = steps.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(ConvergenceStudy {
        steps: steps.to_vec(),
        errors: errors.to_vec(),
        order: sxy / sxx,
        monotone: errors.windows(2).all(|w| w[1] < w[0]),
    })
}

/// Runs `error_at(dt)` for each step and fits the order.
pub fn convergence_order<F>(steps: &[f64], mut error_at: F) -> Result<ConvergenceStudy>
where
    F: FnMut(f64) -> Result<f64>,
{
    if steps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Invalid("step sizes must decrease".into()));
    }
    let errors = steps.iter().map(|&dt| error_at(dt)).collect::<Result<Vec<f64>>>()?;
    fit_order(steps, &errors)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Skewness {
    /// max(p)/|min(p)|
    pub peak_ratio: f64,
    /// max|dp/dt| / (A·2πf) with A half the peak-to-peak swing.
    pub normalized_slope: f64,
    pub amplitude: f64,
}

pub fn waveform_skewness(series: &UniformSeries, f_drive: f64) -> Result<Skewness> {
    let v = &series.values;
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > min) {
        return Err(Error::Invalid("waveform is constant".into()));
    }
    if !(f_drive > 0.0) {
        return Err(Error::Invalid("drive frequency must be > 0".into()));
    }
    let amplitude = 0.5 * (max - min);
    let slope = v
        .windows(3)
        .map(|w| ((w[2] - w[0]) / (2.0 * series.dt)).abs())
        .fold(0.0, f64::max);
    Ok(Skewness {
        peak_ratio: if min < 0.0 { max / min.abs() } else { f64::INFINITY },
        normalized_slope: slope / (amplitude * 2.0 * PI * f_drive),
        amplitude,
    })
}
