//! Caputo derivatives of order α ∈ (0, 1) by the uniform-grid L1 scheme, and
//! Riemann–Liouville fractional integrals by product quadrature.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfBand(format!("fractional order must lie in (0, 1), got {alpha}")))
    }
}

/// L1 weights b_j = (j+1)^{1−α} − j^{1−α}, j = 0..n−1 (unscaled).
pub fn l1_weights(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::TooShort { need: 1, got: 0 });
    }
    let e = 1.0 - alpha;
    Ok((0..n).map(|j| ((j + 1) as f64).powf(e) - (j as f64).powf(e)).collect())
}

/// Past samples of a scalar or vector quantity on a uniform time grid.
///
/// Sample 0 is the value at t = 0; every accepted step pushes one more.
#[derive(Debug, Clone)]
pub struct FractionalHistory {
    alpha: f64,
    dt: f64,
    width: usize,
    scale: f64,
    samples: Vec<f64>,
    weights: Vec<f64>,
}

impl FractionalHistory {
    pub fn new(alpha: f64, dt: f64, width: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if !(dt > 0.0) {
            return Err(Error::Invalid(format!("history step must be > 0, got {dt}")));
        }
        if width == 0 {
            return Err(Error::Invalid("history width must be ≥ 1".into()));
        }
        Ok(Self {
            alpha,
            dt,
            width,
            scale: dt.powf(-alpha) / gamma(2.0 - alpha),
            samples: Vec::new(),
            weights: Vec::new(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of stored time levels.
    pub fn len(&self) -> usize {
        self.samples.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// dt^{−α}/Γ(2−α), the factor multiplying b_0 in front of the current value.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sample(&self, level: usize) -> &[f64] {
        &self.samples[level * self.width..(level + 1) * self.width]
    }

    pub fn push(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.width {
            return Err(Error::SizeMismatch {
                expected: self.width,
                got: values.len(),
            });
        }
        self.samples.extend_from_slice(values);
        Ok(())
    }

    fn ensure_weights(&mut self, n: usize) {
        if self.weights.len() < n {
            let e = 1.0 - self.alpha;
            for j in self.weights.len()..n {
                self.weights.push(((j + 1) as f64).powf(e) - (j as f64).powf(e));
            }
        }
    }

    /// Memory part of the L1 derivative at the next time level: with stored
    /// levels f_0..f_{n−1} and the unknown f_n,
    /// `D^α f_n = scale·(f_n − f_{n−1}) + memory`. Writes `memory` into `out`.
    pub fn memory(&mut self, out: &mut [f64]) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::TooShort { need: 1, got: 0 });
        }
        if out.len() != self.width {
            return Err(Error::SizeMismatch {
                expected: self.width,
                got: out.len(),
            });
        }
        self.ensure_weights(n);
        out.iter_mut().for_each(|o| *o = 0.0);
        let w = self.width;
        // Σ_{j=1}^{n−1} b_j (f_{n−j} − f_{n−j−1})
        for j in 1..n {
            let b = self.weights[j];
            let hi = &self.samples[(n - j) * w..(n - j + 1) * w];
            let lo = &self.samples[(n - j - 1) * w..(n - j) * w];
            for ((o, a), c) in out.iter_mut().zip(hi).zip(lo) {
                *o += b * (a - c);
            }
        }
        let s = self.scale;
        out.iter_mut().for_each(|o| *o *= s);
        Ok(())
    }

    /// L1 Caputo derivative at the level following the stored ones, given
    /// the value there.
    pub fn caputo_apply(&mut self, current: &[f64], out: &mut [f64]) -> Result<()> {
        self.memory(out)?;
        if current.len() != self.width {
            return Err(Error::SizeMismatch {
                expected: self.width,
                got: current.len(),
            });
        }
        let last = self.sample(self.len() - 1).to_vec();
        for ((o, c), l) in out.iter_mut().zip(current).zip(&last) {
            *o += self.scale * (c - l);
        }
        Ok(())
    }
}

/// Scalar convenience: L1 Caputo derivative at the last sample of `samples`.
pub fn caputo_derivative(samples: &[f64], dt: f64, alpha: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::TooShort {
            need: 2,
            got: samples.len(),
        });
    }
    let mut h = FractionalHistory::new(alpha, dt, 1)?;
    for s in &samples[..samples.len() - 1] {
        h.push(std::slice::from_ref(s))?;
    }
    let mut out = [0.0];
    h.caputo_apply(&samples[samples.len() - 1..], &mut out)?;
    Ok(out[0])
}

/// Quadrature rule for [`fractional_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    #[default]
    LeftRectangle,
    Trapezoid,
}

/// I^y f at every sample time of a uniform series starting at t = 0.
///
/// The kernel (t−s)^{y−1}/Γ(y) is integrated exactly on each cell; f is
/// taken piecewise constant (left value) or piecewise linear.
pub fn fractional_integral(samples: &[f64], dt: f64, y: f64, rule: Quadrature) -> Result<Vec<f64>> {
    if !(y > 0.0) {
        return Err(Error::OutOfBand(format!("integral order must be > 0, got {y}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("step must be > 0, got {dt}")));
    }
    let n = samples.len();
    let mut out = vec![0.0; n];
    if n == 0 {
        return Ok(out);
    }
    // m_k = ∫_{k}^{k+1} u^{y−1} du (units of dt) = ((k+1)^y − k^y)/y
    let g1 = gamma(y + 1.0);
    let a: Vec<f64> = (0..n).map(|k| (((k + 1) as f64).powf(y) - (k as f64).powf(y)) / g1).collect();
    let sc = dt.powf(y);
    match rule {
        Quadrature::LeftRectangle => {
            for i in 1..n {
                let mut acc = 0.0;
                for j in 0..i {
                    acc += a[i - 1 - j] * samples[j];
                }
                out[i] = sc * acc;
            }
        }
        Quadrature::Trapezoid => {
            // f linear on each cell; with u = t_i − s the cell [j, j+1]
            // maps to [k−1, k], k = i − j.
            let g2 = gamma(y + 2.0);
            for i in 1..n {
                let mut acc = 0.0;
                for j in 0..i {
                    let k = (i - j) as f64;
                    // ∫_{k−1}^{k} u^{y−1} (u − (k−1)) du, the share of f_j
                    let w_lo =
                        (y * k.powf(y + 1.0) - (y + 1.0) * (k - 1.0) * k.powf(y) + (k - 1.0).powf(y + 1.0)) / g2;
                    let w_total = (k.powf(y) - (k - 1.0).powf(y)) / g1;
                    let w_hi = w_total - w_lo;
                    acc += w_lo * samples[j] + w_hi * samples[j + 1];
                }
                out[i] = sc * acc;
            }
        }
    }
    Ok(out)
}
