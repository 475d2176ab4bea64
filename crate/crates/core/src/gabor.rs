//! Gabor transform with the normalized Gaussian window.
//!
//! For a stored spectral profile P on [-B, B] the transform is computed in
//! the spectral domain: 𝒢f(x,ω) = e^{-2πixω} Σ_j P(η_j) φ(η_j+ω) e^{-2πiη_j x} w_j,
//! with φ(t) = 2^{1/4} e^{-πt²}. This is exact for the model class up to
//! trapezoid error; `gabor_direct` is the independent time-domain quadrature
//! oracle used to keep the spectral path honest.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, LebesgueExponent};
use crate::signal::BandlimitedSignal;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Normalized Gaussian window φ(t) = 2^{1/4} e^{-πt²}, ‖φ‖₂ = 1.
pub fn gaussian_window(t: f64) -> f64 {
    std::f64::consts::SQRT_2.sqrt() * (-PI * t * t).exp()
}

/// Windowed spectral slice F_ω(η_j) = P(η_j)·φ(η_j + ω).
#[derive(Debug, Clone)]
pub struct SliceProfile {
    pub grid: FrequencyGrid,
    pub omega: f64,
    pub values: Vec<Complex64>,
}

/// Builds the slice profile of f at frequency ω.
pub fn slice_profile(f: &BandlimitedSignal, omega: f64) -> SliceProfile {
    let values = f
        .values()
        .iter()
        .zip(f.grid().nodes())
        .map(|(&v, &eta)| v * gaussian_window(eta + omega))
        .collect();
    SliceProfile {
        grid: f.grid().clone(),
        omega,
        values,
    }
}

/// Gabor transform via the spectral identity.
pub fn gabor_transform(f: &BandlimitedSignal, x: f64, omega: f64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for ((&v, &eta), &w) in f
        .values()
        .iter()
        .zip(f.grid().nodes())
        .zip(f.grid().weights())
    {
        acc += v * gaussian_window(eta + omega) * w * Complex64::cis(-TAU * eta * x);
    }
    acc * Complex64::cis(-TAU * x * omega)
}

/// Direct time-domain quadrature of 2^{1/4} ∫ f(t) e^{-π(t-x)²} e^{-2πitω} dt
/// over [-T, T] with step h. Oracle only; prefer `gabor_transform` for model
/// signals.
pub fn gabor_direct(
    f_time: &dyn Fn(f64) -> Complex64,
    x: f64,
    omega: f64,
    truncation: f64,
    step: f64,
) -> Complex64 {
    let n = ((2.0 * truncation) / step).round() as usize;
    let h = 2.0 * truncation / n as f64;
    let mut acc = Complex64::ZERO;
    for i in 0..=n {
        let t = -truncation + i as f64 * h;
        let w = if i == 0 || i == n { h / 2.0 } else { h };
        let window = (-PI * (t - x) * (t - x)).exp();
        acc += f_time(t) * window * Complex64::cis(-TAU * t * omega) * w;
    }
    acc * std::f64::consts::SQRT_2.sqrt()
}

/// Magnitude measurements |𝒢f| on a product set X × Ω, row-major by X index.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSamples {
    x: Vec<f64>,
    omega: Vec<f64>,
    magnitudes: Vec<f64>,
    b: f64,
}

impl ProductSamples {
    pub fn new(x: Vec<f64>, omega: Vec<f64>, magnitudes: Vec<f64>, b: f64) -> Result<Self> {
        if !strictly_increasing(&x) || !strictly_increasing(&omega) {
            return Err(Error::InvalidArgument(
                "sample coordinates must be strictly increasing".into(),
            ));
        }
        if magnitudes.len() != x.len() * omega.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} magnitudes, got {}",
                x.len() * omega.len(),
                magnitudes.len()
            )));
        }
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidArgument(
                "magnitudes must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            x,
            omega,
            magnitudes,
            b,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.x
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.omega
    }

    pub fn band(&self) -> f64 {
        self.b
    }

    pub fn magnitude(&self, i: usize, k: usize) -> f64 {
        self.magnitudes[i * self.omega.len() + k]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Largest entrywise gap to another measurement matrix on the same set.
    pub fn max_gap(&self, other: &ProductSamples) -> Result<f64> {
        if self.x != other.x || self.omega != other.omega {
            return Err(Error::GridMismatch(
                "measurement sets differ in coordinates".into(),
            ));
        }
        Ok(self
            .magnitudes
            .iter()
            .zip(&other.magnitudes)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|p| p[0] < p[1])
}

/// Samples |𝒢f| on X × Ω. Cells are independent; rows evaluate in parallel.
pub fn magnitude_samples(
    f: &BandlimitedSignal,
    x: &[f64],
    omega: &[f64],
) -> Result<ProductSamples> {
    if !strictly_increasing(x) || !strictly_increasing(omega) {
        return Err(Error::InvalidArgument(
            "sample coordinates must be strictly increasing".into(),
        ));
    }
    let magnitudes: Vec<f64> = x
        .par_iter()
        .flat_map_iter(|&xi| {
            omega
                .iter()
                .map(move |&om| gabor_transform(f, xi, om).norm())
                .collect::<Vec<_>>()
        })
        .collect();
    ProductSamples::new(x.to_vec(), omega.to_vec(), magnitudes, f.grid().half_width())
}

/// The Young exponents attached to a signal class: the squared magnitude of a
/// slice of a PW^p signal lives in PW^q_{2B} with 1 + 1/q = 2/p. The relation
/// has no admissible q for p > 2, so p is clamped at 2 (the spaces are nested
/// over a compact band), where q = ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    pub p: LebesgueExponent,
    pub q: LebesgueExponent,
}

pub fn young_exponent(p: LebesgueExponent) -> ExponentPair {
    let p_eff = p.get().min(2.0);
    let q = if p_eff == 2.0 {
        LebesgueExponent::INFINITY
    } else {
        LebesgueExponent::new(p_eff / (2.0 - p_eff)).expect("q >= 1 for p_eff in [1,2)")
    };
    ExponentPair { p, q }
}

/// Out-of-band energy fraction of the demodulated slice x ↦ e^{2πixω}𝒢f(x,ω),
/// which is bandlimited to [-B, B] for model signals. `t_window` and `x_step`
/// request the minimum span and maximum step; the actual span is snapped up so
/// that every grid frequency is an exact DFT bin, leaving only roundoff
/// outside the band. Returns 0 for the zero slice.
pub fn band_energy_ratio(f: &BandlimitedSignal, omega: f64, t_window: f64, x_step: f64) -> f64 {
    let samples = sample_slice(f, omega, t_window, x_step, false);
    out_of_band_fraction(&samples.values, samples.span, f.grid().half_width())
}

/// Same analysis for the squared-magnitude slice x ↦ |𝒢f(x,ω)|², band 2B.
pub fn band_energy_ratio_squared(
    f: &BandlimitedSignal,
    omega: f64,
    t_window: f64,
    x_step: f64,
) -> f64 {
    let samples = sample_slice(f, omega, t_window, x_step, true);
    out_of_band_fraction(&samples.values, samples.span, 2.0 * f.grid().half_width())
}

struct SliceSamples {
    values: Vec<Complex64>,
    span: f64,
}

fn sample_slice(
    f: &BandlimitedSignal,
    omega: f64,
    t_window: f64,
    x_step: f64,
    squared: bool,
) -> SliceSamples {
    let delta = f.grid().spacing();
    let m = f.grid().len();
    // smallest span L = k/δ with k·(M-1) even and L ≥ 2·t_window; then both
    // η_j·L and (η_j - η_l)·L are integers and the DFT sees exact bins
    let mut k = (2.0 * t_window * delta).ceil() as u64;
    if k == 0 {
        k = 1;
    }
    if (k * (m as u64 - 1)) % 2 == 1 {
        k += 1;
    }
    let span = k as f64 / delta;
    let n = (span / x_step).ceil() as usize;
    let h = span / n as f64;
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = -span / 2.0 + i as f64 * h;
            let g = gabor_transform(f, x, omega);
            if squared {
                Complex64::new(g.norm_sqr(), 0.0)
            } else {
                Complex64::cis(TAU * x * omega) * g
            }
        })
        .collect();
    SliceSamples { values, span }
}

/// Fraction of DFT energy at frequencies |ν| > band + 2 bins.
fn out_of_band_fraction(values: &[Complex64], span: f64, band: f64) -> f64 {
    let n = values.len();
    let mut total = 0.0;
    let mut outside = 0.0;
    let bin = 1.0 / span;
    for k in 0..n {
        let mut acc = Complex64::ZERO;
        for (i, v) in values.iter().enumerate() {
            acc += v * Complex64::cis(-TAU * (k * i) as f64 / n as f64);
        }
        let e = acc.norm_sqr();
        total += e;
        let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        if (signed * bin).abs() > band + 2.0 * bin {
            outside += e;
        }
    }
    if total > 0.0 {
        outside / total
    } else {
        0.0
    }
}

/// Grid autocorrelation of a slice profile on the difference grid over
/// [-2B, 2B]: the spectral content of the discrete forward model for
/// |𝒢f(·,ω)|². Entry d·δ holds Σ_j F(η_j) conj(F(η_{j-d})) w_j w_{j-d} / w^ξ_d.
pub fn autocorrelation_profile(slice: &SliceProfile) -> (FrequencyGrid, Vec<Complex64>) {
    let m = slice.grid.len();
    let xi_grid = FrequencyGrid::new(2.0 * slice.grid.half_width(), 2 * m - 1)
        .expect("difference grid of a valid grid is valid");
    let w = slice.grid.weights();
    let mut out = vec![Complex64::ZERO; 2 * m - 1];
    for (od, slot) in out.iter_mut().enumerate() {
        let d = od as i64 - (m as i64 - 1);
        let lo = d.max(0) as usize;
        let hi = ((m as i64 - 1) + d.min(0)) as usize;
        let mut acc = Complex64::ZERO;
        for j in lo..=hi {
            let l = (j as i64 - d) as usize;
            acc += slice.values[j] * slice.values[l].conj() * w[j] * w[l];
        }
        *slot = acc / xi_grid.weight(od);
    }
    (xi_grid, out)
}
