//! Fractional Fourier transform on grid profiles and rotation of the
//! time-frequency plane.
//!
//! `frft_apply` is the reference quadrature of the defining integral
//! ℱ_θf(ξ) = c_θ e^{πiξ²cotθ} ∫ f(t) e^{πit²cotθ} e^{-2πitξ/sinθ} dt on a
//! symmetric grid, with exact special cases at multiples of π (identity /
//! reflection) and at π/2 + πZ (plain Fourier quadrature). `frft_signal`
//! transforms a bandlimited signal by evaluating the transform of its
//! quadrature measure in closed form on a wide padded grid: the rotation of
//! a band-supported profile is not band-supported, so the padded band must
//! cover the Gaussian window reach of every frequency the caller will probe.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::signal::BandlimitedSignal;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Angle threshold for the identity/reflection branch.
pub const SINGULAR_ANGLE_TOL: f64 = 1e-6;
/// Angle threshold for the plain-Fourier branch.
pub const QUARTER_TURN_TOL: f64 = 1e-12;

/// Chirp parameters of ℱ_θ for sinθ ≠ 0.
#[derive(Debug, Clone, Copy)]
pub struct FrftParams {
    pub theta: f64,
    /// Square root of 1 - i·cotθ with positive real part.
    pub c_theta: Complex64,
}

impl FrftParams {
    /// None at multiples of π, where the transform is the identity or the
    /// reflection and the chirp constant is undefined.
    pub fn new(theta: f64) -> Option<Self> {
        if theta.sin().abs() < SINGULAR_ANGLE_TOL {
            return None;
        }
        // quarter turns have no chirp: cot snaps to 0 so c_{π/2} = 1 exactly
        let half_offset = (theta.rem_euclid(PI) - PI / 2.0).abs();
        let cot = if half_offset < QUARTER_TURN_TOL {
            0.0
        } else {
            theta.cos() / theta.sin()
        };
        let mut c = Complex64::new(1.0, -cot).sqrt();
        if c.re < 0.0 {
            c = -c;
        }
        Some(Self { theta, c_theta: c })
    }
}

/// A point of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfPoint {
    pub x: f64,
    pub omega: f64,
}

/// R_θ(x,ω) = (x cosθ - ω sinθ, x sinθ + ω cosθ).
pub fn rotate_point(theta: f64, pt: TfPoint) -> TfPoint {
    let (s, c) = theta.sin_cos();
    TfPoint {
        x: pt.x * c - pt.omega * s,
        omega: pt.x * s + pt.omega * c,
    }
}

/// {R_θ(ω, x) : ω ∈ Ω, x ∈ X} in row-major order (Ω outer).
pub fn rotate_product_set(theta: f64, omega: &[f64], x: &[f64]) -> Vec<TfPoint> {
    let mut out = Vec::with_capacity(omega.len() * x.len());
    for &om in omega {
        for &xi in x {
            out.push(rotate_point(theta, TfPoint { x: om, omega: xi }));
        }
    }
    out
}

fn reduce_angle(theta: f64) -> f64 {
    theta.rem_euclid(TAU)
}

/// Quadrature FrFT of grid samples over a symmetric grid [-A, A].
pub fn frft_apply(values: &[Complex64], grid: &FrequencyGrid, theta: f64) -> Result<Vec<Complex64>> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples on a {}-node grid",
            values.len(),
            grid.len()
        )));
    }
    let th = reduce_angle(theta);
    let m = values.len();

    // identity / reflection at multiples of pi
    let k = (th / PI).round() as i64;
    if (th - k as f64 * PI).abs() < SINGULAR_ANGLE_TOL {
        return Ok(if k.rem_euclid(2) == 0 {
            values.to_vec()
        } else {
            (0..m).map(|j| values[m - 1 - j]).collect()
        });
    }

    // plain Fourier quadrature at pi/2 + pi Z (cot = 0 exactly, c = 1)
    let (cot, c_theta, inv_sin) = if (th - PI / 2.0).abs() < QUARTER_TURN_TOL {
        (0.0, Complex64::ONE, 1.0)
    } else if (th - 1.5 * PI).abs() < QUARTER_TURN_TOL {
        (0.0, Complex64::ONE, -1.0)
    } else {
        let p = FrftParams::new(th).expect("singular angles handled above");
        (th.cos() / th.sin(), p.c_theta, 1.0 / th.sin())
    };

    let nodes = grid.nodes();
    let weights = grid.weights();
    let chirped: Vec<Complex64> = values
        .iter()
        .zip(nodes)
        .zip(weights)
        .map(|((&v, &t), &w)| v * w * Complex64::cis(PI * t * t * cot))
        .collect();
    let out: Vec<Complex64> = nodes
        .par_iter()
        .map(|&xi| {
            let mut acc = Complex64::ZERO;
            for (&t, &cv) in nodes.iter().zip(&chirped) {
                acc += cv * Complex64::cis(-TAU * t * xi * inv_sin);
            }
            c_theta * Complex64::cis(PI * xi * xi * cot) * acc
        })
        .collect();
    Ok(out)
}

/// Padded-grid layout for representing rotated profiles.
#[derive(Debug, Clone, Copy)]
pub struct PadConfig {
    pub half_width: f64,
    pub nodes: usize,
}

impl PadConfig {
    /// Chooses the band and node count so that the rotated profile of a
    /// signal with band `b` can be probed at positions up to `max_x` and
    /// frequencies up to `max_omega`: the band covers the Gaussian window
    /// reach of every probe, the node count resolves the chirp bandwidth.
    pub fn auto(b: f64, theta: f64, max_x: f64, max_omega: f64) -> Self {
        let half_width = (4.0 * b.max(1.0)).max(b + max_omega.abs() + 4.5);
        let th = reduce_angle(theta);
        let s = th.sin();
        let chirp_rate = if s.abs() < SINGULAR_ANGLE_TOL {
            0.0
        } else {
            (th.cos() / s).abs() * half_width + b / s.abs()
        };
        let f_max = chirp_rate + max_x.abs() + 6.0;
        let wanted = (2.0 * half_width * f_max * 2.5).ceil() as usize;
        let nodes = wanted.max(1025) | 1;
        Self { half_width, nodes }
    }
}

/// ℱ_θ of a bandlimited signal, returned as a synthesizable signal.
///
/// Near multiples of π the result stays on the original grid (identity or
/// reflection of the profile); otherwise the transform of the quadrature
/// measure Σ P_j w_j δ_{η_j} is evaluated in closed form on the padded grid.
/// The second return value is the fraction of the transformed energy lying
/// outside the original band (the quantity lost if the result were truncated
/// back to [-B, B]).
pub fn frft_signal(
    f: &BandlimitedSignal,
    theta: f64,
    pad: &PadConfig,
) -> Result<(BandlimitedSignal, f64)> {
    let th = reduce_angle(theta);
    let k = (th / PI).round() as i64;
    if (th - k as f64 * PI).abs() < SINGULAR_ANGLE_TOL {
        let signal = if k.rem_euclid(2) == 0 {
            f.clone()
        } else {
            let m = f.values().len();
            let values = (0..m).map(|j| f.values()[m - 1 - j]).collect();
            BandlimitedSignal::new(f.grid().clone(), values, f.exponent())?
        };
        return Ok((signal, 0.0));
    }
    if pad.half_width < f.grid().half_width() {
        return Err(Error::SupportOverflow(
            "padded band narrower than the signal band".into(),
        ));
    }
    let params = FrftParams::new(th).expect("singular angles handled above");
    let s = th.sin();
    let cot = th.cos() / s;
    let pad_grid = FrequencyGrid::new(pad.half_width, pad.nodes)?;
    let atoms: Vec<Complex64> = f
        .values()
        .iter()
        .zip(f.grid().nodes())
        .zip(f.grid().weights())
        .map(|((&v, &eta), &w)| v * w * Complex64::cis(PI * eta * eta * cot))
        .collect();
    let eta_nodes = f.grid().nodes().to_vec();
    let values: Vec<Complex64> = pad_grid
        .nodes()
        .par_iter()
        .map(|&xi| {
            let mut acc = Complex64::ZERO;
            for (&a, &eta) in atoms.iter().zip(&eta_nodes) {
                acc += a * Complex64::cis(-TAU * eta * xi / s);
            }
            params.c_theta * Complex64::cis(PI * xi * xi * cot) * acc
        })
        .collect();
    let b = f.grid().half_width();
    let mut inside = 0.0;
    let mut total = 0.0;
    for ((&v, &xi), &w) in values.iter().zip(pad_grid.nodes()).zip(pad_grid.weights()) {
        let e = v.norm_sqr() * w;
        total += e;
        if xi.abs() <= b {
            inside += e;
        }
    }
    let leakage = if total > 0.0 {
        1.0 - inside / total
    } else {
        0.0
    };
    let signal = BandlimitedSignal::new(pad_grid, values, f.exponent())?;
    Ok((signal, leakage))
}

/// Max residual of the time-frequency rotation identity over the given
/// points, both sides computed by independent quadratures:
///
///   𝒢(ℱ_θ f)(x,ω) = e^{πi(x²-ω²)sinθcosθ - 2πixω sin²θ} · 𝒢f(R_θ(x,ω)).
pub fn rotation_identity_residual(
    f: &BandlimitedSignal,
    theta: f64,
    points: &[TfPoint],
    pad: &PadConfig,
) -> Result<f64> {
    let max_omega = points.iter().map(|p| p.omega.abs()).fold(0.0, f64::max);
    let th = reduce_angle(theta);
    let k = (th / PI).round() as i64;
    let generic = (th - k as f64 * PI).abs() >= SINGULAR_ANGLE_TOL;
    if generic && pad.half_width < max_omega + 4.0 {
        return Err(Error::SupportOverflow(format!(
            "padded band {} cannot absorb the window at |omega| = {max_omega}",
            pad.half_width
        )));
    }
    let (rotated, _) = frft_signal(f, theta, pad)?;
    let (s, c) = theta.sin_cos();
    let mut worst = 0.0f64;
    for &pt in points {
        let lhs = crate::gabor::gabor_transform(&rotated, pt.x, pt.omega);
        let phase = Complex64::cis(
            PI * (pt.x * pt.x - pt.omega * pt.omega) * s * c - TAU * pt.x * pt.omega * s * s,
        );
        let moved = rotate_point(theta, pt);
        let rhs = phase * crate::gabor::gabor_transform(f, moved.x, moved.omega);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
