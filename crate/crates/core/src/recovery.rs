//! Signal recovery from Gabor magnitude samples on a product set.
//!
//! The pipeline runs in three stages: (1) per frequency ω, the squared
//! magnitudes along X are inverted for the spectral autocorrelation A_ω on
//! the difference grid over [-2B, 2B]; (2) per offset ξ = d·δ, the Gaussian
//! system A_ω(ξ)·w^ξ = √2 e^{-πξ²/2} Σ_j R_ξ(η_j) e^{-2π(η_j+ω-ξ/2)²} w_j w_{j-d}
//! is solved across ω for the correlation field R_ξ(η) = P(η)·conj(P(η-ξ));
//! (3) the field is assembled into a Hermitian Gram matrix and its leading
//! eigenvector, anchored to a deterministic global phase, is the recovered
//! profile. Both inversions are ridge-regularized with ridge values relative
//! to the top normal-system eigenvalue, so the whole pipeline commutes with
//! positive scaling of the data.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frft::{rotate_product_set, TfPoint};
use crate::gabor::{magnitude_samples, ProductSamples};
use crate::grid::{FrequencyGrid, LebesgueExponent};
use crate::linalg::{
    deflated_spectral_radius, hermitian_leading_pair, solve_ridge_real, RidgeSolution,
};
use crate::sampling::{check_sampling_condition, PointSet, SpectralEstimate};
use crate::signal::{global_phase_distance, BandlimitedSignal, PhaseAlignment};

const PI: f64 = std::f64::consts::PI;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Recovered products R_ξ(η_j) ≈ P(η_j)·conj(P(η_j - ξ)) on the exact
/// difference set of the η-grid: offsets d ∈ {-(M-1), …, M-1} encode
/// ξ = d·δ, and entries outside the valid (η, η-ξ) range are exactly zero.
#[derive(Debug, Clone)]
pub struct CorrelationField {
    pub eta_grid: FrequencyGrid,
    /// `values[d + M - 1][j]` with zero entries outside the overlap.
    pub values: Vec<Vec<Complex64>>,
}

impl CorrelationField {
    pub fn zero(eta_grid: FrequencyGrid) -> Self {
        let m = eta_grid.len();
        Self {
            eta_grid,
            values: vec![vec![Complex64::ZERO; m]; 2 * m - 1],
        }
    }

    pub fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        let m = self.eta_grid.len() as i64;
        -(m - 1)..=(m - 1)
    }

    pub fn value(&self, d: i64, j: usize) -> Complex64 {
        let m = self.eta_grid.len() as i64;
        self.values[(d + m - 1) as usize][j]
    }

    fn overlap(&self, d: i64) -> std::ops::RangeInclusive<usize> {
        let m = self.eta_grid.len() as i64;
        (d.max(0) as usize)..=((m - 1 + d.min(0)) as usize)
    }

    /// Max relative defect of R_{-ξ}(η) = conj(R_ξ(η + ξ)).
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for d in self.offsets() {
            for j in self.overlap(d) {
                scale = scale.max(self.value(d, j).norm());
            }
        }
        if scale == 0.0 {
            return 0.0;
        }
        for d in self.offsets() {
            if d < 0 {
                continue;
            }
            for j in self.overlap(-d) {
                let lhs = self.value(-d, j);
                let rhs = self.value(d, j + d as usize).conj();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst / scale
    }

    /// Most negative value on the d = 0 slice relative to the field max
    /// (the slice is an energy density, so it should be ≥ -solver noise).
    pub fn diagonal_negativity(&self) -> f64 {
        let m = self.eta_grid.len();
        let max = self.values[m - 1]
            .iter()
            .map(|v| v.re)
            .fold(0.0f64, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let min = self.values[m - 1]
            .iter()
            .map(|v| v.re)
            .fold(f64::INFINITY, f64::min);
        (-min / max).max(0.0)
    }
}

/// Hermitian matrix form `K[j][j']` = R_{(j-j')·δ}(η_j) of a correlation field,
/// symmetrized by averaging; nominally rank one.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub matrix: DMatrix<Complex64>,
}

pub fn gram_from_field(field: &CorrelationField) -> GramMatrix {
    let m = field.eta_grid.len();
    let raw = DMatrix::from_fn(m, m, |j, jp| field.value(j as i64 - jp as i64, j));
    let matrix = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    GramMatrix { matrix }
}

/// Stage diagnostics and the final extraction quality of one recovery run.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub stage1_residuals: Vec<f64>,
    pub stage1_conditions: Vec<f64>,
    pub stage2_residuals: Vec<f64>,
    pub stage2_conditions: Vec<f64>,
    pub rank_ratio: f64,
    pub anchor_index: i64,
    pub ridge_used: (f64, f64),
    pub hermitian_defect: f64,
    pub warnings: Vec<String>,
    pub truth_distance: Option<PhaseAlignment>,
}

/// Pipeline parameters: η-grid size and the per-stage relative ridges.
#[derive(Debug, Clone, Copy)]
pub struct RecoveryConfig {
    pub m: usize,
    pub ridge1: f64,
    pub ridge2: f64,
}

/// Stage 1: per-ω inversion of squared magnitudes for the slice
/// autocorrelations on the [-2B, 2B] difference grid. The design depends
/// only on X and the grid, so one factorization serves every ω.
pub fn recover_autocorrelations(
    samples: &ProductSamples,
    m: usize,
    ridge1: f64,
) -> Result<Vec<SpectralEstimate>> {
    let xs = samples.positions();
    let xi_grid = FrequencyGrid::new(2.0 * samples.band(), 2 * m - 1)?;
    let design = crate::sampling::design_matrix(&xi_grid, xs.iter().cloned());
    let solver = crate::linalg::ComplexRidgeSolver::new(design);
    (0..samples.frequencies().len())
        .into_par_iter()
        .map(|k| {
            let rhs: Vec<Complex64> = (0..xs.len())
                .map(|i| {
                    let mag = samples.magnitude(i, k);
                    Complex64::new(mag * mag, 0.0)
                })
                .collect();
            let sol = solver.solve(&rhs, ridge1)?;
            Ok(SpectralEstimate {
                xi_grid: xi_grid.clone(),
                coefficients: sol.coefficients,
                residual: sol.residual,
                condition: sol.condition,
            })
        })
        .collect()
}

/// Stage 2: per-offset Gaussian-dictionary inversion of the autocorrelation
/// data across ω for the correlation field.
pub fn recover_correlation_field(
    estimates: &[SpectralEstimate],
    omega: &[f64],
    b: f64,
    m: usize,
    ridge2: f64,
) -> Result<(CorrelationField, Vec<f64>, Vec<f64>)> {
    if estimates.is_empty() || estimates.len() != omega.len() {
        return Err(Error::InvalidArgument(
            "one autocorrelation estimate per frequency is required".into(),
        ));
    }
    let eta_grid = FrequencyGrid::new(b, m)?;
    let xi_grid = FrequencyGrid::new(2.0 * b, 2 * m - 1)?;
    for est in estimates {
        if !est.xi_grid.same_layout(&xi_grid) {
            return Err(Error::GridMismatch(
                "autocorrelation estimates must live on the difference grid".into(),
            ));
        }
    }
    let w = eta_grid.weights();
    let rows: Vec<(Vec<Complex64>, f64, f64)> = (0..2 * m - 1)
        .into_par_iter()
        .map(|od| -> Result<(Vec<Complex64>, f64, f64)> {
            let d = od as i64 - (m as i64 - 1);
            let xi = xi_grid.node(od);
            let lo = d.max(0) as usize;
            let hi = (m as i64 - 1 + d.min(0)) as usize;
            let cols = hi - lo + 1;
            let front = SQRT_2 * (-PI * xi * xi / 2.0).exp();
            let design = DMatrix::from_fn(omega.len(), cols, |k, jj| {
                let j = lo + jj;
                let arg = eta_grid.node(j) + omega[k] - xi / 2.0;
                front * (-2.0 * PI * arg * arg).exp() * w[j] * w[(j as i64 - d) as usize]
            });
            let rhs: Vec<Complex64> = estimates
                .iter()
                .map(|est| est.coefficients[od] * xi_grid.weight(od))
                .collect();
            let RidgeSolution {
                coefficients,
                condition,
                residual,
            } = solve_ridge_real(&design, &rhs, ridge2)?;
            let mut row = vec![Complex64::ZERO; m];
            for (jj, &c) in coefficients.iter().enumerate() {
                row[lo + jj] = c;
            }
            Ok((row, residual, condition))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut field = CorrelationField::zero(eta_grid);
    let mut residuals = Vec::with_capacity(rows.len());
    let mut conditions = Vec::with_capacity(rows.len());
    for (od, (row, res, cond)) in rows.into_iter().enumerate() {
        field.values[od] = row;
        residuals.push(res);
        conditions.push(cond);
    }
    Ok((field, residuals, conditions))
}

/// Output of the rank-one extraction stage.
#[derive(Debug, Clone)]
pub struct RankOneExtraction {
    pub profile: Vec<Complex64>,
    pub rank_ratio: f64,
    /// Index of the anchored node, -1 for the zero field.
    pub anchor_index: i64,
}

/// Leading-eigenvector extraction from the (symmetrized) Gram of the field,
/// scaled so the grid-weighted norm matches the field diagonal and anchored
/// so the largest-diagonal entry is real and nonnegative.
pub fn rank_one_extract(field: &CorrelationField) -> Result<RankOneExtraction> {
    let m = field.eta_grid.len();
    let gram = gram_from_field(field);
    let k = &gram.matrix;
    let scale_max = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale_max == 0.0 {
        return Ok(RankOneExtraction {
            profile: vec![Complex64::ZERO; m],
            rank_ratio: 0.0,
            anchor_index: -1,
        });
    }
    let (lambda1, v) = hermitian_leading_pair(k, 1e-12, 10 * m)
        .ok_or_else(|| Error::DegenerateField("empty gram matrix".into()))?;
    if lambda1 <= 0.0 {
        return Err(Error::DegenerateField(format!(
            "leading eigenvalue {lambda1:.3e} is not positive"
        )));
    }
    let rank_ratio = deflated_spectral_radius(k, lambda1, &v, 1e-12, 10 * m) / lambda1;

    let w = field.eta_grid.weights();
    let diag_mass: f64 = (0..m).map(|j| k[(j, j)].re.max(0.0) * w[j]).sum();
    let v_mass: f64 = (0..m).map(|j| v[j].norm_sqr() * w[j]).sum();
    let scale = if v_mass > 0.0 {
        (diag_mass / v_mass).sqrt()
    } else {
        0.0
    };
    let mut profile: Vec<Complex64> = (0..m).map(|j| v[j] * scale).collect();

    let mut anchor = 0usize;
    for j in 1..m {
        if k[(j, j)].re > k[(anchor, anchor)].re {
            anchor = j;
        }
    }
    let a = profile[anchor];
    if a.norm() > 0.0 {
        let phase = a / a.norm();
        for p in &mut profile {
            *p /= phase;
        }
    }
    Ok(RankOneExtraction {
        profile,
        rank_ratio,
        anchor_index: anchor as i64,
    })
}

/// Full pipeline: magnitude samples on X × Ω to the signal up to global phase.
/// `x_set` is the declared sampling set (its declared pattern drives the
/// density check; a failed check is a warning, not an error).
pub fn recover_signal(
    samples: &ProductSamples,
    x_set: &PointSet,
    config: &RecoveryConfig,
) -> Result<(BandlimitedSignal, RecoveryReport)> {
    if x_set.points() != samples.positions() {
        return Err(Error::MalformedInput(
            "declared point set does not match the sample positions".into(),
        ));
    }
    let b = samples.band();
    let mut warnings = Vec::new();
    if !check_sampling_condition(x_set, b, 4) {
        warnings.push(format!(
            "sampling set density does not exceed 4B = {} (declared lattices need step < 1/(4B))",
            4.0 * b
        ));
    }
    if samples.frequencies().len() < config.m {
        warnings.push(format!(
            "{} frequencies for {} unknowns per offset: dictionary stage is underdetermined",
            samples.frequencies().len(),
            config.m
        ));
    }
    let omegas = samples.frequencies();
    if omegas.first().is_some_and(|&lo| lo > 0.0) || omegas.last().is_some_and(|&hi| hi < 0.0) {
        warnings.push(
            "frequency set lies on one side of 0; the dictionary centers cannot cover the band \
             and the second stage is ill-conditioned"
                .into(),
        );
    }

    let estimates = recover_autocorrelations(samples, config.m, config.ridge1)?;
    let stage1_residuals: Vec<f64> = estimates.iter().map(|e| e.residual).collect();
    let stage1_conditions: Vec<f64> = estimates.iter().map(|e| e.condition).collect();

    let (field, stage2_residuals, stage2_conditions) = recover_correlation_field(
        &estimates,
        samples.frequencies(),
        b,
        config.m,
        config.ridge2,
    )?;

    let extraction = rank_one_extract(&field)?;
    let signal = BandlimitedSignal::new(
        field.eta_grid.clone(),
        extraction.profile,
        LebesgueExponent::TWO,
    )?;
    let report = RecoveryReport {
        stage1_residuals,
        stage1_conditions,
        stage2_residuals,
        stage2_conditions,
        rank_ratio: extraction.rank_ratio,
        anchor_index: extraction.anchor_index,
        ridge_used: (config.ridge1, config.ridge2),
        hermitian_defect: field.hermitian_defect(),
        warnings,
        truth_distance: None,
    };
    Ok((signal, report))
}

/// A recovered representative of a rotated signal class: the measured signal
/// is the (-θ)-rotation of the band-supported profile `base`.
#[derive(Debug, Clone)]
pub struct RotatedSignal {
    pub base: BandlimitedSignal,
    pub theta: f64,
}

/// Recovery from magnitudes on the rotated product set R_θ(Ω × X), in the
/// row-major order produced by `rotate_product_set`. The rotation is undone
/// on the sample coordinates (magnitudes carry no rotation phase), the axes
/// are swapped through the quarter-turn case, and the product-set pipeline
/// runs on X × (-Ω).
pub fn recover_rotated(
    points: &[TfPoint],
    magnitudes: &[f64],
    theta: f64,
    omega: &[f64],
    x_set: &PointSet,
    b: f64,
    config: &RecoveryConfig,
) -> Result<(RotatedSignal, RecoveryReport)> {
    let expected = rotate_product_set(theta, omega, x_set.points());
    if points.len() != expected.len() || magnitudes.len() != expected.len() {
        return Err(Error::MalformedInput(format!(
            "expected {} rotated samples, got {} coordinates / {} magnitudes",
            expected.len(),
            points.len(),
            magnitudes.len()
        )));
    }
    for (got, want) in points.iter().zip(&expected) {
        if (got.x - want.x).abs() > 1e-9 || (got.omega - want.omega).abs() > 1e-9 {
            return Err(Error::MalformedInput(format!(
                "sample coordinate ({}, {}) is not on the declared rotated product set",
                got.x, got.omega
            )));
        }
    }
    let n_omega = omega.len();
    let n_x = x_set.len();
    // |𝒢(base-class)(ω_i, x_k)| = m[i,k]; the quarter turn maps this to
    // product data at (x_k, -ω_i), so Ω flips sign and reverses.
    let omega_swapped: Vec<f64> = omega.iter().rev().map(|&om| -om).collect();
    let mut swapped = vec![0.0; n_x * n_omega];
    for i in 0..n_omega {
        for k in 0..n_x {
            let dst_omega = n_omega - 1 - i;
            swapped[k * n_omega + dst_omega] = magnitudes[i * n_x + k];
        }
    }
    let product = ProductSamples::new(x_set.points().to_vec(), omega_swapped, swapped, b)?;
    let (base, report) = recover_signal(&product, x_set, config)?;
    Ok((RotatedSignal { base, theta }, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessVerdict {
    Equivalent,
    Distinct,
    /// Magnitudes agree within tolerance but the signals do not: a numerical
    /// near-violation of uniqueness worth inspecting, never discarded.
    Inconsistent,
}

/// Two-sided numerical check of the uniqueness equivalence.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessRecord {
    pub max_magnitude_gap: f64,
    pub phase_distance: f64,
    pub h_field_max: f64,
    pub verdict: UniquenessVerdict,
}

/// Compares |𝒢f| and |𝒢g| on X × Ω against the global-phase distance of the
/// profiles, and reports the largest correlation-difference entry
/// H_ξ(η) = P_f(η)conj(P_f(η-ξ)) - P_g(η)conj(P_g(η-ξ)).
pub fn verify_uniqueness(
    f: &BandlimitedSignal,
    g: &BandlimitedSignal,
    x: &[f64],
    omega: &[f64],
    tol: f64,
) -> Result<UniquenessRecord> {
    if !f.grid().same_layout(g.grid()) {
        return Err(Error::GridMismatch(
            "uniqueness check needs a shared grid".into(),
        ));
    }
    let mf = magnitude_samples(f, x, omega)?;
    let mg = magnitude_samples(g, x, omega)?;
    let max_magnitude_gap = mf.max_gap(&mg)?;
    let phase_distance = global_phase_distance(f, g)?.distance;

    let m = f.grid().len();
    let mut h_field_max = 0.0f64;
    for d in -(m as i64 - 1)..=(m as i64 - 1) {
        let lo = d.max(0) as usize;
        let hi = (m as i64 - 1 + d.min(0)) as usize;
        for j in lo..=hi {
            let l = (j as i64 - d) as usize;
            let hf = f.values()[j] * f.values()[l].conj();
            let hg = g.values()[j] * g.values()[l].conj();
            h_field_max = h_field_max.max((hf - hg).norm());
        }
    }
    let verdict = if max_magnitude_gap > tol {
        UniquenessVerdict::Distinct
    } else if phase_distance > 100.0 * tol {
        UniquenessVerdict::Inconsistent
    } else {
        UniquenessVerdict::Equivalent
    };
    Ok(UniquenessRecord {
        max_magnitude_gap,
        phase_distance,
        h_field_max,
        verdict,
    })
}
